use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{injective_on, LocalSpace, MembershipOptions, SpacePoint, WindowSet};
use crate::group::GroupElement;
use crate::rng::stream;
use crate::scalar::Scalar;

const MAX_WITNESSES: usize = 5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub point: Vec<f64>,
    pub elements: Vec<Vec<f64>>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomResult {
    pub axiom: u8,
    pub checked: usize,
    pub violations: usize,
    pub passed: bool,
    pub witnesses: Vec<Witness>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub space: String,
    pub n_points: usize,
    pub n_group: usize,
    pub seed: u64,
    pub passed: bool,
    pub axioms: Vec<AxiomResult>,
}

impl AxiomReport {
    pub fn axiom(&self, k: u8) -> &AxiomResult {
        &self.axioms[(k - 1) as usize]
    }
}

#[derive(Default)]
struct Tally {
    checked: [usize; 4],
    violations: [usize; 4],
    witnesses: [Vec<Witness>; 4],
}

impl Tally {
    fn record(&mut self, k: usize, ok: bool, w: impl FnOnce() -> Witness) {
        self.checked[k] += 1;
        if !ok {
            self.violations[k] += 1;
            if self.witnesses[k].len() < MAX_WITNESSES {
                self.witnesses[k].push(w());
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for k in 0..4 {
            self.checked[k] += other.checked[k];
            self.violations[k] += other.violations[k];
            for w in other.witnesses[k].iter() {
                if self.witnesses[k].len() < MAX_WITNESSES {
                    self.witnesses[k].push(w.clone());
                }
            }
        }
        self
    }
}

/// Tests Axioms 1-3 pointwise on sampled points and elements, and Axiom 4 as
/// injectivity of `g ↦ p.g` on some ball of a shrinking sequence.
pub fn check_axioms<T: Scalar, M: LocalSpace<T> + ?Sized>(m: &M, n_points: usize, n_group: usize, seed: u64) -> AxiomReport {
    let group = m.group();
    let coords = |g: &GroupElement<T>| group.to_coords(g);
    let id = group.identity();
    let scale = m.sampling_scale();
    let opts = MembershipOptions { n_pairs: 0, n_net: 48, ..MembershipOptions::default() };
    let tally = (0..n_points)
        .into_par_iter()
        .map(|i| {
            let mut t = Tally::default();
            let mut rng = stream(seed, i as u64);
            let p = m.sample_point(&mut rng);
            let wit = |p: &SpacePoint<T>, gs: &[&GroupElement<T>], detail: &str| Witness {
                point: p.to_f64(),
                elements: gs.iter().map(|g| coords(g)).collect(),
                detail: detail.to_string(),
            };
            let a1 = matches!(m.act(&p, &id), Some(q) if m.same_point(&q, &p));
            t.record(0, a1, || wit(&p, &[&id], "p.1 != p"));
            for j in 0..n_group {
                let r = scale / T::of_i64(1 << (j % 5));
                let g = group.sample_ball(&id, r, &mut rng);
                let h = group.sample_ball(&id, r, &mut rng);
                if let Some(q) = m.act(&p, &g) {
                    let back = m.act(&q, &group.inv(&g));
                    let ok = matches!(back, Some(ref b) if m.same_point(b, &p));
                    t.record(1, ok, || wit(&p, &[&g], "p.g.g^-1 != p"));
                    let gh = group.mul(&g, &h);
                    if let (Some(a), Some(b)) = (m.act(&q, &h), m.act(&p, &gh)) {
                        t.record(2, m.same_point(&a, &b), || wit(&p, &[&g, &h], "p.g.h != p.gh"));
                    }
                }
            }
            let r0 = m.chart_radius(&p).min(scale);
            let ok = r0 > T::zero()
                && (0..12).any(|k| {
                    let rho = r0 / T::of_i64(1 << k);
                    injective_on(m, &p, &WindowSet::ball(rho), &opts, &mut rng).member
                });
            t.record(3, ok, || wit(&p, &[], "no ball of the shrinking sequence acts injectively"));
            t
        })
        .reduce(Tally::default, Tally::merge);
    let axioms: Vec<AxiomResult> = (0..4)
        .map(|k| AxiomResult {
            axiom: k as u8 + 1,
            checked: tally.checked[k],
            violations: tally.violations[k],
            passed: tally.violations[k] == 0,
            witnesses: tally.witnesses[k].clone(),
        })
        .collect();
    AxiomReport { space: m.name(), n_points, n_group, seed, passed: axioms.iter().all(|a| a.passed), axioms }
}
