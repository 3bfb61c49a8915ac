use serde::{Deserialize, Serialize};

use super::{LocalSpace, SpacePoint};
use crate::group::GroupElement;
use crate::rng::{seeded, uniform};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitionReport {
    pub passed: bool,
    /// No sampled point lay in both chart domains.
    pub vacuous: bool,
    pub n_samples: usize,
    /// Distinct values of `τ = f_q(r) f_p(r)⁻¹`.
    pub translations: Vec<Vec<f64>>,
    /// Distinct values of `ℓ(q) τ ℓ(p)⁻¹`, which must lie in the lattice.
    pub lattice_elements: Vec<Vec<f64>>,
    /// Largest change of `τ` under a small perturbation of `r`.
    pub max_local_variation: f64,
    pub failures: Vec<String>,
}

fn push_distinct<T: Scalar>(out: &mut Vec<GroupElement<T>>, g: GroupElement<T>, eq: impl Fn(&GroupElement<T>, &GroupElement<T>) -> bool) {
    if !out.iter().any(|h| eq(h, &g)) {
        out.push(g);
    }
}

/// Samples `r` in the overlap of the charts at `p` and `q` and checks that
/// `f_q(r) f_p(r)⁻¹` is locally constant, with lattice-valued lift when the space is a
/// quotient.
pub fn chart_transition_check<T: Scalar, M: LocalSpace<T> + ?Sized>(m: &M, p: &SpacePoint<T>, q: &SpacePoint<T>, n: usize, seed: u64) -> TransitionReport {
    let group = m.group();
    let mut rng = seeded(seed);
    let rp = m.chart_radius(p);
    let tol = T::coord_tol();
    let mut taus: Vec<GroupElement<T>> = Vec::new();
    let mut gammas: Vec<GroupElement<T>> = Vec::new();
    let mut failures = Vec::new();
    let mut max_var = T::zero();
    let mut n_samples = 0;
    let transition = |r: &SpacePoint<T>| -> Option<GroupElement<T>> {
        let fp = m.chart_forward(p, r)?;
        let fq = m.chart_forward(q, r)?;
        Some(group.mul(&fq, &group.inv(&fp)))
    };
    let lifts = (m.coset_lift(p), m.coset_lift(q));
    for _ in 0..n * 50 {
        if n_samples == n {
            break;
        }
        let g = group.sample_ball(&group.identity(), rp, &mut rng);
        let Some(r) = m.act(p, &g) else { continue };
        let Some(tau) = transition(&r) else { continue };
        n_samples += 1;
        // Local constancy: perturb r inside both charts.
        for _ in 0..4 {
            let d = group.sample_ball(&group.identity(), rp * T::lit(1e-3) * uniform(&mut rng, T::lit(0.1), T::one()), &mut rng);
            let Some(r2) = m.act(&r, &d) else { continue };
            let Some(tau2) = transition(&r2) else { continue };
            let var = group.dist(&tau, &tau2);
            if var > tol * (T::one() + group.norm(&tau)) {
                // A jump across the edge of the overlap disappears at a finer scale;
                // genuine variation does not.
                let d = group.sample_ball(&group.identity(), rp * T::lit(1e-6), &mut rng);
                let persists = m.act(&r, &d).and_then(|r3| transition(&r3)).map_or(false, |t3| group.dist(&tau, &t3) > tol * (T::one() + group.norm(&tau)));
                if persists {
                    max_var = max_var.max(var);
                    failures.push(format!("transition varies by {var} near {:?}", r.to_f64()));
                }
            } else {
                max_var = max_var.max(var);
            }
        }
        if let (Some(lp), Some(lq)) = &lifts {
            let gamma = group.mul(&group.mul(lq, &tau), &group.inv(lp));
            let gamma = snap(gamma);
            if !m.in_lattice(&gamma) {
                failures.push(format!("lift {:?} not in the lattice", group.to_coords(&gamma)));
            }
            push_distinct(&mut gammas, gamma, |a, b| group.dist(a, b) < T::lit(1e-6));
        }
        push_distinct(&mut taus, tau, |a, b| group.dist(a, b) < T::lit(1e-6));
    }
    failures.truncate(10);
    TransitionReport {
        passed: failures.is_empty(),
        vacuous: n_samples == 0,
        n_samples,
        translations: taus.iter().map(|t| group.to_coords(t)).collect(),
        lattice_elements: gammas.iter().map(|t| group.to_coords(t)).collect(),
        max_local_variation: max_var.as_f64(),
        failures,
    }
}

/// Rounds coordinates within the tolerance of an integer, removing float noise from
/// lattice elements before they are reported.
fn snap<T: Scalar>(mut g: GroupElement<T>) -> GroupElement<T> {
    for x in g.reals.iter_mut() {
        let r = x.round();
        if (*x - r).abs() < T::coord_tol() * (T::one() + r.abs()) {
            *x = r;
        }
    }
    g
}
