use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{member_mu, LocalSpace, MembershipOptions, Method, SoficWindow, Volume};
use crate::error::{Error, Result};
use crate::rng::{stream, DEFAULT_SEED};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct SoficOptions {
    /// Monte Carlo sample size.
    pub n_points: usize,
    pub membership: MembershipOptions,
    pub seed: u64,
    /// Skip fraction oracles and carrier enumeration.
    pub force_monte_carlo: bool,
}

impl Default for SoficOptions {
    fn default() -> Self {
        Self { n_points: 10_000, membership: MembershipOptions::default(), seed: DEFAULT_SEED, force_monte_carlo: false }
    }
}

impl SoficOptions {
    pub fn seeded(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    pub fn monte_carlo(n_points: usize, seed: u64) -> Self {
        Self {
            n_points,
            seed,
            force_monte_carlo: true,
            // many points, lighter per-point test
            membership: MembershipOptions { prefer_exact: false, n_pairs: 64, ..MembershipOptions::default() },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn of(pass: bool) -> Self {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SoficReport {
    pub space: String,
    pub fraction: f64,
    pub epsilon: f64,
    pub verdict: Verdict,
    pub method: Method,
    pub n_points: usize,
    pub n_group_samples: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
}

/// Measures `vol(M[U]) / vol(M)` and compares it with `1 − ε`.
pub fn sofic_check<T: Scalar, M: LocalSpace<T> + ?Sized>(m: &M, w: &SoficWindow<T>, opts: &SoficOptions) -> Result<SoficReport> {
    if let Volume::Infinite = m.total_volume() {
        return Err(Error::InfiniteVolume(m.name()));
    }
    let eps = w.epsilon.as_f64();
    let report = |fraction: f64, method, n_points, n_group_samples, stderr| SoficReport {
        space: m.name(),
        fraction,
        epsilon: eps,
        verdict: Verdict::of(fraction >= 1.0 - eps),
        method,
        n_points,
        n_group_samples,
        seed: opts.seed,
        stderr,
    };
    if !opts.force_monte_carlo && opts.membership.prefer_exact {
        if let Some(f) = m.fraction_oracle(&w.set) {
            return Ok(report(f.as_f64(), Method::Exact, 0, 0, None));
        }
    }
    let n_pairs = opts.membership.n_pairs;
    if !opts.force_monte_carlo {
        if let Some(points) = m.carrier() {
            let res: Vec<(bool, Method)> = points
                .par_iter()
                .enumerate()
                .map(|(i, p)| {
                    let mut rng = stream(opts.seed, i as u64);
                    let r = member_mu(m, p, &w.set, &opts.membership, &mut rng);
                    (r.member, r.method)
                })
                .collect();
            let method = res.iter().fold(Method::Exact, |acc, r| acc.and(r.1));
            let count = res.iter().filter(|r| r.0).count();
            let stderr = (method == Method::Statistical).then_some(0.0);
            let n = points.len().max(1);
            return Ok(report(count as f64 / n as f64, method, points.len(), if method == Method::Exact { 0 } else { n_pairs }, stderr));
        }
    }
    if opts.n_points == 0 {
        return Err(Error::InvalidParams("Monte Carlo needs n_points > 0".into()));
    }
    let hits: usize = (0..opts.n_points)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(opts.seed, i as u64);
            let p = m.sample_point(&mut rng);
            member_mu(m, &p, &w.set, &opts.membership, &mut rng).member as usize
        })
        .sum();
    let n = opts.n_points as f64;
    let f = hits as f64 / n;
    Ok(report(f, Method::Statistical, opts.n_points, n_pairs, Some((f * (1.0 - f) / n).sqrt())))
}
