use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{member_mu, LocalSpace, MembershipOptions, Method, SpacePoint, Volume, WindowSet};
use crate::error::{Error, Result};
use crate::rng::stream;
use crate::scalar::Scalar;

/// Largest `ρ ≤ rho_max` (to within `tol`) with `p ∈ M[B(ρ)]`, by bisection.
///
/// The returned value is certified from below by the membership test; an exact
/// oracle is used instead when the construction has one and `opts.prefer_exact`.
pub fn injectivity_radius<T: Scalar, M: LocalSpace<T> + ?Sized>(
    m: &M,
    p: &SpacePoint<T>,
    rho_max: T,
    tol: T,
    opts: &MembershipOptions,
    seed: u64,
) -> T {
    if opts.prefer_exact {
        if let Some(r) = m.injrad_oracle(p) {
            return r.min(rho_max);
        }
    }
    let mut step = 0u64;
    let mut holds = |rho: T| {
        step += 1;
        let mut rng = stream(seed, step);
        member_mu(m, p, &WindowSet::ball(rho), opts, &mut rng).member
    };
    if holds(rho_max) {
        return rho_max;
    }
    let (mut lo, mut hi) = (T::zero(), rho_max);
    while hi - lo > tol {
        let mid = (lo + hi) / T::lit(2.0);
        if holds(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub space_id: usize,
    pub space: String,
    pub rho: f64,
    pub fraction: f64,
    pub method: Method,
}

impl ProfileRow {
    pub const CSV_HEADER: &'static str = "space_id,rho,fraction";

    pub fn csv(&self) -> String {
        format!("{},{},{}", self.space_id, self.rho, self.fraction)
    }
}

/// For each space, the volume fraction of points whose injectivity radius reaches `ρ`,
/// i.e. of `M[B(ρ)]`.
pub fn injrad_profile<T: Scalar>(
    spaces: &[&dyn LocalSpace<T>],
    rho: T,
    n_points: usize,
    opts: &MembershipOptions,
    seed: u64,
) -> Result<Vec<ProfileRow>> {
    let u = WindowSet::ball(rho);
    spaces
        .iter()
        .enumerate()
        .map(|(id, m)| {
            if let Volume::Infinite = m.total_volume() {
                return Err(Error::InfiniteVolume(m.name()));
            }
            let row = |fraction: T, method| ProfileRow { space_id: id, space: m.name(), rho: rho.as_f64(), fraction: fraction.as_f64(), method };
            if opts.prefer_exact {
                if let Some(f) = m.injrad_fraction_oracle(rho) {
                    return Ok(row(f, Method::Exact));
                }
            }
            let seed = seed ^ (id as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
            let (hits, total, method) = if let Some(points) = m.carrier() {
                let res: Vec<(bool, Method)> = points
                    .par_iter()
                    .enumerate()
                    .map(|(i, p)| {
                        let r = member_mu(*m, p, &u, opts, &mut stream(seed, i as u64));
                        (r.member, r.method)
                    })
                    .collect();
                let method = res.iter().fold(Method::Exact, |a, r| a.and(r.1));
                (res.iter().filter(|r| r.0).count(), points.len(), method)
            } else {
                let hits = (0..n_points)
                    .into_par_iter()
                    .map(|i| {
                        let mut rng = stream(seed, i as u64);
                        let p = m.sample_point(&mut rng);
                        member_mu(*m, &p, &u, opts, &mut rng).member as usize
                    })
                    .sum();
                (hits, n_points, Method::Statistical)
            };
            Ok(row(T::of_i64(hits as i64) / T::of_i64(total.max(1) as i64), method))
        })
        .collect()
}
