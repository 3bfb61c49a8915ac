use rand::{Rng, RngCore};
use rayon::prelude::*;

use super::discrete::DiscreteSoficMap;
use super::discrete_local::{discrete_to_local, DiscreteLocalSpace};
use super::lattice::FundamentalDomain;
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupKind, GroupModel};
use crate::rng::uniform;
use crate::scalar::Scalar;
use crate::space::{LocalSpace, SpacePoint, Volume, WindowSet};

/// `V × Γ\G` for `Γ = ℤⁿ ≤ G = ℝⁿ`, with `(v, x).g = (v.c(x,g), x·g)` where
/// `v.γ = σ(γ)⁻¹v` on the injectivity-radius domain of `V`.
#[derive(Clone, Debug)]
pub struct InducedSpace<T: Scalar> {
    base: DiscreteLocalSpace<T>,
    domain: FundamentalDomain<T>,
    group: GroupModel<T>,
    cells: Vec<Vec<i64>>,
}

pub fn induce_from_lattice<T: Scalar>(v: &DiscreteSoficMap, domain: &FundamentalDomain<T>, g: &GroupModel<T>) -> Result<InducedSpace<T>> {
    let n = domain.dim();
    match (v.group_kind(), g.kind()) {
        (GroupKind::IntegerLattice(a), GroupKind::RealVector(b)) if *a == n && *b == n => {}
        (k, h) => return Err(Error::UnregisteredPair(format!("lattice {k} in {h} with a {n}-dimensional domain"))),
    }
    let base = discrete_to_local(v)?;
    let side = 3i64;
    let cells = (0..side.pow(n as u32))
        .map(|mut k| {
            (0..n)
                .map(|_| {
                    let c = k % side - 1;
                    k /= side;
                    c
                })
                .collect()
        })
        .collect();
    Ok(InducedSpace { base, domain: domain.clone(), group: g.clone(), cells })
}

impl<T: Scalar> InducedSpace<T> {
    pub fn base(&self) -> &DiscreteLocalSpace<T> {
        &self.base
    }

    pub fn domain(&self) -> &FundamentalDomain<T> {
        &self.domain
    }

    fn carrier_size(&self) -> usize {
        self.base.map().carrier_size()
    }

    /// `v.γ` on `V`.
    pub fn alpha(&self, v: usize, gamma: &[i64]) -> Option<usize> {
        let i = self.base.map().index_of(gamma)?;
        self.base.act_index(v, i)
    }

    fn split(&self, p: &SpacePoint<T>) -> Option<(usize, Vec<T>)> {
        match p.labels.as_slice() {
            [v] if *v >= 0 && (*v as usize) < self.carrier_size() && p.coords.len() == self.domain.dim() => {
                Some((*v as usize, p.coords.to_vec()))
            }
            _ => None,
        }
    }

    fn point(v: usize, x: &[T]) -> SpacePoint<T> {
        SpacePoint::new(&[v as i64], x)
    }

    /// Exact `p ∈ M[(u1, u2)]` on the line.
    fn member_interval(&self, v: usize, x: T, u1: T, u2: T) -> bool {
        let s = self.domain.offset[0];
        let y = x - s;
        let (a_lo, a_hi) = ((y + u1).floor(), (y + u2).ceil() - T::one());
        let (a_lo, a_hi) = (a_lo.to_i64().unwrap_or(0), a_hi.to_i64().unwrap_or(0));
        let cell = |a: i64| {
            let a = T::of_i64(a);
            (u1.max(a - y), u2.min(a + T::one() - y))
        };
        let range: Vec<i64> = (a_lo..=a_hi).filter(|&a| {
            let (lo, hi) = cell(a);
            lo < hi
        }).collect();
        let mut image = Vec::with_capacity(range.len());
        for &a in &range {
            match self.alpha(v, &[a]) {
                Some(w) => image.push(w),
                None => return false,
            }
        }
        for (i, &a1) in range.iter().enumerate() {
            let (lo1, hi1) = cell(a1);
            for (j, &a2) in range.iter().enumerate() {
                if i == j {
                    continue;
                }
                let m = T::of_i64(a2 - a1);
                if lo1.max(u1 - m) < hi1.min(u2 - m) && image[i] == image[j] {
                    return false;
                }
            }
        }
        for (i, &a) in range.iter().enumerate() {
            let (lo_a, hi_a) = cell(a);
            for (j, &t) in range.iter().enumerate() {
                let (lo_t, hi_t) = cell(t);
                if !(lo_t - hi_a < u2 && hi_t - lo_a > u1) {
                    continue;
                }
                if self.alpha(image[i], &[t - a]) != Some(image[j]) {
                    return false;
                }
            }
        }
        true
    }

    /// The interval `(u1, u2)` when `u` is one ball on the line.
    fn interval(&self, u: &WindowSet<T>) -> Option<(T, T)> {
        if self.domain.dim() != 1 {
            return None;
        }
        let b = u.as_ball(&self.group)?;
        let c = b.center_or_identity(&self.group).reals[0];
        Some((c - b.radius, c + b.radius))
    }

    /// `vol(M[(u1,u2)]) / vol(M)` by integrating over the cells on which the
    /// membership pattern is constant.
    fn fraction_interval(&self, u1: T, u2: T) -> T {
        let s = self.domain.offset[0];
        let mut cuts: Vec<T> = vec![T::zero(), T::one()];
        for i in -2..=2 {
            for j in -2..=2 {
                let e = T::of_i64(i) * u1 + T::of_i64(j) * u2;
                cuts.push(e - e.floor());
            }
        }
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.dedup_by(|a, b| (*a - *b).abs() < T::epsilon());
        let pieces: Vec<(T, T)> = cuts.windows(2).map(|w| ((w[0] + w[1]) / T::lit(2.0), w[1] - w[0])).filter(|p| p.1 > T::zero()).collect();
        let total: T = (0..self.carrier_size())
            .into_par_iter()
            .map(|v| pieces.iter().filter(|(mid, _)| self.member_interval(v, s + *mid, u1, u2)).map(|p| p.1).sum::<T>())
            .collect::<Vec<T>>()
            .into_iter()
            .sum();
        total / T::of_i64(self.carrier_size() as i64)
    }
}

impl<T: Scalar> LocalSpace<T> for InducedSpace<T> {
    fn name(&self) -> String {
        format!("induced({}, |V|={})", self.group.name(), self.carrier_size())
    }

    fn group(&self) -> &GroupModel<T> {
        &self.group
    }

    fn act(&self, p: &SpacePoint<T>, g: &GroupElement<T>) -> Option<SpacePoint<T>> {
        let (v, x) = self.split(p)?;
        let moved: Vec<T> = x.iter().zip(&g.reals).map(|(&a, &b)| a + b).collect();
        let c = self.domain.lattice_part(&moved).ok()?;
        let w = self.alpha(v, &c)?;
        Some(Self::point(w, &self.domain.section(&moved).ok()?))
    }

    /// Coordinates outside `Δ` are read as `(v, s)` moved by `x − s`.
    fn make_point(&self, labels: &[i64], coords: &[T]) -> Option<SpacePoint<T>> {
        let v = match labels {
            [v] if *v >= 0 && (*v as usize) < self.carrier_size() => *v as usize,
            _ => return None,
        };
        let c = self.domain.lattice_part(coords).ok()?;
        let w = if c.iter().all(|&a| a == 0) { v } else { self.alpha(v, &c)? };
        Some(Self::point(w, &self.domain.section(coords).ok()?))
    }

    fn same_point(&self, p: &SpacePoint<T>, q: &SpacePoint<T>) -> bool {
        self.point_gap(p, q) <= T::coord_tol() * T::lit(10.0)
    }

    fn point_gap(&self, p: &SpacePoint<T>, q: &SpacePoint<T>) -> T {
        let (Some((v, x)), Some((w, y))) = (self.split(p), self.split(q)) else {
            return T::infinity();
        };
        self.cells
            .iter()
            .filter(|c| if c.iter().all(|&a| a == 0) { v == w } else { self.alpha(v, c) == Some(w) })
            .map(|c| x.iter().zip(&y).zip(c).map(|((&a, &b), &k)| (b + T::of_i64(k) - a).powi(2)).sum::<T>().sqrt())
            .fold(T::infinity(), T::min)
    }

    fn sample_point(&self, rng: &mut dyn RngCore) -> SpacePoint<T> {
        let v = rng.gen_range(0..self.carrier_size());
        let x: Vec<T> = self.domain.offset.iter().map(|&s| uniform(rng, s, s + T::one())).collect();
        Self::point(v, &x)
    }

    fn total_volume(&self) -> Volume<T> {
        Volume::Finite(T::of_i64(self.carrier_size() as i64))
    }

    fn chart_radius(&self, p: &SpacePoint<T>) -> T {
        let Some((v, x)) = self.split(p) else { return T::zero() };
        let half = T::lit(0.5);
        self.cells
            .iter()
            .filter(|c| c.iter().any(|&a| a != 0) && self.alpha(v, c).is_none())
            .map(|c| {
                x.iter()
                    .zip(&self.domain.offset)
                    .zip(c)
                    .map(|((&xi, &s), &k)| match k {
                        1 => (s + T::one() - xi).powi(2),
                        -1 => (xi - s).powi(2),
                        _ => T::zero(),
                    })
                    .sum::<T>()
                    .sqrt()
            })
            .fold(half, T::min)
    }

    fn chart_forward(&self, p: &SpacePoint<T>, q: &SpacePoint<T>) -> Option<GroupElement<T>> {
        let (_, x) = self.split(p)?;
        let (_, y) = self.split(q)?;
        let r = self.chart_radius(p);
        self.cells.iter().find_map(|c| {
            let g: Vec<T> = x.iter().zip(&y).zip(c).map(|((&a, &b), &k)| b + T::of_i64(k) - a).collect();
            let g = GroupElement::reals(&g);
            (self.group.norm(&g) < r && matches!(self.act(p, &g), Some(ref z) if self.same_point(z, q))).then_some(g)
        })
    }

    fn sampling_scale(&self) -> T {
        T::lit(2.0)
    }

    fn membership_oracle(&self, p: &SpacePoint<T>, u: &WindowSet<T>) -> Option<bool> {
        let (u1, u2) = self.interval(u)?;
        let (v, x) = self.split(p)?;
        Some(self.member_interval(v, x[0], u1, u2))
    }

    fn fraction_oracle(&self, u: &WindowSet<T>) -> Option<T> {
        let (u1, u2) = self.interval(u)?;
        Some(self.fraction_interval(u1, u2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{member_mu, MembershipOptions};

    #[test]
    fn exact_cyclic_induces_a_circle() {
        let v = DiscreteSoficMap::exact_cyclic(64, 62).unwrap();
        let g = GroupModel::<f64>::real_vector(1).unwrap();
        let m = induce_from_lattice(&v, &FundamentalDomain::unit(1), &g).unwrap();
        assert_eq!(m.total_volume().finite(), Some(64.0));
        let phi = |p: &SpacePoint<f64>| (p.coords[0] - p.labels[0] as f64).rem_euclid(64.0);
        let p = SpacePoint::new(&[5], &[0.75]);
        let q = m.act(&p, &GroupElement::real(2.5)).unwrap();
        assert!(((phi(&q) - phi(&p)).rem_euclid(64.0) - 2.5).abs() < 1e-12);
        assert_eq!(m.fraction_oracle(&WindowSet::ball(3.0)), Some(1.0));
    }

    #[test]
    fn oracle_agrees_with_sampled_membership() {
        let v = DiscreteSoficMap::exact_cyclic(256, 24).unwrap().corrupt(0.5, 3).unwrap();
        let v = super::super::normalize_discrete(&v, &(-6..=6).map(|n| vec![n]).collect::<Vec<_>>()).unwrap().map;
        let g = GroupModel::<f64>::real_vector(1).unwrap();
        let m = induce_from_lattice(&v, &FundamentalDomain::unit(1), &g).unwrap();
        let u = WindowSet::ball(1.5);
        let opts = MembershipOptions { n_pairs: 600, n_net: 160, prefer_exact: false, ..Default::default() };
        let mut rng = crate::rng::seeded(9);
        let mut disagree = 0;
        for _ in 0..200 {
            let p = m.sample_point(&mut rng);
            let exact = m.membership_oracle(&p, &u).unwrap();
            let stat = member_mu(&m, &p, &u, &opts, &mut rng).member;
            if exact != stat {
                disagree += 1;
            }
            if !stat {
                assert!(!exact, "sampled witness at {p:?} contradicts the oracle");
            }
        }
        assert!(disagree <= 6, "{disagree}");
    }

    #[test]
    fn unregistered_pairs() {
        let v = DiscreteSoficMap::exact_cyclic(8, 3).unwrap();
        let g = GroupModel::<f64>::real_vector(2).unwrap();
        assert!(matches!(induce_from_lattice(&v, &FundamentalDomain::unit(1), &g), Err(Error::UnregisteredPair(_))));
    }
}
