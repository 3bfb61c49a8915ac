use rand::RngCore;

use crate::error::{Error, Result};
use crate::group::{Atom, GroupElement, GroupModel};
use crate::rng::uniform;
use crate::scalar::{circular_distance, wrap, wrap_centered, Scalar};
use crate::space::{LocalSpace, Region, SpacePoint, Volume, WindowSet};

/// `Γ\G` for `G = ℝⁿ` and `Γ = c₁ℤ × … × cₙℤ`; points are representatives in `∏[0, cᵢ)`.
#[derive(Clone, Debug)]
pub struct CosetSpace<T: Scalar> {
    group: GroupModel<T>,
    periods: Vec<T>,
    min_period: T,
}

/// Registered pairs: `(ℝⁿ, c₁ℤ × … × cₙℤ)` with positive periods.
pub fn coset_space<T: Scalar>(group: &GroupModel<T>, periods: &[T]) -> Result<CosetSpace<T>> {
    let n = match group.atoms().as_slice() {
        [Atom::Real(n)] => *n,
        _ => return Err(Error::UnregisteredPair(format!("no registered lattice for {}", group.name()))),
    };
    if periods.len() != n {
        return Err(Error::UnregisteredPair(format!("{} needs {n} periods, got {}", group.name(), periods.len())));
    }
    if periods.iter().any(|c| !(*c > T::zero()) || !c.is_finite()) {
        return Err(Error::InvalidParams(format!("lattice periods must be positive, got {periods:?}")));
    }
    let min_period = periods.iter().copied().fold(T::infinity(), T::min);
    Ok(CosetSpace { group: group.clone(), periods: periods.to_vec(), min_period })
}

impl<T: Scalar> CosetSpace<T> {
    /// `ℝ / cℤ`.
    pub fn circle(c: T) -> Result<Self> {
        coset_space(&GroupModel::real_vector(1)?, &[c])
    }

    /// `ℝⁿ / (side ℤ)ⁿ`.
    pub fn torus(n: usize, side: T) -> Result<Self> {
        coset_space(&GroupModel::real_vector(n)?, &vec![side; n])
    }

    pub fn periods(&self) -> &[T] {
        &self.periods
    }

    /// Injective on `U` exactly when no two elements of `U` differ by a nonzero lattice
    /// vector; the shortest such vector has length `min cᵢ`.
    fn window_injective(&self, u: &WindowSet<T>) -> Option<bool> {
        if let Some(b) = u.as_ball(&self.group) {
            return Some(b.radius * T::lit(2.0) <= self.min_period);
        }
        let b = u.bounding_ball(&self.group);
        (b.radius * T::lit(2.0) <= self.min_period).then_some(true)
    }
}

impl<T: Scalar> LocalSpace<T> for CosetSpace<T> {
    fn name(&self) -> String {
        if self.periods.len() == 1 {
            format!("circle({})", self.periods[0])
        } else {
            let ps: Vec<String> = self.periods.iter().map(|p| p.to_string()).collect();
            format!("torus({})", ps.join("x"))
        }
    }

    fn group(&self) -> &GroupModel<T> {
        &self.group
    }

    fn act(&self, p: &SpacePoint<T>, g: &GroupElement<T>) -> Option<SpacePoint<T>> {
        let coords: Vec<T> = p.coords.iter().zip(&g.reals).zip(&self.periods).map(|((&x, &d), &c)| wrap(x + d, c)).collect();
        Some(SpacePoint::coords(&coords))
    }

    fn make_point(&self, labels: &[i64], coords: &[T]) -> Option<SpacePoint<T>> {
        if !labels.is_empty() || coords.len() != self.periods.len() || coords.iter().any(|x| !x.is_finite()) {
            return None;
        }
        let c: Vec<T> = coords.iter().zip(&self.periods).map(|(&x, &c)| wrap(x, c)).collect();
        Some(SpacePoint::coords(&c))
    }

    fn point_gap(&self, p: &SpacePoint<T>, q: &SpacePoint<T>) -> T {
        p.coords
            .iter()
            .zip(&q.coords)
            .zip(&self.periods)
            .map(|((&a, &b), &c)| circular_distance(a, b, c).powi(2))
            .sum::<T>()
            .sqrt()
    }

    fn sample_point(&self, rng: &mut dyn RngCore) -> SpacePoint<T> {
        let c: Vec<T> = self.periods.iter().map(|&c| uniform(rng, T::zero(), c)).collect();
        SpacePoint::coords(&c)
    }

    fn total_volume(&self) -> Volume<T> {
        Volume::Finite(self.periods.iter().fold(T::one(), |a, &c| a * c))
    }

    fn chart_radius(&self, _p: &SpacePoint<T>) -> T {
        self.min_period / T::lit(2.0)
    }

    fn chart_forward(&self, p: &SpacePoint<T>, q: &SpacePoint<T>) -> Option<GroupElement<T>> {
        let d: Vec<T> = p.coords.iter().zip(&q.coords).zip(&self.periods).map(|((&a, &b), &c)| wrap_centered(b - a, c)).collect();
        let g = GroupElement::reals(&d);
        (self.group.norm(&g) < self.chart_radius(p)).then_some(g)
    }

    fn sampling_scale(&self) -> T {
        self.min_period
    }

    fn coset_lift(&self, p: &SpacePoint<T>) -> Option<GroupElement<T>> {
        Some(GroupElement::reals(&p.coords))
    }

    fn in_lattice(&self, g: &GroupElement<T>) -> bool {
        g.reals.iter().zip(&self.periods).all(|(&x, &c)| {
            let k = (x / c).round();
            (x - k * c).abs() <= T::coord_tol() * (T::one() + x.abs())
        })
    }

    fn membership_oracle(&self, _p: &SpacePoint<T>, u: &WindowSet<T>) -> Option<bool> {
        self.window_injective(u)
    }

    fn fraction_oracle(&self, u: &WindowSet<T>) -> Option<T> {
        self.window_injective(u).map(|b| if b { T::one() } else { T::zero() })
    }

    fn injrad_oracle(&self, _p: &SpacePoint<T>) -> Option<T> {
        Some(self.min_period / T::lit(2.0))
    }

    fn injrad_fraction_oracle(&self, rho: T) -> Option<T> {
        Some(if rho * T::lit(2.0) <= self.min_period { T::one() } else { T::zero() })
    }

    fn volume_oracle(&self, region: &Region<T>) -> Option<T> {
        match region {
            Region::Empty => Some(T::zero()),
            Region::Box { labels, lo, hi } if labels.is_empty() && lo.len() == self.periods.len() => {
                let mut v = T::one();
                for ((&a, &b), &c) in lo.iter().zip(hi).zip(&self.periods) {
                    if b - a > c || b < a {
                        return None;
                    }
                    v = v * (b - a);
                }
                Some(v)
            }
            _ => None,
        }
    }
}
