use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupModel};
use crate::rng::uniform;
use crate::scalar::{circular_distance, wrap, wrap_centered, Scalar};
use crate::space::{LocalSpace, SpacePoint, Volume};

/// Deliberately broken actions on the circle `ℝ/10ℤ`, each violating one axiom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mutation {
    /// `p.g = p + g + 0.01`; the identity moves points.
    Drift,
    /// `p.g = p + g + g²`; `g⁻¹` does not undo `g`.
    Skew,
    /// `p.g = p + g³`; `p.g.h ≠ p.gh`.
    Cubic,
}

impl Mutation {
    pub const ALL: [Mutation; 3] = [Mutation::Drift, Mutation::Skew, Mutation::Cubic];

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "drift" => Ok(Mutation::Drift),
            "skew" => Ok(Mutation::Skew),
            "cubic" => Ok(Mutation::Cubic),
            _ => Err(Error::Config(format!("no mutated action named {name:?}"))),
        }
    }

    /// The axiom this mutation is built to break.
    pub fn broken_axiom(self) -> u8 {
        match self {
            Mutation::Drift => 1,
            Mutation::Skew => 2,
            Mutation::Cubic => 3,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MutatedCircle<T: Scalar> {
    group: GroupModel<T>,
    mutation: Mutation,
    circumference: T,
}

pub fn mutated_circle<T: Scalar>(mutation: Mutation) -> MutatedCircle<T> {
    MutatedCircle { group: GroupModel::real_vector(1).expect("n = 1"), mutation, circumference: T::lit(10.0) }
}

impl<T: Scalar> MutatedCircle<T> {
    pub fn mutation(&self) -> Mutation {
        self.mutation
    }

    fn shift(&self, g: T) -> T {
        match self.mutation {
            Mutation::Drift => g + T::lit(0.01),
            Mutation::Skew => g + g * g,
            Mutation::Cubic => g * g * g,
        }
    }

    fn unshift(&self, d: T) -> T {
        match self.mutation {
            Mutation::Drift => d - T::lit(0.01),
            Mutation::Skew => (T::lit(-1.0) + (T::one() + T::lit(4.0) * d).max(T::zero()).sqrt()) / T::lit(2.0),
            Mutation::Cubic => d.cbrt(),
        }
    }
}

impl<T: Scalar> LocalSpace<T> for MutatedCircle<T> {
    fn name(&self) -> String {
        format!("mutated_circle({})", serde_json::to_value(self.mutation).unwrap().as_str().unwrap())
    }

    fn group(&self) -> &GroupModel<T> {
        &self.group
    }

    fn act(&self, p: &SpacePoint<T>, g: &GroupElement<T>) -> Option<SpacePoint<T>> {
        Some(SpacePoint::coords(&[wrap(p.coords[0] + self.shift(g.reals[0]), self.circumference)]))
    }

    fn make_point(&self, _labels: &[i64], coords: &[T]) -> Option<SpacePoint<T>> {
        Some(SpacePoint::coords(&[wrap(*coords.first()?, self.circumference)]))
    }

    fn point_gap(&self, p: &SpacePoint<T>, q: &SpacePoint<T>) -> T {
        circular_distance(p.coords[0], q.coords[0], self.circumference)
    }

    fn sample_point(&self, rng: &mut dyn RngCore) -> SpacePoint<T> {
        SpacePoint::coords(&[uniform(rng, T::zero(), self.circumference)])
    }

    fn total_volume(&self) -> Volume<T> {
        Volume::Finite(self.circumference)
    }

    fn chart_radius(&self, _p: &SpacePoint<T>) -> T {
        T::lit(0.4)
    }

    fn chart_forward(&self, p: &SpacePoint<T>, q: &SpacePoint<T>) -> Option<GroupElement<T>> {
        let g = self.unshift(wrap_centered(q.coords[0] - p.coords[0], self.circumference));
        (g.abs() < T::lit(0.4)).then(|| GroupElement::real(g))
    }

    fn sampling_scale(&self) -> T {
        T::one()
    }

    fn injective_by_construction(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direct_evaluation() {
        let p = SpacePoint::coords(&[1.0]);
        let g = GroupElement::real(0.5);
        let ginv = GroupElement::real(-0.5);
        let d = mutated_circle::<f64>(Mutation::Drift);
        assert!((d.act(&p, &GroupElement::real(0.0)).unwrap().coords[0] - 1.01).abs() < 1e-12);
        let s = mutated_circle::<f64>(Mutation::Skew);
        let back = s.act(&s.act(&p, &g).unwrap(), &ginv).unwrap();
        assert!((back.coords[0] - 1.5).abs() < 1e-12);
        let c = mutated_circle::<f64>(Mutation::Cubic);
        let two = c.act(&c.act(&p, &g).unwrap(), &g).unwrap();
        let one = c.act(&p, &GroupElement::real(1.0)).unwrap();
        assert!((two.coords[0] - 1.25).abs() < 1e-12 && (one.coords[0] - 2.0).abs() < 1e-12);
        assert_eq!(Mutation::parse("skew").unwrap(), Mutation::Skew);
        assert!(Mutation::parse("p+2g").is_err());
    }
}
