//! Local G-spaces: partial right actions with charts and a canonical measure, and the
//! checkers that operate on them.

mod axioms;
mod inclusion;
mod injrad;
mod membership;
mod metric;
mod point;
mod restrict;
mod sofic;
mod transition;
mod volume;
mod window;

pub use axioms::{check_axioms, AxiomReport, AxiomResult, Witness};
pub use inclusion::{translation_inclusion_check, InclusionReport};
pub use injrad::{injectivity_radius, injrad_profile, ProfileRow};
pub use membership::{injective_on, member_mu, Membership, Method, MembershipOptions};
pub use metric::{chain_metric, ChainGraph, ChainResult};
pub use point::{SpacePoint, Volume};
pub use restrict::{restrict_to_open_subgroup, RestrictedSpace};
pub use sofic::{sofic_check, SoficOptions, SoficReport, Verdict};
pub use transition::{chart_transition_check, TransitionReport};
pub use volume::{canonical_volume, measure_distortion_check, point_density, Region};
pub use window::{SoficWindow, WindowSet};

use rand::RngCore;

use crate::group::{GroupElement, GroupModel};
use crate::scalar::Scalar;

/// A local G-space.
///
/// Required methods give the partial action and one chart per point: on the ball of
/// radius `chart_radius(p)` the map `g ↦ p.g` is a homeomorphism onto its image and
/// `chart_forward(p, ·)` inverts it. The optional oracles return closed forms that
/// checkers prefer over sampling.
pub trait LocalSpace<T: Scalar>: Send + Sync {
    fn name(&self) -> String;

    fn group(&self) -> &GroupModel<T>;

    /// `p.g`, or `None` when `(p, g)` is outside the domain.
    fn act(&self, p: &SpacePoint<T>, g: &GroupElement<T>) -> Option<SpacePoint<T>>;

    fn in_domain(&self, p: &SpacePoint<T>, g: &GroupElement<T>) -> bool {
        self.act(p, g).is_some()
    }

    /// Builds a point from raw coordinates, reducing periodic ones; `None` outside the space.
    fn make_point(&self, labels: &[i64], coords: &[T]) -> Option<SpacePoint<T>>;

    /// Equality of points up to the coordinate tolerance.
    fn same_point(&self, p: &SpacePoint<T>, q: &SpacePoint<T>) -> bool {
        p.labels == q.labels && self.point_gap(p, q) <= T::coord_tol() * T::lit(10.0)
    }

    /// Coordinate distance between points with equal labels (infinite otherwise).
    fn point_gap(&self, p: &SpacePoint<T>, q: &SpacePoint<T>) -> T {
        if p.labels != q.labels {
            return T::infinity();
        }
        p.coords.iter().zip(&q.coords).map(|(a, b)| (*a - *b).powi(2)).sum::<T>().sqrt()
    }

    /// Draws a point from the normalized canonical measure (from a fixed reference
    /// region for infinite-volume spaces).
    fn sample_point(&self, rng: &mut dyn RngCore) -> SpacePoint<T>;

    fn total_volume(&self) -> Volume<T>;

    /// Radius of the chart at `p`.
    fn chart_radius(&self, p: &SpacePoint<T>) -> T;

    /// `f_p(q)`: the element `g` of `B(chart_radius(p))` with `p.g = q`, if any.
    fn chart_forward(&self, p: &SpacePoint<T>, q: &SpacePoint<T>) -> Option<GroupElement<T>>;

    /// Typical length scale used when sampling group elements for axiom tests.
    fn sampling_scale(&self) -> T {
        T::one()
    }

    fn is_transitive(&self) -> bool {
        true
    }

    /// `α(·, g)` is the restriction of an injective map of a larger space (e.g. group
    /// multiplication), so `g ↦ p.g` is injective wherever defined.
    fn injective_by_construction(&self) -> bool {
        false
    }

    /// Every point, for spaces with a finite carrier.
    fn carrier(&self) -> Option<Vec<SpacePoint<T>>> {
        None
    }

    /// A representative `ℓ(p) ∈ G` with `p = Γ ℓ(p)` for quotient-type spaces.
    fn coset_lift(&self, _p: &SpacePoint<T>) -> Option<GroupElement<T>> {
        None
    }

    /// Membership in the lattice `Γ` the space is a quotient by (trivial by default).
    fn in_lattice(&self, g: &GroupElement<T>) -> bool {
        self.group().approx_eq(g, &self.group().identity())
    }

    fn membership_oracle(&self, _p: &SpacePoint<T>, _u: &WindowSet<T>) -> Option<bool> {
        None
    }

    /// Closed form of `vol(M[U]) / vol(M)`.
    fn fraction_oracle(&self, _u: &WindowSet<T>) -> Option<T> {
        None
    }

    /// Closed form of the injectivity radius at `p`.
    fn injrad_oracle(&self, _p: &SpacePoint<T>) -> Option<T> {
        None
    }

    /// Closed form of the volume fraction of `{p : p ∈ M[B(ρ)]}`.
    fn injrad_fraction_oracle(&self, _rho: T) -> Option<T> {
        None
    }

    fn volume_oracle(&self, _region: &Region<T>) -> Option<T> {
        None
    }
}

/// Iterated action `p.g₁.g₂…`, never collapsing the word to its product.
pub fn act_word<T: Scalar, M: LocalSpace<T> + ?Sized>(m: &M, p: &SpacePoint<T>, word: &[GroupElement<T>]) -> Option<SpacePoint<T>> {
    word.iter().try_fold(p.clone(), |q, g| m.act(&q, g))
}

impl<T: Scalar, M: LocalSpace<T> + ?Sized> LocalSpace<T> for std::sync::Arc<M> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn group(&self) -> &GroupModel<T> {
        (**self).group()
    }
    fn act(&self, p: &SpacePoint<T>, g: &GroupElement<T>) -> Option<SpacePoint<T>> {
        (**self).act(p, g)
    }
    fn in_domain(&self, p: &SpacePoint<T>, g: &GroupElement<T>) -> bool {
        (**self).in_domain(p, g)
    }
    fn make_point(&self, labels: &[i64], coords: &[T]) -> Option<SpacePoint<T>> {
        (**self).make_point(labels, coords)
    }
    fn same_point(&self, p: &SpacePoint<T>, q: &SpacePoint<T>) -> bool {
        (**self).same_point(p, q)
    }
    fn point_gap(&self, p: &SpacePoint<T>, q: &SpacePoint<T>) -> T {
        (**self).point_gap(p, q)
    }
    fn sample_point(&self, rng: &mut dyn RngCore) -> SpacePoint<T> {
        (**self).sample_point(rng)
    }
    fn total_volume(&self) -> Volume<T> {
        (**self).total_volume()
    }
    fn chart_radius(&self, p: &SpacePoint<T>) -> T {
        (**self).chart_radius(p)
    }
    fn chart_forward(&self, p: &SpacePoint<T>, q: &SpacePoint<T>) -> Option<GroupElement<T>> {
        (**self).chart_forward(p, q)
    }
    fn sampling_scale(&self) -> T {
        (**self).sampling_scale()
    }
    fn is_transitive(&self) -> bool {
        (**self).is_transitive()
    }
    fn injective_by_construction(&self) -> bool {
        (**self).injective_by_construction()
    }
    fn carrier(&self) -> Option<Vec<SpacePoint<T>>> {
        (**self).carrier()
    }
    fn coset_lift(&self, p: &SpacePoint<T>) -> Option<GroupElement<T>> {
        (**self).coset_lift(p)
    }
    fn in_lattice(&self, g: &GroupElement<T>) -> bool {
        (**self).in_lattice(g)
    }
    fn membership_oracle(&self, p: &SpacePoint<T>, u: &WindowSet<T>) -> Option<bool> {
        (**self).membership_oracle(p, u)
    }
    fn fraction_oracle(&self, u: &WindowSet<T>) -> Option<T> {
        (**self).fraction_oracle(u)
    }
    fn injrad_oracle(&self, p: &SpacePoint<T>) -> Option<T> {
        (**self).injrad_oracle(p)
    }
    fn injrad_fraction_oracle(&self, rho: T) -> Option<T> {
        (**self).injrad_fraction_oracle(rho)
    }
    fn volume_oracle(&self, region: &Region<T>) -> Option<T> {
        (**self).volume_oracle(region)
    }
}
