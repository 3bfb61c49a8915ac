use std::sync::Arc;

use rand::RngCore;

use super::{LocalSpace, Region, SpacePoint, Volume, WindowSet};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupModel};
use crate::scalar::Scalar;

/// `M` viewed as a local `H`-space for an open subgroup `H ≤ G` made of a subset of
/// the direct factors of `G`: `dom(α_H) = dom(α) ∩ (M × H)`.
pub struct RestrictedSpace<T: Scalar> {
    inner: Arc<dyn LocalSpace<T>>,
    sub: GroupModel<T>,
    keep: Vec<bool>,
    full: bool,
}

/// Restricts to the subgroup generated by the factors flagged in `keep`. Only
/// discrete factors may be dropped, which makes the subgroup open.
pub fn restrict_to_open_subgroup<T: Scalar>(inner: Arc<dyn LocalSpace<T>>, keep: Vec<bool>) -> Result<RestrictedSpace<T>> {
    let g = inner.group();
    let atoms = g.atoms();
    if keep.len() != atoms.len() {
        return Err(Error::UnregisteredPair(format!("{} has {} factors, mask has {}", g.name(), atoms.len(), keep.len())));
    }
    if let Some(a) = atoms.iter().zip(&keep).find(|(a, &k)| !k && !a.is_discrete()) {
        return Err(Error::UnregisteredPair(format!("dropping the non-discrete factor {:?} does not give an open subgroup", a.0)));
    }
    let sub = g.sub_product(&keep)?;
    let full = keep.iter().all(|&k| k);
    Ok(RestrictedSpace { inner, sub, keep, full })
}

impl<T: Scalar> RestrictedSpace<T> {
    pub fn embed(&self, h: &GroupElement<T>) -> GroupElement<T> {
        self.inner.group().embed_sub(&self.keep, h)
    }

    /// The window `U ∩ H` of a `G`-window, as an `H`-window. Balls about the identity
    /// restrict to balls of the same radius; finite sets are filtered.
    pub fn restrict_window(&self, u: &WindowSet<T>) -> Option<WindowSet<T>> {
        let g = self.inner.group();
        match u {
            WindowSet::Ball(b) => {
                let c = b.center_or_identity(g);
                let c = g.project_sub(&self.keep, &c)?;
                Some(WindowSet::Ball(crate::group::BallSpec::centered(c, b.radius)))
            }
            WindowSet::Finite(v) => {
                let kept: Vec<_> = v.iter().filter_map(|x| g.project_sub(&self.keep, x)).collect();
                (!kept.is_empty()).then_some(WindowSet::Finite(kept))
            }
            _ => None,
        }
    }
}

impl<T: Scalar> LocalSpace<T> for RestrictedSpace<T> {
    fn name(&self) -> String {
        format!("restrict({}, {})", self.inner.name(), self.sub.name())
    }

    fn group(&self) -> &GroupModel<T> {
        &self.sub
    }

    fn act(&self, p: &SpacePoint<T>, h: &GroupElement<T>) -> Option<SpacePoint<T>> {
        self.inner.act(p, &self.embed(h))
    }

    fn make_point(&self, labels: &[i64], coords: &[T]) -> Option<SpacePoint<T>> {
        self.inner.make_point(labels, coords)
    }

    fn same_point(&self, p: &SpacePoint<T>, q: &SpacePoint<T>) -> bool {
        self.inner.same_point(p, q)
    }

    fn point_gap(&self, p: &SpacePoint<T>, q: &SpacePoint<T>) -> T {
        self.inner.point_gap(p, q)
    }

    fn sample_point(&self, rng: &mut dyn RngCore) -> SpacePoint<T> {
        self.inner.sample_point(rng)
    }

    fn total_volume(&self) -> Volume<T> {
        self.inner.total_volume()
    }

    fn chart_radius(&self, p: &SpacePoint<T>) -> T {
        self.inner.chart_radius(p)
    }

    fn chart_forward(&self, p: &SpacePoint<T>, q: &SpacePoint<T>) -> Option<GroupElement<T>> {
        self.inner.group().project_sub(&self.keep, &self.inner.chart_forward(p, q)?)
    }

    fn sampling_scale(&self) -> T {
        self.inner.sampling_scale()
    }

    fn is_transitive(&self) -> bool {
        self.full && self.inner.is_transitive()
    }

    fn injective_by_construction(&self) -> bool {
        self.inner.injective_by_construction()
    }

    fn carrier(&self) -> Option<Vec<SpacePoint<T>>> {
        self.inner.carrier()
    }

    fn coset_lift(&self, p: &SpacePoint<T>) -> Option<GroupElement<T>> {
        self.inner.group().project_sub(&self.keep, &self.inner.coset_lift(p)?)
    }

    fn in_lattice(&self, h: &GroupElement<T>) -> bool {
        self.inner.in_lattice(&self.embed(h))
    }

    fn membership_oracle(&self, p: &SpacePoint<T>, u: &WindowSet<T>) -> Option<bool> {
        self.full.then(|| self.inner.membership_oracle(p, u)).flatten()
    }

    fn fraction_oracle(&self, u: &WindowSet<T>) -> Option<T> {
        self.full.then(|| self.inner.fraction_oracle(u)).flatten()
    }

    fn injrad_oracle(&self, p: &SpacePoint<T>) -> Option<T> {
        self.full.then(|| self.inner.injrad_oracle(p)).flatten()
    }

    fn injrad_fraction_oracle(&self, rho: T) -> Option<T> {
        self.full.then(|| self.inner.injrad_fraction_oracle(rho)).flatten()
    }

    fn volume_oracle(&self, region: &Region<T>) -> Option<T> {
        self.inner.volume_oracle(region)
    }
}
