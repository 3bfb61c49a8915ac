use rand::RngCore;

use crate::group::{GroupElement, GroupModel};
use crate::rng::uniform;
use crate::scalar::{circular_distance, wrap, Scalar};
use crate::space::{LocalSpace, SpacePoint, Volume};

/// The double cover of `ℂ \ {0}` branched at the origin, points `(r, θ)`
/// with `θ` read mod 4π, acted on by translation downstairs.
#[derive(Clone, Debug)]
pub struct BranchedCover<T: Scalar> {
    group: GroupModel<T>,
}

pub fn branched_double_cover<T: Scalar>() -> BranchedCover<T> {
    BranchedCover { group: GroupModel::complex_plane() }
}

fn four_pi<T: Scalar>() -> T {
    T::lit(4.0) * T::PI()
}

impl<T: Scalar> BranchedCover<T> {
    /// Lifts of `arg w` are `φ` and `φ + 2π`; take the one nearest `theta`.
    fn lift(&self, w_re: T, w_im: T, theta: T) -> (T, T) {
        let base = wrap(w_im.atan2(w_re), four_pi());
        let other = wrap(base + T::lit(2.0) * T::PI(), four_pi());
        let (d0, d1) = (circular_distance(base, theta, four_pi()), circular_distance(other, theta, four_pi()));
        if d0 <= d1 {
            (base, d0)
        } else {
            (other, d1)
        }
    }

    fn cartesian(p: &SpacePoint<T>) -> (T, T) {
        let (r, th) = (p.coords[0], p.coords[1]);
        (r * th.cos(), r * th.sin())
    }
}

impl<T: Scalar> LocalSpace<T> for BranchedCover<T> {
    fn name(&self) -> String {
        "branched_double_cover".into()
    }

    fn group(&self) -> &GroupModel<T> {
        &self.group
    }

    fn act(&self, p: &SpacePoint<T>, g: &GroupElement<T>) -> Option<SpacePoint<T>> {
        let (x, y) = Self::cartesian(p);
        let (u, v) = (x + g.reals[0], y + g.reals[1]);
        let t = u.hypot(v);
        if !(t > T::zero()) {
            return None;
        }
        let (phi, d) = self.lift(u, v, p.coords[1]);
        (d < T::lit(2.0) * T::FRAC_PI_3()).then(|| SpacePoint::coords(&[t, phi]))
    }

    fn make_point(&self, _labels: &[i64], coords: &[T]) -> Option<SpacePoint<T>> {
        match *coords {
            [r, th] if r > T::zero() && th.is_finite() => Some(SpacePoint::coords(&[r, wrap(th, four_pi())])),
            _ => None,
        }
    }

    fn point_gap(&self, p: &SpacePoint<T>, q: &SpacePoint<T>) -> T {
        let dr = p.coords[0] - q.coords[0];
        let dth = circular_distance(p.coords[1], q.coords[1], four_pi());
        dr.hypot(dth)
    }

    /// Reference sampler: `|w|² ~ U(1/4, 4)`, angle uniform on both sheets.
    fn sample_point(&self, rng: &mut dyn RngCore) -> SpacePoint<T> {
        let r = uniform(rng, T::lit(0.25), T::lit(4.0)).sqrt();
        SpacePoint::coords(&[r, uniform(rng, T::zero(), four_pi())])
    }

    fn total_volume(&self) -> Volume<T> {
        Volume::Infinite
    }

    fn chart_radius(&self, p: &SpacePoint<T>) -> T {
        p.coords[0]
    }

    fn chart_forward(&self, p: &SpacePoint<T>, q: &SpacePoint<T>) -> Option<GroupElement<T>> {
        if circular_distance(p.coords[1], q.coords[1], four_pi()) >= T::FRAC_PI_2() {
            return None;
        }
        let ((x, y), (u, v)) = (Self::cartesian(p), Self::cartesian(q));
        let g = GroupElement::reals(&[u - x, v - y]);
        (self.group.norm(&g) < p.coords[0]).then_some(g)
    }
}
