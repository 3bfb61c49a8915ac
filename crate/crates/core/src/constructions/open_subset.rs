use rand::RngCore;

use crate::error::{Error, Result};
use crate::group::{Atom, BallSpec, CoordBox, GroupElement, GroupModel};
use crate::rng::uniform;
use crate::scalar::Scalar;
use crate::space::{LocalSpace, Region, SpacePoint, Volume, WindowSet};

/// An open box `S ⊂ G` with `p.g = pg` whenever `pg ∈ S`.
#[derive(Clone, Debug)]
pub struct OpenSubsetSpace<T: Scalar> {
    group: GroupModel<T>,
    region: CoordBox<T>,
    label: Option<String>,
}

pub fn open_subset_space<T: Scalar>(group: &GroupModel<T>, region: CoordBox<T>) -> Result<OpenSubsetSpace<T>> {
    if region.ints.len() != group.n_ints() || region.reals.len() != group.n_reals() {
        return Err(Error::InvalidParams(format!("box shape does not match {}", group.name())));
    }
    region.validate()?;
    let (mut ri, mut rr) = (0, 0);
    for atom in group.atoms() {
        match atom {
            Atom::Affine if !(region.reals[rr].0 > T::zero()) => {
                return Err(Error::InvalidParams("affine box must lie in a > 0".into()));
            }
            Atom::Cyclic(m) => {
                let (lo, hi) = region.ints[ri];
                if lo < 0 || hi >= m {
                    return Err(Error::InvalidParams(format!("residue range {lo}..={hi} outside [0, {m})")));
                }
            }
            _ => {}
        }
        ri += atom.n_ints();
        rr += atom.n_reals();
    }
    Ok(OpenSubsetSpace { group: group.clone(), region, label: None })
}

/// The Følner box `(0, L)ⁿ ⊂ ℝⁿ`.
pub fn folner_box_space<T: Scalar>(n: usize, side: T) -> Result<OpenSubsetSpace<T>> {
    if !(side > T::zero()) || !side.is_finite() {
        return Err(Error::InvalidParams(format!("side length must be positive, got {side}")));
    }
    let mut s = open_subset_space(&GroupModel::real_vector(n)?, CoordBox::cube(n, T::zero(), side))?;
    s.label = Some(format!("folner_box({n}, {side})"));
    Ok(s)
}

fn to_element<T: Scalar>(p: &SpacePoint<T>) -> GroupElement<T> {
    GroupElement::new(&p.labels, &p.coords)
}

fn to_point<T: Scalar>(g: &GroupElement<T>) -> SpacePoint<T> {
    SpacePoint::new(&g.ints, &g.reals)
}

/// `∫ a⁻² ((D − W a)₊) da` over `(lo, hi)`.
fn affine_strip<T: Scalar>(lo: T, hi: T, d: T, w: T) -> T {
    let hi = if w > T::zero() { hi.min(d / w) } else { hi };
    if !(hi > lo) || !(d > T::zero()) {
        return T::zero();
    }
    d * (T::one() / lo - T::one() / hi) - w * (hi / lo).ln()
}

impl<T: Scalar> OpenSubsetSpace<T> {
    pub fn region(&self) -> &CoordBox<T> {
        &self.region
    }

    fn contains(&self, g: &GroupElement<T>) -> bool {
        self.region.contains_ints(&g.ints) && self.region.contains_reals(&g.reals)
    }

    fn haar_of_box(&self, b: &CoordBox<T>) -> T {
        let count: i64 = b.ints.iter().map(|&(lo, hi)| (hi - lo + 1).max(0)).product();
        let mut v = T::of_i64(count);
        let mut at = 0;
        for atom in self.group.atoms() {
            let r = &b.reals[at..at + atom.n_reals()];
            v = v * match atom {
                Atom::Affine => {
                    let ((a1, a2), (b1, b2)) = (r[0], r[1]);
                    (T::one() / a1 - T::one() / a2) * (b2 - b1)
                }
                _ => r.iter().fold(T::one(), |acc, &(lo, hi)| acc * (hi - lo).max(T::zero())),
            };
            at += atom.n_reals();
        }
        v
    }

    /// Largest `r` with `B(p, r) ⊂ S`, for groups with one continuous factor.
    fn inner_radius(&self, p: &GroupElement<T>) -> T {
        let mut r = T::infinity();
        let mut at = 0;
        for atom in self.group.atoms() {
            let x = &p.reals[at..at + atom.n_reals()];
            let bx = &self.region.reals[at..at + atom.n_reals()];
            let d = match atom {
                Atom::Affine => {
                    let (a, b) = (x[0], x[1]);
                    let ((a1, a2), (b1, b2)) = (bx[0], bx[1]);
                    (a / a1).ln().min((a2 / a).ln()).min(((b - b1) / a).asinh()).min(((b2 - b) / a).asinh())
                }
                _ => x.iter().zip(bx).map(|(&v, &(lo, hi))| (v - lo).min(hi - v)).fold(T::infinity(), T::min),
            };
            r = r.min(d);
            at += atom.n_reals();
        }
        if self.group.n_ints() > 0 {
            r = r.min(T::one());
        }
        r.max(T::zero())
    }

    fn balls_inside(&self, p: &GroupElement<T>, balls: &[BallSpec<T>]) -> Option<bool> {
        for b in balls {
            let c = self.group.mul(p, &b.center_or_identity(&self.group));
            if !self.group.ball_within_box(&c, b.radius, &self.region)? {
                return Some(false);
            }
        }
        Some(true)
    }

    /// `vol(M[U]) / vol(M)` for unions of balls in `ℝⁿ`, `ℂ` or the affine line.
    fn exact_fraction(&self, balls: &[BallSpec<T>]) -> Option<T> {
        let atoms = self.group.atoms();
        let total = self.haar_of_box(&self.region);
        match atoms.as_slice() {
            [Atom::Real(_)] | [Atom::Complex] => {
                let mut inner = T::one();
                for (i, &(lo, hi)) in self.region.reals.iter().enumerate() {
                    let (mut a, mut b) = (lo, hi);
                    for ball in balls {
                        let c = ball.center_or_identity(&self.group).reals[i];
                        a = a.max(lo + ball.radius - c);
                        b = b.min(hi - ball.radius - c);
                    }
                    inner = inner * (b - a).max(T::zero());
                }
                Some(inner / self.region.coordinate_volume())
            }
            [Atom::Affine] => {
                let ((a1, a2), (b1, b2)) = (self.region.reals[0], self.region.reals[1]);
                let (mut lo, mut hi) = (a1, a2);
                let (mut left, mut right) = (T::neg_infinity(), T::neg_infinity());
                for ball in balls {
                    let c = ball.center_or_identity(&self.group);
                    let (alpha, beta) = (c.reals[0], c.reals[1]);
                    let (r, s) = (ball.radius, ball.radius.sinh());
                    lo = lo.max(a1 * r.exp() / alpha);
                    hi = hi.min(a2 * (-r).exp() / alpha);
                    left = left.max(alpha * s - beta);
                    right = right.max(beta + alpha * s);
                }
                Some(affine_strip(lo, hi, b2 - b1, left + right) / total)
            }
            _ => None,
        }
    }
}

impl<T: Scalar> LocalSpace<T> for OpenSubsetSpace<T> {
    fn name(&self) -> String {
        if let Some(l) = &self.label {
            return l.clone();
        }
        let mut parts: Vec<String> = self.region.ints.iter().map(|(a, b)| format!("{a}..={b}")).collect();
        parts.extend(self.region.reals.iter().map(|(a, b)| format!("({a}, {b})")));
        format!("open_subset({}, {})", self.group.name(), parts.join("x"))
    }

    fn group(&self) -> &GroupModel<T> {
        &self.group
    }

    fn act(&self, p: &SpacePoint<T>, g: &GroupElement<T>) -> Option<SpacePoint<T>> {
        let pg = self.group.mul(&to_element(p), g);
        self.contains(&pg).then(|| to_point(&pg))
    }

    fn make_point(&self, labels: &[i64], coords: &[T]) -> Option<SpacePoint<T>> {
        let g = self.group.element(labels, coords).ok()?;
        self.contains(&g).then(|| to_point(&g))
    }

    fn sample_point(&self, rng: &mut dyn RngCore) -> SpacePoint<T> {
        let ints: Vec<i64> = self.region.ints.iter().map(|&(lo, hi)| lo + (rng.next_u64() % (hi - lo + 1) as u64) as i64).collect();
        let mut reals = Vec::with_capacity(self.region.reals.len());
        let mut at = 0;
        for atom in self.group.atoms() {
            let bx = &self.region.reals[at..at + atom.n_reals()];
            match atom {
                Atom::Affine => {
                    // Density ∝ a⁻²: 1/a is uniform.
                    let ((a1, a2), (b1, b2)) = (bx[0], bx[1]);
                    let inv = uniform(rng, T::one() / a2, T::one() / a1);
                    reals.push(T::one() / inv);
                    reals.push(uniform(rng, b1, b2));
                }
                _ => reals.extend(bx.iter().map(|&(lo, hi)| uniform(rng, lo, hi))),
            }
            at += atom.n_reals();
        }
        SpacePoint::new(&ints, &reals)
    }

    fn total_volume(&self) -> Volume<T> {
        Volume::Finite(self.haar_of_box(&self.region))
    }

    fn chart_radius(&self, p: &SpacePoint<T>) -> T {
        self.inner_radius(&to_element(p))
    }

    fn chart_forward(&self, p: &SpacePoint<T>, q: &SpacePoint<T>) -> Option<GroupElement<T>> {
        let g = self.group.left_div(&to_element(p), &to_element(q));
        (self.group.norm(&g) < self.chart_radius(p)).then_some(g)
    }

    fn sampling_scale(&self) -> T {
        let widths = self.region.reals.iter().map(|&(lo, hi)| hi - lo).fold(T::infinity(), T::min);
        widths.min(T::lit(4.0)).max(T::lit(1.5))
    }

    fn injective_by_construction(&self) -> bool {
        true
    }

    fn carrier(&self) -> Option<Vec<SpacePoint<T>>> {
        self.group.is_discrete().then(|| self.region.int_points().iter().map(|v| SpacePoint::new(v, &[])).collect())
    }

    fn coset_lift(&self, p: &SpacePoint<T>) -> Option<GroupElement<T>> {
        Some(to_element(p))
    }

    fn membership_oracle(&self, p: &SpacePoint<T>, u: &WindowSet<T>) -> Option<bool> {
        let pe = to_element(p);
        if let WindowSet::Finite(v) = u {
            return Some(v.iter().all(|g| self.contains(&self.group.mul(&pe, g))));
        }
        self.balls_inside(&pe, &u.as_ball_union(&self.group)?)
    }

    fn fraction_oracle(&self, u: &WindowSet<T>) -> Option<T> {
        self.exact_fraction(&u.as_ball_union(&self.group)?)
    }

    fn injrad_oracle(&self, p: &SpacePoint<T>) -> Option<T> {
        (self.group.n_ints() == 0).then(|| self.inner_radius(&to_element(p)))
    }

    fn injrad_fraction_oracle(&self, rho: T) -> Option<T> {
        self.exact_fraction(&[BallSpec::new(rho)])
    }

    fn volume_oracle(&self, region: &Region<T>) -> Option<T> {
        match region {
            Region::Empty => Some(T::zero()),
            Region::Box { labels, lo, hi } => {
                if labels.len() != self.region.ints.len() || lo.len() != self.region.reals.len() || !self.region.contains_ints(labels) {
                    return None;
                }
                let reals: Vec<(T, T)> =
                    lo.iter().zip(hi).zip(&self.region.reals).map(|((&a, &b), &(l, h))| (a.max(l), b.min(h).max(a.max(l)))).collect();
                let ints = labels.iter().map(|&n| (n, n)).collect();
                Some(self.haar_of_box(&CoordBox { ints, reals }))
            }
            Region::Points(ps) => Some(T::of_i64(ps.iter().filter(|p| self.contains(&to_element(p))).count() as i64)),
            Region::Union(rs) => rs.iter().map(|r| self.volume_oracle(r)).sum(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_segment_action() {
        let m = folner_box_space::<f64>(1, 100.0).unwrap();
        let p = SpacePoint::coords(&[50.0]);
        assert_eq!(m.act(&p, &GroupElement::real(30.0)).unwrap().coords[0], 80.0);
        assert!(m.act(&p, &GroupElement::real(60.0)).is_none());
        assert!(folner_box_space::<f64>(1, 0.0).is_err());
    }

    #[test]
    fn affine_volume() {
        let g = GroupModel::<f64>::affine_line();
        let m = open_subset_space(&g, CoordBox::reals(&[(1.0, 4.0), (0.0, 1.0)])).unwrap();
        assert!((m.total_volume().finite().unwrap() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn erosion_fractions() {
        for (l, f) in [(20.0, 0.25), (100.0, 0.81), (1000.0, 0.9801)] {
            let m = folner_box_space::<f64>(2, l).unwrap();
            let got = m.fraction_oracle(&WindowSet::ball(5.0)).unwrap();
            assert!((got - f).abs() < 1e-12, "{l}: {got}");
        }
        let m = folner_box_space::<f64>(1, 10.0).unwrap();
        assert_eq!(m.fraction_oracle(&WindowSet::ball(5.0)).unwrap(), 0.0);
    }

    #[test]
    fn affine_fraction_matches_membership() {
        use crate::rng::seeded;
        let g = GroupModel::<f64>::affine_line();
        let m = open_subset_space(&g, CoordBox::reals(&[(0.5, 40.0), (-10.0, 10.0)])).unwrap();
        let u = WindowSet::ball(0.7);
        let exact = m.fraction_oracle(&u).unwrap();
        let mut rng = seeded(4);
        let n = 40_000;
        let hits = (0..n).filter(|_| m.membership_oracle(&m.sample_point(&mut rng), &u).unwrap()).count();
        let mc = hits as f64 / n as f64;
        assert!((mc - exact).abs() < 0.01, "{mc} vs {exact}");
    }
}
