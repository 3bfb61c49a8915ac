use rand::RngCore;

use crate::error::{Error, Result};
use crate::group::{Atom, BallSpec, GroupElement, GroupModel};
use crate::scalar::Scalar;

/// A pre-compact subset of the group used as the `U` of a sofic window.
#[derive(Clone, Debug, PartialEq)]
pub enum WindowSet<T: Scalar> {
    Ball(BallSpec<T>),
    Finite(Vec<GroupElement<T>>),
    /// `g · W`.
    LeftTranslate(GroupElement<T>, Box<WindowSet<T>>),
    Intersection(Vec<WindowSet<T>>),
    Union(Vec<WindowSet<T>>),
}

/// The pair `(U, ε)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SoficWindow<T: Scalar> {
    pub set: WindowSet<T>,
    pub epsilon: T,
}

impl<T: Scalar> SoficWindow<T> {
    pub fn ball(radius: T, epsilon: T) -> Self {
        Self { set: WindowSet::ball(radius), epsilon }
    }

    pub fn new(set: WindowSet<T>, epsilon: T) -> Result<Self> {
        if !(epsilon > T::zero() && epsilon <= T::one()) {
            return Err(Error::InvalidWindow(format!("epsilon must lie in (0, 1], got {epsilon}")));
        }
        set.validate()?;
        Ok(Self { set, epsilon })
    }
}

impl<T: Scalar> WindowSet<T> {
    pub fn ball(radius: T) -> Self {
        WindowSet::Ball(BallSpec::new(radius))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            WindowSet::Ball(b) => b.validate().map_err(|e| Error::InvalidWindow(e.to_string())),
            WindowSet::Finite(v) if v.is_empty() => Err(Error::InvalidWindow("empty finite window".into())),
            WindowSet::Finite(_) => Ok(()),
            WindowSet::LeftTranslate(_, w) => w.validate(),
            WindowSet::Intersection(ws) | WindowSet::Union(ws) => {
                if ws.is_empty() {
                    return Err(Error::InvalidWindow("empty combination".into()));
                }
                ws.iter().try_for_each(|w| w.validate())
            }
        }
    }

    /// `U ∩ g⁻¹U`.
    pub fn meet_translate(&self, group: &GroupModel<T>, g: &GroupElement<T>) -> Self {
        WindowSet::Intersection(vec![self.clone(), WindowSet::LeftTranslate(group.inv(g), Box::new(self.clone()))])
    }

    /// `U ∪ g⁻¹U`.
    pub fn join_translate(&self, group: &GroupModel<T>, g: &GroupElement<T>) -> Self {
        WindowSet::Union(vec![self.clone(), WindowSet::LeftTranslate(group.inv(g), Box::new(self.clone()))])
    }

    pub fn contains(&self, group: &GroupModel<T>, x: &GroupElement<T>) -> bool {
        match self {
            WindowSet::Ball(b) => b.contains(group, x),
            WindowSet::Finite(v) => v.iter().any(|y| group.approx_eq(x, y)),
            WindowSet::LeftTranslate(g, w) => w.contains(group, &group.left_div(g, x)),
            WindowSet::Intersection(ws) => ws.iter().all(|w| w.contains(group, x)),
            WindowSet::Union(ws) => ws.iter().any(|w| w.contains(group, x)),
        }
    }

    /// A ball containing the set.
    pub fn bounding_ball(&self, group: &GroupModel<T>) -> BallSpec<T> {
        match self {
            WindowSet::Ball(b) => BallSpec::centered(b.center_or_identity(group), b.radius),
            WindowSet::Finite(v) => {
                let id = group.identity();
                let r = v.iter().map(|x| group.norm(x)).fold(T::zero(), T::max);
                BallSpec::centered(id, r + T::one().max(r) * T::lit(1e-6) + T::lit(1e-6))
            }
            WindowSet::LeftTranslate(g, w) => {
                let b = w.bounding_ball(group);
                BallSpec::centered(group.mul(g, &b.center_or_identity(group)), b.radius)
            }
            WindowSet::Intersection(ws) => ws
                .iter()
                .map(|w| w.bounding_ball(group))
                .min_by(|a, b| a.radius.partial_cmp(&b.radius).unwrap())
                .unwrap(),
            WindowSet::Union(ws) => {
                let balls: Vec<BallSpec<T>> = ws.iter().map(|w| w.bounding_ball(group)).collect();
                let c = balls[0].center_or_identity(group);
                let r = balls
                    .iter()
                    .map(|b| group.dist(&c, &b.center_or_identity(group)) + b.radius)
                    .fold(T::zero(), T::max);
                BallSpec::centered(c, r)
            }
        }
    }

    /// Rewrites the set as one ball when that is exact: translates of balls, and
    /// intersections of intervals on the real line.
    pub fn as_ball(&self, group: &GroupModel<T>) -> Option<BallSpec<T>> {
        match self {
            WindowSet::Ball(b) => Some(BallSpec::centered(b.center_or_identity(group), b.radius)),
            WindowSet::LeftTranslate(g, w) => {
                let b = w.as_ball(group)?;
                Some(BallSpec::centered(group.mul(g, &b.center_or_identity(group)), b.radius))
            }
            WindowSet::Intersection(ws) if group.atoms() == [Atom::Real(1)] => {
                let (mut lo, mut hi) = (T::neg_infinity(), T::infinity());
                for w in ws {
                    let b = w.as_ball(group)?;
                    let c = b.center_or_identity(group).reals[0];
                    lo = lo.max(c - b.radius);
                    hi = hi.min(c + b.radius);
                }
                if hi <= lo {
                    return None;
                }
                let two = T::lit(2.0);
                Some(BallSpec::centered(GroupElement::real((lo + hi) / two), (hi - lo) / two))
            }
            WindowSet::Union(ws) if ws.len() == 1 => ws[0].as_ball(group),
            _ => None,
        }
    }

    /// The set as a finite union of balls, when it is one.
    pub fn as_ball_union(&self, group: &GroupModel<T>) -> Option<Vec<BallSpec<T>>> {
        if let Some(b) = self.as_ball(group) {
            return Some(vec![b]);
        }
        match self {
            WindowSet::Union(ws) => {
                let mut out = Vec::new();
                for w in ws {
                    out.extend(w.as_ball_union(group)?);
                }
                Some(out)
            }
            WindowSet::LeftTranslate(g, w) => Some(
                w.as_ball_union(group)?
                    .into_iter()
                    .map(|b| BallSpec::centered(group.mul(g, &b.center_or_identity(group)), b.radius))
                    .collect(),
            ),
            _ => None,
        }
    }

    /// All elements, when the set is finite and has at most `limit` of them.
    pub fn enumerate(&self, group: &GroupModel<T>, limit: usize) -> Option<Vec<GroupElement<T>>> {
        if let WindowSet::Finite(v) = self {
            let mut out: Vec<GroupElement<T>> = Vec::with_capacity(v.len());
            for x in v {
                if !out.iter().any(|y| group.approx_eq(x, y)) {
                    out.push(x.clone());
                }
            }
            return (out.len() <= limit).then_some(out);
        }
        if !group.is_discrete() {
            return None;
        }
        let b = self.bounding_ball(group);
        let all = group.enumerate_ball(&b.center_or_identity(group), b.radius, limit.saturating_mul(8).max(limit))?;
        let out: Vec<_> = all.into_iter().filter(|x| self.contains(group, x)).collect();
        (out.len() <= limit).then_some(out)
    }

    /// Uniform sample by rejection from the bounding ball; `None` after many misses.
    pub fn sample(&self, group: &GroupModel<T>, rng: &mut dyn RngCore) -> Option<GroupElement<T>> {
        if let WindowSet::Finite(v) = self {
            return Some(v[(rng.next_u64() % v.len() as u64) as usize].clone());
        }
        if let WindowSet::Ball(b) = self {
            let x = group.sample_ball_at_identity(b.radius, rng);
            return Some(match &b.center {
                Some(c) => group.mul(c, &x),
                None => x,
            });
        }
        let b = self.bounding_ball(group);
        let c = b.center_or_identity(group);
        for _ in 0..1000 {
            let x = group.sample_ball(&c, b.radius, rng);
            if self.contains(group, &x) {
                return Some(x);
            }
        }
        None
    }

    /// Deterministic-plus-random cover of the set used for injectivity testing:
    /// a fine grid in dimension one, otherwise interior samples and points just inside
    /// the bounding sphere of every ball component.
    pub fn net(&self, group: &GroupModel<T>, n: usize, rng: &mut dyn RngCore) -> Vec<GroupElement<T>> {
        if let Some(all) = self.enumerate(group, n.max(1) * 4) {
            return all;
        }
        let mut out = Vec::with_capacity(n + 2);
        let shrink = T::one() - T::coord_tol() * T::lit(10.0);
        let balls = self.as_ball_union(group).unwrap_or_else(|| vec![self.bounding_ball(group)]);
        let per_ball = (n / balls.len()).max(8);
        for b in &balls {
            let c = b.center_or_identity(group);
            if group.atoms() == [Atom::Real(1)] {
                let k = (per_ball / 2).max(1) as i64;
                let h = b.radius * shrink / T::of_i64(k);
                for i in -k..=k {
                    out.push(group.mul(&c, &GroupElement::real(h * T::of_i64(i))));
                }
            } else {
                let half = per_ball / 2;
                out.extend(group.ball_rim(&c, b.radius * shrink, half, rng));
                out.extend((0..half).map(|_| group.sample_ball(&c, b.radius, rng)));
            }
        }
        out.push(group.identity());
        out.retain(|x| self.contains(group, x));
        out
    }
}
