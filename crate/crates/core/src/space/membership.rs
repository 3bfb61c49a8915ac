use std::collections::HashMap;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::{LocalSpace, SpacePoint, WindowSet};
use crate::group::GroupElement;
use crate::scalar::Scalar;

/// How a quantity was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Statistical,
}

impl Method {
    pub fn and(self, other: Method) -> Method {
        if self == Method::Exact && other == Method::Exact {
            Method::Exact
        } else {
            Method::Statistical
        }
    }
}

#[derive(Clone, Debug)]
pub struct MembershipOptions {
    /// `(g, h)` pairs with `g, h, gh ∈ U` tested in statistical mode.
    pub n_pairs: usize,
    /// Size of the injectivity net.
    pub n_net: usize,
    /// Use construction oracles when available.
    pub prefer_exact: bool,
    /// Largest finite window checked exhaustively.
    pub enumeration_limit: usize,
}

impl Default for MembershipOptions {
    fn default() -> Self {
        Self { n_pairs: 256, n_net: 128, prefer_exact: true, enumeration_limit: 4096 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Membership {
    pub member: bool,
    pub method: Method,
    pub witness: Option<String>,
}

impl Membership {
    fn yes(method: Method) -> Self {
        Self { member: true, method, witness: None }
    }

    fn no(method: Method, witness: String) -> Self {
        Self { member: false, method, witness: Some(witness) }
    }
}

pub(crate) fn fmt_el<T: Scalar>(g: &GroupElement<T>) -> String {
    let mut v: Vec<String> = g.ints.iter().map(|n| n.to_string()).collect();
    v.extend(g.reals.iter().map(|x| format!("{x}")));
    format!("({})", v.join(", "))
}

/// Decides `p ∈ M[U]`: `p.g.h = p.gh` for all `g, h, gh ∈ U` and `g ↦ p.g` injective
/// on `U`. Exact via an oracle or exhaustive enumeration of a finite `U`; otherwise a
/// sampled test whose failures are genuine witnesses.
pub fn member_mu<T: Scalar, M: LocalSpace<T> + ?Sized>(
    m: &M,
    p: &SpacePoint<T>,
    u: &WindowSet<T>,
    opts: &MembershipOptions,
    rng: &mut dyn RngCore,
) -> Membership {
    if opts.prefer_exact {
        if let Some(b) = m.membership_oracle(p, u) {
            return Membership { member: b, method: Method::Exact, witness: None };
        }
    }
    let group = m.group();
    if let Some(elems) = u.enumerate(group, opts.enumeration_limit) {
        return exhaustive(m, p, &elems);
    }
    statistical(m, p, u, opts, rng, true)
}

/// Only the injectivity half of [`member_mu`]: `g ↦ p.g` is defined and injective on `U`.
pub fn injective_on<T: Scalar, M: LocalSpace<T> + ?Sized>(
    m: &M,
    p: &SpacePoint<T>,
    u: &WindowSet<T>,
    opts: &MembershipOptions,
    rng: &mut dyn RngCore,
) -> Membership {
    if let Some(elems) = u.enumerate(m.group(), opts.enumeration_limit) {
        let imgs = match images(m, p, &elems, Method::Exact) {
            Ok(v) => v,
            Err(e) => return e,
        };
        return injective_images(m, &elems, &imgs);
    }
    statistical(m, p, u, opts, rng, false)
}

fn injective_images<T: Scalar, M: LocalSpace<T> + ?Sized>(m: &M, elems: &[GroupElement<T>], imgs: &[SpacePoint<T>]) -> Membership {
    if !m.injective_by_construction() {
        for i in 0..elems.len() {
            for j in i + 1..elems.len() {
                if m.same_point(&imgs[i], &imgs[j]) {
                    return Membership::no(
                        Method::Exact,
                        format!("p.g = p.h for g = {}, h = {}", fmt_el(&elems[i]), fmt_el(&elems[j])),
                    );
                }
            }
        }
    }
    Membership::yes(Method::Exact)
}

fn images<T: Scalar, M: LocalSpace<T> + ?Sized>(
    m: &M,
    p: &SpacePoint<T>,
    elems: &[GroupElement<T>],
    method: Method,
) -> Result<Vec<SpacePoint<T>>, Membership> {
    elems
        .iter()
        .map(|g| m.act(p, g).ok_or_else(|| Membership::no(method, format!("p.g undefined for g = {}", fmt_el(g)))))
        .collect()
}

fn exhaustive<T: Scalar, M: LocalSpace<T> + ?Sized>(m: &M, p: &SpacePoint<T>, elems: &[GroupElement<T>]) -> Membership {
    let group = m.group();
    let imgs = match images(m, p, elems, Method::Exact) {
        Ok(v) => v,
        Err(e) => return e,
    };
    let index: HashMap<&[i64], usize> =
        if group.is_discrete() { elems.iter().enumerate().map(|(i, g)| (g.ints.as_slice(), i)).collect() } else { HashMap::new() };
    let find = |x: &GroupElement<T>| {
        if group.is_discrete() {
            index.get(x.ints.as_slice()).copied()
        } else {
            elems.iter().position(|y| group.approx_eq(x, y))
        }
    };
    for (i, g) in elems.iter().enumerate() {
        for h in elems {
            let gh = group.mul(g, h);
            let Some(k) = find(&gh) else { continue };
            match m.act(&imgs[i], h) {
                Some(q) if m.same_point(&q, &imgs[k]) => {}
                _ => {
                    return Membership::no(Method::Exact, format!("p.g.h != p.gh for g = {}, h = {}", fmt_el(g), fmt_el(h)));
                }
            }
        }
    }
    injective_images(m, elems, &imgs)
}

fn statistical<T: Scalar, M: LocalSpace<T> + ?Sized>(
    m: &M,
    p: &SpacePoint<T>,
    u: &WindowSet<T>,
    opts: &MembershipOptions,
    rng: &mut dyn RngCore,
    coherence: bool,
) -> Membership {
    let group = m.group();
    let st = Method::Statistical;
    let net = u.net(group, opts.n_net, rng);
    let imgs = match images(m, p, &net, st) {
        Ok(v) => v,
        Err(e) => return e,
    };
    for _ in 0..if coherence { opts.n_pairs } else { 0 } {
        let mut found = None;
        for _ in 0..64 {
            let (Some(g), Some(h)) = (u.sample(group, rng), u.sample(group, rng)) else { break };
            let gh = group.mul(&g, &h);
            if u.contains(group, &gh) {
                found = Some((g, h, gh));
                break;
            }
        }
        let Some((g, h, gh)) = found else { continue };
        let lhs = m.act(p, &g).and_then(|q| m.act(&q, &h));
        let rhs = m.act(p, &gh);
        match (lhs, rhs) {
            (Some(a), Some(b)) if m.same_point(&a, &b) => {}
            _ => return Membership::no(st, format!("p.g.h != p.gh for g = {}, h = {}", fmt_el(&g), fmt_el(&h))),
        }
    }
    if !m.injective_by_construction() {
        let radius = u.bounding_ball(group).radius;
        let sep = radius * T::lit(8.0) / T::of_i64(opts.n_net.max(8) as i64);
        for i in 0..net.len() {
            for j in 0..net.len() {
                if i == j || m.point_gap(&imgs[i], &imgs[j]) > sep {
                    continue;
                }
                let Some(delta) = m.chart_forward(&imgs[i], &imgs[j]) else { continue };
                let g2 = group.mul(&net[i], &delta);
                if group.dist(&g2, &net[j]) <= T::coord_tol().sqrt() * (T::one() + radius) || !u.contains(group, &g2) {
                    continue;
                }
                if let Some(q) = m.act(p, &g2) {
                    if m.same_point(&q, &imgs[j]) {
                        return Membership::no(st, format!("p.g = p.h for g = {}, h = {}", fmt_el(&g2), fmt_el(&net[j])));
                    }
                }
            }
        }
    }
    Membership::yes(st)
}
