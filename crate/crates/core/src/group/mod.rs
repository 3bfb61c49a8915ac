//! Concrete locally compact second countable groups.
//!
//! A [`GroupModel`] is a finite direct product of atomic factors (real vector spaces,
//! integer lattices, cyclic groups, the complex plane, the affine group of the line).
//! Each factor contributes its group law, a proper left-invariant metric, a left Haar
//! density with respect to coordinate Lebesgue/counting measure, and its modular
//! function. The product metric is the Euclidean combination of the factor metrics.

mod ball;
mod boxes;
mod descriptor;
mod element;
mod modular;

pub use ball::{ball_sample, BallSample, BallSpec};
pub use boxes::CoordBox;
pub use descriptor::{make_group, GroupDescriptor};
pub use element::{GroupElement, Ints, Reals};
pub use modular::modular_check;

use std::fmt;
use std::marker::PhantomData;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::uniform;
use crate::scalar::Scalar;

/// Structural description of a group; the serializable half of a [`GroupModel`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupKind {
    RealVector(usize),
    IntegerLattice(usize),
    Cyclic(i64),
    ComplexPlane,
    AffineLine,
    Product(Vec<GroupKind>),
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::RealVector(n) => write!(f, "real_vector({n})"),
            GroupKind::IntegerLattice(n) => write!(f, "integer_lattice({n})"),
            GroupKind::Cyclic(m) => write!(f, "cyclic({m})"),
            GroupKind::ComplexPlane => write!(f, "complex_plane"),
            GroupKind::AffineLine => write!(f, "affine_line"),
            GroupKind::Product(fs) => {
                write!(f, "product(")?;
                for (i, k) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{k}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Atomic direct factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Atom {
    Real(usize),
    Lattice(usize),
    Cyclic(i64),
    Complex,
    Affine,
}

impl Atom {
    pub fn n_ints(self) -> usize {
        match self {
            Atom::Lattice(n) => n,
            Atom::Cyclic(_) => 1,
            _ => 0,
        }
    }

    pub fn n_reals(self) -> usize {
        match self {
            Atom::Real(n) => n,
            Atom::Complex | Atom::Affine => 2,
            _ => 0,
        }
    }

    pub fn is_discrete(self) -> bool {
        self.n_reals() == 0
    }

    fn kind(self) -> GroupKind {
        match self {
            Atom::Real(n) => GroupKind::RealVector(n),
            Atom::Lattice(n) => GroupKind::IntegerLattice(n),
            Atom::Cyclic(m) => GroupKind::Cyclic(m),
            Atom::Complex => GroupKind::ComplexPlane,
            Atom::Affine => GroupKind::AffineLine,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Slot {
    atom: Atom,
    int_at: usize,
    real_at: usize,
}

/// A concrete lcsc group with its metric, left Haar density and modular function.
#[derive(Clone, Debug)]
pub struct GroupModel<T: Scalar> {
    kind: GroupKind,
    slots: Vec<Slot>,
    n_ints: usize,
    n_reals: usize,
    _scalar: PhantomData<fn() -> T>,
}

impl<T: Scalar> PartialEq for GroupModel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

fn flatten(kind: &GroupKind, out: &mut Vec<Atom>) -> Result<()> {
    match *kind {
        GroupKind::RealVector(n) | GroupKind::IntegerLattice(n) if n == 0 => {
            Err(Error::InvalidParams(format!("{kind}: dimension must be positive")))
        }
        GroupKind::Cyclic(m) if m <= 0 => Err(Error::InvalidParams(format!("{kind}: modulus must be positive"))),
        GroupKind::RealVector(n) => {
            out.push(Atom::Real(n));
            Ok(())
        }
        GroupKind::IntegerLattice(n) => {
            out.push(Atom::Lattice(n));
            Ok(())
        }
        GroupKind::Cyclic(m) => {
            out.push(Atom::Cyclic(m));
            Ok(())
        }
        GroupKind::ComplexPlane => {
            out.push(Atom::Complex);
            Ok(())
        }
        GroupKind::AffineLine => {
            out.push(Atom::Affine);
            Ok(())
        }
        GroupKind::Product(ref fs) => {
            if fs.is_empty() {
                return Err(Error::InvalidParams("product of zero factors".into()));
            }
            fs.iter().try_for_each(|f| flatten(f, out))
        }
    }
}

impl<T: Scalar> GroupModel<T> {
    pub fn new(kind: GroupKind) -> Result<Self> {
        let mut atoms = Vec::new();
        flatten(&kind, &mut atoms)?;
        Ok(Self::from_atoms(kind, &atoms))
    }

    fn from_atoms(kind: GroupKind, atoms: &[Atom]) -> Self {
        let mut slots = Vec::with_capacity(atoms.len());
        let (mut ni, mut nr) = (0, 0);
        for &atom in atoms {
            slots.push(Slot { atom, int_at: ni, real_at: nr });
            ni += atom.n_ints();
            nr += atom.n_reals();
        }
        Self { kind, slots, n_ints: ni, n_reals: nr, _scalar: PhantomData }
    }

    /// Group generated by a sub-list of this group's atoms, in order.
    pub fn sub_product(&self, keep: &[bool]) -> Result<Self> {
        if keep.len() != self.slots.len() {
            return Err(Error::InvalidParams(format!(
                "{} has {} factors, mask has {}",
                self.kind,
                self.slots.len(),
                keep.len()
            )));
        }
        let atoms: Vec<Atom> = self.slots.iter().zip(keep).filter(|(_, &k)| k).map(|(s, _)| s.atom).collect();
        if atoms.is_empty() {
            return Err(Error::InvalidParams("subgroup with no factors".into()));
        }
        let kind = if atoms.len() == 1 { atoms[0].kind() } else { GroupKind::Product(atoms.iter().map(|a| a.kind()).collect()) };
        Ok(Self::from_atoms(kind, &atoms))
    }

    /// Embeds an element of `self.sub_product(keep)` with identity in dropped factors.
    pub fn embed_sub(&self, keep: &[bool], h: &GroupElement<T>) -> GroupElement<T> {
        let mut g = self.identity();
        let (mut hi, mut hr) = (0, 0);
        for (s, &k) in self.slots.iter().zip(keep) {
            if !k {
                continue;
            }
            let (ni, nr) = (s.atom.n_ints(), s.atom.n_reals());
            g.ints[s.int_at..s.int_at + ni].copy_from_slice(&h.ints[hi..hi + ni]);
            g.reals[s.real_at..s.real_at + nr].copy_from_slice(&h.reals[hr..hr + nr]);
            hi += ni;
            hr += nr;
        }
        g
    }

    /// Inverse of [`embed_sub`](Self::embed_sub); `None` when a dropped factor is not the identity.
    pub fn project_sub(&self, keep: &[bool], g: &GroupElement<T>) -> Option<GroupElement<T>> {
        let id = self.identity();
        let mut out = GroupElement { ints: Ints::new(), reals: Reals::new() };
        for (s, &k) in self.slots.iter().zip(keep) {
            let ints = &g.ints[s.int_at..s.int_at + s.atom.n_ints()];
            let reals = &g.reals[s.real_at..s.real_at + s.atom.n_reals()];
            if k {
                out.ints.extend_from_slice(ints);
                out.reals.extend_from_slice(reals);
            } else {
                let idr = &id.reals[s.real_at..s.real_at + s.atom.n_reals()];
                if ints.iter().any(|&n| n != 0) || reals.iter().zip(idr).any(|(a, b)| (*a - *b).abs() > T::coord_tol()) {
                    return None;
                }
            }
        }
        Some(out)
    }

    pub fn real_vector(n: usize) -> Result<Self> {
        Self::new(GroupKind::RealVector(n))
    }

    pub fn integer_lattice(n: usize) -> Result<Self> {
        Self::new(GroupKind::IntegerLattice(n))
    }

    pub fn cyclic(m: i64) -> Result<Self> {
        Self::new(GroupKind::Cyclic(m))
    }

    pub fn complex_plane() -> Self {
        Self::new(GroupKind::ComplexPlane).expect("complex plane")
    }

    pub fn affine_line() -> Self {
        Self::new(GroupKind::AffineLine).expect("affine line")
    }

    pub fn product(factors: Vec<GroupKind>) -> Result<Self> {
        Self::new(GroupKind::Product(factors))
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn name(&self) -> String {
        self.kind.to_string()
    }

    pub fn atoms(&self) -> Vec<Atom> {
        self.slots.iter().map(|s| s.atom).collect()
    }

    /// Topological dimension.
    pub fn dimension(&self) -> usize {
        self.n_reals
    }

    pub fn n_ints(&self) -> usize {
        self.n_ints
    }

    pub fn n_reals(&self) -> usize {
        self.n_reals
    }

    pub fn is_discrete(&self) -> bool {
        self.n_reals == 0
    }

    /// True when every factor has trivial modular function.
    pub fn is_unimodular(&self) -> bool {
        self.slots.iter().all(|s| s.atom != Atom::Affine)
    }

    pub fn identity(&self) -> GroupElement<T> {
        let mut g = GroupElement { ints: Ints::from_elem(0, self.n_ints), reals: Reals::from_elem(T::zero(), self.n_reals) };
        for s in &self.slots {
            if s.atom == Atom::Affine {
                g.reals[s.real_at] = T::one();
            }
        }
        g
    }

    /// Builds a validated element, reducing residues.
    pub fn element(&self, ints: &[i64], reals: &[T]) -> Result<GroupElement<T>> {
        if ints.len() != self.n_ints || reals.len() != self.n_reals {
            return Err(Error::InvalidElement(format!(
                "{} expects {} integer and {} real coordinates, got {} and {}",
                self.kind,
                self.n_ints,
                self.n_reals,
                ints.len(),
                reals.len()
            )));
        }
        if reals.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidElement("non-finite coordinate".into()));
        }
        let mut g = GroupElement::new(ints, reals);
        for s in &self.slots {
            match s.atom {
                Atom::Cyclic(m) => g.ints[s.int_at] = g.ints[s.int_at].rem_euclid(m),
                Atom::Affine if !(g.reals[s.real_at] > T::zero()) => {
                    return Err(Error::InvalidElement(format!("affine element needs a > 0, got {}", g.reals[s.real_at])));
                }
                _ => {}
            }
        }
        Ok(g)
    }

    /// Parses a flat coordinate list in factor order (complex: re, im; affine: a, b).
    pub fn from_coords(&self, coords: &[f64]) -> Result<GroupElement<T>> {
        if coords.len() != self.n_ints + self.n_reals {
            return Err(Error::InvalidElement(format!(
                "{} expects {} coordinates, got {}",
                self.kind,
                self.n_ints + self.n_reals,
                coords.len()
            )));
        }
        let mut ints = Vec::with_capacity(self.n_ints);
        let mut reals = Vec::with_capacity(self.n_reals);
        let mut at = 0;
        for s in &self.slots {
            for _ in 0..s.atom.n_ints() {
                let x = coords[at];
                if x.fract() != 0.0 {
                    return Err(Error::InvalidElement(format!("{x} is not an integer coordinate")));
                }
                ints.push(x as i64);
                at += 1;
            }
            for _ in 0..s.atom.n_reals() {
                reals.push(T::lit(coords[at]));
                at += 1;
            }
        }
        self.element(&ints, &reals)
    }

    pub fn to_coords(&self, g: &GroupElement<T>) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n_ints + self.n_reals);
        for s in &self.slots {
            out.extend(g.ints[s.int_at..s.int_at + s.atom.n_ints()].iter().map(|&n| n as f64));
            out.extend(g.reals[s.real_at..s.real_at + s.atom.n_reals()].iter().map(|x| x.as_f64()));
        }
        out
    }

    pub fn mul(&self, g: &GroupElement<T>, h: &GroupElement<T>) -> GroupElement<T> {
        let mut out = g.clone();
        for s in &self.slots {
            let (i, r) = (s.int_at, s.real_at);
            match s.atom {
                Atom::Real(n) => (r..r + n).for_each(|k| out.reals[k] = g.reals[k] + h.reals[k]),
                Atom::Complex => (r..r + 2).for_each(|k| out.reals[k] = g.reals[k] + h.reals[k]),
                Atom::Lattice(n) => (i..i + n).for_each(|k| out.ints[k] = g.ints[k] + h.ints[k]),
                Atom::Cyclic(m) => out.ints[i] = (g.ints[i] + h.ints[i]).rem_euclid(m),
                Atom::Affine => {
                    // (a, b)(a', b') = (a a', a b' + b)
                    out.reals[r] = g.reals[r] * h.reals[r];
                    out.reals[r + 1] = g.reals[r] * h.reals[r + 1] + g.reals[r + 1];
                }
            }
        }
        out
    }

    pub fn inv(&self, g: &GroupElement<T>) -> GroupElement<T> {
        let mut out = g.clone();
        for s in &self.slots {
            let (i, r) = (s.int_at, s.real_at);
            match s.atom {
                Atom::Real(n) => (r..r + n).for_each(|k| out.reals[k] = -g.reals[k]),
                Atom::Complex => (r..r + 2).for_each(|k| out.reals[k] = -g.reals[k]),
                Atom::Lattice(n) => (i..i + n).for_each(|k| out.ints[k] = -g.ints[k]),
                Atom::Cyclic(m) => out.ints[i] = (-g.ints[i]).rem_euclid(m),
                Atom::Affine => {
                    out.reals[r] = T::one() / g.reals[r];
                    out.reals[r + 1] = -g.reals[r + 1] / g.reals[r];
                }
            }
        }
        out
    }

    /// `g^{-1} h`.
    pub fn left_div(&self, g: &GroupElement<T>, h: &GroupElement<T>) -> GroupElement<T> {
        self.mul(&self.inv(g), h)
    }

    fn slot_dist_sq(&self, s: &Slot, g: &GroupElement<T>, h: &GroupElement<T>) -> T {
        let (i, r) = (s.int_at, s.real_at);
        match s.atom {
            Atom::Real(n) => (r..r + n).map(|k| (g.reals[k] - h.reals[k]).powi(2)).sum(),
            Atom::Complex => (r..r + 2).map(|k| (g.reals[k] - h.reals[k]).powi(2)).sum(),
            Atom::Lattice(n) => T::of_i64((i..i + n).map(|k| (g.ints[k] - h.ints[k]).pow(2)).sum()),
            Atom::Cyclic(m) => {
                let d = (g.ints[i] - h.ints[i]).rem_euclid(m);
                T::of_i64(d.min(m - d).pow(2))
            }
            Atom::Affine => {
                let d = hyperbolic_distance(g.reals[r], g.reals[r + 1], h.reals[r], h.reals[r + 1]);
                d * d
            }
        }
    }

    /// The proper left-invariant metric.
    pub fn dist(&self, g: &GroupElement<T>, h: &GroupElement<T>) -> T {
        if let [s] = self.slots.as_slice() {
            match s.atom {
                Atom::Affine => {
                    let r = s.real_at;
                    return hyperbolic_distance(g.reals[r], g.reals[r + 1], h.reals[r], h.reals[r + 1]);
                }
                Atom::Real(1) => return (g.reals[0] - h.reals[0]).abs(),
                _ => {}
            }
        }
        self.slots.iter().map(|s| self.slot_dist_sq(s, g, h)).sum::<T>().sqrt()
    }

    /// Distance to the identity.
    pub fn norm(&self, g: &GroupElement<T>) -> T {
        if let [s] = self.slots.as_slice() {
            match s.atom {
                Atom::Affine => return hyperbolic_distance(T::one(), T::zero(), g.reals[s.real_at], g.reals[s.real_at + 1]),
                Atom::Real(1) => return g.reals[0].abs(),
                _ => {}
            }
        }
        self.slots.iter().map(|s| self.slot_norm_sq(s, g)).sum::<T>().sqrt()
    }

    fn slot_norm_sq(&self, s: &Slot, g: &GroupElement<T>) -> T {
        let (i, r) = (s.int_at, s.real_at);
        match s.atom {
            Atom::Real(n) => (r..r + n).map(|k| g.reals[k].powi(2)).sum(),
            Atom::Complex => g.reals[r].powi(2) + g.reals[r + 1].powi(2),
            Atom::Lattice(n) => T::of_i64((i..i + n).map(|k| g.ints[k].pow(2)).sum()),
            Atom::Cyclic(m) => {
                let d = g.ints[i].rem_euclid(m);
                T::of_i64(d.min(m - d).pow(2))
            }
            Atom::Affine => hyperbolic_distance(T::one(), T::zero(), g.reals[r], g.reals[r + 1]).powi(2),
        }
    }

    /// Density of left Haar measure with respect to coordinate measure.
    pub fn haar_density(&self, g: &GroupElement<T>) -> T {
        self.slots
            .iter()
            .filter(|s| s.atom == Atom::Affine)
            .fold(T::one(), |acc, s| acc / g.reals[s.real_at].powi(2))
    }

    pub fn modular(&self, g: &GroupElement<T>) -> T {
        self.slots
            .iter()
            .filter(|s| s.atom == Atom::Affine)
            .fold(T::one(), |acc, s| acc / g.reals[s.real_at])
    }

    /// Integer coordinates exactly, real coordinates within the scalar tolerance.
    pub fn approx_eq(&self, g: &GroupElement<T>, h: &GroupElement<T>) -> bool {
        g.ints == h.ints && g.reals.iter().zip(&h.reals).all(|(&a, &b)| (a - b).abs() <= T::coord_tol() * (T::one() + a.abs().max(b.abs())))
    }

    /// Samples a point of the open ball `B(center, radius)`; full support on the ball.
    pub fn sample_ball(&self, center: &GroupElement<T>, radius: T, rng: &mut dyn RngCore) -> GroupElement<T> {
        let x = self.sample_ball_at_identity(radius, rng);
        self.mul(center, &x)
    }

    pub fn sample_ball_at_identity(&self, radius: T, rng: &mut dyn RngCore) -> GroupElement<T> {
        let mut x = self.identity();
        loop {
            for s in &self.slots {
                sample_slot(s, radius, rng, &mut x);
            }
            // each slot already lands in its own ball
            if self.slots.len() == 1 || self.norm(&x) < radius {
                return x;
            }
        }
    }

    /// About `count` points at distance `radius` from `center` (just the boundary of the
    /// continuous part over every discrete offset). Empty for discrete groups.
    pub fn ball_rim(&self, center: &GroupElement<T>, radius: T, count: usize, rng: &mut dyn RngCore) -> Vec<GroupElement<T>> {
        let continuous: Vec<&Slot> = self.slots.iter().filter(|s| !s.atom.is_discrete()).collect();
        if continuous.len() != 1 || count == 0 {
            return Vec::new();
        }
        let s = *continuous[0];
        let mut offsets: Vec<(GroupElement<T>, T)> = vec![(self.identity(), T::zero())];
        let r2 = radius * radius;
        for d in self.slots.iter().filter(|s| s.atom.is_discrete()) {
            let Some(comps) = slot_ball_ints(d.atom, radius) else { return Vec::new() };
            let mut next = Vec::new();
            for (base, d2) in &offsets {
                for (c, cd2) in &comps {
                    let t = *d2 + T::of_i64(*cd2);
                    if t < r2 {
                        let mut e = base.clone();
                        for (k, &ck) in c.iter().enumerate() {
                            e.ints[d.int_at + k] = match d.atom {
                                Atom::Cyclic(m) => ck.rem_euclid(m),
                                _ => ck,
                            };
                        }
                        next.push((e, t));
                    }
                }
            }
            offsets = next;
        }
        let per = (count / offsets.len()).max(2);
        let mut out = Vec::new();
        let r = s.real_at;
        for (base, d2) in offsets {
            let rho = (r2 - d2).max(T::zero()).sqrt();
            let phase = uniform(rng, T::zero(), T::TAU());
            for j in 0..per {
                let t = phase + T::TAU() * T::of_i64(j as i64) / T::of_i64(per as i64);
                let mut e = base.clone();
                match s.atom {
                    Atom::Real(1) => e.reals[r] = if j % 2 == 0 { rho } else { -rho },
                    Atom::Real(2) | Atom::Complex => {
                        e.reals[r] = rho * t.cos();
                        e.reals[r + 1] = rho * t.sin();
                    }
                    Atom::Real(n) => {
                        let v: Vec<T> = loop {
                            let v: Vec<T> = (0..n).map(|_| uniform(rng, -T::one(), T::one())).collect();
                            let n2: T = v.iter().map(|x| *x * *x).sum();
                            if n2 > T::lit(1e-4) && n2 <= T::one() {
                                break v.iter().map(|x| *x / n2.sqrt()).collect();
                            }
                        };
                        for (k, x) in v.into_iter().enumerate() {
                            e.reals[r + k] = rho * x;
                        }
                    }
                    Atom::Affine => {
                        let (c, w) = (rho.cosh(), rho.sinh());
                        e.reals[r] = c + w * t.sin();
                        e.reals[r + 1] = w * t.cos();
                    }
                    _ => unreachable!(),
                }
                out.push(self.mul(center, &e));
            }
        }
        out
    }

    /// Every element of `B(center, radius)` for discrete groups, sorted by distance to
    /// the center and then by coordinates. `None` for non-discrete groups or when the
    /// ball has more than `limit` elements.
    pub fn enumerate_ball(&self, center: &GroupElement<T>, radius: T, limit: usize) -> Option<Vec<GroupElement<T>>> {
        if !self.is_discrete() {
            return None;
        }
        let id = self.identity();
        let mut partial: Vec<(GroupElement<T>, T)> = vec![(id, T::zero())];
        let r2 = radius * radius;
        for s in &self.slots {
            let comps = slot_ball_ints(s.atom, radius)?;
            let mut next = Vec::new();
            for (base, d2) in &partial {
                for (c, cd2) in &comps {
                    let total = *d2 + T::of_i64(*cd2);
                    if total < r2 {
                        let mut e = base.clone();
                        e.ints[s.int_at..s.int_at + c.len()].copy_from_slice(c);
                        next.push((e, total));
                    }
                }
                if next.len() > limit {
                    return None;
                }
            }
            partial = next;
        }
        partial.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then_with(|| a.0.ints.cmp(&b.0.ints)));
        Some(partial.into_iter().map(|(e, _)| self.mul(center, &e)).collect())
    }

    /// Decides whether `B(center, radius)` lies inside `cbox` (open box, inclusive
    /// integer ranges). `None` when more than one continuous factor is present.
    pub fn ball_within_box(&self, center: &GroupElement<T>, radius: T, cbox: &CoordBox<T>) -> Option<bool> {
        let continuous: Vec<&Slot> = self.slots.iter().filter(|s| !s.atom.is_discrete()).collect();
        if continuous.len() > 1 || cbox.ints.len() != self.n_ints || cbox.reals.len() != self.n_reals {
            return None;
        }
        // Discrete offsets with their squared distances.
        let mut offsets: Vec<(Vec<i64>, T)> = vec![(center.ints.to_vec(), T::zero())];
        let r2 = radius * radius;
        for s in self.slots.iter().filter(|s| s.atom.is_discrete()) {
            let comps = slot_ball_ints(s.atom, radius)?;
            let mut next = Vec::new();
            for (base, d2) in &offsets {
                for (c, cd2) in &comps {
                    let total = *d2 + T::of_i64(*cd2);
                    if total < r2 {
                        let mut ints = base.clone();
                        for (k, &ck) in c.iter().enumerate() {
                            let at = s.int_at + k;
                            ints[at] = match s.atom {
                                Atom::Cyclic(m) => (ints[at] + ck).rem_euclid(m),
                                _ => ints[at] + ck,
                            };
                        }
                        next.push((ints, total));
                    }
                }
            }
            offsets = next;
        }
        for (ints, d2) in offsets {
            if !cbox.contains_ints(&ints) {
                return Some(false);
            }
            if let Some(s) = continuous.first() {
                let rho = (r2 - d2).max(T::zero()).sqrt();
                let r = s.real_at;
                let inside = match s.atom {
                    Atom::Real(n) => (r..r + n).all(|k| {
                        let (lo, hi) = cbox.reals[k];
                        center.reals[k] - rho >= lo && center.reals[k] + rho <= hi
                    }),
                    Atom::Complex => (r..r + 2).all(|k| {
                        let (lo, hi) = cbox.reals[k];
                        center.reals[k] - rho >= lo && center.reals[k] + rho <= hi
                    }),
                    Atom::Affine => {
                        let (a, b) = (center.reals[r], center.reals[r + 1]);
                        let (alo, ahi) = cbox.reals[r];
                        let (blo, bhi) = cbox.reals[r + 1];
                        let (lo_a, hi_a, half_b) = hyperbolic_disc_extent(a, rho);
                        lo_a >= alo && hi_a <= ahi && b - half_b >= blo && b + half_b <= bhi
                    }
                    _ => unreachable!(),
                };
                if !inside {
                    return Some(false);
                }
            }
        }
        Some(true)
    }
}

/// Hyperbolic distance between `b + a i` and `b' + a' i` in the upper half plane.
pub fn hyperbolic_distance<T: Scalar>(a: T, b: T, a2: T, b2: T) -> T {
    let num = (a - a2).powi(2) + (b - b2).powi(2);
    let two = T::lit(2.0);
    two * (num / (T::lit(4.0) * a * a2)).sqrt().asinh()
}

/// Extent of the hyperbolic disc of radius `rho` about a point at height `a`:
/// `(min height, max height, half width)`.
pub fn hyperbolic_disc_extent<T: Scalar>(a: T, rho: T) -> (T, T, T) {
    (a * (-rho).exp(), a * rho.exp(), a * rho.sinh())
}

/// Integer components of an atomic ball about the identity with squared distances.
fn slot_ball_ints<T: Scalar>(atom: Atom, radius: T) -> Option<Vec<(Vec<i64>, i64)>> {
    let r = radius.as_f64();
    if !r.is_finite() || r > 1e6 {
        return None;
    }
    let r2 = r * r;
    match atom {
        Atom::Cyclic(m) => {
            let mut out: Vec<(Vec<i64>, i64)> = (0..m)
                .map(|k| {
                    let d = k.min(m - k);
                    (vec![k], d * d)
                })
                .filter(|(_, d2)| (*d2 as f64) < r2)
                .collect();
            out.sort_by_key(|(_, d2)| *d2);
            Some(out)
        }
        Atom::Lattice(n) => {
            let k = r.ceil() as i64;
            let mut out = vec![(Vec::with_capacity(n), 0i64)];
            for _ in 0..n {
                let mut next = Vec::new();
                for (v, d2) in &out {
                    for x in -k..=k {
                        let t = d2 + x * x;
                        if (t as f64) < r2 {
                            let mut w = v.clone();
                            w.push(x);
                            next.push((w, t));
                        }
                    }
                }
                out = next;
            }
            Some(out)
        }
        _ => None,
    }
}

fn sample_slot<T: Scalar>(s: &Slot, radius: T, rng: &mut dyn RngCore, x: &mut GroupElement<T>) {
    let (i, r) = (s.int_at, s.real_at);
    match s.atom {
        Atom::Real(n) => {
            loop {
                for k in r..r + n {
                    x.reals[k] = uniform(rng, -radius, radius);
                }
                if (r..r + n).map(|k| x.reals[k].powi(2)).sum::<T>() < radius * radius {
                    break;
                }
            }
        }
        Atom::Complex => loop {
            x.reals[r] = uniform(rng, -radius, radius);
            x.reals[r + 1] = uniform(rng, -radius, radius);
            if x.reals[r].powi(2) + x.reals[r + 1].powi(2) < radius * radius {
                break;
            }
        },
        Atom::Lattice(n) => {
            let k = radius.ceil().to_i64().unwrap_or(0);
            loop {
                for j in i..i + n {
                    x.ints[j] = (rng.next_u64() % (2 * k as u64 + 1)) as i64 - k;
                }
                if T::of_i64((i..i + n).map(|j| x.ints[j].pow(2)).sum()) < radius * radius {
                    break;
                }
            }
        }
        Atom::Cyclic(m) => {
            if T::lit(m as f64 / 2.0) < radius {
                x.ints[i] = (rng.next_u64() % m as u64) as i64;
            } else {
                let k = radius.ceil().to_i64().unwrap_or(0);
                loop {
                    let j = (rng.next_u64() % (2 * k as u64 + 1)) as i64 - k;
                    if T::of_i64(j.abs()) < radius {
                        x.ints[i] = j.rem_euclid(m);
                        break;
                    }
                }
            }
        }
        Atom::Affine => {
            // Euclidean disc with centre (0, cosh r) and radius sinh r.
            let (c, w) = (radius.cosh(), radius.sinh());
            loop {
                let b = uniform(rng, -w, w);
                let a = c + uniform(rng, -w, w);
                if a > T::zero() && b * b + (a - c).powi(2) < w * w {
                    x.reals[r] = a;
                    x.reals[r + 1] = b;
                    break;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn affine_law() {
        let g = GroupModel::<f64>::affine_line();
        let x = g.element(&[], &[2.0, 1.0]).unwrap();
        let y = g.element(&[], &[0.5, 3.0]).unwrap();
        let xy = g.mul(&x, &y);
        assert_eq!(xy.reals.as_slice(), &[1.0, 7.0]);
        assert!(g.approx_eq(&g.mul(&x, &g.inv(&x)), &g.identity()));
        assert!((g.modular(&x) - 0.5).abs() < 1e-15);
        assert!((g.dist(&g.identity(), &g.element(&[], &[2.0, 0.0]).unwrap()) - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn left_invariance_of_affine_metric() {
        let g = GroupModel::<f64>::affine_line();
        let mut rng = seeded(1);
        for _ in 0..100 {
            let x = g.sample_ball(&g.identity(), 2.0, &mut rng);
            let y = g.sample_ball(&g.identity(), 2.0, &mut rng);
            let z = g.sample_ball(&g.identity(), 2.0, &mut rng);
            let d1 = g.dist(&x, &y);
            let d2 = g.dist(&g.mul(&z, &x), &g.mul(&z, &y));
            assert!((d1 - d2).abs() < 1e-9);
            assert!(g.norm(&x) < 2.0);
        }
    }

    #[test]
    fn cyclic_ball_enumeration() {
        let g = GroupModel::<f64>::cyclic(10).unwrap();
        let b = g.enumerate_ball(&g.identity(), 2.5, 100).unwrap();
        let ks: Vec<i64> = b.iter().map(|e| e.ints[0]).collect();
        assert_eq!(ks, vec![0, 1, 9, 2, 8]);
        let all = g.enumerate_ball(&g.identity(), 6.0, 100).unwrap();
        assert_eq!(all.len(), 10);
    }

    #[test]
    fn product_ball_within_box() {
        let g = GroupModel::<f64>::product(vec![GroupKind::RealVector(1), GroupKind::IntegerLattice(1)]).unwrap();
        let c = g.element(&[0], &[0.0]).unwrap();
        let bx = CoordBox { ints: vec![(-1, 1)], reals: vec![(-1.0, 1.0)] };
        assert_eq!(g.ball_within_box(&c, 1.0, &bx), Some(true));
        assert_eq!(g.ball_within_box(&c, 1.5, &bx), Some(false));
    }

    #[test]
    fn coords_roundtrip() {
        let g = GroupModel::<f64>::product(vec![GroupKind::Cyclic(3), GroupKind::AffineLine]).unwrap();
        let x = g.from_coords(&[4.0, 2.0, -1.0]).unwrap();
        assert_eq!(x.ints[0], 1);
        assert_eq!(g.to_coords(&x), vec![1.0, 2.0, -1.0]);
        assert!(g.from_coords(&[0.5, 2.0, 1.0]).is_err());
        assert!(g.from_coords(&[0.0, -2.0, 1.0]).is_err());
    }
}
