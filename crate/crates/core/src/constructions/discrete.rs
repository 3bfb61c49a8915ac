use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupDescriptor, GroupElement, GroupKind, GroupModel};
use crate::rng::seeded;

/// A set map `σ: G → sym(V)` on a finite support of a discrete group, with
/// `V = {0, …, n−1}`.
#[derive(Clone, Debug)]
pub struct DiscreteSoficMap {
    group: GroupModel<f64>,
    carrier_size: usize,
    support: Vec<Vec<i64>>,
    perms: Vec<Vec<u32>>,
    inverses: Vec<Vec<u32>>,
    index: HashMap<Vec<i64>, usize>,
    norms: Vec<f64>,
}

impl PartialEq for DiscreteSoficMap {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group
            && self.carrier_size == other.carrier_size
            && self.support.len() == other.support.len()
            && self.support.iter().zip(&self.perms).all(|(g, p)| other.perm(g) == Some(p.as_slice()))
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    group: GroupDescriptor,
    carrier_size: usize,
    support: Vec<Vec<i64>>,
    perms: Vec<Vec<u32>>,
}

fn invert(p: &[u32]) -> Vec<u32> {
    let mut inv = vec![0u32; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j as usize] = i as u32;
    }
    inv
}

/// Result of normalizing; `w_size` is `|∩_{g∈U} σ(g)⁻¹V[σ,U²]|` when σ is
/// supported on `U⁴`.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub map: DiscreteSoficMap,
    pub window: Vec<Vec<i64>>,
    pub w_size: Option<usize>,
    pub good_size: usize,
}

impl DiscreteSoficMap {
    pub fn new(group: GroupModel<f64>, carrier_size: usize, support: Vec<Vec<i64>>, perms: Vec<Vec<u32>>) -> Result<Self> {
        if !group.is_discrete() {
            return Err(Error::InvalidParams(format!("{} is not discrete", group.name())));
        }
        if support.len() != perms.len() {
            return Err(Error::InvalidParams("support and perms differ in length".into()));
        }
        if carrier_size == 0 || carrier_size > u32::MAX as usize {
            return Err(Error::InvalidParams(format!("carrier size {carrier_size} out of range")));
        }
        let mut index = HashMap::with_capacity(support.len());
        let mut norms = Vec::with_capacity(support.len());
        for (i, g) in support.iter().enumerate() {
            let e = group.element(g, &[])?;
            if e.ints.as_slice() != g.as_slice() {
                return Err(Error::InvalidElement(format!("{g:?} is not reduced")));
            }
            if index.insert(g.clone(), i).is_some() {
                return Err(Error::InvalidParams(format!("{g:?} listed twice")));
            }
            norms.push(group.norm(&e));
        }
        for (g, p) in support.iter().zip(&perms) {
            let mut seen = vec![false; carrier_size];
            if p.len() != carrier_size || !p.iter().all(|&j| (j as usize) < carrier_size && !std::mem::replace(&mut seen[j as usize], true)) {
                return Err(Error::NotPermutation(format!("sigma({g:?}) is not a permutation of 0..{carrier_size}")));
            }
        }
        let inverses = perms.par_iter().map(|p| invert(p)).collect();
        Ok(DiscreteSoficMap { group, carrier_size, support, perms, inverses, index, norms })
    }

    /// `σ(n)v = v + n mod m` for `ℤ → sym(ℤ/m)` on `|n| ≤ radius`.
    pub fn exact_cyclic(m: usize, radius: i64) -> Result<Self> {
        Self::exact_torus(1, m, radius)
    }

    /// `σ(z)v = v + z` on `(ℤ/m)ⁿ` for `z ∈ ℤⁿ`, `|z| ≤ radius`; points are
    /// indexed in mixed radix, first coordinate fastest.
    pub fn exact_torus(n: usize, m: usize, radius: i64) -> Result<Self> {
        if m == 0 || radius < 0 {
            return Err(Error::InvalidParams(format!("need m > 0 and radius >= 0, got m={m}, radius={radius}")));
        }
        let size = m.checked_pow(n as u32).filter(|&s| s <= u32::MAX as usize).ok_or_else(|| Error::InvalidParams("carrier too large".into()))?;
        let group = GroupModel::integer_lattice(n)?;
        let ball = group
            .enumerate_ball(&group.identity(), radius as f64 + 0.5, 1 << 22)
            .ok_or_else(|| Error::InvalidParams("support too large".into()))?;
        let support: Vec<Vec<i64>> = ball.iter().map(|g| g.ints.to_vec()).collect();
        let mi = m as i64;
        let perms = support
            .par_iter()
            .map(|z| {
                (0..size)
                    .map(|v| {
                        let (mut rest, mut out, mut place) = (v as i64, 0i64, 1i64);
                        for &zi in z {
                            out += (rest % mi + zi).rem_euclid(mi) * place;
                            rest /= mi;
                            place *= mi;
                        }
                        out as u32
                    })
                    .collect()
            })
            .collect();
        Self::new(group, size, support, perms)
    }

    pub fn group(&self) -> &GroupModel<f64> {
        &self.group
    }

    pub fn carrier_size(&self) -> usize {
        self.carrier_size
    }

    pub fn support(&self) -> &[Vec<i64>] {
        &self.support
    }

    pub fn support_norms(&self) -> &[f64] {
        &self.norms
    }

    pub fn index_of(&self, g: &[i64]) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn perm(&self, g: &[i64]) -> Option<&[u32]> {
        self.index_of(g).map(|i| self.perms[i].as_slice())
    }

    pub fn perm_at(&self, i: usize) -> &[u32] {
        &self.perms[i]
    }

    pub fn inverse_at(&self, i: usize) -> &[u32] {
        &self.inverses[i]
    }

    pub(crate) fn identity_key(&self) -> Vec<i64> {
        self.group.identity().ints.to_vec()
    }

    pub(crate) fn mul_keys(&self, g: &[i64], h: &[i64]) -> Vec<i64> {
        self.group.mul(&GroupElement::ints(g), &GroupElement::ints(h)).ints.to_vec()
    }

    pub(crate) fn inv_key(&self, g: &[i64]) -> Vec<i64> {
        self.group.inv(&GroupElement::ints(g)).ints.to_vec()
    }

    fn indices(&self, u: &[Vec<i64>]) -> Result<Vec<usize>> {
        u.iter()
            .map(|g| self.index_of(g).ok_or_else(|| Error::InsufficientSupport(format!("{g:?} outside the support"))))
            .collect()
    }

    /// Support index of `u[i]·u[j]` for all pairs.
    fn product_table(&self, u: &[Vec<i64>]) -> Result<Vec<usize>> {
        let mut t = Vec::with_capacity(u.len() * u.len());
        for g in u {
            for h in u {
                let gh = self.mul_keys(g, h);
                t.push(self.index_of(&gh).ok_or_else(|| Error::InsufficientSupport(format!("{g:?}·{h:?} outside the support")))?);
            }
        }
        Ok(t)
    }

    /// Indicator of `V[σ,U]`: `σ(g)σ(h)v = σ(gh)v` and `g ↦ σ(g)v` injective on `U`.
    pub fn good_set(&self, u: &[Vec<i64>]) -> Result<Vec<bool>> {
        let mut u = u.to_vec();
        u.sort();
        u.dedup();
        let idx = self.indices(&u)?;
        let table = self.product_table(&u)?;
        let k = u.len();
        Ok((0..self.carrier_size)
            .into_par_iter()
            .map(|v| {
                let images: Vec<u32> = idx.iter().map(|&i| self.perms[i][v]).collect();
                let mut sorted = images.clone();
                sorted.sort_unstable();
                if sorted.windows(2).any(|w| w[0] == w[1]) {
                    return false;
                }
                (0..k).all(|a| (0..k).all(|b| self.perms[idx[a]][images[b] as usize] == self.perms[table[a * k + b]][v]))
            })
            .collect())
    }

    pub fn good_count(&self, u: &[Vec<i64>]) -> Result<usize> {
        Ok(self.good_set(u)?.iter().filter(|&&b| b).count())
    }

    /// `1 − |V[σ,U]| / |V|`.
    pub fn defect(&self, u: &[Vec<i64>]) -> Result<f64> {
        Ok(1.0 - self.good_count(u)? as f64 / self.carrier_size as f64)
    }

    /// `σ(1) = id` and `σ(g⁻¹) = σ(g)⁻¹` wherever both lie in the support.
    pub fn is_normalized(&self) -> bool {
        let id = self.identity_key();
        if let Some(p) = self.perm(&id) {
            if p.iter().enumerate().any(|(i, &j)| i as u32 != j) {
                return false;
            }
        }
        self.support.iter().enumerate().all(|(i, g)| match self.index_of(&self.inv_key(g)) {
            Some(j) => self.perms[j] == self.inverses[i],
            None => true,
        })
    }

    /// Composes `σ(g)` with a random transposition for `⌈δ·|support|⌉`
    /// support elements chosen uniformly.
    pub fn corrupt(&self, delta: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&delta) {
            return Err(Error::InvalidParams(format!("corruption fraction {delta} outside [0, 1]")));
        }
        let mut rng = seeded(seed);
        let mut order: Vec<usize> = (0..self.support.len()).collect();
        order.shuffle(&mut rng);
        let count = (delta * self.support.len() as f64).ceil() as usize;
        let mut perms = self.perms.clone();
        let n = self.carrier_size as u32;
        for &i in order.iter().take(count) {
            if n < 2 {
                break;
            }
            let a = rng.gen_range(0..n);
            let b = (a + rng.gen_range(1..n)) % n;
            // σ(g)∘(a b)
            perms[i].swap(a as usize, b as usize);
        }
        Self::new(self.group.clone(), self.carrier_size, self.support.clone(), perms)
    }

    /// Returns a copy with `σ(g)` replaced for the listed elements.
    pub fn with_perms(&self, replace: &[(Vec<i64>, Vec<u32>)]) -> Result<Self> {
        let mut perms = self.perms.clone();
        for (g, p) in replace {
            let i = self.index_of(g).ok_or_else(|| Error::InsufficientSupport(format!("{g:?} outside the support")))?;
            perms[i] = p.clone();
        }
        Self::new(self.group.clone(), self.carrier_size, self.support.clone(), perms)
    }

    pub fn to_json(&self) -> Result<String> {
        let w = Wire {
            group: self.group.descriptor(),
            carrier_size: self.carrier_size,
            support: self.support.clone(),
            perms: self.perms.clone(),
        };
        Ok(serde_json::to_string(&w)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let w: Wire = serde_json::from_str(s)?;
        Self::new(w.group.build()?, w.carrier_size, w.support, w.perms)
    }

    pub fn group_kind(&self) -> &GroupKind {
        self.group.kind()
    }

    /// `injrad(σ,p)` for every point: supremum of `η` such that on `B(η)`
    /// `σ(gh)⁻¹p = σ(h)⁻¹σ(g)⁻¹p` and `g ↦ σ(g)⁻¹p` is injective. Shells
    /// whose products leave the support stop the search; the value reported
    /// is then the norm of the first unverified shell.
    pub fn injectivity_radii(&self) -> Vec<f64> {
        let mut order: Vec<usize> = (0..self.support.len()).collect();
        order.sort_by(|&a, &b| self.norms[a].partial_cmp(&self.norms[b]).unwrap().then_with(|| self.support[a].cmp(&self.support[b])));
        let mut shells: Vec<(f64, Vec<usize>)> = Vec::new();
        for &i in &order {
            match shells.last_mut() {
                Some((d, s)) if (self.norms[i] - *d).abs() < 1e-9 => s.push(i),
                _ => shells.push((self.norms[i], vec![i])),
            }
        }
        // Position of each support element in `order`, and products among them.
        let n = order.len();
        let mut table = vec![u32::MAX; n * n];
        for (a, &i) in order.iter().enumerate() {
            for (b, &j) in order.iter().enumerate() {
                if let Some(k) = self.index_of(&self.mul_keys(&self.support[i], &self.support[j])) {
                    table[a * n + b] = k as u32;
                }
            }
        }
        let beyond = self.first_norm_outside();
        (0..self.carrier_size)
            .into_par_iter()
            .map(|p| {
                let mut images: Vec<u32> = Vec::with_capacity(n);
                let mut seen = std::collections::HashSet::with_capacity(n);
                let mut count = 0;
                for (d, shell) in &shells {
                    for &i in shell {
                        let img = self.inverses[i][p];
                        if !seen.insert(img) {
                            return *d;
                        }
                        images.push(img);
                    }
                    let new = count..count + shell.len();
                    count += shell.len();
                    for a in 0..count {
                        for b in 0..count {
                            if !new.contains(&a) && !new.contains(&b) {
                                continue;
                            }
                            let k = table[a * n + b];
                            if k == u32::MAX {
                                return *d;
                            }
                            // σ(gh)⁻¹p against σ(h)⁻¹σ(g)⁻¹p
                            let lhs = self.inverses[k as usize][p];
                            let rhs = self.inverses[order[b]][images[a] as usize];
                            if lhs != rhs {
                                return *d;
                            }
                        }
                    }
                }
                beyond
            })
            .collect()
    }

    /// Smallest norm of a group element outside the support (∞ if none).
    fn first_norm_outside(&self) -> f64 {
        let r = self.norms.iter().cloned().fold(0.0, f64::max);
        let id = self.group.identity();
        match self.group.enumerate_ball(&id, r + 2.0, 1 << 22) {
            Some(all) => all.iter().filter(|g| self.index_of(&g.ints).is_none()).map(|g| self.group.norm(g)).fold(f64::INFINITY, f64::min),
            None => r,
        }
    }
}

fn symmetrize(map: &DiscreteSoficMap, u: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = u.iter().flat_map(|g| [g.clone(), map.inv_key(g)]).collect();
    out.push(map.identity_key());
    out.sort();
    out.dedup();
    out
}

/// Makes `σ(1)` the identity and `σ(g⁻¹) = σ(g)⁻¹`. Elements of order two in
/// `U²` keep only the 2-cycles of `σ(g)`; other order-two elements become the
/// identity; for each pair `{g, g⁻¹}` the larger key keeps `σ(g)`.
pub fn normalize_discrete(map: &DiscreteSoficMap, u: &[Vec<i64>]) -> Result<Normalized> {
    let u1 = symmetrize(map, u);
    let mut u2: Vec<Vec<i64>> = u1.iter().flat_map(|g| u1.iter().map(|h| map.mul_keys(g, h))).collect();
    u2.sort();
    u2.dedup();
    for g in &u2 {
        if map.index_of(g).is_none() {
            return Err(Error::InsufficientSupport(format!("{g:?} in U² is outside the support")));
        }
    }
    for g in map.support() {
        if map.index_of(&map.inv_key(g)).is_none() {
            return Err(Error::InsufficientSupport(format!("support is not symmetric at {g:?}")));
        }
    }
    let id = map.identity_key();
    let in_u2 = |g: &Vec<i64>| u2.binary_search(g).is_ok();
    let identity: Vec<u32> = (0..map.carrier_size as u32).collect();
    let perms: Vec<Vec<u32>> = map
        .support()
        .par_iter()
        .enumerate()
        .map(|(i, g)| {
            let ginv = map.inv_key(g);
            if *g == id {
                identity.clone()
            } else if ginv == *g {
                if !in_u2(g) {
                    return identity.clone();
                }
                let p = &map.perms[i];
                (0..p.len()).map(|v| if p[p[v] as usize] as usize == v { p[v] } else { v as u32 }).collect()
            } else if *g > ginv {
                map.perms[i].clone()
            } else {
                map.inverses[map.index_of(&ginv).unwrap()].clone()
            }
        })
        .collect();
    let out = DiscreteSoficMap::new(map.group.clone(), map.carrier_size, map.support.clone(), perms)?;
    let w_size = map.good_set(&u2).ok().map(|good| {
        let idx = map.indices(&u1).unwrap();
        (0..map.carrier_size).filter(|&v| idx.iter().all(|&i| good[map.perms[i][v] as usize])).count()
    });
    let good_size = out.good_count(&u1)?;
    Ok(Normalized { map: out, window: u1, w_size, good_size })
}
