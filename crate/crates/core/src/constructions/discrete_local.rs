use std::sync::Arc;

use rand::{Rng, RngCore};

use super::discrete::DiscreteSoficMap;
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupModel};
use crate::scalar::Scalar;
use crate::space::{LocalSpace, SpacePoint, Volume, WindowSet};

/// `V` with counting measure and `p.g = σ(g)⁻¹p`, defined when
/// `injrad(σ,p) > |g|` or `injrad(σ,σ(g)⁻¹p) > |g|`.
#[derive(Clone, Debug)]
pub struct DiscreteLocalSpace<T: Scalar> {
    map: Arc<DiscreteSoficMap>,
    group: GroupModel<T>,
    radii: Vec<f64>,
    /// Support indices sorted by norm.
    by_norm: Vec<usize>,
}

pub fn discrete_to_local<T: Scalar>(map: &DiscreteSoficMap) -> Result<DiscreteLocalSpace<T>> {
    if !map.is_normalized() {
        return Err(Error::NotNormalized("sigma(1) must be the identity and sigma(g^-1) = sigma(g)^-1".into()));
    }
    let group = map.group().descriptor().build()?;
    let mut by_norm: Vec<usize> = (0..map.support().len()).collect();
    let norms = map.support_norms();
    by_norm.sort_by(|&a, &b| norms[a].partial_cmp(&norms[b]).unwrap());
    Ok(DiscreteLocalSpace { map: Arc::new(map.clone()), group, radii: map.injectivity_radii(), by_norm })
}

impl<T: Scalar> DiscreteLocalSpace<T> {
    pub fn map(&self) -> &DiscreteSoficMap {
        &self.map
    }

    pub fn injectivity_radius(&self, v: usize) -> f64 {
        self.radii[v]
    }

    /// Index form of the action.
    pub fn act_index(&self, v: usize, g: usize) -> Option<usize> {
        let w = self.map.inverse_at(g)[v] as usize;
        let n = self.map.support_norms()[g];
        (self.radii[v] > n || self.radii[w] > n).then_some(w)
    }

    fn point_index(&self, p: &SpacePoint<T>) -> Option<usize> {
        match p.labels.as_slice() {
            [v] if *v >= 0 && (*v as usize) < self.map.carrier_size() => Some(*v as usize),
            _ => None,
        }
    }
}

impl<T: Scalar> LocalSpace<T> for DiscreteLocalSpace<T> {
    fn name(&self) -> String {
        format!("discrete_local({}, |V|={})", self.group.name(), self.map.carrier_size())
    }

    fn group(&self) -> &GroupModel<T> {
        &self.group
    }

    fn act(&self, p: &SpacePoint<T>, g: &GroupElement<T>) -> Option<SpacePoint<T>> {
        let v = self.point_index(p)?;
        let i = self.map.index_of(&g.ints)?;
        self.act_index(v, i).map(|w| SpacePoint::label(w as i64))
    }

    fn make_point(&self, labels: &[i64], _coords: &[T]) -> Option<SpacePoint<T>> {
        let p = SpacePoint::new(labels, &[]);
        self.point_index(&p).map(|_| p)
    }

    fn sample_point(&self, rng: &mut dyn RngCore) -> SpacePoint<T> {
        SpacePoint::label(rng.gen_range(0..self.map.carrier_size()) as i64)
    }

    fn total_volume(&self) -> Volume<T> {
        Volume::Finite(T::of_i64(self.map.carrier_size() as i64))
    }

    fn chart_radius(&self, p: &SpacePoint<T>) -> T {
        let r = self.point_index(p).map_or(0.0, |v| self.radii[v]);
        T::lit(r.min(1e12))
    }

    fn chart_forward(&self, p: &SpacePoint<T>, q: &SpacePoint<T>) -> Option<GroupElement<T>> {
        let (v, w) = (self.point_index(p)?, self.point_index(q)?);
        let norms = self.map.support_norms();
        self.by_norm
            .iter()
            .take_while(|&&i| norms[i] < self.radii[v])
            .find(|&&i| self.map.inverse_at(i)[v] as usize == w)
            .map(|&i| GroupElement::ints(&self.map.support()[i]))
    }

    fn sampling_scale(&self) -> T {
        T::lit(self.map.support_norms().iter().cloned().fold(1.0, f64::max))
    }

    fn carrier(&self) -> Option<Vec<SpacePoint<T>>> {
        Some((0..self.map.carrier_size() as i64).map(SpacePoint::label).collect())
    }

    fn membership_oracle(&self, p: &SpacePoint<T>, u: &WindowSet<T>) -> Option<bool> {
        let v = self.point_index(p)?;
        let elems = u.enumerate(&self.group, 1 << 16)?;
        let mut idx = Vec::with_capacity(elems.len());
        for g in &elems {
            match self.map.index_of(&g.ints) {
                Some(i) => idx.push(i),
                None => return Some(false),
            }
        }
        let mut images = Vec::with_capacity(idx.len());
        for &i in &idx {
            match self.act_index(v, i) {
                Some(w) => images.push(w),
                None => return Some(false),
            }
        }
        let mut sorted = images.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Some(false);
        }
        for (a, g) in elems.iter().enumerate() {
            for (b, h) in elems.iter().enumerate() {
                let gh = self.group.mul(g, h);
                if !u.contains(&self.group, &gh) {
                    continue;
                }
                let k = self.map.index_of(&gh.ints)?;
                let direct = self.act_index(v, k);
                if direct.is_none() || self.act_index(images[a], idx[b]) != direct {
                    return Some(false);
                }
            }
        }
        Some(true)
    }
}

/// Extends each partial injection `α(·, g⁻¹)` to a permutation `σ(g)`; points
/// where `α` is undefined are matched greedily to the smallest unused targets.
pub fn local_to_discrete<T: Scalar, M: LocalSpace<T> + ?Sized>(m: &M, support: &[Vec<i64>]) -> Result<DiscreteSoficMap> {
    let group = m.group();
    if !group.is_discrete() {
        return Err(Error::InvalidParams(format!("{} is not discrete", group.name())));
    }
    let points = m.carrier().ok_or_else(|| Error::InfiniteCarrier(m.name()))?;
    let index: std::collections::HashMap<Vec<i64>, usize> = points.iter().enumerate().map(|(i, p)| (p.labels.to_vec(), i)).collect();
    let n = points.len();
    let mut perms = Vec::with_capacity(support.len());
    for g in support {
        let ginv = group.inv(&group.element(g, &[])?);
        let mut perm = vec![u32::MAX; n];
        let mut used = vec![false; n];
        for (i, p) in points.iter().enumerate() {
            if let Some(j) = m.act(p, &ginv).and_then(|q| index.get(q.labels.as_slice()).copied()) {
                if !used[j] {
                    used[j] = true;
                    perm[i] = j as u32;
                }
            }
        }
        let mut free = (0..n).filter(|&j| !used[j]);
        for slot in perm.iter_mut().filter(|s| **s == u32::MAX) {
            *slot = free.next().expect("as many free targets as unmatched sources") as u32;
        }
        perms.push(perm);
    }
    let g64: GroupModel<f64> = group.descriptor().build()?;
    DiscreteSoficMap::new(g64, n, support.to_vec(), perms)
}
