use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{LocalSpace, SpacePoint};
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::linalg::jacobian_det;
use crate::rng::{stream, uniform};
use crate::scalar::Scalar;

/// A measurable region of a local space, in point coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Region<T: Scalar> {
    Empty,
    /// Fixed labels times a coordinate box `[lo, hi]`.
    Box { labels: Vec<i64>, lo: Vec<T>, hi: Vec<T> },
    Points(Vec<SpacePoint<T>>),
    /// Disjoint union.
    Union(Vec<Region<T>>),
}

impl<T: Scalar> Region<T> {
    pub fn interval(lo: T, hi: T) -> Self {
        Region::Box { labels: Vec::new(), lo: vec![lo], hi: vec![hi] }
    }

    pub fn coord_box(lo: &[T], hi: &[T]) -> Self {
        Region::Box { labels: Vec::new(), lo: lo.to_vec(), hi: hi.to_vec() }
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Option<(Vec<i64>, Vec<T>)> {
        match self {
            Region::Box { labels, lo, hi } => Some((labels.clone(), lo.iter().zip(hi).map(|(&a, &b)| uniform(rng, a, b)).collect())),
            _ => None,
        }
    }
}

/// Density of the canonical measure against point coordinates at `q`:
/// `ρ_G(1) · |det D f_q|` at `q`, by finite differences through the chart.
pub fn point_density<T: Scalar, M: LocalSpace<T> + ?Sized>(m: &M, q: &SpacePoint<T>) -> Option<T> {
    let base = m.group().haar_density(&m.group().identity());
    if q.coords.len() != m.group().n_reals() {
        return None;
    }
    let j = jacobian_det(&q.coords, |c| {
        let q2 = m.make_point(&q.labels, c)?;
        Some(m.chart_forward(q, &q2)?.reals.to_vec())
    })?;
    Some(base * j.abs())
}

/// Density of `vol_M(K.g)` pulled back to `K`: `ρ_G(1) |det D_{q'} f_{q.g}(q'.g)|` at `q' = q`.
fn moved_density<T: Scalar, M: LocalSpace<T> + ?Sized>(m: &M, q: &SpacePoint<T>, g: &GroupElement<T>) -> Option<T> {
    let qg = m.act(q, g)?;
    let base = m.group().haar_density(&m.group().identity());
    let j = jacobian_det(&q.coords, |c| {
        let q2 = m.make_point(&q.labels, c)?;
        let q2g = m.act(&q2, g)?;
        Some(m.chart_forward(&qg, &q2g)?.reals.to_vec())
    })?;
    Some(base * j.abs())
}

fn box_volume<T: Scalar, M: LocalSpace<T> + ?Sized>(m: &M, labels: &[i64], lo: &[T], hi: &[T], n_cells: usize, depth: u32) -> Result<T> {
    if lo.len() != hi.len() || lo.iter().zip(hi).any(|(a, b)| !(b > a)) {
        return Err(Error::DegenerateBox("region box has no interior".into()));
    }
    let d = lo.len();
    let k = ((n_cells.max(1) as f64).powf(1.0 / d.max(1) as f64).ceil() as usize).max(1);
    let mut total = T::zero();
    let mut idx = vec![0usize; d];
    loop {
        let mut clo = Vec::with_capacity(d);
        let mut chi = Vec::with_capacity(d);
        for j in 0..d {
            let h = (hi[j] - lo[j]) / T::of_i64(k as i64);
            clo.push(lo[j] + h * T::of_i64(idx[j] as i64));
            chi.push(lo[j] + h * T::of_i64(idx[j] as i64 + 1));
        }
        let center: Vec<T> = clo.iter().zip(&chi).map(|(&a, &b)| (a + b) / T::lit(2.0)).collect();
        let p = m
            .make_point(labels, &center)
            .ok_or_else(|| Error::OutsideAtlas(format!("cell centre {center:?} is not a point of {}", m.name())))?;
        let half_diag = clo.iter().zip(&chi).map(|(a, b)| (*b - *a).powi(2)).sum::<T>().sqrt() / T::lit(2.0);
        if half_diag >= m.chart_radius(&p) && depth < 6 {
            total = total + box_volume(m, labels, &clo, &chi, 1 << d, depth + 1)?;
        } else {
            let rho = point_density(m, &p).ok_or_else(|| Error::OutsideAtlas(format!("no chart at {center:?}")))?;
            let cell: T = clo.iter().zip(&chi).fold(T::one(), |acc, (a, b)| acc * (*b - *a));
            total = total + rho * cell;
        }
        let mut j = 0;
        loop {
            if j == d {
                return Ok(total);
            }
            idx[j] += 1;
            if idx[j] < k {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

/// `vol_M(K)`: the Haar measure of chart images, summed over cells small enough to
/// lie in one chart each.
pub fn canonical_volume<T: Scalar, M: LocalSpace<T> + ?Sized>(m: &M, region: &Region<T>, n_cells: usize) -> Result<T> {
    match region {
        Region::Empty => Ok(T::zero()),
        Region::Box { labels, lo, hi } if lo.is_empty() && hi.is_empty() => {
            let p = m.make_point(labels, &[]).ok_or_else(|| Error::OutsideAtlas(format!("{labels:?}")))?;
            point_density(m, &p).ok_or_else(|| Error::OutsideAtlas(format!("{labels:?}")))
        }
        Region::Box { labels, lo, hi } => box_volume(m, labels, lo, hi, n_cells, 0),
        Region::Points(ps) => ps.iter().try_fold(T::zero(), |acc, p| {
            let q = m.make_point(&p.labels, &p.coords).ok_or_else(|| Error::OutsideAtlas(format!("{:?}", p.to_f64())))?;
            Ok(acc + point_density(m, &q).ok_or_else(|| Error::OutsideAtlas(format!("{:?}", p.to_f64())))?)
        }),
        Region::Union(rs) => rs.iter().try_fold(T::zero(), |acc, r| Ok(acc + canonical_volume(m, r, n_cells)?)),
    }
}

/// Monte Carlo estimate of `vol_M(K.g) / vol_M(K)` by change of variables through
/// `q ↦ q.g`. Fails when some sampled `q.g` is undefined.
pub fn measure_distortion_check<T: Scalar, M: LocalSpace<T> + ?Sized>(
    m: &M,
    region: &Region<T>,
    g: &GroupElement<T>,
    n_samples: usize,
    seed: u64,
) -> Result<T> {
    let points: Vec<SpacePoint<T>> = match region {
        Region::Points(ps) => ps.clone(),
        Region::Box { .. } => {
            let chunk = 4096;
            let n_chunks = n_samples.div_ceil(chunk);
            let parts: Vec<Result<(T, T)>> = (0..n_chunks)
                .into_par_iter()
                .map(|c| {
                    let mut rng = stream(seed, c as u64);
                    let (mut base, mut moved) = (T::zero(), T::zero());
                    for _ in 0..chunk.min(n_samples - c * chunk) {
                        let (labels, coords) = region.sample(&mut rng).expect("box region");
                        let q = m
                            .make_point(&labels, &coords)
                            .ok_or_else(|| Error::OutsideAtlas(format!("{coords:?} is not a point of {}", m.name())))?;
                        let dq = point_density(m, &q).ok_or_else(|| Error::OutsideAtlas(format!("{coords:?}")))?;
                        let dg = moved_density(m, &q, g)
                            .ok_or_else(|| Error::NotWellDefined(format!("K.g undefined near {coords:?}")))?;
                        base = base + dq;
                        moved = moved + dg;
                    }
                    Ok((base, moved))
                })
                .collect();
            let (mut base, mut moved) = (T::zero(), T::zero());
            for p in parts {
                let (b, mv) = p?;
                base = base + b;
                moved = moved + mv;
            }
            if !(base > T::zero()) {
                return Err(Error::DegenerateBox("region has zero volume".into()));
            }
            return Ok(moved / base);
        }
        Region::Empty => return Err(Error::DegenerateBox("empty region".into())),
        Region::Union(_) => return Err(Error::InvalidParams("distortion check takes a box or a point set".into())),
    };
    let (mut base, mut moved) = (T::zero(), T::zero());
    for q in &points {
        base = base + point_density(m, q).ok_or_else(|| Error::OutsideAtlas(format!("{:?}", q.to_f64())))?;
        moved = moved + moved_density(m, q, g).ok_or_else(|| Error::NotWellDefined(format!("{:?}.g undefined", q.to_f64())))?;
    }
    if !(base > T::zero()) {
        return Err(Error::DegenerateBox("empty point set".into()));
    }
    Ok(moved / base)
}
