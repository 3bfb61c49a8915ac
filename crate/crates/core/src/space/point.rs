use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::scalar::Scalar;

/// A point of a local space: discrete labels (residues, carrier indices, sheets)
/// followed by continuous coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpacePoint<T: Scalar> {
    pub labels: SmallVec<[i64; 2]>,
    pub coords: SmallVec<[T; 4]>,
}

impl<T: Scalar> SpacePoint<T> {
    pub fn new(labels: &[i64], coords: &[T]) -> Self {
        Self { labels: labels.iter().copied().collect(), coords: coords.iter().copied().collect() }
    }

    pub fn coords(coords: &[T]) -> Self {
        Self::new(&[], coords)
    }

    pub fn label(v: i64) -> Self {
        Self::new(&[v], &[])
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.labels.iter().map(|&l| l as f64).chain(self.coords.iter().map(|c| c.as_f64())).collect()
    }
}

/// Measure of a whole space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Volume<T> {
    Finite(T),
    Infinite,
}

impl<T: Scalar> Volume<T> {
    pub fn finite(self) -> Option<T> {
        match self {
            Volume::Finite(v) => Some(v),
            Volume::Infinite => None,
        }
    }
}
