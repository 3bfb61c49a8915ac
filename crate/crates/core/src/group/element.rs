use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::scalar::Scalar;

pub type Ints = SmallVec<[i64; 2]>;
pub type Reals<T> = SmallVec<[T; 4]>;

/// A group element in the coordinate layout of its [`GroupModel`](super::GroupModel).
///
/// Discrete components (lattice coordinates, residues) live in `ints` and are compared
/// exactly; continuous components live in `reals`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupElement<T: Scalar> {
    pub ints: Ints,
    pub reals: Reals<T>,
}

impl<T: Scalar> GroupElement<T> {
    pub fn new(ints: &[i64], reals: &[T]) -> Self {
        Self {
            ints: ints.iter().copied().collect(),
            reals: reals.iter().copied().collect(),
        }
    }

    pub fn real(x: T) -> Self {
        Self::new(&[], &[x])
    }

    pub fn reals(xs: &[T]) -> Self {
        Self::new(&[], xs)
    }

    pub fn int(n: i64) -> Self {
        Self::new(&[n], &[])
    }

    pub fn ints(ns: &[i64]) -> Self {
        Self::new(ns, &[])
    }
}
