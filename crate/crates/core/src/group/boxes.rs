use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// An axis-aligned box in group coordinates: inclusive integer ranges for the discrete
/// coordinates and intervals for the continuous ones.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoordBox<T> {
    #[serde(default)]
    pub ints: Vec<(i64, i64)>,
    #[serde(default)]
    pub reals: Vec<(T, T)>,
}

impl<T: Scalar> CoordBox<T> {
    pub fn reals(reals: &[(T, T)]) -> Self {
        Self { ints: Vec::new(), reals: reals.to_vec() }
    }

    pub fn cube(dim: usize, lo: T, hi: T) -> Self {
        Self::reals(&vec![(lo, hi); dim])
    }

    pub fn validate(&self) -> Result<()> {
        for (i, &(lo, hi)) in self.ints.iter().enumerate() {
            if hi < lo {
                return Err(Error::DegenerateBox(format!("integer range {i} is empty ({lo}..={hi})")));
            }
        }
        for (i, &(lo, hi)) in self.reals.iter().enumerate() {
            if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
                return Err(Error::DegenerateBox(format!("interval {i} has no interior ({lo}, {hi})")));
            }
        }
        Ok(())
    }

    /// Lebesgue times counting measure of the box in coordinates.
    pub fn coordinate_volume(&self) -> T {
        let count: i64 = self.ints.iter().map(|&(lo, hi)| hi - lo + 1).product();
        let len: T = self.reals.iter().fold(T::one(), |acc, &(lo, hi)| acc * (hi - lo));
        T::of_i64(count) * len
    }

    pub fn contains_reals(&self, xs: &[T]) -> bool {
        self.reals.iter().zip(xs).all(|(&(lo, hi), &x)| x > lo && x < hi)
    }

    pub fn contains_ints(&self, ns: &[i64]) -> bool {
        self.ints.iter().zip(ns).all(|(&(lo, hi), &n)| n >= lo && n <= hi)
    }

    /// All integer coordinate tuples in the box, in lexicographic order.
    pub fn int_points(&self) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for &(lo, hi) in &self.ints {
            let mut next = Vec::with_capacity(out.len() * (hi - lo + 1).max(0) as usize);
            for prefix in &out {
                for n in lo..=hi {
                    let mut p = prefix.clone();
                    p.push(n);
                    next.push(p);
                }
            }
            out = next;
        }
        out
    }
}
