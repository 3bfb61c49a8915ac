use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// The box `Δ = ∏ [sᵢ, sᵢ + 1)` as a fundamental domain for `ℤⁿ ≤ ℝⁿ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FundamentalDomain<T: Scalar> {
    pub offset: Vec<T>,
}

impl<T: Scalar> FundamentalDomain<T> {
    pub fn unit(dim: usize) -> Self {
        Self { offset: vec![T::zero(); dim] }
    }

    pub fn shifted(offset: &[T]) -> Result<Self> {
        if offset.is_empty() || offset.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidParams(format!("bad offset {offset:?}")));
        }
        Ok(Self { offset: offset.to_vec() })
    }

    pub fn dim(&self) -> usize {
        self.offset.len()
    }

    pub fn contains(&self, x: &[T]) -> bool {
        x.len() == self.dim() && x.iter().zip(&self.offset).all(|(&xi, &s)| xi >= s && xi < s + T::one())
    }

    /// The `γ ∈ ℤⁿ` with `x − γ ∈ Δ`.
    pub fn lattice_part(&self, x: &[T]) -> Result<Vec<i64>> {
        if x.len() != self.dim() {
            return Err(Error::SectionFailure(format!("expected {} coordinates, got {}", self.dim(), x.len())));
        }
        x.iter()
            .zip(&self.offset)
            .map(|(&xi, &s)| {
                (xi - s).floor().to_i64().filter(|_| xi.is_finite()).ok_or_else(|| Error::SectionFailure(format!("no representative for {xi}")))
            })
            .collect()
    }

    /// Representative of `Γx` in `Δ`.
    pub fn section(&self, x: &[T]) -> Result<Vec<T>> {
        let gamma = self.lattice_part(x)?;
        Ok(x.iter().zip(gamma).map(|(&xi, c)| xi - T::of_i64(c)).collect())
    }

    /// Counts `γ` within `radius` (sup norm) of the floor with `x − γ ∈ Δ`.
    pub fn representatives_near(&self, x: &[T], radius: i64) -> usize {
        let base: Vec<i64> = x.iter().map(|v| v.floor().to_i64().unwrap_or(0)).collect();
        let side = 2 * radius + 1;
        let total = side.pow(self.dim() as u32);
        (0..total)
            .filter(|&k| {
                let mut rest = k;
                let y: Vec<T> = base
                    .iter()
                    .zip(x)
                    .map(|(&b, &xi)| {
                        let d = rest % side - radius;
                        rest /= side;
                        xi - T::of_i64(b + d)
                    })
                    .collect();
                self.contains(&y)
            })
            .count()
    }

    pub fn cocycle(&self) -> Cocycle<T> {
        Cocycle { domain: self.clone() }
    }
}

/// `c(Γx, g) = σ(Γx) + g − σ(Γx + g)`.
#[derive(Clone, Debug)]
pub struct Cocycle<T: Scalar> {
    domain: FundamentalDomain<T>,
}

pub fn make_cocycle<T: Scalar>(domain: &FundamentalDomain<T>) -> Cocycle<T> {
    domain.cocycle()
}

impl<T: Scalar> Cocycle<T> {
    pub fn domain(&self) -> &FundamentalDomain<T> {
        &self.domain
    }

    pub fn value(&self, x: &[T], g: &[T]) -> Result<Vec<i64>> {
        let rep = self.domain.section(x)?;
        let moved: Vec<T> = rep.iter().zip(g).map(|(&a, &b)| a + b).collect();
        self.domain.lattice_part(&moved)
    }

    /// `Γx·g` as a point of `Δ`.
    pub fn translate(&self, x: &[T], g: &[T]) -> Result<Vec<T>> {
        let rep = self.domain.section(x)?;
        let moved: Vec<T> = rep.iter().zip(g).map(|(&a, &b)| a + b).collect();
        self.domain.section(&moved)
    }

    /// `c(x, g) + c(x·g, k) = c(x, g + k)`.
    pub fn equation_holds(&self, x: &[T], g: &[T], k: &[T]) -> Result<bool> {
        let a = self.value(x, g)?;
        let b = self.value(&self.translate(x, g)?, k)?;
        let gk: Vec<T> = g.iter().zip(k).map(|(&p, &q)| p + q).collect();
        let c = self.value(x, &gk)?;
        Ok(a.iter().zip(&b).map(|(p, q)| p + q).eq(c.iter().copied()))
    }

    /// `Γx ∈ Ω(F)`: `c(Γx·g₁, g₂) ∈ F` for `g₁, g₂ ∈ U³` with `g₁g₂ ∈ U`,
    /// `U = B(u_radius)`, tested on a `grid`-point lattice per coordinate.
    pub fn omega_contains(&self, x: &[T], u_radius: T, in_f: &dyn Fn(&[i64]) -> bool, grid: usize) -> Result<bool> {
        let n = self.domain.dim();
        let reach = T::lit(3.0) * u_radius;
        let step = T::lit(2.0) * reach / T::of_i64(grid as i64);
        let axis: Vec<T> = (0..grid).map(|i| -reach + step * (T::of_i64(i as i64) + T::lit(0.5))).collect();
        let total = grid.pow(n as u32);
        let pick = |mut k: usize| -> Vec<T> {
            (0..n)
                .map(|_| {
                    let v = axis[k % grid];
                    k /= grid;
                    v
                })
                .collect()
        };
        let norm = |v: &[T]| v.iter().map(|&a| a * a).sum::<T>().sqrt();
        let base = self.domain.section(x)?;
        for i in 0..total {
            let g1 = pick(i);
            if norm(&g1) >= reach {
                continue;
            }
            let y = self.translate(&base, &g1)?;
            for j in 0..total {
                let g2 = pick(j);
                let sum: Vec<T> = g1.iter().zip(&g2).map(|(&a, &b)| a + b).collect();
                if norm(&g2) >= reach || norm(&sum) >= u_radius {
                    continue;
                }
                if !in_f(&self.value(&y, &g2)?) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Sup-norm radius of the integer ball `F` that makes `Ω(F)` everything for
/// `U = B(r)`.
pub fn default_f_radius<T: Scalar>(u_radius: T) -> i64 {
    (T::lit(3.0) * u_radius).ceil().to_i64().unwrap_or(i64::MAX - 1) + 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_interval_cocycle() {
        let c = FundamentalDomain::<f64>::unit(1).cocycle();
        assert_eq!(c.value(&[0.7], &[0.5]).unwrap(), vec![1]);
        assert_eq!(c.value(&[0.3], &[0.0]).unwrap(), vec![0]);
        assert_eq!(c.value(&[0.3], &[-1.5]).unwrap(), vec![-2]);
        assert!(c.equation_holds(&[0.7], &[0.5], &[-2.25]).unwrap());
        assert!(matches!(c.value(&[f64::NAN], &[0.0]), Err(Error::SectionFailure(_))));
    }

    #[test]
    fn unique_representatives() {
        let d = FundamentalDomain::shifted(&[-0.5, 0.25]).unwrap();
        for x in [[0.3, 7.9], [-12.5, 0.25], [3.49, -0.76]] {
            assert_eq!(d.representatives_near(&x, 2), 1);
            assert!(d.contains(&d.section(&x).unwrap()));
        }
    }

    #[test]
    fn default_f_covers_everything() {
        let c = FundamentalDomain::<f64>::unit(1).cocycle();
        let f = default_f_radius(1.0);
        let in_f = move |v: &[i64]| v.iter().all(|a| a.abs() <= f);
        assert!(c.omega_contains(&[0.4], 1.0, &in_f, 60).unwrap());
        let tiny = |v: &[i64]| v.iter().all(|&a| a == 0);
        assert!(!c.omega_contains(&[0.4], 1.0, &tiny, 60).unwrap());
    }
}
