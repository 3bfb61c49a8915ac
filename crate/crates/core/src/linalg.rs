//! Small dense helpers for Jacobians.

use crate::scalar::Scalar;

/// Determinant by Gaussian elimination with partial pivoting; `m` is row-major `n × n`.
pub fn det<T: Scalar>(mut m: Vec<T>, n: usize) -> T {
    debug_assert_eq!(m.len(), n * n);
    let mut d = T::one();
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| m[i * n + c].abs().partial_cmp(&m[j * n + c].abs()).unwrap())
            .unwrap();
        if m[p * n + c] == T::zero() {
            return T::zero();
        }
        if p != c {
            for k in 0..n {
                m.swap(p * n + k, c * n + k);
            }
            d = -d;
        }
        let piv = m[c * n + c];
        d = d * piv;
        for r in c + 1..n {
            let f = m[r * n + c] / piv;
            for k in c..n {
                let v = m[c * n + k];
                m[r * n + k] = m[r * n + k] - f * v;
            }
        }
    }
    d
}

/// Jacobian determinant of `f: ℝⁿ → ℝⁿ` at `x` by central differences.
pub fn jacobian_det<T: Scalar>(x: &[T], mut f: impl FnMut(&[T]) -> Option<Vec<T>>) -> Option<T> {
    let n = x.len();
    if n == 0 {
        return Some(T::one());
    }
    let mut m = vec![T::zero(); n * n];
    let mut y = x.to_vec();
    for j in 0..n {
        let h = T::fd_step() * (T::one() + x[j].abs());
        y[j] = x[j] + h;
        let fp = f(&y)?;
        y[j] = x[j] - h;
        let fm = f(&y)?;
        y[j] = x[j];
        for i in 0..n {
            m[i * n + j] = (fp[i] - fm[i]) / (h + h);
        }
    }
    Some(det(m, n))
}
