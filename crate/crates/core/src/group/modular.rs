use super::{CoordBox, GroupElement, GroupModel};
use crate::error::{Error, Result};
use crate::linalg::jacobian_det;
use crate::scalar::Scalar;

/// Midpoint-rule nodes and cell volume for a real box with about `n` nodes.
pub(crate) fn midpoint_grid<T: Scalar>(reals: &[(T, T)], n: usize) -> (Vec<Vec<T>>, T) {
    let d = reals.len();
    if d == 0 {
        return (vec![Vec::new()], T::one());
    }
    let k = ((n.max(1) as f64).powf(1.0 / d as f64).ceil() as usize).max(1);
    let mut nodes = vec![Vec::with_capacity(d)];
    let mut cell = T::one();
    for &(lo, hi) in reals {
        let h = (hi - lo) / T::of_i64(k as i64);
        cell = cell * h;
        let mut next = Vec::with_capacity(nodes.len() * k);
        for p in &nodes {
            for i in 0..k {
                let mut q = p.clone();
                q.push(lo + h * (T::of_i64(i as i64) + T::lit(0.5)));
                next.push(q);
            }
        }
        nodes = next;
    }
    (nodes, cell)
}

/// Quadrature estimate of `Haar(S g) / Haar(S)`.
///
/// `Haar(S g)` is computed by change of variables through right multiplication:
/// `∫_S ρ(x g) |det D R_g(x)| dx`, so the result is independent of the declared
/// modular function.
pub fn modular_check<T: Scalar>(group: &GroupModel<T>, g: &GroupElement<T>, s: &CoordBox<T>, n_samples: usize) -> Result<T> {
    s.validate()?;
    if s.ints.len() != group.n_ints() || s.reals.len() != group.n_reals() {
        return Err(Error::DegenerateBox(format!("box shape does not match {}", group.name())));
    }
    let (nodes, cell) = midpoint_grid(&s.reals, n_samples);
    let (mut base, mut moved) = (T::zero(), T::zero());
    for ints in s.int_points() {
        for x in &nodes {
            let p = GroupElement::new(&ints, x);
            base = base + group.haar_density(&p) * cell;
            let pg = group.mul(&p, g);
            let jac = jacobian_det(x, |y| Some(group.mul(&GroupElement::new(&ints, y), g).reals.to_vec())).unwrap_or(T::zero());
            moved = moved + group.haar_density(&pg) * jac.abs() * cell;
        }
    }
    if !(base > T::zero()) {
        return Err(Error::DegenerateBox("box has zero Haar measure".into()));
    }
    Ok(moved / base)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_ratio_is_half() {
        let g = GroupModel::<f64>::affine_line();
        let x = g.element(&[], &[2.0, 0.0]).unwrap();
        let s = CoordBox::reals(&[(1.0, 2.0), (0.0, 1.0)]);
        let r = modular_check(&g, &x, &s, 10_000).unwrap();
        assert!((r - 0.5).abs() < 0.02, "{r}");
    }

    #[test]
    fn unimodular_groups() {
        let r = GroupModel::<f64>::real_vector(1).unwrap();
        let v = modular_check(&r, &GroupElement::real(5.0), &CoordBox::reals(&[(0.0, 1.0)]), 100).unwrap();
        assert!((v - 1.0).abs() < 1e-9);
        let c = GroupModel::<f64>::cyclic(10).unwrap();
        let bx = CoordBox { ints: vec![(0, 2)], reals: vec![] };
        assert_eq!(modular_check(&c, &GroupElement::int(3), &bx, 1).unwrap(), 1.0);
    }

    #[test]
    fn degenerate_box() {
        let r = GroupModel::<f64>::real_vector(1).unwrap();
        assert!(modular_check(&r, &GroupElement::real(1.0), &CoordBox::reals(&[(1.0, 1.0)]), 10).is_err());
    }
}
