use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sequence::ApproximationSequence;
use crate::error::Result;
use crate::scalar::Scalar;
use crate::space::{injrad_profile, sofic_check, SoficOptions, SoficWindow};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrosscheckRow {
    pub index: usize,
    pub rho: f64,
    pub epsilon: f64,
    pub sofic_fraction: f64,
    pub injrad_fraction: f64,
    pub sofic_pass: bool,
    pub injrad_pass: bool,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrosscheckReport {
    pub rows: Vec<CrosscheckRow>,
    pub all_agree: bool,
}

/// Compares `sofic_check` on `B(ρ)` against the fraction with `injrad ≥ ρ`
/// at each index, using that index's epsilon.
pub fn equivalence_crosscheck<T: Scalar>(seq: &ApproximationSequence<T>, rhos: &[T], opts: &SoficOptions) -> Result<CrosscheckReport> {
    let jobs: Vec<(usize, T)> = (0..seq.len()).flat_map(|i| rhos.iter().map(move |&r| (i, r))).collect();
    let rows = jobs
        .par_iter()
        .map(|&(i, rho)| {
            let m = seq.spaces()[i].as_ref();
            let eps = seq.windows()[i].epsilon;
            let o = SoficOptions { seed: opts.seed.wrapping_add(i as u64), ..opts.clone() };
            let s = sofic_check(m, &SoficWindow::ball(rho, eps), &o)?;
            let p = injrad_profile(&[m], rho, opts.n_points, &o.membership, o.seed)?[0].fraction;
            let injrad_pass = p >= 1.0 - eps.as_f64();
            Ok(CrosscheckRow {
                index: i,
                rho: rho.as_f64(),
                epsilon: eps.as_f64(),
                sofic_fraction: s.fraction,
                injrad_fraction: p,
                sofic_pass: s.verdict.passed(),
                injrad_pass,
                agree: s.verdict.passed() == injrad_pass,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CrosscheckReport { all_agree: rows.iter().all(|r| r.agree), rows })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::constructions::{folner_box_space, CosetSpace};
    use crate::space::LocalSpace;

    #[test]
    fn circles_and_boxes_agree() {
        let spaces: Vec<Arc<dyn LocalSpace<f64>>> = [2.0, 4.0, 8.0, 16.0].iter().map(|&c| Arc::new(CosetSpace::circle(c).unwrap()) as _).collect();
        let windows = (0..4).map(|_| SoficWindow::ball(1.0, 0.01)).collect();
        let seq = ApproximationSequence::new(spaces, windows).unwrap();
        let r = equivalence_crosscheck(&seq, &[1.0, 3.0, 5.0], &SoficOptions::default()).unwrap();
        assert!(r.all_agree && r.rows.len() == 12);
        let spaces: Vec<Arc<dyn LocalSpace<f64>>> = vec![Arc::new(folner_box_space(2, 100.0).unwrap())];
        let seq = ApproximationSequence::new(spaces, vec![SoficWindow::ball(5.0, 0.2)]).unwrap();
        let r = equivalence_crosscheck(&seq, &[5.0], &SoficOptions::default()).unwrap();
        assert!(r.all_agree && r.rows[0].sofic_pass);
        let empty = ApproximationSequence::<f64>::new(vec![], vec![]).unwrap();
        assert!(equivalence_crosscheck(&empty, &[1.0], &SoficOptions::default()).unwrap().all_agree);
    }
}
