use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::group::{GroupElement, GroupModel};
use crate::scalar::Scalar;
use crate::space::{sofic_check, LocalSpace, Method, SoficOptions, SoficWindow};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidateRow {
    pub space: String,
    pub fraction: f64,
    pub method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
    /// `fraction < 1 − ε`.
    pub below: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnimodularReport {
    pub group: String,
    pub g: Vec<f64>,
    pub modular: f64,
    pub epsilon: f64,
    /// `U` contains `1, g, g²`.
    pub precondition_met: bool,
    /// No obstruction is claimed: `Δ(g) ≥ 1 − ε`.
    pub vacuous: bool,
    /// Every candidate stays below `1 − ε` while `Δ(g) < 1 − ε`.
    pub certified: bool,
    pub candidates: Vec<CandidateRow>,
    pub note: String,
}

/// Measures `vol(M[U ∪ g⁻¹U]) / vol(M)` for each candidate. A pass at level ε
/// would force `Δ(g) ≥ 1 − ε`, so with `Δ(g) < 1 − ε` every measured fraction
/// must stay below `1 − ε`.
pub fn unimodularity_obstruction<T: Scalar>(
    group: &GroupModel<T>,
    family: &[Arc<dyn LocalSpace<T>>],
    g: &GroupElement<T>,
    u: &SoficWindow<T>,
    opts: &SoficOptions,
) -> Result<UnimodularReport> {
    let modular = group.modular(g).as_f64();
    let eps = u.epsilon.as_f64();
    let g2 = group.mul(g, g);
    let precondition_met = [group.identity(), g.clone(), g2].iter().all(|x| u.set.contains(group, x));
    let window = SoficWindow { set: u.set.join_translate(group, g), epsilon: u.epsilon };
    let candidates = family
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let o = SoficOptions { seed: opts.seed.wrapping_add(i as u64), ..opts.clone() };
            let r = sofic_check(m.as_ref(), &window, &o)?;
            Ok(CandidateRow { space: r.space, fraction: r.fraction, method: r.method, stderr: r.stderr, below: r.fraction < 1.0 - eps })
        })
        .collect::<Result<Vec<_>>>()?;
    let vacuous = modular >= 1.0 - eps;
    let certified = !vacuous && precondition_met && candidates.iter().all(|c| c.below);
    let note = if vacuous {
        format!("modular function {modular} >= 1 - epsilon; the obstruction does not apply")
    } else {
        format!(
            "modular function {modular} < 1 - epsilon = {}: no space can be a (U u g^-1 U, {eps})-sofic approximation; checked here for the {} listed candidates only",
            1.0 - eps,
            candidates.len()
        )
    };
    Ok(UnimodularReport {
        group: group.name(),
        g: group.to_coords(g),
        modular,
        epsilon: eps,
        precondition_met,
        vacuous,
        certified,
        candidates,
        note,
    })
}
