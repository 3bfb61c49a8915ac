use serde::{Deserialize, Serialize};

use super::{member_mu, LocalSpace, MembershipOptions, Witness, WindowSet};
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::rng::seeded;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InclusionReport {
    pub passed: bool,
    /// Points of `M[U]` that were translated and tested.
    pub checked: usize,
    pub attempts: usize,
    pub witnesses: Vec<Witness>,
}

/// Checks `M[U].g ⊂ M[U ∩ g⁻¹U]` on `n` sampled points of `M[U]`.
pub fn translation_inclusion_check<T: Scalar, M: LocalSpace<T> + ?Sized>(
    m: &M,
    u: &WindowSet<T>,
    g: &GroupElement<T>,
    n: usize,
    seed: u64,
    opts: &MembershipOptions,
) -> Result<InclusionReport> {
    let group = m.group();
    if !u.contains(group, g) {
        return Err(Error::InvalidParams(format!("g = {:?} is not in U", group.to_coords(g))));
    }
    let target = u.meet_translate(group, g);
    let mut rng = seeded(seed);
    let (mut checked, mut attempts) = (0, 0);
    let mut witnesses = Vec::new();
    while checked < n && attempts < n * 100 {
        attempts += 1;
        let p = m.sample_point(&mut rng);
        if !member_mu(m, &p, u, opts, &mut rng).member {
            continue;
        }
        checked += 1;
        let ok = match m.act(&p, g) {
            Some(q) => {
                let r = member_mu(m, &q, &target, opts, &mut rng);
                r.member || {
                    witnesses.push(Witness {
                        point: p.to_f64(),
                        elements: vec![group.to_coords(g)],
                        detail: r.witness.unwrap_or_else(|| "p.g not in M[U ∩ g⁻¹U]".into()),
                    });
                    false
                }
            }
            None => {
                witnesses.push(Witness { point: p.to_f64(), elements: vec![group.to_coords(g)], detail: "p.g undefined".into() });
                false
            }
        };
        if !ok && witnesses.len() >= 5 {
            break;
        }
    }
    Ok(InclusionReport { passed: witnesses.is_empty() && checked > 0, checked, attempts, witnesses })
}
