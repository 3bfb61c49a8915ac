use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::BallSpec;
use crate::scalar::Scalar;
use crate::space::{injrad_profile, sofic_check, LocalSpace, Method, SoficOptions, SoficReport, SoficWindow, Volume, WindowSet};

/// Spaces `Mᵢ` paired with windows `(Uᵢ, εᵢ)`, radii non-decreasing and
/// epsilons non-increasing.
#[derive(Clone)]
pub struct ApproximationSequence<T: Scalar> {
    spaces: Vec<Arc<dyn LocalSpace<T>>>,
    windows: Vec<SoficWindow<T>>,
}

impl<T: Scalar> ApproximationSequence<T> {
    pub fn new(spaces: Vec<Arc<dyn LocalSpace<T>>>, windows: Vec<SoficWindow<T>>) -> Result<Self> {
        if spaces.len() != windows.len() {
            return Err(Error::InvalidSequence(format!("{} spaces but {} windows", spaces.len(), windows.len())));
        }
        for (i, m) in spaces.iter().enumerate() {
            if let Volume::Infinite = m.total_volume() {
                return Err(Error::InfiniteVolume(format!("index {i}: {}", m.name())));
            }
        }
        for (i, w) in windows.iter().enumerate() {
            SoficWindow::new(w.set.clone(), w.epsilon).map_err(|e| Error::InvalidSequence(format!("index {i}: {e}")))?;
        }
        let radii: Vec<T> = spaces.iter().zip(&windows).map(|(m, w)| w.set.bounding_ball(m.group()).radius).collect();
        for i in 1..windows.len() {
            if radii[i] < radii[i - 1] {
                return Err(Error::InvalidSequence(format!("window radius decreases at index {i}")));
            }
            if windows[i].epsilon > windows[i - 1].epsilon {
                return Err(Error::InvalidSequence(format!("epsilon increases at index {i}")));
            }
        }
        Ok(Self { spaces, windows })
    }

    pub fn len(&self) -> usize {
        self.spaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spaces.is_empty()
    }

    pub fn spaces(&self) -> &[Arc<dyn LocalSpace<T>>] {
        &self.spaces
    }

    pub fn windows(&self) -> &[SoficWindow<T>] {
        &self.windows
    }

    pub(crate) fn radius(&self, i: usize) -> T {
        self.windows[i].set.bounding_ball(self.spaces[i].group()).radius
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceRow {
    pub index: usize,
    pub radius: f64,
    pub epsilon: f64,
    pub report: SoficReport,
    /// Fraction with `injrad ≥ radius` for centred ball windows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub injrad_fraction: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub injrad_agrees: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub rows: Vec<SequenceRow>,
    pub is_sofic_approximation: bool,
    pub first_failure: Option<usize>,
    pub largest_radius: f64,
    pub seed: u64,
    pub exact_indices: Vec<usize>,
    pub note: String,
}

impl ExperimentReport {
    pub const CSV_HEADER: &'static str = "index,radius,epsilon,fraction,method";

    pub fn csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let method = match r.report.method {
                Method::Exact => "exact",
                Method::Statistical => "statistical",
            };
            out.push_str(&format!("{},{},{},{},{}\n", r.index, r.radius, r.epsilon, r.report.fraction, method));
        }
        out
    }
}

fn centred_radius<T: Scalar>(w: &WindowSet<T>) -> Option<T> {
    match w {
        WindowSet::Ball(BallSpec { radius, center: None }) => Some(*radius),
        _ => None,
    }
}

/// Runs `sofic_check` at every index, plus the injectivity-radius profile at
/// the window radius when the window is a centred ball.
pub fn run_sequence<T: Scalar>(seq: &ApproximationSequence<T>, opts: &SoficOptions) -> Result<ExperimentReport> {
    let rows: Vec<SequenceRow> = (0..seq.len())
        .into_par_iter()
        .map(|i| {
            let m = &seq.spaces[i];
            let w = &seq.windows[i];
            let o = SoficOptions { seed: opts.seed.wrapping_add(i as u64), ..opts.clone() };
            let report = sofic_check(m.as_ref(), w, &o)?;
            let (injrad_fraction, injrad_agrees) = match centred_radius(&w.set) {
                Some(rho) => {
                    let rows = injrad_profile(&[m.as_ref()], rho, opts.n_points, &o.membership, o.seed)?;
                    let f = rows[0].fraction;
                    let pass = f >= 1.0 - w.epsilon.as_f64();
                    (Some(f), Some(pass == report.verdict.passed()))
                }
                None => (None, None),
            };
            Ok(SequenceRow { index: i, radius: seq.radius(i).as_f64(), epsilon: w.epsilon.as_f64(), report, injrad_fraction, injrad_agrees })
        })
        .collect::<Result<_>>()?;
    let first_failure = rows.iter().position(|r| !r.report.verdict.passed());
    let largest_radius = rows.iter().map(|r| r.radius).fold(0.0, f64::max);
    let exact_indices = rows.iter().filter(|r| r.report.method == Method::Exact).map(|r| r.index).collect();
    let note = format!(
        "finite sequence of {} spaces; windows tested up to radius {largest_radius}; a pass is evidence along this prefix only",
        rows.len()
    );
    Ok(ExperimentReport { is_sofic_approximation: first_failure.is_none(), first_failure, largest_radius, seed: opts.seed, exact_indices, rows, note })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{folner_box_space, CosetSpace};

    #[test]
    fn circles_pass() {
        let spaces: Vec<Arc<dyn LocalSpace<f64>>> = (1..=6).map(|i| Arc::new(CosetSpace::circle((1u32 << i) as f64).unwrap()) as _).collect();
        let windows = (1..=6).map(|i| SoficWindow::ball(2f64.powi(i - 2), 1.0 / i as f64)).collect();
        let r = run_sequence(&ApproximationSequence::new(spaces, windows).unwrap(), &SoficOptions::default()).unwrap();
        assert!(r.is_sofic_approximation);
        assert!(r.rows.iter().all(|row| row.injrad_agrees == Some(true)));
        assert_eq!(r.largest_radius, 16.0);
        assert!(r.csv().starts_with("index,radius,epsilon,fraction,method\n0,0.5,1,1,exact"));
    }

    #[test]
    fn folner_boxes_pass_and_empty_fails() {
        let spaces: Vec<Arc<dyn LocalSpace<f64>>> = (1..=6).map(|i| Arc::new(folner_box_space(2, 10.0 * 2f64.powi(i)).unwrap()) as _).collect();
        let windows = (1..=6).map(|i| SoficWindow::ball(5.0, 1.0 / i as f64)).collect();
        let r = run_sequence(&ApproximationSequence::new(spaces, windows).unwrap(), &SoficOptions::default()).unwrap();
        assert!(r.is_sofic_approximation);
        let one: Vec<Arc<dyn LocalSpace<f64>>> = vec![Arc::new(folner_box_space(1, 10.0).unwrap())];
        let r = run_sequence(&ApproximationSequence::new(one, vec![SoficWindow::ball(5.0, 0.5)]).unwrap(), &SoficOptions::default()).unwrap();
        assert_eq!(r.first_failure, Some(0));
        assert_eq!(r.rows[0].report.fraction, 0.0);
    }

    #[test]
    fn rejects_shrinking_windows() {
        let spaces: Vec<Arc<dyn LocalSpace<f64>>> = vec![Arc::new(CosetSpace::circle(4.0).unwrap()), Arc::new(CosetSpace::circle(8.0).unwrap())];
        let w = vec![SoficWindow::ball(2.0, 0.5), SoficWindow::ball(1.0, 0.5)];
        assert!(matches!(ApproximationSequence::new(spaces, w), Err(Error::InvalidSequence(_))));
    }
}
