//! Sequences of local spaces, the unimodularity obstruction and the
//! injectivity-radius cross-check.

mod crosscheck;
mod sequence;
mod unimodular;

pub use crosscheck::{equivalence_crosscheck, CrosscheckReport, CrosscheckRow};
pub use sequence::{run_sequence, ApproximationSequence, ExperimentReport, SequenceRow};
pub use unimodular::{unimodularity_obstruction, CandidateRow, UnimodularReport};
