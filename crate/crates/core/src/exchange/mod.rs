//! Interval exchange transformations and the Rauzy-Veech-Zorich induction.
//!
//! Conventions used throughout the crate:
//!
//! * a [`Permutation`] is labelled: the top row lists the intervals before the
//!   exchange, the bottom row after it;
//! * one induction step compares the last top and last bottom intervals. The
//!   shorter one is absorbed into the longer one (the *winner*). The step is
//!   named after the row whose last interval is absorbed, and that row is the
//!   one that gets rearranged;
//! * the cocycle matrix `M` of a step satisfies `old_lengths = M * new_lengths`
//!   and acts on cohomology row vectors by `v -> v * M`.

mod cocycle;
mod form;
mod iet;
mod permutation;
mod walker;

pub use cocycle::CocycleMatrix;
pub use form::{intersection_form, singularity_data, IntersectionForm};
pub use iet::{rauzy_step, zorich_step, Iet, RauzyStep, StepType, ZorichStep};
pub use permutation::Permutation;
pub use walker::ZorichWalker;

/// Relative tolerance below which the two competing lengths count as a tie.
pub const TIE_TOLERANCE: f64 = 1e-14;

/// Default cap on the number of elementary steps merged into one accelerated step.
pub const DEFAULT_RUN_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExchangeError {
    #[error("cannot parse permutation {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("permutation {0} is reducible")]
    Reducible(String),
    #[error("competing lengths {top} and {bottom} tie within relative tolerance")]
    Tie { top: f64, bottom: f64 },
    #[error("accelerated step exceeded the cap of {cap} elementary steps")]
    UnboundedRun { cap: u64 },
    #[error("invalid lengths: {0}")]
    InvalidLengths(String),
}
