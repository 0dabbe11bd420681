//! The group `sol(K)` over `K = F_q((t))`: group law, uniform steps on the
//! generating set `V`, the boxes `Ω_n`, and the lower bound on return
//! probabilities through the projected walk on `Z`.
//!
//! `V` is the union of five pieces of Haar measure 1 each: the slices
//! `a ∈ t^r R^×` (`r = −1, 0, 1`) of `V₁` and the inverses of the slices
//! `r = ±1`. The `r = 0` slice is its own inverse. Uniform sampling on `V`
//! picks a piece uniformly, so the projected increment has law
//! `(2/5, 1/5, 2/5)` on `{−1, 0, 1}`.

mod dp;
mod element;
mod walk;

use thiserror::Error;

use crate::field::FieldError;

pub use dp::{
    confined_dp, confined_dp_exact, confined_dp_ln, confined_dp_squaring_ln, confined_dp_stepped_ln,
    default_n_range, lower_bound, lower_bound_csv, lower_bound_curve, lower_bound_slope, LowerBoundPoint,
    ProjectedKernel, EXACT_STEP_LIMIT,
};
pub use element::{box_volume, ln_box_volume, BoxSpec, SolElement};
pub use walk::{
    binomial_interval, lemma3_check, monte_carlo_return, sample_slice_step, sample_step, walk_precision,
    Lemma3Report, MonteCarloReport, Slice, WalkState, CHUNK, SLICES,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("coordinates live in different fields")]
    MismatchedField,
    #[error("the a-coordinate vanishes")]
    ZeroDeterminant,
    #[error("invalid kernel: {0}")]
    InvalidKernel(String),
    #[error("empty search range")]
    EmptyRange,
    #[error("{0}")]
    InvalidArgument(String),
    #[error("invariant violated: {what} at t = {t}")]
    Invariant { what: &'static str, t: u64 },
}

impl SolError {
    pub fn is_invariant(&self) -> bool {
        matches!(self, SolError::Invariant { .. })
    }
}
