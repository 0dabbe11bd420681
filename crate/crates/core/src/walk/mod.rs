//! Convolution powers of finitely supported symmetric measures on discrete
//! groups, return probabilities and their diagnostics, Dirichlet forms and
//! the stability relation between return series.

mod dirichlet;
mod fit;
mod measure;
mod series;
mod stability;
mod weight;

use thiserror::Error;

use crate::group::{Group, GroupError};

pub use dirichlet::{comparison_constant, dirichlet_form, random_test_function, ComparisonReport, DirichletValues};
pub use fit::{decay_fit, least_squares, DecayClass, DecayFit, LineFit};
pub use measure::{inner, right_convolve, GroupFunction, Measure, MASS_DRIFT_LIMIT};
pub use series::{
    free_radial_return_at, free_radial_series, neighborhood_series, return_series, spectral_diagnostics, square_at,
    ReturnSeries, SpectralDiagnostics, DEFAULT_SUPPORT_BUDGET,
};
pub use stability::{stability_compare, Domination, MarginRow, StabilityCaps, StabilityReport};
pub use weight::{parse_rational, Mode, Weight, FLOAT_ORDER_TOLERANCE, FLOAT_PRUNE_THRESHOLD};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WalkError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("measure is not symmetric")]
    NotSymmetric,
    #[error("measures live on different groups ({0} vs {1})")]
    GroupMismatch(Group, Group),
    #[error("support of step {n} has {size} elements, over the budget of {budget}")]
    SupportOverflow { n: usize, size: usize, budget: usize },
    #[error("float mass drift {0:e} exceeds the limit")]
    MassDrift(f64),
    #[error("invariant violated: {what} at n = {n}")]
    Invariant { what: &'static str, n: usize },
    #[error("series has {have} points, need at least {need}")]
    SeriesTooShort { have: usize, need: usize },
    #[error("window {lo}..={hi} outside a series of length {len}")]
    BadWindow { lo: usize, hi: usize, len: usize },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
}

impl WalkError {
    /// Whether the error signals a broken theorem-level invariant rather than
    /// bad input.
    pub fn is_invariant(&self) -> bool {
        matches!(self, WalkError::Invariant { .. } | WalkError::MassDrift(_))
    }
}

/// Series CSV: a `#`-prefixed JSON header line, then `n,a_n,ratio,log_a`.
pub fn series_csv<W: Weight>(s: &ReturnSeries<W>, header: &serde_json::Value) -> String {
    let mut out = format!("# {header}\nn,a_n,ratio,log_a\n");
    for (i, a) in s.values.iter().enumerate() {
        let ratio = if i == 0 { String::new() } else { (a.clone() / s.values[i - 1].clone()).to_f64().to_string() };
        out.push_str(&format!("{},{},{},{}\n", i + 1, a.render(), ratio, a.ln()));
    }
    out
}
