//! Spectral calculus on real symmetric matrices under the normalized trace,
//! and checks of the trace inequalities behind the stability theorem.

mod checks;
mod operator;

use thiserror::Error;

pub use checks::{
    check_lemma2, check_prop2, check_thm1_chain, instance_seed, lemma2_sweep, ordered_pair_from, prop2_sweep,
    random_leq_pair, random_ordered_pair, random_orthogonal, thm1_sweep, DyadicLevel, Lemma2Report, OrderedPair,
    Prop2Instance, Prop2Report, Prop2Sweep, StepFunctionSpec, Thm1Instance, Thm1Report, Thm1Sweep, DYADIC_LEVELS,
    INEQUALITY_SLACK, SCALAR_SLACK,
};
pub use operator::{psd_leq, SpectralOperator, SPECTRUM_TOLERANCE, SYMMETRY_TOLERANCE};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TraceError {
    #[error("matrix is not symmetric (defect {0:e})")]
    NotSymmetric(f64),
    #[error("spectrum [{min}, {max}] is not inside [0, 1]")]
    SpectrumOutside { min: f64, max: f64 },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

#[cfg(test)]
mod tests;
