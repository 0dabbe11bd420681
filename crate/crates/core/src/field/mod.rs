//! Arithmetic in the local field `F_q((t))`.
//!
//! Values keep a fixed number of significant coefficients from the leading
//! term. Valuations are exact whenever any coefficient survives, which is all
//! that box membership and the modulus read.

mod bits;
mod laurent;

pub use laurent::{FieldError, LaurentField, LaurentNumber, ModValue, SampleKind, DEFAULT_PRECISION};
