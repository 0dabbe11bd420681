use std::fmt;

use num_bigint::BigUint;

use crate::field::{LaurentField, LaurentNumber};

use super::SolError;

/// The box `Ω_n`: `|v(a)| ≤ n`, `v(x) ≥ −n`, `v(y) ≥ −n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoxSpec {
    pub n: u32,
}

/// `(a, x, y)` standing for the matrix `[[a, 0, x], [0, a⁻¹, y], [0, 0, 1]]`.
///
/// `a⁻¹` is carried alongside `a` so products never need a series inversion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolElement {
    a: LaurentNumber,
    a_inv: LaurentNumber,
    x: LaurentNumber,
    y: LaurentNumber,
}

impl SolElement {
    pub fn new(a: LaurentNumber, x: LaurentNumber, y: LaurentNumber) -> Result<Self, SolError> {
        let field = a.field();
        if x.field() != field || y.field() != field {
            return Err(SolError::MismatchedField);
        }
        if a.is_exact_zero() {
            return Err(SolError::ZeroDeterminant);
        }
        let a_inv = a.inverse()?;
        Ok(SolElement { a, a_inv, x, y })
    }

    pub fn identity(field: &LaurentField) -> Self {
        SolElement { a: field.one(), a_inv: field.one(), x: field.zero(), y: field.zero() }
    }

    pub fn field(&self) -> LaurentField {
        self.a.field()
    }

    pub fn a(&self) -> &LaurentNumber {
        &self.a
    }

    pub fn a_inv(&self) -> &LaurentNumber {
        &self.a_inv
    }

    pub fn x(&self) -> &LaurentNumber {
        &self.x
    }

    pub fn y(&self) -> &LaurentNumber {
        &self.y
    }

    /// `(a₁a₂, a₁x₂ + x₁, a₁⁻¹y₂ + y₁)`.
    pub fn multiply(&self, h: &SolElement) -> Result<SolElement, SolError> {
        if self.field() != h.field() {
            return Err(SolError::MismatchedField);
        }
        let a = self.a.try_mul(&h.a)?;
        if a.is_zero() {
            return Err(SolError::ZeroDeterminant);
        }
        Ok(SolElement {
            a,
            a_inv: h.a_inv.try_mul(&self.a_inv)?,
            x: self.a.try_mul(&h.x)?.try_add(&self.x)?,
            y: self.a_inv.try_mul(&h.y)?.try_add(&self.y)?,
        })
    }

    /// `(a⁻¹, −a⁻¹x, −ay)`.
    pub fn inverse(&self) -> Result<SolElement, SolError> {
        Ok(SolElement {
            a: self.a_inv.clone(),
            a_inv: self.a.clone(),
            x: self.a_inv.try_mul(&self.x)?.neg(),
            y: self.a.try_mul(&self.y)?.neg(),
        })
    }

    /// The projection `w ∘ d`: the valuation of `a`.
    pub fn project(&self) -> Result<i64, SolError> {
        self.a.valuation()?.ok_or(SolError::ZeroDeterminant)
    }

    /// Membership in `Ω_n`. Only valuations are read; a precision-zero
    /// coordinate whose known vanishing order is below `−n` cannot be decided
    /// and is an error.
    pub fn in_box(&self, b: BoxSpec) -> Result<bool, SolError> {
        let n = b.n as i64;
        Ok(self.project()?.abs() <= n && self.x.valuation_at_least(-n)? && self.y.valuation_at_least(-n)?)
    }

    /// Coordinatewise equality within the common precision.
    pub fn eq_within_precision(&self, other: &SolElement) -> bool {
        self.a.eq_within_precision(&other.a)
            && self.x.eq_within_precision(&other.x)
            && self.y.eq_within_precision(&other.y)
    }
}

impl fmt::Display for SolElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.x, self.y)
    }
}

/// Haar volume `(2n+1) q^{2n}` of `Ω_n`, normalized so `R^× × R × R` has mass 1.
pub fn box_volume(n: u32, q: u32) -> BigUint {
    BigUint::from(2 * n as u64 + 1) * BigUint::from(q).pow(2 * n)
}

/// `ln` of [`box_volume`] without forming the integer.
pub fn ln_box_volume(n: u32, q: u32) -> f64 {
    (2.0 * n as f64 + 1.0).ln() + 2.0 * n as f64 * (q as f64).ln()
}
