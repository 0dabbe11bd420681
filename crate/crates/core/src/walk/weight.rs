use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Sub};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

/// Arithmetic mode of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            _ => Err(format!("unknown mode `{s}` (expected exact or float)")),
        }
    }
}

/// Relative slack for order checks in float mode.
pub const FLOAT_ORDER_TOLERANCE: f64 = 1e-12;
/// Atoms below this mass are pruned in float mode.
pub const FLOAT_PRUNE_THRESHOLD: f64 = 1e-18;

/// Scalar type of measure weights: exact rationals or `f64`.
pub trait Weight:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    const MODE: Mode;

    fn from_ratio(r: &BigRational) -> Self;
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    /// Natural logarithm of a positive value, without underflow for tiny rationals.
    fn ln(&self) -> f64;
    /// `p/q` in exact mode, shortest round-trip decimal in float mode.
    fn render(&self) -> String;

    /// `self <= other`, exactly or within [`FLOAT_ORDER_TOLERANCE`].
    fn le_tol(&self, other: &Self) -> bool;

    /// Whether float pruning may drop this atom.
    fn negligible(&self) -> bool {
        false
    }

    fn half() -> Self {
        Self::one() / (Self::one() + Self::one())
    }
}

impl Weight for f64 {
    const MODE: Mode = Mode::Float;

    fn from_ratio(r: &BigRational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn from_f64(x: f64) -> Self {
        x
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn ln(&self) -> f64 {
        f64::ln(*self)
    }

    fn render(&self) -> String {
        format!("{self:e}")
    }

    fn le_tol(&self, other: &Self) -> bool {
        *self <= *other + FLOAT_ORDER_TOLERANCE * self.abs().max(other.abs())
    }

    fn negligible(&self) -> bool {
        self.abs() < FLOAT_PRUNE_THRESHOLD
    }
}

/// `ln |n|` from the leading 64 bits and the bit length.
pub(crate) fn big_ln(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 64 {
        return n.abs().to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (n.abs() >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

impl Weight for BigRational {
    const MODE: Mode = Mode::Exact;

    fn from_ratio(r: &BigRational) -> Self {
        r.clone()
    }

    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).expect("finite float")
    }

    fn to_f64(&self) -> f64 {
        match ToPrimitive::to_f64(self) {
            Some(x) if x != 0.0 || self.is_zero() => x,
            _ => {
                let sign = if self.numer().sign() == Sign::Minus { -1.0 } else { 1.0 };
                sign * Weight::ln(&self.abs()).exp()
            }
        }
    }

    fn ln(&self) -> f64 {
        if !self.is_positive() {
            return f64::NAN;
        }
        big_ln(self.numer()) - big_ln(self.denom())
    }

    fn render(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    fn le_tol(&self, other: &Self) -> bool {
        self <= other
    }
}

/// Parses `p/q`, an integer, or a terminating decimal into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let negative = int.starts_with('-');
        let digits: BigInt = format!("{}{}", int.trim_start_matches('-'), frac).parse().ok()?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let r = BigRational::new(digits, scale);
        return Some(if negative { -r } else { r });
    }
    s.parse::<BigInt>().ok().map(BigRational::from_integer)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_literals() {
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(parse_rational("1/2"), Some(half.clone()));
        assert_eq!(parse_rational("0.5"), Some(half.clone()));
        assert_eq!(parse_rational("-0.25"), Some(-half.clone() / BigRational::from_integer(2.into())));
        assert_eq!(parse_rational("3"), Some(BigRational::from_integer(3.into())));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
        assert_eq!(half.render(), "1/2");
    }

    #[test]
    fn log_of_tiny_rationals() {
        let tiny = BigRational::new(BigInt::one(), BigInt::from(4u32).pow(2000));
        let want = -2000.0 * 4f64.ln();
        assert!((Weight::ln(&tiny) - want).abs() < 1e-9 * want.abs());
        assert!(Weight::to_f64(&tiny) == 0.0 || Weight::to_f64(&tiny) < 1e-300);
        let three_eighths = BigRational::new(3.into(), 8.into());
        assert!((Weight::ln(&three_eighths) - (0.375f64).ln()).abs() < 1e-15);
    }

    #[test]
    fn float_order_tolerance() {
        assert!(1.0f64.le_tol(&(1.0 - 1e-14)));
        assert!(!1.0f64.le_tol(&(1.0 - 1e-9)));
    }
}
