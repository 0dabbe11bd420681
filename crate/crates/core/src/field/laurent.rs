use std::cmp::min;
use std::fmt;

use rand::Rng;
use thiserror::Error;

use super::bits::{self, Window};

/// Significant coefficients kept from the leading term unless configured otherwise.
pub const DEFAULT_PRECISION: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("residue field size {0} is not a prime")]
    NotPrime(u32),
    #[error("precision must be at least one coefficient")]
    InvalidPrecision,
    #[error("mismatched residue fields: F_{0} vs F_{1}")]
    MismatchedField(u32, u32),
    #[error("mismatched precision policies: {0} vs {1} coefficients")]
    MismatchedPrecision(u32, u32),
    #[error("zero has no inverse")]
    DivisionByZero,
    #[error("the modulus of zero is undefined")]
    ZeroModulus,
    #[error("valuation lost to truncation; only known to be at least {0}")]
    PrecisionLoss(i64),
    #[error("cannot parse series literal `{input}`: {reason}")]
    Parse { input: String, reason: String },
}

fn is_prime(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    let q = q as u64;
    let mut d = 2u64;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut base: u64, mut exp: u64, q: u64) -> u64 {
    let mut acc = 1u64;
    base %= q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % q;
        }
        base = base * base % q;
        exp >>= 1;
    }
    acc
}

fn inv_mod(x: u32, q: u32) -> u32 {
    pow_mod(x as u64, q as u64 - 2, q as u64) as u32
}

/// Which compact subset of the field to draw Haar-uniform samples from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleKind {
    /// The closed unit ball `R = {v >= 0}`.
    Ball,
    /// The unit group `R^x = {v = 0}`.
    Unit,
}

/// The local field `F_q((t))` together with a truncation policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LaurentField {
    q: u32,
    precision: u32,
}

impl LaurentField {
    pub fn new(q: u32, precision: u32) -> Result<Self, FieldError> {
        if !is_prime(q) {
            return Err(FieldError::NotPrime(q));
        }
        if precision == 0 {
            return Err(FieldError::InvalidPrecision);
        }
        Ok(LaurentField { q, precision })
    }

    pub fn with_default_precision(q: u32) -> Result<Self, FieldError> {
        Self::new(q, DEFAULT_PRECISION)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    fn packed(&self) -> bool {
        self.q == 2 && self.precision <= bits::CAPACITY
    }

    fn empty_digits(&self) -> Digits {
        if self.packed() {
            Digits::Bits([0; bits::WORDS])
        } else {
            Digits::Residues(Vec::new())
        }
    }

    pub fn zero(&self) -> LaurentNumber {
        LaurentNumber { field: *self, valuation: 0, len: 0, exact_zero: true, digits: self.empty_digits() }
    }

    /// A value known to vanish below `t^abs` and nothing more.
    pub fn precision_zero(&self, abs: i64) -> LaurentNumber {
        LaurentNumber { field: *self, valuation: abs, len: 0, exact_zero: false, digits: self.empty_digits() }
    }

    pub fn one(&self) -> LaurentNumber {
        self.monomial(0, 1)
    }

    /// The uniformizer `t`.
    pub fn uniformizer(&self) -> LaurentNumber {
        self.monomial(1, 1)
    }

    pub fn monomial(&self, exponent: i64, coeff: u32) -> LaurentNumber {
        self.from_digits(exponent, &[coeff])
    }

    /// Series `t^valuation * (d0 + d1 t + ...)`, padded with zeros to the full
    /// precision window.
    pub fn from_digits(&self, valuation: i64, digits: &[u32]) -> LaurentNumber {
        let mut padded = digits.to_vec();
        padded.resize(self.precision as usize, 0);
        self.from_window(valuation, &padded)
    }

    /// Series whose known window is exactly `digits` (truncated to the precision).
    pub fn from_window(&self, valuation: i64, digits: &[u32]) -> LaurentNumber {
        let len = min(digits.len(), self.precision as usize) as u32;
        if len == 0 {
            return self.zero();
        }
        let digits = if self.packed() {
            let mut w = [0u64; bits::WORDS];
            for (i, &d) in digits.iter().take(len as usize).enumerate() {
                if d % 2 == 1 {
                    bits::set_bit(&mut w, i as u32);
                }
            }
            Digits::Bits(w)
        } else {
            Digits::Residues(digits.iter().take(len as usize).map(|&d| d % self.q).collect())
        };
        LaurentNumber { field: *self, valuation, len, exact_zero: false, digits }.normalized()
    }

    /// Haar-uniform draw from the unit ball or the unit group; every retained
    /// coefficient is i.i.d. uniform (the leading one on `[1, q)` for units).
    pub fn sample<R: Rng + ?Sized>(&self, kind: SampleKind, rng: &mut R) -> LaurentNumber {
        let len = self.precision;
        let digits = if self.packed() {
            let mut w = [0u64; bits::WORDS];
            for word in w.iter_mut().take(len.div_ceil(64) as usize) {
                *word = rng.random();
            }
            bits::mask(&mut w, len);
            if kind == SampleKind::Unit {
                w[0] |= 1;
            }
            Digits::Bits(w)
        } else {
            let mut d: Vec<u32> = (0..len).map(|_| rng.random_range(0..self.q)).collect();
            if kind == SampleKind::Unit {
                d[0] = rng.random_range(1..self.q);
            }
            Digits::Residues(d)
        };
        LaurentNumber { field: *self, valuation: 0, len, exact_zero: false, digits }.normalized()
    }

    /// Parses `0`, `O(t^k)` or `t^v*(c0 + c1*t + c2*t^2 + ...)`.
    pub fn parse(&self, input: &str) -> Result<LaurentNumber, FieldError> {
        let fail = |reason: &str| FieldError::Parse { input: input.to_string(), reason: reason.to_string() };
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s == "0" {
            return Ok(self.zero());
        }
        if let Some(rest) = s.strip_prefix("O(t^").and_then(|r| r.strip_suffix(')')) {
            let abs = rest.parse::<i64>().map_err(|_| fail("bad precision exponent"))?;
            return Ok(self.precision_zero(abs));
        }
        let rest = s.strip_prefix("t^").ok_or_else(|| fail("expected `t^`"))?;
        let (v, body) = rest.split_once("*(").ok_or_else(|| fail("expected `*(`"))?;
        let valuation = v.parse::<i64>().map_err(|_| fail("bad valuation"))?;
        let body = body.strip_suffix(')').ok_or_else(|| fail("missing `)`"))?;
        let mut digits: Vec<u32> = Vec::new();
        for term in body.split('+') {
            let (c, exp) = match term.split_once('*') {
                None => (term, 0usize),
                Some((c, "t")) => (c, 1),
                Some((c, pow)) => {
                    let e = pow.strip_prefix("t^").ok_or_else(|| fail("bad monomial"))?;
                    (c, e.parse::<usize>().map_err(|_| fail("bad exponent"))?)
                }
            };
            let c = c.parse::<u32>().map_err(|_| fail("bad coefficient"))?;
            if c >= self.q {
                return Err(fail("coefficient is not a residue"));
            }
            if exp < digits.len() {
                return Err(fail("exponents must increase"));
            }
            digits.resize(exp, 0);
            digits.push(c);
        }
        if digits.len() > self.precision as usize {
            return Err(fail("window longer than the precision"));
        }
        Ok(self.from_window(valuation, &digits))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Digits {
    Bits(Window),
    Residues(Vec<u32>),
}

/// An element of `F_q((t))` truncated to a window of significant coefficients.
///
/// Three states: exact zero; *precision-zero* (every retained coefficient
/// cancelled, so the value is only known to lie in `t^k R`); and nonzero with
/// an exact valuation and a nonzero leading coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentNumber {
    field: LaurentField,
    // Leading exponent; for precision-zero values the exponent `k` above.
    valuation: i64,
    len: u32,
    exact_zero: bool,
    digits: Digits,
}

/// `mod_K(a) = q^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModValue {
    pub q: u32,
    pub exponent: i64,
}

impl ModValue {
    pub fn value(&self) -> f64 {
        (self.q as f64).powi(self.exponent as i32)
    }

    pub fn mul(self, other: ModValue) -> ModValue {
        debug_assert_eq!(self.q, other.q);
        ModValue { q: self.q, exponent: self.exponent + other.exponent }
    }
}

impl LaurentNumber {
    pub fn field(&self) -> LaurentField {
        self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q
    }

    /// Zero flag: no retained coefficients, either exactly or after cancellation.
    pub fn is_zero(&self) -> bool {
        self.len == 0
    }

    pub fn is_exact_zero(&self) -> bool {
        self.exact_zero
    }

    pub fn is_precision_zero(&self) -> bool {
        self.len == 0 && !self.exact_zero
    }

    /// Number of retained coefficients.
    pub fn window_len(&self) -> u32 {
        self.len
    }

    /// Exponent at which knowledge of the value stops (`i64::MAX` for exact zero).
    pub fn absolute_precision(&self) -> i64 {
        if self.exact_zero {
            i64::MAX
        } else {
            self.valuation + self.len as i64
        }
    }

    /// `Ok(None)` for exact zero; an error when truncation swallowed the valuation.
    pub fn valuation(&self) -> Result<Option<i64>, FieldError> {
        if self.exact_zero {
            Ok(None)
        } else if self.len == 0 {
            Err(FieldError::PrecisionLoss(self.valuation))
        } else {
            Ok(Some(self.valuation))
        }
    }

    /// Decides `v(self) >= bound`, treating zero as passing. Fails only when a
    /// precision-zero value's known window ends below `bound`.
    pub fn valuation_at_least(&self, bound: i64) -> Result<bool, FieldError> {
        match self.valuation() {
            Ok(None) => Ok(true),
            Ok(Some(v)) => Ok(v >= bound),
            Err(_) if self.valuation >= bound => Ok(true),
            Err(e) => Err(e),
        }
    }

    pub fn modulus(&self) -> Result<ModValue, FieldError> {
        match self.valuation()? {
            None => Err(FieldError::ZeroModulus),
            Some(v) => Ok(ModValue { q: self.field.q, exponent: -v }),
        }
    }

    /// Coefficient `i` of the window, i.e. of `t^(valuation + i)`.
    pub fn digit(&self, i: u32) -> u32 {
        assert!(i < self.len, "digit {i} outside window of {}", self.len);
        match &self.digits {
            Digits::Bits(w) => bits::bit(w, i),
            Digits::Residues(d) => d[i as usize],
        }
    }

    pub fn window(&self) -> Vec<u32> {
        (0..self.len).map(|i| self.digit(i)).collect()
    }

    /// Coefficient of `t^exponent`, `None` beyond the known window.
    pub fn coefficient(&self, exponent: i64) -> Option<u32> {
        if exponent >= self.absolute_precision() {
            return None;
        }
        if exponent < self.valuation {
            return Some(0);
        }
        Some(self.digit((exponent - self.valuation) as u32))
    }

    fn check(&self, other: &LaurentNumber) -> Result<LaurentField, FieldError> {
        if self.field.q != other.field.q {
            return Err(FieldError::MismatchedField(self.field.q, other.field.q));
        }
        if self.field.precision != other.field.precision {
            return Err(FieldError::MismatchedPrecision(self.field.precision, other.field.precision));
        }
        Ok(self.field)
    }

    fn normalized(mut self) -> LaurentNumber {
        let lead = match &self.digits {
            Digits::Bits(w) => bits::trailing_zeros(w).filter(|&z| z < self.len),
            Digits::Residues(d) => d.iter().position(|&c| c != 0).map(|z| z as u32),
        };
        match lead {
            None => {
                let abs = self.valuation + self.len as i64;
                self.field.precision_zero(abs)
            }
            Some(z) => {
                let len = min(self.len - z, self.field.precision);
                self.digits = match self.digits {
                    Digits::Bits(w) => {
                        let mut s = bits::shr(&w, z);
                        bits::mask(&mut s, len);
                        Digits::Bits(s)
                    }
                    Digits::Residues(d) => Digits::Residues(d[z as usize..(z + len) as usize].to_vec()),
                };
                self.valuation += z as i64;
                self.len = len;
                self
            }
        }
    }

    pub fn try_add(&self, other: &LaurentNumber) -> Result<LaurentNumber, FieldError> {
        let field = self.check(other)?;
        if self.exact_zero {
            return Ok(other.clone());
        }
        if other.exact_zero {
            return Ok(self.clone());
        }
        let abs = min(self.absolute_precision(), other.absolute_precision());
        let lead = [self, other].into_iter().filter(|x| x.len > 0).map(|x| x.valuation).min();
        let v0 = match lead {
            Some(v0) if v0 < abs => v0,
            _ => return Ok(field.precision_zero(abs)),
        };
        let len = (abs - v0) as u32;
        let digits = match field.packed() {
            true => {
                let mut acc = [0u64; bits::WORDS];
                for x in [self, other] {
                    if let (Digits::Bits(w), true) = (&x.digits, x.len > 0) {
                        let shift = (x.valuation - v0).min(bits::CAPACITY as i64) as u32;
                        let s = bits::shl(w, shift);
                        for (a, b) in acc.iter_mut().zip(s) {
                            *a ^= b;
                        }
                    }
                }
                bits::mask(&mut acc, len);
                Digits::Bits(acc)
            }
            false => {
                let q = field.q;
                let mut acc = vec![0u32; len as usize];
                for x in [self, other] {
                    if x.len == 0 {
                        continue;
                    }
                    let shift = (x.valuation - v0) as usize;
                    for i in shift..min(len as usize, shift + x.len as usize) {
                        acc[i] = ((acc[i] as u64 + x.digit((i - shift) as u32) as u64) % q as u64) as u32;
                    }
                }
                Digits::Residues(acc)
            }
        };
        Ok(LaurentNumber { field, valuation: v0, len, exact_zero: false, digits }.normalized())
    }

    pub fn neg(&self) -> LaurentNumber {
        let mut out = self.clone();
        if let Digits::Residues(d) = &mut out.digits {
            let q = self.field.q;
            for c in d.iter_mut() {
                *c = (q - *c) % q;
            }
        }
        out
    }

    pub fn try_sub(&self, other: &LaurentNumber) -> Result<LaurentNumber, FieldError> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &LaurentNumber) -> Result<LaurentNumber, FieldError> {
        let field = self.check(other)?;
        if self.exact_zero || other.exact_zero {
            return Ok(field.zero());
        }
        match (self.len, other.len) {
            (0, _) | (_, 0) => return Ok(field.precision_zero(self.valuation + other.valuation)),
            _ => {}
        }
        let len = min(min(self.len, other.len), field.precision);
        let digits = match (&self.digits, &other.digits) {
            (Digits::Bits(a), Digits::Bits(b)) => Digits::Bits(bits::mul_trunc(a, b, len)),
            _ => {
                let q = field.q as u64;
                let a: Vec<u64> = (0..len).map(|i| self.digit(i) as u64).collect();
                let b: Vec<u64> = (0..len).map(|i| other.digit(i) as u64).collect();
                // Sums of `len` products stay below 2^64 for small q.
                let lazy = (q - 1).saturating_mul(q - 1).saturating_mul(len as u64) < u64::MAX / 2;
                let mut out = vec![0u32; len as usize];
                for (k, slot) in out.iter_mut().enumerate() {
                    let mut acc = 0u64;
                    for i in 0..=k {
                        acc += a[i] * b[k - i];
                        if !lazy {
                            acc %= q;
                        }
                    }
                    *slot = (acc % q) as u32;
                }
                Digits::Residues(out)
            }
        };
        Ok(LaurentNumber { field, valuation: self.valuation + other.valuation, len, exact_zero: false, digits })
    }

    /// Multiplicative inverse to the retained precision.
    pub fn inverse(&self) -> Result<LaurentNumber, FieldError> {
        if self.exact_zero {
            return Err(FieldError::DivisionByZero);
        }
        if self.len == 0 {
            return Err(FieldError::PrecisionLoss(self.valuation));
        }
        let len = self.len;
        let digits = match &self.digits {
            Digits::Bits(w) => Digits::Bits(bits::inv_trunc(w, len)),
            Digits::Residues(a) => {
                let q = self.field.q as u64;
                let lead_inv = inv_mod(a[0], self.field.q) as u64;
                let mut b = vec![0u64; len as usize];
                b[0] = lead_inv;
                for k in 1..len as usize {
                    let mut acc = 0u64;
                    for j in 1..=k {
                        acc = (acc + a[j] as u64 * b[k - j]) % q;
                    }
                    b[k] = (q - acc) % q * lead_inv % q;
                }
                Digits::Residues(b.into_iter().map(|c| c as u32).collect())
            }
        };
        Ok(LaurentNumber { field: self.field, valuation: -self.valuation, len, exact_zero: false, digits })
    }

    /// Agreement on the common known window: the difference has no retained
    /// coefficient.
    pub fn eq_within_precision(&self, other: &LaurentNumber) -> bool {
        self.try_sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }

    /// Multiplication by `t^shift`.
    pub fn shifted(&self, shift: i64) -> LaurentNumber {
        let mut out = self.clone();
        if !self.exact_zero {
            out.valuation += shift;
        }
        out
    }
}

impl fmt::Display for LaurentNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exact_zero {
            return write!(f, "0");
        }
        if self.len == 0 {
            return write!(f, "O(t^{})", self.valuation);
        }
        write!(f, "t^{}*(", self.valuation)?;
        for i in 0..self.len {
            if i > 0 {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "{}", self.digit(0))?,
                1 => write!(f, "{}*t", self.digit(1))?,
                _ => write!(f, "{}*t^{}", self.digit(i), i)?,
            }
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f2() -> LaurentField {
        LaurentField::new(2, 16).unwrap()
    }

    #[test]
    fn rejects_composite_and_zero_precision() {
        assert_eq!(LaurentField::new(4, 8), Err(FieldError::NotPrime(4)));
        assert_eq!(LaurentField::new(3, 0), Err(FieldError::InvalidPrecision));
    }

    #[test]
    fn characteristic_two_cancellation() {
        let k = f2();
        let a = k.from_digits(1, &[1, 1]);
        let b = k.from_digits(2, &[1]);
        let s = a.try_add(&b).unwrap();
        assert_eq!(s.valuation().unwrap(), Some(1));
        assert_eq!(s.coefficient(1), Some(1));
        assert_eq!(s.coefficient(2), Some(0));
        assert_eq!(s.coefficient(3), Some(0));
    }

    #[test]
    fn distinct_valuations_keep_the_smaller() {
        for q in [2, 3, 7] {
            let k = LaurentField::new(q, 12).unwrap();
            let a = k.from_digits(-2, &[1, 1]);
            let b = k.from_digits(0, &[1]);
            assert_eq!(a.try_add(&b).unwrap().valuation().unwrap(), Some(-2));
        }
    }

    #[test]
    fn additive_inverse_is_flagged_zero() {
        for q in [2, 5] {
            let k = LaurentField::new(q, 10).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            let x = k.sample(SampleKind::Unit, &mut rng).shifted(-3);
            let z = x.try_add(&x.neg()).unwrap();
            assert!(z.is_zero());
            assert!(z.is_precision_zero());
            assert_eq!(z.valuation(), Err(FieldError::PrecisionLoss(7)));
            assert!(z.valuation_at_least(7).unwrap());
            assert!(z.valuation_at_least(8).is_err());
        }
    }

    #[test]
    fn mismatched_fields_are_errors() {
        let a = LaurentField::new(2, 8).unwrap().one();
        let b = LaurentField::new(3, 8).unwrap().one();
        assert_eq!(a.try_add(&b), Err(FieldError::MismatchedField(2, 3)));
        assert_eq!(a.try_mul(&b), Err(FieldError::MismatchedField(2, 3)));
    }

    #[test]
    fn uniformizer_inverse_and_square() {
        let k = f2();
        let t = k.uniformizer();
        let tinv = t.inverse().unwrap();
        assert_eq!(tinv, k.monomial(-1, 1));
        assert_eq!(tinv.try_mul(&t).unwrap(), k.one());
        let one_plus_t = k.from_digits(0, &[1, 1]);
        assert_eq!(one_plus_t.try_mul(&one_plus_t).unwrap(), k.from_digits(0, &[1, 0, 1]));
        let a = k.monomial(-3, 1);
        let b = k.from_digits(2, &[1, 1]);
        assert_eq!(a.try_mul(&b).unwrap().valuation().unwrap(), Some(-1));
    }

    #[test]
    fn geometric_series_inverse() {
        for k in [f2(), LaurentField::new(2, 300).unwrap()] {
            let inv = k.from_digits(0, &[1, 1]).inverse().unwrap();
            assert_eq!(inv.window(), vec![1; k.precision() as usize]);
            assert_eq!(inv.try_mul(&k.from_digits(0, &[1, 1])).unwrap(), k.one());
        }
        assert_eq!(f2().one().inverse().unwrap(), f2().one());
        assert_eq!(f2().zero().inverse(), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn modulus_normalization() {
        let k = LaurentField::new(3, 8).unwrap();
        let m = k.monomial(-3, 2).modulus().unwrap();
        assert_eq!(m, ModValue { q: 3, exponent: 3 });
        assert_eq!(m.value(), 27.0);
        assert_eq!(k.from_digits(0, &[2, 1]).modulus().unwrap().exponent, 0);
        assert_eq!(k.zero().modulus(), Err(FieldError::ZeroModulus));
    }

    #[test]
    fn literal_roundtrip() {
        let k = LaurentField::new(5, 6).unwrap();
        let x = k.from_window(-2, &[3, 0, 4, 1]);
        let s = x.to_string();
        assert_eq!(s, "t^-2*(3 + 0*t + 4*t^2 + 1*t^3)");
        assert_eq!(k.parse(&s).unwrap(), x);
        assert_eq!(k.parse("0").unwrap(), k.zero());
        assert_eq!(k.parse("O(t^4)").unwrap(), k.precision_zero(4));
        assert!(k.parse("t^1*(7)").is_err());
        assert!(k.parse("x").is_err());
    }

    #[test]
    fn packed_and_residue_paths_agree() {
        // q = 2 with precision above the packed capacity uses residue digits.
        let packed = LaurentField::new(2, 200).unwrap();
        let wide = LaurentField::new(2, 257).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let a: Vec<u32> = (0..200).map(|_| rng.random_range(0..2)).collect();
            let b: Vec<u32> = (0..200).map(|_| rng.random_range(0..2)).collect();
            let (pa, pb) = (packed.from_window(-4, &a), packed.from_window(3, &b));
            let (wa, wb) = (wide.from_window(-4, &a), wide.from_window(3, &b));
            assert_eq!(pa.try_add(&pb).unwrap().to_string(), wa.try_add(&wb).unwrap().to_string());
            assert_eq!(pa.try_mul(&pb).unwrap().to_string(), wa.try_mul(&wb).unwrap().to_string());
            if !pa.is_zero() {
                assert_eq!(pa.inverse().unwrap().to_string(), wa.inverse().unwrap().to_string());
            }
        }
    }

    #[test]
    fn sampling_respects_kind() {
        let k = LaurentField::new(3, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let b = k.sample(SampleKind::Ball, &mut rng);
            assert!(b.valuation_at_least(0).unwrap());
            let u = k.sample(SampleKind::Unit, &mut rng);
            assert_eq!(u.valuation().unwrap(), Some(0));
        }
    }
}
