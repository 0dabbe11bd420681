use std::ops::RangeInclusive;

use nalgebra::{DMatrix, RowDVector};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::walk::{least_squares, LineFit};

use super::element::{box_volume, ln_box_volume};
use super::SolError;

/// Largest step count accepted by [`confined_dp_exact`].
pub const EXACT_STEP_LIMIT: u64 = 10_000;
/// Above this many state updates [`confined_dp_ln`] switches from stepping to
/// repeated squaring.
const STEPPING_BUDGET: u64 = 1 << 22;
/// Rescaling threshold for the stepped vector.
const RESCALE_BELOW: f64 = 1e-200;

/// Law of the projected increment on `{−1, 0, +1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectedKernel {
    probs: [BigRational; 3],
}

impl Default for ProjectedKernel {
    fn default() -> Self {
        let r = |p| BigRational::new(BigInt::from(p), BigInt::from(5));
        ProjectedKernel { probs: [r(2), r(1), r(2)] }
    }
}

impl ProjectedKernel {
    pub fn new(minus: BigRational, zero: BigRational, plus: BigRational) -> Result<Self, SolError> {
        let probs = [minus, zero, plus];
        if probs.iter().any(|p| p.is_negative()) {
            return Err(SolError::InvalidKernel("negative probability".into()));
        }
        if probs.iter().sum::<BigRational>() != BigRational::one() {
            return Err(SolError::InvalidKernel("probabilities do not sum to 1".into()));
        }
        Ok(ProjectedKernel { probs })
    }

    /// `(p₋₁, p₀, p₊₁)`.
    pub fn exact(&self) -> &[BigRational; 3] {
        &self.probs
    }

    pub fn probs(&self) -> [f64; 3] {
        self.probs.clone().map(|p| p.to_f64().unwrap_or(f64::NAN))
    }
}

/// Neumaier compensated sum.
#[derive(Debug, Default, Clone, Copy)]
struct Compensated {
    sum: f64,
    c: f64,
}

impl Compensated {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.c += (self.sum - t) + v;
        } else {
            self.c += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum + self.c
    }
}

/// `ln P(S_1, …, S_steps ∈ [−n, n])`, stepping the distribution one step at a
/// time with compensated sums and rescaling in log space.
pub fn confined_dp_stepped_ln(kernel: &ProjectedKernel, n: u32, steps: u64) -> f64 {
    if steps <= n as u64 {
        return 0.0;
    }
    let [pm, p0, pp] = kernel.probs();
    let w = 2 * n as usize + 1;
    let mut v = vec![0.0; w];
    let mut next = vec![0.0; w];
    v[n as usize] = 1.0;
    let mut log_scale = 0.0;
    for _ in 0..steps {
        for i in 0..w {
            let mut acc = Compensated::default();
            if i + 1 < w {
                acc.add(pm * v[i + 1]);
            }
            acc.add(p0 * v[i]);
            if i > 0 {
                acc.add(pp * v[i - 1]);
            }
            next[i] = acc.value();
        }
        std::mem::swap(&mut v, &mut next);
        let peak = v.iter().copied().fold(0.0, f64::max);
        if peak == 0.0 {
            return f64::NEG_INFINITY;
        }
        if peak < RESCALE_BELOW {
            v.iter_mut().for_each(|x| *x /= peak);
            log_scale += peak.ln();
        }
    }
    let mut total = Compensated::default();
    v.iter().for_each(|&x| total.add(x));
    log_scale + total.value().ln()
}

fn transfer_matrix(kernel: &ProjectedKernel, n: u32) -> DMatrix<f64> {
    let [pm, p0, pp] = kernel.probs();
    let w = 2 * n as usize + 1;
    DMatrix::from_fn(w, w, |i, j| match j as i64 - i as i64 {
        -1 => pm,
        0 => p0,
        1 => pp,
        _ => 0.0,
    })
}

fn rescale_matrix(m: &mut DMatrix<f64>) -> f64 {
    let peak = m.max();
    if peak > 0.0 {
        *m /= peak;
        peak.ln()
    } else {
        f64::NEG_INFINITY
    }
}

/// The same probability by repeated squaring of the substochastic transfer
/// matrix. Every entry is a sum of nonnegative terms, so squaring loses no
/// accuracy to cancellation.
pub fn confined_dp_squaring_ln(kernel: &ProjectedKernel, n: u32, steps: u64) -> f64 {
    if steps <= n as u64 {
        return 0.0;
    }
    let w = 2 * n as usize + 1;
    let mut power = transfer_matrix(kernel, n);
    let mut power_log = 0.0;
    let mut v = RowDVector::from_fn(w, |_, j| if j == n as usize { 1.0 } else { 0.0 });
    let mut v_log = 0.0;
    let mut rest = steps;
    loop {
        if rest & 1 == 1 {
            v = &v * &power;
            v_log += power_log;
            let peak = v.max();
            if peak <= 0.0 {
                return f64::NEG_INFINITY;
            }
            v /= peak;
            v_log += peak.ln();
        }
        rest >>= 1;
        if rest == 0 {
            break;
        }
        power = &power * &power;
        power_log *= 2.0;
        power_log += rescale_matrix(&mut power);
    }
    let mut total = Compensated::default();
    v.iter().for_each(|&x| total.add(x));
    v_log + total.value().ln()
}

/// `ln P(S_1, …, S_steps ∈ [−n, n])` for the projected walk started at 0.
pub fn confined_dp_ln(kernel: &ProjectedKernel, n: u32, steps: u64) -> f64 {
    if steps.saturating_mul(2 * n as u64 + 1) <= STEPPING_BUDGET {
        confined_dp_stepped_ln(kernel, n, steps)
    } else {
        confined_dp_squaring_ln(kernel, n, steps)
    }
}

pub fn confined_dp(kernel: &ProjectedKernel, n: u32, steps: u64) -> f64 {
    confined_dp_ln(kernel, n, steps).exp()
}

/// Exact confined probability, by integer numerators over a common
/// denominator.
pub fn confined_dp_exact(kernel: &ProjectedKernel, n: u32, steps: u64) -> Result<BigRational, SolError> {
    if steps > EXACT_STEP_LIMIT {
        return Err(SolError::InvalidArgument(format!("exact mode is limited to {EXACT_STEP_LIMIT} steps")));
    }
    if steps <= n as u64 {
        return Ok(BigRational::one());
    }
    let probs = kernel.exact();
    let denom = probs.iter().fold(BigInt::one(), |acc, p| acc.lcm(p.denom()));
    let num: Vec<BigInt> = probs.iter().map(|p| p.numer() * (&denom / p.denom())).collect();
    let w = 2 * n as usize + 1;
    let mut v = vec![BigInt::zero(); w];
    v[n as usize] = BigInt::one();
    for _ in 0..steps {
        v = (0..w)
            .map(|i| {
                let mut acc = &num[1] * &v[i];
                if i + 1 < w {
                    acc += &num[0] * &v[i + 1];
                }
                if i > 0 {
                    acc += &num[2] * &v[i - 1];
                }
                acc
            })
            .collect();
    }
    let total: BigInt = v.into_iter().sum();
    Ok(BigRational::new(total, num_traits::pow(denom, steps as usize)))
}

/// One point of the lower-bound curve.
#[derive(Debug, Clone, Serialize)]
pub struct LowerBoundPoint {
    pub t: u64,
    pub n_star: u32,
    pub n_range: (u32, u32),
    /// Whether the maximizer lies strictly inside the searched range.
    pub interior: bool,
    pub ln_confined: f64,
    pub confined_prob: f64,
    #[serde(serialize_with = "as_decimal")]
    pub volume: BigUint,
    pub ln_bound: f64,
    pub bound: f64,
    pub log_neg_log_bound: f64,
}

fn as_decimal<S: serde::Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Default search range for the box size at time `t`; the maximizer sits
/// near `t^{1/3}`.
pub fn default_n_range(t: u64) -> RangeInclusive<u32> {
    1..=(2.0 * (t as f64).cbrt()).ceil() as u32 + 4
}

/// `max_n P(S_1..S_{2t} ∈ [−n, n]) / μ(Ω_n)`: a lower bound for the return
/// density `F^{*2t}(e)`.
///
/// Integer ternary search on `ln P − ln μ(Ω_n)`, then an exhaustive scan of
/// the last bracket widened by three on each side.
pub fn lower_bound(kernel: &ProjectedKernel, q: u32, t: u64, range: RangeInclusive<u32>) -> Result<LowerBoundPoint, SolError> {
    if t == 0 {
        return Err(SolError::InvalidArgument("t must be positive".into()));
    }
    if range.is_empty() {
        return Err(SolError::EmptyRange);
    }
    let (lo0, hi0) = (*range.start(), *range.end());
    let steps = 2 * t;
    let objective = |n: u32| confined_dp_ln(kernel, n, steps) - ln_box_volume(n, q);
    let (mut lo, mut hi) = (lo0, hi0);
    while hi - lo > 4 {
        let m1 = lo + (hi - lo) / 3;
        let m2 = hi - (hi - lo) / 3;
        if objective(m1) < objective(m2) {
            lo = m1 + 1;
        } else {
            hi = m2 - 1;
        }
    }
    let scan: Vec<u32> = (lo.saturating_sub(3).max(lo0)..=(hi + 3).min(hi0)).collect();
    let values: Vec<(u32, f64, f64)> = scan
        .par_iter()
        .map(|&n| {
            let c = confined_dp_ln(kernel, n, steps);
            (n, c, c - ln_box_volume(n, q))
        })
        .collect();
    let &(n_star, ln_confined, ln_bound) = values
        .iter()
        .max_by(|a, b| a.2.total_cmp(&b.2).then(b.0.cmp(&a.0)))
        .expect("scan window is nonempty");
    Ok(LowerBoundPoint {
        t,
        n_star,
        n_range: (lo0, hi0),
        interior: n_star > lo0 && n_star < hi0,
        ln_confined,
        confined_prob: ln_confined.exp(),
        volume: box_volume(n_star, q),
        ln_bound,
        bound: ln_bound.exp(),
        log_neg_log_bound: (-ln_bound).ln(),
    })
}

/// Lower bounds at each `t`, over [`default_n_range`].
pub fn lower_bound_curve(kernel: &ProjectedKernel, q: u32, ts: &[u64]) -> Result<Vec<LowerBoundPoint>, SolError> {
    ts.par_iter().map(|&t| lower_bound(kernel, q, t, default_n_range(t))).collect()
}

/// Regression of `ln(−ln bound)` on `ln t`.
pub fn lower_bound_slope(points: &[LowerBoundPoint]) -> Result<LineFit, SolError> {
    if points.len() < 2 {
        return Err(SolError::InvalidArgument("need at least two points".into()));
    }
    let xs: Vec<f64> = points.iter().map(|p| (p.t as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.log_neg_log_bound).collect();
    Ok(least_squares(&xs, &ys))
}

/// CSV with columns `t,n_star,confined_prob,volume,bound,log_neg_log_bound`.
/// Probabilities are printed in scientific notation; they underflow `f64`
/// long before their logarithms do, so `bound` may read `0` where
/// `log_neg_log_bound` is still finite.
pub fn lower_bound_csv(points: &[LowerBoundPoint]) -> String {
    let mut out = String::from("t,n_star,confined_prob,volume,bound,log_neg_log_bound\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{:e},{},{:e},{}\n",
            p.t, p.n_star, p.confined_prob, p.volume, p.bound, p.log_neg_log_bound
        ));
    }
    out
}
