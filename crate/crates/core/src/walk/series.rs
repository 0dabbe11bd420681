use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::measure::{inner, Measure};
use super::weight::{Mode, Weight};
use super::WalkError;
use crate::group::{Group, GroupElement};

/// Default cap on the support size of `μ^{*n}`.
pub const DEFAULT_SUPPORT_BUDGET: usize = 4_000_000;

/// Return probabilities `a_n = μ^{*2n}(e)` for `n = 1..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnSeries<W> {
    pub group: String,
    pub fingerprint: String,
    pub values: Vec<W>,
}

impl<W: Weight> ReturnSeries<W> {
    pub fn mode(&self) -> Mode {
        W::MODE
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `a_n` for `n ≥ 1`.
    pub fn a(&self, n: usize) -> &W {
        &self.values[n - 1]
    }

    pub fn log_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.ln()).collect()
    }

    pub fn to_f64(&self) -> ReturnSeries<f64> {
        ReturnSeries {
            group: self.group.clone(),
            fingerprint: self.fingerprint.clone(),
            values: self.values.iter().map(|v| v.to_f64()).collect(),
        }
    }
}

/// `a_n = Σ_x ν_n(x)²` with `ν_n = μ^{*n}` built one step at a time.
pub fn return_series<W: Weight>(mu: &Measure<W>, n_max: usize, budget: usize) -> Result<ReturnSeries<W>, WalkError> {
    mu.require_symmetric()?;
    let mut values = Vec::with_capacity(n_max);
    let mut nu = mu.clone();
    for n in 1..=n_max {
        if n > 1 {
            nu = nu.convolve(mu)?;
        }
        if nu.support_len() > budget {
            return Err(WalkError::SupportOverflow { n, size: nu.support_len(), budget });
        }
        values.push(inner(nu.atoms(), nu.atoms()));
    }
    Ok(ReturnSeries { group: mu.group().to_string(), fingerprint: mu.fingerprint(), values })
}

/// Both `a_t` and `P(Z_{2t} ∈ B) = Σ_{g∈B} μ^{*2t}(g)` for `t = 1..=t_max`.
pub fn neighborhood_series<W: Weight>(
    mu: &Measure<W>,
    t_max: usize,
    set: &[GroupElement],
    budget: usize,
) -> Result<Vec<(W, W)>, WalkError> {
    mu.require_symmetric()?;
    let group = mu.group();
    let mut out = Vec::with_capacity(t_max);
    let mut nu = mu.clone();
    for t in 1..=t_max {
        if t > 1 {
            nu = nu.convolve(mu)?;
        }
        if nu.support_len() > budget {
            return Err(WalkError::SupportOverflow { n: t, size: nu.support_len(), budget });
        }
        let a = inner(nu.atoms(), nu.atoms());
        let mut hit = W::zero();
        for g in set {
            hit = hit + square_at(group, &nu, g);
        }
        out.push((a, hit));
    }
    Ok(out)
}

/// `(ν*ν)(g) = Σ_y ν(g y⁻¹) ν(y)`.
pub fn square_at<W: Weight>(group: Group, nu: &Measure<W>, g: &GroupElement) -> W {
    nu.atoms()
        .iter()
        .filter_map(|(y, w)| {
            let x = group.op_unchecked(g, &group.inverse_unchecked(y));
            nu.atoms().get(&x).map(|v| v.clone() * w.clone())
        })
        .fold(W::zero(), |acc, v| acc + v)
}

/// Return series of the simple random walk on `F_k` through its radial
/// projection. Tracks the law `p_n(d)` of the word length and the mass
/// `q_n(d) = p_n(d)/N(d)` of a single element of the sphere of radius `d`;
/// `a_n = Σ_d p_n(d) q_n(d)`. Exact mode works with integer numerators over
/// `(2k)^n`.
pub fn free_radial_series<W: Weight>(k: usize, n_max: usize) -> Result<ReturnSeries<W>, WalkError> {
    if k < 2 {
        return Err(WalkError::InvalidMeasure("radial reduction needs k >= 2".into()));
    }
    let values = match W::MODE {
        Mode::Exact => radial_exact(k, n_max).into_iter().map(|r| W::from_ratio(&r)).collect(),
        Mode::Float => radial_float(k, n_max).into_iter().map(W::from_f64).collect(),
    };
    let group = Group::Free { k };
    Ok(ReturnSeries { group: group.to_string(), fingerprint: Measure::<W>::srw(group).fingerprint(), values })
}

fn radial_exact(k: usize, n_max: usize) -> Vec<BigRational> {
    let deg = BigInt::from(2 * k);
    let up = BigInt::from(2 * k - 1);
    // Numerators of p and q over (2k)^n.
    let mut p = vec![BigInt::one()];
    let mut q = vec![BigInt::one()];
    let mut denom_sq = BigInt::one();
    let deg_sq = &deg * &deg;
    let mut out = Vec::with_capacity(n_max);
    for _ in 0..n_max {
        let len = p.len() + 1;
        let mut np = vec![BigInt::zero(); len];
        let mut nq = vec![BigInt::zero(); len];
        np[1] += &deg * &p[0];
        for d in 1..p.len() {
            np[d + 1] += &up * &p[d];
            np[d - 1] += &p[d];
        }
        for d in 0..len {
            let below = if d >= 1 { q.get(d - 1).cloned().unwrap_or_default() } else { BigInt::zero() };
            let above = q.get(d + 1).cloned().unwrap_or_default();
            nq[d] = if d == 0 { &deg * above } else { below + &up * above };
        }
        p = np;
        q = nq;
        denom_sq *= &deg_sq;
        let num: BigInt = p.iter().zip(&q).map(|(a, b)| a * b).sum();
        out.push(BigRational::new(num, denom_sq.clone()));
    }
    out
}

fn radial_float(k: usize, n_max: usize) -> Vec<f64> {
    let deg = (2 * k) as f64;
    let up = (2 * k - 1) as f64 / deg;
    let down = 1.0 / deg;
    let mut p = vec![1.0f64];
    let mut q = vec![1.0f64];
    let mut out = Vec::with_capacity(n_max);
    for _ in 0..n_max {
        let len = p.len() + 1;
        let mut np = vec![0.0; len];
        let mut nq = vec![0.0; len];
        np[1] += p[0];
        for d in 1..p.len() {
            np[d + 1] += up * p[d];
            np[d - 1] += down * p[d];
        }
        for d in 0..len {
            let above = q.get(d + 1).copied().unwrap_or(0.0);
            nq[d] = if d == 0 { above } else { down * q.get(d - 1).copied().unwrap_or(0.0) + up * above };
        }
        p = np;
        q = nq;
        out.push(p.iter().zip(&q).map(|(a, b)| a * b).sum());
    }
    out
}

/// `P(|Z_m| = 0)` for the radial chain, exact: the direct `μ^{*m}(e)` oracle.
pub fn free_radial_return_at(k: usize, m: usize) -> BigRational {
    let deg = BigInt::from(2 * k);
    let up = BigInt::from(2 * k - 1);
    let mut p = vec![BigInt::one()];
    for _ in 0..m {
        let mut np = vec![BigInt::zero(); p.len() + 1];
        np[1] += &deg * &p[0];
        for d in 1..p.len() {
            np[d + 1] += &up * &p[d];
            np[d - 1] += &p[d];
        }
        p = np;
    }
    BigRational::new(p[0].clone(), deg.pow(m as u32))
}

/// Ratio diagnostics of a return series.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralDiagnostics {
    pub mode: Mode,
    /// `r_n = a_{n+1}/a_n` for `n = 1..N-1`.
    pub ratios: Vec<f64>,
    /// The same ratios as `p/q` strings in exact mode.
    pub ratios_exact: Option<Vec<String>>,
    /// Last ratio: estimate of the squared operator norm of the walk.
    pub norm_sq_estimate: f64,
    /// `(n+1) r_{n+1} − n r_n` at the end of the series, which removes the
    /// leading `1/n` correction.
    pub richardson_estimate: f64,
    pub log_convexity_checks: usize,
}

/// Checks `0 < r_n ≤ 1`, `r_n` nondecreasing and `a_n² ≤ a_{n−1} a_{n+1}`,
/// exactly in rational mode.
pub fn spectral_diagnostics<W: Weight>(s: &ReturnSeries<W>) -> Result<SpectralDiagnostics, WalkError> {
    let a = &s.values;
    if a.len() < 3 {
        return Err(WalkError::SeriesTooShort { have: a.len(), need: 3 });
    }
    for (i, v) in a.iter().enumerate() {
        if !(*v > W::zero()) {
            return Err(WalkError::Invariant { what: "a_n > 0", n: i + 1 });
        }
    }
    let ratios: Vec<W> = a.windows(2).map(|w| w[1].clone() / w[0].clone()).collect();
    for (i, r) in ratios.iter().enumerate() {
        if !r.le_tol(&W::one()) {
            return Err(WalkError::Invariant { what: "a_{n+1}/a_n <= 1", n: i + 1 });
        }
    }
    for (i, w) in ratios.windows(2).enumerate() {
        if !w[0].le_tol(&w[1]) {
            return Err(WalkError::Invariant { what: "ratios nondecreasing", n: i + 2 });
        }
    }
    let mut checks = 0;
    for (i, w) in a.windows(3).enumerate() {
        if !(w[1].clone() * w[1].clone()).le_tol(&(w[0].clone() * w[2].clone())) {
            return Err(WalkError::Invariant { what: "a_n^2 <= a_{n-1} a_{n+1}", n: i + 2 });
        }
        checks += 1;
    }
    let rf: Vec<f64> = ratios.iter().map(|r| r.to_f64()).collect();
    let m = rf.len();
    let last = rf[m - 1];
    let richardson = if m >= 2 { m as f64 * rf[m - 1] - (m - 1) as f64 * rf[m - 2] } else { last };
    Ok(SpectralDiagnostics {
        mode: W::MODE,
        ratios_exact: (W::MODE == Mode::Exact).then(|| ratios.iter().map(|r| r.render()).collect()),
        ratios: rf,
        norm_sq_estimate: last,
        richardson_estimate: richardson,
        log_convexity_checks: checks,
    })
}
