use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

pub use crate::seed::split as instance_seed;

use super::operator::{psd_leq, SpectralOperator, SPECTRUM_TOLERANCE};
use super::TraceError;

/// Slack for every trace inequality.
pub const INEQUALITY_SLACK: f64 = 1e-9;
/// Slack for the scalar grid inequalities.
pub const SCALAR_SLACK: f64 = 1e-12;
/// Dyadic levels used for the step approximations `g_n`.
pub const DYADIC_LEVELS: [u32; 3] = [4, 7, 10];

/// `h = g · 1_{[r,1]}` with `g` nondecreasing and piecewise linear on a
/// uniform grid of `[0, 1]`.
#[derive(Debug, Clone, Serialize)]
pub struct StepFunctionSpec {
    r: f64,
    grid: Vec<f64>,
}

impl StepFunctionSpec {
    pub fn new(r: f64, grid: Vec<f64>) -> Result<Self, TraceError> {
        if !(r > 0.0 && r < 1.0) {
            return Err(TraceError::Precondition(format!("threshold {r} outside (0, 1)")));
        }
        if grid.len() < 2 || grid.windows(2).any(|w| w[1] < w[0]) {
            return Err(TraceError::Precondition("g must be sampled at >= 2 nondecreasing points".into()));
        }
        let spec = StepFunctionSpec { r, grid };
        if spec.g(r) < 0.0 {
            return Err(TraceError::Precondition("g must be nonnegative on [r, 1]".into()));
        }
        Ok(spec)
    }

    /// `g(λ) = λ`.
    pub fn identity(r: f64) -> Result<Self, TraceError> {
        Self::new(r, vec![0.0, 1.0])
    }

    /// Random nonnegative nondecreasing `g` on a 1024-point grid, with flat
    /// stretches and jumps.
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        let r = rng.random_range(0.05..0.95);
        let mut v: f64 = rng.random_range(0.0..0.5);
        let grid = (0..1024)
            .map(|_| {
                let out = v;
                if rng.random_bool(0.7) {
                    v += rng.random_range(0.0..0.01);
                }
                if rng.random_bool(0.002) {
                    v += rng.random_range(0.0..1.0);
                }
                out
            })
            .collect();
        StepFunctionSpec { r, grid }
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn g(&self, l: f64) -> f64 {
        let m = self.grid.len() - 1;
        let pos = l.clamp(0.0, 1.0) * m as f64;
        let i = (pos.floor() as usize).min(m - 1);
        let frac = pos - i as f64;
        self.grid[i] + frac * (self.grid[i + 1] - self.grid[i])
    }

    pub fn h(&self, l: f64) -> f64 {
        if l >= self.r {
            self.g(l)
        } else {
            0.0
        }
    }

    /// `g_n(λ) = g(⌊2ⁿλ⌋/2ⁿ)`, `g_n(1) = g(1)`, cut at `r`.
    pub fn h_dyadic(&self, level: u32, l: f64) -> f64 {
        if l < self.r {
            return 0.0;
        }
        let cells = (1u64 << level) as f64;
        let k = (l * cells).floor().min(cells);
        self.g(k / cells)
    }

    /// Largest jump of `g` over a dyadic cell: bounds `sup |g − g_n|`.
    pub fn dyadic_modulus(&self, level: u32) -> f64 {
        let cells = 1u64 << level;
        (0..cells)
            .map(|k| self.g((k + 1) as f64 / cells as f64) - self.g(k as f64 / cells as f64))
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DyadicLevel {
    pub level: u32,
    /// `τ(h_n(y)) − τ(h_n(x))`.
    pub margin: f64,
    /// `max(|τ(h_n(x)) − τ(h(x))|, |τ(h_n(y)) − τ(h(y))|)`.
    pub error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Prop2Report {
    pub dim: usize,
    pub tau_hx: f64,
    pub tau_hy: f64,
    /// `τ(h(y)) − τ(h(x))`, nonnegative up to the slack.
    pub margin: f64,
    pub dyadic: Vec<DyadicLevel>,
    /// Step approximations increase to `h` with shrinking error.
    pub dyadic_converges: bool,
    pub holds: bool,
}

/// `τ(h(x)) ≤ τ(h(y))` for `x ≤ y`, plus the same for the step
/// approximations `h_n` at [`DYADIC_LEVELS`].
pub fn check_prop2(x: &SpectralOperator, y: &SpectralOperator, spec: &StepFunctionSpec) -> Result<Prop2Report, TraceError> {
    x.require_unit_spectrum()?;
    y.require_unit_spectrum()?;
    if !psd_leq(x, y, SPECTRUM_TOLERANCE)? {
        return Err(TraceError::Precondition("x <= y fails".into()));
    }
    let tau_hx = x.trace_of(|l| spec.h(l))?;
    let tau_hy = y.trace_of(|l| spec.h(l))?;
    let mut dyadic = Vec::new();
    let mut converges = true;
    let mut last_error = f64::INFINITY;
    for level in DYADIC_LEVELS {
        let ax = x.trace_of(|l| spec.h_dyadic(level, l))?;
        let ay = y.trace_of(|l| spec.h_dyadic(level, l))?;
        let error = (ax - tau_hx).abs().max((ay - tau_hy).abs());
        // From below, within the cell modulus, and improving with the level.
        converges &= ax <= tau_hx + SCALAR_SLACK
            && ay <= tau_hy + SCALAR_SLACK
            && error <= spec.dyadic_modulus(level) + SCALAR_SLACK
            && error <= last_error + SCALAR_SLACK;
        last_error = error;
        dyadic.push(DyadicLevel { level, margin: ay - ax, error });
    }
    let margin = tau_hy - tau_hx;
    let holds = margin >= -INEQUALITY_SLACK && dyadic.iter().all(|d| d.margin >= -INEQUALITY_SLACK);
    Ok(Prop2Report { dim: x.dim(), tau_hx, tau_hy, margin, dyadic, dyadic_converges: converges, holds })
}

#[derive(Debug, Clone, Serialize)]
pub struct Lemma2Report {
    pub c: f64,
    pub t: f64,
    pub grid_size: usize,
    /// Smallest `rhs − lhs` for (i), (ii), (iii), and (iii) at `t → ct/2`.
    pub worst: [f64; 4],
    pub violations: [usize; 4],
}

impl Lemma2Report {
    pub fn holds(&self) -> bool {
        self.violations.iter().all(|&v| v == 0)
    }
}

fn lemma2_iii(l: f64, t: f64) -> f64 {
    let rhs = 2.0 * l * t * (-t).exp() + l.powf(t);
    // e^{-2t}(e^{2λt} − 1) = e^{2t(λ−1)} − e^{−2t}, without overflow.
    let lhs = (2.0 * t * (l - 1.0)).exp() - (-2.0 * t).exp();
    rhs - lhs
}

/// The three scalar inequalities on uniform grids of their domains.
pub fn check_lemma2(c: f64, t: f64, grid_size: usize) -> Result<Lemma2Report, TraceError> {
    if !(c > 0.0 && c < 1.0) || t < 1.0 || grid_size < 2 {
        return Err(TraceError::Precondition(format!("need c in (0,1), t >= 1, grid >= 2 (c={c}, t={t})")));
    }
    let r = 1.0 - c;
    let grid = |a: f64, b: f64| (0..grid_size).map(move |i| a + (b - a) * i as f64 / (grid_size - 1) as f64);
    let ect = (-c * t).exp();
    let margins: [Vec<f64>; 4] = [
        grid(0.0, r).map(|l| l * ect - l.powf(2.0 * t)).collect(),
        grid(r, 1.0).map(|l| ((l - 1.0) * t).exp() - ect + l * ect - l.powf(2.0 * t)).collect(),
        grid(0.0, 1.0).map(|l| lemma2_iii(l, t)).collect(),
        grid(0.0, 1.0).map(|l| lemma2_iii(l, c * t / 2.0)).collect(),
    ];
    let worst = margins.each_ref().map(|m| m.iter().copied().fold(f64::INFINITY, f64::min));
    let violations = margins.each_ref().map(|m| m.iter().filter(|&&v| v < -SCALAR_SLACK).count());
    Ok(Lemma2Report { c, t, grid_size, worst, violations })
}

#[derive(Debug, Clone, Serialize)]
pub struct Thm1Report {
    pub dim: usize,
    pub big_c: f64,
    pub c: f64,
    pub t: f64,
    /// `rhs − lhs` of the three displayed inequalities.
    pub margins: [f64; 3],
    /// `τ(x^{2t}) + e^{−t} − τ(y^{2t})`: the clean statement, reported only.
    pub clean_statement_margin: f64,
    pub holds: bool,
}

/// Verifies the proof chain under `I − x ≤ C(I − y)`, `c = 1/C`, `t > 2/c`:
/// (1) `τ(y^{2t}) ≤ 2e^{−ct}τ(y) + τ(h(y))`,
/// (2) `τ(h(y)) ≤ τ(h(I − cI + cx))`,
/// (3) `τ(y^{2t}) ≤ 2τ(y)e^{−ct} + ct e^{−ct/2} τ(x) + τ(x^{ct/2})`,
/// with `h(λ) = 1_{[r,1]}(λ)(e^{(λ−1)t} − e^{−ct})`, `r = 1 − c`.
pub fn check_thm1_chain(x: &SpectralOperator, y: &SpectralOperator, big_c: f64, t: f64) -> Result<Thm1Report, TraceError> {
    x.require_unit_spectrum()?;
    y.require_unit_spectrum()?;
    if big_c < 1.0 {
        return Err(TraceError::Precondition(format!("C = {big_c} < 1")));
    }
    let c = 1.0 / big_c;
    if t <= 2.0 / c {
        return Err(TraceError::Precondition(format!("t = {t} <= 2/c = {}", 2.0 / c)));
    }
    let n = x.dim();
    let id = SpectralOperator::identity(n);
    if !psd_leq(&id.sub(x)?, &id.sub(y)?.scale(big_c), SPECTRUM_TOLERANCE)? {
        return Err(TraceError::Precondition("I - x <= C(I - y) fails".into()));
    }
    let r = 1.0 - c;
    let ect = (-c * t).exp();
    let h = |l: f64| if l >= r { ((l - 1.0) * t).exp() - ect } else { 0.0 };
    let y2t = y.trace_of(|l| l.powf(2.0 * t))?;
    let tau_y = y.trace_of(|l| l)?;
    let tau_x = x.trace_of(|l| l)?;
    let hy = y.trace_of(h)?;
    let z = x.affine(1.0 - c, c);
    let hz = z.trace_of(h)?;
    let x_pow = x.trace_of(|l| l.powf(c * t / 2.0))?;
    let m1 = 2.0 * ect * tau_y + hy - y2t;
    let m2 = hz - hy;
    let m3 = 2.0 * tau_y * ect + c * t * (-c * t / 2.0).exp() * tau_x + x_pow - y2t;
    let clean = x.trace_of(|l| l.powf(2.0 * t))? + (-t).exp() - y2t;
    let margins = [m1, m2, m3];
    Ok(Thm1Report {
        dim: n,
        big_c,
        c,
        t,
        margins,
        clean_statement_margin: clean,
        holds: margins.iter().all(|&m| m >= -INEQUALITY_SLACK),
    })
}

/// Haar-random orthogonal matrix (QR of a Gaussian matrix, signs fixed).
pub fn random_orthogonal<R: Rng>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

fn conjugated(q: &DMatrix<f64>, diag: &[f64]) -> Result<SpectralOperator, TraceError> {
    let m = q * DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(diag)) * q.transpose();
    SpectralOperator::new((&m + m.transpose()) * 0.5)
}

/// An instance `(x, y)` with `I − x ≤ C(I − y)`, both with unit spectra.
#[derive(Debug, Clone)]
pub struct OrderedPair {
    pub x: SpectralOperator,
    pub y: SpectralOperator,
    pub big_c: f64,
}

/// `y = I − Δ₁`, `Δ₂ = Δ₁^{1/2} K Δ₁^{1/2}` divided by its top eigenvalue when
/// that exceeds 1, `x = I − Δ₂`. Requires `0 ≤ Δ₁ ≤ I`, `0 ≤ K ≤ C`.
pub fn ordered_pair_from(delta1: &SpectralOperator, k: &SpectralOperator, big_c: f64) -> Result<OrderedPair, TraceError> {
    let root = delta1.map_spectrum(|l| l.max(0.0).sqrt());
    let d2 = root.matrix() * k.matrix() * root.matrix();
    let mut delta2 = SpectralOperator::new((&d2 + d2.transpose()) * 0.5)?;
    let top = delta2.max_eigenvalue();
    if top > 1.0 {
        delta2 = delta2.scale(1.0 / top);
    }
    let n = delta1.dim();
    let id = SpectralOperator::identity(n);
    let x = id.sub(&delta2)?;
    let y = id.sub(delta1)?;
    x.require_unit_spectrum()?;
    y.require_unit_spectrum()?;
    if !psd_leq(&delta2, &delta1.scale(big_c), SPECTRUM_TOLERANCE)? {
        return Err(TraceError::Precondition("generated pair violates I - x <= C(I - y)".into()));
    }
    Ok(OrderedPair { x, y, big_c })
}

/// Random instance of dimension `dim` for the comparison hypothesis.
pub fn random_ordered_pair<R: Rng>(dim: usize, big_c: f64, rng: &mut R) -> Result<OrderedPair, TraceError> {
    if big_c < 1.0 {
        return Err(TraceError::Precondition(format!("C = {big_c} < 1")));
    }
    // Mix spread-out and edge-heavy spectra.
    let p = [1.0, 0.3, 3.0][rng.random_range(0..3)];
    let d1: Vec<f64> = (0..dim).map(|_| 1.0 - rng.random::<f64>().powf(p)).map(|v| v.max(1e-6)).collect();
    let kd: Vec<f64> = (0..dim).map(|_| big_c * rng.random::<f64>()).collect();
    let delta1 = conjugated(&random_orthogonal(dim, rng), &d1)?;
    let k = conjugated(&random_orthogonal(dim, rng), &kd)?;
    ordered_pair_from(&delta1, &k, big_c)
}

/// Random `x ≤ y` with unit spectra: either the `C = 1` instance read in
/// reverse, or `x = y^{1/2} W y^{1/2}` with `0 ≤ W ≤ I`.
pub fn random_leq_pair<R: Rng>(dim: usize, rng: &mut R) -> Result<(SpectralOperator, SpectralOperator), TraceError> {
    if rng.random_bool(0.5) {
        let pair = random_ordered_pair(dim, 1.0, rng)?;
        // C = 1 gives Δ₂ ≤ Δ₁, i.e. y ≤ x.
        Ok((pair.y, pair.x))
    } else {
        let yd: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
        let wd: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
        let y = conjugated(&random_orthogonal(dim, rng), &yd)?;
        let w = conjugated(&random_orthogonal(dim, rng), &wd)?;
        let root = y.map_spectrum(|l| l.max(0.0).sqrt());
        let m = root.matrix() * w.matrix() * root.matrix();
        let x = SpectralOperator::new((&m + m.transpose()) * 0.5)?;
        Ok((x, y))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Prop2Instance {
    pub index: usize,
    pub seed: u64,
    pub dim: usize,
    pub worst_margin: f64,
    pub violations: usize,
    pub dyadic_failures: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Prop2Sweep {
    pub pairs: usize,
    pub specs_per_pair: usize,
    pub checks: usize,
    pub violations: usize,
    pub dyadic_failures: usize,
    pub worst_margin: f64,
    pub instances: Vec<Prop2Instance>,
}

/// Random ordered pairs of dimensions in `dims`, each tested against
/// `specs_per_pair` random step-function specs.
pub fn prop2_sweep(pairs: usize, specs_per_pair: usize, dims: (usize, usize), seed: u64) -> Result<Prop2Sweep, TraceError> {
    let instances = (0..pairs)
        .into_par_iter()
        .map(|i| {
            let s = instance_seed(seed, i as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let dim = rng.random_range(dims.0..=dims.1);
            let (x, y) = random_leq_pair(dim, &mut rng)?;
            let (mut worst, mut violations, mut dyadic_failures) = (f64::INFINITY, 0, 0);
            for _ in 0..specs_per_pair {
                let rep = check_prop2(&x, &y, &StepFunctionSpec::random(&mut rng))?;
                worst = rep.dyadic.iter().map(|d| d.margin).fold(worst.min(rep.margin), f64::min);
                violations += usize::from(!rep.holds);
                dyadic_failures += usize::from(!rep.dyadic_converges);
            }
            Ok(Prop2Instance { index: i, seed: s, dim, worst_margin: worst, violations, dyadic_failures })
        })
        .collect::<Result<Vec<_>, TraceError>>()?;
    Ok(Prop2Sweep {
        pairs,
        specs_per_pair,
        checks: pairs * specs_per_pair,
        violations: instances.iter().map(|r| r.violations).sum(),
        dyadic_failures: instances.iter().map(|r| r.dyadic_failures).sum(),
        worst_margin: instances.iter().map(|r| r.worst_margin).fold(f64::INFINITY, f64::min),
        instances,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Thm1Instance {
    pub index: usize,
    pub seed: u64,
    pub report: Thm1Report,
}

#[derive(Debug, Clone, Serialize)]
pub struct Thm1Sweep {
    pub instances: usize,
    pub violations: usize,
    /// Worst margin of each displayed inequality.
    pub worst: [f64; 3],
    /// Instances where the clean statement fails (informational).
    pub clean_statement_failures: usize,
    pub records: Vec<Thm1Instance>,
}

/// Random instances with `C ∈ [1.25, 8]` and `t` cycling through
/// `{3/c, 5/c, 10/c}`.
pub fn thm1_sweep(instances: usize, dims: (usize, usize), seed: u64) -> Result<Thm1Sweep, TraceError> {
    let records = (0..instances)
        .into_par_iter()
        .map(|i| {
            let s = instance_seed(seed, i as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let dim = rng.random_range(dims.0..=dims.1);
            let big_c = rng.random_range(1.25..8.0);
            let pair = random_ordered_pair(dim, big_c, &mut rng)?;
            let t = [3.0, 5.0, 10.0][i % 3] * big_c;
            Ok(Thm1Instance { index: i, seed: s, report: check_thm1_chain(&pair.x, &pair.y, big_c, t)? })
        })
        .collect::<Result<Vec<_>, TraceError>>()?;
    let mut worst = [f64::INFINITY; 3];
    for r in &records {
        for k in 0..3 {
            worst[k] = worst[k].min(r.report.margins[k]);
        }
    }
    Ok(Thm1Sweep {
        instances,
        violations: records.iter().filter(|r| !r.report.holds).count(),
        worst,
        clean_statement_failures: records.iter().filter(|r| r.report.clean_statement_margin < 0.0).count(),
        records,
    })
}

/// Scalar inequality checks over the cartesian grid of `cs × ts`.
pub fn lemma2_sweep(cs: &[f64], ts: &[f64], grid_size: usize) -> Result<Vec<Lemma2Report>, TraceError> {
    cs.iter().flat_map(|&c| ts.iter().map(move |&t| check_lemma2(c, t, grid_size))).collect()
}
