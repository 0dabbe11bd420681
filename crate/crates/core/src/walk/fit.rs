use serde::Serialize;

use super::WalkError;

/// A later class must beat the incumbent by this much: exact exponential
/// data fits the stretched law with exponent 1 equally well.
const TIE: f64 = 1e-12;

/// Least-squares line `y = intercept + slope·x`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual.
    pub rms: f64,
    /// `1 − R²`: share of the variance of `y` left unexplained.
    pub unexplained: f64,
}

pub fn least_squares(xs: &[f64], ys: &[f64]) -> LineFit {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let unexplained = if syy > 0.0 { sse / syy } else { 0.0 };
    LineFit { slope, intercept, rms: (sse / n).sqrt(), unexplained }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecayClass {
    Polynomial,
    StretchedExponential,
    Exponential,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecayFit {
    pub window: (usize, usize),
    /// `log a_n` against `log n`; `exponent = −slope`.
    pub polynomial: LineFit,
    pub polynomial_exponent: f64,
    /// `log(−log a_n)` against `log n`; `exponent = slope`.
    pub stretched: Option<LineFit>,
    pub stretched_exponent: Option<f64>,
    /// `log a_n` against `n`; `rate = −slope`.
    pub exponential: LineFit,
    pub exponential_rate: f64,
    pub best: DecayClass,
}

/// Fits the three decay laws to `a_n` for `n` in `lo..=hi` (1-based), given
/// `log a_n` for `n = 1..`. The class with the smallest unexplained variance
/// wins.
pub fn decay_fit(log_a: &[f64], lo: usize, hi: usize) -> Result<DecayFit, WalkError> {
    if lo == 0 || hi > log_a.len() || hi < lo {
        return Err(WalkError::BadWindow { lo, hi, len: log_a.len() });
    }
    if hi - lo + 1 < 5 {
        return Err(WalkError::SeriesTooShort { have: hi - lo + 1, need: 5 });
    }
    let ns: Vec<f64> = (lo..=hi).map(|n| n as f64).collect();
    let ln_n: Vec<f64> = ns.iter().map(|n| n.ln()).collect();
    let ys = &log_a[lo - 1..hi];
    if ys.iter().any(|y| !y.is_finite()) {
        return Err(WalkError::Invariant { what: "a_n > 0", n: lo });
    }
    let polynomial = least_squares(&ln_n, ys);
    let exponential = least_squares(&ns, ys);
    let stretched = ys
        .iter()
        .all(|&y| y < 0.0)
        .then(|| least_squares(&ln_n, &ys.iter().map(|y| (-y).ln()).collect::<Vec<_>>()));
    let mut best = (DecayClass::Polynomial, polynomial.unexplained);
    if exponential.unexplained < best.1 - TIE {
        best = (DecayClass::Exponential, exponential.unexplained);
    }
    if let Some(s) = stretched {
        if s.unexplained < best.1 - TIE {
            best = (DecayClass::StretchedExponential, s.unexplained);
        }
    }
    Ok(DecayFit {
        window: (lo, hi),
        polynomial_exponent: -polynomial.slope,
        polynomial,
        stretched_exponent: stretched.map(|s| s.slope),
        stretched,
        exponential_rate: -exponential.slope,
        exponential,
        best: best.0,
    })
}
