use serde::Serialize;

/// Search limits for the domination relation.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct StabilityCaps {
    pub b_max: usize,
    pub a_max: f64,
    /// Thresholds `r` range over `0..=len/r_divisor`.
    pub r_divisor: usize,
}

impl Default for StabilityCaps {
    fn default() -> Self {
        StabilityCaps { b_max: 8, a_max: 1e6, r_divisor: 3 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MarginRow {
    pub n: usize,
    pub m: usize,
    /// `s1(n) / (a · s2(m))` with `m = ⌈n/b⌉`; at most 1 on the verified range.
    pub margin: f64,
}

/// One direction `s1(n) ≤ a · s2(⌈n/b⌉)` for all `n > r`.
#[derive(Debug, Clone, Serialize)]
pub struct Domination {
    pub found: bool,
    pub a: Option<f64>,
    pub b: Option<usize>,
    pub r: Option<usize>,
    /// Smallest `a` seen for any `(b, r)` in the grid, reported even on failure.
    pub best_a: f64,
    pub margins: Vec<MarginRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    pub caps: StabilityCaps,
    pub len1: usize,
    pub len2: usize,
    pub forward: Domination,
    pub backward: Domination,
}

impl StabilityReport {
    pub fn equivalent(&self) -> bool {
        self.forward.found && self.backward.found
    }
}

/// Both directions of the domination search on log-series (`ln a_n`,
/// `n = 1..`). For each `b` in increasing order the smallest threshold `r`
/// whose constant stays under the cap is taken; `a` is the exact maximum of
/// `s1(n)/s2(⌈n/b⌉)` over `n > r`.
pub fn stability_compare(log1: &[f64], log2: &[f64], caps: StabilityCaps) -> StabilityReport {
    StabilityReport {
        caps,
        len1: log1.len(),
        len2: log2.len(),
        forward: dominate(log1, log2, caps),
        backward: dominate(log2, log1, caps),
    }
}

fn dominate(s1: &[f64], s2: &[f64], caps: StabilityCaps) -> Domination {
    let cap = caps.a_max.ln();
    let r_max = s1.len() / caps.r_divisor.max(1);
    let mut best = f64::INFINITY;
    for b in 1..=caps.b_max.max(1) {
        // Usable n: ⌈n/b⌉ within s2.
        let n_hi = s1.len().min(s2.len() * b);
        if n_hi == 0 {
            continue;
        }
        let diff: Vec<f64> = (1..=n_hi).map(|n| s1[n - 1] - s2[n.div_ceil(b) - 1]).collect();
        // suffix[i] = max of diff[i..].
        let mut suffix = vec![f64::NEG_INFINITY; n_hi + 1];
        for i in (0..n_hi).rev() {
            suffix[i] = suffix[i + 1].max(diff[i]);
        }
        for r in 0..=r_max.min(n_hi - 1) {
            let ln_a = suffix[r];
            best = best.min(ln_a);
            if ln_a <= cap {
                let a = ln_a.exp();
                let margins = (r + 1..=n_hi)
                    .map(|n| MarginRow { n, m: n.div_ceil(b), margin: (diff[n - 1] - ln_a).exp() })
                    .collect();
                return Domination { found: true, a: Some(a), b: Some(b), r: Some(r), best_a: best.exp(), margins };
            }
        }
    }
    Domination { found: false, a: None, b: None, r: None, best_a: best.exp(), margins: Vec::new() }
}
