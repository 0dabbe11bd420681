use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::field::{LaurentField, SampleKind, DEFAULT_PRECISION};
use crate::seed;

use super::element::{box_volume, BoxSpec, SolElement};
use super::SolError;

/// Trajectories per deterministic seed stream.
pub const CHUNK: u64 = 4096;
/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

/// One of the five Haar-unit pieces of `V`: the slice `r` of `V₁`
/// (`a ∈ t^r R^×`, `x, y ∈ R`), or the inverse of the slice `r = ±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Slice {
    Direct(i8),
    Inverted(i8),
}

pub const SLICES: [Slice; 5] =
    [Slice::Direct(-1), Slice::Direct(0), Slice::Direct(1), Slice::Inverted(-1), Slice::Inverted(1)];

impl Slice {
    /// The projected increment of an element of the slice.
    pub fn projected(self) -> i64 {
        match self {
            Slice::Direct(r) => r as i64,
            Slice::Inverted(r) => -(r as i64),
        }
    }
}

/// A uniform draw from `V` together with the slice it came from.
pub fn sample_slice_step<R: Rng + ?Sized>(field: &LaurentField, rng: &mut R) -> Result<(SolElement, Slice), SolError> {
    let slice = SLICES[rng.random_range(0..SLICES.len())];
    let u = field.sample(SampleKind::Unit, rng);
    let x = field.sample(SampleKind::Ball, rng);
    let y = field.sample(SampleKind::Ball, rng);
    let r = match slice {
        Slice::Direct(r) | Slice::Inverted(r) => r as i64,
    };
    let g = SolElement::new(u.shifted(r), x, y)?;
    let g = if matches!(slice, Slice::Inverted(_)) { g.inverse()? } else { g };
    Ok((g, slice))
}

/// A uniform draw from `V`.
pub fn sample_step<R: Rng + ?Sized>(field: &LaurentField, rng: &mut R) -> Result<SolElement, SolError> {
    Ok(sample_slice_step(field, rng)?.0)
}

/// Running product `Z_t` and projected walk `S_t`.
#[derive(Debug, Clone)]
pub struct WalkState {
    field: LaurentField,
    current: SolElement,
    t: u64,
    s: i64,
}

impl WalkState {
    pub fn new(field: LaurentField) -> Self {
        WalkState { field, current: SolElement::identity(&field), t: 0, s: 0 }
    }

    pub fn current(&self) -> &SolElement {
        &self.current
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn s(&self) -> i64 {
        self.s
    }

    /// Multiplies in one step on the right; returns the projected increment.
    pub fn advance<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<i64, SolError> {
        let (g, slice) = sample_slice_step(&self.field, rng)?;
        self.current = self.current.multiply(&g)?;
        self.t += 1;
        self.s += slice.projected();
        Ok(slice.projected())
    }

    /// Checks `S_t = w(d(Z_t))`.
    pub fn check(&self) -> Result<(), SolError> {
        if self.current.project()? == self.s {
            Ok(())
        } else {
            Err(SolError::Invariant { what: "running projection differs from the valuation of a", t: self.t })
        }
    }
}

/// Precision used for walks of `steps` steps.
pub fn walk_precision(steps: u64) -> u32 {
    DEFAULT_PRECISION.max((steps + 8).min(u32::MAX as u64) as u32)
}

#[derive(Debug, Clone, Serialize)]
pub struct MonteCarloReport {
    pub seed: u64,
    pub q: u32,
    pub t: u64,
    pub n: u32,
    pub samples: u64,
    pub precision: u32,
    pub hits: u64,
    /// Trajectories dropped because a coordinate lost all precision.
    pub discarded: u64,
    pub estimate: f64,
    pub std_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// `μ(Ω_n)` as a decimal integer.
    pub volume: String,
    /// `estimate / μ(Ω_n)`, an estimate of the density of `Z_{2t}` on `Ω_n`.
    pub density_estimate: f64,
}

#[derive(Default)]
struct Tally {
    hits: u64,
    discarded: u64,
}

fn one_trajectory(field: &LaurentField, steps: u64, b: BoxSpec, rng: &mut ChaCha8Rng) -> Result<bool, SolError> {
    let mut state = WalkState::new(*field);
    for _ in 0..steps {
        state.advance(rng)?;
    }
    state.check()?;
    state.current().in_box(b)
}

fn chunked<T: Send, F>(samples: u64, seed: u64, f: F) -> Vec<T>
where
    F: Fn(u64, &mut ChaCha8Rng) -> T + Sync,
{
    let chunks = samples.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed::split(seed, c));
            let count = CHUNK.min(samples - c * CHUNK);
            f(count, &mut rng)
        })
        .collect()
}

/// Estimates `P(Z_{2t} ∈ Ω_n)` from `samples` independent walks.
///
/// Each block of [`CHUNK`] trajectories draws from its own stream split from
/// `seed`, so the result does not depend on the thread count.
pub fn monte_carlo_return(q: u32, t: u64, n: u32, samples: u64, seed: u64) -> Result<MonteCarloReport, SolError> {
    if samples == 0 {
        return Err(SolError::InvalidArgument("samples must be positive".into()));
    }
    let steps = 2 * t;
    let precision = walk_precision(steps);
    let field = LaurentField::new(q, precision)?;
    let b = BoxSpec { n };
    let tallies = chunked(samples, seed, |count, rng| -> Result<Tally, SolError> {
        let mut tally = Tally::default();
        for _ in 0..count {
            match one_trajectory(&field, steps, b, rng) {
                Ok(hit) => tally.hits += hit as u64,
                Err(SolError::Field(_)) => tally.discarded += 1,
                Err(e) => return Err(e),
            }
        }
        Ok(tally)
    });
    let mut total = Tally::default();
    for t in tallies {
        let t = t?;
        total.hits += t.hits;
        total.discarded += t.discarded;
    }
    let kept = samples - total.discarded;
    let (estimate, std_error, ci_low, ci_high) = binomial_interval(total.hits, kept);
    let volume = box_volume(n, q);
    Ok(MonteCarloReport {
        seed,
        q,
        t,
        n,
        samples,
        precision,
        hits: total.hits,
        discarded: total.discarded,
        estimate,
        std_error,
        ci_low,
        ci_high,
        density_estimate: estimate / biguint_to_f64(&volume),
        volume: volume.to_string(),
    })
}

pub(crate) fn biguint_to_f64(v: &BigUint) -> f64 {
    num_traits::ToPrimitive::to_f64(v).unwrap_or(f64::INFINITY)
}

/// Point estimate, standard error and the 95% Wilson interval.
pub fn binomial_interval(hits: u64, trials: u64) -> (f64, f64, f64, f64) {
    if trials == 0 {
        return (f64::NAN, f64::NAN, 0.0, 1.0);
    }
    let n = trials as f64;
    let p = hits as f64 / n;
    let se = (p * (1.0 - p) / n).sqrt();
    let z2 = Z95 * Z95;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n);
    (p, se, (centre - half).max(0.0), (centre + half).min(1.0))
}

#[derive(Debug, Clone, Serialize)]
pub struct Lemma3Report {
    pub seed: u64,
    pub q: u32,
    pub n: u32,
    pub length: u64,
    pub trials: u64,
    /// Prefixes whose projected partial sums all stayed in `[−n, n]`.
    pub confined_prefixes: u64,
    /// Words confined over their whole length.
    pub confined_words: u64,
    pub violations: u64,
    pub discarded: u64,
    pub first_violation: Option<String>,
}

impl Lemma3Report {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Default)]
struct Lemma3Tally {
    confined_prefixes: u64,
    confined_words: u64,
    violations: u64,
    discarded: u64,
    first_violation: Option<String>,
}

fn lemma3_word(field: &LaurentField, n: u32, length: u64, rng: &mut ChaCha8Rng, tally: &mut Lemma3Tally) -> Result<(), SolError> {
    let b = BoxSpec { n };
    let mut state = WalkState::new(*field);
    for _ in 0..length {
        state.advance(rng)?;
        if state.s().unsigned_abs() > n as u64 {
            // Beyond this point the implication says nothing.
            return Ok(());
        }
        tally.confined_prefixes += 1;
        state.check()?;
        if !state.current().in_box(b)? {
            tally.violations += 1;
            if tally.first_violation.is_none() {
                tally.first_violation = Some(format!("t = {}: {}", state.t(), state.current()));
            }
        }
    }
    tally.confined_words += 1;
    Ok(())
}

/// Samples `trials` words of `length` steps from `V` and checks that every
/// prefix whose projected partial sums stay in `[−n, n]` lies in `Ω_n`.
pub fn lemma3_check(q: u32, n: u32, length: u64, trials: u64, seed: u64) -> Result<Lemma3Report, SolError> {
    let field = LaurentField::new(q, walk_precision(length))?;
    let tallies = chunked(trials, seed, |count, rng| -> Result<Lemma3Tally, SolError> {
        let mut tally = Lemma3Tally::default();
        for _ in 0..count {
            match lemma3_word(&field, n, length, rng, &mut tally) {
                Ok(()) => {}
                Err(SolError::Field(_)) => tally.discarded += 1,
                Err(e) => return Err(e),
            }
        }
        Ok(tally)
    });
    let mut rep = Lemma3Report {
        seed,
        q,
        n,
        length,
        trials,
        confined_prefixes: 0,
        confined_words: 0,
        violations: 0,
        discarded: 0,
        first_violation: None,
    };
    for t in tallies {
        let t = t?;
        rep.confined_prefixes += t.confined_prefixes;
        rep.confined_words += t.confined_words;
        rep.violations += t.violations;
        rep.discarded += t.discarded;
        if rep.first_violation.is_none() {
            rep.first_violation = t.first_violation;
        }
    }
    Ok(rep)
}
