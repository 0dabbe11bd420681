use std::collections::BTreeSet;

use num_rational::BigRational;
use rand::Rng;
use serde::Serialize;

use super::measure::{inner, right_convolve, GroupFunction, Measure};
use super::weight::Weight;
use super::WalkError;
use crate::group::{GeneratingSet, GroupElement};

/// Both evaluations of the Dirichlet form `ε_μ(f, f)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletValues<W> {
    /// `(f|f) − (R_μ f|f)`.
    pub quadratic: W,
    /// `½ Σ_x Σ_y (f(x) − f(xy))² μ(y)`.
    pub double_sum: W,
    pub difference: W,
}

pub fn dirichlet_form<W: Weight>(f: &GroupFunction<W>, mu: &Measure<W>) -> Result<DirichletValues<W>, WalkError> {
    mu.require_symmetric()?;
    let group = mu.group();
    let rf = right_convolve(f, mu);
    let quadratic = inner(f, f) - inner(&rf, f);

    // Points where f(x) or f(xy) can be nonzero.
    let mut xs: BTreeSet<GroupElement> = f.keys().cloned().collect();
    for z in f.keys() {
        for y in mu.atoms().keys() {
            xs.insert(group.op(z, &group.inverse(y)?)?);
        }
    }
    let zero = W::zero();
    let mut sum = W::zero();
    for x in &xs {
        let fx = f.get(x).unwrap_or(&zero);
        for (y, w) in mu.atoms() {
            let fxy = f.get(&group.op(x, y)?).unwrap_or(&zero);
            let d = fx.clone() - fxy.clone();
            sum = sum + d.clone() * d * w.clone();
        }
    }
    let double_sum = sum * W::half();
    let difference = quadratic.clone() - double_sum.clone();
    Ok(DirichletValues { quadratic, double_sum, difference })
}

/// Random integer-valued test function on a subset of `pool`.
pub fn random_test_function<W: Weight, R: Rng>(pool: &[GroupElement], rng: &mut R) -> GroupFunction<W> {
    let mut f = GroupFunction::new();
    let size = rng.random_range(1..=pool.len().clamp(1, 12));
    for _ in 0..size {
        let g = pool[rng.random_range(0..pool.len())].clone();
        let v: i64 = rng.random_range(-5..=5);
        if v != 0 {
            f.insert(g, W::from_ratio(&BigRational::from_integer(v.into())));
        }
    }
    if f.is_empty() {
        f.insert(pool[0].clone(), W::one());
    }
    f
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    /// `min_{U·U} F2`.
    pub r: String,
    /// `Σ_s |s|_U² F1(s)`.
    pub second_moment: String,
    pub u_size: usize,
    /// `C = 4 M₂ / (r |U|)`.
    pub constant: String,
    pub constant_f64: f64,
    pub tested: usize,
    pub violations: usize,
    /// Largest `ε₁(f) / (C ε₂(f))` seen over the tests.
    pub worst_ratio: f64,
}

/// Comparison constant `C` with `ε_{F1} ≤ C ε_{F2}`, verified on `tests`.
pub fn comparison_constant<W: Weight>(
    f1: &Measure<W>,
    f2: &Measure<W>,
    u: &GeneratingSet,
    radius_cap: usize,
    tests: &[GroupFunction<W>],
) -> Result<(W, ComparisonReport), WalkError> {
    f1.require_symmetric()?;
    f2.require_symmetric()?;
    if f1.group() != f2.group() {
        return Err(WalkError::GroupMismatch(f1.group(), f2.group()));
    }
    if f1.group() != u.group() {
        return Err(WalkError::GroupMismatch(f1.group(), u.group()));
    }
    if !u.is_symmetric() {
        return Err(WalkError::Group(crate::group::GroupError::NotSymmetric));
    }
    let group = u.group();
    let mut r: Option<W> = None;
    for a in u.elements() {
        for b in u.elements() {
            let w = f2.get(&group.op(a, b)?);
            if w.is_zero() {
                return Err(WalkError::Hypothesis(format!(
                    "F2 vanishes at {} in U·U",
                    group.op(a, b)?
                )));
            }
            if r.as_ref().is_none_or(|cur| w < *cur) {
                r = Some(w);
            }
        }
    }
    let r = r.ok_or_else(|| WalkError::Hypothesis("empty U".into()))?;
    let mut m2 = W::zero();
    for (s, w) in f1.atoms() {
        let len = u.word_length(s, radius_cap)?;
        m2 = m2 + W::from_ratio(&BigRational::from_integer((len * len).into())) * w.clone();
    }
    let four = W::from_ratio(&BigRational::from_integer(4.into()));
    let size = W::from_ratio(&BigRational::from_integer(u.len().into()));
    let c = four * m2.clone() / (r.clone() * size);

    let (mut violations, mut worst) = (0, 0.0f64);
    for f in tests {
        let e1 = dirichlet_form(f, f1)?.quadratic;
        let e2 = dirichlet_form(f, f2)?.quadratic;
        let bound = c.clone() * e2;
        if !e1.le_tol(&bound) {
            violations += 1;
        }
        let bf = bound.to_f64();
        if bf > 0.0 {
            worst = worst.max(e1.to_f64() / bf);
        }
    }
    let report = ComparisonReport {
        r: r.render(),
        second_moment: m2.render(),
        u_size: u.len(),
        constant: c.render(),
        constant_f64: c.to_f64(),
        tested: tests.len(),
        violations,
        worst_ratio: worst,
    };
    Ok((c, report))
}
