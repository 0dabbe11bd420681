//! Acceptance suite: one PASS/FAIL line per criterion, then a hard assert.

use std::time::{Duration, Instant};

use groupwalk_core::group::{GeneratingSet, Group, GroupElement};
use groupwalk_core::sol::{
    confined_dp, lemma3_check, lower_bound, lower_bound_curve, lower_bound_slope, monte_carlo_return,
    ProjectedKernel,
};
use groupwalk_core::trace::{lemma2_sweep, prop2_sweep, thm1_sweep};
use groupwalk_core::walk::{
    comparison_constant, dirichlet_form, free_radial_series, neighborhood_series, parse_rational, random_test_function,
    return_series, spectral_diagnostics, stability_compare, Measure, ReturnSeries, StabilityCaps,
    DEFAULT_SUPPORT_BUDGET,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Q = BigRational;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn binomial_return(n: usize) -> Q {
    let mut c = BigInt::one();
    for i in 0..n {
        c = c * BigInt::from(2 * n - i) / BigInt::from(i + 1);
    }
    Q::new(c, BigInt::from(4).pow(n as u32))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let s = return_series(&Measure::<Q>::srw(Group::Zd { d: 1 }), 20, DEFAULT_SUPPORT_BUDGET).unwrap();
    let elapsed = start.elapsed();
    let matches = (1..=20).filter(|&n| *s.a(n) == binomial_return(n)).count();
    outcome(
        matches == 20 && elapsed < Duration::from_secs(1),
        format!("{matches}/20 values equal C(2n,n)/4^n, {elapsed:.2?}"),
    )
}

/// Ratios in (0, 1], nondecreasing, and `a_n² ≤ a_{n−1} a_{n+1}`, all exact.
fn lemma1_exact(s: &ReturnSeries<Q>) -> bool {
    let a = &s.values;
    let ratios: Vec<Q> = a.windows(2).map(|w| &w[1] / &w[0]).collect();
    let in_range = ratios.iter().all(|r| *r > Q::zero() && *r <= Q::one());
    let monotone = ratios.windows(2).all(|w| w[0] <= w[1]);
    let convex = a.windows(3).all(|w| &w[1] * &w[1] <= &w[0] * &w[2]);
    in_range && monotone && convex && spectral_diagnostics(s).is_ok()
}

fn criterion_2() -> Outcome {
    let z = return_series(&Measure::<Q>::srw(Group::Zd { d: 1 }), 20, DEFAULT_SUPPORT_BUDGET).unwrap();
    let f2 = free_radial_series::<Q>(2, 60).unwrap();
    let lamp = return_series(&Measure::<Q>::srw(Group::Lamplighter { q: 2 }), 12, DEFAULT_SUPPORT_BUDGET).unwrap();
    let verdicts = [("Z n<=20", lemma1_exact(&z)), ("F2 n<=60", lemma1_exact(&f2)), ("lamplighter n<=12", lemma1_exact(&lamp))];
    let detail = verdicts.iter().map(|(name, ok)| format!("{name}: {}", if *ok { "ok" } else { "broken" })).collect::<Vec<_>>();
    outcome(verdicts.iter().all(|v| v.1), detail.join(", "))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let s = free_radial_series::<f64>(2, 500).unwrap();
    let elapsed = start.elapsed();
    let ratio = s.a(500) / s.a(499);
    outcome(
        (ratio - 0.75).abs() <= 0.005 && elapsed < Duration::from_secs(5),
        format!("a_500/a_499 = {ratio:.6}, |diff| = {:.2e}, {elapsed:.2?}", (ratio - 0.75).abs()),
    )
}

fn dirichlet_agreements(group: Group, seed: u64) -> usize {
    let mu = Measure::<Q>::srw(group);
    let pool: Vec<GroupElement> = GeneratingSet::standard(group).ball(3).into_iter().map(|(g, _)| g).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..100)
        .filter(|_| {
            let f = random_test_function::<Q, _>(&pool, &mut rng);
            let v = dirichlet_form(&f, &mu).unwrap();
            v.quadratic == v.double_sum
        })
        .count()
}

fn criterion_4() -> Outcome {
    let lamp = dirichlet_agreements(Group::Lamplighter { q: 2 }, 41);
    let z2 = dirichlet_agreements(Group::Zd { d: 2 }, 42);
    outcome(lamp == 100 && z2 == 100, format!("lamplighter {lamp}/100, Z^2 {z2}/100 identical rationals"))
}

fn criterion_5() -> Outcome {
    let z = Group::Zd { d: 1 };
    let f1 = Measure::<Q>::srw(z);
    let f2 = Measure::<Q>::from_spec(z, "uniform-ball:2").unwrap();
    let u = GeneratingSet::standard(z).with_identity();
    let pool: Vec<GroupElement> = (-6..=6).map(|i| GroupElement::Zd(vec![i])).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    let tests: Vec<_> = (0..100).map(|_| random_test_function::<Q, _>(&pool, &mut rng)).collect();
    let (c, rep) = comparison_constant(&f1, &f2, &u, 8, &tests).unwrap();
    let expected = Q::new(BigInt::from(20), BigInt::from(3));

    let lamp = Group::Lamplighter { q: 2 };
    let g1 = Measure::<Q>::srw(lamp);
    let g2 = Measure::<Q>::from_spec(lamp, "uniform-ball:2").unwrap();
    let lu = GeneratingSet::standard(lamp).with_identity();
    let lpool: Vec<GroupElement> = GeneratingSet::standard(lamp).ball(3).into_iter().map(|(g, _)| g).collect();
    let ltests: Vec<_> = (0..100).map(|_| random_test_function::<Q, _>(&lpool, &mut rng)).collect();
    let (lc, lrep) = comparison_constant(&g1, &g2, &lu, 8, &ltests).unwrap();
    outcome(
        c == expected && rep.violations == 0 && rep.tested == 100 && lrep.violations == 0 && lrep.tested == 100,
        format!(
            "Z: C = {c}, {}/100 violations; lamplighter: C = {lc}, {}/100 violations",
            rep.violations, lrep.violations
        ),
    )
}

fn criterion_6() -> Outcome {
    let caps = StabilityCaps { b_max: 4, a_max: 1e3, ..StabilityCaps::default() };
    let z = Group::Zd { d: 1 };
    let srw = return_series(&Measure::<f64>::srw(z), 2000, DEFAULT_SUPPORT_BUDGET).unwrap().log_values();
    let half = parse_rational("1/2").unwrap();
    let lazy = return_series(&Measure::<f64>::lazy(z, &half).unwrap(), 2000, DEFAULT_SUPPORT_BUDGET).unwrap().log_values();
    let zrep = stability_compare(&srw, &lazy, caps);

    let lamp = Group::Lamplighter { q: 2 };
    let (t, t_inv, s) = (lamp.lamp_shift(1), lamp.lamp_shift(-1), lamp.lamp_toggle(1));
    let shifted_switch = lamp.op(&lamp.op(&t, &s).unwrap(), &t_inv).unwrap();
    let u1 = Measure::<Q>::uniform(lamp, &[t.clone(), t_inv.clone(), s.clone()]).unwrap();
    let u2 = Measure::<Q>::uniform(lamp, &[t, t_inv, s, shifted_switch]).unwrap();
    let l1 = return_series(&u1, 20, DEFAULT_SUPPORT_BUDGET).unwrap().log_values();
    let l2 = return_series(&u2, 20, DEFAULT_SUPPORT_BUDGET).unwrap().log_values();
    let lrep = stability_compare(&l1, &l2, caps);
    let show = |d: &groupwalk_core::walk::Domination| match (d.a, d.b) {
        (Some(a), Some(b)) => format!("(a={a:.3}, b={b})"),
        _ => format!("none (best a {:.3e})", d.best_a),
    };
    outcome(
        zrep.equivalent() && lrep.equivalent(),
        format!(
            "Z srw~lazy n<=2000: fwd {} bwd {}; lamplighter U1~U2 n<=20: fwd {} bwd {}",
            show(&zrep.forward),
            show(&zrep.backward),
            show(&lrep.forward),
            show(&lrep.backward)
        ),
    )
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let cs = [0.05, 0.25, 0.5, 0.75, 0.95];
    let ts = [1.0, 2.0, 5.0, 12.0, 40.0];
    let lemma2 = lemma2_sweep(&cs, &ts, 10_000).unwrap();
    let l_viol: usize = lemma2.iter().map(|r| r.violations.iter().sum::<usize>()).sum();
    let prop2 = prop2_sweep(1000, 10, (2, 30), 71).unwrap();
    let thm1 = thm1_sweep(500, (2, 30), 72).unwrap();
    let elapsed = start.elapsed();
    outcome(
        l_viol == 0
            && lemma2.len() == 25
            && prop2.checks == 10_000
            && prop2.violations == 0
            && thm1.instances == 500
            && thm1.violations == 0
            && elapsed < Duration::from_secs(60),
        format!(
            "Lemma 2: {l_viol} violations on 25 grids; Prop 2: {}/{} violations; Thm 1: {}/500 violations; {elapsed:.1?}",
            prop2.violations, prop2.checks, thm1.violations
        ),
    )
}

fn criterion_8() -> Outcome {
    let rep = lemma3_check(2, 10, 50, 100_000, 81).unwrap();
    outcome(
        rep.violations == 0 && rep.trials == 100_000,
        format!(
            "{} violations over {} confined prefixes ({} fully confined words, {} discarded)",
            rep.violations, rep.confined_prefixes, rep.confined_words, rep.discarded
        ),
    )
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let ts: Vec<u64> = (10..=20).map(|e| 1u64 << e).collect();
    let points = lower_bound_curve(&ProjectedKernel::default(), 2, &ts).unwrap();
    let fit = lower_bound_slope(&points).unwrap();
    let elapsed = start.elapsed();
    let interior = points.iter().all(|p| p.interior);
    outcome(
        (0.30..=0.37).contains(&fit.slope) && interior && elapsed < Duration::from_secs(600),
        format!(
            "slope {:.4} (n* {}..{}), {elapsed:.1?}",
            fit.slope,
            points[0].n_star,
            points.last().unwrap().n_star
        ),
    )
}

fn criterion_10() -> Outcome {
    let kernel = ProjectedKernel::default();
    let t = 64;
    let n_star = lower_bound(&kernel, 2, t, groupwalk_core::sol::default_n_range(t)).unwrap().n_star;
    let dp = confined_dp(&kernel, n_star, 2 * t);
    let mc = monte_carlo_return(2, t, n_star, 1_000_000, 101).unwrap();
    let small = monte_carlo_return(2, 1, 1, 1_000_000, 102).unwrap();
    let coherent = mc.estimate >= dp - 3.0 * mc.std_error;
    let exact = (small.estimate - 0.68).abs() <= 3.0 * small.std_error;
    let discarded = (mc.discarded + small.discarded) as f64 / 2e6;
    outcome(
        coherent && exact && discarded < 1e-4,
        format!(
            "t=64, n*={n_star}: MC {:.5} ± {:.5} vs DP {dp:.5}; t=1, n=1: MC {:.5} ± {:.5} vs 17/25; discarded {discarded:.1e}",
            mc.estimate, mc.std_error, small.estimate, small.std_error
        ),
    )
}

fn criterion_11() -> Outcome {
    let lamp = Group::Lamplighter { q: 2 };
    let ball: Vec<GroupElement> = GeneratingSet::standard(lamp).ball(1).into_iter().map(|(g, _)| g).collect();
    let size = Q::from_integer(BigInt::from(ball.len()));
    // The SRW Cayley graph is bipartite, so its ratio is exactly 1; the lazy
    // walk also charges the neighbors.
    let third = parse_rational("1/3").unwrap();
    let measures = [("srw", Measure::<Q>::srw(lamp)), ("lazy 1/3", Measure::<Q>::lazy(lamp, &third).unwrap())];
    let mut pass = true;
    let mut detail = Vec::new();
    for (name, mu) in &measures {
        let rows = neighborhood_series(mu, 12, &ball, DEFAULT_SUPPORT_BUDGET).unwrap();
        let within = rows.iter().filter(|(a, p)| *p >= *a && *p <= a * &size).count();
        let worst = rows
            .iter()
            .map(|(a, p)| num_traits::ToPrimitive::to_f64(&(p / a)).unwrap())
            .fold(0.0f64, f64::max);
        pass &= within == rows.len() && rows.len() == 12;
        detail.push(format!("{name}: {within}/{} ratios in [1, {}], max {worst:.4}", rows.len(), ball.len()));
    }
    outcome(pass, detail.join("; "))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("exact Z oracle", criterion_1),
        ("ratio monotonicity and log-convexity", criterion_2),
        ("Kesten limit on F2", criterion_3),
        ("Dirichlet form identity", criterion_4),
        ("Dirichlet comparison", criterion_5),
        ("stability diagnostic", criterion_6),
        ("trace inequality suite", criterion_7),
        ("confined prefixes stay in the box", criterion_8),
        ("lower-bound slope", criterion_9),
        ("DP vs Monte Carlo", criterion_10),
        ("neighborhood vs identity returns", criterion_11),
    ];
    println!();
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {:>2} ({name}): {} [{:.1?}]", i + 1, o.detail, start.elapsed());
        if !o.pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
