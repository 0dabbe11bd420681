use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;

fn close(a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) -> bool {
    (a - b).amax() <= tol
}

#[test]
fn spectral_apply_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let pair = random_ordered_pair(6, 2.0, &mut rng).unwrap();
    let m = &pair.y;
    assert!(close(m.spectral_apply(|l| l).unwrap().matrix(), m.matrix(), 1e-12));
    let sq = m.spectral_apply(|l| l * l).unwrap();
    assert!(close(sq.matrix(), &(m.matrix() * m.matrix()), 1e-12));
    let mean = m.eigenvalues().iter().map(|l| l * l).sum::<f64>() / 6.0;
    assert!((sq.normalized_trace() - mean).abs() < 1e-12);

    let d = SpectralOperator::diagonal(&[0.2, 0.8]);
    let p = d.spectral_apply(|l| if l >= 0.5 { 1.0 } else { 0.0 }).unwrap();
    assert!(close(p.matrix(), &DMatrix::from_diagonal(&nalgebra::dvector![0.0, 1.0]), 0.0));

    let big = SpectralOperator::diagonal(&[0.5, 1.5]);
    assert!(matches!(big.spectral_apply(|l| l), Err(TraceError::SpectrumOutside { .. })));
    let skew = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
    assert!(matches!(SpectralOperator::new(skew), Err(TraceError::NotSymmetric(_))));
}

#[test]
fn psd_order_examples() {
    let a = SpectralOperator::diagonal(&[0.1, 0.2]);
    let b = SpectralOperator::diagonal(&[0.2, 0.3]);
    assert!(psd_leq(&a, &a, 0.0).unwrap());
    assert!(psd_leq(&a, &b, 0.0).unwrap());
    assert!(!psd_leq(&b, &a, 1e-10).unwrap());
    let c = SpectralOperator::diagonal(&[0.3, 0.1]);
    assert!(!psd_leq(&a, &c, 1e-10).unwrap());
    assert!(!psd_leq(&c, &a, 1e-10).unwrap());
    assert!(matches!(psd_leq(&a, &SpectralOperator::identity(3), 0.0), Err(TraceError::DimensionMismatch(2, 3))));
}

#[test]
fn prop2_examples() {
    let x = SpectralOperator::diagonal(&[0.3, 0.6]);
    let y = SpectralOperator::diagonal(&[0.4, 0.7]);
    let id = StepFunctionSpec::identity(0.5).unwrap();
    let rep = check_prop2(&x, &y, &id).unwrap();
    assert!((rep.tau_hx - 0.3).abs() < 1e-15);
    // (0 + 0.7)/2; the cut removes the eigenvalue 0.4.
    assert!((rep.tau_hy - 0.35).abs() < 1e-15);
    assert!(rep.holds && rep.dyadic_converges);

    let same = check_prop2(&x, &x, &id).unwrap();
    assert_eq!(same.margin, 0.0);
    assert!(matches!(check_prop2(&y, &x, &id), Err(TraceError::Precondition(_))));
    assert!(StepFunctionSpec::new(0.5, vec![1.0, 0.0]).is_err());
    assert!(StepFunctionSpec::new(0.5, vec![-2.0, -1.0]).is_err());
}

#[test]
fn dyadic_steps_increase() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let spec = StepFunctionSpec::random(&mut rng);
    for i in 0..=200 {
        let l = i as f64 / 200.0;
        let (a, b, c) = (spec.h_dyadic(4, l), spec.h_dyadic(7, l), spec.h_dyadic(10, l));
        assert!(a <= b + 1e-15 && b <= c + 1e-15 && c <= spec.h(l) + 1e-15);
    }
}

#[test]
fn lemma2_examples() {
    let rep = check_lemma2(0.5, 1.0, 10_001).unwrap();
    assert!(rep.holds(), "{rep:?}");
    // (i) at λ = r = 0.5: 0.25 ≤ 0.5 e^{-0.5}.
    assert!((0.5f64 * (-0.5f64).exp() - 0.303_265_3).abs() < 1e-6);
    for (c, t) in [(0.1, 1.0), (0.9, 50.0), (0.3, 7.5)] {
        assert!(check_lemma2(c, t, 2001).unwrap().holds());
    }
    assert!(check_lemma2(1.5, 2.0, 10).is_err());
}

#[test]
fn thm1_scalar_instance() {
    let x = SpectralOperator::diagonal(&[0.9]);
    let y = SpectralOperator::diagonal(&[0.95]);
    let rep = check_thm1_chain(&x, &y, 2.0, 10.0).unwrap();
    assert!(rep.holds, "{rep:?}");
    // Hand evaluation of (1): 0.95^20 ≈ 0.3585.
    let c: f64 = 0.5;
    let lhs = 0.95f64.powi(20);
    let rhs = 2.0 * (-c * 10.0).exp() * 0.95 + ((0.95 - 1.0) * 10.0f64).exp() - (-c * 10.0).exp();
    assert!((rep.margins[0] - (rhs - lhs)).abs() < 1e-12);
    assert!(matches!(check_thm1_chain(&x, &y, 2.0, 3.0), Err(TraceError::Precondition(_))));
}

#[test]
fn thm1_equal_operators() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (x, _) = random_leq_pair(5, &mut rng).unwrap();
    let rep = check_thm1_chain(&x, &x, 1.0, 3.0).unwrap();
    assert!(rep.holds);
}

#[test]
fn closed_form_pair() {
    let d1 = [0.2, 0.5, 0.9];
    let delta1 = SpectralOperator::diagonal(&d1);
    for big_c in [1.0, 1.5, 3.0] {
        let k = SpectralOperator::diagonal(&[big_c; 3]);
        let pair = ordered_pair_from(&delta1, &k, big_c).unwrap();
        let scale = big_c / f64::max(1.0, big_c * 0.9);
        for (i, &d) in d1.iter().enumerate() {
            assert!((pair.x.matrix()[(i, i)] - (1.0 - scale * d)).abs() < 1e-12);
            assert!((pair.y.matrix()[(i, i)] - (1.0 - d)).abs() < 1e-12);
        }
    }
}

#[test]
fn random_pairs_satisfy_hypotheses() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for dim in [2, 7, 30] {
        for big_c in [1.0, 2.0, 10.0] {
            let p = random_ordered_pair(dim, big_c, &mut rng).unwrap();
            let id = SpectralOperator::identity(dim);
            assert!(p.x.has_unit_spectrum() && p.y.has_unit_spectrum());
            assert!(psd_leq(&id.sub(&p.x).unwrap(), &id.sub(&p.y).unwrap().scale(big_c), 1e-10).unwrap());
        }
        let (x, y) = random_leq_pair(dim, &mut rng).unwrap();
        assert!(psd_leq(&x, &y, 1e-10).unwrap());
    }
}

#[test]
fn small_sweeps() {
    let p = prop2_sweep(30, 3, (2, 12), 1).unwrap();
    assert_eq!((p.violations, p.dyadic_failures), (0, 0));
    let t = thm1_sweep(30, (2, 12), 1).unwrap();
    assert_eq!(t.violations, 0);
    assert_eq!(p.instances[4].seed, instance_seed(1, 4));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn polynomial_calculus_is_multiplicative(seed in any::<u64>(), dim in 2usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, _) = random_leq_pair(dim, &mut rng).unwrap();
        let h1 = |l: f64| 0.5 + l * l;
        let h2 = |l: f64| l * (1.0 - l);
        let prod = x.spectral_apply(|l| h1(l) * h2(l)).unwrap();
        let separate = x.spectral_apply(h1).unwrap().matrix() * x.spectral_apply(h2).unwrap().matrix();
        prop_assert!(close(prod.matrix(), &separate, 1e-11));
    }

    #[test]
    fn trace_is_monotone_and_unitarily_invariant(seed in any::<u64>(), dim in 2usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = random_leq_pair(dim, &mut rng).unwrap();
        prop_assert!(x.normalized_trace() <= y.normalized_trace() + 1e-12);
        let u = random_orthogonal(dim, &mut rng);
        let rotated = SpectralOperator::new(&u * x.matrix() * u.transpose()).unwrap();
        prop_assert!((rotated.normalized_trace() - x.normalized_trace()).abs() < 1e-12);
    }
}
