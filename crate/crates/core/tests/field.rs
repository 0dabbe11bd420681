use groupwalk_core::field::{LaurentField, LaurentNumber, SampleKind};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const PRECISION: u32 = 40;

fn arb_nonzero(q: u32) -> impl Strategy<Value = LaurentNumber> {
    (-6i64..6, 1..q, prop::collection::vec(0..q, 0..PRECISION as usize)).prop_map(move |(v, lead, rest)| {
        let field = LaurentField::new(q, PRECISION).unwrap();
        let mut digits = vec![lead];
        digits.extend(rest);
        field.from_digits(v, &digits)
    })
}

fn arb_triple() -> impl Strategy<Value = (LaurentNumber, LaurentNumber, LaurentNumber)> {
    prop::sample::select(vec![2u32, 3, 5, 7]).prop_flat_map(|q| (arb_nonzero(q), arb_nonzero(q), arb_nonzero(q)))
}

fn v(x: &LaurentNumber) -> i64 {
    x.valuation().unwrap().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ultrametric((a, b, _) in arb_triple()) {
        let s = a.try_add(&b).unwrap();
        match s.valuation() {
            Ok(Some(vs)) => {
                prop_assert!(vs >= v(&a).min(v(&b)));
                if v(&a) != v(&b) {
                    prop_assert_eq!(vs, v(&a).min(v(&b)));
                }
            }
            // Full cancellation: only possible for equal valuations.
            _ => prop_assert_eq!(v(&a), v(&b)),
        }
    }

    #[test]
    fn valuations_and_moduli_multiply((a, b, _) in arb_triple()) {
        let p = a.try_mul(&b).unwrap();
        prop_assert_eq!(v(&p), v(&a) + v(&b));
        prop_assert_eq!(p.modulus().unwrap(), a.modulus().unwrap().mul(b.modulus().unwrap()));
        prop_assert_eq!(a.modulus().unwrap().exponent, -v(&a));
    }

    #[test]
    fn inverse_roundtrip((a, _, _) in arb_triple()) {
        let inv = a.inverse().unwrap();
        prop_assert_eq!(v(&inv), -v(&a));
        prop_assert!(a.try_mul(&inv).unwrap().eq_within_precision(&a.field().one()));
    }

    #[test]
    fn ring_axioms((a, b, c) in arb_triple()) {
        let ab_c = a.try_mul(&b).unwrap().try_mul(&c).unwrap();
        let a_bc = a.try_mul(&b.try_mul(&c).unwrap()).unwrap();
        prop_assert!(ab_c.eq_within_precision(&a_bc));
        prop_assert!(a.try_mul(&b).unwrap().eq_within_precision(&b.try_mul(&a).unwrap()));
        let sum_first = a.try_add(&b).unwrap().try_add(&c).unwrap();
        let sum_last = a.try_add(&b.try_add(&c).unwrap()).unwrap();
        prop_assert!(sum_first.eq_within_precision(&sum_last));
        let lhs = a.try_mul(&b.try_add(&c).unwrap()).unwrap();
        let rhs = a.try_mul(&b).unwrap().try_add(&a.try_mul(&c).unwrap()).unwrap();
        prop_assert!(lhs.eq_within_precision(&rhs));
    }

    #[test]
    fn literal_roundtrip((a, _, _) in arb_triple()) {
        let back = a.field().parse(&a.to_string()).unwrap();
        prop_assert_eq!(back, a);
    }
}

#[test]
fn ball_and_unit_samples() {
    let field = LaurentField::new(5, 32).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..100_000 {
        let b = field.sample(SampleKind::Ball, &mut rng);
        assert!(b.valuation_at_least(0).unwrap());
        let u = field.sample(SampleKind::Unit, &mut rng);
        assert_eq!(u.valuation().unwrap(), Some(0));
        assert_eq!(u.modulus().unwrap().value(), 1.0);
    }
    let draw = |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..10).map(|_| field.sample(SampleKind::Ball, &mut rng)).collect::<Vec<_>>()
    };
    assert_eq!(draw(4), draw(4));
}

#[test]
fn coefficients_are_uniform() {
    // Pooled chi-square over the first 8 coefficients of 10^5 ball draws at
    // q = 3: 16 degrees of freedom, threshold mean + 3 sd.
    let field = LaurentField::new(3, 16).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let draws = 100_000;
    let mut counts = [[0u64; 3]; 8];
    for _ in 0..draws {
        let x = field.sample(SampleKind::Ball, &mut rng);
        for (i, row) in counts.iter_mut().enumerate() {
            row[x.coefficient(i as i64).unwrap() as usize] += 1;
        }
    }
    let expected = draws as f64 / 3.0;
    let chi2: f64 = counts.iter().flatten().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    assert!(chi2 < 16.0 + 3.0 * 32f64.sqrt(), "chi2 = {chi2}");
}
