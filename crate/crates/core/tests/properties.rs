mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tacx::algebra::{LiftPair, ShortAlgebra};
use tacx::complex::{normalize, product_f_coefficient, Normalized};
use tacx::connected_sum::build_connected_sum;
use tacx::doubling::{build_doubled, verify_doubling, SocleDecomposition};
use tacx::io::ring::parse_ring_file;
use tacx::{fixtures, DenseMatrix, PrimeField};

use common::{lift, random_side};

fn side(seed: u64) -> Option<common::Side> {
    random_side(&mut ChaCha8Rng::seed_from_u64(seed), PrimeField::default(), "t")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_is_commutative_and_bilinear(seed in 0u64..10_000, a in proptest::collection::vec(0u32..32003, 4), b in proptest::collection::vec(0u32..32003, 4), c in 1u32..32003) {
        let Some(s) = side(seed) else { return Ok(()) };
        let alg = ShortAlgebra::build(&s.presentation);
        let k = alg.field();
        let (a, b) = (alg.linear(a[..alg.n()].to_vec()), alg.linear(b[..alg.n()].to_vec()));
        prop_assert_eq!(alg.multiply(&a, &b), alg.multiply(&b, &a));
        let ca = alg.scale(c, &a);
        prop_assert_eq!(alg.multiply(&ca, &b), alg.scale(c, &alg.multiply(&a, &b)));
        let sum = alg.add(&a, &b);
        let lhs = alg.multiply(&sum, &sum);
        let two_ab = alg.scale(k.from_i64(2), &alg.multiply(&a, &b));
        let rhs = alg.add(&alg.add(&alg.multiply(&a, &a), &two_ab), &alg.multiply(&b, &b));
        prop_assert_eq!(lhs, rhs);
        // cube of the maximal ideal vanishes
        prop_assert_eq!(alg.multiply(&alg.multiply(&a, &b), &a), alg.zero());
    }

    #[test]
    fn ring_text_round_trip(seed in 0u64..10_000) {
        let Some(s) = side(seed) else { return Ok(()) };
        let text = s.presentation.to_text();
        let back = parse_ring_file(&text, PrimeField::default()).unwrap();
        prop_assert_eq!(back, s.presentation);
    }

    #[test]
    fn normalization_gives_f_identity(seed in 0u64..10_000) {
        let Some(s) = side(seed) else { return Ok(()) };
        let pair = lift(&s);
        let n = normalize(&pair, &s.complex, 9).unwrap();
        let maps = n.maps();
        let id = DenseMatrix::identity(pair.field(), maps[0].rows());
        for w in maps.windows(2) {
            let m = product_f_coefficient(&pair.r0, &w[0], &w[1], &pair.f).unwrap();
            prop_assert_eq!(m.as_ref(), Some(&id));
        }
        if let Normalized::Periodic(p) = n {
            prop_assert!(p.period() == 2 || p.period() == 4);
        }
    }

    #[test]
    fn connected_sum_invariants(l in 0u64..10_000, r in 0u64..10_000) {
        let (Some(a), Some(b)) = (side(l), random_side(&mut ChaCha8Rng::seed_from_u64(r), PrimeField::default(), "u")) else {
            return Ok(());
        };
        let Ok(cs) = build_connected_sum(&a.presentation, &b.presentation) else { return Ok(()) };
        prop_assert!(cs.invariants().all(), "{:?}", cs.invariants());
        prop_assert_eq!(cs.r.n(), cs.left.r1.n() + cs.right.r1.n());
    }

    #[test]
    fn doubling_pattern_for_every_alpha(alpha in 0u32..32003) {
        let p = fixtures::ring("ex1_r1.ring").unwrap();
        let pair = LiftPair::new(&p).unwrap();
        let (_, c) = fixtures::complex("ex1_l1.cx").unwrap();
        let dec = SocleDecomposition::from_monomials(&pair).unwrap();
        let d = build_doubled(&pair, c.map(0), c.map(1), &dec, alpha).unwrap();
        let k = pair.field();
        let a2 = k.mul(alpha, alpha);
        let m = product_f_coefficient(&pair.r0, &d.a, &d.b, &pair.f).unwrap();
        prop_assert_eq!(m, Some(DenseMatrix::scalar(k, 2, a2)));
        let v = verify_doubling(&pair, &d).unwrap();
        prop_assert!(v.is_complex);
        prop_assert_eq!(v.composite_pattern, alpha != 0);
        prop_assert_eq!(v.lifting_condition, alpha != 0);
    }
}
