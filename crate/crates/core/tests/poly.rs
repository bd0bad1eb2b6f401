//! Algebraic invariants of polynomials in e.

mod common;

use common::*;
use num::{One, Zero};
use proptest::prelude::*;
use stochstab::format::parse_poly;
use stochstab::{EpsPoly, Rational, Resistance};

fn coefficient() -> impl Strategy<Value = Rational> {
    prop_oneof![2 => Just(0i64), 3 => -6i64..=6].prop_flat_map(|n| (Just(n), 1i64..=5)).prop_map(|(n, d)| q(n, d))
}

fn poly() -> impl Strategy<Value = EpsPoly> {
    proptest::collection::vec(coefficient(), 0..=5).prop_map(EpsPoly::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ring_laws(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a - &a, EpsPoly::zero());
        prop_assert_eq!(&a * &EpsPoly::one(), a.clone());
    }

    #[test]
    fn resistance_adds_under_products(a in poly(), b in poly()) {
        let product = &a * &b;
        match (a.resistance(), b.resistance()) {
            (Resistance::Finite(x), Resistance::Finite(y)) => {
                prop_assert_eq!(product.resistance(), Resistance::Finite(x + y));
                prop_assert_eq!(product.leading(), a.leading() * b.leading());
            }
            _ => prop_assert!(product.is_zero()),
        }
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in poly(), b in poly(), x in coefficient()) {
        prop_assert_eq!((&a * &b).eval_at(&x), a.eval_at(&x) * b.eval_at(&x));
        prop_assert_eq!((&a + &b).eval_at(&x), a.eval_at(&x) + b.eval_at(&x));
    }

    #[test]
    fn display_round_trips(a in poly()) {
        prop_assert_eq!(parse_poly(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn dividing_by_e_undoes_multiplying(a in poly()) {
        let shifted = &a * &EpsPoly::eps();
        prop_assert_eq!(shifted.divide_by_eps().unwrap(), a.clone());
        if !a.constant_term().is_zero() {
            prop_assert!(a.divide_by_eps().is_err());
        }
    }
}
