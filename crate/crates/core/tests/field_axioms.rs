//! Property tests for the coefficient field: axioms hold exactly and equal
//! values are represented identically regardless of the computation path.

use proptest::prelude::*;
use qgrass_core::scalar::{QScalar, ZPoly};

fn arb_zpoly(max_degree: usize, max_coeff: i64) -> impl Strategy<Value = ZPoly> {
    proptest::collection::vec(-max_coeff..=max_coeff, 0..=max_degree)
        .prop_map(|cs| ZPoly::from_coeffs(cs.into_iter().map(Into::into).collect()))
}

fn arb_scalar() -> impl Strategy<Value = QScalar> {
    (arb_zpoly(4, 6), arb_zpoly(3, 6)).prop_filter_map("nonzero denominator", |(n, d)| {
        QScalar::from_ratio(n, d).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn addition_is_associative_and_commutative(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
    }

    #[test]
    fn multiplication_is_associative_and_commutative(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn multiplication_distributes(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn nonzero_values_have_exact_inverses(a in arb_scalar()) {
        prop_assume!(!a.is_zero());
        let inv = a.inverse().unwrap();
        prop_assert!((&a * &inv).is_one());
    }

    #[test]
    fn subtraction_then_addition_round_trips(a in arb_scalar(), b in arb_scalar()) {
        prop_assert_eq!(&(&a - &b) + &b, a);
    }

    #[test]
    fn canonical_form_is_path_independent(a in arb_scalar(), b in arb_scalar()) {
        prop_assume!(!b.is_zero());
        // (a * b) / b must be bitwise identical to a after normalization.
        let round = (&a * &b).checked_div(&b).unwrap();
        prop_assert_eq!(round, a);
    }

    #[test]
    fn renderings_are_stable_under_recomputation(a in arb_scalar()) {
        let doubled = &a + &a;
        let twice = &a * &QScalar::from_int(2);
        prop_assert_eq!(doubled.render_exact(), twice.render_exact());
        prop_assert_eq!(doubled.render_human(), twice.render_human());
    }
}
