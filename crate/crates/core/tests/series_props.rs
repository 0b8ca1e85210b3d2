//! Property tests for the exact series layer.

use proptest::prelude::*;
use rug::Rational;

use eulerprod::qseries::{log_deriv_series, series_from_log_deriv, RationalSeries};

fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=9).prop_map(|(n, d)| Rational::from((n, d)))
}

/// A series with the given constant term and 1..=16 further coefficients.
fn series_with_constant(c: i64) -> impl Strategy<Value = RationalSeries> {
    prop::collection::vec(small_rational(), 1..=16).prop_map(move |tail| {
        let mut coeffs = vec![Rational::from(c)];
        coeffs.extend(tail);
        RationalSeries::from_coeffs(coeffs)
    })
}

proptest! {
    #[test]
    fn exp_log_round_trip(a in series_with_constant(1)) {
        prop_assert_eq!(a.log().unwrap().exp().unwrap(), a);
    }

    #[test]
    fn log_deriv_round_trip(b in series_with_constant(1)) {
        let g = log_deriv_series(&b).unwrap();
        prop_assert_eq!(series_from_log_deriv(&g), b);
    }

    #[test]
    fn division_inverts_multiplication(
        a in series_with_constant(0),
        b in series_with_constant(2),
    ) {
        let product = a.truncated(12.min(a.order())).mul(&b);
        let back = product.div(&b).unwrap();
        prop_assert_eq!(&back, &a.truncated(back.order()));
    }

    #[test]
    fn pow_is_repeated_multiplication(
        a in series_with_constant(1),
        e in 0u32..6,
    ) {
        let by_pow = a.pow(&Rational::from(e)).unwrap();
        let mut by_mul = RationalSeries::one(a.order());
        for _ in 0..e {
            by_mul = by_mul.mul(&a);
        }
        prop_assert_eq!(by_pow, by_mul);
    }

    #[test]
    fn addition_commutes_and_truncates(
        a in series_with_constant(0),
        b in series_with_constant(1),
    ) {
        let left = a.add(&b);
        let right = b.add(&a);
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(left.order(), a.order().min(b.order()));
    }
}
