//! Algebraic invariants of the exact series layer.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use proptest::prelude::*;

use qmock::etatheta::{pochhammer, Length, PochSpec};
use qmock::{q_pow, QSeries};

const T: i64 = q_pow(12);

/// Small integer series on the `q^(1/3)` sublattice, below `q^12`.
fn series() -> impl Strategy<Value = QSeries> {
    prop::collection::vec((0i64..36, -5i64..=5), 0..12)
        .prop_map(|terms| QSeries::from_integers(terms.into_iter().map(|(k, c)| (8 * k, c)), T))
}

/// Integer-exponent series with nonzero constant term.
fn unit_series() -> impl Strategy<Value = QSeries> {
    (1i64..=3, prop::collection::vec((1i64..12, -4i64..=4), 0..8)).prop_map(|(c0, terms)| {
        QSeries::from_integers(std::iter::once((0, c0)).chain(terms.into_iter().map(|(k, c)| (q_pow(k), c))), T)
    })
}

fn integer_series() -> impl Strategy<Value = QSeries> {
    prop::collection::vec((0i64..12, -5i64..=5), 0..12)
        .prop_map(|terms| QSeries::from_integers(terms.into_iter().map(|(k, c)| (q_pow(k), c)), T))
}

/// Equality below the smaller of the two horizons.
fn agree(a: &QSeries, b: &QSeries) -> bool {
    let t = a.order().min(b.order());
    a.truncate(t) == b.truncate(t)
}

proptest! {
    #[test]
    fn addition_is_commutative_and_associative(a in series(), b in series(), c in series()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn multiplication_is_a_commutative_ring(a in series(), b in series(), c in series()) {
        prop_assert!(agree(&a.mul(&b), &b.mul(&a)));
        prop_assert!(agree(&a.mul(&b).mul(&c), &a.mul(&b.mul(&c))));
        prop_assert!(agree(&a.mul(&(&b + &c)), &(&a.mul(&b) + &a.mul(&c))));
        prop_assert!(agree(&a.mul(&QSeries::one(T)), &a));
    }

    #[test]
    fn product_horizon_is_tight(a in series(), b in series()) {
        // an empty series is known to vanish up to its own horizon
        let v = |s: &QSeries| s.valuation().unwrap_or(s.order());
        let p = a.mul(&b);
        prop_assert_eq!(p.order(), (a.order() + v(&b)).min(b.order() + v(&a)));
        prop_assert!(p.exponents().all(|e| e < p.order()));
    }

    #[test]
    fn inverse_is_a_two_sided_inverse(u in unit_series()) {
        let inv = u.inverse().unwrap();
        prop_assert!(agree(&u.mul(&inv), &QSeries::one(T)));
    }

    #[test]
    fn binomial_kernels_match_generic_product(a in series(), k in 1i64..40, c in -3i64..=3) {
        let c = BigRational::from_integer(BigInt::from(c));
        let factor = QSeries::from_coeffs([(0, BigRational::from_integer(1.into())), (k, c.clone())], T);
        prop_assert!(agree(&a.mul_binomial(k, &c), &a.mul(&factor)));
        if let Ok(inv) = factor.inverse() {
            prop_assert!(agree(&a.div_binomial(k, &c), &a.mul(&inv)));
        }
    }

    #[test]
    fn sieve_classes_partition_the_series(f in integer_series(), m in 1i64..6) {
        let mut total = QSeries::zero(T);
        for r in 0..m {
            let s = f.sieve(m, r).unwrap();
            // idempotent, and disjoint from every other class
            prop_assert_eq!(s.sieve(m, r).unwrap(), s.clone());
            for r2 in (0..m).filter(|&r2| r2 != r) {
                prop_assert!(s.sieve(m, r2).unwrap().is_zero());
            }
            total = &total + &s;
        }
        prop_assert_eq!(total, f);
    }

    #[test]
    fn sieve_commutes_with_substitution(f in integer_series(), m in 1i64..5, r in 0i64..5, k in 1i64..4) {
        // S_{km, kr}(f(q^k)) = (S_{m, r} f)(q^k)
        let up = |g: &QSeries| g.substitute_power(Rational64::from_integer(k)).unwrap();
        prop_assert_eq!(up(&f).sieve(k * m, k * r).unwrap(), up(&f.sieve(m, r).unwrap()));
    }

    #[test]
    fn substitution_round_trips(f in series(), k in 1i64..4) {
        let up = f.substitute_power(Rational64::from_integer(k)).unwrap();
        prop_assert_eq!(up.substitute_power(Rational64::new(1, k)).unwrap(), f);
    }

    #[test]
    fn flip_sign_is_an_involution(f in integer_series()) {
        prop_assert_eq!(f.flip_sign().unwrap().flip_sign().unwrap(), f);
    }

    #[test]
    fn pochhammer_recursion(alpha in 0i64..30, step in 1i64..30, n in 0u32..10, sign in prop::sample::select(vec![1i8, -1])) {
        let horizon = q_pow(15);
        let at = |n| pochhammer(&PochSpec::new(sign, alpha, step, Length::Finite(n)).unwrap(), horizon).unwrap();
        // (a; q)_{n+1} = (a; q)_n (1 - a q^n)
        let e = alpha + i64::from(n) * step;
        let next = at(n).mul(&QSeries::from_integers([(0, 1), (e, -i64::from(sign))], horizon));
        prop_assert!(agree(&at(n + 1), &next));
    }

    #[test]
    fn infinite_pochhammer_is_the_limit(alpha in 1i64..30, step in 1i64..30) {
        let horizon = q_pow(10);
        let inf = pochhammer(&PochSpec::new(1, alpha, step, Length::Infinite).unwrap(), horizon).unwrap();
        // every factor with exponent >= horizon is 1 + O(q^T)
        let n = u32::try_from((horizon - alpha) / step + 1).unwrap();
        let fin = pochhammer(&PochSpec::new(1, alpha, step, Length::Finite(n)).unwrap(), horizon).unwrap();
        prop_assert!(agree(&inf, &fin));
    }
}
