//! q-Pochhammer symbols, Dedekind eta series and eta quotients, and the theta
//! function `Theta(tau) = sum q^(n^2)` with its half-argument variants.

use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::series::{q_pow, QSeries};
use crate::verify::report::IdentityReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Length {
    Finite(u32),
    Infinite,
}

/// `(a; q^(step/24))_length` with `a = sign * q^(alpha/24)`, i.e. the product
/// of `1 - sign * q^((alpha + j*step)/24)` over `j < length`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PochSpec {
    pub sign: i8,
    pub alpha: i64,
    pub step: i64,
    pub length: Length,
}

impl PochSpec {
    pub fn new(sign: i8, alpha: i64, step: i64, length: Length) -> Result<Self> {
        if sign != 1 && sign != -1 {
            return Err(Error::InvalidArgument(format!("Pochhammer sign must be +-1, got {sign}")));
        }
        if step <= 0 {
            return Err(Error::InvalidStep { step });
        }
        if length == Length::Infinite && alpha < 0 {
            return Err(Error::DivergentSpec { alpha });
        }
        Ok(Self {
            sign,
            alpha,
            step,
            length,
        })
    }

    /// `(q^a; q^s)_inf` in integer powers of q.
    pub fn plus_inf(a: i64, s: i64) -> Self {
        Self::new(1, q_pow(a), q_pow(s), Length::Infinite).expect("valid spec")
    }

    /// `(-q^a; q^s)_inf` in integer powers of q.
    pub fn minus_inf(a: i64, s: i64) -> Self {
        Self::new(-1, q_pow(a), q_pow(s), Length::Infinite).expect("valid spec")
    }
}

/// Exact truncated Pochhammer product. Factors `1 +- q^e` with `e >= T` are
/// `1 + O(q^T)` and are skipped.
pub fn pochhammer(spec: &PochSpec, horizon: i64) -> Result<QSeries> {
    let spec = PochSpec::new(spec.sign, spec.alpha, spec.step, spec.length)?;
    let coeff = BigRational::from_integer((-spec.sign).into());
    let mut acc = QSeries::one(horizon);
    let mut j: u32 = 0;
    loop {
        if let Length::Finite(n) = spec.length {
            if j >= n {
                break;
            }
        }
        let e = spec.alpha + i64::from(j) * spec.step;
        if e >= horizon {
            if spec.length == Length::Infinite {
                break;
            }
        } else if e > 0 {
            acc = acc.mul_binomial(e, &coeff);
        } else {
            let factor = QSeries::from_coeffs([(0, BigRational::one()), (e, coeff.clone())], horizon - e);
            acc = acc.mul(&factor);
        }
        j += 1;
    }
    Ok(acc)
}

/// `(q^m; q^m)_inf` without the `q^(m/24)` prefactor.
fn euler_factor(m: i64, horizon: i64) -> QSeries {
    pochhammer(&PochSpec::plus_inf(m, m), horizon).expect("valid spec")
}

/// `eta(m tau) = q^(m/24) (q^m; q^m)_inf`.
pub fn eta_series(m: i64, horizon: i64) -> QSeries {
    assert!(m > 0, "eta argument multiplier must be positive");
    euler_factor(m, horizon - m).shift(m)
}

/// `prod eta(m tau)^e` over the given `(m, e)` pairs.
///
/// The unit-leading parts `(q^m; q^m)_inf^e` are multiplied (or inverted for
/// negative `e`) at horizon `T - sum(m e)`, then the prefactor is applied, so
/// the result is exact below `T`.
pub fn eta_quotient(factors: &[(i64, i32)], horizon: i64) -> QSeries {
    let prefactor: i64 = factors.iter().map(|(m, e)| m * i64::from(*e)).sum();
    let inner = horizon - prefactor;
    let mut num = QSeries::one(inner);
    let mut den = QSeries::one(inner);
    for &(m, e) in factors {
        assert!(m > 0, "eta argument multiplier must be positive");
        let p = euler_factor(m, inner).pow(e.unsigned_abs());
        if e >= 0 {
            num = num.mul(&p);
        } else {
            den = den.mul(&p);
        }
    }
    let inv = den.inverse().expect("unit leading term");
    num.mul(&inv).shift(prefactor)
}

/// `eta^6(2 tau) / eta^4(tau)`.
pub fn eta6_2_over_eta4(horizon: i64) -> QSeries {
    eta_quotient(&[(2, 6), (1, -4)], horizon)
}

/// `Theta(tau) = sum_{n in Z} q^(n^2)`.
pub fn theta_series(horizon: i64) -> QSeries {
    square_sum(horizon, q_pow(1), false)
}

/// `Theta((tau + j)/2) = sum (-1)^(j n) q^(n^2 / 2)` for `j` in {0, 1}.
pub fn theta_half(j: u8, horizon: i64) -> QSeries {
    assert!(j <= 1, "theta_half shift must be 0 or 1");
    square_sum(horizon, 12, j == 1)
}

/// `sum_{n in Z} (+-1)^n q^(unit * n^2)`.
fn square_sum(horizon: i64, unit: i64, alternating: bool) -> QSeries {
    let mut terms = vec![(0, 1)];
    let mut n: i64 = 1;
    while unit * n * n < horizon {
        let c = if alternating && n % 2 == 1 { -2 } else { 2 };
        terms.push((unit * n * n, c));
        n += 1;
    }
    QSeries::from_integers(terms, horizon)
}

/// `sum_{n >= 0} q^((2n+1)^2)`.
pub fn odd_square_series(horizon: i64) -> QSeries {
    let terms = (0..)
        .map(|n: i64| q_pow((2 * n + 1) * (2 * n + 1)))
        .take_while(|e| *e < horizon)
        .map(|e| (e, 1));
    QSeries::from_integers(terms, horizon)
}

/// `2 sum_{n >= 0} q^((2n+1)^2 / 8)`, the third component of the theta vector.
pub fn odd_square_eighth_series(horizon: i64) -> QSeries {
    let terms = (0..)
        .map(|n: i64| 3 * (2 * n + 1) * (2 * n + 1))
        .take_while(|e| *e < horizon)
        .map(|e| (e, 2));
    QSeries::from_integers(terms, horizon)
}

/// The three eta-quotient representations of theta series, one report each:
/// `Theta = eta^5(2t)/(eta^2(t) eta^2(4t))`, `Theta(t+1/2) = eta^2(t)/eta(2t)`,
/// `eta^2(16t)/eta(8t) = sum q^((2n+1)^2)`.
pub fn eta_theta_reports(horizon: i64) -> Result<Vec<IdentityReport>> {
    let theta = theta_series(horizon);
    let first = IdentityReport::compare_exact(
        "exact:theta-eta-quotient",
        &theta,
        &eta_quotient(&[(2, 5), (1, -2), (4, -2)], horizon),
        horizon,
    )?;
    let second = IdentityReport::compare_exact(
        "exact:shifted-theta-eta-quotient",
        &theta.flip_sign()?,
        &eta_quotient(&[(1, 2), (2, -1)], horizon),
        horizon,
    )?;
    let third = IdentityReport::compare_exact(
        "exact:odd-squares-eta-quotient",
        &eta_quotient(&[(16, 2), (8, -1)], horizon),
        &odd_square_series(horizon),
        horizon,
    )?;
    Ok(vec![first, second, third])
}

/// All three eta-theta identities to horizon `T`, as one report.
pub fn check_eta_theta_identities(horizon: i64) -> Result<IdentityReport> {
    Ok(IdentityReport::combine(
        "exact:eta-theta-identities",
        eta_theta_reports(horizon)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn ints(s: &QSeries) -> Vec<(i64, i64)> {
        s.iter()
            .map(|(e, c)| (e, i64::try_from(c.to_integer()).unwrap()))
            .collect()
    }

    fn brute_product(factors: &[(i64, i64)], horizon: i64) -> QSeries {
        // multiply (1 + c q^e) one at a time through the general convolution
        factors.iter().fold(QSeries::one(horizon), |acc, (e, c)| {
            acc.mul(&QSeries::from_integers([(0, 1), (*e, *c)], horizon))
        })
    }

    #[test]
    fn empty_and_single_factor() {
        let empty = pochhammer(&PochSpec::new(1, 24, 24, Length::Finite(0)).unwrap(), 240).unwrap();
        assert_eq!(ints(&empty), vec![(0, 1)]);
        let one = pochhammer(&PochSpec::new(-1, 48, 48, Length::Finite(1)).unwrap(), 240).unwrap();
        assert_eq!(ints(&one), vec![(0, 1), (48, 1)]);
    }

    #[test]
    fn euler_product_to_q13() {
        let t = q_pow(13);
        let p = pochhammer(&PochSpec::plus_inf(1, 1), t).unwrap();
        let oracle = brute_product(&(1..13).map(|k| (q_pow(k), -1)).collect::<Vec<_>>(), t);
        assert_eq!(p, oracle);
        assert_eq!(
            ints(&p),
            vec![(0, 1), (24, -1), (48, -1), (120, 1), (168, 1), (288, -1)]
        );
    }

    #[test]
    fn divergent_and_bad_specs() {
        assert_eq!(
            PochSpec::new(1, -24, 24, Length::Infinite),
            Err(Error::DivergentSpec { alpha: -24 })
        );
        assert_eq!(
            PochSpec::new(1, 24, 0, Length::Finite(3)),
            Err(Error::InvalidStep { step: 0 })
        );
        // a finite product may start below zero
        let p = pochhammer(&PochSpec::new(1, -24, 24, Length::Finite(2)).unwrap(), 240).unwrap();
        // (1 - q^-1)(1 - 1) = 0
        assert!(p.is_zero());
    }

    #[test]
    fn pochhammer_recursion() {
        let t = q_pow(40);
        for (sign, alpha, step) in [(1i8, 24, 48), (-1, 48, 48), (1, 8, 24), (-1, 0, 24)] {
            for n in 0..12u32 {
                let lhs = pochhammer(&PochSpec::new(sign, alpha, step, Length::Finite(n + 1)).unwrap(), t).unwrap();
                let prev = pochhammer(&PochSpec::new(sign, alpha, step, Length::Finite(n)).unwrap(), t).unwrap();
                let e = alpha + i64::from(n) * step;
                let factor = QSeries::from_coeffs(
                    [(0, BigRational::one()), (e, BigRational::from_integer(BigInt::from(-sign)))],
                    t,
                );
                assert_eq!(lhs, prev.mul(&factor), "sign {sign} alpha {alpha} n {n}");
            }
        }
    }

    #[test]
    fn eta_leading_terms() {
        let t = q_pow(20);
        assert_eq!(eta_series(1, t).valuation(), Some(1));
        assert_eq!(eta_series(16, t).valuation(), Some(16));
        let e2 = eta_series(2, q_pow(12));
        // q^(1/12)(1 - q^2 - q^4 + q^10 + ...)
        assert_eq!(ints(&e2), vec![(2, 1), (50, -1), (98, -1), (242, 1)]);
    }

    #[test]
    fn eta_rescaling_matches_substitution() {
        let t = q_pow(60);
        for m in [2i64, 3, 8] {
            let direct = eta_series(m, t);
            let base = eta_series(1, t.div_euclid(m) + 1);
            let sub = base
                .substitute_power(num_rational::Rational64::from_integer(m))
                .unwrap()
                .truncate(t);
            assert_eq!(direct.truncate(sub.order()), sub);
        }
    }

    #[test]
    fn theta_shapes() {
        let t = q_pow(10);
        assert_eq!(ints(&theta_series(t)), vec![(0, 1), (24, 2), (96, 2), (216, 2)]);
        assert_eq!(theta_series(t).coeff(q_pow(4)).unwrap(), BigRational::from_integer(2.into()));
        assert_eq!(ints(&theta_half(0, 120)), vec![(0, 1), (12, 2), (48, 2), (108, 2)]);
        assert_eq!(ints(&theta_half(1, 120)), vec![(0, 1), (12, -2), (48, 2), (108, -2)]);
    }

    #[test]
    fn half_theta_sum_is_even_part() {
        let t = q_pow(80);
        let sum = &theta_half(0, t) + &theta_half(1, t);
        let even: Vec<_> = theta_half(0, t)
            .iter()
            .filter(|(e, _)| (e / 12) % 2 == 0)
            .map(|(e, c)| (e, c * BigRational::from_integer(2.into())))
            .collect();
        assert_eq!(sum, QSeries::from_coeffs(even, t));
    }

    #[test]
    fn eta_theta_identities_hold() {
        let r = check_eta_theta_identities(q_pow(50)).unwrap();
        assert!(r.passed(), "{r}");
        let quotient = eta_quotient(&[(2, 5), (1, -2), (4, -2)], q_pow(5));
        assert_eq!(quotient.coeff(24).unwrap(), BigRational::from_integer(2.into()));
        let odd = eta_quotient(&[(16, 2), (8, -1)], q_pow(30));
        assert_eq!(odd.valuation(), Some(24));
    }
}
