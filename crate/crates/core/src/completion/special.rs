//! `E`, `beta` and `Gamma(1/2, .)` through the complementary error function.
//!
//! Absolute accuracy is `<= 1e-12` on `[0, 50]` for all three; `erfc` comes
//! from `libm`, which is accurate to a few ulps in relative terms over the
//! whole range.

use std::f64::consts::PI;

/// Scaled complementary error function `exp(x^2) erfc(x)` for `x >= 0`.
///
/// Direct product below the crossover, asymptotic series beyond it (where
/// `exp(x^2)` would overflow); at `x = 25` the series' seventh term is below
/// `1e-19` relative.
pub fn erfcx(x: f64) -> f64 {
    assert!(x >= 0.0 || x.is_nan(), "erfcx needs a nonnegative argument");
    if x < 25.0 {
        (x * x).exp() * libm::erfc(x)
    } else {
        erfcx_asymptotic(x)
    }
}

fn erfcx_asymptotic(x: f64) -> f64 {
    let inv2 = 1.0 / (2.0 * x * x);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..8 {
        term *= -((2 * k - 1) as f64) * inv2;
        sum += term;
    }
    sum / (x * PI.sqrt())
}

/// `Gamma(1/2, u) = sqrt(pi) erfc(sqrt(u))`.
pub fn gamma_half(u: f64) -> f64 {
    assert!(u >= 0.0, "gamma_half needs u >= 0");
    PI.sqrt() * libm::erfc(u.sqrt())
}

/// `beta(x) = Gamma(1/2, pi x) / sqrt(pi) = erfc(sqrt(pi x))`.
pub fn beta_func(x: f64) -> f64 {
    assert!(x >= 0.0, "beta_func needs x >= 0");
    libm::erfc((PI * x).sqrt())
}

/// `E(w) = 2 int_0^w exp(-pi t^2) dt = sgn(w) (1 - beta(w^2)) = erf(sqrt(pi) w)`.
pub fn e_func(w: f64) -> f64 {
    libm::erf(PI.sqrt() * w)
}

/// `beta(x^2) * exp(-s)` without forming either factor alone: the
/// combination stays finite even when `exp(-s)` alone would overflow.
pub fn beta_weighted(x: f64, s: f64) -> f64 {
    let z = PI.sqrt() * x.abs();
    erfcx(z) * (-(z * z) - s).exp()
}

/// `Gamma(1/2, u) * exp(w)` evaluated as `sqrt(pi) erfcx(sqrt(u)) exp(w - u)`.
pub fn gamma_half_weighted(u: f64, w: f64) -> f64 {
    PI.sqrt() * erfcx(u.sqrt()) * (w - u).exp()
}

/// `sum_{k >= 0} exp(-c (s + k)^2) <= exp(-c s^2) / (1 - exp(-2 c s))` for `c, s > 0`.
pub fn gaussian_tail(c: f64, s: f64) -> f64 {
    if s <= 0.0 {
        return f64::INFINITY;
    }
    (-c * s * s).exp() / (1.0 - (-2.0 * c * s).exp())
}

/// `sum_{x in Z + a} exp(-c x^2) <= 2 + sqrt(pi / c)`.
pub fn gaussian_full(c: f64) -> f64 {
    2.0 + (PI / c).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints() {
        assert_eq!(e_func(0.0), 0.0);
        assert_eq!(beta_func(0.0), 1.0);
        assert!((gamma_half(0.0) - PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn e_is_odd_and_matches_beta() {
        for &w in &[0.01, 0.3, 1.0, 2.5, 4.0] {
            assert!((e_func(-w) + e_func(w)).abs() < 1e-15);
            let via_beta = 1.0 - beta_func(w * w);
            assert!((e_func(w) - via_beta).abs() < 1e-14, "w = {w}");
        }
    }

    #[test]
    fn erfcx_is_continuous_at_crossover() {
        let direct = (625f64).exp() * libm::erfc(25.0);
        let series = erfcx_asymptotic(25.0);
        assert!(((direct - series) / series).abs() < 1e-12);
        // large-argument behaviour ~ 1/(x sqrt(pi))
        let x = 1e4;
        assert!((erfcx(x) * x * PI.sqrt() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn weighted_forms_agree_with_plain_ones() {
        for &(x, s) in &[(0.5f64, -0.1f64), (1.3, 2.0), (3.0, -20.0)] {
            let plain = beta_func(x * x) * (-s).exp();
            assert!((beta_weighted(x, s) - plain).abs() < 1e-12 * plain.max(1.0));
        }
        for &(u, w) in &[(0.2f64, 0.1f64), (4.0, 3.0), (30.0, 15.0)] {
            let plain = gamma_half(u) * w.exp();
            assert!((gamma_half_weighted(u, w) - plain).abs() < 1e-12 * plain.max(1.0));
        }
    }

    #[test]
    fn gaussian_bounds_dominate() {
        let c = 0.3;
        let s = 2.5;
        let direct: f64 = (0..200).map(|k| (-c * (s + k as f64).powi(2)).exp()).sum();
        assert!(direct <= gaussian_tail(c, s));
        let full: f64 = (-200..200).map(|k| (-c * (k as f64 + 0.3).powi(2)).exp()).sum();
        assert!(full <= gaussian_full(c));
    }
}
