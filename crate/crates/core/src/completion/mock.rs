//! Non-holomorphic parts `F^-`, `H^-`, `A^-`, the completions built from them,
//! and direct evaluations of `eta`, `Theta` and the theta vector `T`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::lattice::vartheta_numeric;
use super::special::{gamma_half_weighted, gaussian_full, gaussian_tail};
use super::{q_power, CompletionValue, NumericSeries, UpperHalfPoint};
use crate::error::{Error, Result};
use crate::genfun::{a_series, series_of, GenFunId};
use crate::indefinite::{h_series, QuadraticForm2, ThetaCharacteristic};
use crate::series::q_pow;

/// Summation bound for the incomplete-gamma sums: the first omitted term is
/// below `exp(-120)` relative to the leading one.
pub fn default_sum_bound(v: f64) -> u32 {
    (40.0 / (PI * v)).sqrt().ceil() as u32 + 2
}

fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `sgn(m) Gamma(1/2, 6 pi m^2 v) q^(-3m^2/2)`.
fn gamma_term(tau: UpperHalfPoint, m: f64) -> Complex64 {
    let u6 = 6.0 * PI * m * m * tau.v;
    let modulus = gamma_half_weighted(u6, u6 / 2.0);
    let phase = (-1.5 * m * m * tau.u).rem_euclid(1.0);
    Complex64::from_polar(sgn(m) * modulus, 2.0 * PI * phase)
}

/// Closed forms of the period integrals of the unary theta functions `t_j`:
/// `F1^- = -(2/sqrt pi) sum sgn(n+1/6) Gamma(1/2, 6 pi (n+1/6)^2 v) q^(-3/2 (n+1/6)^2)`,
/// `F2^-` the same over `n + 1/3` with `(-1)^n` and sign `+`, `F3^-` over
/// `n + 1/3` with sign `-`.
pub fn f_minus(j: u8, tau: UpperHalfPoint, bound: Option<u32>) -> Result<CompletionValue> {
    let (offset, overall) = match j {
        1 => (1.0 / 6.0, -1.0),
        2 | 3 => (1.0 / 3.0, if j == 2 { 1.0 } else { -1.0 }),
        _ => return Err(Error::UnknownObject(format!("F{j}^-"))),
    };
    let n_max = i64::from(bound.unwrap_or_else(|| default_sum_bound(tau.v)));
    let mut value = Complex64::new(0.0, 0.0);
    for n in -n_max..=n_max {
        let sign = if j == 2 && n.rem_euclid(2) == 1 { -1.0 } else { 1.0 };
        value += gamma_term(tau, n as f64 + offset) * sign;
    }
    let scale = overall * 2.0 / PI.sqrt();
    // |summand| <= sqrt(pi) exp(-3 pi v m^2); omitted |m| >= N + 1 - offset
    let tail = 2.0 * PI.sqrt() * gaussian_tail(3.0 * PI * tau.v, n_max as f64 + 1.0 - offset);
    CompletionValue { value: value * scale, est_tail: tail * scale.abs() }.check(tau)
}

/// The shared double sum defining both `H^-` and `A^-`:
/// `-(1/sqrt pi) sum_eps (-1)^eps sum_{n,r} sgn(m) Gamma(1/2, 6 pi m^2 v) q^(-3m^2/2 + (2n+eps+1)^2/2)`
/// with `m = 2r + eps + 1/3`, both indices in `[-N, N]`.
pub fn hecke_minus(tau: UpperHalfPoint, bound: Option<u32>) -> Result<CompletionValue> {
    let n_max = i64::from(bound.unwrap_or_else(|| default_sum_bound(tau.v)));
    let mut value = Complex64::new(0.0, 0.0);
    for eps in 0..2i64 {
        let mut theta_part = Complex64::new(0.0, 0.0);
        let mut gamma_part = Complex64::new(0.0, 0.0);
        for n in -n_max..=n_max {
            let k = (2 * n + eps + 1) as f64;
            theta_part += q_power(tau, k * k / 2.0);
            gamma_part += gamma_term(tau, (2 * n + eps) as f64 + 1.0 / 3.0);
        }
        let sign = if eps == 0 { 1.0 } else { -1.0 };
        value += theta_part * gamma_part * sign;
    }
    let v = tau.v;
    let nf = n_max as f64;
    let th_full = gaussian_full(PI * v);
    let th_tail = 2.0 * gaussian_tail(PI * v, 2.0 * nf);
    let ga_full = PI.sqrt() * gaussian_full(3.0 * PI * v);
    let ga_tail = 2.0 * PI.sqrt() * gaussian_tail(3.0 * PI * v, 2.0 * nf + 2.0 / 3.0);
    let est_tail = 2.0 * (th_tail * ga_full + th_full * ga_tail) / PI.sqrt();
    CompletionValue { value: -value / PI.sqrt(), est_tail }.check(tau)
}

pub fn h_minus(tau: UpperHalfPoint, bound: Option<u32>) -> Result<CompletionValue> {
    hecke_minus(tau, bound)
}

/// The definition of `A^-` is term-for-term that of `H^-`.
pub fn a_minus(tau: UpperHalfPoint, bound: Option<u32>) -> Result<CompletionValue> {
    hecke_minus(tau, bound)
}

/// `sum_{n in Z} q^(s (n + o)^2)` for `s > 0`.
fn unary_theta(tau: UpperHalfPoint, s: f64, o: f64, alternating: bool) -> CompletionValue {
    let c = 2.0 * PI * tau.v * s;
    let n_max = ((40.0 / c).sqrt().ceil() as i64) + 2;
    let mut value = Complex64::new(0.0, 0.0);
    for n in -n_max..=n_max {
        let x = n as f64 + o;
        let t = q_power(tau, s * x * x);
        value += if alternating && n.rem_euclid(2) == 1 { -t } else { t };
    }
    let est_tail = 2.0 * gaussian_tail(c, n_max as f64 + 1.0 - o.abs());
    CompletionValue { value, est_tail }
}

/// `Theta(tau) = sum q^(n^2)`.
pub fn theta(tau: UpperHalfPoint) -> CompletionValue {
    unary_theta(tau, 1.0, 0.0, false)
}

/// `Theta((tau + j) / 2)`.
pub fn theta_half(j: u8, tau: UpperHalfPoint) -> CompletionValue {
    theta(tau.affine(f64::from(j), 2.0))
}

/// `eta(tau) = sum (-1)^n q^((6n-1)^2 / 24)`.
pub fn eta(tau: UpperHalfPoint) -> CompletionValue {
    unary_theta(tau, 1.5, -1.0 / 6.0, true)
}

/// `eta^6(2 tau) / eta^4(tau)`.
pub fn script_e(tau: UpperHalfPoint) -> CompletionValue {
    eta(tau.affine(0.0, 0.5)).powi(6).div(eta(tau).powi(4))
}

/// `T = (Theta(tau/2), Theta(tau/2 + 1/2), 2 sum_{n>=0} q^((2n+1)^2/8))`.
pub fn t_vector(tau: UpperHalfPoint) -> [CompletionValue; 3] {
    // the third entry is the full sum over n + 1/2 in Z + 1/2
    [theta_half(0, tau), theta_half(1, tau), unary_theta(tau, 0.5, 0.5, false)]
}

/// Numeric completions with cached holomorphic parts.
#[derive(Clone, Debug)]
pub struct CompletionEngine {
    terms: u32,
    h: NumericSeries,
    a: NumericSeries,
    f: [NumericSeries; 3],
}

impl CompletionEngine {
    /// Default number of integer powers of `q` kept for the holomorphic parts:
    /// enough for `v >= 0.1`, the smallest imaginary part reached by the
    /// images of the default sample window.
    pub const DEFAULT_TERMS: u32 = 200;

    pub fn new(terms: u32) -> Self {
        let t = q_pow(i64::from(terms));
        let shifted = |s: crate::series::QSeries| NumericSeries::new(&s.shift(8));
        Self {
            terms,
            h: shifted(h_series(t - 8)),
            a: shifted(a_series(t - 8)),
            f: [GenFunId::F1Holo, GenFunId::F2Holo, GenFunId::F3Holo]
                .map(|id| NumericSeries::new(&series_of(id, t))),
        }
    }

    pub fn terms(&self) -> u32 {
        self.terms
    }

    /// `q^(1/3) H(q)` evaluated from the exact series.
    pub fn h_holomorphic(&self, tau: UpperHalfPoint) -> CompletionValue {
        self.h.eval(tau)
    }

    pub fn a_holomorphic(&self, tau: UpperHalfPoint) -> CompletionValue {
        self.a.eval(tau)
    }

    /// `q^(1/3) H(q) + H^-(tau)`.
    pub fn h_hat(&self, tau: UpperHalfPoint) -> Result<CompletionValue> {
        (self.h.eval(tau) + h_minus(tau, None)?).check(tau)
    }

    /// `q^(1/3) A(q) + A^-(tau)`.
    pub fn a_hat(&self, tau: UpperHalfPoint) -> Result<CompletionValue> {
        (self.a.eval(tau) + a_minus(tau, None)?).check(tau)
    }

    pub fn f_holomorphic(&self, j: u8, tau: UpperHalfPoint) -> Result<CompletionValue> {
        match j {
            1..=3 => Ok(self.f[usize::from(j - 1)].eval(tau)),
            _ => Err(Error::UnknownObject(format!("F{j}"))),
        }
    }

    /// `F_j + F_j^-`.
    pub fn f_hat(&self, j: u8, tau: UpperHalfPoint) -> Result<CompletionValue> {
        (self.f_holomorphic(j, tau)? + f_minus(j, tau, None)?).check(tau)
    }

    pub fn f_hat_vector(&self, tau: UpperHalfPoint) -> Result<[CompletionValue; 3]> {
        Ok([self.f_hat(1, tau)?, self.f_hat(2, tau)?, self.f_hat(3, tau)?])
    }

    /// `2 eta^6(2 tau)/eta^4(tau) - (Theta(tau/2) F2^ + Theta((tau+1)/2) F3^) / 4`.
    pub fn a_hat_via_f(&self, tau: UpperHalfPoint) -> Result<CompletionValue> {
        let g = theta_half(0, tau) * self.f_hat(2, tau)? + theta_half(1, tau) * self.f_hat(3, tau)?;
        (script_e(tau).scale(2.0.into()) - g.scale((0.25).into())).check(tau)
    }

    /// `(e^(-pi i/3) / 2) vartheta_{a,b}(tau)` for the Hecke characteristic.
    pub fn h_hat_via_theta(&self, tau: UpperHalfPoint, radius: Option<u32>, tol: f64) -> Result<CompletionValue> {
        let th = vartheta_numeric(&QuadraticForm2::hecke(), &ThetaCharacteristic::hecke(), tau, radius, tol)?;
        Ok(th.scale(Complex64::from_polar(0.5, -PI / 3.0)))
    }
}

/// `A^* = -(Theta(tau/2) F2^- + Theta((tau+1)/2) F3^-) / 4`.
pub fn a_star(tau: UpperHalfPoint, bound: Option<u32>) -> Result<CompletionValue> {
    let s = theta_half(0, tau) * f_minus(2, tau, bound)? + theta_half(1, tau) * f_minus(3, tau, bound)?;
    s.scale((-0.25).into()).check(tau)
}
