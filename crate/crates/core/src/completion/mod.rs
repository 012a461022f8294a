//! Complex double-precision evaluation of the non-holomorphic completions and
//! the transformation laws they satisfy.

pub mod lattice;
pub mod mock;
pub mod special;
pub mod transform;

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::series::{QSeries, SCALE};

pub use lattice::vartheta_numeric;
pub use mock::CompletionEngine;

/// `tau = u + iv` in the upper half plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UpperHalfPoint {
    pub u: f64,
    pub v: f64,
}

impl UpperHalfPoint {
    pub fn new(u: f64, v: f64) -> Result<Self> {
        if v > 0.0 && u.is_finite() && v.is_finite() {
            Ok(Self { u, v })
        } else {
            Err(Error::InvalidArgument(format!("tau = {u} + {v}i is not in the upper half plane")))
        }
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.u, self.v)
    }

    /// `(tau + shift) / scale` for real `shift`, positive `scale`.
    pub fn affine(self, shift: f64, scale: f64) -> Self {
        Self { u: (self.u + shift) / scale, v: self.v / scale }
    }

    pub fn failure(self, reason: impl Into<String>) -> Error {
        Error::EvaluationFailure { re: self.u, im: self.v, reason: reason.into() }
    }
}

impl fmt::Display for UpperHalfPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.6}{:+.6}i", self.u, self.v)
    }
}

/// `q^x = e^(2 pi i tau x)`, with the phase reduced before exponentiating.
pub fn q_power(tau: UpperHalfPoint, x: f64) -> Complex64 {
    let phase = (tau.u * x).rem_euclid(1.0);
    Complex64::from_polar((-2.0 * PI * tau.v * x).exp(), 2.0 * PI * phase)
}

/// A numerically evaluated value with a bound on its truncation error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompletionValue {
    pub value: Complex64,
    pub est_tail: f64,
}

impl CompletionValue {
    pub fn exact(value: Complex64) -> Self {
        Self { value, est_tail: 0.0 }
    }

    pub fn scale(self, c: Complex64) -> Self {
        Self { value: self.value * c, est_tail: self.est_tail * c.norm() }
    }

    pub fn powi(self, k: i32) -> Self {
        let value = self.value.powi(k);
        // first-order propagation of the relative error
        let rel = self.est_tail / self.value.norm();
        Self { value, est_tail: value.norm() * rel * f64::from(k.abs()) }
    }

    pub fn div(self, other: Self) -> Self {
        let value = self.value / other.value;
        let rel = self.est_tail / self.value.norm() + other.est_tail / other.value.norm();
        Self { value, est_tail: value.norm() * rel }
    }

    pub fn check(self, tau: UpperHalfPoint) -> Result<Self> {
        if self.value.re.is_finite() && self.value.im.is_finite() && self.est_tail.is_finite() {
            Ok(self)
        } else {
            Err(tau.failure("non-finite value"))
        }
    }
}

impl Add for CompletionValue {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { value: self.value + o.value, est_tail: self.est_tail + o.est_tail }
    }
}

impl Sub for CompletionValue {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { value: self.value - o.value, est_tail: self.est_tail + o.est_tail }
    }
}

impl Mul for CompletionValue {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self {
            value: self.value * o.value,
            est_tail: self.value.norm() * o.est_tail
                + o.value.norm() * self.est_tail
                + self.est_tail * o.est_tail,
        }
    }
}

/// An exact series converted to floating point for evaluation at points.
#[derive(Clone, Debug)]
pub struct NumericSeries {
    terms: Vec<(i64, f64)>,
    order: i64,
}

impl NumericSeries {
    pub fn new(s: &QSeries) -> Self {
        let terms = s
            .iter()
            .map(|(e, c)| (e, c.to_f64().expect("coefficient fits in f64")))
            .collect();
        Self { terms, order: s.order() }
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    /// Sum of the stored terms at `tau`. The tail estimate is heuristic: the
    /// largest coefficient among the top quarter of stored exponents, times a
    /// geometric tail `|q|^(order) / (1 - |q|^(1/24))`, times 4.
    pub fn eval(&self, tau: UpperHalfPoint) -> CompletionValue {
        let mut value = Complex64::new(0.0, 0.0);
        for &(e, c) in &self.terms {
            value += q_power(tau, e as f64 / SCALE as f64) * c;
        }
        let cut = self.order - (self.order - self.terms.first().map_or(0, |t| t.0)) / 4;
        let top = self
            .terms
            .iter()
            .filter(|(e, _)| *e >= cut)
            .map(|(_, c)| c.abs())
            .fold(0.0, f64::max);
        let qabs = (-2.0 * PI * tau.v).exp();
        let step = qabs.powf(1.0 / SCALE as f64);
        let est_tail = 4.0 * top * qabs.powf(self.order as f64 / SCALE as f64) / (1.0 - step);
        CompletionValue { value, est_tail }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_power_matches_exponential() {
        let tau = UpperHalfPoint::new(0.3, 0.7).unwrap();
        for &x in &[0.0, 1.0 / 24.0, 1.0 / 3.0, 2.5, -1.5] {
            let direct = (Complex64::new(0.0, 2.0 * PI) * tau.to_complex() * x).exp();
            assert!((q_power(tau, x) - direct).norm() < 1e-14 * direct.norm().max(1.0));
        }
    }

    #[test]
    fn rejects_lower_half_plane() {
        assert!(UpperHalfPoint::new(0.0, 0.0).is_err());
        assert!(UpperHalfPoint::new(0.0, -1.0).is_err());
    }

    #[test]
    fn geometric_series_evaluation() {
        let s = QSeries::from_integers((0..60).map(|n| (24 * n, 1)), 24 * 60);
        let tau = UpperHalfPoint::new(0.1, 1.0).unwrap();
        let q = q_power(tau, 1.0);
        let exact = Complex64::new(1.0, 0.0) / (Complex64::new(1.0, 0.0) - q);
        let got = NumericSeries::new(&s).eval(tau);
        assert!((got.value - exact).norm() <= got.est_tail.max(1e-15));
    }
}
