//! Numerical indefinite theta function
//! `sum_{n in Z^2 + a} (rho^{c1} - rho^{c2})(n; tau) e^(2 pi i B(b, n)) q^Q(n)`.
//!
//! Every summand is formed in log space. For `c` in the negative cone,
//! `rho^c = sgn(B(c,n)) (1 - beta(x^2))`, and the `beta` part is combined
//! with `|q^Q(n)|` before exponentiating; the resulting exponent is
//! `-2 pi v Q_c(n)` with `Q_c(n) = Q(n) + B(c,n)^2 / (-2 Q(c))` positive
//! definite, so nothing overflows even where `Q(n) < 0`.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::special::{beta_weighted, gaussian_full, gaussian_tail};
use super::{CompletionValue, UpperHalfPoint};
use crate::error::{Error, Result};
use crate::indefinite::{ConeClass, QuadraticForm2, ThetaCharacteristic, Vec2};

const MAX_RADIUS: u32 = 400;

fn f(x: &Vec2) -> [f64; 2] {
    [x[0].to_f64().unwrap(), x[1].to_f64().unwrap()]
}

#[derive(Clone, Copy, Debug)]
struct FormF {
    a11: f64,
    a12: f64,
    a22: f64,
}

impl FormF {
    fn new(form: &QuadraticForm2) -> Self {
        Self { a11: form.a11 as f64, a12: form.a12 as f64, a22: form.a22 as f64 }
    }

    fn b(&self, x: [f64; 2], y: [f64; 2]) -> f64 {
        x[0] * (self.a11 * y[0] + self.a12 * y[1]) + x[1] * (self.a12 * y[0] + self.a22 * y[1])
    }

    fn q(&self, x: [f64; 2]) -> f64 {
        self.b(x, x) / 2.0
    }

    fn apply(&self, x: [f64; 2]) -> [f64; 2] {
        [self.a11 * x[0] + self.a12 * x[1], self.a12 * x[0] + self.a22 * x[1]]
    }
}

fn min_eigenvalue(m11: f64, m12: f64, m22: f64) -> f64 {
    let tr = m11 + m22;
    let disc = ((m11 - m22).powi(2) + 4.0 * m12 * m12).sqrt();
    (tr - disc) / 2.0
}

/// Largest `kappa` with `|summand(n)| <= 2 exp(-2 pi v kappa |n|^2)`, or `None`
/// if a `c` is isotropic (no Gaussian majorant in that direction).
fn decay_rate(form: &FormF, c1: [f64; 2], c2: [f64; 2], classes: [ConeClass; 2]) -> Option<f64> {
    if classes.contains(&ConeClass::Isotropic) {
        return None;
    }
    // where the signs of B(c1, n), B(c2, n) differ, |rho| <= 2 and Q > 0;
    // min of Q on unit vectors there, by a fine angular scan
    let steps = 7200;
    let mut mu = f64::INFINITY;
    for k in 0..steps {
        let t = PI * k as f64 / steps as f64;
        let n = [t.cos(), t.sin()];
        let s1 = form.b(c1, n).signum();
        let s2 = form.b(c2, n).signum();
        if s1 != s2 {
            mu = mu.min(form.q(n));
        }
    }
    // where they agree, each beta term is bounded by exp(-2 pi v Q_c(n))
    let mut kappa = mu;
    for c in [c1, c2] {
        let ac = form.apply(c);
        let d = -2.0 * form.q(c);
        let lam = min_eigenvalue(
            form.a11 / 2.0 + ac[0] * ac[0] / d,
            form.a12 / 2.0 + ac[0] * ac[1] / d,
            form.a22 / 2.0 + ac[1] * ac[1] / d,
        );
        kappa = kappa.min(lam);
    }
    // leave room for the angular scan's resolution
    Some(kappa * 0.98)
}

/// Gaussian-majorant bound on the terms outside the box `|n_i - o_i| <= R`,
/// where `o = a - round(a)`; `Z^2 + a = Z^2 + o`, so the box is centered.
fn lattice_tail(kappa: f64, v: f64, offset: [f64; 2], radius: u32) -> f64 {
    let c = 2.0 * PI * v * kappa;
    let full = gaussian_full(c);
    let tail: f64 = offset
        .iter()
        .map(|o| gaussian_tail(c, radius as f64 + 1.0 - o.abs()))
        .sum();
    // factor 2 from the majorant, 2 from both sides of each coordinate
    4.0 * full * tail
}

struct Prepared {
    form: FormF,
    a: [f64; 2],
    base: [i64; 2],
    b: [f64; 2],
    c: [[f64; 2]; 2],
    classes: [ConeClass; 2],
    kappa: Option<f64>,
}

impl Prepared {
    fn new(form: &QuadraticForm2, chars: &ThetaCharacteristic) -> Result<Self> {
        let classes = chars.validate(form)?;
        let ff = FormF::new(form);
        let a = f(&chars.a);
        let base = [chars.a[0].round().to_integer(), chars.a[1].round().to_integer()];
        let c = [f(&chars.c1), f(&chars.c2)];
        Ok(Self {
            form: ff,
            a,
            base,
            b: f(&chars.b),
            c,
            classes,
            kappa: decay_rate(&ff, c[0], c[1], classes),
        })
    }

    fn offset(&self) -> [f64; 2] {
        [self.a[0] - self.base[0] as f64, self.a[1] - self.base[1] as f64]
    }

    /// `(rho^{c1} - rho^{c2})(n) |q^Q(n)|` in log-safe form.
    fn weight(&self, n: [f64; 2], v: f64) -> f64 {
        let s = 2.0 * PI * v * self.form.q(n);
        let mut sgn_part = 0.0;
        let mut beta_part = 0.0;
        for (k, sign) in [(0, 1.0), (1, -1.0)] {
            let c = self.c[k];
            let bcn = self.form.b(c, n);
            let sg = if bcn > 0.0 {
                1.0
            } else if bcn < 0.0 {
                -1.0
            } else {
                0.0
            };
            sgn_part += sign * sg;
            if self.classes[k] == ConeClass::Negative && sg != 0.0 {
                let x = bcn * (v / -self.form.q(c)).sqrt();
                beta_part -= sign * sg * beta_weighted(x, s);
            }
        }
        let direct = if sgn_part == 0.0 { 0.0 } else { sgn_part * (-s).exp() };
        direct + beta_part
    }

    fn sum(&self, tau: UpperHalfPoint, radius: u32) -> (Complex64, f64) {
        let r = radius as i64;
        let off = self.offset();
        let ab = self.form.apply(self.b);
        let mut total = Complex64::new(0.0, 0.0);
        let mut shell = 0.0f64;
        for m1 in -r..=r {
            for m2 in -r..=r {
                let n = [m1 as f64 + off[0], m2 as f64 + off[1]];
                let w = self.weight(n, tau.v);
                if w == 0.0 {
                    continue;
                }
                let phase = (ab[0] * n[0] + ab[1] * n[1]).rem_euclid(1.0)
                    + (tau.u * self.form.q(n)).rem_euclid(1.0);
                let z = Complex64::from_polar(w, 2.0 * PI * phase);
                total += z;
                if m1.abs() == r || m2.abs() == r {
                    shell += w.abs();
                }
            }
        }
        (total, shell)
    }

    fn tail(&self, v: f64, radius: u32, shell: f64) -> f64 {
        match self.kappa {
            Some(k) => lattice_tail(k, v, self.offset(), radius),
            // no majorant along an isotropic direction: the outermost shell,
            // scaled by the number of shells it could repeat for
            None => shell * f64::from(radius),
        }
    }
}

/// Smallest radius whose rigorous tail bound is below `tol / 10`.
pub fn default_radius(form: &QuadraticForm2, chars: &ThetaCharacteristic, v: f64, tol: f64) -> Result<u32> {
    let p = Prepared::new(form, chars)?;
    let Some(kappa) = p.kappa else {
        return Ok(16);
    };
    let off = p.offset();
    (2..=MAX_RADIUS)
        .find(|&r| lattice_tail(kappa, v, off, r) <= tol / 10.0)
        .ok_or(Error::RadiusTooSmall { radius: MAX_RADIUS, est_tail: lattice_tail(kappa, v, off, MAX_RADIUS), tol })
}

/// Indefinite theta function at `tau`, summed over `Z^2 + a` within the box
/// of half-width `radius` around `a` (chosen automatically from `tol` when
/// `None`).
pub fn vartheta_numeric(
    form: &QuadraticForm2,
    chars: &ThetaCharacteristic,
    tau: UpperHalfPoint,
    radius: Option<u32>,
    tol: f64,
) -> Result<CompletionValue> {
    let p = Prepared::new(form, chars)?;
    let radius = match radius {
        Some(r) => r.max(1),
        None => default_radius(form, chars, tau.v, tol)?,
    };
    let (value, shell) = p.sum(tau, radius);
    let est_tail = p.tail(tau.v, radius, shell);
    if est_tail > tol {
        return Err(Error::RadiusTooSmall { radius, est_tail, tol });
    }
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::EvaluationFailure {
            re: tau.u,
            im: tau.v,
            reason: "non-finite lattice sum".into(),
        });
    }
    Ok(CompletionValue { value, est_tail })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::completion::CompletionEngine;
    use crate::indefinite::vec2;

    fn pt(u: f64, v: f64) -> UpperHalfPoint {
        UpperHalfPoint::new(u, v).unwrap()
    }

    #[test]
    fn decay_rate_for_hecke_form() {
        let form = FormF::new(&QuadraticForm2::hecke());
        let k = decay_rate(&form, [1.0, 3.0], [-1.0, 3.0], [ConeClass::Negative; 2]).unwrap();
        // min(1, 4 - sqrt 13) with the 2% margin
        assert!((k - 0.98 * (4.0 - 13f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn matches_completed_hecke_sum_at_i() {
        let engine = CompletionEngine::new(60);
        let tau = pt(0.0, 1.0);
        let via_theta = engine.h_hat_via_theta(tau, Some(12), 1e-8).unwrap();
        let direct = engine.h_hat(tau).unwrap();
        assert!((via_theta.value - direct.value).norm() < 1e-8);
    }

    #[test]
    fn antisymmetry_and_periodicity() {
        let form = QuadraticForm2::hecke();
        let ch = ThetaCharacteristic::hecke();
        let tau = pt(0.0, 1.5);
        let base = vartheta_numeric(&form, &ch, tau, None, 1e-12).unwrap().value;
        let neg = ch.with_ab([-ch.a[0], -ch.a[1]], [-ch.b[0], -ch.b[1]]);
        let flipped = vartheta_numeric(&form, &neg, tau, None, 1e-12).unwrap().value;
        assert!((base + flipped).norm() < 1e-8);
        let moved = ch.with_ab([ch.a[0] + 1, ch.a[1] - 2], ch.b);
        let shifted = vartheta_numeric(&form, &moved, tau, None, 1e-12).unwrap().value;
        assert!((base - shifted).norm() < 1e-8);
    }

    #[test]
    fn growing_radius_stays_within_tail() {
        let form = QuadraticForm2::hecke();
        let ch = ThetaCharacteristic::hecke().with_ab(vec2((1, 3), (0, 1)), vec2((1, 12), (-1, 4)));
        let tau = pt(0.3, 0.6);
        for r in [6u32, 8, 10] {
            let a = vartheta_numeric(&form, &ch, tau, Some(r), 1.0).unwrap();
            let b = vartheta_numeric(&form, &ch, tau, Some(r + 2), 1.0).unwrap();
            assert!((a.value - b.value).norm() <= a.est_tail, "R = {r}");
        }
    }

    #[test]
    fn small_radius_is_reported() {
        let r = vartheta_numeric(&QuadraticForm2::hecke(), &ThetaCharacteristic::hecke(), pt(0.0, 0.5), Some(1), 1e-10);
        assert!(matches!(r, Err(Error::RadiusTooSmall { .. })));
    }
}
