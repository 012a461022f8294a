//! The Hecke-type double sum `H(q)`, its cone rearrangement, and the
//! quadratic-form data of the indefinite theta function it completes to.

use num_rational::Rational64;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::series::{q_pow, QSeries, SCALE};

pub type Vec2 = [Rational64; 2];

pub fn vec2(x: (i64, i64), y: (i64, i64)) -> Vec2 {
    [Rational64::new(x.0, x.1), Rational64::new(y.0, y.1)]
}

fn ivec(x: i64, y: i64) -> Vec2 {
    [Rational64::from_integer(x), Rational64::from_integer(y)]
}

/// `Q(x) = x^T A x / 2` for a symmetric integer matrix `A` of signature (1,1).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadraticForm2 {
    pub a11: i64,
    pub a12: i64,
    pub a22: i64,
}

impl QuadraticForm2 {
    pub fn new(a11: i64, a12: i64, a22: i64) -> Result<Self> {
        if a11 * a22 - a12 * a12 >= 0 {
            return Err(Error::InvalidArgument(format!(
                "matrix [[{a11}, {a12}], [{a12}, {a22}]] is not of signature (1,1)"
            )));
        }
        Ok(Self { a11, a12, a22 })
    }

    /// `Q(n) = 3n1^2 - n2^2`, i.e. `A = diag(6, -2)`.
    pub fn hecke() -> Self {
        Self { a11: 6, a12: 0, a22: -2 }
    }

    pub fn det(&self) -> i64 {
        self.a11 * self.a22 - self.a12 * self.a12
    }

    pub fn apply(&self, x: &Vec2) -> Vec2 {
        [
            x[0] * self.a11 + x[1] * self.a12,
            x[0] * self.a12 + x[1] * self.a22,
        ]
    }

    pub fn b_eval(&self, x: &Vec2, y: &Vec2) -> Rational64 {
        let ay = self.apply(y);
        x[0] * ay[0] + x[1] * ay[1]
    }

    pub fn q_eval(&self, x: &Vec2) -> Rational64 {
        self.b_eval(x, x) / 2
    }

    pub fn inverse_apply(&self, x: &Vec2) -> Vec2 {
        let d = self.det();
        [
            (x[0] * self.a22 - x[1] * self.a12) / d,
            (x[1] * self.a11 - x[0] * self.a12) / d,
        ]
    }

    /// `A^{-1} A*`, where `A*` is the vector of diagonal entries.
    pub fn diagonal_shift(&self) -> Vec2 {
        self.inverse_apply(&ivec(self.a11, self.a22))
    }

    /// Representatives of `A^{-1} Z^2 / Z^2`, one per class.
    pub fn dual_cosets(&self) -> Vec<Vec2> {
        let d = self.det().abs();
        let mut reps: Vec<Vec2> = Vec::new();
        for x in 0..d {
            for y in 0..d {
                let mut v = self.inverse_apply(&ivec(x, y));
                for c in &mut v {
                    *c -= c.floor();
                }
                if !reps.contains(&v) {
                    reps.push(v);
                }
            }
        }
        reps.sort();
        reps
    }

    /// Whether `mu` lies in `A^{-1} Z^2`.
    pub fn in_dual_lattice(&self, mu: &Vec2) -> bool {
        self.apply(mu).iter().all(|c| c.is_integer())
    }
}

/// Cone class of a vector relative to the form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConeClass {
    /// `Q(c) < 0`.
    Negative,
    /// Primitive integer vector with `Q(c) = 0`.
    Isotropic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ThetaCharacteristic {
    pub a: Vec2,
    pub b: Vec2,
    pub c1: Vec2,
    pub c2: Vec2,
}

impl ThetaCharacteristic {
    /// `a = (1/3, 0)`, `b = (1/12, -1/4)`, `c1 = (1, 3)`, `c2 = (-1, 3)`.
    pub fn hecke() -> Self {
        Self {
            a: vec2((1, 3), (0, 1)),
            b: vec2((1, 12), (-1, 4)),
            c1: ivec(1, 3),
            c2: ivec(-1, 3),
        }
    }

    pub fn with_ab(&self, a: Vec2, b: Vec2) -> Self {
        Self { a, b, ..*self }
    }

    fn classify(form: &QuadraticForm2, c: &Vec2) -> Result<ConeClass> {
        let q = form.q_eval(c);
        if q < Rational64::zero() {
            return Ok(ConeClass::Negative);
        }
        if q.is_zero() && c.iter().all(|x| x.is_integer()) {
            let g = num_integer::gcd(c[0].to_integer(), c[1].to_integer());
            if g == 1 {
                return Ok(ConeClass::Isotropic);
            }
        }
        Err(Error::InvalidCharacteristic(format!(
            "({}, {}) is neither negative nor primitive isotropic (Q = {q})",
            c[0], c[1]
        )))
    }

    /// Cone classes of `(c1, c2)` after checking that both lie in the
    /// closure of one component and that `a`, `b` avoid the excluded set
    /// for isotropic `c`.
    pub fn validate(&self, form: &QuadraticForm2) -> Result<[ConeClass; 2]> {
        let k1 = Self::classify(form, &self.c1)?;
        let k2 = Self::classify(form, &self.c2)?;
        if form.b_eval(&self.c1, &self.c2) >= Rational64::zero() {
            return Err(Error::InvalidCharacteristic(
                "c1 and c2 do not lie in the same component".into(),
            ));
        }
        for (k, c) in [(k1, &self.c1), (k2, &self.c2)] {
            if k == ConeClass::Isotropic && form.b_eval(c, &self.a).is_integer() {
                return Err(Error::InvalidCharacteristic(format!(
                    "B(c, a) is an integer for isotropic c = ({}, {})",
                    c[0], c[1]
                )));
            }
        }
        Ok([k1, k2])
    }
}

/// Sign of `B(c, n)` with `sgn(0) = 0`.
pub fn sgn_factor(form: &QuadraticForm2, c: &Vec2, n: &Vec2) -> i8 {
    let b = form.b_eval(c, n);
    if b.is_positive() {
        1
    } else if b.is_negative() {
        -1
    } else {
        0
    }
}

/// Integer-exponent accumulator below `horizon`, one slot per power of q.
struct Acc {
    coeffs: Vec<i64>,
    horizon: i64,
}

impl Acc {
    fn new(horizon: i64) -> Self {
        let slots = (horizon.max(0) + SCALE - 1) / SCALE;
        Self { coeffs: vec![0; slots as usize], horizon }
    }

    fn add(&mut self, e: i64, c: i64) {
        debug_assert!(e >= 0);
        if let Some(slot) = self.coeffs.get_mut(e as usize) {
            *slot += c;
        }
    }

    fn limit(&self) -> i64 {
        self.coeffs.len() as i64
    }

    fn finish(self) -> QSeries {
        QSeries::from_integers(
            self.coeffs
                .into_iter()
                .enumerate()
                .filter(|(_, c)| *c != 0)
                .map(|(n, c)| (q_pow(n as i64), c)),
            self.horizon,
        )
    }
}

fn parity(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `H(q) = sum_{n>=0} (-1)^n q^(3n^2+2n) (1 + q^(2n+1)) sum_{|j|<=n} (-1)^j q^(-j^2)`.
///
/// The least exponent of the n-th outer term is `2n^2 + 2n`.
pub fn h_series(horizon: i64) -> QSeries {
    let mut acc = Acc::new(horizon);
    let lim = acc.limit();
    let mut n = 0i64;
    while 2 * n * n + 2 * n < lim {
        for j in -n..=n {
            let s = parity(n + j);
            acc.add(3 * n * n + 2 * n - j * j, s);
            acc.add(3 * n * n + 4 * n + 1 - j * j, s);
        }
        n += 1;
    }
    acc.finish()
}

/// The double sum in the original variable, i.e. `H(q^2)` summed directly:
/// `sum_{n>=0} (-1)^n q^(6n^2+4n) (1 + q^(4n+2)) sum_{|j|<=n} (-1)^j q^(-2j^2)`.
pub fn double_sum_original(horizon: i64) -> QSeries {
    let mut acc = Acc::new(horizon);
    let lim = acc.limit();
    let mut n = 0i64;
    while 4 * n * n + 4 * n < lim {
        for j in -n..=n {
            let s = parity(n + j);
            acc.add(6 * n * n + 4 * n - 2 * j * j, s);
            acc.add(6 * n * n + 8 * n + 2 - 2 * j * j, s);
        }
        n += 1;
    }
    acc.finish()
}

/// Least exponent of the backward cone `n + j < 0, n - j < 0` of
/// `3n^2 - j^2 + 2n`, over the outer index `m = -n` (attained at `|j| = m - 1`).
fn backward_cone_min(m: i64) -> i64 {
    2 * m * m - 1
}

/// `(sum_{n+j>=0, n-j>=0} - sum_{n+j<0, n-j<0}) (-1)^(n+j) q^(3n^2-j^2+2n)`.
///
/// This is the holomorphic content of the indefinite theta function for the
/// Hecke characteristic only; other characteristics have no exact path.
pub fn cone_sum_series(chars: &ThetaCharacteristic, horizon: i64) -> Result<QSeries> {
    if *chars != ThetaCharacteristic::hecke() {
        return Err(Error::UnsupportedCharacteristic);
    }
    let mut acc = Acc::new(horizon);
    let lim = acc.limit();
    // forward cone: n >= |j|, least exponent 2n^2 + 2n
    let mut n = 0i64;
    while 2 * n * n + 2 * n < lim {
        for j in -n..=n {
            acc.add(3 * n * n - j * j + 2 * n, parity(n + j));
        }
        n += 1;
    }
    // backward cone: n = -m with m >= |j| + 1
    let mut m = 1i64;
    while backward_cone_min(m) < lim {
        for j in -(m - 1)..=(m - 1) {
            acc.add(3 * m * m - j * j - 2 * m, -parity(m + j));
        }
        m += 1;
    }
    Ok(acc.finish())
}

/// Lowest exponent reached by the backward cone, by direct scan over a box.
pub fn backward_cone_min_scan(bound: i64) -> i64 {
    let mut best = i64::MAX;
    for n in -bound..0 {
        for j in -bound..=bound {
            if n + j < 0 && n - j < 0 {
                best = best.min(3 * n * n - j * j + 2 * n);
            }
        }
    }
    best
}
