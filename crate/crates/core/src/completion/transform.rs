//! Residual checks of modular transformation laws at sample points.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::lattice::vartheta_numeric;
use super::{CompletionValue, UpperHalfPoint};
use crate::error::Result;
use crate::indefinite::{vec2, QuadraticForm2, ThetaCharacteristic, Vec2};
use crate::verify::report::{IdentityReport, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModularMap {
    /// `tau -> tau + 1`
    T,
    /// `tau -> tau / (2 tau + 1)`
    Gamma02Gen,
    /// `tau -> -1/tau`
    S,
    /// `tau -> -1/(2 tau)`
    S2,
}

impl ModularMap {
    pub fn apply(self, tau: UpperHalfPoint) -> UpperHalfPoint {
        let z = tau.to_complex();
        let w = match self {
            ModularMap::T => z + 1.0,
            ModularMap::Gamma02Gen => z / (z * 2.0 + 1.0),
            ModularMap::S => -z.inv(),
            ModularMap::S2 => -(z * 2.0).inv(),
        };
        UpperHalfPoint { u: w.re, v: w.im }
    }

    /// Base of the automorphy factor: `1`, `2 tau + 1`, or `-i tau`.
    pub fn automorphy_base(self, tau: UpperHalfPoint) -> Complex64 {
        let z = tau.to_complex();
        match self {
            ModularMap::T => Complex64::new(1.0, 0.0),
            ModularMap::Gamma02Gen => z * 2.0 + 1.0,
            ModularMap::S | ModularMap::S2 => Complex64::new(0.0, -1.0) * z,
        }
    }
}

impl fmt::Display for ModularMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModularMap::T => "tau+1",
            ModularMap::Gamma02Gen => "tau/(2tau+1)",
            ModularMap::S => "-1/tau",
            ModularMap::S2 => "-1/(2tau)",
        })
    }
}

/// `zeta_den^num = e^(2 pi i num/den)`, kept in lowest terms with `0 <= num < den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RootOfUnity(Rational64);

impl RootOfUnity {
    pub fn new(num: i64, den: i64) -> Self {
        let r = Rational64::new(num, den);
        Self(r - r.floor())
    }

    pub fn one() -> Self {
        Self::new(0, 1)
    }

    pub fn mul(self, o: Self) -> Self {
        let r = self.0 + o.0;
        Self(r - r.floor())
    }

    pub fn pow(self, k: i64) -> Self {
        let r = self.0 * k;
        Self(r - r.floor())
    }

    pub fn is_one(self) -> bool {
        self.0 == Rational64::from_integer(0)
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * PI * self.0.to_f64().unwrap())
    }
}

/// Monomial matrix of roots of unity (`None` is a zero entry).
#[derive(Clone, Debug, PartialEq)]
pub struct Multiplier(pub Vec<Vec<Option<RootOfUnity>>>);

impl Multiplier {
    pub fn scalar(z: RootOfUnity) -> Self {
        Self(vec![vec![Some(z)]])
    }

    pub fn diagonal(zs: &[RootOfUnity]) -> Self {
        let n = zs.len();
        Self(
            (0..n)
                .map(|i| (0..n).map(|j| (i == j).then_some(zs[i])).collect())
                .collect(),
        )
    }

    /// Permutation-like matrix from `(row, column, entry)` triples.
    pub fn from_entries(n: usize, entries: &[(usize, usize, RootOfUnity)]) -> Self {
        let mut m = vec![vec![None; n]; n];
        for &(i, j, z) in entries {
            m[i][j] = Some(z);
        }
        Self(m)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.0
            .iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .filter_map(|(z, xi)| z.map(|z| z.to_complex() * xi))
                    .sum()
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransformSpec {
    pub map: ModularMap,
    pub weight: Rational64,
    pub multiplier: Multiplier,
}

impl TransformSpec {
    pub fn new(map: ModularMap, weight: Rational64, multiplier: Multiplier) -> Self {
        Self { map, weight, multiplier }
    }

    pub fn scalar(map: ModularMap, weight: Rational64, z: RootOfUnity) -> Self {
        Self::new(map, weight, Multiplier::scalar(z))
    }

    /// `base^weight` on the principal branch.
    pub fn automorphy(&self, tau: UpperHalfPoint) -> Complex64 {
        let base = self.map.automorphy_base(tau);
        let w = self.weight;
        if w.is_integer() {
            base.powi(w.to_integer() as i32)
        } else if *w.denom() == 2 {
            base.sqrt().powi(*w.numer() as i32)
        } else {
            base.powf(w.to_f64().unwrap())
        }
    }
}

/// Something that can be evaluated at a point, possibly vector-valued.
pub trait ModularEval: Sync {
    fn eval(&self, tau: UpperHalfPoint) -> Result<Vec<CompletionValue>>;
}

impl<F> ModularEval for F
where
    F: Fn(UpperHalfPoint) -> Result<Vec<CompletionValue>> + Sync,
{
    fn eval(&self, tau: UpperHalfPoint) -> Result<Vec<CompletionValue>> {
        self(tau)
    }
}

fn values(v: &[CompletionValue]) -> Vec<Complex64> {
    v.iter().map(|c| c.value).collect()
}

/// `lhs(map tau) = multiplier * factor(tau) * rhs(tau)` at every sample point,
/// componentwise.
pub fn check_transform(
    id: impl Into<String>,
    lhs: &dyn ModularEval,
    rhs: &dyn ModularEval,
    spec: &TransformSpec,
    taus: &[UpperHalfPoint],
    tol: f64,
) -> Result<IdentityReport> {
    let rows: Vec<Vec<(String, Complex64, Complex64)>> = taus
        .par_iter()
        .map(|&tau| -> Result<_> {
            let image = spec.map.apply(tau);
            let l = values(&lhs.eval(image)?);
            let r = values(&rhs.eval(tau)?);
            let factor = spec.automorphy(tau);
            let expected: Vec<Complex64> = spec.multiplier.apply(&r).into_iter().map(|x| x * factor).collect();
            Ok(l.into_iter()
                .zip(expected)
                .enumerate()
                .map(|(k, (a, b))| (format!("tau={tau} component {}", k + 1), a, b))
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(IdentityReport::from_residuals(id, tol, rows.into_iter().flatten()))
}

/// Pointwise equality `lhs(tau) = rhs(tau)` at every sample point.
pub fn check_equal(
    id: impl Into<String>,
    lhs: &dyn ModularEval,
    rhs: &dyn ModularEval,
    taus: &[UpperHalfPoint],
    tol: f64,
) -> Result<IdentityReport> {
    let rows: Vec<Vec<(String, Complex64, Complex64)>> = taus
        .par_iter()
        .map(|&tau| -> Result<_> {
            let l = values(&lhs.eval(tau)?);
            let r = values(&rhs.eval(tau)?);
            Ok(l.into_iter()
                .zip(r)
                .enumerate()
                .map(|(k, (a, b))| (format!("tau={tau} component {}", k + 1), a, b))
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(IdentityReport::from_residuals(id, tol, rows.into_iter().flatten()))
}

/// `count` points with `u` uniform in `[-1/2, 1/2]`, `v` uniform in `[v_min, v_max]`.
pub fn sample_points(seed: u64, count: usize, v_min: f64, v_max: f64) -> Vec<UpperHalfPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| UpperHalfPoint {
            u: rng.random_range(-0.5..=0.5),
            v: rng.random_range(v_min..=v_max),
        })
        .collect()
}

fn add(x: &Vec2, y: &Vec2) -> Vec2 {
    [x[0] + y[0], x[1] + y[1]]
}

fn neg(x: &Vec2) -> Vec2 {
    [-x[0], -x[1]]
}

fn scale(x: &Vec2, s: Rational64) -> Vec2 {
    [x[0] * s, x[1] * s]
}

/// `e^(2 pi i r)` for rational `r`, reduced exactly.
fn phase(r: Rational64) -> Complex64 {
    RootOfUnity(r - r.floor()).to_complex()
}

/// Elliptic and modular laws of the indefinite theta function for the given
/// characteristic, each as a sub-report:
///
/// - `a`-periodicity under `a -> a + (1, -2)`;
/// - `b`-shift by `mu = (5/6, 1/2)` in `A^{-1} Z^2` with phase `e^(2 pi i B(a, mu))`;
/// - `(a, b) -> (-a, -b)` antisymmetry;
/// - `tau -> tau + 1` with the diagonal-vector shift, and its specialization
///   `zeta_3^2 theta_{a, b + (5/6, 1/2)}`;
/// - `tau -> -1/tau` as the sum over `A^{-1} Z^2 / Z^2`, its simplified
///   `zeta_6 tau / (2 sqrt 3)` form, and the reduced four-term form;
/// - the relation `theta_{rho(l1,l2), -a} = -zeta_3^(l1+2) theta_{rho(5-l1,l2), -a}`;
/// - `tau -> tau - 2` on the reduced coset terms (`zeta_12`);
/// - invariance under `C = diag(-1, 1)` and under the identity, and the sign
///   flip from exchanging `c1`, `c2`.
pub fn check_theta_laws(
    chars: &ThetaCharacteristic,
    taus: &[UpperHalfPoint],
    tol: f64,
) -> Result<IdentityReport> {
    let form = QuadraticForm2::hecke();
    let th_tol = tol / 100.0;
    let th = move |ch: ThetaCharacteristic, tau: UpperHalfPoint| -> Result<Complex64> {
        Ok(vartheta_numeric(&form, &ch, tau, None, th_tol)?.value)
    };
    let ch = *chars;
    let (a, b) = (ch.a, ch.b);
    let one = |x: Complex64| -> Result<Vec<CompletionValue>> { Ok(vec![CompletionValue::exact(x)]) };
    let mut parts = Vec::new();

    let lambda = vec2((1, 1), (-2, 1));
    parts.push(check_equal(
        "a-periodicity",
        &|t| one(th(ch.with_ab(add(&a, &lambda), b), t)?),
        &|t| one(th(ch, t)?),
        taus,
        tol,
    )?);

    let mu = vec2((5, 6), (1, 2));
    let mu_phase = phase(form.b_eval(&a, &mu));
    parts.push(check_equal(
        "b-shift",
        &|t| one(th(ch.with_ab(a, add(&b, &mu)), t)?),
        &|t| one(th(ch, t)? * mu_phase),
        taus,
        tol,
    )?);

    parts.push(check_equal(
        "antisymmetry",
        &|t| one(th(ch.with_ab(neg(&a), neg(&b)), t)?),
        &|t| one(-th(ch, t)?),
        taus,
        tol,
    )?);

    let shift = form.diagonal_shift();
    let t_phase = phase(-form.q_eval(&a) - form.b_eval(&shift, &a) / 2);
    let b_t = add(&add(&b, &a), &scale(&shift, Rational64::new(1, 2)));
    let unit = |map| TransformSpec::scalar(map, Rational64::from_integer(0), RootOfUnity::one());
    parts.push(check_transform(
        "translation",
        &|t| one(th(ch, t)?),
        &|t| one(th(ch.with_ab(a, b_t), t)? * t_phase),
        &unit(ModularMap::T),
        taus,
        tol,
    )?);
    if ch == ThetaCharacteristic::hecke() {
        parts.push(check_transform(
            "translation-specialized",
            &|t| one(th(ch, t)?),
            &|t| one(th(ch.with_ab(a, add(&b, &mu)), t)?),
            &TransformSpec::scalar(ModularMap::T, Rational64::from_integer(0), RootOfUnity::new(2, 3)),
            taus,
            tol,
        )?);
    }

    // tau -> -1/tau: i / sqrt(-det A) (-i tau) e^(2 pi i B(a, b)) sum_nu theta_{b + nu, -a}
    let cosets = form.dual_cosets();
    let inv_pref = Complex64::new(0.0, 1.0) / (-(form.det() as f64)).sqrt() * phase(form.b_eval(&a, &b));
    let coset_sum = |t: UpperHalfPoint| -> Result<Complex64> {
        let mut s = Complex64::new(0.0, 0.0);
        for nu in &cosets {
            s += th(ch.with_ab(add(&b, nu), neg(&a)), t)?;
        }
        Ok(s)
    };
    parts.push(check_transform(
        "inversion",
        &|t| one(th(ch, t)?),
        &|t| one(coset_sum(t)? * inv_pref),
        &TransformSpec::scalar(ModularMap::S, Rational64::from_integer(1), RootOfUnity::one()),
        taus,
        tol,
    )?);

    if ch == ThetaCharacteristic::hecke() {
        let rho = |l1: i64, l2: i64| add(&b, &vec2((l1, 6), (l2, 2)));
        let zeta6 = RootOfUnity::new(1, 6).to_complex();
        let simplified = zeta6 / (2.0 * 3f64.sqrt());
        // (-i tau)^1 * i = tau, so the prefactor is zeta_6 tau / (2 sqrt 3)
        let s_spec = TransformSpec::scalar(ModularMap::S, Rational64::from_integer(1), RootOfUnity::new(1, 4));
        parts.push(check_transform(
            "inversion-simplified",
            &|t| one(th(ch, t)?),
            &|t| {
                let mut s = Complex64::new(0.0, 0.0);
                for l1 in 0..6 {
                    for l2 in 0..2 {
                        s += th(ch.with_ab(rho(l1, l2), neg(&a)), t)?;
                    }
                }
                one(s * simplified)
            },
            &s_spec,
            taus,
            tol,
        )?);

        let coeff = |l1: i64| Complex64::new(1.0, 0.0) - RootOfUnity::new(2 * l1 + 1, 3).to_complex();
        let vanishing = RootOfUnity::new(2 + 1, 3).is_one();
        parts.push(IdentityReport::predicate(
            "vanishing-middle-coset",
            vanishing,
            Some(Witness {
                location: "l1 = 1".into(),
                lhs: "1 - zeta_3^3".into(),
                rhs: "nonzero".into(),
            }),
        ));
        parts.push(check_transform(
            "inversion-reduced",
            &|t| one(th(ch, t)?),
            &|t| {
                let mut s = Complex64::new(0.0, 0.0);
                for l1 in [0, 2] {
                    for l2 in 0..2 {
                        s += th(ch.with_ab(rho(l1, l2), neg(&a)), t)? * coeff(l1);
                    }
                }
                one(s * simplified)
            },
            &s_spec,
            taus,
            tol,
        )?);

        parts.push(check_equal(
            "coset-reflection",
            &|t| {
                let mut out = Vec::new();
                for l1 in 0..6 {
                    for l2 in 0..2 {
                        out.push(CompletionValue::exact(th(ch.with_ab(rho(l1, l2), neg(&a)), t)?));
                    }
                }
                Ok(out)
            },
            &|t| {
                let mut out = Vec::new();
                for l1 in 0..6 {
                    for l2 in 0..2 {
                        let z = -RootOfUnity::new(l1 + 2, 3).to_complex();
                        out.push(CompletionValue::exact(z * th(ch.with_ab(rho(5 - l1, l2), neg(&a)), t)?));
                    }
                }
                Ok(out)
            },
            taus,
            tol,
        )?);

        // theta_{rho, -a}(tau - 2) = zeta_12 theta_{rho, -a}(tau) for l1 in {0, 2}
        let reduced = |t: UpperHalfPoint| -> Result<Vec<CompletionValue>> {
            let mut out = Vec::new();
            for l1 in [0, 2] {
                for l2 in 0..2 {
                    out.push(CompletionValue::exact(th(ch.with_ab(rho(l1, l2), neg(&a)), t)?));
                }
            }
            Ok(out)
        };
        parts.push(check_equal(
            "reduced-terms-shift-by-two",
            &|t: UpperHalfPoint| reduced(UpperHalfPoint { u: t.u - 2.0, v: t.v }),
            &|t| {
                let z = RootOfUnity::new(1, 12).to_complex();
                Ok(reduced(t)?.into_iter().map(|c| c.scale(z)).collect())
            },
            taus,
            tol,
        )?);
    }

    let c_map = |x: &Vec2| -> Vec2 { [-x[0], x[1]] };
    let transformed = ThetaCharacteristic { a: c_map(&a), b: c_map(&b), c1: c_map(&ch.c1), c2: c_map(&ch.c2) };
    parts.push(check_equal(
        "orthogonal-invariance",
        &|t| one(th(transformed, t)?),
        &|t| one(th(ch, t)?),
        taus,
        tol,
    )?);
    parts.push(check_equal(
        "orthogonal-identity",
        &|t| one(th(ch, t)?),
        &|t| one(th(ch, t)?),
        taus,
        0.0,
    )?);
    let swapped = ThetaCharacteristic { c1: ch.c2, c2: ch.c1, ..ch };
    parts.push(check_equal(
        "cone-swap",
        &|t| one(th(swapped, t)?),
        &|t| one(-th(ch, t)?),
        taus,
        tol,
    )?);

    Ok(IdentityReport::combine("numeric:theta-laws", parts))
}
