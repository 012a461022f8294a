//! Truncated formal series in `q^(1/24)` with exact rational coefficients.
//!
//! Exponents are stored as integers counted in units of `1/24` ("scaled
//! exponents"), so `q^(1/3)` has scaled exponent 8 and `q` has 24. Every
//! series carries an `order`: all terms with scaled exponent below it are
//! exact, and nothing at or beyond it is ever reported.
//!
//! Coefficients are kept as integer numerators over one shared positive
//! denominator. The hot kernels (convolution, binomial multiply/divide,
//! inversion) therefore run on plain big integers.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Grid denominator shared by every series.
pub const SCALE: i64 = 24;

/// Scaled exponent of `q^n`.
pub const fn q_pow(n: i64) -> i64 {
    n * SCALE
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    // sorted by exponent, no zero numerators, every exponent < order
    terms: Vec<(i64, BigInt)>,
    // positive, coprime to the gcd of all numerators
    denom: BigInt,
    order: i64,
}

impl QSeries {
    pub fn zero(order: i64) -> Self {
        Self {
            terms: Vec::new(),
            denom: BigInt::one(),
            order,
        }
    }

    pub fn one(order: i64) -> Self {
        Self::monomial(BigRational::one(), 0, order)
    }

    /// `c * q^(e/24) + O(q^(order/24))`. A term at or past the horizon is
    /// absorbed into the error term.
    pub fn monomial(c: BigRational, e: i64, order: i64) -> Self {
        if c.is_zero() || e >= order {
            return Self::zero(order);
        }
        let (numer, denom) = c.into_raw();
        Self::from_numerators(vec![(e, numer)], denom, order)
    }

    /// Builds a series from arbitrary `(scaled exponent, coefficient)` pairs.
    /// Repeated exponents are summed.
    pub fn from_coeffs<I>(coeffs: I, order: i64) -> Self
    where
        I: IntoIterator<Item = (i64, BigRational)>,
    {
        let mut merged: BTreeMap<i64, BigRational> = BTreeMap::new();
        for (e, c) in coeffs {
            if e >= order || c.is_zero() {
                continue;
            }
            *merged.entry(e).or_insert_with(BigRational::zero) += c;
        }
        let denom = merged
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let terms = merged
            .into_iter()
            .map(|(e, c)| {
                let scale = &denom / c.denom();
                (e, c.numer() * scale)
            })
            .collect();
        Self::from_numerators(terms, denom, order)
    }

    /// Integer-coefficient convenience constructor.
    pub fn from_integers<I>(coeffs: I, order: i64) -> Self
    where
        I: IntoIterator<Item = (i64, i64)>,
    {
        let mut merged: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (e, c) in coeffs {
            if e < order && c != 0 {
                *merged.entry(e).or_insert_with(BigInt::zero) += c;
            }
        }
        Self::from_numerators(merged.into_iter().collect(), BigInt::one(), order)
    }

    /// `terms` must be sorted with distinct exponents.
    fn from_numerators(mut terms: Vec<(i64, BigInt)>, mut denom: BigInt, order: i64) -> Self {
        debug_assert!(!denom.is_zero());
        debug_assert!(terms.windows(2).all(|w| w[0].0 < w[1].0));
        terms.retain(|(e, c)| *e < order && !c.is_zero());
        if denom.is_negative() {
            denom = -denom;
            for (_, c) in &mut terms {
                *c = -std::mem::take(c);
            }
        }
        if terms.is_empty() {
            denom = BigInt::one();
        } else if !denom.is_one() {
            let mut g = denom.clone();
            for (_, c) in &terms {
                g = g.gcd(c);
                if g.is_one() {
                    break;
                }
            }
            if !g.is_one() {
                denom /= &g;
                for (_, c) in &mut terms {
                    *c /= &g;
                }
            }
        }
        Self {
            terms,
            denom,
            order,
        }
    }

    /// Correctness horizon (scaled).
    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when no term survives below the horizon.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Least stored exponent.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.first().map(|(e, _)| *e)
    }

    /// Least exponent that can be nonzero: the valuation, or the horizon for
    /// a series that vanishes below it.
    fn lower_bound(&self) -> i64 {
        self.valuation().unwrap_or(self.order)
    }

    /// Shared denominator of all coefficients.
    pub fn denominator(&self) -> &BigInt {
        &self.denom
    }

    /// Numerators over [`Self::denominator`], sorted by exponent.
    pub fn numerators(&self) -> &[(i64, BigInt)] {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, BigRational)> + '_ {
        self.terms
            .iter()
            .map(move |(e, c)| (*e, BigRational::new(c.clone(), self.denom.clone())))
    }

    pub fn exponents(&self) -> impl Iterator<Item = i64> + '_ {
        self.terms.iter().map(|(e, _)| *e)
    }

    /// Exact coefficient of `q^(e/24)`.
    pub fn coeff(&self, e: i64) -> Result<BigRational> {
        if e >= self.order {
            return Err(Error::BeyondOrder {
                exponent: e,
                order: self.order,
            });
        }
        Ok(match self.terms.binary_search_by_key(&e, |(x, _)| *x) {
            Ok(i) => BigRational::new(self.terms[i].1.clone(), self.denom.clone()),
            Err(_) => BigRational::zero(),
        })
    }

    pub fn has_integer_exponents(&self) -> bool {
        self.terms.iter().all(|(e, _)| e % SCALE == 0)
    }

    fn require_integer_exponents(&self) -> Result<()> {
        match self.terms.iter().find(|(e, _)| e % SCALE != 0) {
            Some((e, _)) => Err(Error::NonIntegerExponents { exponent: *e }),
            None => Ok(()),
        }
    }

    /// gcd of all exponent differences from the valuation; 0 for at most one term.
    pub fn exponent_step(&self) -> i64 {
        let Some(v) = self.valuation() else { return 0 };
        self.terms.iter().fold(0, |g, (e, _)| g.gcd(&(e - v)))
    }

    /// Lowers the horizon to `order` if it is tighter.
    pub fn truncate(&self, order: i64) -> Self {
        let order = order.min(self.order);
        let terms = self
            .terms
            .iter()
            .take_while(|(e, _)| *e < order)
            .cloned()
            .collect();
        Self::from_numerators(terms, self.denom.clone(), order)
    }

    /// Multiplies by the exact monomial `q^(k/24)`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
            denom: self.denom.clone(),
            order: self.order + k,
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.order);
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, x)| (*e, x * c.numer()))
            .collect();
        Self::from_numerators(terms, &self.denom * c.denom(), self.order)
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&BigRational::from_integer(c.into()))
    }

    fn combine(&self, other: &Self, sign: i8) -> Self {
        let order = self.order.min(other.order);
        let denom = self.denom.lcm(&other.denom);
        let ma = &denom / &self.denom;
        let mb = &denom / &other.denom;
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len().max(b.len()));
        loop {
            let ea = a.get(i).map(|t| t.0).filter(|e| *e < order);
            let eb = b.get(j).map(|t| t.0).filter(|e| *e < order);
            let (e, c) = match (ea, eb) {
                (None, None) => break,
                (Some(x), Some(y)) if x == y => {
                    let rhs = &b[j].1 * &mb;
                    let lhs = &a[i].1 * &ma;
                    i += 1;
                    j += 1;
                    (x, if sign > 0 { lhs + rhs } else { lhs - rhs })
                }
                (Some(x), Some(y)) if x < y => {
                    i += 1;
                    (x, &a[i - 1].1 * &ma)
                }
                (Some(x), None) => {
                    i += 1;
                    (x, &a[i - 1].1 * &ma)
                }
                (_, Some(y)) => {
                    j += 1;
                    let c = &b[j - 1].1 * &mb;
                    (y, if sign > 0 { c } else { -c })
                }
            };
            if !c.is_zero() {
                out.push((e, c));
            }
        }
        Self::from_numerators(out, denom, order)
    }

    /// Exact truncated product. The result is correct below
    /// `min(T_f + v_g, T_g + v_f)` where `v` is the least exponent that can
    /// be nonzero.
    pub fn mul(&self, other: &Self) -> Self {
        let order = (self.order + other.lower_bound()).min(other.order + self.lower_bound());
        let denom = &self.denom * &other.denom;
        let (Some(va), Some(vb)) = (self.valuation(), other.valuation()) else {
            return Self::zero(order);
        };
        let lo = va + vb;
        if lo >= order {
            return Self::zero(order);
        }
        let step = self.exponent_step().gcd(&other.exponent_step());
        if step == 0 {
            let c = &self.terms[0].1 * &other.terms[0].1;
            return Self::from_numerators(vec![(lo, c)], denom, order);
        }
        let len = ((order - lo) as usize).div_ceil(step as usize);
        let mut acc = vec![BigInt::zero(); len];
        // iterate the shorter operand in the outer loop
        let (outer, inner) = if self.terms.len() <= other.terms.len() {
            (&self.terms, &other.terms)
        } else {
            (&other.terms, &self.terms)
        };
        for (ea, ca) in outer {
            for (eb, cb) in inner {
                let e = ea + eb;
                if e >= order {
                    break;
                }
                acc[((e - lo) / step) as usize] += ca * cb;
            }
        }
        let terms = acc
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (lo + k as i64 * step, c))
            .collect();
        Self::from_numerators(terms, denom, order)
    }

    /// `f * (1 + c q^(k/24))` for `k > 0`, in linear time.
    pub fn mul_binomial(&self, k: i64, c: &BigRational) -> Self {
        assert!(k > 0, "binomial exponent must be positive");
        let order = self.order;
        let (p, d) = (c.numer(), c.denom());
        let a = &self.terms;
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::with_capacity(a.len() * 2);
        loop {
            let ea = a.get(i).map(|t| t.0);
            let eb = a.get(j).map(|t| t.0 + k).filter(|e| *e < order);
            let (e, v) = match (ea, eb) {
                (None, None) => break,
                (Some(x), Some(y)) if x == y => {
                    let v = &a[i].1 * d + &a[j].1 * p;
                    i += 1;
                    j += 1;
                    (x, v)
                }
                (Some(x), Some(y)) if x < y => {
                    i += 1;
                    (x, &a[i - 1].1 * d)
                }
                (Some(x), None) => {
                    i += 1;
                    (x, &a[i - 1].1 * d)
                }
                (_, Some(y)) => {
                    j += 1;
                    (y, &a[j - 1].1 * p)
                }
            };
            if !v.is_zero() {
                out.push((e, v));
            }
        }
        Self::from_numerators(out, &self.denom * d, order)
    }

    /// `f / (1 + c q^(k/24))` for `k > 0`, by the linear recurrence
    /// `g_e = f_e - c g_(e-k)`.
    pub fn div_binomial(&self, k: i64, c: &BigRational) -> Self {
        assert!(k > 0, "binomial exponent must be positive");
        if !c.is_integer() {
            // denominators grow with every step of the recurrence
            return self.div_binomial_rational(k, c);
        }
        let p = c.numer();
        let order = self.order;
        let a = &self.terms;
        let mut out: Vec<(i64, BigInt)> = Vec::with_capacity(a.len() * 2);
        let (mut i, mut j) = (0, 0);
        loop {
            let ea = a.get(i).map(|t| t.0);
            let eb = out.get(j).map(|t| t.0 + k);
            let e = match (ea, eb) {
                (None, None) => break,
                (Some(x), None) => x,
                (None, Some(y)) => y,
                (Some(x), Some(y)) => x.min(y),
            };
            if e >= order {
                break;
            }
            let mut v = BigInt::zero();
            if ea == Some(e) {
                v += &a[i].1;
                i += 1;
            }
            if eb == Some(e) {
                v -= p * &out[j].1;
                j += 1;
            }
            if !v.is_zero() {
                out.push((e, v));
            }
        }
        Self::from_numerators(out, self.denom.clone(), order)
    }

    fn div_binomial_rational(&self, k: i64, c: &BigRational) -> Self {
        let mut out: BTreeMap<i64, BigRational> = self.iter().collect();
        let mut cursor = i64::MIN;
        while let Some((&e, v)) = out.range((cursor.saturating_add(1))..).next() {
            cursor = e;
            let next = e + k;
            if next < self.order {
                let delta = -(c * v);
                let slot = out.entry(next).or_insert_with(BigRational::zero);
                *slot += delta;
            }
        }
        Self::from_coeffs(out, self.order)
    }

    /// Multiplicative inverse. Requires a nonzero term below the horizon.
    /// The inverse of `c q^v (1 + ...)` known below `T` is known below `T - 2v`.
    pub fn inverse(&self) -> Result<Self> {
        let Some(v) = self.valuation() else {
            return Err(Error::ZeroLeadingTerm { order: self.order });
        };
        let order = self.order - 2 * v;
        let lead = &self.terms[0].1;
        let step = self.exponent_step();
        if step == 0 {
            // pure monomial: (n/d q^v)^-1 = d/n q^-v
            let inv = BigRational::new(self.denom.clone(), lead.clone());
            return Ok(Self::monomial(inv, -v, order));
        }
        let len = ((self.order - v).max(0) as usize).div_ceil(step as usize);
        // sparse view of f's tail: (index, numerator)
        let tail: Vec<(usize, &BigInt)> = self.terms[1..]
            .iter()
            .map(|(e, c)| (((e - v) / step) as usize, c))
            .take_while(|(k, _)| *k < len)
            .collect();
        // F = d f has integer numerators; F^-1 is integral when the lead is a unit.
        let terms = if lead.is_one() || (-lead).is_one() {
            let mut g: Vec<BigInt> = Vec::with_capacity(len);
            for n in 0..len {
                let mut s = if n == 0 { BigInt::one() } else { BigInt::zero() };
                for (k, c) in &tail {
                    if *k > n {
                        break;
                    }
                    s -= *c * &g[n - k];
                }
                // dividing by a unit lead is multiplying by it
                if !lead.is_one() {
                    s = -s;
                }
                g.push(s);
            }
            g.into_iter()
                .enumerate()
                .map(|(n, c)| (-v + n as i64 * step, BigRational::from_integer(c)))
                .collect::<Vec<_>>()
        } else {
            let lead_inv = BigRational::new(BigInt::one(), lead.clone());
            let mut g: Vec<BigRational> = Vec::with_capacity(len);
            for n in 0..len {
                let mut s = if n == 0 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                };
                for (k, c) in &tail {
                    if *k > n {
                        break;
                    }
                    s -= &g[n - k] * BigRational::from_integer((*c).clone());
                }
                g.push(s * &lead_inv);
            }
            g.into_iter()
                .enumerate()
                .map(|(n, c)| (-v + n as i64 * step, c))
                .collect()
        };
        // undo the scaling by the shared denominator
        let d = BigRational::from_integer(self.denom.clone());
        Ok(Self::from_coeffs(
            terms.into_iter().map(|(e, c)| (e, c * &d)),
            order,
        ))
    }

    /// `f^n` by repeated multiplication; `f^0` is 1 to `f`'s horizon.
    pub fn pow(&self, n: u32) -> Self {
        if n == 0 {
            return Self::one(self.order);
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// `f(q^r)` for a positive rational `r`. Each exponent times `r` must
    /// land on the grid; the horizon becomes `ceil(T r)`.
    pub fn substitute_power(&self, r: Rational64) -> Result<Self> {
        if *r.numer() <= 0 {
            return Err(Error::InvalidArgument(format!(
                "substitution power must be positive, got {r}"
            )));
        }
        let (num, den) = (*r.numer(), *r.denom());
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let scaled = e * num;
            if scaled % den != 0 {
                return Err(Error::OffGrid {
                    exponent: *e,
                    factor: r.to_string(),
                });
            }
            terms.push((scaled / den, c.clone()));
        }
        let order = Integer::div_ceil(&(self.order * num), &den);
        Ok(Self::from_numerators(terms, self.denom.clone(), order))
    }

    /// Sieving operator `S_{N,r}`: keeps the terms `q^n` with `n = r (mod N)`.
    pub fn sieve(&self, modulus: i64, residue: i64) -> Result<Self> {
        if modulus <= 0 {
            return Err(Error::InvalidArgument(format!(
                "sieve modulus must be positive, got {modulus}"
            )));
        }
        self.require_integer_exponents()?;
        let r = residue.rem_euclid(modulus);
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| (e / SCALE).rem_euclid(modulus) == r)
            .cloned()
            .collect();
        Ok(Self::from_numerators(terms, self.denom.clone(), self.order))
    }

    /// `f(-q)`, defined only for integer exponents.
    pub fn flip_sign(&self) -> Result<Self> {
        self.require_integer_exponents()?;
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                if (e / SCALE).rem_euclid(2) == 1 {
                    (*e, -c)
                } else {
                    (*e, c.clone())
                }
            })
            .collect();
        Ok(Self {
            terms,
            denom: self.denom.clone(),
            order: self.order,
        })
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        self.combine(rhs, 1)
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        self.combine(rhs, -1)
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        QSeries::mul(self, rhs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
            denom: self.denom.clone(),
            order: self.order,
        }
    }
}

/// Reduced fraction `e/24` as `(numerator, denominator)`.
pub fn exponent_fraction(e: i64) -> (i64, i64) {
    let g = e.gcd(&SCALE);
    (e / g, SCALE / g)
}

fn fmt_exponent(e: i64) -> String {
    match exponent_fraction(e) {
        (n, 1) => n.to_string(),
        (n, d) => format!("({n}/{d})"),
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.iter() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !mag.is_one() || e == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match e {
                0 => {}
                SCALE => write!(f, "q")?,
                _ => write!(f, "q^{}", fmt_exponent(e))?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", fmt_exponent(self.order))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn ints(s: &QSeries) -> Vec<(i64, i64)> {
        s.iter()
            .map(|(e, c)| {
                assert!(c.is_integer());
                (e, i64::try_from(c.to_integer()).unwrap())
            })
            .collect()
    }

    #[test]
    fn monomial_cases() {
        let one = QSeries::monomial(r(1), 0, 240);
        assert_eq!(ints(&one), vec![(0, 1)]);
        let third = QSeries::monomial(r(1), 8, 240);
        assert_eq!(ints(&third), vec![(8, 1)]);
        assert!(QSeries::monomial(r(0), 5, 240).is_zero());
        // a term past the horizon is part of the error term
        assert!(QSeries::monomial(r(3), 240, 240).is_zero());
    }

    #[test]
    fn geometric_series_times_one_minus_q() {
        let t = q_pow(20);
        let geo = QSeries::from_integers((0..20).map(|n| (q_pow(n), 1)), t);
        let one_minus_q = QSeries::from_integers([(0, 1), (24, -1)], t);
        let prod = &one_minus_q * &geo;
        assert_eq!(ints(&prod), vec![(0, 1)]);
        assert_eq!(prod.order(), t);
    }

    #[test]
    fn additive_inverse_and_exponent_addition() {
        let f = QSeries::from_integers([(0, 3), (8, -2), (36, 5)], 240);
        assert!((&f + &(-&f)).is_zero());
        let a = QSeries::monomial(r(1), 8, 240);
        let b = QSeries::monomial(r(1), 12, 240);
        assert_eq!(ints(&(&a * &b)), vec![(20, 1)]);
    }

    #[test]
    fn mul_horizon_is_tightest_guarantee() {
        // q^10 (1 + O(q^5)) * (1 + O(q^20)) is known below q^15
        let f = QSeries::monomial(r(1), q_pow(10), q_pow(15));
        let g = QSeries::one(q_pow(20));
        assert_eq!(f.mul(&g).order(), q_pow(15));
        // a vanishing factor still carries information
        let z = QSeries::zero(q_pow(7));
        assert_eq!(z.mul(&g).order(), q_pow(7));
        assert_eq!(z.mul(&z).order(), q_pow(14));
    }

    #[test]
    fn inverse_geometric() {
        let t = q_pow(30);
        let f = QSeries::from_integers([(0, 1), (24, -1)], t);
        let g = f.inverse().unwrap();
        assert_eq!(ints(&g), (0..30).map(|n| (q_pow(n), 1)).collect::<Vec<_>>());
        let h = QSeries::from_integers([(0, 1), (48, 1)], t);
        let expect: Vec<_> = (0..15)
            .map(|k| (q_pow(2 * k), if k % 2 == 0 { 1 } else { -1 }))
            .collect();
        assert_eq!(ints(&h.inverse().unwrap()), expect);
    }

    #[test]
    fn inverse_of_inverse_round_trip() {
        let t = q_pow(40);
        let f = QSeries::from_integers([(0, 1), (24, -2), (72, 1)], t);
        let g = f.inverse().unwrap();
        assert_eq!(ints(&f.mul(&g)), vec![(0, 1)]);
        assert_eq!(g.inverse().unwrap(), f);
    }

    #[test]
    fn inverse_with_nonunit_lead_and_leading_power() {
        let t = q_pow(12);
        // 2q^(1/3) - q^(4/3)
        let f = QSeries::from_integers([(8, 2), (32, -1)], t);
        let g = f.inverse().unwrap();
        assert_eq!(g.valuation(), Some(-8));
        assert_eq!(g.order(), t - 16);
        let prod = f.mul(&g);
        assert_eq!(prod.coeff(0).unwrap(), r(1));
        assert!(prod.iter().all(|(e, c)| e == 0 || c.is_zero()));
        assert_eq!(g.coeff(-8).unwrap(), BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn inverse_of_zero_fails() {
        let z = QSeries::zero(48);
        assert_eq!(z.inverse(), Err(Error::ZeroLeadingTerm { order: 48 }));
    }

    #[test]
    fn substitute_power_cases() {
        let t = q_pow(10);
        let f = QSeries::from_integers((0..10).map(|n| (q_pow(n), n + 1)), t);
        let half = f.substitute_power(Rational64::new(1, 2)).unwrap();
        assert_eq!(half.order(), q_pow(5));
        assert_eq!(half.coeff(12).unwrap(), r(2));
        let third = QSeries::monomial(r(1), 8, 240);
        let q = third.substitute_power(Rational64::from_integer(3)).unwrap();
        assert_eq!(ints(&q), vec![(24, 1)]);
        assert_eq!(q.order(), 720);
        let back = half.substitute_power(Rational64::from_integer(2)).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn substitute_power_off_grid() {
        let f = QSeries::monomial(r(1), 1, 240);
        assert!(matches!(
            f.substitute_power(Rational64::new(1, 2)),
            Err(Error::OffGrid { exponent: 1, .. })
        ));
    }

    #[test]
    fn sieve_basic_and_errors() {
        let f = QSeries::from_integers([(0, 1), (24, 1), (48, 1), (72, 3)], 240);
        assert_eq!(ints(&f.sieve(2, 0).unwrap()), vec![(0, 1), (48, 1)]);
        assert_eq!(ints(&f.sieve(2, -1).unwrap()), vec![(24, 1), (72, 3)]);
        let g = QSeries::monomial(r(1), 8, 240);
        assert_eq!(
            g.sieve(2, 0),
            Err(Error::NonIntegerExponents { exponent: 8 })
        );
    }

    #[test]
    fn coeff_lookups() {
        let f = QSeries::from_integers([(0, 1), (24, 2)], 240);
        assert_eq!(f.coeff(24).unwrap(), r(2));
        assert_eq!(f.coeff(12).unwrap(), r(0));
        assert_eq!(
            f.coeff(240),
            Err(Error::BeyondOrder {
                exponent: 240,
                order: 240
            })
        );
    }

    #[test]
    fn binomial_kernels_agree_with_convolution() {
        let t = q_pow(25);
        let f = QSeries::from_integers([(0, 1), (24, 3), (96, -2), (240, 7)], t);
        for (k, c) in [(24, 1), (72, -1), (48, 5)] {
            let b = QSeries::from_integers([(0, 1), (k, c)], t);
            assert_eq!(f.mul_binomial(k, &r(c)), f.mul(&b));
            assert_eq!(f.div_binomial(k, &r(c)), f.mul(&b.inverse().unwrap()));
        }
        let half = BigRational::new(1.into(), 2.into());
        let b = QSeries::from_coeffs([(0, r(1)), (48, half.clone())], t);
        assert_eq!(f.mul_binomial(48, &half), f.mul(&b));
        assert_eq!(f.div_binomial(48, &half), f.mul(&b.inverse().unwrap()));
    }

    #[test]
    fn rational_coefficients_normalize() {
        let h = BigRational::new(1.into(), 2.into());
        let f = QSeries::from_coeffs([(0, h.clone()), (24, h.clone())], 240);
        let g = f.scale_int(2);
        assert_eq!(g.denominator(), &BigInt::one());
        assert_eq!(ints(&g), vec![(0, 1), (24, 1)]);
    }

    #[test]
    fn flip_sign_is_involution() {
        let f = QSeries::from_integers([(0, 1), (24, 2), (48, 3), (72, -1)], 240);
        let g = f.flip_sign().unwrap();
        assert_eq!(ints(&g), vec![(0, 1), (24, -2), (48, 3), (72, 1)]);
        assert_eq!(g.flip_sign().unwrap(), f);
    }

    #[test]
    fn display_renders_fractions() {
        let f = QSeries::from_integers([(0, 1), (8, -2), (24, 1)], 48);
        assert_eq!(f.to_string(), "1 - 2q^(1/3) + q + O(q^2)");
    }
}
