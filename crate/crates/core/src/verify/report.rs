use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::series::{exponent_fraction, QSeries};

/// Witnesses kept per report; the first one is always the lowest failing location.
pub const MAX_WITNESSES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Numeric,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    /// Scaled horizon of an exact comparison.
    Horizon(i64),
    Tolerance(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Deviation {
    Exact(BigRational),
    Numeric(f64),
}

impl Serialize for Deviation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Deviation::Exact(r) => s.serialize_str(&r.to_string()),
            Deviation::Numeric(x) => s.serialize_f64(*x),
        }
    }
}

impl fmt::Display for Deviation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Deviation::Exact(r) => write!(f, "{r}"),
            Deviation::Numeric(x) => write!(f, "{x:.3e}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub location: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub id: String,
    pub mode: Mode,
    pub horizon_or_tol: Bound,
    pub max_deviation: Deviation,
    pub witnesses: Vec<Witness>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<IdentityReport>,
}

/// Human-readable scaled exponent, e.g. `q^(1/3)`.
pub fn fmt_q(e: i64) -> String {
    match exponent_fraction(e) {
        (n, 1) => format!("q^{n}"),
        (n, d) => format!("q^({n}/{d})"),
    }
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Coefficientwise comparison of two exact series below `horizon`.
    pub fn compare_exact(
        id: impl Into<String>,
        lhs: &QSeries,
        rhs: &QSeries,
        horizon: i64,
    ) -> Result<Self> {
        let available = lhs.order().min(rhs.order());
        if horizon > available {
            return Err(Error::BeyondOrder {
                exponent: horizon,
                order: available,
            });
        }
        let diff = lhs - rhs;
        let mut max_dev = BigRational::zero();
        let mut witnesses = Vec::new();
        for (e, d) in diff.iter().take_while(|(e, _)| *e < horizon) {
            let mag = d.abs();
            if mag > max_dev {
                max_dev = mag;
            }
            if witnesses.len() < MAX_WITNESSES {
                witnesses.push(Witness {
                    location: fmt_q(e),
                    lhs: lhs.coeff(e)?.to_string(),
                    rhs: rhs.coeff(e)?.to_string(),
                });
            }
        }
        let verdict = if witnesses.is_empty() {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Ok(Self {
            id: id.into(),
            mode: Mode::Exact,
            horizon_or_tol: Bound::Horizon(horizon),
            max_deviation: Deviation::Exact(max_dev),
            witnesses,
            verdict,
            notes: Vec::new(),
            parts: Vec::new(),
        })
    }

    /// Numeric report from `(location, lhs, rhs)` samples.
    pub fn from_residuals<I>(id: impl Into<String>, tol: f64, samples: I) -> Self
    where
        I: IntoIterator<Item = (String, Complex64, Complex64)>,
    {
        let mut max_dev = 0.0f64;
        let mut witnesses = Vec::new();
        for (loc, l, r) in samples {
            let dev = (l - r).norm();
            // NaN compares false, so it fails
            let ok = dev <= tol;
            if dev > max_dev || dev.is_nan() {
                max_dev = if dev.is_nan() { f64::NAN } else { dev };
            }
            if !ok && witnesses.len() < MAX_WITNESSES {
                witnesses.push(Witness {
                    location: loc,
                    lhs: fmt_complex(l),
                    rhs: fmt_complex(r),
                });
            }
        }
        let verdict = if witnesses.is_empty() && max_dev <= tol {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Self {
            id: id.into(),
            mode: Mode::Numeric,
            horizon_or_tol: Bound::Tolerance(tol),
            max_deviation: Deviation::Numeric(max_dev),
            witnesses,
            verdict,
            notes: Vec::new(),
            parts: Vec::new(),
        }
    }

    /// A report whose verdict is a plain predicate (counts, thresholds).
    pub fn predicate(id: impl Into<String>, ok: bool, witness: Option<Witness>) -> Self {
        Self {
            id: id.into(),
            mode: Mode::Exact,
            horizon_or_tol: Bound::Horizon(0),
            max_deviation: Deviation::Exact(BigRational::zero()),
            witnesses: if ok { Vec::new() } else { witness.into_iter().collect() },
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
            notes: Vec::new(),
            parts: Vec::new(),
        }
    }

    /// Aggregates sub-reports of one mode. Witness locations are prefixed by
    /// the part id.
    pub fn combine(id: impl Into<String>, parts: Vec<IdentityReport>) -> Self {
        assert!(!parts.is_empty(), "combine needs at least one part");
        let mode = parts[0].mode;
        let horizon_or_tol = parts
            .iter()
            .map(|p| p.horizon_or_tol)
            .reduce(|a, b| match (a, b) {
                (Bound::Horizon(x), Bound::Horizon(y)) => Bound::Horizon(x.max(y)),
                (Bound::Tolerance(x), Bound::Tolerance(y)) => Bound::Tolerance(x.max(y)),
                (a, _) => a,
            })
            .expect("nonempty");
        let max_deviation = parts
            .iter()
            .map(|p| p.max_deviation.clone())
            .reduce(|a, b| match (a, b) {
                (Deviation::Exact(x), Deviation::Exact(y)) => Deviation::Exact(x.max(y)),
                (Deviation::Numeric(x), Deviation::Numeric(y)) => {
                    Deviation::Numeric(if x.is_nan() || y.is_nan() { f64::NAN } else { x.max(y) })
                }
                (a, _) => a,
            })
            .expect("nonempty");
        let witnesses: Vec<Witness> = parts
            .iter()
            .flat_map(|p| {
                p.witnesses.iter().map(move |w| Witness {
                    location: format!("{}: {}", p.id, w.location),
                    ..w.clone()
                })
            })
            .take(MAX_WITNESSES)
            .collect();
        let verdict = if parts.iter().all(|p| p.passed()) {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Self {
            id: id.into(),
            mode,
            horizon_or_tol,
            max_deviation,
            witnesses,
            verdict,
            notes: Vec::new(),
            parts,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// Forces a failure with an extra witness (used for side conditions).
    pub fn fail_with(mut self, w: Witness) -> Self {
        self.verdict = Verdict::Fail;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(w);
        }
        self
    }

    /// First failing location, if any.
    pub fn first_witness(&self) -> Option<&Witness> {
        self.witnesses.first()
    }
}

pub fn fmt_complex(z: Complex64) -> String {
    format!("{:.15e}{:+.15e}i", z.re, z.im)
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = match self.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        };
        let bound = match self.horizon_or_tol {
            Bound::Horizon(h) => format!("horizon {}", fmt_q(h)),
            Bound::Tolerance(t) => format!("tol {t:.1e}"),
        };
        write!(
            f,
            "[{verdict}] {} ({bound}, max deviation {})",
            self.id, self.max_deviation
        )?;
        for n in &self.notes {
            write!(f, "\n    note: {n}")?;
        }
        for w in &self.witnesses {
            write!(f, "\n    at {}: lhs {} rhs {}", w.location, w.lhs, w.rhs)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_comparison_locates_first_mismatch() {
        let a = QSeries::from_integers([(0, 1), (24, 2), (48, 3)], 96);
        let b = QSeries::from_integers([(0, 1), (24, 5), (48, 3), (72, -1)], 96);
        let r = IdentityReport::compare_exact("demo", &a, &b, 96).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.first_witness().unwrap().location, "q^1");
        assert_eq!(r.max_deviation, Deviation::Exact(BigRational::from_integer(3.into())));
        let ok = IdentityReport::compare_exact("demo", &a, &a, 96).unwrap();
        assert!(ok.passed());
    }

    #[test]
    fn horizon_beyond_operands_is_an_error() {
        let a = QSeries::one(48);
        assert!(IdentityReport::compare_exact("x", &a, &a, 72).is_err());
    }

    #[test]
    fn numeric_nan_fails() {
        let r = IdentityReport::from_residuals(
            "n",
            1e-8,
            [("t".to_string(), Complex64::new(f64::NAN, 0.0), Complex64::new(0.0, 0.0))],
        );
        assert!(!r.passed());
    }

    #[test]
    fn json_shape() {
        let a = QSeries::one(48);
        let r = IdentityReport::compare_exact("x", &a, &a, 48).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["verdict"], "pass");
        assert_eq!(v["mode"], "exact");
        assert_eq!(v["max_deviation"], "0");
        assert_eq!(v["horizon_or_tol"]["horizon"], 48);
    }
}
