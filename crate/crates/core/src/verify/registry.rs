//! Every checkable identity under a stable id, runnable by selector.

use std::sync::OnceLock;

use num_complex::Complex64;
use num_rational::Rational64;
use rayon::prelude::*;

use super::report::{Bound, Deviation, IdentityReport, Mode, Witness};
use super::{check_main_theorem, check_sturm_route, DEFAULT_HORIZON};
use crate::completion::mock::{a_minus, a_star, eta, script_e, t_vector, theta};
use crate::completion::transform::{
    check_equal, check_theta_laws, check_transform, sample_points, ModularEval, ModularMap, Multiplier,
    RootOfUnity, TransformSpec,
};
use crate::completion::{CompletionEngine, CompletionValue, NumericSeries, UpperHalfPoint};
use crate::error::{Error, Result};
use crate::etatheta::{eta_series, eta6_2_over_eta4, eta_theta_reports, theta_series};
use crate::genfun::{
    a_series, check_a1_eta_quotient, check_a_holomorphic_decomposition, check_a_split, check_c_factorization,
    check_ck_limit, check_s_mock_decomposition,
};
use crate::indefinite::{cone_sum_series, h_series, ThetaCharacteristic};
use crate::series::q_pow;

pub const UNKNOWN_SELECTOR_HINT: &str = "expected an identity id, `exact:*`, `numeric:*` or `*`";

/// Run parameters shared by all registry entries.
#[derive(Clone, Debug)]
pub struct Config {
    /// Scaled horizon for exact checks.
    pub horizon: i64,
    /// Absolute tolerance for numeric checks.
    pub tol: f64,
    pub seed: u64,
    pub samples: usize,
    /// Integer `q`-powers kept in the numeric holomorphic parts.
    pub engine_terms: u32,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            horizon: DEFAULT_HORIZON,
            tol: 1e-8,
            seed: 20_240_601,
            samples: 10,
            engine_terms: CompletionEngine::DEFAULT_TERMS,
        }
    }
}

/// Checks that stay meaningful only at tighter tolerance regardless of the run's.
const DIFFERENCE_TOL: f64 = 1e-10;
const AGREEMENT_TOL: f64 = 1e-10;

struct Context {
    config: Config,
    taus: Vec<UpperHalfPoint>,
    engine: OnceLock<CompletionEngine>,
}

impl Context {
    fn new(config: &Config) -> Self {
        Self {
            taus: sample_points(config.seed, config.samples, 0.5, 2.0),
            config: config.clone(),
            engine: OnceLock::new(),
        }
    }

    fn engine(&self) -> &CompletionEngine {
        self.engine.get_or_init(|| CompletionEngine::new(self.config.engine_terms))
    }
}

struct Entry {
    id: &'static str,
    mode: Mode,
    run: fn(&Context) -> Result<IdentityReport>,
}

const ENTRIES: &[Entry] = &[
    Entry { id: "exact:main-identity", mode: Mode::Exact, run: main_identity },
    Entry { id: "exact:sturm-vanishing", mode: Mode::Exact, run: sturm_vanishing },
    Entry { id: "exact:s-mock-decomposition", mode: Mode::Exact, run: |c| check_s_mock_decomposition(c.config.horizon) },
    Entry { id: "exact:a-split-reassembly", mode: Mode::Exact, run: |c| check_a_split(c.config.horizon) },
    Entry { id: "exact:a1-eta-quotient", mode: Mode::Exact, run: |c| check_a1_eta_quotient(c.config.horizon) },
    Entry { id: "exact:theta-eta-quotient", mode: Mode::Exact, run: |c| eta_theta_part(c, 0) },
    Entry { id: "exact:shifted-theta-eta-quotient", mode: Mode::Exact, run: |c| eta_theta_part(c, 1) },
    Entry { id: "exact:odd-squares-eta-quotient", mode: Mode::Exact, run: |c| eta_theta_part(c, 2) },
    Entry { id: "exact:hecke-cone-rearrangement", mode: Mode::Exact, run: cone_rearrangement },
    Entry {
        id: "exact:a-holomorphic-decomposition",
        mode: Mode::Exact,
        run: |c| check_a_holomorphic_decomposition(c.config.horizon),
    },
    Entry { id: "exact:c-factorization", mode: Mode::Exact, run: |c| check_c_factorization(c.config.horizon) },
    Entry { id: "exact:ck-stabilization", mode: Mode::Exact, run: ck_stabilization },
    Entry { id: "numeric:hecke-indefinite-theta", mode: Mode::Numeric, run: hecke_indefinite_theta },
    Entry { id: "numeric:a-nonholomorphic-match", mode: Mode::Numeric, run: a_nonholomorphic_match },
    Entry { id: "numeric:a-completion-decomposition", mode: Mode::Numeric, run: a_completion_decomposition },
    Entry { id: "numeric:completion-difference", mode: Mode::Numeric, run: completion_difference },
    Entry { id: "numeric:a-hat-transforms", mode: Mode::Numeric, run: a_hat_transforms },
    Entry { id: "numeric:h-hat-transforms", mode: Mode::Numeric, run: h_hat_transforms },
    Entry { id: "numeric:f-hat-transforms", mode: Mode::Numeric, run: f_hat_transforms },
    Entry { id: "numeric:t-vector-transforms", mode: Mode::Numeric, run: t_vector_transforms },
    Entry { id: "numeric:eta-transforms", mode: Mode::Numeric, run: eta_transforms },
    Entry { id: "numeric:theta-transforms", mode: Mode::Numeric, run: theta_transforms },
    Entry {
        id: "numeric:theta-laws",
        mode: Mode::Numeric,
        run: |c| check_theta_laws(&ThetaCharacteristic::hecke(), &c.taus, c.config.tol),
    },
    Entry { id: "numeric:series-direct-agreement", mode: Mode::Numeric, run: series_direct_agreement },
    Entry { id: "numeric:a-hat-bounded-near-zero", mode: Mode::Numeric, run: a_hat_bounded_near_zero },
];

/// All registered ids with their mode, in registry order.
pub fn identity_ids() -> Vec<(&'static str, Mode)> {
    ENTRIES.iter().map(|e| (e.id, e.mode)).collect()
}

fn select(selector: &str) -> Result<Vec<&'static Entry>> {
    let picked: Vec<&Entry> = match selector {
        "*" => ENTRIES.iter().collect(),
        "exact:*" => ENTRIES.iter().filter(|e| e.mode == Mode::Exact).collect(),
        "numeric:*" => ENTRIES.iter().filter(|e| e.mode == Mode::Numeric).collect(),
        id => ENTRIES.iter().filter(|e| e.id == id).collect(),
    };
    if picked.is_empty() {
        return Err(Error::UnknownIdentity(selector.to_string()));
    }
    Ok(picked)
}

/// Runs every entry matched by `selector` in parallel, in registry order.
/// A check that errors out becomes a failing report carrying the error.
pub fn run_registry(selector: &str, config: &Config) -> Result<Vec<IdentityReport>> {
    let entries = select(selector)?;
    let ctx = Context::new(config);
    Ok(entries
        .par_iter()
        .map(|e| match (e.run)(&ctx) {
            Ok(mut r) => {
                r.id = e.id.to_string();
                r
            }
            Err(err) => {
                let mut r = IdentityReport::predicate(
                    e.id,
                    false,
                    Some(Witness { location: "evaluation".into(), lhs: err.to_string(), rhs: String::new() }),
                );
                r.mode = e.mode;
                r
            }
        })
        .collect())
}

fn main_identity(c: &Context) -> Result<IdentityReport> {
    check_main_theorem(c.config.horizon)
}

fn sturm_vanishing(c: &Context) -> Result<IdentityReport> {
    // the route only looks below q^4
    let t = c.config.horizon.min(q_pow(8));
    check_sturm_route(&h_series(t), &a_series(t))
}

fn eta_theta_part(c: &Context, k: usize) -> Result<IdentityReport> {
    // these live in the original variable, so they run to twice the horizon
    Ok(eta_theta_reports(2 * c.config.horizon)?.swap_remove(k))
}

fn cone_rearrangement(c: &Context) -> Result<IdentityReport> {
    let t = c.config.horizon;
    IdentityReport::compare_exact(
        "exact:hecke-cone-rearrangement",
        &cone_sum_series(&ThetaCharacteristic::hecke(), t)?,
        &h_series(t),
        t,
    )
}

fn ck_stabilization(c: &Context) -> Result<IdentityReport> {
    let t = c.config.horizon.min(q_pow(80));
    let parts = (1..=5).map(|k| check_ck_limit(k, t)).collect::<Result<Vec<_>>>()?;
    Ok(IdentityReport::combine("exact:ck-stabilization", parts))
}

fn one(v: CompletionValue) -> Result<Vec<CompletionValue>> {
    Ok(vec![v])
}

fn hecke_indefinite_theta(c: &Context) -> Result<IdentityReport> {
    let e = c.engine();
    let tol = c.config.tol;
    check_equal(
        "numeric:hecke-indefinite-theta",
        &|t| one(e.h_hat(t)?),
        &|t| one(e.h_hat_via_theta(t, None, tol / 100.0)?),
        &c.taus,
        tol,
    )
}

fn a_nonholomorphic_match(c: &Context) -> Result<IdentityReport> {
    check_equal(
        "numeric:a-nonholomorphic-match",
        &|t| one(a_minus(t, None)?),
        &|t| one(a_star(t, None)?),
        &c.taus,
        c.config.tol,
    )
}

fn a_completion_decomposition(c: &Context) -> Result<IdentityReport> {
    let e = c.engine();
    check_equal(
        "numeric:a-completion-decomposition",
        &|t| one(e.a_hat(t)?),
        &|t| one(e.a_hat_via_f(t)?),
        &c.taus,
        c.config.tol,
    )
}

fn completion_difference(c: &Context) -> Result<IdentityReport> {
    let e = c.engine();
    let tol = DIFFERENCE_TOL.min(c.config.tol);
    let same_route = check_equal("series-route", &|t| one(e.h_hat(t)?), &|t| one(e.a_hat(t)?), &c.taus, tol)?;
    // the lattice sum for H^ against the F^ decomposition of A^: no shared code
    let independent = check_equal(
        "independent-routes",
        &|t| one(e.h_hat_via_theta(t, None, tol / 100.0)?),
        &|t| one(e.a_hat_via_f(t)?),
        &c.taus,
        tol,
    )?;
    Ok(IdentityReport::combine("numeric:completion-difference", vec![same_route, independent]))
}

fn z(num: i64, den: i64) -> RootOfUnity {
    RootOfUnity::new(num, den)
}

fn w(num: i64, den: i64) -> Rational64 {
    Rational64::new(num, den)
}

fn scalar_laws(
    c: &Context,
    name: &str,
    f: &dyn ModularEval,
    laws: &[(ModularMap, Rational64, RootOfUnity)],
) -> Result<Vec<IdentityReport>> {
    laws.iter()
        .map(|&(map, weight, mult)| {
            let spec = TransformSpec::scalar(map, weight, mult);
            check_transform(format!("{name} under {map}"), f, f, &spec, &c.taus, c.config.tol)
        })
        .collect()
}

fn a_hat_transforms(c: &Context) -> Result<IdentityReport> {
    let e = c.engine();
    let laws = [(ModularMap::T, w(0, 1), z(1, 3)), (ModularMap::Gamma02Gen, w(1, 1), z(1, 12))];
    let mut parts = scalar_laws(c, "A^", &|t| one(e.a_hat(t)?), &laws)?;
    parts.extend(scalar_laws(c, "eta^6(2tau)/eta^4(tau)", &|t| one(script_e(t)), &laws)?);
    Ok(IdentityReport::combine("numeric:a-hat-transforms", parts))
}

fn h_hat_transforms(c: &Context) -> Result<IdentityReport> {
    let e = c.engine();
    let laws = [(ModularMap::T, w(0, 1), z(1, 3)), (ModularMap::Gamma02Gen, w(1, 1), z(1, 12))];
    Ok(IdentityReport::combine(
        "numeric:h-hat-transforms",
        scalar_laws(c, "H^", &|t| one(e.h_hat(t)?), &laws)?,
    ))
}

fn vector_laws(
    c: &Context,
    name: &str,
    f: &dyn ModularEval,
    laws: Vec<(ModularMap, Multiplier)>,
) -> Result<Vec<IdentityReport>> {
    laws.into_iter()
        .map(|(map, m)| {
            let weight = if map == ModularMap::T { w(0, 1) } else { w(1, 2) };
            let spec = TransformSpec::new(map, weight, m);
            check_transform(format!("{name} under {map}"), f, f, &spec, &c.taus, c.config.tol)
        })
        .collect()
}

fn f_hat_transforms(c: &Context) -> Result<IdentityReport> {
    let e = c.engine();
    let one_ = RootOfUnity::one();
    let laws = vec![
        (ModularMap::T, Multiplier::from_entries(3, &[(0, 0, z(-1, 24)), (1, 2, z(1, 3)), (2, 1, z(1, 3))])),
        (ModularMap::S, Multiplier::from_entries(3, &[(0, 1, one_), (1, 0, one_), (2, 2, z(1, 2))])),
        (ModularMap::Gamma02Gen, Multiplier::diagonal(&[z(1, 3), z(1, 12), z(1, 3)])),
    ];
    let parts = vector_laws(c, "F^", &|t| Ok(e.f_hat_vector(t)?.to_vec()), laws)?;
    Ok(IdentityReport::combine("numeric:f-hat-transforms", parts))
}

fn t_vector_transforms(c: &Context) -> Result<IdentityReport> {
    let one_ = RootOfUnity::one();
    let laws = vec![
        (ModularMap::T, Multiplier::from_entries(3, &[(0, 1, one_), (1, 0, one_), (2, 2, z(1, 8))])),
        (ModularMap::S, Multiplier::from_entries(3, &[(0, 0, one_), (1, 2, one_), (2, 1, one_)])),
        (ModularMap::Gamma02Gen, Multiplier::diagonal(&[one_, z(3, 4), one_])),
    ];
    let parts = vector_laws(c, "T", &|t| Ok(t_vector(t).to_vec()), laws)?;
    Ok(IdentityReport::combine("numeric:t-vector-transforms", parts))
}

fn eta_transforms(c: &Context) -> Result<IdentityReport> {
    let laws = [(ModularMap::T, w(0, 1), z(1, 24)), (ModularMap::S, w(1, 2), RootOfUnity::one())];
    Ok(IdentityReport::combine("numeric:eta-transforms", scalar_laws(c, "eta", &|t| one(eta(t)), &laws)?))
}

fn theta_transforms(c: &Context) -> Result<IdentityReport> {
    let tol = c.config.tol;
    let th = |t| one(theta(t));
    let periodic = check_transform(
        "Theta under tau+1",
        &th,
        &th,
        &TransformSpec::scalar(ModularMap::T, w(0, 1), RootOfUnity::one()),
        &c.taus,
        tol,
    )?;
    // Theta(-1/(2 tau)) = sqrt(-i tau) Theta(tau/2)
    let inversion = check_transform(
        "Theta under -1/(2tau)",
        &th,
        &|t: UpperHalfPoint| one(theta(t.affine(0.0, 2.0))),
        &TransformSpec::scalar(ModularMap::S2, w(1, 2), RootOfUnity::one()),
        &c.taus,
        tol,
    )?;
    Ok(IdentityReport::combine("numeric:theta-transforms", vec![periodic, inversion]))
}

fn series_direct_agreement(c: &Context) -> Result<IdentityReport> {
    let taus = sample_points(c.config.seed.wrapping_add(1), c.config.samples, 0.8, 2.0);
    let t = q_pow(60);
    let pairs: [(&str, NumericSeries, fn(UpperHalfPoint) -> CompletionValue); 3] = [
        ("Theta", NumericSeries::new(&theta_series(t)), theta),
        ("eta", NumericSeries::new(&eta_series(1, t)), eta),
        ("eta^6(2tau)/eta^4(tau)", NumericSeries::new(&eta6_2_over_eta4(t)), script_e),
    ];
    let tol = AGREEMENT_TOL.min(c.config.tol);
    let parts = pairs
        .iter()
        .map(|(name, series, direct)| {
            let rows = taus.iter().map(|&tau| {
                let s: Complex64 = series.eval(tau).value;
                (format!("tau={tau}"), s, direct(tau).value)
            });
            IdentityReport::from_residuals(*name, tol, rows)
        })
        .collect();
    Ok(IdentityReport::combine("numeric:series-direct-agreement", parts))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique_and_prefixed() {
        let ids = identity_ids();
        let mut names: Vec<_> = ids.iter().map(|(id, _)| *id).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), ids.len());
        for (id, mode) in ids {
            let prefix = if mode == Mode::Exact { "exact:" } else { "numeric:" };
            assert!(id.starts_with(prefix), "{id}");
        }
    }

    #[test]
    fn unknown_selector_is_an_error() {
        let err = run_registry("exact:nonsense", &Config::default()).unwrap_err();
        assert_eq!(err, Error::UnknownIdentity("exact:nonsense".into()));
    }

    #[test]
    fn small_exact_run_passes() {
        let config = Config { horizon: q_pow(40), ..Config::default() };
        for r in run_registry("exact:*", &config).unwrap() {
            assert!(r.passed(), "{r}");
        }
    }
}

/// Heights on the imaginary axis for the approach to the cusp 0.
const CUSP_HEIGHTS: [f64; 6] = [0.5, 0.2, 0.1, 0.05, 0.03, 0.02];
const CUSP_BOUND: f64 = 1.0;

/// Spot check that `A^(iy)` stays bounded as `y -> 0`. Sampling only; it
/// certifies nothing about growth between or below the sampled heights.
fn a_hat_bounded_near_zero(_: &Context) -> Result<IdentityReport> {
    // q-expansions need more terms this close to the real axis
    let engine = CompletionEngine::new(1000);
    let mut worst: Option<Witness> = None;
    let mut max = 0.0f64;
    for y in CUSP_HEIGHTS {
        let tau = UpperHalfPoint::new(0.0, y)?;
        let v = engine.a_hat(tau)?;
        let size = v.value.norm() + v.est_tail;
        if size > max {
            max = size;
            worst = Some(Witness {
                location: format!("tau={tau}"),
                lhs: format!("|A^| = {:.3e}", v.value.norm()),
                rhs: format!("bound {CUSP_BOUND}"),
            });
        }
    }
    let mut r = IdentityReport::predicate("numeric:a-hat-bounded-near-zero", max <= CUSP_BOUND, worst)
        .with_note(format!("heights y in {CUSP_HEIGHTS:?}; sampled, not certified"));
    r.mode = Mode::Numeric;
    r.horizon_or_tol = Bound::Tolerance(CUSP_BOUND);
    r.max_deviation = Deviation::Numeric(max);
    Ok(r)
}
