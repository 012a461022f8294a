//! The main identity, its Sturm-bound route, and the identity registry.

pub mod registry;
pub mod report;
pub mod sturm;

use num_rational::Rational64;

use crate::completion::transform::RootOfUnity;
use crate::error::Result;
use crate::etatheta::{pochhammer, PochSpec};
use crate::genfun::{a_series, s_series};
use crate::indefinite::{double_sum_original, h_series};
use crate::series::{q_pow, QSeries};
use report::{IdentityReport, Witness};
use sturm::sturm_data;

pub use registry::{run_registry, Config, UNKNOWN_SELECTOR_HINT};

/// Default exact horizon, `q^500` in scaled units.
pub const DEFAULT_HORIZON: i64 = q_pow(500);

/// `((q^4;q^4)_inf S(q)) | S_{2,0}` in the original variable, below `horizon`.
pub fn sieved_lhs_original(horizon: i64) -> QSeries {
    let p4 = pochhammer(&PochSpec::plus_inf(4, 4), horizon).expect("valid spec");
    p4.mul(&s_series(horizon))
        .sieve(2, 0)
        .expect("integer exponents")
}

/// The Sturm route for `M = q^(1/3)(H - A)`: weight 12 on `Gamma_0(2)` needs
/// the coefficients `0..count` of `M^12` to vanish. `M^12 = q^4 (H - A)^12`,
/// so the first four vanish whatever `H - A` is; the report says so.
pub fn check_sturm_route(h: &QSeries, a: &QSeries) -> Result<IdentityReport> {
    let data = sturm_data(12, 2);
    let count = data.count as i64;
    let counts_ok = data.index == 3 && data.count == 4;
    let counts = IdentityReport::predicate(
        "sturm-count",
        counts_ok,
        Some(Witness {
            location: "weight 12, level 2".into(),
            lhs: format!("index {}, count {}", data.index, data.count),
            rhs: "index 3, count 4".into(),
        }),
    )
    .with_note(format!("index {} and bound {}: coefficients 0..={} must vanish", data.index, data.bound, data.bound));

    // only M below q^count matters for M^12 below q^count
    let horizon = q_pow(count);
    let m = (h - a).shift(8).truncate(horizon + 8);
    let zero = QSeries::zero(horizon);
    let leading = IdentityReport::compare_exact("leading-coefficients", &m, &zero, horizon)?;
    let m12 = m.pow(12);
    let vanish = IdentityReport::compare_exact("twelfth-power-coefficients", &m12, &zero, horizon)?
        .with_note("M^12 = q^4 (H - A)^12 has no terms below q^4 by construction");

    // the transformation multipliers of M, zeta_3 and zeta_12, die in the 12th power
    let mults = [RootOfUnity::new(1, 3), RootOfUnity::new(1, 12)];
    let trivial = mults.iter().all(|z| z.pow(12).is_one());
    let multipliers = IdentityReport::predicate(
        "multiplier-twelfth-power",
        trivial,
        Some(Witness {
            location: "multipliers zeta_3, zeta_12".into(),
            lhs: "12th power".into(),
            rhs: "1".into(),
        }),
    );
    Ok(IdentityReport::combine("sturm-route", vec![counts, leading, vanish, multipliers]))
}

/// The main identity for given `H` and `A` series (so that tests can inject
/// faults): direct comparison below `horizon`, plus the Sturm route.
pub fn check_main_theorem_series(h: &QSeries, a: &QSeries, horizon: i64) -> Result<IdentityReport> {
    let direct = IdentityReport::compare_exact("direct", h, a, horizon)?;
    let sturm = check_sturm_route(h, a)?;
    Ok(IdentityReport::combine("exact:main-identity", vec![direct, sturm]))
}

/// `H = A` below `horizon`, the original-variable form below `2 horizon`,
/// and the Sturm route.
pub fn check_main_theorem(horizon: i64) -> Result<IdentityReport> {
    let h = h_series(horizon);
    let a = a_series(horizon);
    let direct = IdentityReport::compare_exact("direct", &h, &a, horizon)?;
    let t2 = 2 * horizon;
    let original = IdentityReport::compare_exact(
        "original-variable",
        &sieved_lhs_original(t2),
        &double_sum_original(t2),
        t2,
    )?;
    let rescaled = {
        let back = h.substitute_power(Rational64::from_integer(2))?;
        IdentityReport::compare_exact("rescaling-consistency", &back, &double_sum_original(t2), t2)?
    };
    let sturm = check_sturm_route(&h, &a)?;
    Ok(IdentityReport::combine("exact:main-identity", vec![direct, original, rescaled, sturm]))
}

/// Caps the global rayon pool at `QMOCK_THREADS` if set. Returns the cap.
pub fn configure_threads() -> Option<usize> {
    let n = std::env::var("QMOCK_THREADS").ok()?.parse::<usize>().ok()?.max(1);
    // a second initialization attempt is harmless
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Some(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn main_theorem_small() {
        let r = check_main_theorem(q_pow(80)).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn perturbed_h_fails_at_the_perturbation() {
        let t = q_pow(60);
        let h = h_series(t);
        let a = a_series(t);
        let bump = QSeries::monomial(BigRational::from_integer(1.into()), q_pow(37), t);
        let r = check_main_theorem_series(&(&h + &bump), &a, t).unwrap();
        assert!(!r.passed());
        assert_eq!(r.first_witness().unwrap().location, "direct: q^37");
        // the Sturm route alone cannot see it
        assert!(r.parts[1].passed());
    }

    #[test]
    fn direct_pass_implies_sturm_pass() {
        let t = q_pow(40);
        let r = check_main_theorem_series(&h_series(t), &a_series(t), t).unwrap();
        assert!(r.parts.iter().all(|p| p.passed()));
    }
}
