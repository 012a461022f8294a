use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use num_rational::Rational64;
use serde_json::json;

use qmock::completion::mock::{a_minus, eta, f_minus, h_minus, script_e, t_vector, theta};
use qmock::completion::{vartheta_numeric, CompletionEngine, CompletionValue, UpperHalfPoint};
use qmock::genfun::{series_of, GenFunId};
use qmock::indefinite::{h_series, QuadraticForm2, ThetaCharacteristic};
use qmock::series::exponent_fraction;
use qmock::verify::registry::identity_ids;
use qmock::verify::report::IdentityReport;
use qmock::verify::sturm::sturm_data;
use qmock::verify::{configure_threads, run_registry, Config, UNKNOWN_SELECTOR_HINT};
use qmock::{q_pow, Error, QSeries};

#[derive(Parser)]
#[command(name = "qmock", version, about = "Exact q-series and mock modular checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Var {
    Original,
    Rescaled,
}

#[derive(Subcommand)]
enum Command {
    /// Print the coefficients of a generating function below q^terms
    Expand {
        /// C<k>, C, D, S, f, omega, B, A, A1, A2, F1, F2, F3 or H
        id: String,
        #[arg(long, default_value_t = 20)]
        terms: i64,
        /// Variable to print in; defaults to the object's own
        #[arg(long, value_enum)]
        var: Option<Var>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run one identity check, or a selector such as exact:*
    Check {
        id: String,
        /// Horizon for exact checks, in integer powers of q
        #[arg(long)]
        terms: Option<i64>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        tau_seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run every registered identity
    CheckAll {
        #[arg(long, conflicts_with = "numeric_only")]
        exact_only: bool,
        #[arg(long)]
        numeric_only: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// List the registered identity ids
    List,
    /// Index and coefficient count of the Sturm bound for Gamma_0(level)
    Sturm {
        #[arg(long)]
        weight: u32,
        #[arg(long)]
        level: u64,
    },
    /// Evaluate a completion or theta function at a point of the upper half plane
    Eval {
        /// H^, A^, F1^, F2^, F3^, F^, H-, A-, F1-, F2-, F3-, vartheta, eta, Theta, E or T
        object: String,
        /// re,im
        #[arg(long, allow_hyphen_values = true)]
        tau: String,
        /// Lattice box radius for vartheta
        #[arg(long)]
        radius: Option<u32>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, Error::UnknownIdentity(_)) {
                eprintln!("{UNKNOWN_SELECTOR_HINT}");
            }
            let usage = matches!(e, Error::UnknownIdentity(_) | Error::UnknownObject(_) | Error::InvalidArgument(_));
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}

fn run(cmd: Command) -> qmock::Result<bool> {
    match cmd {
        Command::Expand { id, terms, var, format } => expand(&id, terms, var, format),
        Command::Check { id, terms, tol, tau_seed, format } => {
            let mut config = Config::default();
            if let Some(n) = terms {
                if n < 1 {
                    return Err(Error::InvalidArgument("--terms must be positive".into()));
                }
                config.horizon = q_pow(n);
            }
            if let Some(t) = tol {
                if t.is_nan() || t <= 0.0 {
                    return Err(Error::InvalidArgument("--tol must be positive".into()));
                }
                config.tol = t;
            }
            if let Some(s) = tau_seed {
                config.seed = s;
            }
            Ok(print_reports(&run_registry(&id, &config)?, format))
        }
        Command::CheckAll { exact_only, numeric_only, format } => {
            let selector = if exact_only {
                "exact:*"
            } else if numeric_only {
                "numeric:*"
            } else {
                "*"
            };
            Ok(print_reports(&run_registry(selector, &Config::default())?, format))
        }
        Command::List => {
            for (id, _) in identity_ids() {
                println!("{id}");
            }
            Ok(true)
        }
        Command::Sturm { weight, level } => {
            if level == 0 {
                return Err(Error::InvalidArgument("--level must be positive".into()));
            }
            let d = sturm_data(weight, level);
            println!("weight {} level {}: index {}, bound {}, coefficients 0..={} ({} total)", d.weight, d.level, d.index, d.bound, d.bound, d.count);
            Ok(true)
        }
        Command::Eval { object, tau, radius, tol, format } => eval(&object, &tau, radius, tol, format),
    }
}

fn expand(id: &str, terms: i64, var: Option<Var>, format: Format) -> qmock::Result<bool> {
    if terms < 1 {
        return Err(Error::InvalidArgument("--terms must be positive".into()));
    }
    let t = q_pow(terms);
    let (native, rescaled) = if id == "H" {
        (h_series(t), true)
    } else {
        let g: GenFunId = id.parse()?;
        (series_of(g, t), g.is_rescaled())
    };
    let series = match (var, rescaled) {
        (Some(Var::Original), true) => native.substitute_power(Rational64::from_integer(2))?.truncate(t),
        (Some(Var::Rescaled), false) => native
            .substitute_power(Rational64::new(1, 2))
            .map_err(|e| Error::InvalidArgument(format!("{id} has no rescaled form: {e}")))?,
        _ => native,
    };
    print_series(&series, format);
    Ok(true)
}

fn print_series(s: &QSeries, format: Format) {
    match format {
        Format::Text => {
            for (e, c) in s.iter() {
                let (n, d) = exponent_fraction(e);
                let exp = if d == 1 { n.to_string() } else { format!("{n}/{d}") };
                println!("{exp}\t{c}");
            }
            let (n, d) = exponent_fraction(s.order());
            println!("# + O(q^{})", if d == 1 { n.to_string() } else { format!("{n}/{d}") });
        }
        Format::Json => {
            for (e, c) in s.iter() {
                let (en, ed) = exponent_fraction(e);
                let line = json!({
                    "exp_num": en,
                    "exp_den": ed,
                    "coeff_num": c.numer().to_string(),
                    "coeff_den": c.denom().to_string(),
                });
                println!("{line}");
            }
        }
    }
}

fn print_reports(reports: &[IdentityReport], format: Format) -> bool {
    for r in reports {
        match format {
            Format::Text => println!("{r}"),
            Format::Json => println!("{}", serde_json::to_string(r).expect("report serializes")),
        }
    }
    let passed = reports.iter().filter(|r| r.passed()).count();
    if matches!(format, Format::Text) && reports.len() > 1 {
        println!("{passed}/{} passed", reports.len());
    }
    passed == reports.len()
}

fn parse_tau(s: &str) -> qmock::Result<UpperHalfPoint> {
    let bad = || Error::InvalidArgument(format!("--tau expects `re,im`, got `{s}`"));
    let (re, im) = s.split_once(',').ok_or_else(bad)?;
    let re: f64 = re.trim().parse().map_err(|_| bad())?;
    let im: f64 = im.trim().parse().map_err(|_| bad())?;
    UpperHalfPoint::new(re, im)
}

fn eval(object: &str, tau: &str, radius: Option<u32>, tol: f64, format: Format) -> qmock::Result<bool> {
    let tau = parse_tau(tau)?;
    if tau.v < 0.5 {
        eprintln!("warning: Im(tau) = {} < 0.5; accuracy degrades toward the real axis", tau.v);
    }
    let engine = || CompletionEngine::new(CompletionEngine::DEFAULT_TERMS);
    let values: Vec<CompletionValue> = match object {
        "H^" => vec![engine().h_hat(tau)?],
        "A^" => vec![engine().a_hat(tau)?],
        "F1^" | "F2^" | "F3^" => vec![engine().f_hat(object.as_bytes()[1] - b'0', tau)?],
        "F^" => engine().f_hat_vector(tau)?.to_vec(),
        "H-" => vec![h_minus(tau, None)?],
        "A-" => vec![a_minus(tau, None)?],
        "F1-" | "F2-" | "F3-" => vec![f_minus(object.as_bytes()[1] - b'0', tau, None)?],
        "vartheta" => vec![vartheta_numeric(
            &QuadraticForm2::hecke(),
            &ThetaCharacteristic::hecke(),
            tau,
            radius,
            tol,
        )?],
        "eta" => vec![eta(tau)],
        "Theta" => vec![theta(tau)],
        "E" => vec![script_e(tau)],
        "T" => t_vector(tau).to_vec(),
        _ => return Err(Error::UnknownObject(object.to_string())),
    };
    for v in values {
        let z: Complex64 = v.value;
        match format {
            Format::Text => println!("{:+.15e} {:+.15e}i  (est. error {:.1e})", z.re, z.im, v.est_tail),
            Format::Json => println!("{}", json!({"re": z.re, "im": z.im, "est_tail": v.est_tail})),
        }
    }
    Ok(true)
}
