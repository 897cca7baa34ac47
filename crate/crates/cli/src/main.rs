use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};
use sharpsphere::eigencalc::{sign_report, LambdaRow};
use sharpsphere::measures::{conv_profile, sharp_constant, Exponent, DEFAULT_GRID};
use sharpsphere::spherequad::TrialFunction;
use sharpsphere::verifier::{
    chain_report, geometric_identity, overall, verify_cor3, verify_lem11, verify_thm1, Relation, Report, Verdict,
};
use sharpsphere::Error;
use std::io::Write;
use std::process::ExitCode;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

/// Sharp constants, eigenvalue tables and numerical checks for the
/// adjoint restriction inequality on spheres.
#[derive(Parser, Serialize)]
#[command(name = "sharpsphere", version)]
struct Cli {
    #[command(subcommand)]
    #[serde(flatten)]
    command: Command,
    /// Output format; `convolution` defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<String>,
    /// Worker threads for Monte Carlo. Results do not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
}

#[derive(Clone, Copy, ValueEnum, Serialize, PartialEq)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "lowercase", tag = "command")]
enum Command {
    /// Funk–Hecke eigenvalues Λ_k for k = 0..=kmax.
    Eigenvalues {
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = 10)]
        kmax: usize,
    },
    /// Sharp constant C(d, 2k, q).
    Constant {
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = 2)]
        k: u32,
        /// Lebesgue exponent; "inf" for q = ∞.
        #[arg(long, default_value = "2")]
        q: String,
    },
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Radial density of the fold-th convolution power of σ.
    Convolution {
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = 2)]
        fold: u32,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
    },
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    #[arg(long)]
    d: u32,
    #[arg(long, default_value_t = 2)]
    k: u32,
    #[arg(long, default_value = "2")]
    q: String,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Random trials (thm1, lem11) or random pairs (cor3).
    #[arg(long, default_value_t = 4)]
    trials: usize,
    /// Trial function for the chain.
    #[arg(long, value_enum, default_value_t = Trial::Constant)]
    trial: Trial,
    /// Perturbation size for `--trial perturbation`.
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    /// Harmonic degree for `--trial perturbation`.
    #[arg(long, default_value_t = 2)]
    degree: usize,
    /// Overrides every report's built-in tolerance.
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Suite {
    Thm1,
    Cor3,
    Identity,
    Chain,
    Lem11,
}

#[derive(Clone, Copy, ValueEnum, Serialize, PartialEq)]
#[serde(rename_all = "kebab-case")]
enum Trial {
    Constant,
    PlaneWave,
    Perturbation,
}

/// A finished command: records for output plus the exit code they imply.
struct Outcome {
    columns: &'static [&'static str],
    rows: Vec<Value>,
    code: u8,
}

fn usage(e: Error) -> (u8, String) {
    let code = match e {
        Error::Convergence(_) => EXIT_FAIL,
        _ => EXIT_USAGE,
    };
    (code, e.to_string())
}

fn parse_q(text: &str) -> Result<Exponent, (u8, String)> {
    Exponent::parse(text).map_err(usage)
}

fn eigen_row(r: &LambdaRow) -> Value {
    let (num, den, idx) = match &r.exact {
        Some(e) => (json!(e.coeff.numer().to_string()), json!(e.coeff.denom().to_string()), json!(e.omega_index)),
        None => (Value::Null, Value::Null, Value::Null),
    };
    json!({
        "d": r.d,
        "k": r.k,
        "exact_numerator": num,
        "exact_denominator": den,
        "omega_index": idx,
        "closed_form_match": r.closed_form_match(),
        "numeric": r.numeric,
        "sign": r.sign.symbol(),
    })
}

fn eigenvalues(d: u32, kmax: usize) -> Result<Outcome, (u8, String)> {
    if d < 3 {
        return Err((EXIT_USAGE, format!("eigenvalues need d ≥ 3, got d={d}")));
    }
    let rows = sign_report(d, kmax).map_err(usage)?;
    let mismatch = rows.iter().any(|r| r.closed_form_match() == Some(false));
    Ok(Outcome {
        columns: &["d", "k", "exact_numerator", "exact_denominator", "omega_index", "closed_form_match", "numeric", "sign"],
        rows: rows.iter().map(eigen_row).collect(),
        code: if mismatch { EXIT_FAIL } else { 0 },
    })
}

fn constant(d: u32, k: u32, q: &str) -> Result<Outcome, (u8, String)> {
    let q = parse_q(q)?;
    let c = sharp_constant(d, k, q).map_err(usage)?;
    let row = json!({
        "d": c.d,
        "p": 2 * c.k,
        "q": c.q,
        "value": c.value,
        "method": c.method,
        "cross_check_value": c.cross_check.map(|x| x.value),
        "cross_check_rel_err": c.cross_check.map(|x| x.rel_err),
    });
    Ok(Outcome {
        columns: &["d", "p", "q", "value", "method", "cross_check_value", "cross_check_rel_err"],
        rows: vec![row],
        code: 0,
    })
}

fn chain_trial(a: &VerifyArgs) -> sharpsphere::Result<TrialFunction> {
    match a.trial {
        Trial::Constant => TrialFunction::constant(a.d, Complex64::new(1.0, 0.0)),
        Trial::PlaneWave => {
            let mut xi = vec![0.0; a.d as usize];
            if let Some(last) = xi.last_mut() {
                *last = 1.0;
            }
            TrialFunction::plane_wave(a.d, &xi)
        }
        Trial::Perturbation => TrialFunction::harmonic_perturbation(a.d, a.eps, a.degree),
    }
}

fn verify(a: &VerifyArgs) -> Result<Outcome, (u8, String)> {
    let mut reports = match a.suite {
        Suite::Thm1 => verify_thm1(a.d, a.k, parse_q(&a.q)?, a.trials, a.seed),
        Suite::Cor3 => verify_cor3(a.d, a.trials, a.samples, a.seed),
        Suite::Identity => geometric_identity(a.d, a.samples, a.seed).map(|r| vec![r]),
        Suite::Lem11 => verify_lem11(a.d, a.trials, a.samples, a.seed),
        Suite::Chain => chain_trial(a).and_then(|f| chain_report(a.d, &f)).map(|c| {
            let mut reports = c.reports;
            if a.trial != Trial::Perturbation {
                // extremizers: the whole chain collapses to equalities
                let first = c.stages[0].value;
                let last = c.stages[c.stages.len() - 1].value;
                let top = c.stages.iter().map(|s| s.value.abs()).fold(0.0, f64::max);
                reports.push(Report::new("all stages equal", first, last, 0.0, 1e-8 * top, Relation::Equal));
            }
            reports
        }),
    }
    .map_err(usage)?;
    if let Some(tol) = a.tolerance {
        if !(tol >= 0.0) {
            return Err((EXIT_USAGE, format!("--tolerance must be ≥ 0, got {tol}")));
        }
        reports = reports
            .into_iter()
            .map(|r| Report::new(r.name, r.lhs, r.rhs, r.stat_error, tol, r.relation))
            .collect();
    }
    let code = match overall(&reports) {
        Verdict::Pass => 0,
        Verdict::Fail => EXIT_FAIL,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    };
    Ok(Outcome {
        columns: &["name", "lhs", "rhs", "stat_error", "tolerance", "relation", "verdict"],
        rows: reports.iter().map(|r| serde_json::to_value(r).expect("plain data")).collect(),
        code,
    })
}

fn convolution(d: u32, fold: u32, grid: usize) -> Result<Outcome, (u8, String)> {
    if !(2..=8).contains(&fold) {
        return Err((EXIT_USAGE, format!("fold must lie in 2..=8, got {fold}")));
    }
    let p = conv_profile(d, fold, grid).map_err(usage)?;
    let rows = p.radii().into_iter().zip(p.values()).map(|(r, v)| json!({"r": r, "density": v})).collect();
    Ok(Outcome { columns: &["r", "density"], rows, code: 0 })
}

fn csv_field(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Value::String(s) => s.clone(),
        // serde_json renders floats as shortest round-trip decimals
        Value::Number(n) => n.to_string(),
        other => other.to_string(),
    }
}

fn render(cli: &Cli, out: &Outcome, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut s = out.columns.join(",");
            s.push('\n');
            for row in &out.rows {
                let fields: Vec<String> = out.columns.iter().map(|c| csv_field(&row[*c])).collect();
                s.push_str(&fields.join(","));
                s.push('\n');
            }
            s
        }
        Format::Json => {
            let seed = match &cli.command {
                Command::Verify(a) => json!(a.seed),
                _ => Value::Null,
            };
            let doc = json!({
                "meta": {
                    "version": env!("CARGO_PKG_VERSION"),
                    "flags": cli,
                    "seed": seed,
                    "workers": cli.workers,
                },
                "results": out.rows,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("plain data");
            s.push('\n');
            s
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome, (u8, String)> {
    match &cli.command {
        Command::Eigenvalues { d, kmax } => eigenvalues(*d, *kmax),
        Command::Constant { d, k, q } => constant(*d, *k, q),
        Command::Verify(a) => verify(a),
        Command::Convolution { d, fold, grid } => convolution(*d, *fold, *grid),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.workers == 0 {
        eprintln!("error: --workers must be at least 1");
        return ExitCode::from(EXIT_USAGE);
    }
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.workers).build_global() {
        eprintln!("error: could not start worker pool: {e}");
        return ExitCode::from(EXIT_FAIL);
    }
    let outcome = match dispatch(&cli) {
        Ok(o) => o,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(code);
        }
    };
    let format = cli.format.unwrap_or(match cli.command {
        Command::Convolution { .. } => Format::Csv,
        _ => Format::Json,
    });
    let text = render(&cli, &outcome, format);
    let written = match &cli.output {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: could not write output: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    ExitCode::from(outcome.code)
}
