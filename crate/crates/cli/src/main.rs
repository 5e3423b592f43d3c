//! `bjorth` — Birkhoff-James orthogonality checks on matrix files.
//!
//! stdout carries exactly one JSON document; diagnostics go to stderr.
//! Exit codes: 0 success / ORTHOGONAL, 1 NOT_ORTHOGONAL (or BOUNDARY),
//! 2 input error, 3 numerical failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use bjorth::decision::{check_definitional, decide, DecisionOpts, Status};
use bjorth::ensemble::{gen_ginibre, gen_orthogonal_pair};
use bjorth::line::{global_inf_lambda, LineOpts};
use bjorth::matrix::{Field, Matrix};
use bjorth::minimax::{minimax_report, MinimaxOpts, DEFAULT_RESTARTS};
use bjorth::spectral::{top_singular_subspace, DEFAULT_RANK_TOL};
use bjorth::suite::{run_suite, SuiteConfig};
use bjorth::witness::{
    epsilon_witness, find_witness, EpsilonOpts, EpsilonOutcome, WitnessOpts, WitnessOutcome,
    DEFAULT_WITNESS_EPS,
};
use bjorth::Error;

const SCHEMA_VERSION: u32 = 1;

const EXIT_OK: u8 = 0;
const EXIT_NOT_ORTHOGONAL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "bjorth", version, about = "Birkhoff-James orthogonality of matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Decision tolerance on ‖A + λB‖ − ‖A‖.
    #[arg(long, global = true, default_value_t = 1e-7)]
    tol: f64,

    /// Multi-start restarts for the ascent-based searches.
    #[arg(long, global = true, default_value_t = DEFAULT_RESTARTS)]
    restarts: usize,

    #[arg(long, global = true, env = "BJORTH_SEED", default_value_t = 0)]
    seed: u64,

    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Print a one-line human summary on stderr.
    #[arg(long, global = true)]
    summary: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Operator norm and dimension of the norm-attaining subspace.
    Norm { a: String },
    /// inf_λ ‖A + λB‖ and its minimizer.
    Distance { a: String, b: String },
    /// Decide whether A ⊥ B.
    Check {
        a: String,
        b: String,
        #[arg(long, value_enum, default_value_t = CheckMethod::Both)]
        method: CheckMethod,
    },
    /// Find a unit x with ‖Ax‖ = ‖A‖ and ⟨Ax, Bx⟩ ≈ 0.
    Witness {
        a: String,
        b: String,
        /// Target residual. Absolute.
        #[arg(long, default_value_t = DEFAULT_WITNESS_EPS)]
        eps: f64,
        /// Look for an ε-witness (inf_λ ‖Ax + λBx‖ > ‖A‖ − eps) by ascent instead.
        #[arg(long)]
        sequence: bool,
    },
    /// Both sides of sup_x inf_λ = inf_λ sup_x.
    Minimax { a: String, b: String },
    /// Run the ensemble suites.
    Suite {
        #[arg(long)]
        config: PathBuf,
        /// Also write per-trial rows as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Generate seeded test matrices.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = FieldArg::C)]
        field: FieldArg,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CheckMethod {
    Def,
    Witness,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GenKind {
    Ginibre,
    Orthopair,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FieldArg {
    C,
    R,
}

impl From<FieldArg> for Field {
    fn from(f: FieldArg) -> Field {
        match f {
            FieldArg::C => Field::Complex,
            FieldArg::R => Field::Real,
        }
    }
}

struct Output {
    body: Value,
    code: u8,
    summary: String,
}

fn status_code(s: Status) -> u8 {
    match s {
        Status::Orthogonal => EXIT_OK,
        Status::NotOrthogonal | Status::Boundary => EXIT_NOT_ORTHOGONAL,
    }
}

/// Loads a matrix from `path`, or from key `K` of a JSON object with
/// `path#K` (as written by `gen --kind orthopair`).
fn load_matrix(spec: &str) -> bjorth::Result<Matrix> {
    let (path, key) = match spec.rsplit_once('#') {
        Some((p, k)) if !k.is_empty() && !k.contains(['/', '\\']) => (p, Some(k)),
        _ => (spec, None),
    };
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {path}: {e}")))?;
    let value: Value = serde_json::from_str(&text)?;
    match key {
        None => Matrix::from_json(&value),
        Some(k) => Matrix::from_json(
            value
                .get(k)
                .ok_or_else(|| Error::InvalidInput(format!("{path} has no key \"{k}\"")))?,
        ),
    }
}

fn load_pair(a: &str, b: &str) -> bjorth::Result<(Matrix, Matrix)> {
    let a = load_matrix(a)?;
    let b = load_matrix(b)?;
    a.ensure_square()?;
    a.ensure_same_shape(&b)?;
    Ok((a, b))
}

fn run(cli: &Cli) -> bjorth::Result<Output> {
    match &cli.command {
        Command::Norm { a } => {
            let a = load_matrix(a)?;
            let spec = top_singular_subspace(&a, DEFAULT_RANK_TOL)?;
            Ok(Output {
                summary: format!("‖A‖ = {}", spec.op_norm),
                body: json!({
                    "op_norm": spec.op_norm,
                    "top_subspace_dim": spec.dim(),
                    "rank_tol": spec.rank_tol,
                    "field": a.field(),
                }),
                code: EXIT_OK,
            })
        }
        Command::Distance { a, b } => {
            let (a, b) = load_pair(a, b)?;
            let r = global_inf_lambda(&a, &b, &LineOpts::default())?;
            Ok(Output {
                summary: format!("inf ‖A + λB‖ = {} at λ = {}", r.value, r.lambda_star.value),
                body: json!({
                    "value": r.value,
                    "lambda": r.lambda_star,
                    "evaluations": r.evaluations,
                    "budget_limited": r.budget_limited,
                }),
                code: if r.budget_limited { EXIT_NUMERICAL } else { EXIT_OK },
            })
        }
        Command::Check { a, b, method } => {
            let (a, b) = load_pair(a, b)?;
            let witness_opts = WitnessOpts {
                seed: cli.seed,
                ..WitnessOpts::default()
            };
            match method {
                CheckMethod::Def => {
                    let v = check_definitional(&a, &b, cli.tol)?;
                    Ok(Output {
                        summary: format!("{} (margin {:e})", v.status.as_str(), v.margin),
                        code: status_code(v.status),
                        body: serde_json::to_value(&v)?,
                    })
                }
                CheckMethod::Witness => match find_witness(&a, &b, &witness_opts)? {
                    WitnessOutcome::Found(w) => Ok(Output {
                        summary: format!("ORTHOGONAL (witness ip residual {:e})", w.ip_residual),
                        body: json!({"status": Status::Orthogonal, "method": "WITNESS", "witness": w}),
                        code: EXIT_OK,
                    }),
                    WitnessOutcome::NotOrthogonal(v) => Ok(Output {
                        summary: format!("NOT_ORTHOGONAL (margin {:e})", v.margin),
                        code: EXIT_NOT_ORTHOGONAL,
                        body: serde_json::to_value(&v)?,
                    }),
                },
                CheckMethod::Both => {
                    let d = decide(
                        &a,
                        &b,
                        &DecisionOpts {
                            tol: cli.tol,
                            witness: witness_opts,
                        },
                    )?;
                    Ok(Output {
                        summary: format!(
                            "{} (margin {:e}, routes agree: {})",
                            d.status.as_str(),
                            d.margin,
                            d.agree
                        ),
                        code: status_code(d.status),
                        body: serde_json::to_value(&d)?,
                    })
                }
            }
        }
        Command::Witness { a, b, eps, sequence } => {
            let (a, b) = load_pair(a, b)?;
            if !(*eps > 0.0) {
                return Err(Error::InvalidInput(format!("--eps must be positive, got {eps}")));
            }
            if *sequence {
                let opts = EpsilonOpts {
                    restarts: cli.restarts,
                    seed: cli.seed,
                    ..EpsilonOpts::default()
                };
                return match epsilon_witness(&a, &b, *eps, &opts)? {
                    EpsilonOutcome::Found(w) => Ok(Output {
                        summary: format!("ε-witness found (ip residual {:e})", w.ip_residual),
                        body: json!({"status": Status::Orthogonal, "witness": w}),
                        code: EXIT_OK,
                    }),
                    EpsilonOutcome::NotFound { best_value, target } => Ok(Output {
                        summary: format!("no ε-witness: best {best_value} ≤ target {target}"),
                        body: json!({"status": "NOT_FOUND", "best_value": best_value, "target": target}),
                        code: EXIT_NUMERICAL,
                    }),
                };
            }
            let opts = WitnessOpts {
                eps: *eps,
                seed: cli.seed,
                ..WitnessOpts::default()
            };
            match find_witness(&a, &b, &opts)? {
                WitnessOutcome::Found(w) => Ok(Output {
                    summary: format!("witness found (ip residual {:e})", w.ip_residual),
                    body: json!({"status": Status::Orthogonal, "witness": w}),
                    code: EXIT_OK,
                }),
                WitnessOutcome::NotOrthogonal(v) => Ok(Output {
                    summary: format!("NOT_ORTHOGONAL (margin {:e})", v.margin),
                    body: json!({"status": Status::NotOrthogonal, "verdict": v}),
                    code: EXIT_NOT_ORTHOGONAL,
                }),
            }
        }
        Command::Minimax { a, b } => {
            let (a, b) = load_pair(a, b)?;
            let r = minimax_report(
                &a,
                &b,
                &MinimaxOpts {
                    restarts: cli.restarts,
                    seed: cli.seed,
                    ..MinimaxOpts::default()
                },
            )?;
            Ok(Output {
                summary: format!("lhs {} rhs {} gap {:e}", r.lhs, r.rhs, r.gap),
                code: if r.restart_starved { EXIT_NUMERICAL } else { EXIT_OK },
                body: serde_json::to_value(&r)?,
            })
        }
        Command::Suite { config, csv } => {
            let text = fs::read_to_string(config).map_err(|e| {
                Error::InvalidInput(format!("cannot read {}: {e}", config.display()))
            })?;
            let cfg = SuiteConfig::from_json_str(&text)?;
            let report = run_suite(&cfg)?;
            if let Some(path) = csv {
                fs::write(path, report.to_csv()?)?;
            }
            let passed = report.records.iter().filter(|r| r.pass).count();
            Ok(Output {
                summary: format!("{passed}/{} trial records passed", report.records.len()),
                code: if report.all_passed() { EXIT_OK } else { EXIT_NUMERICAL },
                body: serde_json::to_value(&report)?,
            })
        }
        Command::Gen { kind, n, field } => {
            let field = Field::from(*field);
            let body = match kind {
                GenKind::Ginibre => gen_ginibre(*n, cli.seed, field)?.to_json(),
                GenKind::Orthopair => {
                    let (a, b) = gen_orthogonal_pair(*n, cli.seed, field)?;
                    json!({"A": a.to_json(), "B": b.to_json()})
                }
            };
            Ok(Output {
                summary: format!("generated {n}x{n} {}", field.as_str()),
                body,
                code: EXIT_OK,
            })
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Norm { .. } => "norm",
        Command::Distance { .. } => "distance",
        Command::Check { .. } => "check",
        Command::Witness { .. } => "witness",
        Command::Minimax { .. } => "minimax",
        Command::Suite { .. } => "suite",
        Command::Gen { .. } => "gen",
    }
}

fn emit(doc: &Value, out: Option<&Path>) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(doc).expect("JSON values always serialize");
    match out {
        Some(path) => fs::write(path, text + "\n"),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { EXIT_OK });
        }
    };
    let name = command_name(&cli.command);
    let (doc, code) = match run(&cli) {
        Ok(out) => {
            if cli.summary {
                eprintln!("{name}: {}", out.summary);
            }
            let mut doc = json!({"schema_version": SCHEMA_VERSION, "command": name});
            match out.body {
                Value::Object(fields) => doc.as_object_mut().unwrap().extend(fields),
                other => doc["result"] = other,
            }
            (doc, out.code)
        }
        Err(e) => {
            eprintln!("bjorth {name}: {e}");
            let code = if e.is_input_error() { EXIT_INPUT } else { EXIT_NUMERICAL };
            (
                json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": name,
                    "error": e.to_string(),
                }),
                code,
            )
        }
    };
    if let Err(e) = emit(&doc, cli.out.as_deref()) {
        eprintln!("bjorth: cannot write output: {e}");
        return ExitCode::from(EXIT_INPUT);
    }
    ExitCode::from(code)
}
