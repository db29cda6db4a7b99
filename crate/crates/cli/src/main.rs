//! Command-line front end: game analysis, envelope curves, equilibrium
//! construction and verification, oracle runs, and sweep experiments.
//!
//! Exit codes: 0 success, 2 validation error, 3 infeasible construction,
//! 4 not converged.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use cheaptalk::envelopes::envelope_curves;
use cheaptalk::equilibrium::{
    construct_endpoint, construct_interior, construct_interior_general, construct_trivial,
    sender_value, verify_with_tolerance, ConstructionError, Profile,
};
use cheaptalk::fileio::{
    curves_to_csv, oracle_to_json, parse_game, parse_profile, parse_structure_spec,
    profile_to_json, report_to_json, sweep_to_csv, verification_to_json,
};
use cheaptalk::info::InformationStructure;
use cheaptalk::oracle::{best_equilibrium_binary, beta_sweep, delta_sweep, OracleError};
use cheaptalk::robustness::{analyze, enumerate_q, enumerate_t};
use cheaptalk::{fmt_rat, parse_rat, rat, rat_to_f64, Game, Rat};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "cheaptalk",
    about = "Robust cheap-talk equilibria: analysis, construction, verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Robustness report for a game file.
    Analyze {
        game: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Indirect utility and envelope curves as CSV.
    Curves {
        game: PathBuf,
        /// Number of uniform grid points (cutoffs are always included).
        #[arg(long, default_value_t = 101)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Construct an equilibrium and verify it.
    Construct {
        game: PathBuf,
        /// Information structure, e.g. `symmetric_binary q=11/20`,
        /// `binary a=11/20 b=2/5`, `support=[..] weights=[..]`.
        #[arg(long)]
        structure: String,
        /// One of `trivial`, `endpoint:IDX`, `interior:IDX`, `general:IDX`
        /// (indices into the T / Q enumerations).
        #[arg(long)]
        target: String,
        /// Residual tolerance for the general solver.
        #[arg(long, default_value = "1/1000000000")]
        tolerance: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Verify a serialized profile against a game.
    Verify {
        game: PathBuf,
        #[arg(long)]
        profile: PathBuf,
        /// Accept residuals up to this tolerance (default: exact).
        #[arg(long, default_value = "0")]
        tolerance: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Brute-force equilibrium census for a binary structure.
    Oracle {
        game: PathBuf,
        #[arg(long)]
        structure: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Delta- or beta-sweep experiments (CSV plus a summary).
    Sweep {
        game: PathBuf,
        #[arg(long, value_enum)]
        mode: SweepMode,
        /// Weight on the high posterior (delta mode).
        #[arg(long)]
        beta: Option<String>,
        /// Support half-width (beta mode).
        #[arg(long)]
        delta: Option<String>,
        /// Comma-separated deltas (delta mode).
        #[arg(long)]
        delta_list: Option<String>,
        /// Comma-separated betas (beta mode).
        #[arg(long)]
        beta_list: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepMode {
    Delta,
    Beta,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn validation(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn infeasible(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
        }
    }
}

fn read_file(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::validation(format!("cannot read {}: {e}", path.display())))
}

fn load_game(path: &PathBuf) -> Result<Game, Failure> {
    parse_game(&read_file(path)?).map_err(|e| Failure::validation(e.to_string()))
}

fn load_structure(spec: &str) -> Result<InformationStructure, Failure> {
    parse_structure_spec(spec).map_err(|e| Failure::validation(e.to_string()))
}

fn load_rat(text: &str, what: &str) -> Result<Rat, Failure> {
    parse_rat(text).map_err(|e| Failure::validation(format!("{what}: {e}")))
}

fn load_rat_list(text: &str, what: &str) -> Result<Vec<Rat>, Failure> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| load_rat(s, what))
        .collect()
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| Failure::validation(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn construction_failure(err: ConstructionError) -> Failure {
    match err {
        ConstructionError::NotConverged { .. } => Failure {
            code: 4,
            message: err.to_string(),
        },
        other => Failure::infeasible(other.to_string()),
    }
}

fn profile_output(
    profile: &Profile,
    tolerance: &Rat,
    extra: Option<serde_json::Value>,
    output: &OutputArgs,
) -> Result<(), Failure> {
    let report = verify_with_tolerance(profile, tolerance);
    let value = sender_value(profile);
    match output.format {
        Format::Json => {
            let mut doc = serde_json::Map::new();
            doc.insert("profile".into(), profile_to_json(profile));
            doc.insert("verification".into(), verification_to_json(&report));
            if let Some(v) = extra {
                doc.insert("solver".into(), v);
            }
            let text = serde_json::to_string_pretty(&serde_json::Value::Object(doc)).unwrap();
            emit(&output.out, &format!("{text}\n"))
        }
        Format::Text => {
            let mut s = String::new();
            s.push_str(&format!(
                "messages: [{}]\n",
                profile
                    .sender()
                    .messages
                    .iter()
                    .map(|m| m.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            ));
            for (state, row) in profile.sender().mix.iter().enumerate() {
                s.push_str(&format!(
                    "mixing | state {state}: [{}]\n",
                    row.iter().map(fmt_rat).collect::<Vec<_>>().join(", ")
                ));
            }
            for m in 0..profile.n_messages() {
                let vals: Vec<String> = (0..profile.structure().len())
                    .map(|sig| fmt_rat(&profile.value_at(m, sig)))
                    .collect();
                s.push_str(&format!(
                    "per-signal values | message {m}: [{}]\n",
                    vals.join(", ")
                ));
            }
            s.push_str(&format!(
                "sender value = {} ({})\n",
                fmt_rat(&value),
                rat_to_f64(&value)
            ));
            s.push_str(&format!(
                "verify: bayes {} | receiver {} | sender IC {}\n",
                report.bayes_ok, report.receiver_ok, report.sender_ic_ok
            ));
            if let Some(v) = extra {
                s.push_str(&format!("solver: {v}\n"));
            }
            emit(&output.out, &s)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze { game, output } => {
            let g = load_game(&game)?;
            let report = analyze(&g);
            match output.format {
                Format::Text => emit(&output.out, &report.render_text(&g)),
                Format::Json => {
                    let text = serde_json::to_string_pretty(&report_to_json(&g, &report)).unwrap();
                    emit(&output.out, &format!("{text}\n"))
                }
            }
        }
        Command::Curves { game, grid, out } => {
            if grid < 2 {
                return Err(Failure::validation("--grid must be at least 2"));
            }
            let g = load_game(&game)?;
            emit(&out, &curves_to_csv(&envelope_curves(&g, grid)))
        }
        Command::Construct {
            game,
            structure,
            target,
            tolerance,
            output,
        } => {
            let g = load_game(&game)?;
            let f = load_structure(&structure)?;
            let tol = load_rat(&tolerance, "--tolerance")?;
            if tol <= rat(0, 1) {
                return Err(Failure::validation("--tolerance must be positive"));
            }
            let (profile, extra) = match target.split_once(':') {
                None if target == "trivial" => (construct_trivial(&g, &f), None),
                Some(("endpoint", idx)) => {
                    let triples = enumerate_t(&g);
                    let i: usize = idx
                        .parse()
                        .map_err(|_| Failure::validation("bad endpoint index"))?;
                    let triple = triples.get(i).ok_or_else(|| {
                        Failure::validation(format!(
                            "endpoint:{i} out of range (|T| = {})",
                            triples.len()
                        ))
                    })?;
                    (
                        construct_endpoint(&g, &f, triple).map_err(construction_failure)?,
                        None,
                    )
                }
                Some(("interior", idx)) => {
                    let quads = enumerate_q(&g);
                    let i: usize = idx
                        .parse()
                        .map_err(|_| Failure::validation("bad interior index"))?;
                    let quad = quads.get(i).ok_or_else(|| {
                        Failure::validation(format!(
                            "interior:{i} out of range (|Q| = {})",
                            quads.len()
                        ))
                    })?;
                    (
                        construct_interior(&g, &f, quad).map_err(construction_failure)?,
                        None,
                    )
                }
                Some(("general", idx)) => {
                    let quads = enumerate_q(&g);
                    let i: usize = idx
                        .parse()
                        .map_err(|_| Failure::validation("bad general index"))?;
                    let quad = quads.get(i).ok_or_else(|| {
                        Failure::validation(format!(
                            "general:{i} out of range (|Q| = {})",
                            quads.len()
                        ))
                    })?;
                    let sol = construct_interior_general(&g, &f, quad, &tol, 200)
                        .map_err(construction_failure)?;
                    let extra = serde_json::json!({
                        "iterations": sol.iterations,
                        "d_residual": fmt_rat(&sol.d_residual),
                        "utility_residual": fmt_rat(&sol.utility_residual),
                    });
                    (sol.profile, Some(extra))
                }
                _ => {
                    return Err(Failure::validation(format!(
                        "unknown target `{target}` (use trivial, endpoint:IDX, interior:IDX, general:IDX)"
                    )))
                }
            };
            profile_output(&profile, &tol, extra, &output)
        }
        Command::Verify {
            game,
            profile,
            tolerance,
            output,
        } => {
            let g = load_game(&game)?;
            let tol = load_rat(&tolerance, "--tolerance")?;
            let p = parse_profile(&g, &read_file(&profile)?)
                .map_err(|e| Failure::validation(e.to_string()))?;
            profile_output(&p, &tol, None, &output)
        }
        Command::Oracle {
            game,
            structure,
            output,
        } => {
            let g = load_game(&game)?;
            let f = load_structure(&structure)?;
            let result = best_equilibrium_binary(&g, &f).map_err(|e| match e {
                OracleError::NotBinary => Failure::validation(e.to_string()),
                OracleError::Infeasible { .. } => Failure::infeasible(e.to_string()),
            })?;
            match output.format {
                Format::Json => {
                    let text = serde_json::to_string_pretty(&oracle_to_json(&result)).unwrap();
                    emit(&output.out, &format!("{text}\n"))
                }
                Format::Text => {
                    let mut s = format!(
                        "v*_F = {} ({})\n",
                        fmt_rat(&result.v_star),
                        rat_to_f64(&result.v_star)
                    );
                    for e in &result.census {
                        let messages: Vec<String> = e
                            .profile
                            .sender()
                            .messages
                            .iter()
                            .map(|m| m.to_string())
                            .collect();
                        s.push_str(&format!(
                            "  {:<8} value {} messages [{}]{}\n",
                            e.class.to_string(),
                            fmt_rat(&e.value),
                            messages.join(", "),
                            if e.boundary_tie_break {
                                " (boundary tie-break)"
                            } else {
                                ""
                            }
                        ));
                    }
                    let report = analyze(&g);
                    s.push_str(&format!(
                        "predicted v^_b = {}, v^ bounds = [{}, {}]\n",
                        fmt_rat(&report.v_hat_b),
                        fmt_rat(&report.v_hat_lower),
                        fmt_rat(&report.v_hat_upper)
                    ));
                    emit(&output.out, &s)
                }
            }
        }
        Command::Sweep {
            game,
            mode,
            beta,
            delta,
            delta_list,
            beta_list,
            out,
        } => {
            let g = load_game(&game)?;
            let report = analyze(&g);
            match mode {
                SweepMode::Delta => {
                    let beta = load_rat(
                        &beta.ok_or_else(|| Failure::validation("delta mode needs --beta"))?,
                        "--beta",
                    )?;
                    let deltas = load_rat_list(
                        &delta_list
                            .ok_or_else(|| Failure::validation("delta mode needs --delta-list"))?,
                        "--delta-list",
                    )?;
                    let sweep = delta_sweep(&g, &beta, &deltas);
                    emit(&out, &sweep_to_csv(&sweep.rows))?;
                    eprintln!(
                        "predicted limit at beta={}: {} ({}); v^_b = {}",
                        fmt_rat(&beta),
                        fmt_rat(&sweep.predicted_limit),
                        rat_to_f64(&sweep.predicted_limit),
                        fmt_rat(&report.v_hat_b)
                    );
                    Ok(())
                }
                SweepMode::Beta => {
                    let delta = load_rat(
                        &delta.ok_or_else(|| Failure::validation("beta mode needs --delta"))?,
                        "--delta",
                    )?;
                    let betas = match beta_list {
                        Some(list) => load_rat_list(&list, "--beta-list")?,
                        None => (1..100).map(|k| rat(k, 100)).collect(),
                    };
                    let sweep = beta_sweep(&g, &delta, &betas);
                    emit(&out, &sweep_to_csv(&sweep.rows))?;
                    match &sweep.min_value {
                        Some(min) => eprintln!(
                            "min v*_F = {} ({}); predicted v^_b = {}; bounds [{}, {}]",
                            fmt_rat(min),
                            rat_to_f64(min),
                            fmt_rat(&sweep.predicted),
                            fmt_rat(&report.v_hat_lower),
                            fmt_rat(&report.v_hat_upper)
                        ),
                        None => eprintln!("all rows infeasible at delta = {}", fmt_rat(&delta)),
                    }
                    Ok(())
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
