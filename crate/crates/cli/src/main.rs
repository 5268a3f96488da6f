mod envelope;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use adklab::criticality::{crit_chain, crit_report, noncritical_density, ChainReport, CritReport};
use adklab::domain_model::{builtin, builtin_names, DomainModel};
use adklab::error::Error;
use adklab::factorization::{n_bounded_factorization, radical_factorization};
use adklab::ideal_fn::IdealFunction;
use adklab::ordinal_space::PointSet;
use adklab::random::seed_from_env;
use adklab::verify::{run_suite, SuiteConfig, TheoremCheck};

use envelope::{ErrorReport, ReportEnvelope};

#[derive(Parser)]
#[command(
    name = "adklab",
    version,
    about = "Criticality analysis of almost Dedekind domain models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Largest finite level n probed.
    #[arg(long, global = true, default_value_t = 16)]
    max_n: u64,
    /// Depth of the truncations used for pointwise comparisons.
    #[arg(long, global = true, default_value_t = 200)]
    truncation_depth: u64,
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true, value_name = "OUT")]
    json: Option<PathBuf>,
    /// Suppress the summary on standard error.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Critical sets and the criticality chain of a model.
    Analyze { model: String },
    /// Factor an ideal function of a model.
    Factor {
        model: String,
        ideal: PathBuf,
        #[arg(long, value_enum, default_value_t = FactorMode::Radical)]
        mode: FactorMode,
        #[arg(long)]
        n: Option<u64>,
    },
    /// Run the statement checks on a model.
    Verify { model: String },
    /// Builtin models.
    Builtin {
        #[command(subcommand)]
        action: BuiltinAction,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FactorMode {
    Radical,
    Bounded,
}

#[derive(Subcommand)]
enum BuiltinAction {
    List,
    Export { name: String },
}

#[derive(Serialize)]
struct Analysis {
    crit: CritReport,
    chain: ChainReport,
    noncritical: PointSet,
    noncritical_dense: bool,
}

/// Why a run failed, with its exit code.
enum Failure {
    Validation(&'static str, String),
    Analysis(Error),
}

impl Failure {
    fn report(&self) -> (u8, ErrorReport) {
        match self {
            &Failure::Validation(kind, ref message) => (
                1,
                ErrorReport {
                    error: "validation".into(),
                    kind,
                    message: message.clone(),
                },
            ),
            Failure::Analysis(e) => (
                2,
                ErrorReport {
                    error: "analysis".into(),
                    kind: kind_of(e),
                    message: e.to_string(),
                },
            ),
        }
    }
}

fn kind_of(e: &Error) -> &'static str {
    match e {
        Error::Parse(_) => "parse",
        Error::OutsideSpace(_) => "outside_space",
        Error::SpaceMismatch => "space_mismatch",
        Error::UnsupportedShape(_) => "unsupported_shape",
        Error::InvalidFunction(_) => "invalid_function",
        Error::NegativeValue(_) => "negative_value",
        Error::NotSemicontinuous(_) => "not_semicontinuous",
        Error::NotContinuous { .. } => "not_continuous",
        Error::CriticalObstruction(_) => "critical_obstruction",
        Error::OmegaCriticalObstruction(_) => "omega_critical_obstruction",
        Error::Unbounded => "unbounded",
        Error::InvalidModel(_) => "invalid_model",
        Error::WindowTooSmall(_, _) => "window_too_small",
    }
}

fn validation(kind: &'static str, message: impl ToString) -> Failure {
    Failure::Validation(kind, message.to_string())
}

/// A model file, or the name of a builtin when no such file exists.
fn load_model(arg: &str) -> Result<DomainModel, Failure> {
    let path = Path::new(arg);
    let model = if !path.exists() {
        builtin(arg)
            .ok_or_else(|| validation("io", format!("no model file or builtin named {arg}")))?
    } else {
        let text = std::fs::read_to_string(path).map_err(|e| validation("io", e))?;
        DomainModel::from_json(&text).map_err(|e| validation("invalid_model", e))?
    };
    let violations = model.validate();
    if let Some(v) = violations.first() {
        let detail = serde_json::to_string(v).expect("serializable");
        return Err(validation(
            "invalid_model",
            format!("{} violation(s), first: {detail}", violations.len()),
        ));
    }
    Ok(model)
}

fn load_ideal(path: &Path, model: &DomainModel) -> Result<IdealFunction, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| validation("io", e))?;
    let f: IdealFunction =
        serde_json::from_str(&text).map_err(|e| validation("malformed_json", e))?;
    if f.space() != &model.space {
        return Err(validation(
            "invalid_ideal",
            "ideal lives on a different space than the model",
        ));
    }
    if let Some(p) = f.lsc_violation() {
        return Err(validation(
            "invalid_ideal",
            format!("ideal function is not lower semicontinuous at {p}"),
        ));
    }
    Ok(f.with_fg(true))
}

fn emit<P: Serialize>(cli: &Cli, env: &ReportEnvelope<P>) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(env).expect("serializable");
    text.push('\n');
    match &cli.json {
        Some(out) => std::fs::write(out, text).map_err(|e| validation("io", e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn note(cli: &Cli, msg: String) {
    if !cli.quiet {
        eprintln!("{msg}");
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Analyze { model } => {
            let model = load_model(model)?;
            let crit = crit_report(&model, cli.max_n).map_err(Failure::Analysis)?;
            let chain = crit_chain(&model).map_err(Failure::Analysis)?;
            let (noncritical, noncritical_dense) =
                noncritical_density(&model).map_err(Failure::Analysis)?;
            let contradiction = chain.contradiction.clone();
            note(
                cli,
                format!(
                    "{}: Crit^ω = {}, sp-rank {}",
                    model.name,
                    serde_json::to_string(&crit.crit_omega).expect("serializable"),
                    chain.sp_rank
                ),
            );
            let payload = Analysis {
                crit,
                chain,
                noncritical,
                noncritical_dense,
            };
            emit(
                cli,
                &ReportEnvelope::new(&model, format!("analyze --max-n {}", cli.max_n), payload),
            )?;
            match contradiction {
                Some(c) => Err(validation(
                    "model_contradiction",
                    format!(
                        "stable nonempty stage at {}; generators {:?}",
                        c.point, c.generators
                    ),
                )),
                None => Ok(()),
            }
        }
        Command::Factor {
            model,
            ideal,
            mode,
            n,
        } => {
            let model = load_model(model)?;
            let f = load_ideal(ideal, &model)?;
            let (fac, command) = match mode {
                FactorMode::Radical => (
                    radical_factorization(&f),
                    "factor --mode radical".to_string(),
                ),
                FactorMode::Bounded => {
                    let n = n.ok_or_else(|| validation("usage", "--mode bounded needs --n"))?;
                    (
                        n_bounded_factorization(&model, &f, n),
                        format!("factor --mode bounded --n {n}"),
                    )
                }
            };
            let fac = fac.map_err(Failure::Analysis)?;
            note(
                cli,
                format!("{}: {} factor(s)", model.name, fac.factors.len()),
            );
            emit(cli, &ReportEnvelope::new(&model, command, fac))
        }
        Command::Verify { model } => {
            let model = load_model(model)?;
            let config = SuiteConfig {
                max_n: cli.max_n,
                seed: seed_from_env(),
                window_depth: cli.truncation_depth,
                ..SuiteConfig::default()
            };
            let report = run_suite(&model, &config);
            let failed: Vec<&str> = report
                .checks
                .iter()
                .filter(|c| c.status.is_fail())
                .map(|c| c.id)
                .collect();
            note(
                cli,
                format!(
                    "{}: {} checks, {} failed",
                    model.name,
                    report.checks.len(),
                    failed.len()
                ),
            );
            let command = format!(
                "verify --max-n {} --truncation-depth {} --seed {:#x}",
                cli.max_n, cli.truncation_depth, config.seed
            );
            let checks: Vec<TheoremCheck> = report.checks;
            emit(cli, &ReportEnvelope::new(&model, command, checks))?;
            if failed.is_empty() {
                Ok(())
            } else {
                Err(validation(
                    "model_contradiction",
                    format!("failed checks: {}", failed.join(", ")),
                ))
            }
        }
        Command::Builtin { action } => match action {
            BuiltinAction::List => {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&builtin_names()).expect("serializable")
                );
                Ok(())
            }
            BuiltinAction::Export { name } => {
                let model = builtin(name)
                    .ok_or_else(|| validation("usage", format!("unknown builtin {name}")))?;
                let text = model.to_json();
                match &cli.json {
                    Some(out) => std::fs::write(out, text).map_err(|e| validation("io", e)),
                    None => {
                        print!("{text}");
                        Ok(())
                    }
                }
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (code, report) = f.report();
            let text = serde_json::to_string(&report).expect("serializable");
            // The report already occupies standard output unless it went to a file.
            if cli.json.is_some() || report.kind != "model_contradiction" {
                println!("{text}");
            } else {
                eprintln!("{text}");
            }
            ExitCode::from(code)
        }
    }
}
