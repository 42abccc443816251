//! Command dispatch and artifact writing.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use optomech::{coupling, io as model_io, sensing};
use serde_json::{json, Map, Value};

use crate::analysis::{self, Artifact};
use crate::config::{parse_scenario, Scenario, SCHEMA_VERSION};
use crate::error::CliError;
use crate::scenarios;

pub const THREADS_ENV: &str = "OPTOMECH_THREADS";

#[derive(Debug, Parser)]
#[command(name = "optomech", version, about = "Near-field cavity optomechanics models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every analysis listed in a scenario file (or a bundled scenario name).
    Run {
        scenario: String,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// List the bundled scenarios.
    ListScenarios,
    /// Fit an exponential to a `x0_m,dfreq_hz` CSV.
    FitShift {
        csv: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit the interference model to a `freq_hz,h_mag` CSV.
    FitResponse {
        csv: PathBuf,
        /// Scenario supplying the cavity and effective mass, used to convert a₁ into g_eff.
        #[arg(long)]
        scenario: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dynamical backaction summary and linewidth sweep for a scenario.
    Backaction {
        scenario: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Quantum backaction against thermal force noise for a scenario.
    Qba {
        scenario: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config {
            line: None,
            message: format!("{THREADS_ENV} must be a positive integer, got `{raw}`"),
        })?;
    // A second call in the same process (tests) finds the pool already built.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Loads a scenario from a path, falling back to the bundled set by name.
pub fn load_scenario(arg: &str) -> Result<(Scenario, Option<PathBuf>), CliError> {
    let path = Path::new(arg);
    if path.exists() {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path.display(), e))?;
        let dir = path.parent().map(Path::to_path_buf);
        return Ok((parse_scenario(&text)?, dir));
    }
    match scenarios::find(arg) {
        Some(b) => Ok((parse_scenario(b.text)?, None)),
        None => Err(CliError::Io(format!("{arg}: no such file or bundled scenario"))),
    }
}

pub fn result_document(name: &str, description: &str, results: Map<String, Value>, artifacts: &[Artifact]) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION.to_string(),
        "scenario": name,
        "description": description,
        "results": results,
        "artifacts": artifacts.iter().map(|a| a.file_name.clone()).collect::<Vec<_>>(),
    })
}

pub fn render(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("json values always serialize");
    s.push('\n');
    s
}

fn write_out(dir: &Path, doc: &Value, artifacts: &[Artifact]) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir.display(), e))?;
    for a in artifacts {
        let p = dir.join(&a.file_name);
        fs::write(&p, &a.contents).map_err(|e| CliError::io(p.display(), e))?;
    }
    let p = dir.join("result.json");
    fs::write(&p, render(doc)).map_err(|e| CliError::io(p.display(), e))
}

fn emit(doc: &Value, out: Option<&Path>, artifacts: &[Artifact]) -> Result<(), CliError> {
    print!("{}", render(doc));
    match out {
        Some(dir) => write_out(dir, doc, artifacts),
        None => Ok(()),
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path.display(), e))
}

pub fn execute(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    match cli.command {
        Command::Run { scenario, out } => {
            let (s, dir) = load_scenario(&scenario)?;
            let outcome = analysis::run_scenario(&s, dir.as_deref())?;
            let doc = result_document(&s.name, &s.description, outcome.sections, &outcome.artifacts);
            write_out(&out, &doc, &outcome.artifacts)?;
            println!("wrote {}", out.join("result.json").display());
            Ok(())
        }
        Command::ListScenarios => {
            let width = scenarios::BUNDLED.iter().map(|b| b.name.len()).max().unwrap_or(0);
            for b in scenarios::BUNDLED {
                let s = parse_scenario(b.text)?;
                println!("{:width$}  {}", b.name, s.description);
            }
            Ok(())
        }
        Command::FitShift { csv, out } => {
            let curve = model_io::read_shift_curve(read_file(&csv)?.as_bytes())?;
            let fit = coupling::fit_exponential(&curve)?;
            let mut results = Map::new();
            results.insert(
                "fit-shift".into(),
                analysis::shift_fit_section(&fit, curve.points.len()),
            );
            let doc = result_document("fit-shift", &csv.display().to_string(), results, &[]);
            emit(&doc, out.as_deref(), &[])
        }
        Command::FitResponse { csv, scenario, out } => {
            let curve = model_io::read_response_curve(read_file(&csv)?.as_bytes())?;
            let (cav, m_eff) = match scenario {
                Some(arg) => {
                    let (s, _) = load_scenario(&arg)?;
                    let m_eff = analysis::resolve_mode(&s).ok().map(|m| m.m_eff);
                    (s.cavity, m_eff)
                }
                None => (None, None),
            };
            let fit = sensing::fit_response(&curve, cav.as_ref(), m_eff)?;
            let mut results = Map::new();
            results.insert("fit-response".into(), analysis::response_fit_section(&fit));
            let doc = result_document("fit-response", &csv.display().to_string(), results, &[]);
            emit(&doc, out.as_deref(), &[])
        }
        Command::Backaction { scenario, out } => {
            let (s, _) = load_scenario(&scenario)?;
            let (cav, mode, g, drive) = analysis::resolve_inputs(&s)?;
            let (section, csv) =
                analysis::backaction_outcome(&cav, &mode, g, &drive, s.options.g_sweep_max, s.options.g_sweep_points)?;
            let mut results = Map::new();
            results.insert("backaction".into(), section);
            let artifacts = [csv];
            let doc = result_document(&s.name, &s.description, results, &artifacts);
            emit(&doc, out.as_deref(), &artifacts)
        }
        Command::Qba { scenario, out } => {
            let (s, _) = load_scenario(&scenario)?;
            let (cav, mode, g, drive) = analysis::resolve_inputs(&s)?;
            let mut results = Map::new();
            results.insert("qba".into(), analysis::qba_section(&cav, &mode, g, &drive)?);
            let doc = result_document(&s.name, &s.description, results, &[]);
            emit(&doc, out.as_deref(), &[])
        }
    }
}
