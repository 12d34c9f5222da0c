use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use optomech::sweeps::{run, Command, RunConfig, RunOutput};

const EXIT_VALIDATION: u8 = 1;
const EXIT_ORACLE_FAILURE: u8 = 2;

/// Entanglement dynamics runs: figure data, design tables, oracle certification.
#[derive(Debug, Parser)]
#[command(name = "optomech", version)]
struct Cli {
    /// fig2, fig3, fig4a, fig4b, design, oracle-check or sweep.
    command: String,

    /// JSON config, or a CSV written by a previous run (its metadata is reused).
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Override one config key, e.g. `--set k=0.3` or `--set sweep.x.grid.points=40`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// Output file; standard output when omitted.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Worker threads; defaults to the number of available cores.
    #[arg(long, value_name = "N")]
    workers: Option<usize>,

    /// Seed for sampled test points.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
}

#[derive(Debug)]
enum Failure {
    Validation(String),
    Oracle,
}

impl From<optomech::Error> for Failure {
    fn from(e: optomech::Error) -> Self {
        Failure::Validation(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Validation(e.to_string())
    }
}

fn check_writable(path: &Path) -> Result<(), Failure> {
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    if !parent.is_dir() {
        return Err(Failure::Validation(format!(
            "output directory {} does not exist",
            parent.display()
        )));
    }
    if path.is_dir() {
        return Err(Failure::Validation(format!("output path {} is a directory", path.display())));
    }
    Ok(())
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, bytes).map_err(|e| Failure::Validation(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn execute(cli: Cli) -> Result<(), Failure> {
    let command: Command = cli.command.parse()?;
    let file = cli
        .config
        .as_ref()
        .map(|p| fs::read_to_string(p).map_err(|e| Failure::Validation(format!("{}: {e}", p.display()))))
        .transpose()?;
    let mut overrides = cli.set.clone();
    if let Some(seed) = cli.seed {
        overrides.push(format!("seed={seed}"));
    }
    let cfg = RunConfig::resolve(command, file.as_deref(), &overrides)?;
    if let Some(path) = &cli.out {
        check_writable(path)?;
    }
    if cli.workers == Some(0) {
        return Err(Failure::Validation("--workers must be >= 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers.unwrap_or(0))
        .build()
        .map_err(|e| Failure::Validation(e.to_string()))?;
    let output = pool.install(|| run(&cfg))?;
    let out = cli.out.as_deref();
    match output {
        RunOutput::Table(table) => emit(out, table.to_csv_string()?.as_bytes()),
        RunOutput::Design(design) => {
            let json = serde_json::to_string_pretty(&design).expect("design report serializes") + "\n";
            match out {
                Some(path) => {
                    emit(Some(path), design.table.to_csv_string()?.as_bytes())?;
                    emit(Some(&path.with_extension("json")), json.as_bytes())
                }
                None => emit(None, json.as_bytes()),
            }
        }
        RunOutput::Oracle(report) => {
            for check in &report.checks {
                eprintln!(
                    "{:<20} {} max deviation {:.3e} (tolerance {:.1e}, {} samples)",
                    check.name,
                    if check.passed { "pass" } else { "FAIL" },
                    check.max_deviation,
                    check.tolerance,
                    check.samples
                );
            }
            let json = serde_json::to_string_pretty(&report).expect("oracle report serializes") + "\n";
            emit(out, json.as_bytes())?;
            if report.passed {
                Ok(())
            } else {
                Err(Failure::Oracle)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_VALIDATION)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_VALIDATION)
        }
        Err(Failure::Oracle) => {
            eprintln!("error: oracle check failed");
            ExitCode::from(EXIT_ORACLE_FAILURE)
        }
    }
}
