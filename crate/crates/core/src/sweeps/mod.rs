//! Reproduction runs and parameter sweeps behind the command-line front end.

mod config;
mod figures;
mod oracle_check;
mod table;

pub use config::{
    Command, DesignSpec, Grid, OracleSpec, RunConfig, SweepAxis, SweepParameter, SweepSpec, WindowSpec,
};
pub use figures::{run_design, run_fig2, run_fig3, run_fig4, run_sweep, DesignRow, DesignRun, SweepArgmin};
pub use oracle_check::{
    run_oracle_check, CheckResult, OracleReport, CV_TOLERANCE, NORM_TOLERANCE, QUBIT_TOLERANCE,
    ZERO_COUPLING_TOLERANCE,
};
pub use table::ResultTable;

/// What a command produced.
#[derive(Debug, Clone)]
pub enum RunOutput {
    Table(ResultTable),
    Design(DesignRun),
    Oracle(OracleReport),
}

/// Dispatches on `cfg.command`.
pub fn run(cfg: &RunConfig) -> crate::Result<RunOutput> {
    Ok(match cfg.command {
        Command::Fig2 => RunOutput::Table(run_fig2(cfg)?),
        Command::Fig3 => RunOutput::Table(run_fig3(cfg)?),
        Command::Fig4a | Command::Fig4b => RunOutput::Table(run_fig4(cfg)?),
        Command::Sweep => RunOutput::Table(run_sweep(cfg)?),
        Command::Design => RunOutput::Design(run_design(cfg)?),
        Command::OracleCheck => RunOutput::Oracle(run_oracle_check(cfg)?),
    })
}
