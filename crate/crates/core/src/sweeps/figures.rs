use rayon::prelude::*;
use serde::Serialize;

use super::config::{config_error, Command, RunConfig, SweepAxis};
use super::table::ResultTable;
use crate::design::{optimize_design, AtomEnsembleSpec, DesignOutcome, DesignReport, SearchSpace};
use crate::duan::{fast_split, min_over_window, regime_report, Bipartition, CVInitialState};
use crate::error::Result;
use crate::physics::ScaledTime;
use crate::qubit::{timeseries, Measure};

fn expect_command(cfg: &RunConfig, allowed: &[Command]) -> Result<()> {
    if allowed.contains(&cfg.command) {
        Ok(())
    } else {
        Err(config_error(
            "command",
            format!("{} cannot be run by this entry point", cfg.command),
        ))
    }
}

fn add_regime(table: &mut ResultTable, cfg: &RunConfig) -> Result<()> {
    if cfg.k > 0.0 {
        let report = regime_report(&cfg.system()?, cfg.kappa_per_s)?;
        table.meta("regime", serde_json::to_string(&report)?);
    }
    Ok(())
}

/// Concurrence and entropy of the optical reduced state of the qubit input.
pub fn run_fig2(cfg: &RunConfig) -> Result<ResultTable> {
    expect_command(cfg, &[Command::Fig2])?;
    let grid = cfg.time_scaled.values();
    let conc = timeseries(Measure::Concurrence, cfg.k, &grid)?;
    let ent = timeseries(Measure::Entropy(cfg.entropy_base), cfg.k, &grid)?;
    let mut table = ResultTable::new(cfg, &["t", "concurrence", "entropy"]);
    table.meta("entropy_base", cfg.entropy_base.label());
    table.meta(
        "columns",
        "t: scaled time; concurrence: of rho_AB; entropy: von Neumann entropy of rho_AB",
    );
    for ((t, c), (_, s)) in conc.into_iter().zip(ent) {
        table.push(vec![t, c, s])?;
    }
    Ok(table)
}

/// EPR variances of the three bipartitions, with their lower envelopes over
/// the fast optical phase.
pub fn run_fig3(cfg: &RunConfig) -> Result<ResultTable> {
    expect_command(cfg, &[Command::Fig3])?;
    let p = cfg.system()?;
    let state = CVInitialState::real(cfg.alpha, cfg.beta, cfg.nbar()?)?;
    let grid = cfg.time_scaled.values();
    let rows: Vec<Vec<f64>> = grid
        .par_iter()
        .map(|&t| -> Result<Vec<f64>> {
            let st = ScaledTime::new(t)?;
            let mut row = vec![t];
            let mut env = Vec::with_capacity(3);
            for b in Bipartition::ALL {
                let split = fast_split(b, st, &state, &p)?;
                row.push(crate::duan::duan(b, st, &state, &p)?.d);
                env.push(split.envelope());
            }
            row.push(1.0);
            row.extend(env);
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let mut table = ResultTable::new(
        cfg,
        &["t", "D_AB", "D_AC", "D_BC", "threshold", "D_AB_envelope", "D_AC_envelope", "D_BC_envelope"],
    );
    table.meta("nbar", format!("{:?}", state.nbar));
    table.meta(
        "columns",
        format!(
            "t: scaled time; D_ij: EPR variance sampled at t (fast optical frequencies r_a + r_b = {:?}, r_a = {:?}, r_b = {:?}); \
             threshold: separability bound 1; D_ij_envelope: minimum over the fast optical phase",
            p.r_a() + p.r_b(),
            p.r_a(),
            p.r_b()
        ),
    );
    add_regime(&mut table, cfg)?;
    for row in rows {
        table.push(row)?;
    }
    Ok(table)
}

fn axis_values(axis: &Option<SweepAxis>) -> Vec<Option<f64>> {
    match axis {
        Some(a) => a.grid.values().into_iter().map(Some).collect(),
        None => vec![None],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepArgmin {
    pub x: f64,
    pub y: Option<f64>,
    pub t: f64,
    pub d: f64,
}

/// Minimum of `D` over the window for every cell of the configured sweep.
/// Rows run over `x` outermost.
pub fn run_sweep(cfg: &RunConfig) -> Result<ResultTable> {
    expect_command(cfg, &[Command::Sweep, Command::Fig4a, Command::Fig4b])?;
    let spec = cfg.sweep;
    let xs = spec.x.grid.values();
    let ys = axis_values(&spec.y);
    let cells: Vec<(f64, Option<f64>)> = xs.iter().flat_map(|&x| ys.iter().map(move |&y| (x, y))).collect();
    let results: Vec<(f64, f64)> = cells
        .par_iter()
        .map(|&(x, y)| -> Result<(f64, f64)> {
            let mut point = cfg.clone();
            point.set(spec.x.parameter, x);
            if let (Some(axis), Some(v)) = (&spec.y, y) {
                point.set(axis.parameter, v);
            }
            point.validate()?;
            let p = point.system()?;
            let state = CVInitialState::real(point.alpha, point.beta, point.nbar()?)?;
            let w = min_over_window(spec.bipartition, &state, &p, point.window_length(), point.window.sampling)?;
            Ok((w.t, w.d))
        })
        .collect::<Result<_>>()?;

    let min_col = format!("min_D_{}", spec.bipartition.label());
    let mut columns = vec![spec.x.parameter.column().to_string()];
    if let Some(y) = &spec.y {
        columns.push(y.parameter.column().to_string());
    }
    columns.push(min_col.clone());
    columns.push("t_at_min".into());
    let refs: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut table = ResultTable::new(cfg, &refs);
    table.meta("window_scaled", format!("{:?}", cfg.window_length()));
    table.meta(
        "columns",
        format!(
            "{min_col}: minimum over scaled time [0, window_scaled] ({}); t_at_min: scaled time of that minimum",
            match cfg.window.sampling {
                crate::duan::WindowMode::Envelope { .. } => "lower envelope over the fast optical phase",
                crate::duan::WindowMode::Resolved { .. } => "fully resolved fast oscillation",
            }
        ),
    );

    let mut best: Option<SweepArgmin> = None;
    for (&(x, y), &(t, d)) in cells.iter().zip(&results) {
        let better = match best {
            None => true,
            Some(b) => d < b.d || (d == b.d && t < b.t),
        };
        if better {
            best = Some(SweepArgmin { x, y, t, d });
        }
        let mut row = vec![x];
        row.extend(y);
        row.push(d);
        row.push(t);
        table.push(row)?;
    }
    if let Some(b) = best {
        table.meta("argmin", serde_json::to_string(&b)?);
    }
    add_regime(&mut table, cfg)?;
    Ok(table)
}

/// Panel `a` sweeps `(k, T)`, panel `b` sweeps `(α, β)`.
pub fn run_fig4(cfg: &RunConfig) -> Result<ResultTable> {
    expect_command(cfg, &[Command::Fig4a, Command::Fig4b])?;
    run_sweep(cfg)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignRow {
    pub mirror_radius_m: f64,
    pub outcome: DesignOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignRun {
    pub search_finesse: f64,
    pub rows: Vec<DesignRow>,
    #[serde(skip)]
    pub table: ResultTable,
}

/// Optimizer output per mirror radius, as a JSON report and a CSV table.
/// Radii without a solution appear in the table with NaN entries.
pub fn run_design(cfg: &RunConfig) -> Result<DesignRun> {
    expect_command(cfg, &[Command::Design])?;
    let template = AtomEnsembleSpec::rb87(1e5, 1.0);
    let mut rows = Vec::new();
    let mut table = ResultTable::new(
        cfg,
        &[
            "mirror_radius_m",
            "length_m",
            "n_atoms",
            "omega_m_rad_per_s",
            "k",
            "ratio_at_search_finesse",
            "min_finesse",
            "kappa_per_s_at_min_finesse",
        ],
    );
    table.meta(
        "columns",
        "ratio_at_search_finesse: tau_e/tau_p at design.search_finesse; min_finesse: finesse giving tau_e/tau_p = 1",
    );
    for &r in &cfg.design.mirror_radii_m {
        let mut space = SearchSpace::rb87_default(r);
        space.finesse = cfg.design.search_finesse;
        let outcome = optimize_design(&space, &template)?;
        let row = match &outcome {
            DesignOutcome::Found(rep) => design_row(rep),
            DesignOutcome::NoSolution { .. } => {
                let mut row = vec![f64::NAN; 8];
                row[0] = r;
                row
            }
        };
        table.push(row)?;
        rows.push(DesignRow {
            mirror_radius_m: r,
            outcome,
        });
    }
    Ok(DesignRun {
        search_finesse: cfg.design.search_finesse,
        rows,
        table,
    })
}

fn design_row(rep: &DesignReport) -> Vec<f64> {
    vec![
        rep.mirror_radius_m,
        rep.length_m,
        rep.n_atoms,
        rep.omega_m_rad_per_s,
        rep.k,
        rep.ratio,
        rep.min_finesse_for_unity_ratio,
        1.0 / rep.tau_e_s,
    ]
}
