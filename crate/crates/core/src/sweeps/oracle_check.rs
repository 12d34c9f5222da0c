use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::config::{config_error, Command, RunConfig};
use crate::duan::{duan, duan_from_moments, Bipartition, CVInitialState};
use crate::error::Result;
use crate::oracle::{apply_evolution, build_initial_state, evolved_moments, FockConfig, InitialKind, Mode};
use crate::physics::{ScaledTime, SystemParams};
use crate::qubit::reduced_rho_ab;
use crate::C64;

pub const QUBIT_TOLERANCE: f64 = 1e-8;
pub const CV_TOLERANCE: f64 = 1e-6;
pub const ZERO_COUPLING_TOLERANCE: f64 = 1e-12;
pub const NORM_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub samples: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Parameters of the sample with the largest deviation.
    pub worst: Value,
    /// Every sample whose deviation exceeds the tolerance.
    pub failures: Vec<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

fn summarize(name: &str, tolerance: f64, samples: Vec<(f64, Value)>) -> CheckResult {
    let mut max_deviation = 0.0;
    let mut worst = Value::Null;
    let mut failures = Vec::new();
    for (dev, params) in &samples {
        let dev = if dev.is_nan() { f64::INFINITY } else { *dev };
        if dev > max_deviation || worst.is_null() {
            max_deviation = dev;
            worst = params.clone();
        }
        if !(dev <= tolerance) {
            let mut entry = params.clone();
            entry["deviation"] = json!(dev);
            failures.push(entry);
        }
    }
    CheckResult {
        name: name.into(),
        samples: samples.len(),
        max_deviation,
        tolerance,
        passed: failures.is_empty(),
        worst,
        failures,
    }
}

#[derive(Debug, Clone, Copy)]
struct CvSample {
    alpha: f64,
    beta: f64,
    nbar: f64,
    k: f64,
    r_a: f64,
    r_b: f64,
    t: f64,
}

impl CvSample {
    fn draw(rng: &mut ChaCha8Rng, cfg: &RunConfig, k_max: f64) -> Self {
        let o = &cfg.oracle;
        Self {
            alpha: rng.random_range(0.0..=o.max_amplitude),
            beta: rng.random_range(0.0..=o.max_amplitude),
            nbar: rng.random_range(0.0..=o.max_nbar),
            k: if k_max > 0.0 { rng.random_range(0.0..=k_max) } else { 0.0 },
            r_a: rng.random_range(0.5..=5.0),
            r_b: rng.random_range(0.5..=5.0),
            t: rng.random_range(0.0..=o.max_time_scaled),
        }
    }

    fn params(&self) -> Value {
        json!({
            "alpha": self.alpha, "beta": self.beta, "nbar": self.nbar, "k": self.k,
            "r_a": self.r_a, "r_b": self.r_b, "t": self.t,
        })
    }
}

fn modes(b: Bipartition) -> (Mode, Mode) {
    match b {
        Bipartition::AB => (Mode::A, Mode::B),
        Bipartition::AC => (Mode::A, Mode::C),
        Bipartition::BC => (Mode::B, Mode::C),
    }
}

/// Per sample: relative `D` deviation for AB, AC, BC, then the norm drift.
fn cv_deviations(s: &CvSample, truncation: f64) -> Result<[f64; 4]> {
    let cfg = FockConfig::for_coherent_thermal_with_tolerance(s.alpha, s.beta, s.nbar, s.k, truncation)?;
    let kind = InitialKind::CoherentThermal {
        alpha: C64::new(s.alpha, 0.0),
        beta: C64::new(s.beta, 0.0),
        nbar: s.nbar,
    };
    let state = build_initial_state(&kind, &cfg)?;
    let p = SystemParams::from_dimensionless(s.k, s.r_a, s.r_b, 1.0)?;
    let init = CVInitialState::real(s.alpha, s.beta, s.nbar)?;
    let t = ScaledTime::new(s.t)?;
    let mut out = [0.0; 4];
    for (slot, b) in out.iter_mut().zip(Bipartition::ALL) {
        let (m1, m2) = modes(b);
        let brute = duan_from_moments(&evolved_moments(&state, s.t, s.k, s.r_a, s.r_b, m1, m2)?)?;
        let closed = duan(b, t, &init, &p)?.d;
        *slot = (brute - closed).abs() / closed.abs();
    }
    out[3] = (apply_evolution(&state, s.t, s.k, s.r_a, s.r_b).trace() - state.trace()).abs();
    Ok(out)
}

/// Compares every closed form against the Fock oracle on points drawn from
/// `cfg.seed`.
pub fn run_oracle_check(cfg: &RunConfig) -> Result<OracleReport> {
    if cfg.command != Command::OracleCheck {
        return Err(config_error("command", format!("{} cannot run the oracle check", cfg.command)));
    }
    let o = &cfg.oracle;
    let tol = |default: f64| o.tolerance_override.unwrap_or(default);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let qubit_samples: Vec<(f64, f64)> = o
        .qubit_couplings
        .iter()
        .flat_map(|&k| (0..o.qubit_points).map(move |_| k).collect::<Vec<_>>())
        .map(|k| (k, rng.random_range(0.0..=o.max_time_scaled)))
        .collect();
    let cv_samples: Vec<CvSample> = (0..o.cv_points).map(|_| CvSample::draw(&mut rng, cfg, o.max_k)).collect();
    let zero_samples: Vec<CvSample> = (0..o.zero_coupling_points)
        .map(|_| CvSample::draw(&mut rng, cfg, 0.0))
        .collect();

    let qubit = qubit_samples
        .par_iter()
        .map(|&(k, t)| -> Result<(f64, Value)> {
            let fock = FockConfig::for_qubit(k)?;
            let psi = build_initial_state(&InitialKind::Qubit, &fock)?;
            let brute = apply_evolution(&psi, t, k, 0.0, 0.0).partial_trace(&[Mode::A, Mode::B])?;
            let closed = reduced_rho_ab(ScaledTime::new(t)?, k)?;
            let mut dev: f64 = 0.0;
            for i in 0..4 {
                for j in 0..4 {
                    dev = dev.max((brute.get(i, j) - closed.get(i, j)).norm());
                }
            }
            Ok((dev, json!({ "k": k, "t": t })))
        })
        .collect::<Result<Vec<_>>>()?;

    let cv = cv_samples
        .par_iter()
        .map(|s| cv_deviations(s, crate::oracle::DEFAULT_TOLERANCE).map(|d| (d, s.params())))
        .collect::<Result<Vec<_>>>()?;
    let zero = zero_samples
        .par_iter()
        .map(|s| cv_deviations(s, 1e-15).map(|d| (d, s.params())))
        .collect::<Result<Vec<_>>>()?;

    let pick = |rows: &[([f64; 4], Value)], i: usize| -> Vec<(f64, Value)> {
        rows.iter().map(|(d, p)| (d[i], p.clone())).collect()
    };
    let mut zero_all = Vec::new();
    for i in 0..3 {
        zero_all.extend(pick(&zero, i));
    }
    let mut norms = pick(&cv, 3);
    norms.extend(pick(&zero, 3));

    let checks = vec![
        summarize("qubit_reduced_state", tol(QUBIT_TOLERANCE), qubit),
        summarize("cv_duan_ab", tol(CV_TOLERANCE), pick(&cv, 0)),
        summarize("cv_duan_ac", tol(CV_TOLERANCE), pick(&cv, 1)),
        summarize("cv_duan_bc", tol(CV_TOLERANCE), pick(&cv, 2)),
        summarize("zero_coupling", tol(ZERO_COUPLING_TOLERANCE), zero_all),
        summarize("norm_drift", tol(NORM_TOLERANCE), norms),
    ];
    Ok(OracleReport {
        seed: cfg.seed,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(sets: &[&str]) -> RunConfig {
        let mut all = vec![
            "oracle.qubit_points=3".to_string(),
            "oracle.cv_points=2".to_string(),
            "oracle.zero_coupling_points=1".to_string(),
            "oracle.max_amplitude=0.5".to_string(),
            "oracle.max_nbar=0.2".to_string(),
            "oracle.max_k=0.5".to_string(),
        ];
        all.extend(sets.iter().map(|s| s.to_string()));
        RunConfig::resolve(Command::OracleCheck, None, &all).unwrap()
    }

    #[test]
    fn passes_and_is_deterministic() {
        let cfg = small(&[]);
        let a = run_oracle_check(&cfg).unwrap();
        assert!(a.passed, "{a:#?}");
        assert_eq!(a.checks.len(), 6);
        assert!(a.checks.iter().all(|c| c.max_deviation < 1e-6));
        let b = run_oracle_check(&cfg).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn impossible_tolerance_fails_with_parameters() {
        let r = run_oracle_check(&small(&["oracle.tolerance_override=1e-30"])).unwrap();
        assert!(!r.passed);
        let failed = r.checks.iter().find(|c| !c.passed).unwrap();
        assert!(!failed.failures.is_empty());
        assert!(failed.failures[0].get("deviation").is_some());
    }

    #[test]
    fn summary_treats_nan_as_failure() {
        let c = summarize("x", 1.0, vec![(f64::NAN, json!({}))]);
        assert!(!c.passed);
        assert_eq!(c.max_deviation, f64::INFINITY);
    }
}
