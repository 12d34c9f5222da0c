use std::f64::consts::PI;

use optomech::duan::{duan, duan_from_moments, Bipartition, CVInitialState};
use optomech::oracle::{
    apply_evolution, build_initial_state, displacement_columns, evolved_moments, FockConfig, InitialKind, Mode,
    TriModeState,
};
use optomech::constants::HBAR;
use optomech::physics::{big_b, energy_eigenvalue, eta, eta_norm_sqr, xi};
use optomech::qubit::{measure_at, reduced_rho_ab, Measure};
use optomech::{concurrence, von_neumann_entropy, EntropyBase, ScaledTime, SystemParams, C64};
use ndarray::Array3;
use proptest::prelude::*;

fn coherent_thermal(alpha: f64, beta: f64, nbar: f64, cfg: &FockConfig) -> TriModeState {
    let kind = InitialKind::CoherentThermal {
        alpha: C64::new(alpha, 0.0),
        beta: C64::new(beta, 0.0),
        nbar,
    };
    build_initial_state(&kind, cfg).unwrap()
}

fn oracle_duan(state: &TriModeState, b: Bipartition, t: f64, k: f64, r_a: f64, r_b: f64) -> f64 {
    let (m1, m2) = match b {
        Bipartition::AB => (Mode::A, Mode::B),
        Bipartition::AC => (Mode::A, Mode::C),
        Bipartition::BC => (Mode::B, Mode::C),
    };
    duan_from_moments(&evolved_moments(state, t, k, r_a, r_b, m1, m2).unwrap()).unwrap()
}

proptest! {
    #[test]
    fn time_function_identities(t in 0.0..40.0_f64, k in 0.0..3.0_f64) {
        let e = eta(t);
        let x = xi(t);
        prop_assert!((x - C64::from_polar(1.0, t) * e).norm() < 1e-12);
        prop_assert!((x + e.conj()).norm() < 1e-12);
        prop_assert!((eta_norm_sqr(t) - 2.0 * (1.0 - t.cos())).abs() < 1e-12);
        prop_assert!((eta_norm_sqr(t) - e.norm_sqr()).abs() < 1e-12);
        prop_assert!((big_b(t, k) + k * k * (t - t.sin())).abs() < 1e-12 * (1.0 + k * k * t));
    }

    #[test]
    fn reduced_qubit_state_is_a_density_matrix(t in 0.0..30.0_f64, k in 0.0..2.0_f64) {
        let rho = reduced_rho_ab(ScaledTime::new(t).unwrap(), k).unwrap();
        prop_assert!(rho.validate().is_ok());
        prop_assert!((rho.trace().re - 1.0).abs() < 1e-12);
        let p = rho.purity();
        prop_assert!((0.25 - 1e-12..=1.0 + 1e-12).contains(&p));
        let c = concurrence(&rho).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&c));
        let s = von_neumann_entropy(&rho, EntropyBase::Bits).unwrap();
        prop_assert!((-1e-12..=2.0 + 1e-12).contains(&s));
    }

    #[test]
    fn zero_coupling_floors(t in 0.0..50.0_f64, a in 0.0..2.0_f64, b in 0.0..2.0_f64, nbar in 0.0..3.0_f64) {
        let p = SystemParams::from_dimensionless(0.0, 3.0, 4.0, 1.0).unwrap();
        let s = CVInitialState::real(a, b, nbar).unwrap();
        let st = ScaledTime::new(t).unwrap();
        prop_assert!((duan(Bipartition::AB, st, &s, &p).unwrap().d - 1.0).abs() < 1e-12);
        prop_assert!((duan(Bipartition::AC, st, &s, &p).unwrap().d - 1.0 - nbar).abs() < 1e-12);
        prop_assert!((duan(Bipartition::BC, st, &s, &p).unwrap().d - 1.0 - nbar).abs() < 1e-12);
        prop_assert!(measure_at(Measure::Concurrence, t, 0.0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn initial_values(a in 0.0..2.0_f64, b in 0.0..2.0_f64, nbar in 0.0..3.0_f64, k in 0.0..2.0_f64) {
        let p = SystemParams::from_dimensionless(k, 3.0, 4.0, 1.0).unwrap();
        let s = CVInitialState::real(a, b, nbar).unwrap();
        let st = ScaledTime::new(0.0).unwrap();
        prop_assert!((duan(Bipartition::AB, st, &s, &p).unwrap().d - 1.0).abs() < 1e-12);
        prop_assert!((duan(Bipartition::AC, st, &s, &p).unwrap().d - 1.0 - nbar).abs() < 1e-12);
        prop_assert!((duan(Bipartition::BC, st, &s, &p).unwrap().d - 1.0 - nbar).abs() < 1e-12);
    }
}

#[test]
fn norm_is_preserved() {
    let (k, r_a, r_b) = (0.8, 2.0, 3.0);
    let cfg = FockConfig::for_coherent_thermal(0.9, 0.7, 0.3, k).unwrap();
    let state = coherent_thermal(0.9, 0.7, 0.3, &cfg);
    for &t in &[0.4, 2.0, 5.5, 11.0] {
        let drift = (apply_evolution(&state, t, k, r_a, r_b).trace() - state.trace()).abs();
        assert!(drift < 1e-10, "t = {t}: {drift:e}");
    }
}

#[test]
fn energy_is_conserved() {
    let (k, r_a, r_b) = (0.7, 1.5, 2.5);
    let cfg = FockConfig::for_coherent_thermal(1.0, 0.6, 0.2, k).unwrap();
    let state = coherent_thermal(1.0, 0.6, 0.2, &cfg);
    let e0 = state.energy(k, r_a, r_b);
    for &t in &[0.3, 1.7, 4.0, 9.0] {
        let e = apply_evolution(&state, t, k, r_a, r_b).energy(k, r_a, r_b);
        assert!(((e - e0) / e0).abs() < 1e-8, "t = {t}: {e} vs {e0}");
    }
}

#[test]
fn displaced_number_states_are_stationary() {
    let (k, r_a, r_b) = (0.6, 1.3, 2.1);
    let p = SystemParams::from_dimensionless(k, r_a, r_b, 1.0).unwrap();
    let dims = (4, 4, 90);
    for &(n, m, l) in &[(0usize, 0usize, 0usize), (2, 0, 1), (1, 3, 2), (3, 1, 0)] {
        let shift = C64::new(k * (n as f64 - m as f64), 0.0);
        let col = displacement_columns(shift, dims.2 - 1, l + 1);
        let mut psi = Array3::zeros(dims);
        for j in 0..dims.2 {
            psi[[n, m, j]] = col[[j, l]];
        }
        let energy = energy_eigenvalue(n as i64, m as i64, l as i64, &p).unwrap() / HBAR;
        for &t in &[0.5, 2.0, 7.0] {
            let evolved = apply_evolution(&TriModeState::Pure(psi.clone()), t, k, r_a, r_b);
            let TriModeState::Pure(out) = evolved else { unreachable!() };
            let overlap: C64 = psi.iter().zip(out.iter()).map(|(a, b)| a.conj() * b).sum();
            assert!((overlap.norm() - 1.0).abs() < 1e-8, "|{n}{m}{l}> t={t}: {}", overlap.norm());
            assert!((overlap - C64::from_polar(1.0, -energy * t)).norm() < 1e-8);
        }
    }
}

#[test]
fn doubling_cutoffs_is_stable() {
    let (a, b, nbar, k, r_a, r_b) = (0.5, 0.5, 0.2, 0.75, 3.0, 3.0);
    let cfg = FockConfig::for_coherent_thermal(a, b, nbar, k).unwrap();
    let base = coherent_thermal(a, b, nbar, &cfg);
    let wide = coherent_thermal(a, b, nbar, &cfg.doubled());
    for &t in &[1.0, 3.3, 8.0] {
        for bip in Bipartition::ALL {
            let d0 = oracle_duan(&base, bip, t, k, r_a, r_b);
            let d1 = oracle_duan(&wide, bip, t, k, r_a, r_b);
            assert!((d0 - d1).abs() < 1e-8, "{bip:?} t={t}: {d0} vs {d1}");
        }
    }
    let k = 0.5;
    let cfg = FockConfig::for_qubit(k).unwrap();
    let mut wide_cfg = cfg.doubled();
    wide_cfg.n_max_a = 1;
    wide_cfg.n_max_b = 1;
    let base = build_initial_state(&InitialKind::Qubit, &cfg).unwrap();
    let wide = build_initial_state(&InitialKind::Qubit, &wide_cfg).unwrap();
    for &t in &[1.0, 2.0 * PI, 9.0] {
        let c0 = concurrence(&apply_evolution(&base, t, k, 0.0, 0.0).partial_trace(&[Mode::A, Mode::B]).unwrap()).unwrap();
        let c1 = concurrence(&apply_evolution(&wide, t, k, 0.0, 0.0).partial_trace(&[Mode::A, Mode::B]).unwrap()).unwrap();
        assert!((c0 - c1).abs() < 1e-8);
    }
}

#[test]
fn zero_coupling_oracle_is_exact() {
    let cfg = FockConfig::for_coherent_thermal_with_tolerance(0.8, 0.6, 0.4, 0.0, 1e-15).unwrap();
    let state = coherent_thermal(0.8, 0.6, 0.4, &cfg);
    for &t in &[0.0, 1.2, 6.0] {
        assert!((oracle_duan(&state, Bipartition::AB, t, 0.0, 2.0, 3.0) - 1.0).abs() < 1e-12);
        assert!((oracle_duan(&state, Bipartition::AC, t, 0.0, 2.0, 3.0) - 1.4).abs() < 1e-12);
        assert!((oracle_duan(&state, Bipartition::BC, t, 0.0, 2.0, 3.0) - 1.4).abs() < 1e-12);
    }
}

#[test]
fn dwell_below_threshold_shrinks_with_temperature() {
    use optomech::duan::dwell_fraction;
    use optomech::sweeps::{Command, RunConfig};

    let dwell: Vec<f64> = [0.1e-6, 0.4e-6, 0.8e-6]
        .iter()
        .map(|&t| {
            let cfg = RunConfig::resolve(Command::Fig3, None, &[format!("temperature_kelvin={t}")]).unwrap();
            let state = CVInitialState::real(cfg.alpha, cfg.beta, cfg.nbar().unwrap()).unwrap();
            dwell_fraction(Bipartition::AB, &state, &cfg.system().unwrap(), cfg.window_length(), 2000).unwrap()
        })
        .collect();
    assert!(dwell[0] > dwell[1] && dwell[1] > dwell[2], "{dwell:?}");
    assert!(dwell[2] > 0.0);
}
