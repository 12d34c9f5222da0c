use optomech::duan::{duan, duan_from_moments, Bipartition, CVInitialState};
use optomech::oracle::{build_initial_state, evolved_moments, FockConfig, InitialKind, Mode, TriModeState};
use optomech::qubit::reduced_rho_ab;
use optomech::{ScaledTime, SystemParams, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn modes(b: Bipartition) -> (Mode, Mode) {
    match b {
        Bipartition::AB => (Mode::A, Mode::B),
        Bipartition::AC => (Mode::A, Mode::C),
        Bipartition::BC => (Mode::B, Mode::C),
    }
}

#[test]
fn qubit_reduced_state_matches_partial_trace() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for &k in &[0.1, 0.5, 1.0] {
        let cfg = FockConfig::for_qubit(k).unwrap();
        let psi0 = build_initial_state(&InitialKind::Qubit, &cfg).unwrap();
        for _ in 0..50 {
            let t = rng.random_range(0.0..4.0 * std::f64::consts::PI);
            let evolved = optomech::oracle::apply_evolution(&psi0, t, k, 0.0, 0.0);
            let brute = evolved.partial_trace(&[Mode::A, Mode::B]).unwrap();
            let closed = reduced_rho_ab(ScaledTime::new(t).unwrap(), k).unwrap();
            for i in 0..4 {
                for j in 0..4 {
                    let d = (brute.get(i, j) - closed.get(i, j)).norm();
                    assert!(d < 1e-8, "k={k} t={t} ({i},{j}): {d:e}");
                }
            }
        }
    }
}

#[test]
fn duan_variances_match_evolved_moments() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..20 {
        let alpha: f64 = rng.random_range(0.0..1.0);
        let beta: f64 = rng.random_range(0.0..1.0);
        let nbar: f64 = rng.random_range(0.0..0.5);
        let k: f64 = rng.random_range(0.0..1.0);
        let r_a: f64 = rng.random_range(0.5..5.0);
        let r_b: f64 = rng.random_range(0.5..5.0);
        let t: f64 = rng.random_range(0.0..4.0 * std::f64::consts::PI);
        let cfg = FockConfig::for_coherent_thermal(alpha, beta, nbar, k).unwrap();
        let kind = InitialKind::CoherentThermal {
            alpha: C64::new(alpha, 0.0),
            beta: C64::new(beta, 0.0),
            nbar,
        };
        let state: TriModeState = build_initial_state(&kind, &cfg).unwrap();
        let p = SystemParams::from_dimensionless(k, r_a, r_b, 1.0).unwrap();
        let init = CVInitialState::real(alpha, beta, nbar).unwrap();
        for b in Bipartition::ALL {
            let (m1, m2) = modes(b);
            let mom = evolved_moments(&state, t, k, r_a, r_b, m1, m2).unwrap();
            let brute = duan_from_moments(&mom).unwrap();
            let closed = duan(b, ScaledTime::new(t).unwrap(), &init, &p).unwrap().d;
            let rel = (brute - closed).abs() / closed.abs();
            assert!(rel < 1e-6, "trial {trial} {b:?}: brute {brute} closed {closed} (α={alpha}, β={beta}, n̄={nbar}, k={k}, t={t})");
        }
    }
}
