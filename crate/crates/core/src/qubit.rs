//! Vacuum/one-photon "qubit" inputs on both optical modes with the mirror in
//! its ground state.
//!
//! Branch `|nm⟩` (index `2n + m`) picks up the Kerr phase `e^{-iB(n-m)²}` and
//! drags the mirror to the coherent state `|k(n-m)ξ⟩` in the interaction
//! picture. The `|01⟩` branch therefore carries `e^{-iB}` and `-kξ`, and the
//! reduced matrix has `ρ_{00,01} = e^{iB - k²|η|²/2} / 4`.

use nalgebra::DMatrix;
use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::{concurrence, von_neumann_entropy, DensityMatrix, EntropyBase};
use crate::error::{domain, Result};
use crate::physics::{big_b, eta_norm_sqr, xi, ScaledTime};
use crate::scalar::{lit, Field, Real};

/// Photon-number difference `n - m` of each branch in basis order.
pub const BRANCH_IMBALANCE: [i32; 4] = [0, -1, 1, 0];

/// The exact evolved three-partite state: four optical branches, each tied to
/// a mechanical coherent state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitJointState<S> {
    pub t: S,
    /// `c_00, c_01, c_10, c_11`.
    pub amplitudes: [Complex<S>; 4],
    /// Mechanical coherent amplitudes `d_00, d_01, d_10, d_11`.
    pub displacements: [Complex<S>; 4],
}

impl<S: Real> QubitJointState<S> {
    pub fn norm_sqr(&self) -> S {
        self.amplitudes
            .iter()
            .fold(S::zero(), |acc, c| acc + c.norm_sqr())
    }

    /// `⟨d_j|d_i⟩` for two coherent states.
    pub fn mechanical_overlap(&self, i: usize, j: usize) -> Complex<S> {
        let (gi, gj) = (self.displacements[i], self.displacements[j]);
        let half: S = lit(0.5);
        (gj.conj() * gi - Complex::from(half * (gi.norm_sqr() + gj.norm_sqr()))).exp()
    }

    /// `Tr_C |ψ⟩⟨ψ|` assembled from branch amplitudes and mechanical overlaps.
    pub fn reduced_ab(&self) -> DensityMatrix<S>
    where
        S: Field,
    {
        let m = DMatrix::from_fn(4, 4, |i, j| {
            self.amplitudes[i] * self.amplitudes[j].conj() * self.mechanical_overlap(i, j)
        });
        DensityMatrix::new_unchecked(m)
    }
}

fn check_k<S: Real>(k: S) -> Result<()> {
    if !(k.is_finite() && k >= S::zero()) {
        return domain("coupling k must be finite and >= 0");
    }
    Ok(())
}

pub fn evolve_qubit_state<S: Real>(t: ScaledTime<S>, k: S) -> Result<QubitJointState<S>> {
    check_k(k)?;
    let t = t.value();
    let b = big_b(t, k);
    let x = xi(t);
    let half: S = lit(0.5);
    let mut amplitudes = [Complex::from(S::zero()); 4];
    let mut displacements = [Complex::from(S::zero()); 4];
    for (idx, &n) in BRANCH_IMBALANCE.iter().enumerate() {
        let n: S = lit(f64::from(n));
        amplitudes[idx] = Complex::from_polar(half, -b * n * n);
        displacements[idx] = x * (k * n);
    }
    Ok(QubitJointState {
        t,
        amplitudes,
        displacements,
    })
}

/// Closed-form `ρ_AB(t)`:
/// `ρ_ij = ¼ exp(-iB(N_i² - N_j²) - k²|η|²(N_i - N_j)²/2)`.
pub fn reduced_rho_ab<S: Field>(t: ScaledTime<S>, k: S) -> Result<DensityMatrix<S>> {
    check_k(k)?;
    let t = t.value();
    let b = big_b(t, k);
    let damp = k * k * eta_norm_sqr(t) * lit(0.5);
    let quarter: S = lit(0.25);
    let m = DMatrix::from_fn(4, 4, |i, j| {
        let ni: S = lit(f64::from(BRANCH_IMBALANCE[i]));
        let nj: S = lit(f64::from(BRANCH_IMBALANCE[j]));
        let d = ni - nj;
        let modulus = quarter * num_traits::Float::exp(-damp * d * d);
        Complex::from_polar(modulus, -b * (ni * ni - nj * nj))
    });
    Ok(DensityMatrix::new_unchecked(m))
}

/// Pointwise entanglement measure for [`timeseries`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Concurrence,
    Entropy(EntropyBase),
}

pub fn measure_at<S: Field>(measure: Measure, t: S, k: S) -> Result<S> {
    let rho = reduced_rho_ab(ScaledTime::new(t)?, k)?;
    match measure {
        Measure::Concurrence => concurrence(&rho),
        Measure::Entropy(base) => von_neumann_entropy(&rho, base),
    }
}

/// Evaluates `measure` on every grid point, in grid order.
pub fn timeseries<S: Field>(measure: Measure, k: S, grid: &[S]) -> Result<Vec<(S, S)>> {
    if grid.is_empty() {
        return domain("time grid is empty");
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return domain("time grid must be strictly increasing");
    }
    check_k(k)?;
    grid.par_iter()
        .map(|&t| measure_at(measure, t, k).map(|v| (t, v)))
        .collect()
}

/// `n` evenly spaced points covering `[start, end]` inclusive.
pub fn linspace<S: Real>(start: S, end: S, n: usize) -> Vec<S> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (end - start) / lit((n - 1) as f64);
            (0..n)
                .map(|i| if i == n - 1 { end } else { start + step * lit(i as f64) })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn st(t: f64) -> ScaledTime<f64> {
        ScaledTime::new(t).unwrap()
    }

    #[test]
    fn initial_state() {
        let s = evolve_qubit_state(st(0.0), 0.7).unwrap();
        for i in 0..4 {
            assert_abs_diff_eq!(s.amplitudes[i].re, 0.5, epsilon = 1e-15);
            assert_abs_diff_eq!(s.displacements[i].norm(), 0.0, epsilon = 1e-15);
        }
        let rho = reduced_rho_ab(st(0.0), 0.7).unwrap();
        for z in rho.matrix().iter() {
            assert_abs_diff_eq!(z.re, 0.25, epsilon = 1e-15);
            assert_abs_diff_eq!(z.im, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn full_period_state() {
        let s = evolve_qubit_state(st(2.0 * PI), 0.5).unwrap();
        for i in 0..4 {
            assert!(s.displacements[i].norm() < 1e-14);
        }
        let expected = Complex::from_polar(0.5, PI / 2.0);
        assert!((s.amplitudes[1] - expected).norm() < 1e-14);
        assert!((s.amplitudes[2] - expected).norm() < 1e-14);
        assert!((s.displacements[1] + s.displacements[2]).norm() < 1e-15);
    }

    #[test]
    fn half_period_entry() {
        let k = 0.5;
        let rho = reduced_rho_ab(st(PI), k).unwrap();
        let b = -k * k * PI;
        let expected = Complex::new(0.0, b).exp() * (-k * k * 4.0 / 2.0_f64).exp() / 4.0;
        assert!((rho.get(0, 1) - expected).norm() < 1e-15);
    }

    #[test]
    fn pure_at_full_periods() {
        for n in 1..4 {
            let t = 2.0 * PI * n as f64;
            let k = 0.5;
            let rho = reduced_rho_ab(st(t), k).unwrap();
            let c = concurrence(&rho).unwrap();
            assert_abs_diff_eq!(c, big_b(t, k).sin().abs(), epsilon = 1e-10);
            let s = von_neumann_entropy(&rho, EntropyBase::Bits).unwrap();
            assert_abs_diff_eq!(s, 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn zero_coupling_is_separable() {
        let grid = linspace(0.0, 4.0 * PI, 64);
        let c = timeseries(Measure::Concurrence, 0.0, &grid).unwrap();
        assert!(c.iter().all(|&(_, v)| v.abs() < 1e-12));
    }

    #[test]
    fn grid_validation() {
        assert!(timeseries::<f64>(Measure::Concurrence, 0.5, &[]).is_err());
        assert!(timeseries(Measure::Concurrence, 0.5, &[0.0, 1.0, 1.0]).is_err());
        assert!(evolve_qubit_state(st(1.0), -0.1).is_err());
    }

    #[test]
    fn single_precision_closed_form() {
        let rho = reduced_rho_ab(ScaledTime::new(2.0 * std::f32::consts::PI).unwrap(), 0.5f32).unwrap();
        let c = concurrence(&rho).unwrap();
        assert!((c - 1.0).abs() < 1e-3);
    }

    proptest! {
        #[test]
        fn closed_form_matches_branch_assembly(t in 0.0..(4.0 * PI), k in 0.0..1.5_f64) {
            let s = evolve_qubit_state(st(t), k).unwrap();
            prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-14);
            let a = s.reduced_ab();
            let b = reduced_rho_ab(st(t), k).unwrap();
            for i in 0..4 {
                for j in 0..4 {
                    prop_assert!((a.get(i, j) - b.get(i, j)).norm() < 1e-14);
                }
            }
        }

        #[test]
        fn reduced_state_is_physical(t in 0.0..(8.0 * PI), k in 0.0..2.0_f64) {
            let rho = reduced_rho_ab(st(t), k).unwrap();
            prop_assert!(rho.validate().is_ok());
            let c = concurrence(&rho).unwrap();
            prop_assert!((0.0..=1.0 + 1e-12).contains(&c));
        }
    }
}
