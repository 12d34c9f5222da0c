//! Brute-force dynamics in a truncated number basis `|n, m, ℓ⟩`.
//!
//! The evolution operator is applied in factored form: Kerr phase, conditional
//! mechanical displacement, free optical phases, mechanical rotation. Nothing
//! here shares code with the closed forms except [`crate::duan::duan_from_moments`].

mod displacement;
mod evolution;
mod state;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use displacement::{displacement_columns, displacement_matrix};
pub use evolution::{apply_evolution, evolved_moments};
pub use state::{build_initial_state, InitialKind, TriModeState};

/// Default truncation budget on discarded probability.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Mode {
    A,
    B,
    C,
}

impl Mode {
    pub fn axis(self) -> usize {
        match self {
            Mode::A => 0,
            Mode::B => 1,
            Mode::C => 2,
        }
    }
}

/// Photon and phonon cutoffs (largest kept number state per mode).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FockConfig {
    pub n_max_a: usize,
    pub n_max_b: usize,
    pub n_max_c: usize,
    pub tolerance: f64,
}

/// `Σ_{n > n_max} e^{-x} x^n / n!` for `x = |α|²`.
pub fn coherent_tail(alpha_sq: f64, n_max: usize) -> f64 {
    if alpha_sq == 0.0 {
        return 0.0;
    }
    let mut term = (-alpha_sq).exp();
    for n in 1..=n_max + 1 {
        term *= alpha_sq / n as f64;
    }
    let mut tail = 0.0;
    let mut n = n_max + 1;
    while term > 1e-300 {
        tail += term;
        n += 1;
        term *= alpha_sq / n as f64;
        if n > n_max + 10_000 {
            break;
        }
    }
    tail
}

/// `Σ_{ℓ > ℓ_max} p_ℓ = q^{ℓ_max + 1}` with `q = n̄/(n̄ + 1)`.
pub fn thermal_tail(nbar: f64, l_max: usize) -> f64 {
    (nbar / (nbar + 1.0)).powi(l_max as i32 + 1)
}

/// Smallest `ℓ_max` whose thermal tail is below `tolerance`.
pub fn thermal_cutoff(nbar: f64, tolerance: f64) -> usize {
    if nbar <= 0.0 {
        return 0;
    }
    let q = nbar / (nbar + 1.0);
    let l = (tolerance.ln() / q.ln()).ceil() as i64 - 1;
    let mut l = l.max(0) as usize;
    while thermal_tail(nbar, l) >= tolerance {
        l += 1;
    }
    l
}

/// `ceil(|α|² + 8|α| + 8)`.
pub fn optical_cutoff(alpha_abs: f64) -> usize {
    (alpha_abs * alpha_abs + 8.0 * alpha_abs + 8.0).ceil() as usize
}

fn tight_optical_cutoff(alpha_abs: f64, tol: f64) -> usize {
    let mut n = optical_cutoff(alpha_abs);
    while coherent_tail(alpha_abs * alpha_abs, n) >= tol {
        n += 1;
    }
    n
}

/// Smallest `Δ` with `P(|n − m| > Δ) < tolerance` for independent Poisson
/// photon numbers of means `|α|²`, `|β|²`, capped by the cutoffs.
pub fn significant_imbalance(alpha_abs: f64, beta_abs: f64, n_max_a: usize, n_max_b: usize, tolerance: f64) -> usize {
    let pmf = |x: f64, n_max: usize| {
        let mut p = Vec::with_capacity(n_max + 1);
        let mut term = (-x).exp();
        for n in 0..=n_max {
            p.push(term);
            term *= x / (n + 1) as f64;
        }
        p
    };
    let pa = pmf(alpha_abs * alpha_abs, n_max_a);
    let pb = pmf(beta_abs * beta_abs, n_max_b);
    let cap = n_max_a.max(n_max_b);
    let mut by_gap = vec![0.0; cap + 1];
    for (n, x) in pa.iter().enumerate() {
        for (m, y) in pb.iter().enumerate() {
            by_gap[n.abs_diff(m)] += x * y;
        }
    }
    let mut tail: f64 = by_gap.iter().sum::<f64>();
    for (gap, w) in by_gap.iter().enumerate() {
        tail -= w;
        if tail < tolerance {
            return gap.max(1);
        }
    }
    cap
}

/// Room for the largest conditional displacement `2k·Δn` applied to phonon
/// numbers up to `l_max`, plus eight standard deviations.
pub fn mechanical_cutoff(l_max: usize, k: f64, max_imbalance: usize) -> usize {
    let reach = (l_max as f64).sqrt() + 2.0 * k.abs() * max_imbalance as f64 + 8.0;
    (reach * reach).ceil() as usize
}

impl FockConfig {
    pub fn new(n_max_a: usize, n_max_b: usize, n_max_c: usize, tolerance: f64) -> Result<Self> {
        let cfg = Self {
            n_max_a,
            n_max_b,
            n_max_c,
            tolerance,
        };
        if n_max_a < 1 || n_max_b < 1 || n_max_c < 1 {
            return Err(Error::Truncation("all cutoffs must be >= 1".into()));
        }
        if !(tolerance > 0.0 && tolerance < 1.0) {
            return Err(Error::Truncation("tolerance must lie in (0, 1)".into()));
        }
        Ok(cfg)
    }

    /// Default cutoffs for coherent amplitudes `|α|`, `|β|`, occupation `n̄`
    /// and coupling `k`.
    pub fn for_coherent_thermal(alpha_abs: f64, beta_abs: f64, nbar: f64, k: f64) -> Result<Self> {
        Self::for_coherent_thermal_with_tolerance(alpha_abs, beta_abs, nbar, k, DEFAULT_TOLERANCE)
    }

    /// As [`Self::for_coherent_thermal`] with an explicit tail budget.
    pub fn for_coherent_thermal_with_tolerance(alpha_abs: f64, beta_abs: f64, nbar: f64, k: f64, tol: f64) -> Result<Self> {
        if !(tol > 0.0 && tol < 1.0) {
            return Err(Error::Truncation("tolerance must lie in (0, 1)".into()));
        }
        let (na, nb) = (tight_optical_cutoff(alpha_abs, tol), tight_optical_cutoff(beta_abs, tol));
        let l_max = thermal_cutoff(nbar, tol);
        let nc = mechanical_cutoff(l_max, k, significant_imbalance(alpha_abs, beta_abs, na, nb, tol));
        let cfg = Self::new(na, nb, nc, tol)?;
        cfg.validate_for(alpha_abs, beta_abs, nbar)?;
        Ok(cfg)
    }

    /// Cutoffs for vacuum/one-photon inputs with the mirror in its ground state.
    pub fn for_qubit(k: f64) -> Result<Self> {
        Self::new(1, 1, mechanical_cutoff(0, k, 1), DEFAULT_TOLERANCE)
    }

    /// Every cutoff doubled.
    pub fn doubled(&self) -> Self {
        Self {
            n_max_a: 2 * self.n_max_a,
            n_max_b: 2 * self.n_max_b,
            n_max_c: 2 * self.n_max_c,
            tolerance: self.tolerance,
        }
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.n_max_a + 1, self.n_max_b + 1, self.n_max_c + 1)
    }

    /// Checks the coherent and thermal tail masses against the budget.
    pub fn validate_for(&self, alpha_abs: f64, beta_abs: f64, nbar: f64) -> Result<()> {
        for (name, amp, cut) in [("A", alpha_abs, self.n_max_a), ("B", beta_abs, self.n_max_b)] {
            let tail = coherent_tail(amp * amp, cut);
            if tail >= self.tolerance {
                return Err(Error::Truncation(format!(
                    "mode {name}: coherent tail {tail:e} beyond n_max = {cut} exceeds {:e}",
                    self.tolerance
                )));
            }
        }
        let tail = thermal_tail(nbar, self.n_max_c);
        if nbar > 0.0 && tail >= self.tolerance {
            return Err(Error::Truncation(format!(
                "mode C: thermal tail {tail:e} beyond n_max = {} exceeds {:e}",
                self.n_max_c, self.tolerance
            )));
        }
        Ok(())
    }
}
