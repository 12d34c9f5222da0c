use nalgebra::DMatrix;
use ndarray::{Array2, Array3, Axis};
use serde::{Deserialize, Serialize};

use super::{thermal_cutoff, FockConfig, Mode};
use crate::density::DensityMatrix;
use crate::duan::ModeMoments;
use crate::error::{Error, Result};
use crate::C64;

/// Largest reduced dimension [`TriModeState::partial_trace`] will build.
pub const MAX_REDUCED_DIM: usize = 4096;

/// A three-mode state with amplitude tensors indexed `(n_A, m_B, ℓ_C)`.
///
/// Mixed states are stored as an ensemble of weighted pure components rather
/// than a dense density matrix over the full product space.
#[derive(Debug, Clone, PartialEq)]
pub enum TriModeState {
    Pure(Array3<C64>),
    Mixture(Vec<(f64, Array3<C64>)>),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialKind {
    /// `(|0⟩ + |1⟩)/√2` on each optical mode, mirror in its ground state.
    Qubit,
    /// `|α⟩⟨α| ⊗ |β⟩⟨β| ⊗ ρ_th(n̄)`.
    CoherentThermal { alpha: C64, beta: C64, nbar: f64 },
}

fn coherent_vector(alpha: C64, n_max: usize) -> Vec<C64> {
    let mut v = Vec::with_capacity(n_max + 1);
    let mut amp = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for n in 0..=n_max {
        v.push(amp);
        amp = amp * alpha / ((n + 1) as f64).sqrt();
    }
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter().map(|z| z / norm).collect()
}

pub fn build_initial_state(kind: &InitialKind, cfg: &FockConfig) -> Result<TriModeState> {
    let dims = cfg.dims();
    match *kind {
        InitialKind::Qubit => {
            let mut psi = Array3::zeros(dims);
            for n in 0..2 {
                for m in 0..2 {
                    psi[[n, m, 0]] = C64::new(0.5, 0.0);
                }
            }
            Ok(TriModeState::Pure(psi))
        }
        InitialKind::CoherentThermal { alpha, beta, nbar } => {
            if !(nbar >= 0.0 && nbar.is_finite()) {
                return Err(Error::Validation("nbar must be finite and >= 0".into()));
            }
            cfg.validate_for(alpha.norm(), beta.norm(), nbar)?;
            let va = coherent_vector(alpha, cfg.n_max_a);
            let vb = coherent_vector(beta, cfg.n_max_b);
            let optical = Array2::from_shape_fn((dims.0, dims.1), |(n, m)| va[n] * vb[m]);
            let with_phonon = |l: usize| {
                let mut psi = Array3::zeros(dims);
                psi.index_axis_mut(Axis(2), l).assign(&optical);
                psi
            };
            if nbar == 0.0 {
                return Ok(TriModeState::Pure(with_phonon(0)));
            }
            let l_max = thermal_cutoff(nbar, cfg.tolerance).min(cfg.n_max_c);
            let q = nbar / (nbar + 1.0);
            let raw: Vec<f64> = (0..=l_max).map(|l| (1.0 - q) * q.powi(l as i32)).collect();
            let total: f64 = raw.iter().sum();
            Ok(TriModeState::Mixture(
                raw.iter()
                    .enumerate()
                    .map(|(l, w)| (w / total, with_phonon(l)))
                    .collect(),
            ))
        }
    }
}

fn lower(psi: &Array3<C64>, axis: usize) -> Array3<C64> {
    let mut out = Array3::zeros(psi.raw_dim());
    for ((i, j, l), &v) in psi.indexed_iter() {
        let mut idx = [i, j, l];
        let n = idx[axis];
        if n == 0 {
            continue;
        }
        idx[axis] -= 1;
        out[idx] = v * (n as f64).sqrt();
    }
    out
}

fn inner(a: &Array3<C64>, b: &Array3<C64>) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

impl TriModeState {
    /// `(weight, amplitudes)` pairs; a pure state is one component of weight 1.
    pub fn components(&self) -> Vec<(f64, &Array3<C64>)> {
        match self {
            TriModeState::Pure(psi) => vec![(1.0, psi)],
            TriModeState::Mixture(parts) => parts.iter().map(|(w, psi)| (*w, psi)).collect(),
        }
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        self.components()[0].1.dim()
    }

    pub fn map_components<F: Fn(&Array3<C64>) -> Array3<C64>>(&self, f: F) -> TriModeState {
        match self {
            TriModeState::Pure(psi) => TriModeState::Pure(f(psi)),
            TriModeState::Mixture(parts) => {
                TriModeState::Mixture(parts.iter().map(|(w, psi)| (*w, f(psi))).collect())
            }
        }
    }

    pub fn trace(&self) -> f64 {
        self.components()
            .iter()
            .map(|(w, psi)| w * psi.iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sum()
    }

    pub fn validate(&self) -> Result<()> {
        let tr = self.trace();
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::Validation(format!("state trace {tr} differs from 1")));
        }
        Ok(())
    }

    fn expect<F: Fn(&Array3<C64>) -> C64>(&self, f: F) -> C64 {
        self.components().iter().map(|(w, psi)| f(psi) * *w).sum()
    }

    /// `⟨a⟩` for the annihilation operator of `mode`.
    pub fn mean_annihilation(&self, mode: Mode) -> C64 {
        self.expect(|psi| inner(psi, &lower(psi, mode.axis())))
    }

    /// `⟨a†a⟩` for `mode`.
    pub fn mean_number(&self, mode: Mode) -> f64 {
        self.expect(|psi| {
            let a = lower(psi, mode.axis());
            C64::new(a.iter().map(|z| z.norm_sqr()).sum(), 0.0)
        })
        .re
    }

    /// Moments feeding the EPR variance of the pair `(first, second)`.
    pub fn moments(&self, first: Mode, second: Mode) -> Result<ModeMoments<f64>> {
        if first == second {
            return Err(Error::Validation("moments need two distinct modes".into()));
        }
        let a1a2 = self.expect(|psi| {
            let two = lower(&lower(psi, second.axis()), first.axis());
            inner(psi, &two)
        });
        Ok(ModeMoments {
            a1: self.mean_annihilation(first),
            a2: self.mean_annihilation(second),
            n1: self.mean_number(first),
            n2: self.mean_number(second),
            a1a2,
        })
    }

    /// `⟨H⟩ / ħω_m` with `H/ħω_m = c†c + r_a a†a + r_b b†b - k(a†a - b†b)(c + c†)`.
    pub fn energy(&self, k: f64, r_a: f64, r_b: f64) -> f64 {
        self.expect(|psi| {
            let c = lower(psi, 2);
            let mut free = 0.0;
            let mut coupling = C64::new(0.0, 0.0);
            for ((n, m, l), v) in psi.indexed_iter() {
                free += v.norm_sqr() * (l as f64 + r_a * n as f64 + r_b * m as f64);
                coupling += v.conj() * c[[n, m, l]] * (n as f64 - m as f64);
            }
            C64::new(free - 2.0 * k * coupling.re, 0.0)
        })
        .re
    }

    /// `⟨ψ|ρ|ψ⟩` for a normalized pure reference.
    pub fn fidelity_with(&self, reference: &Array3<C64>) -> f64 {
        self.components()
            .iter()
            .map(|(w, psi)| w * inner(reference, psi).norm_sqr())
            .sum()
    }

    /// Reduced density matrix on `keep`, with kept modes ordered A, B, C and
    /// the row index running fastest over the last kept mode.
    pub fn partial_trace(&self, keep: &[Mode]) -> Result<DensityMatrix<f64>> {
        let mut kept: Vec<usize> = keep.iter().map(|m| m.axis()).collect();
        kept.sort_unstable();
        kept.dedup();
        if kept.is_empty() {
            return Err(Error::Validation("partial trace must keep at least one mode".into()));
        }
        let traced: Vec<usize> = (0..3).filter(|a| !kept.contains(a)).collect();
        let shape = self.dims();
        let sizes = [shape.0, shape.1, shape.2];
        let dk: usize = kept.iter().map(|&a| sizes[a]).product();
        let dt: usize = traced.iter().map(|&a| sizes[a]).product();
        if dk > MAX_REDUCED_DIM {
            return Err(Error::Validation(format!(
                "reduced dimension {dk} exceeds the supported maximum {MAX_REDUCED_DIM}"
            )));
        }
        let order: Vec<usize> = kept.iter().chain(traced.iter()).copied().collect();
        let mut rho = Array2::<C64>::zeros((dk, dk));
        for (w, psi) in self.components() {
            let flat = psi
                .view()
                .permuted_axes([order[0], order[1], order[2]])
                .as_standard_layout()
                .into_owned()
                .into_shape_with_order((dk, dt))
                .map_err(|e| Error::Validation(e.to_string()))?;
            let adj = flat.t().mapv(|z| z.conj());
            rho = rho + flat.dot(&adj).mapv(|z| z * w);
        }
        Ok(DensityMatrix::new_unchecked(DMatrix::from_fn(dk, dk, |i, j| rho[[i, j]])))
    }
}
