//! Small dense density matrices and the entanglement measures computed on them.
//!
//! Two-qubit matrices use the basis order `{|00⟩, |01⟩, |10⟩, |11⟩}` with the
//! first label belonging to mode A.

use nalgebra::{convert, DMatrix, RealField, SymmetricEigen};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Logarithm base for von Neumann entropy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropyBase {
    #[default]
    Bits,
    Nats,
}

impl EntropyBase {
    pub fn label(self) -> &'static str {
        match self {
            EntropyBase::Bits => "bits",
            EntropyBase::Nats => "nats",
        }
    }
}

/// Hermitian, unit-trace, positive semidefinite complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: RealField> {
    rho: DMatrix<Complex<T>>,
}

fn hermitian_tol<T: RealField>() -> T {
    let floor: T = convert(1e-12);
    let scaled = T::default_epsilon() * convert(64.0);
    if scaled > floor {
        scaled
    } else {
        floor
    }
}

fn psd_tol<T: RealField>() -> T {
    let floor: T = convert(1e-10);
    let scaled = T::default_epsilon() * convert(1e3);
    if scaled > floor {
        scaled
    } else {
        floor
    }
}

impl<T: RealField> DensityMatrix<T> {
    /// Validates the Hermitian, trace and positivity invariants.
    pub fn new(rho: DMatrix<Complex<T>>) -> Result<Self> {
        let dm = Self { rho };
        dm.validate()?;
        Ok(dm)
    }

    /// Wraps a matrix without checking invariants.
    pub fn new_unchecked(rho: DMatrix<Complex<T>>) -> Self {
        Self { rho }
    }

    /// `|ψ⟩⟨ψ|` for a normalized state vector.
    pub fn from_pure(psi: &[Complex<T>]) -> Result<Self> {
        let n = psi.len();
        let rho = DMatrix::from_fn(n, n, |i, j| psi[i].clone() * psi[j].clone().conj());
        Self::new(rho)
    }

    /// The maximally mixed state of dimension `dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        let w: T = T::one() / convert(dim as f64);
        Self {
            rho: DMatrix::from_diagonal_element(dim, dim, Complex::new(w, T::zero())),
        }
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex<T>> {
        &self.rho
    }

    pub fn into_matrix(self) -> DMatrix<Complex<T>> {
        self.rho
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.rho[(i, j)].clone()
    }

    pub fn trace(&self) -> Complex<T> {
        self.rho.trace()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.rho.nrows();
        if n == 0 || self.rho.ncols() != n {
            return Err(Error::Validation(format!(
                "density matrix must be square and non-empty, got {}x{}",
                n,
                self.rho.ncols()
            )));
        }
        let htol = hermitian_tol::<T>();
        for i in 0..n {
            for j in i..n {
                let d = self.rho[(i, j)].clone() - self.rho[(j, i)].clone().conj();
                if nalgebra::ComplexField::modulus(d) > htol {
                    return Err(Error::Validation(format!(
                        "matrix is not Hermitian at ({i}, {j})"
                    )));
                }
            }
        }
        let tr = self.trace();
        if (tr.re.clone() - T::one()).abs() > htol || tr.im.clone().abs() > htol {
            return Err(Error::Validation(format!("trace is {tr:?}, expected 1")));
        }
        let ptol = psd_tol::<T>();
        if let Some(min) = self.eigenvalues().last() {
            if *min < -ptol {
                return Err(Error::Validation(format!(
                    "matrix has a negative eigenvalue {min:?}"
                )));
            }
        }
        Ok(())
    }

    /// Eigenvalues sorted in decreasing order.
    pub fn eigenvalues(&self) -> Vec<T> {
        let eig = SymmetricEigen::new(self.hermitian_part());
        let mut ev: Vec<T> = eig.eigenvalues.iter().cloned().collect();
        ev.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        ev
    }

    pub fn purity(&self) -> T {
        (&self.rho * &self.rho).trace().re
    }

    fn hermitian_part(&self) -> DMatrix<Complex<T>> {
        let half: T = convert(0.5);
        (&self.rho + self.rho.adjoint()).map(|z| z * Complex::new(half.clone(), T::zero()))
    }

    /// Principal square root via the eigen-decomposition, with eigenvalues
    /// below zero clamped.
    fn sqrt(&self) -> DMatrix<Complex<T>> {
        let eig = SymmetricEigen::new(self.hermitian_part());
        let v = &eig.eigenvectors;
        let n = self.dim();
        let mut scaled = v.clone();
        for j in 0..n {
            let lam = eig.eigenvalues[j].clone();
            let s = if lam > T::zero() { lam.sqrt() } else { T::zero() };
            for i in 0..n {
                scaled[(i, j)] = scaled[(i, j)].clone() * Complex::new(s.clone(), T::zero());
            }
        }
        scaled * v.adjoint()
    }
}

/// Wootters concurrence of a two-qubit state.
///
/// The spin-flip roots `λ_i` are the singular values of `√ρ (σ_y⊗σ_y) √ρ*`,
/// which avoids squaring and then re-rooting small eigenvalues.
pub fn concurrence<T: RealField>(rho: &DensityMatrix<T>) -> Result<T> {
    if rho.dim() != 4 {
        return Err(Error::Validation(format!(
            "concurrence needs a 4x4 matrix, got {}x{}",
            rho.dim(),
            rho.dim()
        )));
    }
    rho.validate()?;
    let root = rho.sqrt();
    // σ_y ⊗ σ_y is real: anti-diagonal (−1, 1, 1, −1)
    let sign = [-T::one(), T::one(), T::one(), -T::one()];
    let flipped = DMatrix::from_fn(4, 4, |i, j| {
        root[(3 - i, j)].clone().conj() * Complex::new(sign[i].clone(), T::zero())
    });
    let mut lam: Vec<T> = (root * flipped).singular_values().iter().cloned().collect();
    lam.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let c = lam[0].clone() - lam[1].clone() - lam[2].clone() - lam[3].clone();
    Ok(if c > T::zero() { c } else { T::zero() })
}

/// `S = −Σ p log p` over the spectrum, with `0 log 0 = 0`.
pub fn von_neumann_entropy<T: RealField>(rho: &DensityMatrix<T>, base: EntropyBase) -> Result<T> {
    rho.validate()?;
    let mut s = T::zero();
    for p in rho.eigenvalues() {
        if p > T::zero() {
            s -= p.clone() * p.ln();
        }
    }
    if base == EntropyBase::Bits {
        s /= convert::<f64, T>(2.0).ln();
    }
    Ok(if s > T::zero() { s } else { T::zero() })
}
