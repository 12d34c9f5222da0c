//! Entanglement dynamics of a dispersive mirror-in-the-middle optomechanical
//! system: two optical modes `a`, `b` coupled with opposite signs to one
//! mechanical mode `c`.

pub mod constants;
pub mod density;
pub mod design;
pub mod duan;
pub mod error;
pub mod oracle;
pub mod physics;
pub mod qubit;
pub mod scalar;
pub mod sweeps;

pub use constants::PhysicalConstants;
pub use density::{concurrence, von_neumann_entropy, DensityMatrix, EntropyBase};
pub use error::{Error, Result};
pub use physics::{ScaledTime, SystemParams, ThermalSpec};
pub use scalar::{Field, Real};

/// Complex amplitude used by the `f64` front ends.
pub type C64 = num_complex::Complex<f64>;
/// Double-precision system parameters.
pub type Params = SystemParams<f64>;
/// Double-precision density matrix.
pub type Rho = DensityMatrix<f64>;
