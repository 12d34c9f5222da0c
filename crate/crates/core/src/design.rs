//! SI calculators for ultracold-atom and levitated-nanoparticle realizations,
//! and a grid search over cavity length, atom number and trap frequency.
//!
//! Linewidths are rates in s⁻¹ (`κ = ν_FSR / 𝓕`, `τ_p = 1/κ`); mechanical
//! and optical frequencies are angular (rad/s).

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::{C_LIGHT, EPSILON_0, HBAR, K_B};
use crate::duan::{regime_of, Regime};
use crate::error::{domain, Error, Result};
use crate::physics::x_zpf;

/// ⁸⁷Rb atomic mass [kg].
pub const RB87_MASS: f64 = 1.443_160_648e-25;
/// ⁸⁷Rb D2 line vacuum wavelength [m].
pub const RB87_D2_WAVELENGTH: f64 = 780.241_209_686e-9;
/// ⁸⁷Rb D2 transition dipole moment [C·m].
pub const RB87_D2_DIPOLE: f64 = 3.584e-29;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityGeometry {
    /// Cavity length [m].
    pub length: f64,
    /// Mirror radius of curvature [m].
    pub mirror_radius: f64,
    pub finesse: f64,
    /// Optical wavelength [m].
    pub wavelength: f64,
}

impl CavityGeometry {
    pub fn new(length: f64, mirror_radius: f64, finesse: f64, wavelength: f64) -> Result<Self> {
        let g = Self {
            length,
            mirror_radius,
            finesse,
            wavelength,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.length > 0.0 && self.length < 2.0 * self.mirror_radius) {
            return domain(format!(
                "cavity length {} m must satisfy 0 < L < 2R = {} m",
                self.length,
                2.0 * self.mirror_radius
            ));
        }
        if !(self.finesse > 1.0 && self.finesse.is_finite()) {
            return domain("finesse must be > 1");
        }
        if !(self.wavelength > 0.0) {
            return domain("wavelength must be > 0");
        }
        Ok(())
    }

    /// `ν_FSR = c / 2L` [Hz].
    pub fn free_spectral_range(&self) -> f64 {
        C_LIGHT / (2.0 * self.length)
    }

    /// `w² = (λ/2π) √(L(2R − L))` [m²].
    pub fn waist_sq(&self) -> f64 {
        self.wavelength / (2.0 * PI) * (self.length * (2.0 * self.mirror_radius - self.length)).sqrt()
    }

    /// `V = π w² L` [m³].
    pub fn mode_volume(&self) -> f64 {
        PI * self.waist_sq() * self.length
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    pub fn with_finesse(&self, finesse: f64) -> Self {
        Self { finesse, ..*self }
    }
}

/// `κ = ν_FSR / 𝓕` [s⁻¹].
pub fn cavity_linewidth(geom: &CavityGeometry) -> Result<f64> {
    geom.validate()?;
    Ok(geom.free_spectral_range() / geom.finesse)
}

/// `τ_p = 1/κ` [s].
pub fn photon_lifetime(geom: &CavityGeometry) -> Result<f64> {
    Ok(1.0 / cavity_linewidth(geom)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomEnsembleSpec {
    pub n_atoms: f64,
    /// Single-atom mass [kg].
    pub atom_mass: f64,
    /// Trap frequency [rad/s].
    pub omega_m: f64,
    /// Atom-cavity detuning [rad/s].
    pub detuning: f64,
    /// Transition dipole moment [C·m].
    pub dipole: f64,
    /// Mechanical dissipation [rad/s].
    pub gamma: f64,
    /// Cloud temperature [K].
    pub temperature: f64,
    /// `sin(2 k z₀)`.
    pub positioning: f64,
}

impl AtomEnsembleSpec {
    /// ⁸⁷Rb with the detuning from [`calibrated_rb87_detuning`].
    pub fn rb87(n_atoms: f64, omega_m: f64) -> Self {
        Self {
            n_atoms,
            atom_mass: RB87_MASS,
            omega_m,
            detuning: calibrated_rb87_detuning(),
            dipole: RB87_D2_DIPOLE,
            gamma: 2.0 * PI * 1e3,
            temperature: 0.8e-6,
            positioning: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.n_atoms >= 1.0) {
            return domain("atom number must be >= 1");
        }
        for (name, v) in [
            ("atom_mass", self.atom_mass),
            ("omega_m", self.omega_m),
            ("dipole", self.dipole),
            ("gamma", self.gamma),
            ("temperature", self.temperature),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return domain(format!("{name} must be finite and > 0"));
            }
        }
        if self.detuning == 0.0 || !self.detuning.is_finite() {
            return domain("detuning must be finite and nonzero");
        }
        if !(-1.0..=1.0).contains(&self.positioning) {
            return domain("positioning factor must lie in [-1, 1]");
        }
        Ok(())
    }
}

/// `g0 = k_a N (α₀²/Δ) sin(2k_a z₀) √(ħ/(2N m ω_m))` with
/// `α₀² = d² ω_c / (2ħ ε₀ V_c)` [rad/s].
pub fn atom_coupling(spec: &AtomEnsembleSpec, geom: &CavityGeometry) -> Result<f64> {
    spec.validate()?;
    geom.validate()?;
    let omega_c = 2.0 * PI * C_LIGHT / geom.wavelength;
    let alpha0_sq = spec.dipole * spec.dipole * omega_c / (2.0 * HBAR * EPSILON_0 * geom.mode_volume());
    let zpf = x_zpf(spec.n_atoms * spec.atom_mass, spec.omega_m)?;
    Ok(geom.wavenumber() * spec.n_atoms * alpha0_sq / spec.detuning * spec.positioning * zpf)
}

/// Reference point for the detuning calibration: `(N, ω_m, L, R, k)`.
pub const RB87_CALIBRATION_POINT: (f64, f64, f64, f64, f64) = (1e5, 2.0 * PI * 40e3, 194e-6, 5e-2, 9.50);

/// Detuning [rad/s] that makes the reference ensemble reach coupling `k_target`.
pub fn calibrate_detuning(spec: &AtomEnsembleSpec, geom: &CavityGeometry, k_target: f64) -> Result<f64> {
    if !(k_target > 0.0) {
        return domain("target coupling must be > 0");
    }
    let unit = AtomEnsembleSpec { detuning: 1.0, ..*spec };
    Ok(atom_coupling(&unit, geom)? / spec.omega_m / k_target)
}

/// ⁸⁷Rb detuning calibrated on [`RB87_CALIBRATION_POINT`].
pub fn calibrated_rb87_detuning() -> f64 {
    let (n, w, l, r, k) = RB87_CALIBRATION_POINT;
    let spec = AtomEnsembleSpec {
        n_atoms: n,
        atom_mass: RB87_MASS,
        omega_m: w,
        detuning: 1.0,
        dipole: RB87_D2_DIPOLE,
        gamma: 2.0 * PI * 1e3,
        temperature: 0.8e-6,
        positioning: 1.0,
    };
    let geom = CavityGeometry {
        length: l,
        mirror_radius: r,
        finesse: 5.8e5,
        wavelength: RB87_D2_WAVELENGTH,
    };
    calibrate_detuning(&spec, &geom, k).expect("calibration point is valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NanoparticleSpec {
    /// Sphere radius [m].
    pub radius: f64,
    pub refractive_index: f64,
    /// Mass [kg].
    pub mass: f64,
    /// Optical mode volume [m³].
    pub mode_volume: f64,
    /// Optical wavenumber [1/m].
    pub wavenumber: f64,
}

/// `α_pol = 4π ε₀ r³ (n² − 1)/(n² + 2)` [C·m²/V].
pub fn polarizability(radius: f64, refractive_index: f64) -> Result<f64> {
    if !(radius > 0.0) {
        return domain("radius must be > 0");
    }
    if !(refractive_index > 1.0) {
        return domain("refractive index must be > 1");
    }
    let n2 = refractive_index * refractive_index;
    Ok(4.0 * PI * EPSILON_0 * radius.powi(3) * (n2 - 1.0) / (n2 + 2.0))
}

/// `g0 = U₀ k x_zpf` with `U₀ = ω α_pol / (2 ε₀ V)`, the particle sitting
/// at the maximum intensity gradient [rad/s].
pub fn nanoparticle_coupling(spec: &NanoparticleSpec, omega_m: f64) -> Result<f64> {
    if !(spec.mode_volume > 0.0 && spec.wavenumber > 0.0) {
        return domain("mode volume and wavenumber must be > 0");
    }
    let alpha = polarizability(spec.radius, spec.refractive_index)?;
    let omega = C_LIGHT * spec.wavenumber;
    let u0 = omega * alpha / (2.0 * EPSILON_0 * spec.mode_volume);
    Ok(u0 * spec.wavenumber * x_zpf(spec.mass, omega_m)?)
}

/// Scaled-time recurrence converted to seconds: `π/(ω_m k²)` below
/// `k = 1/√2`, `2π/ω_m` at or above it.
pub fn entanglement_period(k: f64, omega_m: f64) -> Result<f64> {
    if !(k > 0.0 && k.is_finite()) {
        return domain("k must be > 0");
    }
    if !(omega_m > 0.0) {
        return domain("omega_m must be > 0");
    }
    Ok(match regime_of(k) {
        Regime::Low => PI / (omega_m * k * k),
        Regime::High => 2.0 * PI / omega_m,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeatingBudget {
    pub r_fs: f64,
    pub r_c: f64,
    pub energy_ratio: f64,
}

/// `R_fs = (ħk_p)²/m · g0² · n̄_cav · Γ/Δ`, `R_c = N g0²/(4Γκ) · R_fs`,
/// `energy_ratio = R_c τ_p / (k_B T)`, every product taken literally.
pub fn heating_budget(
    spec: &AtomEnsembleSpec,
    geom: &CavityGeometry,
    nbar_cav: f64,
    k_p: f64,
) -> Result<HeatingBudget> {
    if !(nbar_cav >= 0.0) || !(k_p > 0.0) {
        return domain("nbar_cav must be >= 0 and k_p > 0");
    }
    let g0 = atom_coupling(spec, geom)?;
    let kappa = cavity_linewidth(geom)?;
    let hk = HBAR * k_p;
    let r_fs = hk * hk / spec.atom_mass * g0 * g0 * nbar_cav * spec.gamma / spec.detuning;
    let r_c = spec.n_atoms * g0 * g0 / (4.0 * spec.gamma * kappa) * r_fs;
    Ok(HeatingBudget {
        r_fs,
        r_c,
        energy_ratio: r_c / kappa / (K_B * spec.temperature),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignReport {
    pub length_m: f64,
    pub mirror_radius_m: f64,
    pub n_atoms: f64,
    pub omega_m_rad_per_s: f64,
    pub finesse: f64,
    pub g0_rad_per_s: f64,
    pub k: f64,
    pub kappa_per_s: f64,
    pub tau_p_s: f64,
    pub tau_e_s: f64,
    pub ratio: f64,
    pub min_finesse_for_unity_ratio: f64,
    pub heating: Option<HeatingBudget>,
}

/// Derived feasibility quantities for one atom/cavity configuration.
pub fn design_report(spec: &AtomEnsembleSpec, geom: &CavityGeometry) -> Result<DesignReport> {
    let g0 = atom_coupling(spec, geom)?;
    let k = g0.abs() / spec.omega_m;
    let kappa = cavity_linewidth(geom)?;
    let tau_p = 1.0 / kappa;
    let tau_e = entanglement_period(k, spec.omega_m)?;
    Ok(DesignReport {
        length_m: geom.length,
        mirror_radius_m: geom.mirror_radius,
        n_atoms: spec.n_atoms,
        omega_m_rad_per_s: spec.omega_m,
        finesse: geom.finesse,
        g0_rad_per_s: g0,
        k,
        kappa_per_s: kappa,
        tau_p_s: tau_p,
        tau_e_s: tau_e,
        ratio: tau_e / tau_p,
        min_finesse_for_unity_ratio: tau_e * geom.free_spectral_range(),
        heating: None,
    })
}

/// Inclusive uniform axis `min, min + step, …, ≤ max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Axis {
    pub fn point(v: f64) -> Self {
        Self { min: v, max: v, step: 1.0 }
    }

    pub fn len(&self) -> usize {
        if self.max <= self.min {
            return 1;
        }
        ((self.max - self.min) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn value(&self, i: usize) -> f64 {
        self.min + self.step * i as f64
    }

    fn validate(&self, name: &str) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite() && self.min > 0.0) {
            return domain(format!("{name}: bounds must be finite and > 0"));
        }
        if self.max < self.min {
            return domain(format!("{name}: empty range (max < min)"));
        }
        if self.max > self.min && !(self.step > 0.0) {
            return domain(format!("{name}: step must be > 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchSpace {
    /// Cavity length [m].
    pub length: Axis,
    pub n_atoms: Axis,
    /// Trap frequency [rad/s].
    pub omega_m: Axis,
    pub mirror_radius: f64,
    /// Finesse at which `τ_e/τ_p` is minimized.
    pub finesse: f64,
    pub wavelength: f64,
    /// Half-width of the excluded band around each `√(n/2)`.
    pub exclusion_halfwidth: f64,
    /// Orders `n = 1..=exclusion_orders` that are excluded.
    pub exclusion_orders: u32,
    /// Relative slack within which candidates count as tied; ties go to the
    /// lexicographically smallest `(L, N, ω_m)`.
    pub tie_tolerance: f64,
}

impl SearchSpace {
    /// The box used to reproduce the optimal-parameter table for radius `r`.
    pub fn rb87_default(mirror_radius: f64) -> Self {
        Self {
            length: Axis { min: 100e-6, max: 1500e-6, step: 2e-6 },
            n_atoms: Axis { min: 1e5, max: 5.8e5, step: 2e3 },
            omega_m: Axis { min: 2.0 * PI * 40e3, max: 2.0 * PI * 95e3, step: 2.0 * PI * 1e3 },
            mirror_radius,
            finesse: 5.8e5,
            wavelength: RB87_D2_WAVELENGTH,
            exclusion_halfwidth: 0.02,
            exclusion_orders: 8,
            tie_tolerance: 0.01,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.length.validate("length")?;
        self.n_atoms.validate("n_atoms")?;
        self.omega_m.validate("omega_m")?;
        if !(self.tie_tolerance >= 0.0 && self.exclusion_halfwidth >= 0.0) {
            return domain("tie tolerance and exclusion half-width must be >= 0");
        }
        Ok(())
    }

    /// True when `k` lies within the half-width of some `√(n/2)`.
    pub fn excluded(&self, k: f64) -> bool {
        (1..=self.exclusion_orders).any(|n| (k - (f64::from(n) / 2.0).sqrt()).abs() <= self.exclusion_halfwidth)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum DesignOutcome {
    Found(DesignReport),
    NoSolution { reason: String },
}

/// Grid search for the smallest `τ_e/τ_p` at the configured finesse.
/// `template` supplies every atom property except `N` and `ω_m`.
pub fn optimize_design(space: &SearchSpace, template: &AtomEnsembleSpec) -> Result<DesignOutcome> {
    space.validate()?;
    let (nl, nn, nw) = (space.length.len(), space.n_atoms.len(), space.omega_m.len());
    let eval = |il: usize, in_: usize, iw: usize| -> Option<f64> {
        let geom = CavityGeometry {
            length: space.length.value(il),
            mirror_radius: space.mirror_radius,
            finesse: space.finesse,
            wavelength: space.wavelength,
        };
        if geom.validate().is_err() {
            return None;
        }
        let spec = AtomEnsembleSpec {
            n_atoms: space.n_atoms.value(in_),
            omega_m: space.omega_m.value(iw),
            ..*template
        };
        let g0 = atom_coupling(&spec, &geom).ok()?;
        let k = g0.abs() / spec.omega_m;
        if k <= 0.0 || space.excluded(k) {
            return None;
        }
        let tau_e = entanglement_period(k, spec.omega_m).ok()?;
        Some(tau_e * geom.free_spectral_range() / geom.finesse)
    };
    let best = (0..nl)
        .into_par_iter()
        .map(|il| {
            let mut b = f64::INFINITY;
            for in_ in 0..nn {
                for iw in 0..nw {
                    if let Some(r) = eval(il, in_, iw) {
                        b = b.min(r);
                    }
                }
            }
            b
        })
        .reduce(|| f64::INFINITY, f64::min);
    if !best.is_finite() {
        return Ok(DesignOutcome::NoSolution {
            reason: "every grid point is geometrically invalid or inside an excluded coupling band".into(),
        });
    }
    let threshold = best * (1.0 + space.tie_tolerance);
    for il in 0..nl {
        for in_ in 0..nn {
            for iw in 0..nw {
                if eval(il, in_, iw).is_some_and(|r| r <= threshold) {
                    let geom = CavityGeometry {
                        length: space.length.value(il),
                        mirror_radius: space.mirror_radius,
                        finesse: space.finesse,
                        wavelength: space.wavelength,
                    };
                    let spec = AtomEnsembleSpec {
                        n_atoms: space.n_atoms.value(in_),
                        omega_m: space.omega_m.value(iw),
                        ..*template
                    };
                    return Ok(DesignOutcome::Found(design_report(&spec, &geom)?));
                }
            }
        }
    }
    Err(Error::Validation("optimizer lost its own minimum".into()))
}

/// Named parameter sets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Preset {
    pub spec: AtomEnsembleSpec,
    pub geometry: CavityGeometry,
    pub alpha: f64,
    pub beta: f64,
    /// Optical angular frequency used for both modes [rad/s].
    pub omega_optical: f64,
}

impl Preset {
    /// The proposed ultracold-atom experiment: `L = 783 µm`, `𝓕 = 3×10⁶`,
    /// `N = 5.43×10⁵`, `ω_m = 2π×95 kHz`, `T = 0.8 µK`, `α = β = 0.5`.
    pub fn proposed() -> Self {
        Self {
            spec: AtomEnsembleSpec::rb87(5.43e5, 2.0 * PI * 95e3),
            geometry: CavityGeometry {
                length: 783e-6,
                mirror_radius: 5e-2,
                finesse: 3e6,
                wavelength: RB87_D2_WAVELENGTH,
            },
            alpha: 0.5,
            beta: 0.5,
            omega_optical: 1e15,
        }
    }

    /// The proposed experiment with the photon-number optimum `α = β = 0.91`.
    pub fn optimal_amplitudes() -> Self {
        Self {
            alpha: 0.91,
            beta: 0.91,
            ..Self::proposed()
        }
    }

    /// The reported ensemble used for calibration: `N = 10⁵`,
    /// `ω_m = 2π×40 kHz`, `L = 194 µm`, `R = 5 cm`, `𝓕 = 5.8×10⁵`.
    pub fn reported() -> Self {
        Self {
            spec: AtomEnsembleSpec::rb87(1e5, 2.0 * PI * 40e3),
            geometry: CavityGeometry {
                length: 194e-6,
                mirror_radius: 5e-2,
                finesse: 5.8e5,
                wavelength: RB87_D2_WAVELENGTH,
            },
            alpha: 0.5,
            beta: 0.5,
            omega_optical: 1e15,
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "proposed" => Ok(Self::proposed()),
            "optimal_amplitudes" => Ok(Self::optimal_amplitudes()),
            "reported" => Ok(Self::reported()),
            other => Err(Error::Config {
                field: "preset".into(),
                message: format!("unknown preset {other:?}; expected proposed, optimal_amplitudes or reported"),
            }),
        }
    }

    pub fn k(&self) -> Result<f64> {
        Ok(atom_coupling(&self.spec, &self.geometry)?.abs() / self.spec.omega_m)
    }
}

/// Couplings at which the EPR witness is inconclusive: `√(n/2)`.
pub fn inconclusive_couplings(orders: u32) -> Vec<f64> {
    (1..=orders).map(|n| (f64::from(n) / 2.0).sqrt()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn linewidth_of_proposed_cavity() {
        let g = Preset::proposed().geometry;
        let kappa = cavity_linewidth(&g).unwrap();
        assert!((kappa - 64e3).abs() / 64e3 < 0.02);
        let tau = photon_lifetime(&g).unwrap();
        assert!((15.6e-6..=15.7e-6).contains(&tau));
        assert_relative_eq!(tau * kappa, 1.0, epsilon = 1e-15);
        let doubled = cavity_linewidth(&g.with_finesse(6e6)).unwrap();
        assert_relative_eq!(doubled, kappa / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn calibration_reproduces_reference_coupling() {
        let p = Preset::reported();
        assert_relative_eq!(p.k().unwrap(), 9.50, epsilon = 1e-9);
    }

    #[test]
    fn coupling_scaling_laws() {
        let p = Preset::proposed();
        let g1 = atom_coupling(&p.spec, &p.geometry).unwrap();
        let spec4 = AtomEnsembleSpec { n_atoms: 4.0 * p.spec.n_atoms, ..p.spec };
        assert_relative_eq!(atom_coupling(&spec4, &p.geometry).unwrap(), 2.0 * g1, epsilon = 1e-12);
        let spec_d = AtomEnsembleSpec { detuning: 3.0 * p.spec.detuning, ..p.spec };
        assert_relative_eq!(atom_coupling(&spec_d, &p.geometry).unwrap(), g1 / 3.0, epsilon = 1e-12);
        let off = AtomEnsembleSpec { positioning: 0.0, ..p.spec };
        assert_eq!(atom_coupling(&off, &p.geometry).unwrap(), 0.0);
    }

    #[test]
    fn geometry_validation() {
        assert!(CavityGeometry::new(0.11, 0.05, 1e5, 780e-9).is_err());
        assert!(CavityGeometry::new(1e-3, 0.05, 1.0, 780e-9).is_err());
        let bad = AtomEnsembleSpec { detuning: 0.0, ..Preset::proposed().spec };
        assert!(atom_coupling(&bad, &Preset::proposed().geometry).is_err());
    }

    #[test]
    fn nanoparticle_scalings() {
        let base = NanoparticleSpec {
            radius: 100e-9,
            refractive_index: 1.45,
            mass: 2200.0 * 4.0 / 3.0 * PI * 1e-21,
            mode_volume: 1e-12,
            wavenumber: 2.0 * PI / 1064e-9,
        };
        let w = 2.0 * PI * 100e3;
        let g = nanoparticle_coupling(&base, w).unwrap();
        let big = NanoparticleSpec { radius: 200e-9, ..base };
        assert_relative_eq!(nanoparticle_coupling(&big, w).unwrap(), 8.0 * g, epsilon = 1e-12);
        let almost_vacuum = NanoparticleSpec { refractive_index: 1.0 + 1e-12, ..base };
        assert!(nanoparticle_coupling(&almost_vacuum, w).unwrap() < 1e-9 * g);
        assert!(nanoparticle_coupling(&NanoparticleSpec { refractive_index: 1.0, ..base }, w).is_err());
        assert_relative_eq!(g, 5.327_022_9e1, max_relative = 1e-7);
    }

    #[test]
    fn periods() {
        let w = 2.0 * PI * 95e3;
        assert_relative_eq!(entanglement_period(0.743, w).unwrap(), 1.0 / 95e3, epsilon = 1e-15);
        assert_relative_eq!(entanglement_period(0.1, w).unwrap(), PI / (w * 0.01), epsilon = 1e-12);
        assert_relative_eq!(entanglement_period(FRAC_1_SQRT_2, w).unwrap(), 2.0 * PI / w);
        assert!(entanglement_period(0.0, w).is_err());
    }

    #[test]
    fn heating_vanishes_without_photons() {
        let p = Preset::proposed();
        let h = heating_budget(&p.spec, &p.geometry, 0.0, p.geometry.wavenumber()).unwrap();
        assert_eq!((h.r_fs, h.r_c, h.energy_ratio), (0.0, 0.0, 0.0));
        let h = heating_budget(&p.spec, &p.geometry, 0.25, p.geometry.wavenumber()).unwrap();
        assert!(h.r_c > h.r_fs);
    }

    #[test]
    fn single_point_search_reports_that_point() {
        let template = AtomEnsembleSpec::rb87(1.0, 1.0);
        let space = SearchSpace {
            length: Axis::point(783e-6),
            n_atoms: Axis::point(5.43e5),
            omega_m: Axis::point(2.0 * PI * 95e3),
            ..SearchSpace::rb87_default(5e-2)
        };
        match optimize_design(&space, &template).unwrap() {
            DesignOutcome::Found(r) => {
                assert_eq!(r.length_m, 783e-6);
                assert_eq!(r.n_atoms, 5.43e5);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn fully_excluded_space_has_no_solution() {
        let template = AtomEnsembleSpec::rb87(1.0, 1.0);
        let p = Preset::proposed();
        let k = p.k().unwrap();
        let space = SearchSpace {
            length: Axis::point(783e-6),
            n_atoms: Axis::point(5.43e5),
            omega_m: Axis::point(2.0 * PI * 95e3),
            exclusion_halfwidth: (k - FRAC_1_SQRT_2).abs() + 0.01,
            ..SearchSpace::rb87_default(5e-2)
        };
        assert!(matches!(
            optimize_design(&space, &template).unwrap(),
            DesignOutcome::NoSolution { .. }
        ));
        let bad = SearchSpace {
            length: Axis { min: 2e-3, max: 1e-3, step: 1e-6 },
            ..space
        };
        assert!(optimize_design(&bad, &template).is_err());
    }
}
