//! Dimensionless reductions and the special time functions of the
//! mirror-in-the-middle Hamiltonian.
//!
//! Time is always the scaled time `ω_m t`. The coupling enters through
//! `k = g0 / ω_m` and the optical frequencies through `r_i = ω_i / ω_m`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::constants::{HBAR, K_B};
use crate::error::{domain, Result};
use crate::scalar::{lit, Real};

/// Mode frequencies and single-photon coupling, all angular frequencies in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams<S> {
    pub omega_a: S,
    pub omega_b: S,
    pub omega_m: S,
    pub g0: S,
}

impl<S: Real> SystemParams<S> {
    /// Frequencies must be strictly positive; the coupling may be zero.
    pub fn new(omega_a: S, omega_b: S, omega_m: S, g0: S) -> Result<Self> {
        let p = Self {
            omega_a,
            omega_b,
            omega_m,
            g0,
        };
        p.validate()?;
        Ok(p)
    }

    /// Builds parameters from `k`, `r_a`, `r_b` and an absolute mechanical frequency.
    pub fn from_dimensionless(k: S, r_a: S, r_b: S, omega_m: S) -> Result<Self> {
        Self::new(r_a * omega_m, r_b * omega_m, omega_m, k * omega_m)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("omega_a", self.omega_a),
            ("omega_b", self.omega_b),
            ("omega_m", self.omega_m),
        ] {
            if !(v.is_finite() && v > S::zero()) {
                return domain(format!("{name} must be finite and > 0"));
            }
        }
        if !(self.g0.is_finite() && self.g0 >= S::zero()) {
            return domain("g0 must be finite and >= 0");
        }
        Ok(())
    }

    pub fn k(&self) -> S {
        self.g0 / self.omega_m
    }

    pub fn r_a(&self) -> S {
        self.omega_a / self.omega_m
    }

    pub fn r_b(&self) -> S {
        self.omega_b / self.omega_m
    }

    /// Same physics with the coupling replaced.
    pub fn with_k(&self, k: S) -> Self {
        Self {
            g0: k * self.omega_m,
            ..*self
        }
    }
}

/// Scaled time `ω_m t`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct ScaledTime<S>(S);

impl<S: Real> ScaledTime<S> {
    pub fn new(t: S) -> Result<Self> {
        if !(t.is_finite() && t >= S::zero()) {
            return domain("scaled time must be finite and >= 0");
        }
        Ok(Self(t))
    }

    pub fn from_seconds(seconds: S, omega_m: S) -> Result<Self> {
        Self::new(seconds * omega_m)
    }

    pub fn value(self) -> S {
        self.0
    }

    pub fn seconds(self, omega_m: S) -> S {
        self.0 / omega_m
    }
}

/// Source of the mechanical mean occupation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThermalSpec {
    Temperature { kelvin: f64, omega_m: f64 },
    Occupation { nbar: f64 },
}

impl ThermalSpec {
    pub fn nbar(&self) -> Result<f64> {
        match *self {
            ThermalSpec::Temperature { kelvin, omega_m } => thermal_occupation(kelvin, omega_m),
            ThermalSpec::Occupation { nbar } => {
                if nbar.is_finite() && nbar >= 0.0 {
                    Ok(nbar)
                } else {
                    domain("thermal occupation must be finite and >= 0")
                }
            }
        }
    }
}

/// `η(t) = 1 − e^{−it}`.
pub fn eta<S: Real>(t: S) -> Complex<S> {
    Complex::new(S::one() - t.cos(), t.sin())
}

/// `B(t) = −k²(t − sin t)`.
pub fn big_b<S: Real>(t: S, k: S) -> S {
    -(k * k) * (t - t.sin())
}

/// `ξ(t) = e^{it} η(t) = e^{it} − 1`.
pub fn xi<S: Real>(t: S) -> Complex<S> {
    Complex::new(t.cos() - S::one(), t.sin())
}

/// `|η(t)|² = 2(1 − cos t)`, computed as `4 sin²(t/2)` to avoid cancellation near t = 2πn.
pub fn eta_norm_sqr<S: Real>(t: S) -> S {
    let s = (t / lit(2.0)).sin();
    lit::<S>(4.0) * s * s
}

/// Bose–Einstein mean occupation at temperature `kelvin` for a mode at `omega_m` rad/s.
pub fn thermal_occupation<S: Real>(kelvin: S, omega_m: S) -> Result<S> {
    if !(kelvin.is_finite() && kelvin > S::zero()) {
        return domain("temperature must be > 0 K");
    }
    if !(omega_m.is_finite() && omega_m > S::zero()) {
        return domain("omega_m must be > 0");
    }
    let x = lit::<S>(HBAR) * omega_m / (lit::<S>(K_B) * kelvin);
    Ok(S::one() / x.exp_m1())
}

/// Zero-point fluctuation `√(ħ / 2 m ω_m)` in metres.
pub fn x_zpf<S: Real>(mass_kg: S, omega_m: S) -> Result<S> {
    if !(mass_kg > S::zero() && omega_m > S::zero()) {
        return domain("x_zpf requires mass > 0 and omega_m > 0");
    }
    Ok((lit::<S>(HBAR) / (lit::<S>(2.0) * mass_kg * omega_m)).sqrt())
}

/// Energy of the dressed eigenstate `D_C(k(n−m))|n, m, ℓ⟩`, in joules.
pub fn energy_eigenvalue<S: Real>(n: i64, m: i64, l: i64, p: &SystemParams<S>) -> Result<S> {
    if n < 0 || m < 0 || l < 0 {
        return domain("quantum numbers must be non-negative");
    }
    let hbar = lit::<S>(HBAR);
    let k = p.k();
    let d = S::from(n - m).unwrap();
    let e = p.omega_m * S::from(l).unwrap() + p.omega_a * S::from(n).unwrap()
        + p.omega_b * S::from(m).unwrap()
        - p.omega_m * k * k * d * d;
    Ok(hbar * e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{E, PI};

    #[test]
    fn eta_values() {
        assert_abs_diff_eq!(eta(0.0_f64).norm(), 0.0);
        let e = eta(PI);
        assert_abs_diff_eq!(e.re, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e.im, 0.0, epsilon = 1e-15);
        let e = eta(PI / 2.0);
        assert_abs_diff_eq!(e.re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e.im, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn big_b_values() {
        assert_eq!(big_b(0.0, 0.5), 0.0);
        assert_abs_diff_eq!(big_b(2.0 * PI, 0.5), -PI / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(big_b(2.0 * PI, 0.0), 0.0);
    }

    #[test]
    fn xi_values() {
        assert_abs_diff_eq!(xi(0.0_f64).norm(), 0.0);
        let x = xi(PI);
        assert_abs_diff_eq!(x.re, -2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(x.im, 0.0, epsilon = 1e-15);
        let x = xi(PI / 2.0);
        assert_abs_diff_eq!(x.re, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(x.im, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn time_functions_in_single_precision() {
        let e = eta(std::f32::consts::PI);
        assert!((e.re - 2.0).abs() < 1e-6);
        assert!((big_b(2.0 * std::f32::consts::PI, 0.5_f32) + std::f32::consts::FRAC_PI_2).abs() < 1e-5);
    }

    #[test]
    fn thermal_occupation_values() {
        // ħω/k_B T = 1 gives 1/(e − 1)
        let omega = 1.0e6;
        let t = HBAR * omega / K_B;
        assert_abs_diff_eq!(thermal_occupation(t, omega).unwrap(), 1.0 / (E - 1.0), epsilon = 1e-12);
        assert_abs_diff_eq!(1.0 / (E - 1.0), 0.58198, epsilon = 1e-5);

        let n = thermal_occupation(0.8e-6, 2.0 * PI * 95e3).unwrap();
        // ħω/k_B = 4.5593 µK, x = 5.6991
        let x = HBAR * 2.0 * PI * 95e3 / (K_B * 0.8e-6);
        assert_abs_diff_eq!(x, 5.6991, epsilon = 1e-3);
        assert_abs_diff_eq!(n, 1.0 / (x.exp() - 1.0), epsilon = 1e-15);
        assert!((n - 3.36e-3).abs() < 1e-4);

        assert!(thermal_occupation(1e-12, omega).unwrap() < 1e-300);
        assert!(thermal_occupation(0.0, omega).is_err());
        assert!(thermal_occupation(-1.0, omega).is_err());
    }

    #[test]
    fn zero_point_fluctuation() {
        let omega = 3.0e5;
        assert_abs_diff_eq!(x_zpf(HBAR / (2.0 * omega), omega).unwrap(), 1.0, epsilon = 1e-12);

        let m = 1.443e-25;
        let w = 2.0 * PI * 95e3;
        let single = x_zpf(m, w).unwrap();
        // collective form √(ħ / 2 N m ω) with N = 1
        let n_atoms = 1.0;
        assert_abs_diff_eq!(single, (HBAR / (2.0 * n_atoms * m * w)).sqrt(), epsilon = 1e-24);
        assert!((single - 2.474_219e-8).abs() < 1e-13);

        let ratio = x_zpf(m, w).unwrap() / x_zpf(2.0 * m, w).unwrap();
        assert_abs_diff_eq!(ratio, 2.0_f64.sqrt(), epsilon = 1e-14);
        assert!(x_zpf(0.0, w).is_err());
        assert!(x_zpf(m, -1.0).is_err());
    }

    #[test]
    fn eigen_energies() {
        let wm = 1.0e5;
        let p = SystemParams::from_dimensionless(0.5, 7.0, 9.0, wm).unwrap();
        assert_eq!(energy_eigenvalue(0, 0, 0, &p).unwrap(), 0.0);
        assert_abs_diff_eq!(
            energy_eigenvalue(1, 1, 0, &p).unwrap(),
            HBAR * (p.omega_a + p.omega_b),
            epsilon = 1e-40
        );
        assert_abs_diff_eq!(
            energy_eigenvalue(1, 0, 0, &p).unwrap(),
            HBAR * wm * (7.0 - 0.25),
            epsilon = 1e-40
        );
        assert!(energy_eigenvalue(-1, 0, 0, &p).is_err());
    }

    #[test]
    fn params_reject_nonpositive_frequencies() {
        assert!(SystemParams::new(1.0, 1.0, 0.0, 0.1).is_err());
        assert!(SystemParams::new(-1.0, 1.0, 1.0, 0.1).is_err());
        assert!(SystemParams::new(1.0, 1.0, 1.0, -0.1).is_err());
        let p = SystemParams::new(2.0, 3.0, 4.0, 1.0).unwrap();
        assert_eq!((p.k(), p.r_a(), p.r_b()), (0.25, 0.5, 0.75));
        assert!(ScaledTime::new(-1.0).is_err());
    }

    proptest! {
        #[test]
        fn eta_is_two_pi_periodic(t in -50.0..50.0_f64) {
            let d = eta(t + 2.0 * PI) - eta(t);
            prop_assert!(d.norm() < 1e-12);
        }

        #[test]
        fn big_b_is_quasi_periodic(t in 0.0..50.0_f64, k in 0.0..2.0_f64) {
            let lhs = big_b(t + 2.0 * PI, k);
            let rhs = big_b(t, k) - 2.0 * PI * k * k;
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
        }

        #[test]
        fn eta_modulus_identity(t in -50.0..50.0_f64) {
            prop_assert!((eta(t).norm_sqr() - 2.0 * (1.0 - t.cos())).abs() < 1e-12);
            prop_assert!((eta_norm_sqr(t) - 2.0 * (1.0 - t.cos())).abs() < 1e-12);
            prop_assert!((eta(t).norm() - 2.0 * (t / 2.0).sin().abs()).abs() < 1e-12);
        }

        #[test]
        fn xi_is_minus_conj_eta(t in -50.0..50.0_f64) {
            prop_assert!((xi(t) + eta(t).conj()).norm() < 1e-15);
            let via_phase = Complex::from_polar(1.0, t) * eta(t);
            prop_assert!((xi(t) - via_phase).norm() < 1e-12);
        }

        #[test]
        fn occupation_increases_with_temperature(t1 in 1e-8..1e-3_f64, f in 1.0001..10.0_f64) {
            let w = 2.0 * PI * 95e3;
            let n1 = thermal_occupation(t1, w).unwrap();
            let n2 = thermal_occupation(t1 * f, w).unwrap();
            prop_assert!(n2 > n1 || (n1 == 0.0 && n2 >= 0.0));
        }
    }
}
