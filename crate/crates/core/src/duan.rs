//! EPR variances for coherent light in both cavities and a thermal mirror.
//!
//! Every closed form here is split as `D(t) = slow(t) + Re(M(t) e^{±iΩt})`,
//! where `Ω` is the optical fast frequency (`r_a + r_b` for AB, `r_a` for AC,
//! `r_b` for BC) and `slow`, `M` vary on the mechanical time scale. The
//! split is what makes windowed minimization tractable when `Ω ~ 10⁹`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::physics::{big_b, eta, eta_norm_sqr, ScaledTime, SystemParams};
use crate::scalar::{lit, Real};

/// Coherent amplitudes on the optical modes and the mirror's thermal occupation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CVInitialState<S> {
    pub alpha: Complex<S>,
    pub beta: Complex<S>,
    pub nbar: S,
}

impl<S: Real> CVInitialState<S> {
    pub fn new(alpha: Complex<S>, beta: Complex<S>, nbar: S) -> Result<Self> {
        if !(nbar.is_finite() && nbar >= S::zero()) {
            return domain("nbar must be finite and >= 0");
        }
        if !(alpha.re.is_finite() && alpha.im.is_finite() && beta.re.is_finite() && beta.im.is_finite()) {
            return domain("coherent amplitudes must be finite");
        }
        Ok(Self { alpha, beta, nbar })
    }

    pub fn real(alpha: S, beta: S, nbar: S) -> Result<Self> {
        Self::new(Complex::from(alpha), Complex::from(beta), nbar)
    }

    /// The amplitudes as reals, or an error for genuinely complex input.
    pub fn real_amplitudes(&self) -> Result<(S, S)> {
        if self.alpha.im != S::zero() || self.beta.im != S::zero() {
            return Err(Error::ComplexAmplitude {
                alpha: format!("{:?}", self.alpha),
                beta: format!("{:?}", self.beta),
            });
        }
        Ok((self.alpha.re, self.beta.re))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Bipartition {
    AB,
    AC,
    BC,
}

impl Bipartition {
    pub const ALL: [Bipartition; 3] = [Bipartition::AB, Bipartition::AC, Bipartition::BC];

    pub fn label(self) -> &'static str {
        match self {
            Bipartition::AB => "AB",
            Bipartition::AC => "AC",
            Bipartition::BC => "BC",
        }
    }
}

impl std::str::FromStr for Bipartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "AB" => Ok(Bipartition::AB),
            "AC" => Ok(Bipartition::AC),
            "BC" => Ok(Bipartition::BC),
            other => Err(Error::Validation(format!("unknown bipartition {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EPRRecord<S> {
    pub t: S,
    pub bipartition: Bipartition,
    pub d: S,
    pub entangled: bool,
}

impl<S: Real> EPRRecord<S> {
    fn new(t: S, bipartition: Bipartition, d: S) -> Self {
        Self {
            t,
            bipartition,
            d,
            entangled: d < S::one(),
        }
    }
}

/// `D = slow + Re(amplitude · e^{i·sign·Ω t})` at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FastSplit<S> {
    pub slow: S,
    pub amplitude: Complex<S>,
    /// Fast optical frequency `Ω` in units of `ω_m`.
    pub fast_frequency: S,
    /// `+1` or `-1`.
    pub sign: S,
}

impl<S: Real> FastSplit<S> {
    pub fn value(&self, t: S) -> S {
        let phase = Complex::from_polar(S::one(), self.sign * self.fast_frequency * t);
        self.slow + (self.amplitude * phase).re
    }

    /// Lower envelope: the minimum over the fast phase.
    pub fn envelope(&self) -> S {
        self.slow - self.amplitude.norm()
    }

    /// Fraction of one fast cycle spent with `D < 1`.
    pub fn dwell_fraction(&self) -> S {
        let m = self.amplitude.norm();
        let gap = self.slow - S::one();
        if m <= S::zero() {
            return if gap < S::zero() { S::one() } else { S::zero() };
        }
        let x = gap / m;
        if x >= S::one() {
            S::zero()
        } else if x <= -S::one() {
            S::one()
        } else {
            x.acos() / S::PI()
        }
    }
}

struct Common<S> {
    alpha: S,
    beta: S,
    nbar: S,
    k: S,
    b: S,
    eta: Complex<S>,
    eta2: S,
}

impl<S: Real> Common<S> {
    fn new(t: ScaledTime<S>, state: &CVInitialState<S>, p: &SystemParams<S>) -> Result<Self> {
        let (alpha, beta) = state.real_amplitudes()?;
        let t = t.value();
        let k = p.k();
        Ok(Self {
            alpha,
            beta,
            nbar: state.nbar,
            k,
            b: big_b(t, k),
            eta: eta(t),
            eta2: eta_norm_sqr(t),
        })
    }

    fn total(&self) -> S {
        self.alpha * self.alpha + self.beta * self.beta
    }

    /// `exp(-2(α²+β²)(1 - cos 2B)) · exp(-k²|η|²(2n̄+1))`.
    fn envelope_factor(&self) -> S {
        let two: S = lit(2.0);
        (-two * self.total() * (S::one() - (two * self.b).cos())
            - self.k * self.k * self.eta2 * (two * self.nbar + S::one()))
        .exp()
    }

    /// `R` with the fast factor `e^{-i r t}` removed, for the optical mode with
    /// amplitude `own` (the other mode has `other`) and signed coupling `k`.
    fn r_slow(&self, own: S, other: S, k: S) -> Complex<S> {
        let i = Complex::new(S::zero(), S::one());
        let two: S = lit(2.0);
        let minus = Complex::from(S::one()) - (-i * two * self.b).exp();
        let plus = Complex::from(S::one()) - (i * two * self.b).exp();
        let (o2, t2) = (own * own, other * other);
        let g = (-(minus * o2) - plus * t2).exp();
        let poly = Complex::from(self.nbar + S::one()) - minus * o2 + plus * t2;
        let damp = (-self.k * self.k * self.eta2 * (self.nbar + lit(0.5))).exp();
        g * poly * self.eta * (own * k * damp) * Complex::from_polar(S::one(), -self.b)
    }
}

/// Fast/slow decomposition for any bipartition.
pub fn fast_split<S: Real>(
    bipartition: Bipartition,
    t: ScaledTime<S>,
    state: &CVInitialState<S>,
    p: &SystemParams<S>,
) -> Result<FastSplit<S>> {
    let c = Common::new(t, state, p)?;
    let e = c.envelope_factor();
    let two: S = lit(2.0);
    Ok(match bipartition {
        Bipartition::AB => {
            let i2b = Complex::from_polar(e, two * c.b);
            FastSplit {
                slow: S::one() + c.total() * (S::one() - e),
                amplitude: (Complex::from(S::one()) - i2b) * (two * c.alpha * c.beta),
                fast_frequency: p.r_a() + p.r_b(),
                sign: S::one(),
            }
        }
        Bipartition::AC => FastSplit {
            slow: S::one() + c.alpha * c.alpha + c.nbar + c.k * c.k * c.eta2 * c.total()
                - c.alpha * c.alpha * e,
            amplitude: c.r_slow(c.alpha, c.beta, c.k) * two,
            fast_frequency: p.r_a(),
            sign: -S::one(),
        },
        Bipartition::BC => FastSplit {
            slow: S::one() + c.beta * c.beta + c.nbar + c.k * c.k * c.eta2 * c.total()
                - c.beta * c.beta * e,
            amplitude: c.r_slow(c.beta, c.alpha, -c.k) * two,
            fast_frequency: p.r_b(),
            sign: -S::one(),
        },
    })
}

/// `D(t)` for one bipartition.
pub fn duan<S: Real>(
    bipartition: Bipartition,
    t: ScaledTime<S>,
    state: &CVInitialState<S>,
    p: &SystemParams<S>,
) -> Result<EPRRecord<S>> {
    let split = fast_split(bipartition, t, state, p)?;
    let d = match bipartition {
        Bipartition::AB => duan_ab_direct(t.value(), state, p)?,
        _ => split.value(t.value()),
    };
    Ok(EPRRecord::new(t.value(), bipartition, d))
}

/// The optical-optical variance, evaluated term by term.
fn duan_ab_direct<S: Real>(t: S, state: &CVInitialState<S>, p: &SystemParams<S>) -> Result<S> {
    let c = Common::new(ScaledTime::new(t)?, state, p)?;
    let two: S = lit(2.0);
    let phase = (p.r_a() + p.r_b()) * t;
    let ab2 = two * c.alpha * c.beta;
    let s = c.total();
    Ok(S::one() + (s + ab2 * phase.cos()) - (s + ab2 * (phase + two * c.b).cos()) * c.envelope_factor())
}

pub fn duan_ab<S: Real>(t: ScaledTime<S>, state: &CVInitialState<S>, p: &SystemParams<S>) -> Result<EPRRecord<S>> {
    duan(Bipartition::AB, t, state, p)
}

pub fn duan_ac<S: Real>(t: ScaledTime<S>, state: &CVInitialState<S>, p: &SystemParams<S>) -> Result<EPRRecord<S>> {
    duan(Bipartition::AC, t, state, p)
}

/// Obtained from the AC form by exchanging the optical modes, which flips
/// the sign of the coupling.
pub fn duan_bc<S: Real>(t: ScaledTime<S>, state: &CVInitialState<S>, p: &SystemParams<S>) -> Result<EPRRecord<S>> {
    duan(Bipartition::BC, t, state, p)
}

/// First and second moments of a mode pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeMoments<S> {
    /// `⟨a₁⟩`
    pub a1: Complex<S>,
    /// `⟨a₂⟩`
    pub a2: Complex<S>,
    /// `⟨a₁†a₁⟩`
    pub n1: S,
    /// `⟨a₂†a₂⟩`
    pub n2: S,
    /// `⟨a₁a₂⟩`
    pub a1a2: Complex<S>,
}

impl<S: Real> ModeMoments<S> {
    pub fn validate(&self) -> Result<()> {
        let tol: S = lit(1e-9);
        let slack = |x: S| tol * (S::one() + x.abs());
        for (name, n, a) in [("1", self.n1, self.a1), ("2", self.n2, self.a2)] {
            if !n.is_finite() || n < a.norm_sqr() - slack(n) {
                return Err(Error::Validation(format!(
                    "mode {name}: <a†a> = {n:?} is below |<a>|² = {:?}",
                    a.norm_sqr()
                )));
            }
        }
        // |⟨a₁a₂⟩|² ≤ ⟨a₁a₁†⟩⟨a₂†a₂⟩
        let bound = (self.n1 + S::one()) * self.n2;
        if self.a1a2.norm_sqr() > bound + slack(bound) {
            return Err(Error::Validation(format!(
                "|<a1 a2>|² = {:?} exceeds the Cauchy-Schwarz bound {bound:?}",
                self.a1a2.norm_sqr()
            )));
        }
        Ok(())
    }
}

/// `D = ⟨a₁†a₁⟩ + ⟨a₂†a₂⟩ + 2Re(⟨a₁a₂⟩ - ⟨a₁⟩⟨a₂⟩) - |⟨a₁⟩|² - |⟨a₂⟩|² + 1`.
pub fn duan_from_moments<S: Real>(m: &ModeMoments<S>) -> Result<S> {
    m.validate()?;
    let two: S = lit(2.0);
    Ok(m.n1 + m.n2 + two * (m.a1a2 - m.a1 * m.a2).re - m.a1.norm_sqr() - m.a2.norm_sqr() + S::one())
}

/// How [`min_over_window`] samples `D(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum WindowMode {
    /// Sample `D(t)` itself with the given step, which must resolve the fast
    /// optical oscillation.
    Resolved { step: f64 },
    /// Sample the lower envelope over the fast phase on `points` grid points.
    Envelope { points: usize },
}

/// Upper bound on grid points for [`WindowMode::Resolved`].
pub const MAX_RESOLVED_POINTS: f64 = 5.0e7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowMin<S> {
    pub t: S,
    pub d: S,
}

fn golden_section<S: Real, F: Fn(S) -> S>(f: &F, mut lo: S, mut hi: S) -> (S, S) {
    let inv_phi: S = lit(0.618_033_988_749_894_8);
    let tol = lit::<S>(1e-13) * (S::one() + hi.abs());
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Uniform scan of `f` on `n` points over `[0, t_max]` followed by golden
/// section refinement in the bracket around the best sample. Ties go to the
/// earliest time.
fn scan_and_refine<S: Real, F: Fn(S) -> S>(f: F, t_max: S, n: usize) -> WindowMin<S> {
    let step = t_max / lit((n - 1) as f64);
    let at = |i: usize| if i == n - 1 { t_max } else { step * lit(i as f64) };
    let (mut best_i, mut best) = (0usize, f(S::zero()));
    for i in 1..n {
        let v = f(at(i));
        if v < best {
            best = v;
            best_i = i;
        }
    }
    let lo = at(best_i.saturating_sub(1));
    let hi = at((best_i + 1).min(n - 1));
    let (t, d) = golden_section(&f, lo, hi);
    if d < best {
        WindowMin { t, d }
    } else {
        WindowMin { t: at(best_i), d: best }
    }
}

/// Minimum of `D(t)` over `t ∈ [0, t_max]`.
pub fn min_over_window<S: Real>(
    bipartition: Bipartition,
    state: &CVInitialState<S>,
    p: &SystemParams<S>,
    t_max: S,
    mode: WindowMode,
) -> Result<WindowMin<S>> {
    if !(t_max.is_finite() && t_max > S::zero()) {
        return domain("window length must be finite and > 0");
    }
    state.real_amplitudes()?;
    match mode {
        WindowMode::Resolved { step } => {
            let fast = crate::scalar::to_f64(p.r_a() + p.r_b());
            let limit = std::f64::consts::PI / (8.0 * fast);
            if !(step > 0.0 && step <= limit) {
                return domain(format!(
                    "step {step:e} does not resolve the fast frequency; need 0 < step <= {limit:e}"
                ));
            }
            let n = (crate::scalar::to_f64(t_max) / step).ceil() + 1.0;
            if n > MAX_RESOLVED_POINTS {
                return domain(format!(
                    "resolved scan needs {n:e} points (limit {MAX_RESOLVED_POINTS:e}); use the envelope mode"
                ));
            }
            let f = |t: S| {
                duan(bipartition, ScaledTime::new(t).expect("t >= 0"), state, p)
                    .map(|r| r.d)
                    .unwrap_or(S::nan())
            };
            Ok(scan_and_refine(f, t_max, (n as usize).max(2)))
        }
        WindowMode::Envelope { points } => {
            if points < 2 {
                return domain("envelope scan needs at least 2 points");
            }
            let f = |t: S| {
                fast_split(bipartition, ScaledTime::new(t).expect("t >= 0"), state, p)
                    .map(|s| s.envelope())
                    .unwrap_or(S::nan())
            };
            Ok(scan_and_refine(f, t_max, points))
        }
    }
}

/// Mean over `[0, t_max]` of the fraction of time with `D < 1`, averaging the
/// exact per-cycle dwell fraction on a grid of `points` slow samples.
pub fn dwell_fraction<S: Real>(
    bipartition: Bipartition,
    state: &CVInitialState<S>,
    p: &SystemParams<S>,
    t_max: S,
    points: usize,
) -> Result<S> {
    if points < 2 || !(t_max > S::zero()) {
        return domain("dwell fraction needs t_max > 0 and at least 2 points");
    }
    let step = t_max / lit((points - 1) as f64);
    let mut acc = S::zero();
    for i in 0..points {
        let w: S = if i == 0 || i == points - 1 { lit(0.5) } else { S::one() };
        let split = fast_split(bipartition, ScaledTime::new(step * lit(i as f64))?, state, p)?;
        acc = acc + w * split.dwell_fraction();
    }
    Ok(acc / lit((points - 1) as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Low,
    High,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeasibilityCondition {
    /// `g0² / (ω_m κ) ≫ 1`
    PhotonBlockade,
    /// `ω_m ≫ κ`
    ResolvedSideband,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub k: f64,
    pub regime: Regime,
    pub envelope_period: f64,
    pub envelope_period_s: f64,
    pub feasibility_condition: FeasibilityCondition,
    pub feasibility_ratio: f64,
}

/// Coupling threshold `1/√2`; couplings at or above it are "high".
pub fn regime_of(k: f64) -> Regime {
    if k < std::f64::consts::FRAC_1_SQRT_2 {
        Regime::Low
    } else {
        Regime::High
    }
}

/// `π/k²` in the low regime, `2π` in the high regime (scaled time).
pub fn envelope_period(k: f64) -> f64 {
    match regime_of(k) {
        Regime::Low => std::f64::consts::PI / (k * k),
        Regime::High => 2.0 * std::f64::consts::PI,
    }
}

/// Classifies the coupling and evaluates the matching feasibility ratio.
/// `kappa` is the cavity linewidth as a rate, in the same units as the
/// frequencies of `p`.
pub fn regime_report(p: &SystemParams<f64>, kappa: f64) -> Result<RegimeReport> {
    let k = p.k();
    if !(k > 0.0 && k.is_finite()) {
        return domain("regime report needs k > 0");
    }
    if !(kappa > 0.0 && kappa.is_finite()) {
        return domain("kappa must be > 0");
    }
    let regime = regime_of(k);
    let period = envelope_period(k);
    let (feasibility_condition, feasibility_ratio) = match regime {
        Regime::Low => (
            FeasibilityCondition::PhotonBlockade,
            p.g0 * p.g0 / (p.omega_m * kappa),
        ),
        Regime::High => (FeasibilityCondition::ResolvedSideband, p.omega_m / kappa),
    };
    Ok(RegimeReport {
        k,
        regime,
        envelope_period: period,
        envelope_period_s: period / p.omega_m,
        feasibility_condition,
        feasibility_ratio,
    })
}
