//! Run configuration: per-command defaults, JSON files, `key=value` overrides.
//!
//! Every physical quantity carries its unit in the key name. Angular
//! frequencies end in `_rad_per_s`, rates in `_per_s`, lengths in `_m`,
//! temperatures in `_kelvin`; `_scaled` times are in units of `1/ω_m`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::density::EntropyBase;
use crate::design::{cavity_linewidth, Preset};
use crate::duan::{Bipartition, WindowMode};
use crate::error::{Error, Result};
use crate::physics::{thermal_occupation, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Fig2,
    Fig3,
    Fig4a,
    Fig4b,
    Design,
    OracleCheck,
    Sweep,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Fig2,
        Command::Fig3,
        Command::Fig4a,
        Command::Fig4b,
        Command::Design,
        Command::OracleCheck,
        Command::Sweep,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::Fig2 => "fig2",
            Command::Fig3 => "fig3",
            Command::Fig4a => "fig4a",
            Command::Fig4b => "fig4b",
            Command::Design => "design",
            Command::OracleCheck => "oracle-check",
            Command::Sweep => "sweep",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Config {
                field: "command".into(),
                message: format!("unknown command {s:?}"),
            })
    }
}

/// Inclusive uniform grid of `points` values from `start` to `end`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub start: f64,
    pub end: f64,
    pub points: usize,
}

impl Grid {
    pub fn new(start: f64, end: f64, points: usize) -> Self {
        Self { start, end, points }
    }

    pub fn values(&self) -> Vec<f64> {
        crate::qubit::linspace(self.start, self.end, self.points)
    }

    fn validate(&self, field: &str) -> Result<()> {
        if self.points == 0 {
            return Err(config_error(field, "grid must have at least one point"));
        }
        if !(self.start.is_finite() && self.end.is_finite()) {
            return Err(config_error(field, "grid bounds must be finite"));
        }
        if self.points > 1 && self.end <= self.start {
            return Err(config_error(field, "grid end must exceed start"));
        }
        Ok(())
    }
}

/// Quantities a sweep axis may vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    K,
    Alpha,
    Beta,
    TemperatureKelvin,
    OmegaMRadPerS,
    KappaPerS,
}

impl SweepParameter {
    pub fn column(self) -> &'static str {
        match self {
            SweepParameter::K => "k",
            SweepParameter::Alpha => "alpha",
            SweepParameter::Beta => "beta",
            SweepParameter::TemperatureKelvin => "temperature_kelvin",
            SweepParameter::OmegaMRadPerS => "omega_m_rad_per_s",
            SweepParameter::KappaPerS => "kappa_per_s",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub parameter: SweepParameter,
    pub grid: Grid,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub x: SweepAxis,
    pub y: Option<SweepAxis>,
    pub bipartition: Bipartition,
}

/// Minimization window `[0, length_scaled]`; `None` means `ω_m/κ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSpec {
    pub length_scaled: Option<f64>,
    pub sampling: WindowMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignSpec {
    pub mirror_radii_m: Vec<f64>,
    /// Finesse at which the optimizer minimizes `τ_e/τ_p`.
    pub search_finesse: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSpec {
    pub qubit_couplings: Vec<f64>,
    pub qubit_points: usize,
    pub cv_points: usize,
    pub zero_coupling_points: usize,
    pub max_amplitude: f64,
    pub max_nbar: f64,
    pub max_k: f64,
    pub max_time_scaled: f64,
    /// Replaces every per-check tolerance when set.
    pub tolerance_override: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub seed: u64,
    /// Named parameter set (`proposed`, `optimal_amplitudes`, `reported`)
    /// applied beneath the file and overrides. `k` is left untouched.
    #[serde(default)]
    pub preset: Option<String>,
    pub k: f64,
    pub alpha: f64,
    pub beta: f64,
    pub temperature_kelvin: f64,
    pub omega_a_rad_per_s: f64,
    pub omega_b_rad_per_s: f64,
    pub omega_m_rad_per_s: f64,
    pub kappa_per_s: f64,
    pub entropy_base: EntropyBase,
    pub time_scaled: Grid,
    pub window: WindowSpec,
    pub sweep: SweepSpec,
    pub design: DesignSpec,
    pub oracle: OracleSpec,
}

pub(crate) fn config_error(field: &str, message: impl Into<String>) -> Error {
    Error::Config {
        field: field.into(),
        message: message.into(),
    }
}

impl RunConfig {
    /// Proposed-experiment parameters with the command's own grids.
    pub fn defaults(command: Command) -> Self {
        let preset = Preset::proposed();
        let kappa = cavity_linewidth(&preset.geometry).expect("preset geometry is valid");
        let k_axis = SweepAxis {
            parameter: SweepParameter::K,
            grid: Grid::new(0.05, 1.5, 146),
        };
        let sweep = match command {
            Command::Fig4b => SweepSpec {
                x: SweepAxis {
                    parameter: SweepParameter::Alpha,
                    grid: Grid::new(0.0, 2.0, 81),
                },
                y: Some(SweepAxis {
                    parameter: SweepParameter::Beta,
                    grid: Grid::new(0.0, 2.0, 81),
                }),
                bipartition: Bipartition::AB,
            },
            Command::Fig4a => SweepSpec {
                x: k_axis,
                y: Some(SweepAxis {
                    parameter: SweepParameter::TemperatureKelvin,
                    grid: Grid::new(0.0, 2e-6, 21),
                }),
                bipartition: Bipartition::AB,
            },
            _ => SweepSpec {
                x: k_axis,
                y: None,
                bipartition: Bipartition::AB,
            },
        };
        Self {
            command,
            seed: 0,
            preset: None,
            k: if command == Command::Fig2 { 0.5 } else { 0.74 },
            alpha: preset.alpha,
            beta: preset.beta,
            temperature_kelvin: preset.spec.temperature,
            omega_a_rad_per_s: preset.omega_optical,
            omega_b_rad_per_s: preset.omega_optical,
            omega_m_rad_per_s: 2.0 * PI * 95e3,
            kappa_per_s: kappa,
            entropy_base: EntropyBase::Bits,
            time_scaled: Grid::new(0.0, 8.0 * PI, 4000),
            window: WindowSpec {
                length_scaled: None,
                sampling: WindowMode::Envelope { points: 2000 },
            },
            sweep,
            design: DesignSpec {
                mirror_radii_m: vec![0.01, 0.025, 0.05, 0.1],
                search_finesse: 5.8e5,
            },
            oracle: OracleSpec {
                qubit_couplings: vec![0.1, 0.5, 1.0],
                qubit_points: 50,
                cv_points: 20,
                zero_coupling_points: 5,
                max_amplitude: 1.0,
                max_nbar: 0.5,
                max_k: 1.0,
                max_time_scaled: 4.0 * PI,
                tolerance_override: None,
            },
        }
    }

    /// Defaults for `command`, overlaid by `file` (a JSON object, or a CSV
    /// produced by this crate whose metadata carries a config), then by
    /// `overrides` of the form `dotted.key=value`.
    pub fn resolve(command: Command, file: Option<&str>, overrides: &[String]) -> Result<Self> {
        let layer = file.map(parse_layer).transpose()?;
        let mut preset = layer
            .as_ref()
            .and_then(|l| l.get("preset"))
            .and_then(Value::as_str)
            .map(str::to_owned);
        for item in overrides {
            if let Some(("preset", raw)) = item.split_once('=').map(|(k, v)| (k.trim(), v.trim())) {
                preset = Some(raw.to_owned());
            }
        }
        let mut base = Self::defaults(command);
        if let Some(name) = &preset {
            base.apply_preset(&Preset::by_name(name)?)?;
        }
        let mut value = serde_json::to_value(base)?;
        if let Some(layer) = layer {
            merge(&mut value, layer, "")?;
        }
        for item in overrides {
            apply_override(&mut value, item)?;
        }
        value["command"] = Value::String(command.as_str().into());
        let cfg: RunConfig = serde_json::from_value(value).map_err(|e| config_error("config", e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Copies amplitudes, temperature, frequencies and the cavity decay rate
    /// from `preset`.
    pub fn apply_preset(&mut self, preset: &Preset) -> Result<()> {
        self.alpha = preset.alpha;
        self.beta = preset.beta;
        self.temperature_kelvin = preset.spec.temperature;
        self.omega_a_rad_per_s = preset.omega_optical;
        self.omega_b_rad_per_s = preset.omega_optical;
        self.omega_m_rad_per_s = preset.spec.omega_m;
        self.kappa_per_s = cavity_linewidth(&preset.geometry)?;
        Ok(())
    }

    /// Extracts the config recorded in a result table's metadata.
    pub fn from_metadata(csv_text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_value(parse_layer(csv_text)?)
            .map_err(|e| config_error("config", e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("k", self.k),
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("temperature_kelvin", self.temperature_kelvin),
        ];
        for (field, v) in finite {
            if !v.is_finite() {
                return Err(config_error(field, "must be finite"));
            }
        }
        if self.k < 0.0 {
            return Err(config_error("k", "must be >= 0"));
        }
        if self.temperature_kelvin < 0.0 {
            return Err(config_error("temperature_kelvin", "must be >= 0"));
        }
        let positive = [
            ("omega_a_rad_per_s", self.omega_a_rad_per_s),
            ("omega_b_rad_per_s", self.omega_b_rad_per_s),
            ("omega_m_rad_per_s", self.omega_m_rad_per_s),
            ("kappa_per_s", self.kappa_per_s),
        ];
        for (field, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(config_error(field, "must be finite and > 0"));
            }
        }
        self.time_scaled.validate("time_scaled")?;
        if self.time_scaled.start < 0.0 {
            return Err(config_error("time_scaled.start", "scaled time must be >= 0"));
        }
        if let Some(len) = self.window.length_scaled {
            if !(len.is_finite() && len > 0.0) {
                return Err(config_error("window.length_scaled", "must be finite and > 0"));
            }
        }
        match self.window.sampling {
            WindowMode::Envelope { points } if points < 2 => {
                return Err(config_error("window.sampling.points", "need at least 2 points"));
            }
            WindowMode::Resolved { step } if !(step > 0.0 && step.is_finite()) => {
                return Err(config_error("window.sampling.step", "must be finite and > 0"));
            }
            _ => {}
        }
        self.sweep.x.grid.validate("sweep.x.grid")?;
        if let Some(y) = &self.sweep.y {
            y.grid.validate("sweep.y.grid")?;
            if y.parameter == self.sweep.x.parameter {
                return Err(config_error("sweep.y.parameter", "must differ from sweep.x.parameter"));
            }
        }
        if self.design.mirror_radii_m.is_empty() {
            return Err(config_error("design.mirror_radii_m", "at least one mirror radius is required"));
        }
        if self.design.mirror_radii_m.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(config_error("design.mirror_radii_m", "radii must be finite and > 0"));
        }
        if !(self.design.search_finesse > 0.0 && self.design.search_finesse.is_finite()) {
            return Err(config_error("design.search_finesse", "must be finite and > 0"));
        }
        let o = &self.oracle;
        if o.qubit_couplings.iter().any(|k| !(k.is_finite() && *k >= 0.0)) {
            return Err(config_error("oracle.qubit_couplings", "couplings must be finite and >= 0"));
        }
        let bounds = [
            ("oracle.max_amplitude", o.max_amplitude),
            ("oracle.max_nbar", o.max_nbar),
            ("oracle.max_k", o.max_k),
            ("oracle.max_time_scaled", o.max_time_scaled),
        ];
        for (field, v) in bounds {
            if !(v.is_finite() && v > 0.0) {
                return Err(config_error(field, "must be finite and > 0"));
            }
        }
        if let Some(tol) = o.tolerance_override {
            if !(tol.is_finite() && tol >= 0.0) {
                return Err(config_error("oracle.tolerance_override", "must be finite and >= 0"));
            }
        }
        Ok(())
    }

    pub fn system(&self) -> Result<SystemParams<f64>> {
        SystemParams::new(
            self.omega_a_rad_per_s,
            self.omega_b_rad_per_s,
            self.omega_m_rad_per_s,
            self.k * self.omega_m_rad_per_s,
        )
    }

    /// Thermal occupation of the mirror; zero at `T = 0`.
    pub fn nbar(&self) -> Result<f64> {
        if self.temperature_kelvin == 0.0 {
            Ok(0.0)
        } else {
            thermal_occupation(self.temperature_kelvin, self.omega_m_rad_per_s)
        }
    }

    /// Window length in scaled time.
    pub fn window_length(&self) -> f64 {
        self.window
            .length_scaled
            .unwrap_or(self.omega_m_rad_per_s / self.kappa_per_s)
    }

    pub fn set(&mut self, parameter: SweepParameter, value: f64) {
        match parameter {
            SweepParameter::K => self.k = value,
            SweepParameter::Alpha => self.alpha = value,
            SweepParameter::Beta => self.beta = value,
            SweepParameter::TemperatureKelvin => self.temperature_kelvin = value,
            SweepParameter::OmegaMRadPerS => self.omega_m_rad_per_s = value,
            SweepParameter::KappaPerS => self.kappa_per_s = value,
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

/// A config layer: plain JSON, or the `# config:` line of a result CSV.
fn parse_layer(text: &str) -> Result<Value> {
    let trimmed = text.trim_start();
    let json = if trimmed.starts_with('#') {
        trimmed
            .lines()
            .take_while(|l| l.starts_with('#'))
            .find_map(|l| l.strip_prefix("# config:"))
            .ok_or_else(|| config_error("config", "metadata block has no `# config:` line"))?
            .trim()
            .to_string()
    } else {
        text.to_string()
    };
    let value: Value = serde_json::from_str(&json)
        .map_err(|e| config_error("config", format!("line {}, column {}: {e}", e.line(), e.column())))?;
    if !value.is_object() {
        return Err(config_error("config", "top level must be a JSON object"));
    }
    Ok(value)
}

fn merge(base: &mut Value, layer: Value, path: &str) -> Result<()> {
    match layer {
        Value::Object(map) => {
            for (key, v) in map {
                let field = if path.is_empty() { key.clone() } else { format!("{path}.{key}") };
                let slot = base
                    .get_mut(&key)
                    .ok_or_else(|| config_error(&field, "unknown key"))?;
                if slot.is_object() && v.is_object() {
                    merge(slot, v, &field)?;
                } else {
                    *slot = v;
                }
            }
            Ok(())
        }
        other => {
            *base = other;
            Ok(())
        }
    }
}

fn apply_override(value: &mut Value, item: &str) -> Result<()> {
    let (key, raw) = item
        .split_once('=')
        .ok_or_else(|| config_error(item, "override must look like key=value"))?;
    let key = key.trim();
    let mut slot = &mut *value;
    let mut walked = String::new();
    for part in key.split('.') {
        if !walked.is_empty() {
            walked.push('.');
        }
        walked.push_str(part);
        if slot.is_null() {
            return Err(config_error(&walked, "parent is unset; give the whole object as JSON"));
        }
        slot = slot
            .get_mut(part)
            .ok_or_else(|| config_error(&walked, "unknown key"))?;
    }
    *slot = serde_json::from_str(raw.trim()).unwrap_or_else(|_| Value::String(raw.trim().to_string()));
    Ok(())
}
