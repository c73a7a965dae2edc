//! Run configuration: strict JSON with units spelled out in key names.

use crate::error::CliError;
use abfringe::interferometer::{FringeModel, WBConfig};
use abfringe::phase::{Direction, PhaseOptions};
use abfringe::quadrature::DiskGrid;
use abfringe::{Solenoid, Waveform};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    Cancel,
    Faraday,
    Wb,
    Sweep,
    Trajectory,
}

impl Experiment {
    pub const ALL: [Experiment; 5] = [
        Experiment::Cancel,
        Experiment::Faraday,
        Experiment::Wb,
        Experiment::Sweep,
        Experiment::Trajectory,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Experiment::Cancel => "cancel",
            Experiment::Faraday => "faraday",
            Experiment::Wb => "wb",
            Experiment::Sweep => "sweep",
            Experiment::Trajectory => "trajectory",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Experiment,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solenoid: Option<SolenoidBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub waveform: Option<WaveformBlock>,
    #[serde(rename = "loop", default, skip_serializing_if = "Option::is_none")]
    pub loop_: Option<LoopBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub faraday: Option<FaradayBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interferometer: Option<InterferometerBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wb: Option<WbBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<TrajectoryBlock>,
    #[serde(default)]
    pub numerics: Numerics,
    #[serde(default)]
    pub output: OutputBlock,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolenoidBlock {
    pub radius_cm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum WaveformBlock {
    Sinusoid {
        #[serde(rename = "B_static_gauss")]
        b_static_gauss: f64,
        #[serde(rename = "B_amp_gauss")]
        b_amp_gauss: f64,
        freq_hz: f64,
        #[serde(default)]
        phase0_rad: f64,
    },
    Ramp {
        #[serde(rename = "B_static_gauss")]
        b_static_gauss: f64,
        rate_gauss_per_s: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopBlock {
    pub radii_cm: Vec<f64>,
    pub t0_s: f64,
    pub duration_s: f64,
    pub directions: Vec<Direction>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaradayBlock {
    pub radii_cm: Vec<f64>,
    pub times_s: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterferometerBlock {
    #[serde(rename = "D_cm")]
    pub d_cm: f64,
    pub theta_rad: f64,
    pub lambda_cm: f64,
}

/// A single number or a list of numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(f64),
    Many(Vec<f64>),
}

impl OneOrMany {
    pub fn values(&self) -> Vec<f64> {
        match self {
            OneOrMany::One(v) => vec![*v],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WbBlock {
    #[serde(rename = "B0_gauss")]
    pub b0_gauss: OneOrMany,
    #[serde(default = "yes")]
    pub include_second_order: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents: Option<ExponentBlock>,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExponentBlock {
    #[serde(rename = "B_grid_gauss")]
    pub b_grid_gauss: Vec<f64>,
    #[serde(rename = "D_grid_cm")]
    pub d_grid_cm: Vec<f64>,
    #[serde(rename = "D_fit_B0_gauss")]
    pub d_fit_b0_gauss: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    pub samples: usize,
    #[serde(default = "all_models")]
    pub models: Vec<FringeModel>,
}

fn all_models() -> Vec<FringeModel> {
    FringeModel::ALL.to_vec()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectoryBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_cm: Option<f64>,
    #[serde(rename = "kinetic_energy_keV", default, skip_serializing_if = "Option::is_none")]
    pub kinetic_energy_kev: Option<f64>,
    #[serde(rename = "B0_gauss")]
    pub b0_gauss: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub revolutions: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration_s: Option<f64>,
    /// Defaults to 10⁻⁴ of the cyclotron period.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt_s: Option<f64>,
    #[serde(default = "every_hundred")]
    pub sample_every: usize,
}

fn every_hundred() -> usize {
    100
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Numerics {
    pub n_sub: usize,
    pub n_time: usize,
    pub disk_n_r: usize,
    pub disk_n_phi: usize,
    pub consistency_tolerance: f64,
}

impl Default for Numerics {
    fn default() -> Self {
        let o = PhaseOptions::default();
        Numerics {
            n_sub: o.n_sub,
            n_time: o.n_time,
            disk_n_r: o.disk.n_r,
            disk_n_phi: o.disk.n_phi,
            consistency_tolerance: o.consistency_tolerance,
        }
    }
}

impl Numerics {
    pub fn phase_options(&self) -> PhaseOptions {
        PhaseOptions {
            n_sub: self.n_sub,
            n_time: self.n_time,
            disk: DiskGrid {
                n_r: self.disk_n_r,
                n_phi: self.disk_n_phi,
                radial_breaks: Vec::new(),
            },
            consistency_tolerance: self.consistency_tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default)]
    pub format: Format,
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn require<'a, T>(block: &'a Option<T>, name: &str, exp: Experiment) -> Result<&'a T, CliError> {
    block
        .as_ref()
        .ok_or_else(|| config_err(format!("experiment '{exp}' needs a '{name}' block")))
}

fn positive(value: f64, what: &str) -> Result<(), CliError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(config_err(format!("{what} must be positive, got {value}")))
    }
}

fn finite(value: f64, what: &str) -> Result<(), CliError> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(config_err(format!("{what} must be finite")))
    }
}

fn non_empty<T>(v: &[T], what: &str) -> Result<(), CliError> {
    if v.is_empty() {
        Err(config_err(format!("{what} must not be empty")))
    } else {
        Ok(())
    }
}

impl RunConfig {
    pub fn from_value(value: Value) -> Result<Self, CliError> {
        let cfg: RunConfig = serde_json::from_value(value).map_err(|e| config_err(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn present_blocks(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        let mut mark = |present: bool, name| {
            if present {
                v.push(name)
            }
        };
        mark(self.solenoid.is_some(), "solenoid");
        mark(self.waveform.is_some(), "waveform");
        mark(self.loop_.is_some(), "loop");
        mark(self.faraday.is_some(), "faraday");
        mark(self.interferometer.is_some(), "interferometer");
        mark(self.wb.is_some(), "wb");
        mark(self.sweep.is_some(), "sweep");
        mark(self.trajectory.is_some(), "trajectory");
        v
    }

    pub fn required_blocks(exp: Experiment) -> &'static [&'static str] {
        match exp {
            Experiment::Cancel => &["solenoid", "waveform", "loop"],
            Experiment::Faraday => &["solenoid", "waveform", "faraday"],
            Experiment::Wb => &["interferometer", "wb"],
            Experiment::Sweep => &["interferometer", "waveform", "sweep"],
            Experiment::Trajectory => &["trajectory"],
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let exp = self.experiment;
        let required = Self::required_blocks(exp);
        for block in self.present_blocks() {
            if !required.contains(&block) {
                return Err(config_err(format!(
                    "block '{block}' is not used by experiment '{exp}'"
                )));
            }
        }
        for block in required {
            if !self.present_blocks().contains(block) {
                return Err(config_err(format!("experiment '{exp}' needs a '{block}' block")));
            }
        }
        let n = &self.numerics;
        if n.n_sub == 0 || n.n_time == 0 || n.disk_n_r == 0 || n.disk_n_phi == 0 {
            return Err(config_err("numerics panel counts must be at least 1"));
        }
        positive(n.consistency_tolerance, "numerics.consistency_tolerance")?;

        match exp {
            Experiment::Cancel => {
                self.solenoid()?;
                self.waveform()?;
                let l = require(&self.loop_, "loop", exp)?;
                non_empty(&l.radii_cm, "loop.radii_cm")?;
                non_empty(&l.directions, "loop.directions")?;
                for r in &l.radii_cm {
                    positive(*r, "loop.radii_cm entries")?;
                }
                finite(l.t0_s, "loop.t0_s")?;
                if !(l.duration_s >= 0.0 && l.duration_s.is_finite()) {
                    return Err(config_err("loop.duration_s must be non-negative"));
                }
            }
            Experiment::Faraday => {
                self.solenoid()?;
                self.waveform()?;
                let f = require(&self.faraday, "faraday", exp)?;
                non_empty(&f.radii_cm, "faraday.radii_cm")?;
                non_empty(&f.times_s, "faraday.times_s")?;
                for r in &f.radii_cm {
                    positive(*r, "faraday.radii_cm entries")?;
                }
                for t in &f.times_s {
                    finite(*t, "faraday.times_s entries")?;
                }
            }
            Experiment::Wb => {
                let base = self.interferometer(0.0)?;
                let wb = require(&self.wb, "wb", exp)?;
                let bs = wb.b0_gauss.values();
                non_empty(&bs, "wb.B0_gauss")?;
                for b in bs {
                    finite(b, "wb.B0_gauss entries")?;
                }
                if let Some(e) = &wb.exponents {
                    for b in &e.b_grid_gauss {
                        positive(*b, "wb.exponents.B_grid_gauss entries")?;
                    }
                    for d in &e.d_grid_cm {
                        positive(*d, "wb.exponents.D_grid_cm entries")?;
                    }
                    positive(e.d_fit_b0_gauss, "wb.exponents.D_fit_B0_gauss")?;
                }
                let _ = base;
            }
            Experiment::Sweep => {
                self.interferometer(0.0)?;
                let w = self.waveform()?;
                if w.period().is_none() {
                    return Err(config_err("sweep needs a sinusoidal waveform with freq_hz > 0"));
                }
                let s = require(&self.sweep, "sweep", exp)?;
                if s.samples == 0 {
                    return Err(config_err("sweep.samples must be at least 1"));
                }
                non_empty(&s.models, "sweep.models")?;
            }
            Experiment::Trajectory => {
                let t = require(&self.trajectory, "trajectory", exp)?;
                match (t.lambda_cm, t.kinetic_energy_kev) {
                    (Some(l), None) => positive(l, "trajectory.lambda_cm")?,
                    (None, Some(k)) => positive(k, "trajectory.kinetic_energy_keV")?,
                    _ => {
                        return Err(config_err(
                            "trajectory needs exactly one of lambda_cm and kinetic_energy_keV",
                        ))
                    }
                }
                finite(t.b0_gauss, "trajectory.B0_gauss")?;
                match (t.revolutions, t.duration_s) {
                    (Some(r), None) => {
                        positive(r, "trajectory.revolutions")?;
                        if t.b0_gauss == 0.0 {
                            return Err(config_err(
                                "revolutions are undefined without a field; give duration_s",
                            ));
                        }
                    }
                    (None, Some(d)) => positive(d, "trajectory.duration_s")?,
                    _ => {
                        return Err(config_err(
                            "trajectory needs exactly one of revolutions and duration_s",
                        ))
                    }
                }
                if let Some(dt) = t.dt_s {
                    positive(dt, "trajectory.dt_s")?;
                }
                if t.sample_every == 0 {
                    return Err(config_err("trajectory.sample_every must be at least 1"));
                }
            }
        }
        Ok(())
    }

    pub fn solenoid(&self) -> Result<Solenoid, CliError> {
        let s = require(&self.solenoid, "solenoid", self.experiment)?;
        Solenoid::new(s.radius_cm, self.waveform()?).map_err(|e| config_err(format!("solenoid: {e}")))
    }

    pub fn waveform(&self) -> Result<Waveform, CliError> {
        let w = require(&self.waveform, "waveform", self.experiment)?;
        match *w {
            WaveformBlock::Sinusoid {
                b_static_gauss,
                b_amp_gauss,
                freq_hz,
                phase0_rad,
            } => Waveform::sinusoid(b_static_gauss, b_amp_gauss, freq_hz, phase0_rad),
            WaveformBlock::Ramp {
                b_static_gauss,
                rate_gauss_per_s,
            } => Waveform::ramp(b_static_gauss, rate_gauss_per_s),
        }
        .map_err(|e| config_err(format!("waveform: {e}")))
    }

    pub fn interferometer(&self, b0: f64) -> Result<WBConfig, CliError> {
        let i = require(&self.interferometer, "interferometer", self.experiment)?;
        WBConfig::new(i.d_cm, i.theta_rad, i.lambda_cm, b0)
            .map_err(|e| config_err(format!("interferometer: {e}")))
    }

    /// Example configuration for each experiment, using the historical
    /// interferometer (D = 5 cm, θ = 0.02 rad, λ = 4.86e-10 cm) and 60 Hz.
    pub fn example(exp: Experiment) -> RunConfig {
        let mut cfg = RunConfig {
            experiment: exp,
            solenoid: None,
            waveform: None,
            loop_: None,
            faraday: None,
            interferometer: None,
            wb: None,
            sweep: None,
            trajectory: None,
            numerics: Numerics::default(),
            output: OutputBlock::default(),
        };
        let mss = InterferometerBlock {
            d_cm: abfringe::interferometer::MSS_SPACING_CM,
            theta_rad: abfringe::interferometer::MSS_THETA_RAD,
            lambda_cm: abfringe::interferometer::MSS_WAVELENGTH_CM,
        };
        let mains = WaveformBlock::Sinusoid {
            b_static_gauss: 0.0,
            b_amp_gauss: 0.1,
            freq_hz: 60.0,
            phase0_rad: 0.0,
        };
        match exp {
            Experiment::Cancel => {
                cfg.solenoid = Some(SolenoidBlock { radius_cm: 1.0 });
                cfg.waveform = Some(WaveformBlock::Ramp {
                    b_static_gauss: 2.0,
                    rate_gauss_per_s: 100.0,
                });
                cfg.loop_ = Some(LoopBlock {
                    radii_cm: vec![1.5, 2.0, 10.0],
                    t0_s: 0.0,
                    duration_s: 1e-3,
                    directions: vec![Direction::CounterClockwise, Direction::Clockwise],
                });
            }
            Experiment::Faraday => {
                cfg.solenoid = Some(SolenoidBlock { radius_cm: 1.0 });
                cfg.waveform = Some(WaveformBlock::Sinusoid {
                    b_static_gauss: 0.0,
                    b_amp_gauss: 1.0,
                    freq_hz: 60.0,
                    phase0_rad: 0.0,
                });
                cfg.faraday = Some(FaradayBlock {
                    radii_cm: vec![0.5, 2.0, 10.0],
                    times_s: vec![1e-3, 4e-3, 1e-2],
                });
            }
            Experiment::Wb => {
                cfg.interferometer = Some(mss);
                cfg.wb = Some(WbBlock {
                    b0_gauss: OneOrMany::Many(vec![0.1, 1.0, 5.0]),
                    include_second_order: true,
                    exponents: Some(ExponentBlock {
                        b_grid_gauss: (0..12)
                            .map(|i| 0.01 * 50f64.powf(i as f64 / 11.0))
                            .collect(),
                        d_grid_cm: (1..=10).map(f64::from).collect(),
                        d_fit_b0_gauss: 0.05,
                    }),
                });
            }
            Experiment::Sweep => {
                cfg.interferometer = Some(mss);
                cfg.waveform = Some(mains);
                cfg.sweep = Some(SweepBlock {
                    samples: 64,
                    models: all_models(),
                });
            }
            Experiment::Trajectory => {
                cfg.trajectory = Some(TrajectoryBlock {
                    lambda_cm: Some(abfringe::interferometer::MSS_WAVELENGTH_CM),
                    kinetic_energy_kev: None,
                    b0_gauss: 1.0,
                    revolutions: Some(1.0),
                    duration_s: None,
                    dt_s: None,
                    sample_every: 100,
                });
            }
        }
        cfg
    }
}

/// Applies `a.b.c=value` edits to a JSON document. The value is read as JSON
/// when it parses, otherwise as a plain string. Numeric segments index arrays.
pub fn apply_override(doc: &mut Value, assignment: &str) -> Result<(), CliError> {
    let (path, raw) = assignment
        .split_once('=')
        .ok_or_else(|| config_err(format!("override '{assignment}' is not of the form key=value")))?;
    let path = path.trim();
    if path.is_empty() {
        return Err(config_err(format!("override '{assignment}' has an empty key")));
    }
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut node = doc;
    let segments: Vec<&str> = path.split('.').collect();
    for (i, seg) in segments.iter().enumerate() {
        let last = i + 1 == segments.len();
        node = match node {
            Value::Object(map) => {
                if last {
                    map.insert((*seg).to_string(), value);
                    return Ok(());
                }
                map.entry((*seg).to_string())
                    .or_insert_with(|| Value::Object(Default::default()))
            }
            Value::Array(items) => {
                let idx: usize = seg
                    .parse()
                    .map_err(|_| config_err(format!("'{seg}' in '{path}' is not an array index")))?;
                let len = items.len();
                let slot = items
                    .get_mut(idx)
                    .ok_or_else(|| config_err(format!("index {idx} in '{path}' is out of range ({len})")))?;
                if last {
                    *slot = value;
                    return Ok(());
                }
                slot
            }
            _ => return Err(config_err(format!("cannot descend into '{seg}' of '{path}'"))),
        };
    }
    unreachable!("loop returns on the last segment")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples_validate() {
        for exp in Experiment::ALL {
            let cfg = RunConfig::example(exp);
            cfg.validate().unwrap();
            let v = serde_json::to_value(&cfg).unwrap();
            assert_eq!(RunConfig::from_value(v).unwrap(), cfg);
        }
    }

    #[test]
    fn unknown_keys_rejected() {
        let mut v = serde_json::to_value(RunConfig::example(Experiment::Wb)).unwrap();
        v["interferometer"]["D_mm"] = 50.into();
        assert!(matches!(RunConfig::from_value(v), Err(CliError::Config(_))));
        let mut v = serde_json::to_value(RunConfig::example(Experiment::Sweep)).unwrap();
        v["waveform"]["amplitude"] = 1.into();
        assert!(RunConfig::from_value(v).is_err());
    }

    #[test]
    fn stray_block_rejected() {
        let mut cfg = RunConfig::example(Experiment::Wb);
        cfg.solenoid = Some(SolenoidBlock { radius_cm: 1.0 });
        assert!(cfg.validate().is_err());
        let mut cfg = RunConfig::example(Experiment::Cancel);
        cfg.loop_ = None;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn physical_checks() {
        let mut cfg = RunConfig::example(Experiment::Cancel);
        cfg.solenoid = Some(SolenoidBlock { radius_cm: -1.0 });
        assert!(cfg.validate().is_err());
        let mut cfg = RunConfig::example(Experiment::Trajectory);
        cfg.trajectory.as_mut().unwrap().kinetic_energy_kev = Some(60.0);
        assert!(cfg.validate().is_err());
        let mut cfg = RunConfig::example(Experiment::Sweep);
        cfg.waveform = Some(WaveformBlock::Ramp {
            b_static_gauss: 0.0,
            rate_gauss_per_s: 1.0,
        });
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn overrides_edit_nested_values() {
        let mut v = serde_json::to_value(RunConfig::example(Experiment::Wb)).unwrap();
        apply_override(&mut v, "wb.B0_gauss=0").unwrap();
        apply_override(&mut v, "interferometer.theta_rad=0.03").unwrap();
        apply_override(&mut v, "wb.exponents.D_grid_cm.0=2").unwrap();
        let cfg = RunConfig::from_value(v).unwrap();
        assert_eq!(cfg.wb.as_ref().unwrap().b0_gauss, OneOrMany::One(0.0));
        assert_eq!(cfg.interferometer.unwrap().theta_rad, 0.03);
        assert_eq!(cfg.wb.unwrap().exponents.unwrap().d_grid_cm[0], 2.0);
    }

    #[test]
    fn override_string_fallback_and_errors() {
        let mut v = serde_json::to_value(RunConfig::example(Experiment::Sweep)).unwrap();
        apply_override(&mut v, "output.format=json").unwrap();
        assert_eq!(v["output"]["format"], "json");
        assert!(apply_override(&mut v, "no_equals").is_err());
        assert!(apply_override(&mut v, "sweep.models.9=naive_ab").is_err());
        assert!(apply_override(&mut v, "sweep.samples.x=1").is_err());
    }
}
