//! Experiment configuration as read from TOML.

use std::path::Path;

use nltr_core::contact::ContactParams;
use nltr_core::fem::AbsorbingParams;
use nltr_core::mesh::{BoundaryTag, CrackSpec, LaminateSpec, MeshOptions};
use nltr_core::signals::{ChirpSpec, DelayMode, DelaySchedule};
use nltr_core::MaterialTable64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::HarnessError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransmitterConfig {
    pub side: BoundaryTag,
    /// Position of the patch centre along the side, in m.
    pub center: f64,
    pub span: f64,
    /// Angle between the force and the boundary line, rotating inward.
    pub angle_deg: f64,
    pub max_pressure: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReceiverConfig {
    pub name: String,
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    pub dt: f64,
    pub window: f64,
    /// Focal time; defaults to half the window.
    #[serde(default)]
    pub focal_time: Option<f64>,
    #[serde(default = "default_cfl_safety")]
    pub cfl_safety: f64,
    #[serde(default)]
    pub allow_cfl_override: bool,
    #[serde(default = "default_blowup")]
    pub blowup_threshold: f64,
}

fn default_cfl_safety() -> f64 {
    0.8
}

fn default_blowup() -> f64 {
    1e-3
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProcessingConfig {
    pub lowpass_cutoff: f64,
    pub filter_order: usize,
    /// Half width of the window around the focal time used for the
    /// symmetry and delayed-focus comparisons.
    pub focal_half_width: f64,
    /// Taps `[a, tau]` for the delayed experiment.
    pub delay_taps: Vec<[f64; 2]>,
    pub delay_mode: DelayMode,
}

impl Default for ProcessingConfig {
    fn default() -> Self {
        ProcessingConfig {
            lowpass_cutoff: 4e6,
            filter_order: 4,
            focal_half_width: 10e-6,
            delay_taps: vec![[1.0, 0.0], [1.0, 1e-6]],
            delay_mode: DelayMode::Nearest,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    /// Write a field snapshot every this many steps; 0 disables.
    pub snapshot_stride: usize,
    /// Extra snapshot times in s, rounded to the nearest step.
    pub snapshot_times: Vec<f64>,
    pub contact_audit: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub laminate: LaminateSpec,
    pub mesh: MeshOptions,
    pub crack: CrackSpec,
    #[serde(default)]
    pub materials: MaterialTable64,
    pub transmitter: TransmitterConfig,
    pub receivers: Vec<ReceiverConfig>,
    pub chirp: ChirpSpec<f64>,
    pub time: TimeConfig,
    #[serde(default)]
    pub contact: ContactParams<f64>,
    #[serde(default)]
    pub absorbing: AbsorbingParams<f64>,
    #[serde(default)]
    pub processing: ProcessingConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

/// The part of the configuration that determines the physics, hashed to
/// bind records to the run that produced them.
#[derive(Serialize)]
struct Physics<'a> {
    laminate: &'a LaminateSpec,
    mesh: &'a MeshOptions,
    crack: &'a CrackSpec,
    materials: &'a MaterialTable64,
    transmitter: &'a TransmitterConfig,
    receivers: &'a [ReceiverConfig],
    chirp: &'a ChirpSpec<f64>,
    time: &'a TimeConfig,
    contact: &'a ContactParams<f64>,
    absorbing: &'a AbsorbingParams<f64>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn focal_time(&self) -> f64 {
        self.time.focal_time.unwrap_or(self.time.window / 2.0)
    }

    /// Number of steps covering the window.
    pub fn n_steps(&self) -> usize {
        (self.time.window / self.time.dt).round() as usize
    }

    pub fn receiver_index(&self, name: &str) -> Result<usize, HarnessError> {
        self.receivers
            .iter()
            .position(|r| r.name == name)
            .ok_or_else(|| HarnessError::Config(format!("unknown receiver {name:?}")))
    }

    pub fn delay_schedule(&self) -> Result<DelaySchedule<f64>, HarnessError> {
        let mut s = DelaySchedule::new(self.processing.delay_taps.iter().map(|t| (t[0], t[1])).collect())
            .map_err(|e| HarnessError::Config(e.to_string()))?;
        s.mode = self.processing.delay_mode;
        Ok(s)
    }

    /// SHA-256 over the physics sections, hex encoded.
    pub fn hash(&self) -> String {
        let physics = Physics {
            laminate: &self.laminate,
            mesh: &self.mesh,
            crack: &self.crack,
            materials: &self.materials,
            transmitter: &self.transmitter,
            receivers: &self.receivers,
            chirp: &self.chirp,
            time: &self.time,
            contact: &self.contact,
            absorbing: &self.absorbing,
        };
        let text = toml::to_string(&physics).expect("config serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    /// Copy with the crack switched off.
    pub fn undamaged(&self) -> Self {
        ExperimentConfig { crack: CrackSpec { enabled: false, ..self.crack }, ..self.clone() }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: String| Err(HarnessError::Config(m));
        self.laminate.validate().map_err(|e| HarnessError::Config(e.to_string()))?;
        self.chirp.validate().map_err(|e| HarnessError::Config(e.to_string()))?;
        self.contact.validate().map_err(|e| HarnessError::Config(e.to_string()))?;
        let (w, h) = (self.laminate.domain_width, self.laminate.domain_height);

        let t = &self.time;
        if !(t.dt > 0.0 && t.window > 0.0) {
            return bad("time.dt and time.window must be positive".into());
        }
        let steps = t.window / t.dt;
        if (steps - steps.round()).abs() > 1e-6 * steps.max(1.0) {
            return bad(format!("window {} is not a whole number of steps of {}", t.window, t.dt));
        }
        if 2.0 * t.dt * self.chirp.f1 >= 1.0 {
            return bad("time.dt does not resolve the chirp's top frequency".into());
        }
        let focal = self.focal_time();
        if !(focal > 0.0 && focal < t.window) {
            return bad("focal time must lie inside the window".into());
        }
        if self.chirp.duration > t.window {
            return bad("chirp is longer than the window".into());
        }
        if !(t.cfl_safety > 0.0 && t.cfl_safety <= 1.0) {
            return bad("time.cfl_safety must be in (0, 1]".into());
        }

        let tx = &self.transmitter;
        if tx.side.is_absorbing() {
            return bad(format!("transmitter must sit on a free side, not {}", tx.side.tag()));
        }
        let extent = if tx.side.is_horizontal() { w } else { h };
        if !(tx.span > 0.0 && tx.center - tx.span / 2.0 >= 0.0 && tx.center + tx.span / 2.0 <= extent) {
            return bad("transmitter patch must lie on its side".into());
        }
        if !(tx.angle_deg > 0.0 && tx.angle_deg < 180.0) {
            return bad("transmitter angle must point into the domain".into());
        }
        if !(tx.max_pressure > 0.0) || self.chirp.amplitude.abs() > tx.max_pressure {
            return bad("chirp amplitude exceeds transmitter.max_pressure".into());
        }

        if self.receivers.is_empty() {
            return bad("at least one receiver is required".into());
        }
        for (i, r) in self.receivers.iter().enumerate() {
            if !(r.x >= 0.0 && r.x <= w && r.y >= 0.0 && r.y <= h) {
                return bad(format!("receiver {} lies outside the domain", r.name));
            }
            if self.receivers[..i].iter().any(|o| o.name == r.name) {
                return bad(format!("duplicate receiver name {}", r.name));
            }
        }

        let c = &self.crack;
        if c.enabled && !(c.x_start >= 0.0 && c.x_end <= w && c.x_start < c.x_end && c.y_position > 0.0 && c.y_position < h)
        {
            return bad("crack must lie strictly inside the domain".into());
        }

        let p = &self.processing;
        if !(p.lowpass_cutoff > 0.0 && p.lowpass_cutoff < 0.5 / t.dt) {
            return bad("processing.lowpass_cutoff must be below Nyquist".into());
        }
        if p.filter_order == 0 {
            return bad("processing.filter_order must be at least 1".into());
        }
        if !(p.focal_half_width > 0.0 && focal - p.focal_half_width >= 0.0 && focal + p.focal_half_width <= t.window) {
            return bad("processing.focal_half_width must fit inside the window".into());
        }
        self.delay_schedule()?;
        for &ts in &self.output.snapshot_times {
            if !(ts >= 0.0 && ts <= t.window) {
                return bad(format!("snapshot time {ts} is outside the window"));
            }
        }
        Ok(())
    }
}
