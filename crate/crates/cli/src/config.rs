//! TOML scenario files.
//!
//! ```toml
//! kind = "coh_sq"            # coh_sq | two_sq | xpm | bs_interf
//! stokes_index = "S2"
//! analysis_time = 0.0
//! tau_r = 1.0
//! optimize_at = 0.0          # optional
//! reference_intensity = 1.0  # optional
//!
//! [grid]
//! start = 0.0
//! stop = 5.0
//! count = 512
//!
//! [pulse1]
//! n0 = 1.0
//! gamma = 0.0                # or: beta = ..., length = ...
//! ```
//!
//! `pulse3` and `[beam_splitter]` (`r`, `t`) are read for `bs_interf` only.

use std::path::Path;

use kerr_stokes::{
    BeamSplitter, Envelope, EnvelopeKind, Issue, OmegaGrid, PulseSpec, RelaxationKernel, ScenarioConfig,
    ScenarioKind, StokesIndex,
};
use serde::{Deserialize, Deserializer};

use crate::error::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub kind: ScenarioKind,
    #[serde(default = "default_index", deserialize_with = "stokes_index")]
    pub stokes_index: StokesIndex,
    #[serde(default)]
    pub analysis_time: f64,
    #[serde(default = "one")]
    pub tau_r: f64,
    pub optimize_at: Option<f64>,
    pub reference_intensity: Option<f64>,
    #[serde(default)]
    pub grid: GridSection,
    pub pulse1: Option<PulseSection>,
    pub pulse2: Option<PulseSection>,
    pub pulse3: Option<PulseSection>,
    pub beam_splitter: Option<SplitterSection>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(default)]
    pub start: f64,
    #[serde(default = "default_stop")]
    pub stop: f64,
    #[serde(default = "default_count")]
    pub count: usize,
}

impl Default for GridSection {
    fn default() -> Self {
        let g = OmegaGrid::default();
        Self { start: g.start, stop: g.stop, count: g.count }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseSection {
    pub n0: f64,
    pub gamma: Option<f64>,
    /// Kerr coefficient; folded with `length` into `gamma = beta·length`.
    pub beta: Option<f64>,
    pub length: Option<f64>,
    #[serde(default)]
    pub gamma_x: f64,
    #[serde(default)]
    pub phi_lin: f64,
    #[serde(default = "default_envelope")]
    pub envelope: EnvelopeKind,
    #[serde(default = "one")]
    pub tau_p: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitterSection {
    pub r: f64,
    pub t: f64,
}

fn one() -> f64 {
    1.0
}

fn default_stop() -> f64 {
    OmegaGrid::default().stop
}

fn default_count() -> usize {
    OmegaGrid::default().count
}

fn default_index() -> StokesIndex {
    StokesIndex::S2
}

fn default_envelope() -> EnvelopeKind {
    EnvelopeKind::Constant
}

fn stokes_index<'de, D: Deserializer<'de>>(d: D) -> Result<StokesIndex, D::Error> {
    let s = String::deserialize(d)?;
    s.parse().map_err(serde::de::Error::custom)
}

impl PulseSection {
    fn to_pulse(self, path: &str, issues: &mut Vec<Issue>) -> PulseSpec {
        let gamma = match (self.gamma, self.beta, self.length) {
            (Some(g), None, None) => g,
            (None, Some(b), Some(l)) => b * l,
            (None, None, None) => 0.0,
            (Some(_), _, _) => {
                issues.push(issue(format!("{path}.gamma"), "give either gamma or beta and length, not both"));
                0.0
            }
            (None, _, _) => {
                issues.push(issue(format!("{path}.beta"), "beta and length must be given together"));
                0.0
            }
        };
        PulseSpec {
            n0: self.n0,
            envelope: Envelope { kind: self.envelope, tau_p: self.tau_p },
            gamma,
            gamma_x: self.gamma_x,
            phi_lin: self.phi_lin,
        }
    }
}

fn issue(path: impl Into<String>, message: impl Into<String>) -> Issue {
    Issue { path: path.into(), message: message.into() }
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    /// Builds the scenario configuration. Only structural problems are
    /// reported here; model invariants are left to `ScenarioConfig::validate`.
    pub fn into_scenario(self) -> Result<ScenarioConfig, Vec<Issue>> {
        let mut issues = Vec::new();
        let relax = match RelaxationKernel::new(self.tau_r) {
            Ok(r) => r,
            Err(e) => {
                issues.push(issue("tau_r", e.to_string()));
                RelaxationKernel::default()
            }
        };
        let sections = [self.pulse1, self.pulse2, self.pulse3];
        let present = sections.iter().rposition(Option::is_some).map_or(0, |i| i + 1);
        let mut pulses = Vec::with_capacity(present);
        for (i, section) in sections.iter().take(present).enumerate() {
            let path = format!("pulse{}", i + 1);
            match section {
                Some(s) => pulses.push(s.to_pulse(&path, &mut issues)),
                None => issues.push(issue(path, "missing pulse section")),
            }
        }
        if !issues.is_empty() {
            return Err(issues);
        }
        Ok(ScenarioConfig {
            kind: self.kind,
            pulses,
            beam_splitter: self.beam_splitter.map(|b| BeamSplitter { r: b.r, t: b.t }),
            relax,
            analysis_time: self.analysis_time,
            stokes_index: self.stokes_index,
            grid: OmegaGrid::new(self.grid.start, self.grid.stop, self.grid.count),
            optimize_at: self.optimize_at,
            reference_intensity: self.reference_intensity,
        })
    }
}

pub fn load(path: &Path) -> Result<ScenarioConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    ConfigFile::parse(&text)?.into_scenario().map_err(CliError::Validation)
}

/// Parses `start:stop:count`.
pub fn parse_grid(s: &str) -> Result<OmegaGrid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected start:stop:count, got `{s}`"));
    }
    let start = parts[0].trim().parse::<f64>().map_err(|e| format!("grid start: {e}"))?;
    let stop = parts[1].trim().parse::<f64>().map_err(|e| format!("grid stop: {e}"))?;
    let count = parts[2].trim().parse::<usize>().map_err(|e| format!("grid count: {e}"))?;
    Ok(OmegaGrid::new(start, stop, count))
}
