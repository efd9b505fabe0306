//! Scenario assembly: validated configurations and dispatch to the Stokes
//! averages, kernel builders and phase optimizers.
//!
//! The parametric frequency conversion that accompanies XPM in an
//! anisotropic medium is assumed to be suppressed by a large phase mismatch.
//! Nothing here checks that regime.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::RelaxationKernel;
use crate::optimize::{self, PhaseOptimum};
use crate::pulse::{PulseSpec, GAMMA_VALIDITY_LIMIT};
use crate::spectra::{self, CorrelationKernel, SpectrumSeries, StokesIndex};
use crate::stokes::{self, StokesSummary};

/// Lossless splitter with the symmetric `i√R` reflection phase:
/// `B₁ = i√R·A₁ + √T·A₂`, `B₂ = √T·A₁ + i√R·A₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamSplitter {
    pub r: f64,
    pub t: f64,
}

impl BeamSplitter {
    pub const SUM_TOLERANCE: f64 = 1e-12;

    pub fn new(r: f64, t: f64) -> Result<Self> {
        let bs = Self { r, t };
        bs.check()?;
        Ok(bs)
    }

    pub fn balanced() -> Self {
        Self { r: 0.5, t: 0.5 }
    }

    pub fn check(&self) -> Result<()> {
        let unit = |x: f64| x.is_finite() && (0.0..=1.0).contains(&x);
        if unit(self.r) && unit(self.t) && (self.r + self.t - 1.0).abs() <= Self::SUM_TOLERANCE {
            Ok(())
        } else {
            Err(Error::InvalidBeamSplitter { r: self.r, t: self.t })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    /// Coherent pulse 1 overlapped with SPM-squeezed pulse 2.
    CohSq,
    /// Two SPM-squeezed pulses.
    TwoSq,
    /// Two pulses overlapping inside an anisotropic medium (SPM + XPM).
    Xpm,
    /// Squeezed pulses 1 and 2 on a beam splitter; port 1 overlapped with
    /// the coherent probe pulse 3.
    BsInterf,
}

impl ScenarioKind {
    pub fn pulse_count(self) -> usize {
        match self {
            Self::BsInterf => 3,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::CohSq => "coh_sq",
            Self::TwoSq => "two_sq",
            Self::Xpm => "xpm",
            Self::BsInterf => "bs_interf",
        }
    }
}

impl std::str::FromStr for ScenarioKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "coh_sq" => Ok(Self::CohSq),
            "two_sq" => Ok(Self::TwoSq),
            "xpm" => Ok(Self::Xpm),
            "bs_interf" => Ok(Self::BsInterf),
            other => Err(format!("unknown scenario kind `{other}`")),
        }
    }
}

/// A concrete pulse arrangement.
///
/// The linear phase difference used as the optimization knob is
/// `φ₂,lin − φ₁,lin` for the two-pulse overlaps, `φ₁,lin − φ₂,lin` for the
/// beam-splitter `S0`/`S1` spectra, and `φ₂,lin − φ₃,lin` for the
/// beam-splitter `S2`/`S3` spectra, where `φ₁,lin = φ₂,lin + π/2` is held
/// fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Arrangement {
    CohSq { p1: PulseSpec, p2: PulseSpec },
    TwoSq { p1: PulseSpec, p2: PulseSpec },
    Xpm { p1: PulseSpec, p2: PulseSpec },
    BsInterf { p1: PulseSpec, p2: PulseSpec, p3: PulseSpec, bs: BeamSplitter },
}

impl Arrangement {
    pub fn kind(&self) -> ScenarioKind {
        match self {
            Self::CohSq { .. } => ScenarioKind::CohSq,
            Self::TwoSq { .. } => ScenarioKind::TwoSq,
            Self::Xpm { .. } => ScenarioKind::Xpm,
            Self::BsInterf { .. } => ScenarioKind::BsInterf,
        }
    }

    pub fn pulses(&self) -> Vec<PulseSpec> {
        match *self {
            Self::CohSq { p1, p2 } | Self::TwoSq { p1, p2 } | Self::Xpm { p1, p2 } => vec![p1, p2],
            Self::BsInterf { p1, p2, p3, .. } => vec![p1, p2, p3],
        }
    }

    pub fn averages(&self, t: f64) -> Result<StokesSummary> {
        match self {
            Self::CohSq { p1, p2 } => stokes::averages_coh_sq(p1, p2, t),
            Self::TwoSq { p1, p2 } => Ok(stokes::averages_two_sq(p1, p2, t)),
            Self::Xpm { p1, p2 } => Ok(stokes::averages_xpm(p1, p2, t)),
            Self::BsInterf { p1, p2, p3, bs } => stokes::averages_bs(p1, p2, p3, bs, t),
        }
    }

    pub fn kernel(&self, t: f64, index: StokesIndex) -> Result<CorrelationKernel> {
        match self {
            Self::CohSq { p1, p2 } => spectra::kernel_coh_sq(p1, p2, t, index),
            Self::TwoSq { p1, p2 } => Ok(spectra::kernel_two_sq(p1, p2, t, index)),
            Self::Xpm { p1, p2 } => Ok(spectra::kernel_xpm(p1, p2, t, index)),
            Self::BsInterf { p1, p2, p3, bs } => spectra::kernel_bs(p1, p2, p3, bs, t, index),
        }
    }

    /// Normalization of `S*`: `n̄₁(t)` for the two-pulse overlaps,
    /// `n̄₁(t) + n̄₂(t)` for beam-splitter `S0`/`S1`, `n̄₃(t)` for
    /// beam-splitter `S2`/`S3`.
    pub fn reference_intensity(&self, t: f64, index: StokesIndex) -> f64 {
        match self {
            Self::CohSq { p1, .. } | Self::TwoSq { p1, .. } | Self::Xpm { p1, .. } => p1.mean_photons(t),
            Self::BsInterf { p1, p2, p3, .. } => match index {
                StokesIndex::S0 | StokesIndex::S1 => p1.mean_photons(t) + p2.mean_photons(t),
                StokesIndex::S2 | StokesIndex::S3 => p3.mean_photons(t),
            },
        }
    }

    /// Current value of the linear phase difference used as the
    /// optimization knob for `index`.
    pub fn phase_difference(&self, index: StokesIndex) -> f64 {
        match self {
            Self::CohSq { p1, p2 } | Self::TwoSq { p1, p2 } | Self::Xpm { p1, p2 } => p2.phi_lin - p1.phi_lin,
            Self::BsInterf { p1, p2, p3, .. } => match index {
                StokesIndex::S0 | StokesIndex::S1 => p1.phi_lin - p2.phi_lin,
                StokesIndex::S2 | StokesIndex::S3 => p2.phi_lin - p3.phi_lin,
            },
        }
    }

    /// Copy of the arrangement with the knob for `index` set to `dphi`.
    pub fn with_phase_difference(&self, index: StokesIndex, dphi: f64) -> Self {
        let mut out = *self;
        match &mut out {
            Self::CohSq { p1, p2 } | Self::TwoSq { p1, p2 } | Self::Xpm { p1, p2 } => {
                p2.phi_lin = p1.phi_lin + dphi;
            }
            Self::BsInterf { p1, p2, p3, .. } => match index {
                StokesIndex::S0 | StokesIndex::S1 => p1.phi_lin = p2.phi_lin + dphi,
                StokesIndex::S2 | StokesIndex::S3 => {
                    p2.phi_lin = p3.phi_lin + dphi;
                    p1.phi_lin = p2.phi_lin + FRAC_PI_2;
                }
            },
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OmegaGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl OmegaGrid {
    pub fn new(start: f64, stop: f64, count: usize) -> Self {
        Self { start, stop, count }
    }

    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| if i + 1 == self.count { self.stop } else { self.start + step * i as f64 })
            .collect()
    }

    pub fn step(&self) -> f64 {
        (self.stop - self.start) / (self.count.max(2) - 1) as f64
    }
}

impl Default for OmegaGrid {
    fn default() -> Self {
        Self { start: 0.0, stop: 5.0, count: 512 }
    }
}

/// A validation error or warning, with the offending field path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Issue {
    pub path: String,
    pub message: String,
}

impl Issue {
    fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self { path: path.into(), message: message.into() }
    }
}

impl std::fmt::Display for Issue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub kind: ScenarioKind,
    pub pulses: Vec<PulseSpec>,
    pub beam_splitter: Option<BeamSplitter>,
    pub relax: RelaxationKernel,
    pub analysis_time: f64,
    pub stokes_index: StokesIndex,
    pub grid: OmegaGrid,
    /// Reduced frequency at which to optimize the linear phase difference.
    pub optimize_at: Option<f64>,
    /// Overrides the default normalization of `S*`.
    pub reference_intensity: Option<f64>,
}

impl ScenarioConfig {
    pub fn new(arrangement: Arrangement, stokes_index: StokesIndex) -> Self {
        let beam_splitter = match arrangement {
            Arrangement::BsInterf { bs, .. } => Some(bs),
            _ => None,
        };
        Self {
            kind: arrangement.kind(),
            pulses: arrangement.pulses(),
            beam_splitter,
            relax: RelaxationKernel::default(),
            analysis_time: 0.0,
            stokes_index,
            grid: OmegaGrid::default(),
            optimize_at: None,
            reference_intensity: None,
        }
    }

    pub fn optimized_at(mut self, omega0: f64) -> Self {
        self.optimize_at = Some(omega0);
        self
    }

    pub fn with_grid(mut self, grid: OmegaGrid) -> Self {
        self.grid = grid;
        self
    }

    pub fn validate(&self) -> std::result::Result<Validated, Vec<Issue>> {
        validate(self)
    }

    /// Validates and runs in one step.
    pub fn run(&self) -> Result<ScenarioResult> {
        let validated = self.validate().map_err(Error::Validation)?;
        run(&validated)
    }
}

/// A configuration that passed [`validate`], with its warnings.
#[derive(Debug, Clone, PartialEq)]
pub struct Validated {
    pub config: ScenarioConfig,
    pub arrangement: Arrangement,
    pub warnings: Vec<Issue>,
}

fn relative_mismatch(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

pub const CONSTRAINT_TOLERANCE: f64 = 1e-9;

pub fn validate(config: &ScenarioConfig) -> std::result::Result<Validated, Vec<Issue>> {
    let mut errors = Vec::new();
    let mut warnings = Vec::new();
    let kind = config.kind;

    if config.pulses.len() != kind.pulse_count() {
        errors.push(Issue::new(
            "pulses",
            format!("scenario {} needs {} pulses, got {}", kind.name(), kind.pulse_count(), config.pulses.len()),
        ));
        return Err(errors);
    }
    for (i, p) in config.pulses.iter().enumerate() {
        let path = format!("pulse{}", i + 1);
        if let Err(e) = p.check() {
            errors.push(Issue::new(path.clone(), e.to_string()));
        }
        for (field, value) in p.validity_violations() {
            warnings.push(Issue::new(
                format!("{path}.{field}"),
                format!("approximation gamma << 1 violated ({field} = {value} > {GAMMA_VALIDITY_LIMIT})"),
            ));
        }
        if kind != ScenarioKind::Xpm && p.gamma_x != 0.0 {
            errors.push(Issue::new(format!("{path}.gamma_x"), "XPM coupling is only meaningful in the xpm scenario"));
        }
    }
    match kind {
        ScenarioKind::CohSq if config.pulses[0].gamma != 0.0 => {
            errors.push(Issue::new("pulse1.gamma", "scenario requires coherent pulse 1 (gamma = 0)"));
        }
        ScenarioKind::BsInterf if config.pulses[2].gamma != 0.0 => {
            errors.push(Issue::new("pulse3.gamma", "scenario requires coherent probe pulse 3 (gamma = 0)"));
        }
        ScenarioKind::Xpm => {
            let (g1, g2) = (config.pulses[0].gamma_x, config.pulses[1].gamma_x);
            if g1 != g2 {
                errors.push(Issue::new(
                    "pulse2.gamma_x",
                    format!("pulses share one medium, gamma_x must match ({g1} vs {g2})"),
                ));
            } else if g1 == 0.0 {
                warnings.push(Issue::new("pulse1.gamma_x", "XPM coupling is zero; the xpm scenario reduces to two_sq"));
            }
        }
        _ => {}
    }

    match (kind, config.beam_splitter) {
        (ScenarioKind::BsInterf, None) => errors.push(Issue::new("beam_splitter", "bs_interf requires a beam splitter")),
        (ScenarioKind::BsInterf, Some(bs)) => {
            if bs.check().is_err() {
                errors.push(Issue::new(
                    "beam_splitter",
                    format!("r+t≠1 or out of [0, 1] (r = {}, t = {})", bs.r, bs.t),
                ));
            }
        }
        (_, Some(_)) => errors.push(Issue::new("beam_splitter", "only the bs_interf scenario uses a beam splitter")),
        (_, None) => {}
    }

    let g = config.grid;
    if !(g.start.is_finite() && g.start >= 0.0) {
        errors.push(Issue::new("grid.start", "must be finite and >= 0"));
    }
    if g.count < 2 {
        errors.push(Issue::new("grid.count", "must be >= 2"));
    }
    if !(g.stop.is_finite() && g.stop > g.start) {
        errors.push(Issue::new("grid.stop", "must be finite and greater than grid.start"));
    }
    if !config.analysis_time.is_finite() {
        errors.push(Issue::new("analysis_time", "must be finite"));
    }
    if let Some(w0) = config.optimize_at {
        if !(w0.is_finite() && w0 >= 0.0) {
            errors.push(Issue::new("optimize_at", "must be finite and >= 0"));
        }
    }
    if let Some(r) = config.reference_intensity {
        if !(r.is_finite() && r > 0.0) {
            errors.push(Issue::new("reference_intensity", "must be finite and positive"));
        }
    }
    if !errors.is_empty() {
        return Err(errors);
    }

    let p = &config.pulses;
    let arrangement = match kind {
        ScenarioKind::CohSq => Arrangement::CohSq { p1: p[0], p2: p[1] },
        ScenarioKind::TwoSq => Arrangement::TwoSq { p1: p[0], p2: p[1] },
        ScenarioKind::Xpm => Arrangement::Xpm { p1: p[0], p2: p[1] },
        ScenarioKind::BsInterf => Arrangement::BsInterf {
            p1: p[0],
            p2: p[1],
            p3: p[2],
            bs: config.beam_splitter.expect("checked above"),
        },
    };

    let t = config.analysis_time;
    if config.reference_intensity.is_none() && arrangement.reference_intensity(t, config.stokes_index) <= 0.0 {
        errors.push(Issue::new(
            "reference_intensity",
            "default normalization intensity is zero at the analysis time; set an override",
        ));
    }
    if config.optimize_at.is_some() && kind == ScenarioKind::BsInterf {
        let (n1, n2) = (p[0].mean_photons(t), p[1].mean_photons(t));
        let (phi1, phi2) = (p[0].spm_phase(t), p[1].spm_phase(t));
        match config.stokes_index {
            StokesIndex::S0 | StokesIndex::S1 => {
                let m = relative_mismatch(n1 * phi2, n2 * phi1);
                if m > CONSTRAINT_TOLERANCE {
                    errors.push(Issue::new(
                        "pulse2.gamma",
                        format!("S0/S1 optimization requires n1*phi2 = n2*phi1 (relative mismatch {m:e})"),
                    ));
                } else if m > 0.0 {
                    warnings.push(Issue::new("pulse2.gamma", format!("n1*phi2 = n2*phi1 holds only to {m:e}")));
                }
            }
            StokesIndex::S2 | StokesIndex::S3 => {
                let m = relative_mismatch(phi1, phi2);
                if m > CONSTRAINT_TOLERANCE {
                    errors.push(Issue::new(
                        "pulse2.gamma",
                        format!("S2/S3 optimization requires phi1 = phi2 (relative mismatch {m:e})"),
                    ));
                } else if m > 0.0 {
                    warnings.push(Issue::new("pulse2.gamma", format!("phi1 = phi2 holds only to {m:e}")));
                }
            }
        }
    }
    if !errors.is_empty() {
        return Err(errors);
    }
    Ok(Validated { config: config.clone(), arrangement, warnings })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub kind: ScenarioKind,
    pub stokes_index: StokesIndex,
    pub analysis_time: f64,
    pub tau_r: f64,
    /// Arrangement actually evaluated (after applying the optimal phase).
    pub arrangement: Arrangement,
    pub summary: StokesSummary,
    pub kernel: CorrelationKernel,
    pub spectrum: SpectrumSeries,
    pub optimum: Option<PhaseOptimum>,
    pub warnings: Vec<Issue>,
}

/// Evaluates a validated configuration. When `optimize_at` is set, the
/// averages and the spectrum are evaluated at the optimal phase difference.
pub fn run(validated: &Validated) -> Result<ScenarioResult> {
    let config = &validated.config;
    let t = config.analysis_time;
    let index = config.stokes_index;
    let mut arrangement = validated.arrangement;

    let optimum = match config.optimize_at {
        Some(omega0) => {
            let opt = optimize::optimal_phase(&arrangement, index, t, omega0)?;
            if let Some(dphi) = opt.delta_phi_opt {
                arrangement = arrangement.with_phase_difference(index, dphi);
            }
            Some(opt)
        }
        None => None,
    };

    let summary = arrangement.averages(t)?;
    let kernel = arrangement.kernel(t, index)?;
    let reference = config.reference_intensity.unwrap_or_else(|| arrangement.reference_intensity(t, index));
    let spectrum = spectra::spectrum(&kernel, &config.grid.points(), reference)?;

    Ok(ScenarioResult {
        kind: config.kind,
        stokes_index: index,
        analysis_time: t,
        tau_r: config.relax.tau_r(),
        arrangement,
        summary,
        kernel,
        spectrum,
        optimum,
        warnings: validated.warnings.clone(),
    })
}
