//! Correlation kernels `δ(τ) + A·h(τ) + B·g(τ)` and their spectra.
//!
//! Each builder returns the `(A, B)` pair of one Stokes operator for one
//! pulse arrangement at a fixed analysis time. Mapping through the Fourier
//! pairs of [`crate::kernel`] gives `S(Ω) = 1 + 2L(Ω)·A + 4L²(Ω)·B`.
//!
//! `S3` kernels are the `S2` kernels with the phase of the second field of
//! the Stokes pair retarded by π/2 (pulse 2 for the two-pulse overlaps, the
//! probe pulse for the beam-splitter arrangement). In the two-pulse
//! overlaps `S0` and `S1` commute with the Kerr evolution, so their kernel
//! is the bare shot-noise delta.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::lorentzian;
use crate::pulse::{PhaseMode, PulseSpec};
use crate::scenario::BeamSplitter;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StokesIndex {
    S0,
    S1,
    S2,
    S3,
}

impl StokesIndex {
    pub const ALL: [StokesIndex; 4] = [Self::S0, Self::S1, Self::S2, Self::S3];
}

impl std::fmt::Display for StokesIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Self::S0 => "S0",
            Self::S1 => "S1",
            Self::S2 => "S2",
            Self::S3 => "S3",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for StokesIndex {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "S0" | "0" => Ok(Self::S0),
            "S1" | "1" => Ok(Self::S1),
            "S2" | "2" => Ok(Self::S2),
            "S3" | "3" => Ok(Self::S3),
            other => Err(format!("unknown Stokes index `{other}`")),
        }
    }
}

/// Coefficients of `h(τ)` and `g(τ)` in a Stokes correlation function. The
/// unit delta weight is implicit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationKernel {
    pub a_h: f64,
    pub b_g: f64,
    pub t: f64,
    pub stokes_index: StokesIndex,
}

impl CorrelationKernel {
    pub fn shot_noise(t: f64, stokes_index: StokesIndex) -> Self {
        Self { a_h: 0.0, b_g: 0.0, t, stokes_index }
    }

    /// `S(Ω) = 1 + 2L(Ω)·A + 4L²(Ω)·B`.
    pub fn spectrum_at(&self, omega: f64) -> f64 {
        let l = lorentzian(omega);
        1.0 + 2.0 * l * self.a_h + 4.0 * l * l * self.b_g
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSeries {
    pub omega_grid: Vec<f64>,
    pub values: Vec<f64>,
    /// `(S − 1)/reference_intensity`.
    pub normalized: Vec<f64>,
    pub reference_intensity: f64,
}

impl SpectrumSeries {
    pub fn len(&self) -> usize {
        self.omega_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega_grid.is_empty()
    }

    /// Index of the smallest spectral value (first one on ties).
    pub fn argmin(&self) -> usize {
        let mut best = 0;
        for (i, v) in self.values.iter().enumerate() {
            if *v < self.values[best] {
                best = i;
            }
        }
        best
    }

    pub fn min_normalized(&self) -> f64 {
        self.normalized.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Evaluates the spectrum of `kernel` on an ascending grid of reduced
/// frequencies.
pub fn spectrum(kernel: &CorrelationKernel, grid: &[f64], reference_intensity: f64) -> Result<SpectrumSeries> {
    if grid.is_empty() || grid.iter().any(|w| !w.is_finite()) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid);
    }
    if !(reference_intensity.is_finite() && reference_intensity > 0.0) {
        return Err(Error::InvalidReference(reference_intensity));
    }
    let values: Vec<f64> = grid.iter().map(|&w| kernel.spectrum_at(w)).collect();
    let normalized = values.iter().map(|s| (s - 1.0) / reference_intensity).collect();
    Ok(SpectrumSeries { omega_grid: grid.to_vec(), values, normalized, reference_intensity })
}

fn retarded(p: &PulseSpec) -> PulseSpec {
    p.with_phase(p.phi_lin - FRAC_PI_2)
}

/// `S2` kernel, coherent pulse 1 with squeezed pulse 2:
/// `A = n̄₁φ₂·sin 2θ`, `B = n̄₁φ₂²·sin²θ`, `θ = φ₁,lin − Φ₂`.
pub fn kernel_coh_sq_s2(p1: &PulseSpec, p2: &PulseSpec, t: f64) -> Result<CorrelationKernel> {
    if p1.gamma != 0.0 {
        return Err(Error::ScenarioContract("scenario requires coherent pulse 1 (gamma = 0)".into()));
    }
    let n1 = p1.mean_photons(t);
    let phi2 = p2.spm_phase(t);
    let theta = p1.phi_lin - p2.total_phase(t, PhaseMode::SpmOnly);
    let s = theta.sin();
    Ok(CorrelationKernel {
        a_h: n1 * phi2 * (2.0 * theta).sin(),
        b_g: n1 * (phi2 * phi2) * (s * s),
        t,
        stokes_index: StokesIndex::S2,
    })
}

fn two_pulse_kernel(
    p1: &PulseSpec,
    p2: &PulseSpec,
    t: f64,
    mode: PhaseMode,
) -> CorrelationKernel {
    let (n1, n2) = (p1.mean_photons(t), p2.mean_photons(t));
    let (phi1, phi2) = (p1.spm_phase(t), p2.spm_phase(t));
    let (x1, x2) = match mode {
        PhaseMode::SpmOnly => (0.0, 0.0),
        PhaseMode::WithXpm => (p1.xpm_phase(t), p2.xpm_phase(t)),
    };
    let theta = p1.total_phase(t, mode) - p2.total_phase(t, mode);
    let s = theta.sin();
    CorrelationKernel {
        a_h: (n1 * phi2 - n2 * phi1) * (2.0 * theta).sin(),
        b_g: (n1 * (phi2 * phi2 + x2 * x2) + n2 * (phi1 * phi1 + x1 * x1)) * (s * s),
        t,
        stokes_index: StokesIndex::S2,
    }
}

/// `S2` kernel, two squeezed pulses:
/// `A = [n̄₁φ₂ − n̄₂φ₁]·sin 2θ`, `B = [n̄₁φ₂² + n̄₂φ₁²]·sin²θ`, `θ = Φ₁ − Φ₂`.
pub fn kernel_two_sq_s2(p1: &PulseSpec, p2: &PulseSpec, t: f64) -> CorrelationKernel {
    two_pulse_kernel(p1, p2, t, PhaseMode::SpmOnly)
}

/// `S2` kernel with XPM: as [`kernel_two_sq_s2`] with `Φ̃` angles and
/// `B = {n̄₁[φ₂² + φ̃₂²] + n̄₂[φ₁² + φ̃₁²]}·sin²θ`.
pub fn kernel_xpm_s2(p1: &PulseSpec, p2: &PulseSpec, t: f64) -> CorrelationKernel {
    two_pulse_kernel(p1, p2, t, PhaseMode::WithXpm)
}

/// `S0` or `S1` kernel at beam-splitter output port 1. The probe pulse does
/// not enter.
pub fn kernel_bs_s01(
    p1: &PulseSpec,
    p2: &PulseSpec,
    bs: &BeamSplitter,
    t: f64,
    which: StokesIndex,
) -> Result<CorrelationKernel> {
    bs.check()?;
    let sign = match which {
        StokesIndex::S0 => 1.0,
        StokesIndex::S1 => -1.0,
        other => {
            return Err(Error::ScenarioContract(format!("kernel_bs_s01 builds S0 or S1, not {other}")))
        }
    };
    let (r, tr) = (bs.r, bs.t);
    let (n1, n2) = (p1.mean_photons(t), p2.mean_photons(t));
    let (phi1, phi2) = (p1.spm_phase(t), p2.spm_phase(t));
    let theta = p1.total_phase(t, PhaseMode::SpmOnly) - p2.total_phase(t, PhaseMode::SpmOnly);
    let c = theta.cos();
    let a_h = -(2.0 * (r * tr).sqrt() * (n1 * n2).sqrt() * (r * phi1 + sign * tr * phi2) * c
        + r * tr * (n1 * phi2 - n2 * phi1) * (2.0 * theta).sin());
    let b_g = r * tr * (n1 * phi2 * phi2 + n2 * phi1 * phi1) * (c * c);
    Ok(CorrelationKernel { a_h, b_g, t, stokes_index: which })
}

/// `S2` kernel at beam-splitter output port 1 overlapped with the probe:
/// `A = n̄₃{Rφ₁ sin 2[Φ₁ − φ₃] − Tφ₂ sin 2[Φ₂ − φ₃]}`,
/// `B = n̄₃{Rφ₁² cos²[Φ₁ − φ₃] + Tφ₂² sin²[Φ₂ − φ₃]}`.
pub fn kernel_bs_s2(
    p1: &PulseSpec,
    p2: &PulseSpec,
    p3: &PulseSpec,
    bs: &BeamSplitter,
    t: f64,
) -> Result<CorrelationKernel> {
    bs.check()?;
    if p3.gamma != 0.0 {
        return Err(Error::ScenarioContract("scenario requires coherent probe pulse 3 (gamma = 0)".into()));
    }
    let n3 = p3.mean_photons(t);
    let (phi1, phi2) = (p1.spm_phase(t), p2.spm_phase(t));
    let th1 = p1.total_phase(t, PhaseMode::SpmOnly) - p3.phi_lin;
    let th2 = p2.total_phase(t, PhaseMode::SpmOnly) - p3.phi_lin;
    let (c1, s2) = (th1.cos(), th2.sin());
    Ok(CorrelationKernel {
        a_h: n3 * (bs.r * phi1 * (2.0 * th1).sin() - bs.t * phi2 * (2.0 * th2).sin()),
        b_g: n3 * (bs.r * phi1 * phi1 * (c1 * c1) + bs.t * phi2 * phi2 * (s2 * s2)),
        t,
        stokes_index: StokesIndex::S2,
    })
}

pub fn kernel_coh_sq(p1: &PulseSpec, p2: &PulseSpec, t: f64, index: StokesIndex) -> Result<CorrelationKernel> {
    match index {
        StokesIndex::S0 | StokesIndex::S1 => {
            if p1.gamma != 0.0 {
                return Err(Error::ScenarioContract("scenario requires coherent pulse 1 (gamma = 0)".into()));
            }
            Ok(CorrelationKernel::shot_noise(t, index))
        }
        StokesIndex::S2 => kernel_coh_sq_s2(p1, p2, t),
        StokesIndex::S3 => Ok(CorrelationKernel {
            stokes_index: StokesIndex::S3,
            ..kernel_coh_sq_s2(p1, &retarded(p2), t)?
        }),
    }
}

pub fn kernel_two_sq(p1: &PulseSpec, p2: &PulseSpec, t: f64, index: StokesIndex) -> CorrelationKernel {
    match index {
        StokesIndex::S0 | StokesIndex::S1 => CorrelationKernel::shot_noise(t, index),
        StokesIndex::S2 => kernel_two_sq_s2(p1, p2, t),
        StokesIndex::S3 => CorrelationKernel {
            stokes_index: StokesIndex::S3,
            ..kernel_two_sq_s2(p1, &retarded(p2), t)
        },
    }
}

pub fn kernel_xpm(p1: &PulseSpec, p2: &PulseSpec, t: f64, index: StokesIndex) -> CorrelationKernel {
    match index {
        StokesIndex::S0 | StokesIndex::S1 => CorrelationKernel::shot_noise(t, index),
        StokesIndex::S2 => kernel_xpm_s2(p1, p2, t),
        StokesIndex::S3 => CorrelationKernel {
            stokes_index: StokesIndex::S3,
            ..kernel_xpm_s2(p1, &retarded(p2), t)
        },
    }
}

pub fn kernel_bs(
    p1: &PulseSpec,
    p2: &PulseSpec,
    p3: &PulseSpec,
    bs: &BeamSplitter,
    t: f64,
    index: StokesIndex,
) -> Result<CorrelationKernel> {
    match index {
        StokesIndex::S0 | StokesIndex::S1 => {
            if p3.gamma != 0.0 {
                return Err(Error::ScenarioContract(
                    "scenario requires coherent probe pulse 3 (gamma = 0)".into(),
                ));
            }
            kernel_bs_s01(p1, p2, bs, t, index)
        }
        StokesIndex::S2 => kernel_bs_s2(p1, p2, p3, bs, t),
        StokesIndex::S3 => Ok(CorrelationKernel {
            stokes_index: StokesIndex::S3,
            ..kernel_bs_s2(p1, p2, &retarded(p3), bs, t)?
        }),
    }
}
