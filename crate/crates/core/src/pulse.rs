//! Pulse and medium parameters.
//!
//! A pulse is described at the medium entrance by its peak mean photon
//! number `n0`, its envelope `r(t)` and a constant linear phase. The
//! nonlinear coefficients fold the medium length in: `γ = β·z` for SPM and
//! `γ̃ = β̃·z` for XPM, so `2γ` is the nonlinear phase shift per photon.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Above this value the small-γ correlators are outside their range of
/// validity.
pub const GAMMA_VALIDITY_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvelopeKind {
    Constant,
    Gaussian,
    Sech,
}

/// Normalized field envelope with `r(0) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub kind: EnvelopeKind,
    /// Pulse duration; unused for [`EnvelopeKind::Constant`].
    pub tau_p: f64,
}

impl Envelope {
    pub const fn constant() -> Self {
        Self { kind: EnvelopeKind::Constant, tau_p: 1.0 }
    }

    pub fn gaussian(tau_p: f64) -> Result<Self> {
        Self::new(EnvelopeKind::Gaussian, tau_p)
    }

    pub fn sech(tau_p: f64) -> Result<Self> {
        Self::new(EnvelopeKind::Sech, tau_p)
    }

    pub fn new(kind: EnvelopeKind, tau_p: f64) -> Result<Self> {
        if kind != EnvelopeKind::Constant && !(tau_p.is_finite() && tau_p > 0.0) {
            return Err(Error::InvalidPulse {
                field: "tau_p",
                reason: format!("pulse duration must be finite and positive, got {tau_p}"),
            });
        }
        Ok(Self { kind, tau_p })
    }

    /// `r(t)`: `exp(-t²/2τ_p²)` for gaussian, `sech(t/τ_p)` for sech.
    pub fn eval(&self, t: f64) -> f64 {
        match self.kind {
            EnvelopeKind::Constant => 1.0,
            EnvelopeKind::Gaussian => {
                let x = t / self.tau_p;
                (-0.5 * x * x).exp()
            }
            EnvelopeKind::Sech => 1.0 / (t / self.tau_p).cosh(),
        }
    }
}

impl Default for Envelope {
    fn default() -> Self {
        Self::constant()
    }
}

/// Which nonlinear phases enter the total phase of a pulse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseMode {
    /// `Φ(t) = φ(t) + φ_lin`
    SpmOnly,
    /// `Φ̃(t) = φ(t) − φ̃(t) + φ_lin`
    WithXpm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseSpec {
    /// Peak mean photon number `n̄(0)`.
    pub n0: f64,
    pub envelope: Envelope,
    /// SPM coefficient `γ`.
    pub gamma: f64,
    /// XPM coupling `γ̃`.
    pub gamma_x: f64,
    /// Linear phase, radians.
    pub phi_lin: f64,
}

impl PulseSpec {
    pub fn new(n0: f64, gamma: f64) -> Self {
        Self { n0, envelope: Envelope::constant(), gamma, gamma_x: 0.0, phi_lin: 0.0 }
    }

    pub fn coherent(n0: f64) -> Self {
        Self::new(n0, 0.0)
    }

    /// Pulse whose peak SPM phase is `phi0 = 2γ·n0`.
    pub fn with_peak_spm_phase(n0: f64, phi0: f64) -> Self {
        let gamma = if n0 > 0.0 { phi0 / (2.0 * n0) } else { 0.0 };
        Self::new(n0, gamma)
    }

    pub fn with_envelope(mut self, envelope: Envelope) -> Self {
        self.envelope = envelope;
        self
    }

    pub fn with_gamma_x(mut self, gamma_x: f64) -> Self {
        self.gamma_x = gamma_x;
        self
    }

    pub fn with_phase(mut self, phi_lin: f64) -> Self {
        self.phi_lin = phi_lin;
        self
    }

    pub fn check(&self) -> Result<()> {
        let nonneg = |field: &'static str, v: f64| {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidPulse {
                    field,
                    reason: format!("must be finite and nonnegative, got {v}"),
                })
            }
        };
        nonneg("n0", self.n0)?;
        nonneg("gamma", self.gamma)?;
        nonneg("gamma_x", self.gamma_x)?;
        if !self.phi_lin.is_finite() {
            return Err(Error::InvalidPulse { field: "phi_lin", reason: "must be finite".into() });
        }
        Envelope::new(self.envelope.kind, self.envelope.tau_p).map(|_| ())
    }

    pub fn is_coherent(&self) -> bool {
        self.gamma == 0.0 && self.gamma_x == 0.0
    }

    /// `n̄(t) = n0·r²(t)`.
    pub fn mean_photons(&self, t: f64) -> f64 {
        let r = self.envelope.eval(t);
        self.n0 * r * r
    }

    /// `φ(t) = 2γ·n̄(t)`.
    pub fn spm_phase(&self, t: f64) -> f64 {
        2.0 * self.gamma * self.mean_photons(t)
    }

    /// `μ(t) = γ²·n̄(t)/2`.
    pub fn spm_damping(&self, t: f64) -> f64 {
        0.5 * self.gamma * self.gamma * self.mean_photons(t)
    }

    /// `φ̃(t) = 2γ̃·n̄(t)`.
    pub fn xpm_phase(&self, t: f64) -> f64 {
        2.0 * self.gamma_x * self.mean_photons(t)
    }

    /// `μ̃(t) = γ̃²·n̄(t)/2`.
    pub fn xpm_damping(&self, t: f64) -> f64 {
        0.5 * self.gamma_x * self.gamma_x * self.mean_photons(t)
    }

    /// `Δ(t) = μ(t) + μ̃(t)`, the damping exponent with XPM present.
    pub fn total_damping(&self, t: f64) -> f64 {
        self.spm_damping(t) + self.xpm_damping(t)
    }

    pub fn total_phase(&self, t: f64, mode: PhaseMode) -> f64 {
        match mode {
            PhaseMode::SpmOnly => self.spm_phase(t) + self.phi_lin,
            PhaseMode::WithXpm => self.spm_phase(t) - self.xpm_phase(t) + self.phi_lin,
        }
    }

    /// Names of the coefficients that exceed [`GAMMA_VALIDITY_LIMIT`].
    pub fn validity_violations(&self) -> Vec<(&'static str, f64)> {
        let mut out = Vec::new();
        if self.gamma > GAMMA_VALIDITY_LIMIT {
            out.push(("gamma", self.gamma));
        }
        if self.gamma_x > GAMMA_VALIDITY_LIMIT {
            out.push(("gamma_x", self.gamma_x));
        }
        out
    }
}
