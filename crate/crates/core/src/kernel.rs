//! Relaxation response of the electronic Kerr nonlinearity.
//!
//! The causal response is `H(t) = exp(-t/τ_r)/τ_r` for `t ≥ 0`. Correlators
//! only see its even extension `h(τ) = H(|τ|)` and the derived kernel
//! `g(τ) = (1 + |τ|/τ_r)·h(τ)`, whose Fourier transforms are Lorentzian in the
//! reduced frequency `Ω = ω·τ_r`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelaxationKernel {
    tau_r: f64,
}

impl RelaxationKernel {
    pub fn new(tau_r: f64) -> Result<Self> {
        if !(tau_r.is_finite() && tau_r > 0.0) {
            return Err(Error::InvalidRelaxationTime(tau_r));
        }
        Ok(Self { tau_r })
    }

    pub fn tau_r(&self) -> f64 {
        self.tau_r
    }

    /// `h(τ) = exp(-|τ|/τ_r)/τ_r`.
    pub fn eval_h(&self, tau: f64) -> f64 {
        (-tau.abs() / self.tau_r).exp() / self.tau_r
    }

    /// `g(τ) = (1 + |τ|/τ_r)·h(τ)`.
    pub fn eval_g(&self, tau: f64) -> f64 {
        (1.0 + tau.abs() / self.tau_r) * self.eval_h(tau)
    }

    /// Angular frequency corresponding to the reduced frequency `Ω`.
    pub fn angular_frequency(&self, omega: f64) -> f64 {
        omega / self.tau_r
    }
}

impl Default for RelaxationKernel {
    fn default() -> Self {
        Self { tau_r: 1.0 }
    }
}

/// `L(Ω) = 1/(1 + Ω²)`.
pub fn lorentzian(omega: f64) -> f64 {
    1.0 / (1.0 + omega * omega)
}

/// `∫ h(τ) e^{iωτ} dτ = 2L(Ω)`.
pub fn fourier_h_closed(omega: f64) -> f64 {
    2.0 * lorentzian(omega)
}

/// `∫ g(τ) e^{iωτ} dτ = 4L²(Ω)`.
pub fn fourier_g_closed(omega: f64) -> f64 {
    let l = lorentzian(omega);
    4.0 * l * l
}
