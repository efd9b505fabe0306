//! Brute-force references for the analytic results: Wiener-Khintchine
//! quadrature of the correlation kernels and a Monte-Carlo phasor check of
//! the coherent-limit Stokes averages.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::RelaxationKernel;
use crate::pulse::{PhaseMode, PulseSpec};
use crate::spectra::CorrelationKernel;
use crate::stokes::StokesSummary;

/// Largest imaginary part tolerated from the quadrature of an even kernel.
pub const IMAGINARY_LIMIT: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Half-width of the integration window in units of `τ_r`.
    pub truncation: f64,
    /// Composite-Simpson nodes on each half-axis (odd).
    pub points: usize,
    pub tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { truncation: 40.0, points: 8001, tolerance: 1e-6 }
    }
}

impl QuadratureSpec {
    pub fn check(&self) -> Result<()> {
        if self.points < 4001 || self.points.is_multiple_of(2) {
            return Err(Error::InvalidQuadrature(format!("points must be odd and >= 4001, got {}", self.points)));
        }
        if !(self.truncation.is_finite() && self.truncation >= 20.0) {
            return Err(Error::InvalidQuadrature(format!("truncation must be >= 20, got {}", self.truncation)));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::InvalidQuadrature(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        Ok(())
    }

    pub fn doubled(&self) -> Self {
        Self { points: 2 * self.points - 1, ..*self }
    }
}

/// Composite Simpson on `[0, width]` with `points` (odd) nodes.
pub fn simpson<F: Fn(f64) -> f64>(f: F, width: f64, points: usize) -> f64 {
    let intervals = points - 1;
    let h = width / intervals as f64;
    let mut sum = f(0.0) + f(width);
    for k in 1..intervals {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(h * k as f64);
    }
    sum * h / 3.0
}

/// `∫_{−W}^{W} f(τ)·e^{iωτ} dτ`, integrated separately on each half-axis so
/// that a kink at `τ = 0` sits on an endpoint.
pub fn fourier_transform(f: impl Fn(f64) -> f64, angular: f64, half_width: f64, points: usize) -> Complex64 {
    let re = simpson(|u| (f(u) + f(-u)) * (angular * u).cos(), half_width, points);
    let im = simpson(|u| (f(u) - f(-u)) * (angular * u).sin(), half_width, points);
    Complex64::new(re, im)
}

/// `1 + ∫[A·h(τ) + B·g(τ)]·e^{iωτ} dτ` with `ω = Ω/τ_r`. The delta term
/// contributes the `1` analytically.
pub fn wk_numeric(
    kernel: &CorrelationKernel,
    relax: &RelaxationKernel,
    omega: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    wk_numeric_with(kernel, relax, relax, omega, spec)
}

/// As [`wk_numeric`], but integrates the kernel shape of `shape` while
/// converting `Ω` with `nominal`. Used to inject a relaxation-time fault.
pub fn wk_numeric_with(
    kernel: &CorrelationKernel,
    shape: &RelaxationKernel,
    nominal: &RelaxationKernel,
    omega: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    spec.check()?;
    if kernel.a_h == 0.0 && kernel.b_g == 0.0 {
        return Ok(1.0);
    }
    let (a, b) = (kernel.a_h, kernel.b_g);
    let f = |tau: f64| a * shape.eval_h(tau) + b * shape.eval_g(tau);
    let z = fourier_transform(f, nominal.angular_frequency(omega), spec.truncation * nominal.tau_r(), spec.points);
    if z.im.abs() > IMAGINARY_LIMIT {
        return Err(Error::ImaginaryResidual(z.im));
    }
    Ok(1.0 + z.re)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StokesEstimate {
    pub summary: StokesSummary,
    /// Standard errors of `s0..s3`.
    pub std_error: [f64; 4],
    pub n_samples: usize,
    pub seed: u64,
}

/// Monte-Carlo estimate of the Stokes averages for two coherent pulses.
///
/// Each sample draws the two field amplitudes from their Wigner
/// distributions, `β = √n̄·e^{iφ} + (x + iy)/2` with standard normal
/// `x, y`, and evaluates the symmetrically ordered Stokes values
/// (`s0 = |β₁|² + |β₂|² − 1`).
pub fn mc_coherent_phasor(
    n_samples: usize,
    p1: &PulseSpec,
    p2: &PulseSpec,
    t: f64,
    seed: u64,
) -> Result<StokesEstimate> {
    if !p1.is_coherent() || !p2.is_coherent() {
        return Err(Error::NotCoherent);
    }
    if n_samples < 2 {
        return Err(Error::ScenarioContract("Monte-Carlo estimate needs at least 2 samples".into()));
    }
    let mean = |p: &PulseSpec| Complex64::from_polar(p.mean_photons(t).sqrt(), p.total_phase(t, PhaseMode::SpmOnly));
    let (a1, a2) = (mean(p1), mean(p2));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut noise = || {
        let x: f64 = StandardNormal.sample(&mut rng);
        let y: f64 = StandardNormal.sample(&mut rng);
        Complex64::new(x, y) * 0.5
    };

    let mut sum = [0.0f64; 4];
    let mut sum_sq = [0.0f64; 4];
    for _ in 0..n_samples {
        let b1 = a1 + noise();
        let b2 = a2 + noise();
        let cross = b1.conj() * b2;
        let s = [b1.norm_sqr() + b2.norm_sqr() - 1.0, b1.norm_sqr() - b2.norm_sqr(), 2.0 * cross.re, 2.0 * cross.im];
        for k in 0..4 {
            sum[k] += s[k];
            sum_sq[k] += s[k] * s[k];
        }
    }
    let n = n_samples as f64;
    let means = sum.map(|s| s / n);
    let mut std_error = [0.0; 4];
    for k in 0..4 {
        let var = ((sum_sq[k] - n * means[k] * means[k]) / (n - 1.0)).max(0.0);
        std_error[k] = (var / n).sqrt();
    }
    Ok(StokesEstimate {
        summary: StokesSummary::from_components(means[0], means[1], means[2], means[3]),
        std_error,
        n_samples,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::StokesIndex;
    use crate::stokes::averages_two_sq;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn kernel(a: f64, b: f64) -> CorrelationKernel {
        CorrelationKernel { a_h: a, b_g: b, t: 0.0, stokes_index: StokesIndex::S2 }
    }

    #[test]
    fn quadrature_examples() {
        let relax = RelaxationKernel::default();
        let spec = QuadratureSpec::default();
        assert_abs_diff_eq!(wk_numeric(&kernel(1.0, 0.0), &relax, 0.0, &spec).unwrap(), 3.0, epsilon = 1e-6);
        assert_abs_diff_eq!(wk_numeric(&kernel(0.0, 1.0), &relax, 1.0, &spec).unwrap(), 2.0, epsilon = 1e-6);
        assert_eq!(wk_numeric(&kernel(0.0, 0.0), &relax, 2.0, &spec).unwrap(), 1.0);
    }

    #[test]
    fn quadrature_spec_checks() {
        let bad = [
            QuadratureSpec { points: 4000, ..Default::default() },
            QuadratureSpec { points: 2001, ..Default::default() },
            QuadratureSpec { truncation: 10.0, ..Default::default() },
        ];
        for spec in bad {
            assert!(spec.check().is_err());
        }
        assert!(QuadratureSpec::default().doubled().check().is_ok());
    }

    #[test]
    fn relaxation_fault_is_visible() {
        let nominal = RelaxationKernel::default();
        let shape = RelaxationKernel::new(1.1).unwrap();
        let spec = QuadratureSpec::default();
        let k = kernel(1.0, 0.5);
        let good = wk_numeric(&k, &nominal, 1.0, &spec).unwrap();
        let bad = wk_numeric_with(&k, &shape, &nominal, 1.0, &spec).unwrap();
        assert!((good - bad).abs() > 1e-3);
    }

    #[test]
    fn mc_examples() {
        let p1 = PulseSpec::coherent(1.0);
        let est = mc_coherent_phasor(1_000_000, &p1, &PulseSpec::coherent(1.0), 0.0, 7).unwrap();
        assert!((est.summary.s2 - 2.0).abs() <= 3.0 * est.std_error[2]);
        assert_eq!(est.seed, 7);

        let est = mc_coherent_phasor(200_000, &p1, &PulseSpec::coherent(1.0).with_phase(PI / 2.0), 0.0, 8).unwrap();
        assert!((est.summary.s3 - 2.0).abs() <= 4.0 * est.std_error[3]);
        assert!(est.summary.s2.abs() <= 4.0 * est.std_error[2]);

        let est = mc_coherent_phasor(200_000, &PulseSpec::coherent(4.0), &PulseSpec::coherent(1.0).with_phase(PI), 0.0, 9)
            .unwrap();
        assert!((est.summary.s2 + 4.0).abs() <= 4.0 * est.std_error[2]);
    }

    #[test]
    fn mc_rejects_squeezed() {
        let err = mc_coherent_phasor(10, &PulseSpec::new(1.0, 0.01), &PulseSpec::coherent(1.0), 0.0, 1).unwrap_err();
        assert_eq!(err, Error::NotCoherent);
    }

    #[test]
    fn mc_matches_averages() {
        let p1 = PulseSpec::coherent(2.0).with_phase(0.3);
        let p2 = PulseSpec::coherent(0.5).with_phase(1.4);
        let exact = averages_two_sq(&p1, &p2, 0.0).components();
        let est = mc_coherent_phasor(100_000, &p1, &p2, 0.0, 42).unwrap();
        for (k, value) in exact.iter().enumerate() {
            assert!((est.summary.components()[k] - value).abs() <= 4.0 * est.std_error[k], "component {k}");
        }
    }

    #[test]
    fn mc_is_seeded() {
        let p = PulseSpec::coherent(1.0);
        let a = mc_coherent_phasor(1000, &p, &p, 0.0, 3).unwrap();
        let b = mc_coherent_phasor(1000, &p, &p, 0.0, 3).unwrap();
        assert_eq!(a, b);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn quadrature_matches_closed_spectrum(
            a in -5.0f64..5.0, b in 0.0f64..5.0, omega in 0.0f64..5.0, tau_r in 0.1f64..10.0,
        ) {
            let relax = RelaxationKernel::new(tau_r).unwrap();
            let spec = QuadratureSpec::default();
            let k = kernel(a, b);
            let numeric = wk_numeric(&k, &relax, omega, &spec).unwrap();
            prop_assert!((numeric - k.spectrum_at(omega)).abs() < spec.tolerance);
        }
    }

    #[test]
    fn doubling_points_converges() {
        let relax = RelaxationKernel::new(2.0).unwrap();
        let spec = QuadratureSpec::default();
        for omega in [0.0, 0.5, 1.0, 3.0] {
            let k = kernel(1.3, 0.7);
            let coarse = wk_numeric(&k, &relax, omega, &spec).unwrap();
            let fine = wk_numeric(&k, &relax, omega, &spec.doubled()).unwrap();
            assert!((coarse - fine).abs() < spec.tolerance / 10.0);
        }
    }
}
