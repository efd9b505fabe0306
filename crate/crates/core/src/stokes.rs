//! Mean values of the Stokes operators for each pulse arrangement.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pulse::{PhaseMode, PulseSpec};
use crate::scenario::BeamSplitter;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StokesSummary {
    pub s0: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    /// Length of the mean Poincaré vector, `sqrt(s1² + s2² + s3²)`.
    pub poincare_radius: f64,
    /// `poincare_radius / s0`; `None` when `s0 = 0`.
    pub degree_of_polarization: Option<f64>,
}

impl StokesSummary {
    pub fn from_components(s0: f64, s1: f64, s2: f64, s3: f64) -> Self {
        let poincare_radius = (s1 * s1 + s2 * s2 + s3 * s3).sqrt();
        let degree_of_polarization = (s0 > 0.0).then(|| poincare_radius / s0);
        Self { s0, s1, s2, s3, poincare_radius, degree_of_polarization }
    }

    pub fn components(&self) -> [f64; 4] {
        [self.s0, self.s1, self.s2, self.s3]
    }
}

/// Two-pulse overlap with interference term `2√(n̄₁n̄₂)·e^{-damping}` at the
/// given relative phase.
fn overlap(n1: f64, n2: f64, damping: f64, angle: f64) -> StokesSummary {
    let amp = 2.0 * (n1 * n2).sqrt() * (-damping).exp();
    StokesSummary::from_components(n1 + n2, n1 - n2, amp * angle.cos(), amp * angle.sin())
}

/// Coherent pulse 1 overlapped with SPM-squeezed pulse 2.
pub fn averages_coh_sq(p1: &PulseSpec, p2: &PulseSpec, t: f64) -> Result<StokesSummary> {
    if p1.gamma != 0.0 {
        return Err(Error::ScenarioContract("scenario requires coherent pulse 1 (gamma = 0)".into()));
    }
    let angle = p2.total_phase(t, PhaseMode::SpmOnly) - p1.phi_lin;
    Ok(overlap(p1.mean_photons(t), p2.mean_photons(t), p2.spm_damping(t), angle))
}

/// Two independently SPM-squeezed pulses.
pub fn averages_two_sq(p1: &PulseSpec, p2: &PulseSpec, t: f64) -> StokesSummary {
    let angle = p2.total_phase(t, PhaseMode::SpmOnly) - p1.total_phase(t, PhaseMode::SpmOnly);
    overlap(
        p1.mean_photons(t),
        p2.mean_photons(t),
        p1.spm_damping(t) + p2.spm_damping(t),
        angle,
    )
}

/// Two pulses overlapping inside an anisotropic medium (SPM and XPM).
pub fn averages_xpm(p1: &PulseSpec, p2: &PulseSpec, t: f64) -> StokesSummary {
    let angle = p2.total_phase(t, PhaseMode::WithXpm) - p1.total_phase(t, PhaseMode::WithXpm);
    overlap(
        p1.mean_photons(t),
        p2.mean_photons(t),
        p1.total_damping(t) + p2.total_damping(t),
        angle,
    )
}

fn bs_preconditions(p3: &PulseSpec, bs: &BeamSplitter) -> Result<()> {
    bs.check()?;
    if p3.gamma != 0.0 {
        return Err(Error::ScenarioContract("scenario requires coherent probe pulse 3 (gamma = 0)".into()));
    }
    Ok(())
}

/// Squeezed pulses 1 and 2 mixed on a beam splitter; output port 1 is
/// overlapped with the coherent probe pulse 3.
///
/// `S3` is the `S2` expression with the probe phase retarded by π/2.
pub fn averages_bs(
    p1: &PulseSpec,
    p2: &PulseSpec,
    p3: &PulseSpec,
    bs: &BeamSplitter,
    t: f64,
) -> Result<StokesSummary> {
    bs_preconditions(p3, bs)?;
    let port1 = bs_port_intensity(p1, p2, bs, 1, t)?;
    let n3 = p3.mean_photons(t);
    let s2 = bs_s2_average(p1, p2, p3.phi_lin, bs, t, n3);
    let s3 = bs_s2_average(p1, p2, p3.phi_lin - std::f64::consts::FRAC_PI_2, bs, t, n3);
    Ok(StokesSummary::from_components(port1 + n3, port1 - n3, s2, s3))
}

fn bs_s2_average(p1: &PulseSpec, p2: &PulseSpec, phi3: f64, bs: &BeamSplitter, t: f64, n3: f64) -> f64 {
    let (n1, n2) = (p1.mean_photons(t), p2.mean_photons(t));
    let big_phi1 = p1.total_phase(t, PhaseMode::SpmOnly);
    let big_phi2 = p2.total_phase(t, PhaseMode::SpmOnly);
    2.0 * (bs.t * n2 * n3).sqrt() * (-p2.spm_damping(t)).exp() * (phi3 - big_phi2).cos()
        + 2.0 * (bs.r * n1 * n3).sqrt() * (-p1.spm_damping(t)).exp() * (phi3 - big_phi1).sin()
}

/// Mean photon number leaving the given beam-splitter output port (1 or 2).
///
/// Port 1 carries `i√R·A₁ + √T·A₂`, port 2 carries `√T·A₁ + i√R·A₂`.
pub fn bs_port_intensity(p1: &PulseSpec, p2: &PulseSpec, bs: &BeamSplitter, port: u8, t: f64) -> Result<f64> {
    bs.check()?;
    let (n1, n2) = (p1.mean_photons(t), p2.mean_photons(t));
    let delta = p2.total_phase(t, PhaseMode::SpmOnly) - p1.total_phase(t, PhaseMode::SpmOnly);
    let interference = 2.0
        * (bs.r * bs.t).sqrt()
        * (n1 * n2).sqrt()
        * (-p1.spm_damping(t) - p2.spm_damping(t)).exp()
        * delta.sin();
    match port {
        1 => Ok(bs.r * n1 + bs.t * n2 + interference),
        2 => Ok(bs.t * n1 + bs.r * n2 - interference),
        _ => Err(Error::ScenarioContract(format!("beam splitter has ports 1 and 2, got {port}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    const EPS: f64 = 1e-14;

    #[test]
    fn coh_sq_examples() {
        let p1 = PulseSpec::coherent(1.0);
        let s = averages_coh_sq(&p1, &PulseSpec::coherent(1.0), 0.0).unwrap();
        assert_abs_diff_eq!(s.s2, 2.0, epsilon = EPS);
        assert_abs_diff_eq!(s.s3, 0.0, epsilon = EPS);

        let s = averages_coh_sq(&p1, &PulseSpec::coherent(1.0).with_phase(FRAC_PI_2), 0.0).unwrap();
        assert_abs_diff_eq!(s.s2, 0.0, epsilon = EPS);
        assert_abs_diff_eq!(s.s3, 2.0, epsilon = EPS);

        let s = averages_coh_sq(&p1, &PulseSpec::new(1.0, 0.05), 0.0).unwrap();
        assert_abs_diff_eq!(s.s2, 2.0 * (-0.00125f64).exp() * 0.1f64.cos(), epsilon = EPS);
        assert_abs_diff_eq!(s.s0, 2.0, epsilon = EPS);
        assert_abs_diff_eq!(s.s1, 0.0, epsilon = EPS);
    }

    #[test]
    fn coh_sq_rejects_squeezed_first_pulse() {
        let err = averages_coh_sq(&PulseSpec::new(1.0, 0.2), &PulseSpec::new(1.0, 0.01), 0.0);
        assert!(matches!(err, Err(Error::ScenarioContract(_))));
    }

    #[test]
    fn two_sq_examples() {
        let s = averages_two_sq(&PulseSpec::coherent(4.0), &PulseSpec::coherent(1.0).with_phase(0.3), 0.0);
        assert_abs_diff_eq!(s.s2, 4.0 * 0.3f64.cos(), epsilon = EPS);

        let p = PulseSpec::new(1.0, 0.05);
        let s = averages_two_sq(&p, &p, 0.0);
        assert_abs_diff_eq!(s.s2, 2.0 * (-0.0025f64).exp(), epsilon = EPS);
        assert_abs_diff_eq!(s.s3, 0.0, epsilon = EPS);
    }

    #[test]
    fn xpm_examples() {
        let p1 = PulseSpec::new(1.0, 0.05).with_gamma_x(0.025);
        let p2 = p1.with_phase(FRAC_PI_4);
        let s = averages_xpm(&p1, &p2, 0.0);
        let damping: f64 = 2.0 * (0.00125 + 0.0003125);
        assert_abs_diff_eq!(s.s2, 2.0 * (-damping).exp() * FRAC_PI_4.cos(), epsilon = EPS);

        let s = averages_xpm(&p1, &p1, 0.0);
        assert_abs_diff_eq!(s.s3, 0.0, epsilon = EPS);

        let q1 = PulseSpec::new(2.0, 0.03).with_phase(0.2);
        let q2 = PulseSpec::new(0.7, 0.07).with_phase(1.1);
        assert_eq!(averages_xpm(&q1, &q2, 0.0), averages_two_sq(&q1, &q2, 0.0));
    }

    #[test]
    fn bs_examples() {
        let half = BeamSplitter::new(0.5, 0.5).unwrap();
        let p3 = PulseSpec::coherent(0.7);
        let s = averages_bs(&PulseSpec::coherent(1.0), &PulseSpec::coherent(3.0), &p3, &half, 0.0).unwrap();
        assert_abs_diff_eq!(s.s0, 0.5 + 1.5 + 0.7, epsilon = EPS);
        assert_abs_diff_eq!(s.s1, 0.5 + 1.5 - 0.7, epsilon = EPS);

        let full = BeamSplitter::new(1.0, 0.0).unwrap();
        let p2 = PulseSpec::new(5.0, 0.01).with_phase(0.4);
        let s = averages_bs(&PulseSpec::coherent(2.0), &p2, &p3, &full, 0.0).unwrap();
        assert_abs_diff_eq!(s.s0, 2.0 + 0.7, epsilon = EPS);

        let p2 = PulseSpec::coherent(1.0).with_phase(FRAC_PI_2);
        let s = averages_bs(&PulseSpec::coherent(1.0), &p2, &p3, &half, 0.0).unwrap();
        assert_abs_diff_eq!(s.s0, 2.0 + 0.7, epsilon = EPS);
        let p2 = PulseSpec::coherent(1.0).with_phase(-FRAC_PI_2);
        let s = averages_bs(&PulseSpec::coherent(1.0), &p2, &p3, &half, 0.0).unwrap();
        assert_abs_diff_eq!(s.s0, 0.7, epsilon = EPS);
    }

    #[test]
    fn bs_rejects_contract_violations() {
        let bad = BeamSplitter { r: 0.6, t: 0.5 };
        let p = PulseSpec::coherent(1.0);
        assert!(averages_bs(&p, &p, &p, &bad, 0.0).is_err());
        let half = BeamSplitter::new(0.5, 0.5).unwrap();
        assert!(averages_bs(&p, &p, &PulseSpec::new(1.0, 0.01), &half, 0.0).is_err());
        assert!(bs_port_intensity(&p, &p, &half, 3, 0.0).is_err());
    }

    /// Mean amplitude `⟨A⟩ = √n̄·e^{iΦ − μ}` of an SPM-squeezed pulse.
    fn mean_amplitude(p: &PulseSpec) -> Complex64 {
        Complex64::from_polar(p.mean_photons(0.0).sqrt(), p.total_phase(0.0, PhaseMode::SpmOnly))
            * (-p.spm_damping(0.0)).exp()
    }

    /// `S2 = 2Re⟨b†a⟩`, `S3 = −2Im⟨b†a⟩` for independent modes `a`, `b`.
    fn s2_s3_from_amplitudes(a: Complex64, b: Complex64) -> (f64, f64) {
        let z = b.conj() * a;
        (2.0 * z.re, -2.0 * z.im)
    }

    fn pulse() -> impl Strategy<Value = PulseSpec> {
        (0.0f64..5.0, 0.0f64..0.1, -PI..PI).prop_map(|(n, g, ph)| PulseSpec::new(n, g).with_phase(ph))
    }

    fn splitter() -> impl Strategy<Value = BeamSplitter> {
        (0.0f64..=1.0).prop_map(|r| BeamSplitter::new(r, 1.0 - r).unwrap())
    }

    proptest! {
        #[test]
        fn phase_duality(p1 in pulse(), p2 in pulse(), gx in 0.0f64..0.1) {
            // ⟨S3⟩(Δφ) = ⟨S2⟩(Δφ − π/2), Δφ carried by pulse 2.
            let shifted = p2.with_phase(p2.phi_lin - FRAC_PI_2);
            let c = PulseSpec { gamma: 0.0, ..p1 };
            let a = averages_coh_sq(&c, &p2, 0.0).unwrap();
            let b = averages_coh_sq(&c, &shifted, 0.0).unwrap();
            prop_assert!((a.s3 - b.s2).abs() < 1e-12);
            let a = averages_two_sq(&p1, &p2, 0.0);
            let b = averages_two_sq(&p1, &shifted, 0.0);
            prop_assert!((a.s3 - b.s2).abs() < 1e-12);
            let (x1, x2, xs) = (p1.with_gamma_x(gx), p2.with_gamma_x(gx), shifted.with_gamma_x(gx));
            let a = averages_xpm(&x1, &x2, 0.0);
            let b = averages_xpm(&x1, &xs, 0.0);
            prop_assert!((a.s3 - b.s2).abs() < 1e-12);
        }

        #[test]
        fn pythagorean_identity(p1 in pulse(), p2 in pulse()) {
            let s = averages_two_sq(&p1, &p2, 0.0);
            let expected = 4.0 * p1.n0 * p2.n0 * (-2.0 * (p1.spm_damping(0.0) + p2.spm_damping(0.0))).exp();
            prop_assert!((s.s2 * s.s2 + s.s3 * s.s3 - expected).abs() < 1e-12 * (1.0 + expected));
        }

        #[test]
        fn degree_of_polarization_bounded(p1 in pulse(), p2 in pulse(), p3 in pulse(), bs in splitter()) {
            let p3 = PulseSpec { gamma: 0.0, ..p3 };
            let tol = 1e-12;
            for s in [
                averages_two_sq(&p1, &p2, 0.0),
                averages_xpm(&p1.with_gamma_x(0.05), &p2.with_gamma_x(0.05), 0.0),
                averages_bs(&p1, &p2, &p3, &bs, 0.0).unwrap(),
            ] {
                if let Some(dop) = s.degree_of_polarization {
                    prop_assert!(dop <= 1.0 + tol, "dop = {}", dop);
                    prop_assert!(dop >= 0.0);
                }
            }
        }

        #[test]
        fn coherent_limit_fully_polarized(n1 in 0.01f64..5.0, n2 in 0.01f64..5.0, ph in -PI..PI) {
            let s = averages_two_sq(&PulseSpec::coherent(n1), &PulseSpec::coherent(n2).with_phase(ph), 0.0);
            prop_assert!((s.degree_of_polarization.unwrap() - 1.0).abs() < 1e-12);
            prop_assert!((s.s2 - 2.0 * (n1 * n2).sqrt() * ph.cos()).abs() < 1e-12);
        }

        #[test]
        fn bs_conserves_energy(n1 in 0.0f64..5.0, n2 in 0.0f64..5.0, ph1 in -PI..PI, ph2 in -PI..PI, bs in splitter()) {
            let p1 = PulseSpec::coherent(n1).with_phase(ph1);
            let p2 = PulseSpec::coherent(n2).with_phase(ph2);
            let total = bs_port_intensity(&p1, &p2, &bs, 1, 0.0).unwrap()
                + bs_port_intensity(&p1, &p2, &bs, 2, 0.0).unwrap();
            prop_assert!((total - n1 - n2).abs() < 1e-12 * (1.0 + n1 + n2));
            let p3 = PulseSpec::coherent(1.3);
            let s = averages_bs(&p1, &p2, &p3, &bs, 0.0).unwrap();
            let port2 = bs_port_intensity(&p1, &p2, &bs, 2, 0.0).unwrap();
            prop_assert!((s.s0 + port2 - (n1 + n2 + 1.3)).abs() < 1e-12 * (2.3 + n1 + n2));
        }

        #[test]
        fn bs_matches_amplitude_route(p1 in pulse(), p2 in pulse(), n3 in 0.0f64..5.0, ph3 in -PI..PI, bs in splitter()) {
            // Independent route through the splitter matrix acting on mean amplitudes.
            let (a1, a2) = (mean_amplitude(&p1), mean_amplitude(&p2));
            let b1 = Complex64::i() * bs.r.sqrt() * a1 + bs.t.sqrt() * a2;
            let a3 = Complex64::from_polar(n3.sqrt(), ph3);
            let (s2, s3) = s2_s3_from_amplitudes(b1, a3);
            let s = averages_bs(&p1, &p2, &PulseSpec::coherent(n3).with_phase(ph3), &bs, 0.0).unwrap();
            prop_assert!((s.s2 - s2).abs() < 1e-12);
            prop_assert!((s.s3 - s3).abs() < 1e-12);
        }

        #[test]
        fn two_sq_matches_amplitude_route(p1 in pulse(), p2 in pulse()) {
            let (s2, s3) = s2_s3_from_amplitudes(mean_amplitude(&p1), mean_amplitude(&p2));
            let s = averages_two_sq(&p1, &p2, 0.0);
            prop_assert!((s.s2 - s2).abs() < 1e-12);
            prop_assert!((s.s3 - s3).abs() < 1e-12);
        }
    }
}
