//! Optimization of the linear phase difference at a fixed reduced
//! frequency `Ω₀`.
//!
//! Every optimizer reports both the closed-form optimum and a numeric scan
//! of `S(Ω₀)` over `Δφ ∈ [0, 2π)`. The scan is authoritative; disagreements
//! are reported as [`OptimumFlag`]s and never corrected.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::lorentzian;
use crate::pulse::PulseSpec;
use crate::scenario::{Arrangement, BeamSplitter, CONSTRAINT_TOLERANCE};
use crate::spectra::StokesIndex;

pub const MIN_RESOLUTION: usize = 720;
/// Absolute tolerance on `S` used for every closed-form/numeric comparison.
pub const AGREEMENT_TOLERANCE: f64 = 1e-9;
const GOLDEN_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseScan {
    pub delta_phi_min: f64,
    pub s_min: f64,
    /// Refined local minima `(Δφ, S)` in `[0, 2π)`, sorted by phase.
    pub local_minima: Vec<(f64, f64)>,
    pub evaluations: usize,
}

/// Global minimum of a `2π`-periodic objective: coarse scan on
/// `resolution` points (raised to at least 720), then golden-section
/// refinement of every coarse local minimum.
pub fn scan_phase<F: Fn(f64) -> f64>(objective: F, resolution: usize) -> PhaseScan {
    let n = resolution.max(MIN_RESOLUTION);
    let step = TAU / n as f64;
    let values: Vec<f64> = (0..n).map(|i| objective(step * i as f64)).collect();
    let mut evaluations = n;

    let mut candidates: Vec<usize> = (0..n)
        .filter(|&i| {
            let prev = values[(i + n - 1) % n];
            let next = values[(i + 1) % n];
            values[i] < prev && values[i] <= next
        })
        .collect();
    if candidates.is_empty() {
        let best = (0..n).fold(0, |b, i| if values[i] < values[b] { i } else { b });
        candidates.push(best);
    }
    candidates.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    candidates.truncate(16);

    let mut local_minima = Vec::with_capacity(candidates.len());
    for i in candidates {
        let centre = step * i as f64;
        let (x, fx, evals) = golden_section(&objective, centre - step, centre + step, values[i]);
        evaluations += evals;
        local_minima.push((x.rem_euclid(TAU), fx));
    }
    local_minima.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (delta_phi_min, s_min) = local_minima
        .iter()
        .copied()
        .fold((f64::NAN, f64::INFINITY), |best, m| if m.1 < best.1 { m } else { best });

    PhaseScan { delta_phi_min, s_min, local_minima, evaluations }
}

fn golden_section<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, seed_value: f64) -> (f64, f64, usize) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut evals = 2;
    for _ in 0..200 {
        if (fc - fd).abs() < GOLDEN_TOLERANCE && (b - a) < 1e-6 {
            break;
        }
        if b - a <= 4.0 * f64::EPSILON * (a.abs() + 1.0) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        evals += 1;
    }
    let (x, fx) = if fc < fd { (c, fc) } else { (d, fd) };
    // The coarse point may already sit on a plateau lower than the refined
    // bracket interior.
    if seed_value < fx {
        ((a + b) / 2.0, seed_value.min(fx), evals)
    } else {
        (x, fx, evals)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "flag", rename_all = "snake_case")]
pub enum OptimumFlag {
    /// `S(Ω₀)` does not depend on `Δφ`; the optimal phase is undefined.
    Degenerate,
    /// The closed-form phase is outside the domain of its inverse function.
    InfeasibleClosedForm { argument: f64 },
    /// `S(Ω₀)` at the closed-form phase exceeds the scanned minimum.
    ClosedPhaseNotMinimal { excess: f64 },
    /// The closed-form minimum value differs from the scanned minimum
    /// (`difference = closed − numeric`).
    ClosedValueMismatch { difference: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseOptimum {
    pub omega0: f64,
    /// Closed-form phase when it exists, else the scanned one; `None` when
    /// degenerate.
    pub delta_phi_opt: Option<f64>,
    pub delta_phi_closed: Option<f64>,
    pub delta_phi_numeric: f64,
    pub s_min_closed: Option<f64>,
    pub s_at_closed_phase: Option<f64>,
    pub s_min_numeric: f64,
    /// `|s_min_closed − s_min_numeric|`.
    pub agreement: Option<f64>,
    pub local_minima: Vec<(f64, f64)>,
    pub flags: Vec<OptimumFlag>,
}

impl PhaseOptimum {
    pub fn is_degenerate(&self) -> bool {
        self.flags.contains(&OptimumFlag::Degenerate)
    }

    /// `s_min_numeric ≤ s_min_closed + tolerance`.
    pub fn authority_holds(&self) -> bool {
        self.s_min_closed.is_none_or(|c| self.s_min_numeric <= c + AGREEMENT_TOLERANCE)
    }

    /// Best value of `S(Ω₀)` available: the scan minimum.
    pub fn s_min(&self) -> f64 {
        self.s_min_numeric
    }
}

enum Closed {
    Degenerate,
    Formula { phase: f64, value: f64 },
    Infeasible { argument: f64, value: f64 },
}

fn assemble<F: Fn(f64) -> f64>(omega0: f64, closed: Closed, objective: F) -> PhaseOptimum {
    let scan = scan_phase(&objective, MIN_RESOLUTION);
    let mut flags = Vec::new();
    let (delta_phi_opt, delta_phi_closed, s_min_closed, s_at_closed_phase) = match closed {
        Closed::Degenerate => {
            flags.push(OptimumFlag::Degenerate);
            (None, None, Some(1.0), None)
        }
        Closed::Formula { phase, value } => {
            let at = objective(phase);
            if at - scan.s_min > AGREEMENT_TOLERANCE {
                flags.push(OptimumFlag::ClosedPhaseNotMinimal { excess: at - scan.s_min });
            }
            (Some(phase), Some(phase), Some(value), Some(at))
        }
        Closed::Infeasible { argument, value } => {
            flags.push(OptimumFlag::InfeasibleClosedForm { argument });
            (Some(scan.delta_phi_min), None, Some(value), None)
        }
    };
    if let Some(value) = s_min_closed {
        let difference = value - scan.s_min;
        if difference.abs() > AGREEMENT_TOLERANCE {
            flags.push(OptimumFlag::ClosedValueMismatch { difference });
        }
    }
    PhaseOptimum {
        omega0,
        delta_phi_opt,
        delta_phi_closed,
        delta_phi_numeric: scan.delta_phi_min,
        s_min_closed,
        s_at_closed_phase,
        s_min_numeric: scan.s_min,
        agreement: s_min_closed.map(|c| (c - scan.s_min).abs()),
        local_minima: scan.local_minima,
        flags,
    }
}

fn check_omega0(omega0: f64) -> Result<()> {
    if omega0.is_finite() && omega0 >= 0.0 {
        Ok(())
    } else {
        Err(Error::ScenarioContract(format!("optimization frequency must be finite and >= 0, got {omega0}")))
    }
}

/// Closed form shared by the two-pulse overlaps:
/// `S = 1 + 2L·D·sin 2θ + 4L²·Σ·sin²θ`, minimized at
/// `θ = −½·arctan(D/(LΣ))` with `S = 1 + 2L²Σ − 2L·√(D² + L²Σ²)`.
fn two_pulse_closed(d: f64, sigma: f64, l: f64, offset: f64) -> Closed {
    if sigma == 0.0 {
        return Closed::Degenerate;
    }
    Closed::Formula {
        phase: 0.5 * (d / (l * sigma)).atan() + offset,
        value: 1.0 + 2.0 * l * l * sigma - 2.0 * l * (d * d + l * l * sigma * sigma).sqrt(),
    }
}

fn objective(arr: Arrangement, index: StokesIndex, t: f64, omega0: f64) -> impl Fn(f64) -> f64 {
    move |dphi| {
        arr.with_phase_difference(index, dphi)
            .kernel(t, index)
            .map(|k| k.spectrum_at(omega0))
            .unwrap_or(f64::NAN)
    }
}

/// Coherent pulse 1 with squeezed pulse 2, `S2` at `Ω₀`:
/// `Δφ = ½·arctan(1/(Lφ₂)) − φ₂`,
/// `S = 1 + 2n̄₁φ₂²L² − 2n̄₁φ₂L·√(1 + φ₂²L²)`.
pub fn optimal_phase_coh_sq(p1: &PulseSpec, p2: &PulseSpec, t: f64, omega0: f64) -> Result<PhaseOptimum> {
    check_omega0(omega0)?;
    if p1.gamma != 0.0 {
        return Err(Error::ScenarioContract("scenario requires coherent pulse 1 (gamma = 0)".into()));
    }
    let l = lorentzian(omega0);
    let n1 = p1.mean_photons(t);
    let phi2 = p2.spm_phase(t);
    let closed = if phi2 == 0.0 || n1 == 0.0 {
        Closed::Degenerate
    } else {
        Closed::Formula {
            phase: 0.5 * (1.0 / (l * phi2)).atan() - phi2,
            value: 1.0 + 2.0 * n1 * phi2 * phi2 * l * l - 2.0 * n1 * phi2 * l * (1.0 + phi2 * phi2 * l * l).sqrt(),
        }
    };
    let arr = Arrangement::CohSq { p1: *p1, p2: *p2 };
    Ok(assemble(omega0, closed, objective(arr, StokesIndex::S2, t, omega0)))
}

/// Two squeezed pulses, `S2` at `Ω₀`:
/// `Δφ = ½·arctan(D/(LΣ)) + φ₁ − φ₂` with `D = n̄₁φ₂ − n̄₂φ₁`,
/// `Σ = n̄₁φ₂² + n̄₂φ₁²`.
pub fn optimal_phase_two_sq(p1: &PulseSpec, p2: &PulseSpec, t: f64, omega0: f64) -> Result<PhaseOptimum> {
    check_omega0(omega0)?;
    let l = lorentzian(omega0);
    let (n1, n2) = (p1.mean_photons(t), p2.mean_photons(t));
    let (phi1, phi2) = (p1.spm_phase(t), p2.spm_phase(t));
    let closed = two_pulse_closed(n1 * phi2 - n2 * phi1, n1 * phi2 * phi2 + n2 * phi1 * phi1, l, phi1 - phi2);
    let arr = Arrangement::TwoSq { p1: *p1, p2: *p2 };
    Ok(assemble(omega0, closed, objective(arr, StokesIndex::S2, t, omega0)))
}

/// Two pulses with SPM and XPM, `S2` at `Ω₀`: as [`optimal_phase_two_sq`]
/// with `Σ̃ = n̄₁(φ₂² + φ̃₂²) + n̄₂(φ₁² + φ̃₁²)` and offset
/// `φ₁ − φ₂ − φ̃₁ + φ̃₂`.
pub fn optimal_phase_xpm(p1: &PulseSpec, p2: &PulseSpec, t: f64, omega0: f64) -> Result<PhaseOptimum> {
    check_omega0(omega0)?;
    let l = lorentzian(omega0);
    let (n1, n2) = (p1.mean_photons(t), p2.mean_photons(t));
    let (phi1, phi2) = (p1.spm_phase(t), p2.spm_phase(t));
    let (x1, x2) = (p1.xpm_phase(t), p2.xpm_phase(t));
    let closed = two_pulse_closed(
        n1 * phi2 - n2 * phi1,
        n1 * (phi2 * phi2 + x2 * x2) + n2 * (phi1 * phi1 + x1 * x1),
        l,
        phi1 - phi2 - x1 + x2,
    );
    let arr = Arrangement::Xpm { p1: *p1, p2: *p2 };
    Ok(assemble(omega0, closed, objective(arr, StokesIndex::S2, t, omega0)))
}

/// Beam-splitter `S0` (`+`) or `S1` (`−`) at `Ω₀`, restricted to
/// `n̄₁φ₂ = n̄₂φ₁`. The knob is `φ₁,lin − φ₂,lin`.
pub fn optimal_phase_bs_s01(
    p1: &PulseSpec,
    p2: &PulseSpec,
    bs: &BeamSplitter,
    t: f64,
    omega0: f64,
    which: StokesIndex,
) -> Result<PhaseOptimum> {
    check_omega0(omega0)?;
    bs.check()?;
    let sign = match which {
        StokesIndex::S0 => 1.0,
        StokesIndex::S1 => -1.0,
        other => return Err(Error::ScenarioContract(format!("optimal_phase_bs_s01 handles S0 or S1, not {other}"))),
    };
    let (n1, n2) = (p1.mean_photons(t), p2.mean_photons(t));
    let (phi1, phi2) = (p1.spm_phase(t), p2.spm_phase(t));
    let (lhs, rhs) = (n1 * phi2, n2 * phi1);
    let mismatch = (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1.0);
    if mismatch > CONSTRAINT_TOLERANCE {
        return Err(Error::Constraint(format!(
            "S0/S1 optimization requires n1*phi2 = n2*phi1 (relative mismatch {mismatch:e})"
        )));
    }
    let (r, tr) = (bs.r, bs.t);
    let l = lorentzian(omega0);
    let closed = if r * tr == 0.0 || n1 * n2 == 0.0 || phi1 == 0.0 {
        Closed::Degenerate
    } else {
        let weighted = r * n1 + sign * tr * n2;
        let value = 1.0 - weighted * weighted / (n1 + n2);
        let argument = weighted / (2.0 * (n1 + n2) * phi1 * l) * (n1 / (r * tr * n2)).sqrt();
        if argument.abs() > 1.0 {
            Closed::Infeasible { argument, value }
        } else {
            Closed::Formula { phase: argument.acos() - phi1 + phi2, value }
        }
    };
    let arr = Arrangement::BsInterf { p1: *p1, p2: *p2, p3: PulseSpec::coherent(0.0), bs: *bs };
    Ok(assemble(omega0, closed, objective(arr, which, t, omega0)))
}

/// Beam-splitter `S2` at `Ω₀` with `φ₁ = φ₂ = φ` and
/// `φ₁,lin − φ₂,lin = π/2`. The knob is `φ₂,lin − φ₃,lin`; the closed phase
/// solves `cos 2[φ + Δφ] = (R − T)φL·sin 2[φ + Δφ]` on the principal branch
/// and the closed minimum is `1 + 2n̄₃φ²L² − 2n̄₃φL·√(1 + (R − T)²φ²L²)`.
pub fn optimal_phase_bs_s2(
    p1: &PulseSpec,
    p2: &PulseSpec,
    p3: &PulseSpec,
    bs: &BeamSplitter,
    t: f64,
    omega0: f64,
) -> Result<PhaseOptimum> {
    check_omega0(omega0)?;
    bs.check()?;
    if p3.gamma != 0.0 {
        return Err(Error::ScenarioContract("scenario requires coherent probe pulse 3 (gamma = 0)".into()));
    }
    let (phi1, phi) = (p1.spm_phase(t), p2.spm_phase(t));
    let mismatch = (phi1 - phi).abs() / phi1.abs().max(phi.abs()).max(1.0);
    if mismatch > CONSTRAINT_TOLERANCE {
        return Err(Error::Constraint(format!(
            "S2/S3 optimization requires phi1 = phi2 (relative mismatch {mismatch:e})"
        )));
    }
    let n3 = p3.mean_photons(t);
    let l = lorentzian(omega0);
    let closed = if n3 == 0.0 || phi == 0.0 {
        Closed::Degenerate
    } else {
        let x = (bs.r - bs.t) * phi * l;
        let phase = if x == 0.0 { FRAC_PI_4 - phi } else { 0.5 * (1.0 / x).atan() - phi };
        Closed::Formula {
            phase,
            value: 1.0 + 2.0 * n3 * phi * phi * l * l - 2.0 * n3 * phi * l * (1.0 + x * x).sqrt(),
        }
    };
    let arr = Arrangement::BsInterf { p1: *p1, p2: *p2, p3: *p3, bs: *bs }
        .with_phase_difference(StokesIndex::S2, 0.0);
    Ok(assemble(omega0, closed, objective(arr, StokesIndex::S2, t, omega0)))
}

fn shift(mut opt: PhaseOptimum, by: f64, arr: Arrangement, index: StokesIndex, t: f64) -> PhaseOptimum {
    let f = objective(arr, index, t, opt.omega0);
    opt.delta_phi_opt = opt.delta_phi_opt.map(|p| p + by);
    opt.delta_phi_closed = opt.delta_phi_closed.map(|p| p + by);
    opt.delta_phi_numeric = (opt.delta_phi_numeric + by).rem_euclid(TAU);
    for m in &mut opt.local_minima {
        m.0 = (m.0 + by).rem_euclid(TAU);
    }
    opt.local_minima.sort_by(|a, b| a.0.total_cmp(&b.0));
    // Re-evaluate on the shifted objective so reported values are its own.
    opt.s_at_closed_phase = opt.delta_phi_closed.map(&f);
    opt
}

/// Optimizes the knob of `arr` for `index` at `omega0`.
///
/// `S3` reuses the `S2` optimum: its kernel is the `S2` kernel with one
/// phase retarded by π/2, so the optimal phase shifts by `+π/2` for the
/// two-pulse overlaps and by `−π/2` for the beam-splitter arrangement. `S0`
/// and `S1` in the two-pulse overlaps are shot noise and return a
/// degenerate optimum.
pub fn optimal_phase(arr: &Arrangement, index: StokesIndex, t: f64, omega0: f64) -> Result<PhaseOptimum> {
    check_omega0(omega0)?;
    match (arr, index) {
        (Arrangement::BsInterf { p1, p2, bs, .. }, StokesIndex::S0 | StokesIndex::S1) => {
            optimal_phase_bs_s01(p1, p2, bs, t, omega0, index)
        }
        (Arrangement::BsInterf { p1, p2, p3, bs }, StokesIndex::S2) => optimal_phase_bs_s2(p1, p2, p3, bs, t, omega0),
        (Arrangement::BsInterf { p1, p2, p3, bs }, StokesIndex::S3) => {
            let s2 = optimal_phase_bs_s2(p1, p2, p3, bs, t, omega0)?;
            Ok(shift(s2, -FRAC_PI_2, *arr, index, t))
        }
        (_, StokesIndex::S0 | StokesIndex::S1) => {
            arr.kernel(t, index)?;
            Ok(assemble(omega0, Closed::Degenerate, objective(*arr, index, t, omega0)))
        }
        (_, StokesIndex::S2) => two_pulse_s2(arr, t, omega0),
        (_, StokesIndex::S3) => {
            let s2 = two_pulse_s2(arr, t, omega0)?;
            Ok(shift(s2, FRAC_PI_2, *arr, index, t))
        }
    }
}

fn two_pulse_s2(arr: &Arrangement, t: f64, omega0: f64) -> Result<PhaseOptimum> {
    match arr {
        Arrangement::CohSq { p1, p2 } => optimal_phase_coh_sq(p1, p2, t, omega0),
        Arrangement::TwoSq { p1, p2 } => optimal_phase_two_sq(p1, p2, t, omega0),
        Arrangement::Xpm { p1, p2 } => optimal_phase_xpm(p1, p2, t, omega0),
        Arrangement::BsInterf { .. } => unreachable!("handled by the caller"),
    }
}

/// Period of `S(Ω₀)` in the knob for the two-pulse overlaps.
pub const TWO_PULSE_PERIOD: f64 = PI;
