//! Self-verification suite: numeric oracles against the closed forms.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;

use kerr_stokes::optimize::{self, OptimumFlag, PhaseOptimum};
use kerr_stokes::oracle::{mc_coherent_phasor, wk_numeric_with};
use kerr_stokes::stokes::{averages_two_sq, bs_port_intensity};
use kerr_stokes::{
    fourier_g_closed, fourier_h_closed, lorentzian, Arrangement, BeamSplitter, CorrelationKernel, OmegaGrid,
    PulseSpec, QuadratureSpec, RelaxationKernel, ScenarioConfig, ScenarioResult, StokesIndex,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub const SEED: u64 = 0x6b65_7272;
const RANDOM_CASES: usize = 100;
const CLOSED_TOL: f64 = 1e-9;

/// Deliberate defects used to show that the suite can fail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Fault {
    /// The quadrature integrates kernels with `τ_r` scaled by this factor
    /// while converting frequencies with the nominal `τ_r`.
    TauR(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub observed: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn failed(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    pub fn passed(&self) -> bool {
        self.failed() == 0
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            let _ = write!(out, "{status}  {:<36} observed={:.3e} tolerance={:.1e}", c.name, c.observed, c.tolerance);
            if !c.detail.is_empty() {
                let _ = write!(out, "  {}", c.detail);
            }
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "{} checks, {} passed, {} failed (seed {:#x})",
            self.checks.len(),
            self.checks.len() - self.failed(),
            self.failed(),
            self.seed
        );
        out
    }
}

fn check(name: impl Into<String>, observed: f64, tolerance: f64, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        observed,
        tolerance,
        passed: observed.is_finite() && observed <= tolerance,
        detail: detail.into(),
    }
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    // NaN propagates so that a broken evaluation fails its check.
    values.into_iter().fold(0.0, |m, v| if v.is_nan() || m.is_nan() { f64::NAN } else { m.max(v) })
}

struct Sampler(ChaCha8Rng);

impl Sampler {
    fn u(&mut self, lo: f64, hi: f64) -> f64 {
        self.0.gen_range(lo..hi)
    }

    fn phase(&mut self) -> f64 {
        self.u(-PI, PI)
    }
}

struct Quadrature {
    spec: QuadratureSpec,
    fault: Option<Fault>,
}

impl Quadrature {
    fn eval(&self, a: f64, b: f64, omega: f64, tau_r: f64) -> f64 {
        let nominal = RelaxationKernel::new(tau_r).expect("positive tau_r");
        let shape = match self.fault {
            Some(Fault::TauR(scale)) => RelaxationKernel::new(tau_r * scale).expect("positive tau_r"),
            None => nominal,
        };
        let kernel = CorrelationKernel { a_h: a, b_g: b, t: 0.0, stokes_index: StokesIndex::S2 };
        wk_numeric_with(&kernel, &shape, &nominal, omega, &self.spec).unwrap_or(f64::NAN)
    }
}

fn quadrature_checks(q: &Quadrature, rng: &mut Sampler, out: &mut Vec<Check>) {
    let omegas: Vec<f64> = (0..=20).map(|i| 0.25 * i as f64).collect();
    let tol = q.spec.tolerance;
    for tau_r in [0.5, 1.0, 2.0] {
        let err = max_of(omegas.iter().map(|&w| (q.eval(1.0, 0.0, w, tau_r) - 1.0 - fourier_h_closed(w)).abs()));
        out.push(check(format!("wk_fourier_h[tau_r={tau_r}]"), err, tol, "Omega in 0..5 step 0.25"));
    }
    for tau_r in [0.5, 1.0, 2.0] {
        let err = max_of(omegas.iter().map(|&w| (q.eval(0.0, 1.0, w, tau_r) - 1.0 - fourier_g_closed(w)).abs()));
        out.push(check(format!("wk_fourier_g[tau_r={tau_r}]"), err, tol, "Omega in 0..5 step 0.25"));
    }

    let fine = Quadrature { spec: q.spec.doubled(), fault: q.fault };
    let err = max_of([(1.3, 0.7, 0.0, 1.0), (-2.0, 1.5, 1.0, 0.5), (0.4, 3.0, 3.0, 2.0)].iter().map(
        |&(a, b, w, tr)| (q.eval(a, b, w, tr) - fine.eval(a, b, w, tr)).abs(),
    ));
    out.push(check("wk_convergence_doubling", err, tol / 10.0, "node count doubled"));

    let err = max_of((0..RANDOM_CASES).map(|_| {
        let (a, b, w, tr) = (rng.u(-5.0, 5.0), rng.u(0.0, 5.0), rng.u(0.0, 5.0), rng.u(0.1, 10.0));
        let k = CorrelationKernel { a_h: a, b_g: b, t: 0.0, stokes_index: StokesIndex::S2 };
        (q.eval(a, b, w, tr) - k.spectrum_at(w)).abs()
    }));
    out.push(check("wk_random_sweep", err, tol, format!("{RANDOM_CASES} random (A, B, Omega, tau_r)")));
}

fn coh_sq_minimum_checks(out: &mut Vec<Check>) {
    let p1 = PulseSpec::coherent(1.0);
    let p2 = PulseSpec::with_peak_spm_phase(1.0, 1.0);
    for (omega0, expected) in [(0.0, 3.0 - 2.0 * 2f64.sqrt()), (1.0, 1.5 - 1.25f64.sqrt())] {
        let err = match optimize::optimal_phase_coh_sq(&p1, &p2, 0.0, omega0) {
            Ok(o) => (o.s_min_closed.unwrap_or(f64::NAN) - expected).abs().max((o.s_min_numeric - expected).abs()),
            Err(_) => f64::NAN,
        };
        out.push(check(format!("coh_sq_minimum[omega0={omega0}]"), err, CLOSED_TOL, format!("expected {expected:.12}")));
    }
}

fn flag_counts(optima: &[PhaseOptimum]) -> String {
    let mut counts = [0usize; 4];
    for o in optima {
        for f in &o.flags {
            let i = match f {
                OptimumFlag::Degenerate => 0,
                OptimumFlag::InfeasibleClosedForm { .. } => 1,
                OptimumFlag::ClosedPhaseNotMinimal { .. } => 2,
                OptimumFlag::ClosedValueMismatch { .. } => 3,
            };
            counts[i] += 1;
        }
    }
    format!(
        "flags: degenerate={} infeasible={} closed_phase_not_minimal={} closed_value_mismatch={}",
        counts[0], counts[1], counts[2], counts[3]
    )
}

fn infeasible(o: &PhaseOptimum) -> bool {
    o.flags.iter().any(|f| matches!(f, OptimumFlag::InfeasibleClosedForm { .. }))
}

/// Closed forms against the phase scan on random parameter sets.
fn authority_checks(rng: &mut Sampler, out: &mut Vec<Check>) {
    let mut run = |name: &str, exact: bool, make: &mut dyn FnMut(&mut Sampler) -> PhaseOptimum| {
        let optima: Vec<PhaseOptimum> = (0..RANDOM_CASES).map(|_| make(rng)).collect();
        let applicable: Vec<&PhaseOptimum> = optima.iter().filter(|o| !infeasible(o)).collect();
        let excess = max_of(applicable.iter().map(|o| o.s_min_numeric - o.s_min_closed.unwrap_or(f64::NAN)));
        let detail = format!("{} of {RANDOM_CASES} closed forms applicable; {}", applicable.len(), flag_counts(&optima));
        out.push(check(format!("authority_{name}"), excess, CLOSED_TOL, detail));
        if exact {
            let err = max_of(applicable.iter().map(|o| o.agreement.unwrap_or(f64::NAN)));
            out.push(check(format!("closed_agreement_{name}"), err, CLOSED_TOL, ""));
        }
        optima
    };

    run("coh_sq", true, &mut |r| {
        let p1 = PulseSpec::coherent(r.u(0.2, 5.0)).with_phase(r.phase());
        let p2 = PulseSpec::with_peak_spm_phase(r.u(0.2, 5.0), r.u(0.05, 3.0)).with_phase(r.phase());
        optimize::optimal_phase_coh_sq(&p1, &p2, 0.0, r.u(0.0, 3.0)).expect("coherent pulse 1")
    });
    run("two_sq", true, &mut |r| {
        let p1 = PulseSpec::with_peak_spm_phase(r.u(0.2, 5.0), r.u(0.0, 3.0));
        let p2 = PulseSpec::with_peak_spm_phase(r.u(0.2, 5.0), r.u(0.05, 3.0));
        optimize::optimal_phase_two_sq(&p1, &p2, 0.0, r.u(0.0, 3.0)).expect("valid")
    });
    run("xpm", true, &mut |r| {
        let g = r.u(0.0, 0.5);
        let p1 = PulseSpec::with_peak_spm_phase(r.u(0.2, 5.0), r.u(0.0, 3.0)).with_gamma_x(g);
        let p2 = PulseSpec::with_peak_spm_phase(r.u(0.2, 5.0), r.u(0.05, 3.0)).with_gamma_x(g);
        optimize::optimal_phase_xpm(&p1, &p2, 0.0, r.u(0.0, 3.0)).expect("valid")
    });
    let mut toggle = false;
    run("bs_s01", true, &mut |r| {
        toggle = !toggle;
        let which = if toggle { StokesIndex::S0 } else { StokesIndex::S1 };
        let (n1, gamma) = (r.u(0.2, 5.0), r.u(0.05, 1.5));
        let p1 = PulseSpec::new(n1, gamma);
        let p2 = PulseSpec::new(n1 * r.u(0.2, 5.0), gamma);
        let x = r.u(0.05, 0.95);
        let bs = BeamSplitter::new(x, 1.0 - x).expect("r + t = 1");
        optimize::optimal_phase_bs_s01(&p1, &p2, &bs, 0.0, r.u(0.0, 3.0), which).expect("constraint holds")
    });

    // The printed S2 minimum is not attained by the printed kernel; check
    // that the gap is exactly the predicted one.
    let mut gaps = Vec::new();
    let optima = run("bs_s2", false, &mut |r| {
        let (phi, n3, x, omega0) = (r.u(0.05, 3.0), r.u(0.2, 5.0), r.u(0.05, 0.95), r.u(0.0, 3.0));
        let p = PulseSpec::with_peak_spm_phase(r.u(0.2, 5.0), phi);
        let bs = BeamSplitter::new(x, 1.0 - x).expect("r + t = 1");
        let l = lorentzian(omega0);
        let y = (bs.r - bs.t) * phi * l;
        gaps.push(2.0 * n3 * phi * l * ((1.0 + phi * phi * l * l).sqrt() - (1.0 + y * y).sqrt()));
        optimize::optimal_phase_bs_s2(&p, &p, &PulseSpec::coherent(n3), &bs, 0.0, omega0).expect("phi1 = phi2")
    });
    let err = max_of(
        optima.iter().zip(&gaps).map(|(o, gap)| (o.s_min_closed.unwrap_or(f64::NAN) - o.s_min_numeric - gap).abs()),
    );
    out.push(check("bs_s2_closed_gap", err, CLOSED_TOL, "closed minimum minus scan equals predicted gap"));
}

fn run_config(arr: Arrangement, omega0: f64) -> Option<ScenarioResult> {
    ScenarioConfig::new(arr, StokesIndex::S2).optimized_at(omega0).run().ok()
}

fn spectrum_gap(a: &ScenarioResult, b: &ScenarioResult) -> f64 {
    max_of(a.spectrum.values.iter().zip(&b.spectrum.values).map(|(x, y)| (x - y).abs() / x.abs().max(1.0)))
}

fn reduction_checks(rng: &mut Sampler, out: &mut Vec<Check>) {
    let mut xpm_gap = 0.0f64;
    let mut two_gap = 0.0f64;
    for _ in 0..10 {
        let omega0 = rng.u(0.0, 3.0);
        let p1 = PulseSpec::new(rng.u(0.2, 5.0), rng.u(0.0, 0.5)).with_phase(rng.phase());
        let p2 = PulseSpec::new(rng.u(0.2, 5.0), rng.u(0.01, 0.5)).with_phase(rng.phase());
        let gap = match (run_config(Arrangement::Xpm { p1, p2 }, omega0), run_config(Arrangement::TwoSq { p1, p2 }, omega0)) {
            (Some(a), Some(b)) => spectrum_gap(&a, &b),
            _ => f64::NAN,
        };
        xpm_gap = max_of([xpm_gap, gap]);
        let c1 = PulseSpec { gamma: 0.0, ..p1 };
        let gap = match (run_config(Arrangement::TwoSq { p1: c1, p2 }, omega0), run_config(Arrangement::CohSq { p1: c1, p2 }, omega0)) {
            (Some(a), Some(b)) => spectrum_gap(&a, &b),
            _ => f64::NAN,
        };
        two_gap = max_of([two_gap, gap]);
    }
    out.push(check("reduction_xpm_to_two_sq", xpm_gap, 1e-15, "10 random sets, full run, relative"));
    out.push(check("reduction_two_sq_to_coh_sq", two_gap, 1e-15, "10 random sets, full run, relative"));
}

fn duality_checks(rng: &mut Sampler, out: &mut Vec<Check>) {
    let mut b_err = [0.0f64; 3];
    let mut avg_err = 0.0f64;
    for _ in 0..RANDOM_CASES {
        let g = rng.u(0.0, 0.1);
        let p1 = PulseSpec::new(rng.u(0.0, 5.0), rng.u(0.0, 0.1)).with_phase(rng.phase()).with_gamma_x(g);
        let p2 = PulseSpec::new(rng.u(0.0, 5.0), rng.u(0.0, 0.1)).with_phase(rng.phase()).with_gamma_x(g);
        let c1 = PulseSpec { gamma: 0.0, gamma_x: 0.0, ..p1 };
        let s1 = PulseSpec { gamma_x: 0.0, ..p1 };
        let s2 = PulseSpec { gamma_x: 0.0, ..p2 };
        let sq = |x: f64| x * x;
        let cases = [
            (Arrangement::CohSq { p1: c1, p2: s2 }, c1.n0 * sq(s2.spm_phase(0.0))),
            (Arrangement::TwoSq { p1: s1, p2: s2 }, s1.n0 * sq(s2.spm_phase(0.0)) + s2.n0 * sq(s1.spm_phase(0.0))),
            (
                Arrangement::Xpm { p1, p2 },
                p1.n0 * (sq(p2.spm_phase(0.0)) + sq(p2.xpm_phase(0.0)))
                    + p2.n0 * (sq(p1.spm_phase(0.0)) + sq(p1.xpm_phase(0.0))),
            ),
        ];
        let dphi = rng.phase();
        for (i, (arr, total)) in cases.iter().enumerate() {
            let b = |idx| arr.kernel(0.0, idx).map_or(f64::NAN, |k| k.b_g);
            let e = (b(StokesIndex::S2) + b(StokesIndex::S3) - total).abs() / total.max(1.0);
            b_err[i] = max_of([b_err[i], e]);

            let s3 = arr.with_phase_difference(StokesIndex::S2, dphi).averages(0.0).map_or(f64::NAN, |s| s.s3);
            let s2 = arr
                .with_phase_difference(StokesIndex::S2, dphi - FRAC_PI_2)
                .averages(0.0)
                .map_or(f64::NAN, |s| s.s2);
            avg_err = max_of([avg_err, (s3 - s2).abs()]);
        }
    }
    for (name, err) in ["coh_sq", "two_sq", "xpm"].iter().zip(b_err) {
        out.push(check(format!("duality_excess_noise_{name}"), err, 1e-12, "B(S2) + B(S3) = angle-free total"));
    }
    out.push(check("duality_averages", avg_err, 1e-12, "<S3>(dphi) = <S2>(dphi - pi/2)"));
}

fn coherent_baseline(out: &mut Vec<Check>) {
    let p1 = PulseSpec::coherent(1.7).with_phase(0.3);
    let p2 = PulseSpec::coherent(0.6).with_phase(-1.1);
    let p3 = PulseSpec::coherent(2.2).with_phase(0.8);
    let arrangements = [
        Arrangement::CohSq { p1, p2 },
        Arrangement::TwoSq { p1, p2 },
        Arrangement::Xpm { p1, p2 },
        Arrangement::BsInterf { p1, p2, p3, bs: BeamSplitter::new(0.3, 0.7).expect("r + t = 1") },
    ];
    let mut err = 0.0f64;
    for arr in arrangements {
        for idx in StokesIndex::ALL {
            let mut cfg = ScenarioConfig::new(arr, idx);
            cfg.grid = OmegaGrid::default();
            err = max_of([
                err,
                match cfg.run() {
                    Ok(r) => max_of(r.spectrum.values.iter().map(|s| (s - 1.0).abs()).chain(r.spectrum.normalized.iter().map(|s| s.abs()))),
                    Err(_) => f64::NAN,
                },
            ]);
        }
    }
    out.push(check("coherent_baseline", err, 1e-15, "all scenarios and indices, full grid"));
}

fn beam_splitter_checks(rng: &mut Sampler, out: &mut Vec<Check>) {
    let mut mismatches = 0usize;
    let mut energy = 0.0f64;
    for _ in 0..RANDOM_CASES {
        let x = rng.u(0.0, 1.0);
        let bs = BeamSplitter::new(x, 1.0 - x).expect("r + t = 1");
        let p1 = PulseSpec::new(rng.u(0.0, 5.0), rng.u(0.0, 0.5)).with_phase(rng.phase());
        let p2 = PulseSpec::new(rng.u(0.0, 5.0), rng.u(0.0, 0.5)).with_phase(rng.phase());
        let qa = PulseSpec::coherent(rng.u(0.0, 5.0)).with_phase(rng.phase());
        let qb = PulseSpec::coherent(rng.u(0.0, 5.0)).with_phase(rng.phase());
        for idx in [StokesIndex::S0, StokesIndex::S1] {
            let a = Arrangement::BsInterf { p1, p2, p3: qa, bs }.kernel(0.0, idx);
            let b = Arrangement::BsInterf { p1, p2, p3: qb, bs }.kernel(0.0, idx);
            if a.is_err() || a != b {
                mismatches += 1;
            }
        }
        let total = bs_port_intensity(&p1, &p2, &bs, 1, 0.0).and_then(|a| Ok(a + bs_port_intensity(&p1, &p2, &bs, 2, 0.0)?));
        let e = total.map_or(f64::NAN, |s| (s - p1.n0 - p2.n0).abs() / (p1.n0 + p2.n0).max(1.0));
        energy = max_of([energy, e]);
    }
    out.push(check("bs_s01_probe_independence", mismatches as f64, 0.0, "bit-identical kernels under probe changes"));
    out.push(check("bs_energy_conservation", energy, 1e-12, "port 1 + port 2 = n1 + n2"));

    let bs = BeamSplitter::balanced();
    let mut err = 0.0f64;
    for (n1, ratio) in [(1.0, 1.0), (1.0, 1.5), (2.0, 2.0), (0.5, 3.0)] {
        let p1 = PulseSpec::new(n1, 1.0);
        let p2 = PulseSpec::new(n1 * ratio, 1.0);
        let n2 = n1 * ratio;
        let expected = 1.0 - (0.5 * n1 + 0.5 * n2).powi(2) / (n1 + n2);
        err = max_of([
            err,
            optimize::optimal_phase_bs_s01(&p1, &p2, &bs, 0.0, 0.0, StokesIndex::S0)
                .map_or(f64::NAN, |o| (o.s_min_numeric - expected).abs()),
        ]);
    }
    out.push(check("bs_s0_minimum", err, CLOSED_TOL, "R = T = 1/2 with n1 phi2 = n2 phi1"));

    let p = PulseSpec::new(1.3, 1.0);
    let err = optimize::optimal_phase_bs_s01(&p, &p, &bs, 0.0, 0.0, StokesIndex::S1).map_or(f64::NAN, |o| {
        (o.s_min_closed.unwrap_or(f64::NAN) - 1.0).abs().max((o.s_min_numeric - 1.0).abs())
    });
    out.push(check("bs_s1_symmetric_no_squeezing", err, CLOSED_TOL, "n1 = n2, R = T"));
}

fn periodicity_check(rng: &mut Sampler, out: &mut Vec<Check>) {
    let mut err = 0.0f64;
    for _ in 0..20 {
        let p1 = PulseSpec::with_peak_spm_phase(rng.u(0.2, 5.0), rng.u(0.0, 3.0));
        let p2 = PulseSpec::with_peak_spm_phase(rng.u(0.2, 5.0), rng.u(0.05, 3.0));
        let e = match optimize::optimal_phase_two_sq(&p1, &p2, 0.0, rng.u(0.0, 3.0)) {
            Ok(o) if o.local_minima.len() == 2 => {
                let (a, b) = (o.local_minima[0], o.local_minima[1]);
                (b.0 - a.0 - PI).abs().max((b.1 - a.1).abs())
            }
            _ => f64::NAN,
        };
        err = max_of([err, e]);
    }
    out.push(check("scan_period_pi", err, 1e-6, "two equivalent minima pi apart"));
}

fn optimized_frequency_check(out: &mut Vec<Check>) {
    let mut worst = 0usize;
    for phi in [0.5, 1.0, 2.0, 3.0] {
        let arr = Arrangement::CohSq { p1: PulseSpec::coherent(1.0), p2: PulseSpec::with_peak_spm_phase(1.0, phi) };
        worst = worst.max(run_config(arr, 0.0).map_or(usize::MAX, |r| r.spectrum.argmin()));
    }
    out.push(check("coh_sq_argmin_at_omega0_zero", worst as f64, 1.0, "argmin grid index, optimized at Omega0 = 0"));
}

fn phasor_check(out: &mut Vec<Check>) {
    let p1 = PulseSpec::coherent(2.0).with_phase(0.3);
    let p2 = PulseSpec::coherent(0.5).with_phase(1.4);
    let exact = averages_two_sq(&p1, &p2, 0.0).components();
    let z = match mc_coherent_phasor(100_000, &p1, &p2, 0.0, SEED) {
        Ok(est) => max_of((0..4).map(|k| (est.summary.components()[k] - exact[k]).abs() / est.std_error[k])),
        Err(_) => f64::NAN,
    };
    out.push(check("mc_phasor_coherent_limit", z, 5.0, "max deviation in standard errors, 1e5 samples"));
}

pub fn run_suite(fault: Option<Fault>) -> Report {
    let mut rng = Sampler(ChaCha8Rng::seed_from_u64(SEED));
    let mut checks = Vec::new();
    let q = Quadrature { spec: QuadratureSpec::default(), fault };
    quadrature_checks(&q, &mut rng, &mut checks);
    coh_sq_minimum_checks(&mut checks);
    authority_checks(&mut rng, &mut checks);
    reduction_checks(&mut rng, &mut checks);
    duality_checks(&mut rng, &mut checks);
    coherent_baseline(&mut checks);
    beam_splitter_checks(&mut rng, &mut checks);
    periodicity_check(&mut rng, &mut checks);
    optimized_frequency_check(&mut checks);
    phasor_check(&mut checks);
    Report { seed: SEED, checks }
}
