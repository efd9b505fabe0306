//! Average Stokes parameters and quantum-fluctuation spectra of Stokes
//! operators for ultrashort pulses squeezed by self- and cross-phase
//! modulation in an electronic Kerr medium.
//!
//! Every Stokes correlation function in this model has the shape
//! `δ(τ) + A·h(τ) + B·g(τ)`, where `h` and `g` are the even relaxation
//! kernels of the medium. The Fourier pairs `h ↔ 2L(Ω)` and `g ↔ 4L²(Ω)`
//! then give the spectrum `S(Ω) = 1 + 2L(Ω)·A + 4L²(Ω)·B` in units of the
//! coherent (shot-noise) level.
//!
//! Four arrangements are covered:
//!
//! * a coherent pulse overlapped with an SPM-squeezed pulse,
//! * two independently squeezed pulses,
//! * two pulses overlapping inside an anisotropic medium (SPM + XPM),
//! * two squeezed pulses mixed on a beam splitter, with output port 1
//!   overlapped with a coherent probe.
//!
//! Closed-form optimal phase differences are cross-checked against a
//! numeric phase scan ([`optimize::scan_phase`]) and a numeric
//! Wiener-Khintchine quadrature ([`oracle::wk_numeric`]).
//!
//! The parametric frequency conversion that accompanies XPM is assumed to
//! be suppressed by a large phase mismatch and is not modeled.

pub mod error;
pub mod kernel;
pub mod optimize;
pub mod oracle;
pub mod pulse;
pub mod scenario;
pub mod spectra;
pub mod stokes;

pub use error::{Error, Result};
pub use kernel::{fourier_g_closed, fourier_h_closed, lorentzian, RelaxationKernel};
pub use optimize::{scan_phase, OptimumFlag, PhaseOptimum, PhaseScan};
pub use oracle::{QuadratureSpec, StokesEstimate};
pub use pulse::{Envelope, EnvelopeKind, PhaseMode, PulseSpec};
pub use scenario::{
    Arrangement, BeamSplitter, Issue, OmegaGrid, ScenarioConfig, ScenarioKind, ScenarioResult,
    Validated,
};
pub use spectra::{spectrum, CorrelationKernel, SpectrumSeries, StokesIndex};
pub use stokes::StokesSummary;
