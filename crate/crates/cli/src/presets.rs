//! Parameter sets reproducing the published figure series.
//!
//! All presets are evaluated at `t = 0` with constant envelopes and
//! `n̄₁,₀ = 1`; `S*` is invariant under a common rescaling of photon numbers
//! at fixed SPM phases, so only ratios matter.

use kerr_stokes::{Arrangement, BeamSplitter, OmegaGrid, PulseSpec, ScenarioConfig, StokesIndex};

pub const FIGURE_IDS: [u32; 11] = [1, 2, 3, 4, 5, 6, 8, 9, 10, 11, 12];

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub label: char,
    /// Parameter binding of this curve.
    pub binding: String,
    pub config: ScenarioConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigurePreset {
    pub figure_id: u32,
    /// Parameters shared by every curve.
    pub binding: &'static str,
    pub curves: Vec<Curve>,
}

impl FigurePreset {
    pub fn file_name(&self, curve: &Curve) -> String {
        format!("fig{}_{}.csv", self.figure_id, curve.label)
    }

    pub fn with_grid(mut self, grid: OmegaGrid) -> Self {
        for c in &mut self.curves {
            c.config.grid = grid;
        }
        self
    }
}

fn labelled<T: Copy>(values: &[T], make: impl Fn(T) -> (String, ScenarioConfig)) -> Vec<Curve> {
    values
        .iter()
        .zip('a'..='z')
        .map(|(&v, label)| {
            let (binding, config) = make(v);
            Curve { label, binding, config }
        })
        .collect()
}

fn coh_sq(omega0: f64) -> Vec<Curve> {
    labelled(&[0.5, 1.0, 2.0, 3.0], |phi| {
        let arr = Arrangement::CohSq { p1: PulseSpec::coherent(1.0), p2: PulseSpec::with_peak_spm_phase(1.0, phi) };
        (format!("phi_0,2 = {phi}"), ScenarioConfig::new(arr, StokesIndex::S2).optimized_at(omega0))
    })
}

fn two_sq(omega0: f64) -> Vec<Curve> {
    labelled(&[1.0, 2.0, 3.0, 5.0, 7.0], |ratio| {
        // φ₁,₀ = 2 with n̄₁,₀ = 1 fixes γ₁ = 1; γ₂ = γ₁/2.
        let arr = Arrangement::TwoSq { p1: PulseSpec::new(1.0, 1.0), p2: PulseSpec::new(ratio, 0.5) };
        (format!("n_2,0/n_1,0 = {ratio}"), ScenarioConfig::new(arr, StokesIndex::S2).optimized_at(omega0))
    })
}

fn bs_s01(index: StokesIndex, omega0: f64) -> Vec<Curve> {
    labelled(&[1.5, 2.0], |ratio| {
        // Equal γ gives n̄₁φ₂ = n̄₂φ₁ for any intensity ratio.
        let arr = Arrangement::BsInterf {
            p1: PulseSpec::new(1.0, 1.0),
            p2: PulseSpec::new(ratio, 1.0),
            p3: PulseSpec::coherent(1.0),
            bs: BeamSplitter::balanced(),
        };
        (format!("n_2,0 = {ratio} n_1,0"), ScenarioConfig::new(arr, index).optimized_at(omega0))
    })
}

pub fn figure(id: u32) -> Option<FigurePreset> {
    let (binding, curves) = match id {
        1 => ("coh_sq, S2, optimized at Omega0 = 0", coh_sq(0.0)),
        2 => ("coh_sq, S2, optimized at Omega0 = 1", coh_sq(1.0)),
        3 => ("two_sq, S2, phi_1,0 = 2, gamma_1 = 2 gamma_2, optimized at Omega0 = 0", two_sq(0.0)),
        4 => ("two_sq, S2, phi_1,0 = 2, gamma_1 = 2 gamma_2, optimized at Omega0 = 1", two_sq(1.0)),
        5 => (
            "xpm, S2, phi_0,1 = 2, gamma_1 = gamma_2/4 = 2 gamma_x, optimized at Omega0 = 0",
            labelled(&[(0.25, "n_0,1/4"), (0.5, "n_0,1/2"), (1.0, "n_0,1"), (3.0, "3 n_0,1")], |(ratio, text)| {
                let arr = Arrangement::Xpm {
                    p1: PulseSpec::new(1.0, 1.0).with_gamma_x(0.5),
                    p2: PulseSpec::new(ratio, 4.0).with_gamma_x(0.5),
                };
                (format!("n_0,2 = {text}"), ScenarioConfig::new(arr, StokesIndex::S2).optimized_at(0.0))
            }),
        ),
        6 => (
            "xpm, S2, phi_0,1 = 2, n_0,1 = n_0,2, gamma_x = gamma_1/2, optimized at Omega0 = 0",
            labelled(&[2.0, 3.0, 4.0, 5.0, 6.0, 7.0], |k| {
                let arr = Arrangement::Xpm {
                    p1: PulseSpec::new(1.0, 1.0).with_gamma_x(0.5),
                    p2: PulseSpec::new(1.0, k).with_gamma_x(0.5),
                };
                (format!("gamma_2 = {k} gamma_1"), ScenarioConfig::new(arr, StokesIndex::S2).optimized_at(0.0))
            }),
        ),
        8 => ("bs_interf, S0, R = T = 0.5, phi_1,0 = 2, optimized at Omega0 = 0", bs_s01(StokesIndex::S0, 0.0)),
        9 => ("bs_interf, S1, R = T = 0.5, phi_1,0 = 2, optimized at Omega0 = 0", bs_s01(StokesIndex::S1, 0.0)),
        10 => ("bs_interf, S0, R = T = 0.5, phi_1,0 = 2, optimized at Omega0 = 1", bs_s01(StokesIndex::S0, 1.0)),
        11 => ("bs_interf, S1, R = T = 0.5, phi_1,0 = 2, optimized at Omega0 = 1", bs_s01(StokesIndex::S1, 1.0)),
        12 => (
            "bs_interf, S2, R = T = 0.5, phi_1 = phi_2 = phi_0, phi_1,lin - phi_2,lin = pi/2, optimized at Omega0 = 0",
            labelled(&[0.5, 0.75, 1.0, 1.25], |phi| {
                let p = PulseSpec::with_peak_spm_phase(1.0, phi);
                let arr = Arrangement::BsInterf { p1: p, p2: p, p3: PulseSpec::coherent(1.0), bs: BeamSplitter::balanced() }
                    .with_phase_difference(StokesIndex::S2, 0.0);
                (format!("phi_0 = {phi}"), ScenarioConfig::new(arr, StokesIndex::S2).optimized_at(0.0))
            }),
        ),
        _ => return None,
    };
    Some(FigurePreset { figure_id: id, binding, curves })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_counts() {
        let counts: Vec<usize> = FIGURE_IDS.iter().map(|&id| figure(id).unwrap().curves.len()).collect();
        assert_eq!(counts, vec![4, 4, 5, 5, 4, 6, 2, 2, 2, 2, 4]);
        assert!(figure(7).is_none());
        assert!(figure(13).is_none());
        assert!(figure(0).is_none());
    }

    #[test]
    fn presets_validate_and_meet_constraints() {
        for id in FIGURE_IDS {
            for curve in figure(id).unwrap().curves {
                let v = curve.config.validate().unwrap_or_else(|e| panic!("fig {id} {}: {e:?}", curve.label));
                assert_eq!(v.config.grid, OmegaGrid::default());
                let res = curve.config.run().unwrap();
                let opt = res.optimum.unwrap();
                assert!(opt.delta_phi_opt.is_some(), "fig {id} {}", curve.label);
            }
        }
    }

    #[test]
    fn fig5_ratios() {
        let f = figure(5).unwrap();
        let c = &f.curves[0].config;
        assert_eq!(c.pulses[0].gamma, 2.0 * c.pulses[0].gamma_x);
        assert_eq!(c.pulses[1].gamma, 4.0 * c.pulses[0].gamma);
        assert_eq!(c.pulses[1].n0, 0.25);
        assert_eq!(f.file_name(&f.curves[3]), "fig5_d.csv");
    }
}
