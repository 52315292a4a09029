//! The ring of L coherent states |α e^{2πiℓ/L}⟩ seen as walker sites.
//!
//! Neighbouring coherent states overlap unless |α| is large, so sites are
//! defined through an orthonormal basis built from the initial coherent
//! state. Group photon numbers by residue r = n mod L and let |r̃⟩ be the
//! normalized projection of |α⟩ onto residue class r. The dispersive walk
//! acts on each class as the Bloch unitary at k_r = 2πr/L, so the Fourier
//! partners |ℓ̃⟩ = L^{-1/2} Σ_r e^{2πirℓ/L} |r̃⟩ evolve exactly like the sites
//! of an L-site ring. For well separated coherent states |ℓ̃⟩ ≈ |α_ℓ⟩.

use std::f64::consts::PI;

use super::{coherent_state, CavityConfig, CqedError, Level, QutritCavityState};
use crate::spin::SpinState;
use crate::walk::SpinorField;
use crate::C64;

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseSpaceLattice {
    sites: usize,
    coherent: Vec<C64>,
    weights: Vec<f64>,
}

impl PhaseSpaceLattice {
    pub fn new(cfg: &CavityConfig) -> Result<Self, CqedError> {
        let coherent = coherent_state(cfg.alpha, cfg.fock_cutoff)?.amplitudes;
        let mut weights = vec![0.0; cfg.sites];
        for (n, c) in coherent.iter().enumerate() {
            weights[n % cfg.sites] += c.norm_sqr();
        }
        if let Some(residue) = weights.iter().position(|&w| w < 1e-300) {
            return Err(CqedError::LatticeUndefined { residue });
        }
        Ok(Self { sites: cfg.sites, coherent, weights })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    /// ⟨r̃, level|ψ⟩ for every residue r.
    fn residue_amplitudes(&self, state: &QutritCavityState, level: Level) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.sites];
        for (n, a) in state.component(level).iter().enumerate().take(self.coherent.len()) {
            out[n % self.sites] += self.coherent[n].conj() * a;
        }
        out.iter().zip(&self.weights).map(|(a, w)| a / w.sqrt()).collect()
    }

    /// Walker amplitudes ⟨ℓ̃, s|ψ⟩ (e = up, g = down) on an L-site ring with
    /// site 0 as origin. The f level is ignored, so the field carries the
    /// walker's share of the norm.
    pub fn site_field(&self, state: &QutritCavityState) -> SpinorField {
        let up = self.residue_amplitudes(state, Level::E);
        let down = self.residue_amplitudes(state, Level::G);
        let l = self.sites as f64;
        let amps = (0..self.sites)
            .map(|site| {
                let mut s = SpinState::default();
                for r in 0..self.sites {
                    let phase = C64::from_polar(1.0 / l.sqrt(), -2.0 * PI * (r * site) as f64 / l);
                    s.up += phase * up[r];
                    s.down += phase * down[r];
                }
                s
            })
            .collect();
        SpinorField::from_amplitudes(amps, 0).expect("at least three sites")
    }

    /// Walker population outside the span of the site basis.
    pub fn leakage(&self, state: &QutritCavityState) -> f64 {
        let walker = state.level_population(Level::E) + state.level_population(Level::G);
        (walker - self.site_field(state).norm_sqr()).max(0.0)
    }

    /// The site-basis image of the initial |α⟩|g⟩.
    pub fn initial_field(&self) -> SpinorField {
        let state = QutritCavityState::product(&self.coherent, Level::G);
        self.site_field(&state)
    }

    /// Populations |⟨α_ℓ, s|ψ⟩|² summed over s, normalized to one. These are
    /// what a coherent-state readout sees and only approximate the site
    /// populations when the coherent states are nearly orthogonal.
    pub fn coherent_populations(&self, state: &QutritCavityState) -> Vec<f64> {
        let l = self.sites as f64;
        let raw: Vec<f64> = (0..self.sites)
            .map(|site| {
                [Level::E, Level::G]
                    .iter()
                    .map(|&level| {
                        state
                            .component(level)
                            .iter()
                            .zip(&self.coherent)
                            .enumerate()
                            .map(|(n, (a, c))| (c * C64::from_polar(1.0, 2.0 * PI * (n * site) as f64 / l)).conj() * a)
                            .sum::<C64>()
                            .norm_sqr()
                    })
                    .sum()
            })
            .collect();
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|p| p / total).collect()
    }
}

/// ½ Σ |p − q|
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cqed::{cqed_trajectory, run_cqed_walk, walker_init};
    use crate::walk::{localized_state, run_walk_on_ring, WalkParams};
    use approx::assert_abs_diff_eq;

    #[test]
    fn site_basis_is_orthonormal() {
        let cfg = CavityConfig::new(C64::new(3.0, 0.0), 20, 40).unwrap();
        let lat = PhaseSpaceLattice::new(&cfg).unwrap();
        // Image of |ℓ̃⟩ itself must be the localized site ℓ.
        let l = 20.0f64;
        for site in [0usize, 7] {
            let mut s = QutritCavityState::zeros(cfg.fock_cutoff);
            for (n, c) in lat.coherent.iter().enumerate() {
                let r = n % 20;
                let a = C64::from_polar(1.0 / l.sqrt(), 2.0 * PI * (r * site) as f64 / l) * c / lat.weights[r].sqrt();
                s.set_amplitude(Level::E, n, a);
            }
            assert_abs_diff_eq!(s.norm_sqr(), 1.0, epsilon = 1e-12);
            let f = lat.site_field(&s);
            for x in 0..20 {
                let expect = if x == site { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(f.amplitude(x).up.norm_sqr(), expect, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn initial_state_is_fully_captured() {
        let cfg = CavityConfig::new(C64::new(3.0, 0.0), 20, 40).unwrap();
        let lat = PhaseSpaceLattice::new(&cfg).unwrap();
        assert_abs_diff_eq!(lat.initial_field().norm_sqr(), 1.0, epsilon = 1e-12);
        assert!(lat.leakage(&walker_init(&cfg)) < 1e-12);
    }

    #[test]
    fn undefined_without_every_residue() {
        let cfg = CavityConfig::new(C64::new(0.0, 0.0), 20, 10).unwrap();
        assert!(matches!(PhaseSpaceLattice::new(&cfg), Err(CqedError::LatticeUndefined { .. })));
    }

    #[test]
    fn cavity_walk_matches_ring_walk_step_by_step() {
        let cfg = CavityConfig::new(C64::new(3.0, 0.0), 20, 40).unwrap();
        let lat = PhaseSpaceLattice::new(&cfg).unwrap();
        let walk = WalkParams::split_step(0.9, 2.1, 20);
        let traj = cqed_trajectory(&walk, &cfg, false).unwrap();
        let ring = run_walk_on_ring(&lat.initial_field(), &walk).unwrap();
        for (state, snap) in traj.iter().zip(&ring.snapshots) {
            let p: Vec<f64> = lat.site_field(state).position_distribution();
            assert!(total_variation(&p, &snap.distribution) < 1e-10);
        }
    }

    #[test]
    fn separated_coherent_states_behave_as_sites() {
        let alpha = C64::new(10.0, 0.0);
        let cfg = CavityConfig::with_default_cutoff(alpha, 20).unwrap();
        // Neighbouring lattice states are nearly orthogonal here.
        let chord = 2.0 * alpha.norm() * (PI / 20.0).sin();
        assert!((-chord * chord).exp() < 1e-4);
        let lat = PhaseSpaceLattice::new(&cfg).unwrap();
        let walk = WalkParams::split_step(PI / 4.0, 3.0 * PI / 4.0, 20);
        let out = run_cqed_walk(&walk, &cfg, false).unwrap();
        let ring = run_walk_on_ring(&localized_state(0, SpinState::down(), 20).unwrap(), &walk).unwrap();
        let p = lat.coherent_populations(&out);
        assert!(total_variation(&p, &ring.final_state.position_distribution()) < 0.02);
    }
}
