//! A {g, e, f} qutrit coupled dispersively to a truncated cavity mode.
//!
//! The g/e pair is the walker's spin (e = up, g = down); f is a shelving
//! level that carries the vacuum reference of the cat-state interferometer.
//! Each dispersive kick rotates the cavity by ±χt/2 depending on the spin,
//! so two kicks per step realize the walk on a ring of L coherent states.

mod lattice;
mod wigner;

use std::f64::consts::PI;

use thiserror::Error;

use crate::spin::{coin_rotation, Axis, SpinMatrix};
use crate::walk::{Frame, WalkError, WalkParams};
use crate::C64;

pub use lattice::{total_variation, PhaseSpaceLattice};
pub use wigner::{fit_fringes, fringe_phase, wigner, wigner_point, DensityMatrix, FringeFit, GridSpec, WignerGrid};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CqedError {
    #[error("Fock cutoff {got} is below the required {required} for |alpha| = {alpha_abs}")]
    CutoffTooSmall { required: usize, got: usize, alpha_abs: f64 },
    #[error("invalid cavity configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error("projection onto g has probability {probability:.3e}")]
    ZeroProjection { probability: f64 },
    #[error("state norm drifted to {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },
    #[error("density matrix has population {tail:.3e} in its top Fock levels; raise the cutoff")]
    CutoffNotConverged { tail: f64 },
    #[error("Wigner grid does not cover the requested samples: {0}")]
    GridTooSmall(String),
    #[error("fringe contrast {contrast:.3e} is below 5% of the blob peak")]
    FitFailure { contrast: f64 },
    #[error("phase-space lattice is undefined: residue class {residue} carries no weight")]
    LatticeUndefined { residue: usize },
}

/// Smallest cutoff keeping the coherent-state truncation error negligible.
pub fn minimum_cutoff(alpha: C64) -> usize {
    let a = alpha.norm();
    (a * a + 6.0 * a).ceil() as usize
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CavityConfig {
    pub alpha: C64,
    pub sites: usize,
    pub fock_cutoff: usize,
}

impl CavityConfig {
    pub fn new(alpha: C64, sites: usize, fock_cutoff: usize) -> Result<Self, CqedError> {
        if !(alpha.re.is_finite() && alpha.im.is_finite()) {
            return Err(CqedError::InvalidConfig("alpha must be finite".into()));
        }
        if sites < 3 {
            return Err(CqedError::InvalidConfig(format!("need at least 3 lattice sites, got {sites}")));
        }
        let required = minimum_cutoff(alpha);
        if fock_cutoff < required {
            return Err(CqedError::CutoffTooSmall { required, got: fock_cutoff, alpha_abs: alpha.norm() });
        }
        Ok(Self { alpha, sites, fock_cutoff })
    }

    /// Cutoff ⌈|α|² + 6|α| + 10⌉.
    pub fn with_default_cutoff(alpha: C64, sites: usize) -> Result<Self, CqedError> {
        let a = alpha.norm();
        Self::new(alpha, sites, (a * a + 6.0 * a + 10.0).ceil() as usize)
    }

    /// Dispersive phase per kick pair, 2π/L.
    pub fn chi_t(&self) -> f64 {
        2.0 * PI / self.sites as f64
    }

    pub fn fock_dim(&self) -> usize {
        self.fock_cutoff + 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    G,
    E,
    F,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::G, Level::E, Level::F];

    fn index(self) -> usize {
        match self {
            Level::G => 0,
            Level::E => 1,
            Level::F => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QutritCavityState {
    fock_dim: usize,
    amplitudes: Vec<C64>,
}

impl QutritCavityState {
    pub fn zeros(fock_cutoff: usize) -> Self {
        let fock_dim = fock_cutoff + 1;
        Self { fock_dim, amplitudes: vec![C64::new(0.0, 0.0); 3 * fock_dim] }
    }

    pub fn product(cavity: &[C64], level: Level) -> Self {
        let mut s = Self::zeros(cavity.len() - 1);
        s.component_mut(level).copy_from_slice(cavity);
        s
    }

    pub fn fock_dim(&self) -> usize {
        self.fock_dim
    }

    pub fn amplitude(&self, level: Level, n: usize) -> C64 {
        self.amplitudes[level.index() * self.fock_dim + n]
    }

    pub fn set_amplitude(&mut self, level: Level, n: usize, value: C64) {
        self.amplitudes[level.index() * self.fock_dim + n] = value;
    }

    /// Cavity amplitudes conditioned on `level` (unnormalized).
    pub fn component(&self, level: Level) -> &[C64] {
        let start = level.index() * self.fock_dim;
        &self.amplitudes[start..start + self.fock_dim]
    }

    fn component_mut(&mut self, level: Level) -> &mut [C64] {
        let start = level.index() * self.fock_dim;
        &mut self.amplitudes[start..start + self.fock_dim]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn level_population(&self, level: Level) -> f64 {
        self.component(level).iter().map(|a| a.norm_sqr()).sum()
    }

    /// Σ n |ψ(level, n)|² / P(level).
    pub fn mean_photon_number(&self, level: Level) -> f64 {
        let p = self.level_population(level);
        self.component(level).iter().enumerate().map(|(n, a)| n as f64 * a.norm_sqr()).sum::<f64>() / p
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoherentState {
    pub amplitudes: Vec<C64>,
    /// Norm captured below the cutoff before renormalization.
    pub captured_norm: f64,
}

/// e^{−|α|²/2} αⁿ/√n! for n ≤ cutoff, renormalized.
pub fn coherent_state(alpha: C64, fock_cutoff: usize) -> Result<CoherentState, CqedError> {
    let required = minimum_cutoff(alpha);
    if fock_cutoff < required {
        return Err(CqedError::CutoffTooSmall { required, got: fock_cutoff, alpha_abs: alpha.norm() });
    }
    let mut amps = Vec::with_capacity(fock_cutoff + 1);
    let mut c = C64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    amps.push(c);
    for n in 1..=fock_cutoff {
        c = c * alpha / (n as f64).sqrt();
        amps.push(c);
    }
    let captured_norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    let s = captured_norm.sqrt();
    Ok(CoherentState { amplitudes: amps.into_iter().map(|a| a / s).collect(), captured_norm })
}

fn vacuum(fock_cutoff: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); fock_cutoff + 1];
    v[0] = C64::new(1.0, 0.0);
    v
}

/// (|α⟩|g⟩ + |0⟩|f⟩)/√2
pub fn cat_init(cfg: &CavityConfig) -> QutritCavityState {
    let alpha = coherent_state(cfg.alpha, cfg.fock_cutoff).expect("validated configuration");
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut s = QutritCavityState::zeros(cfg.fock_cutoff);
    for (n, a) in alpha.amplitudes.iter().enumerate() {
        s.set_amplitude(Level::G, n, a * h);
    }
    for (n, v) in vacuum(cfg.fock_cutoff).iter().enumerate() {
        s.set_amplitude(Level::F, n, v * h);
    }
    s
}

/// |α⟩|g⟩
pub fn walker_init(cfg: &CavityConfig) -> QutritCavityState {
    let alpha = coherent_state(cfg.alpha, cfg.fock_cutoff).expect("validated configuration");
    QutritCavityState::product(&alpha.amplitudes, Level::G)
}

/// Multiplies (e, n) by e^{+inχt/2} and (g, n) by e^{−inχt/2}; f is immune.
pub fn dispersive_step(state: &QutritCavityState, cfg: &CavityConfig) -> QutritCavityState {
    let mut out = state.clone();
    dispersive_in_place(&mut out, cfg);
    out
}

fn dispersive_in_place(state: &mut QutritCavityState, cfg: &CavityConfig) {
    let half = 0.5 * cfg.chi_t();
    for n in 0..state.fock_dim {
        let phase = C64::from_polar(1.0, n as f64 * half);
        let e = state.amplitude(Level::E, n);
        let g = state.amplitude(Level::G, n);
        state.set_amplitude(Level::E, n, e * phase);
        state.set_amplitude(Level::G, n, g * phase.conj());
    }
}

/// Applies `sm` to (e, g) at every photon number; f is untouched.
pub fn ge_rotation(state: &QutritCavityState, sm: &SpinMatrix) -> QutritCavityState {
    let mut out = state.clone();
    rotate_in_place(&mut out, sm);
    out
}

fn rotate_in_place(state: &mut QutritCavityState, sm: &SpinMatrix) {
    for n in 0..state.fock_dim {
        let e = state.amplitude(Level::E, n);
        let g = state.amplitude(Level::G, n);
        state.set_amplitude(Level::E, n, sm.get(0, 0) * e + sm.get(0, 1) * g);
        state.set_amplitude(Level::G, n, sm.get(1, 0) * e + sm.get(1, 1) * g);
    }
}

/// One Bloch-oscillating step with the dispersive kick playing both
/// translations: R_z(−mφ)R_y(θ1), kick, R_z(−mφ)R_y(θ2), kick.
fn cqed_step(state: &mut QutritCavityState, walk: &WalkParams, cfg: &CavityConfig, m: usize) {
    let kick = coin_rotation(Axis::Z, -(m as f64) * walk.kick);
    let first = match walk.frame {
        Frame::Standard => coin_rotation(Axis::Y, walk.theta1),
        Frame::Symmetric => coin_rotation(Axis::Y, 0.5 * walk.theta1),
    };
    rotate_in_place(state, &(kick * first));
    dispersive_in_place(state, cfg);
    rotate_in_place(state, &(kick * coin_rotation(Axis::Y, walk.effective_theta2())));
    dispersive_in_place(state, cfg);
    if walk.frame == Frame::Symmetric {
        rotate_in_place(state, &coin_rotation(Axis::Y, 0.5 * walk.theta1));
    }
}

/// States after 0, 1, …, N·traversals steps, starting from the cat state
/// (with the f reference) or from |α⟩|g⟩.
pub fn cqed_trajectory(
    walk: &WalkParams,
    cfg: &CavityConfig,
    with_reference: bool,
) -> Result<Vec<QutritCavityState>, CqedError> {
    walk.validate()?;
    let mut state = if with_reference { cat_init(cfg) } else { walker_init(cfg) };
    let mut out = Vec::with_capacity(walk.total_steps() + 1);
    out.push(state.clone());
    for m in 0..walk.total_steps() {
        cqed_step(&mut state, walk, cfg, m);
        out.push(state.clone());
    }
    let n = state.norm_sqr();
    if (n - 1.0).abs() > 1e-9 {
        return Err(CqedError::NotNormalized { norm_sqr: n });
    }
    Ok(out)
}

pub fn run_cqed_walk(
    walk: &WalkParams,
    cfg: &CavityConfig,
    with_reference: bool,
) -> Result<QutritCavityState, CqedError> {
    walk.validate()?;
    let mut state = if with_reference { cat_init(cfg) } else { walker_init(cfg) };
    for m in 0..walk.total_steps() {
        cqed_step(&mut state, walk, cfg, m);
    }
    let n = state.norm_sqr();
    if (n - 1.0).abs() > 1e-9 {
        return Err(CqedError::NotNormalized { norm_sqr: n });
    }
    Ok(state)
}

/// Ideal number-selective swap of (f, 0) and (g, 0).
pub fn disentangle_reference(state: &QutritCavityState) -> QutritCavityState {
    let mut out = state.clone();
    let f0 = state.amplitude(Level::F, 0);
    let g0 = state.amplitude(Level::G, 0);
    out.set_amplitude(Level::F, 0, g0);
    out.set_amplitude(Level::G, 0, f0);
    out
}

/// Cavity state after tracing out the qutrit, or after projecting onto g.
pub fn reduced_cavity(state: &QutritCavityState, project_g: bool) -> Result<DensityMatrix, CqedError> {
    if project_g {
        let p = state.level_population(Level::G);
        if p < 1e-12 {
            return Err(CqedError::ZeroProjection { probability: p });
        }
        let g: Vec<C64> = state.component(Level::G).iter().map(|a| a / p.sqrt()).collect();
        Ok(DensityMatrix::from_pure(&g))
    } else {
        let mut rho = DensityMatrix::zeros(state.fock_dim());
        for level in Level::ALL {
            rho.add_pure(state.component(level));
        }
        Ok(rho)
    }
}
