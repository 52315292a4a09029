//! Position-space walk on a periodic ring: states, spin-dependent shifts and
//! the Bloch-oscillating step.

use std::f64::consts::PI;

use thiserror::Error;

use crate::spin::{coin_rotation, Axis, SpinMatrix, SpinState};
use crate::C64;

/// Tolerance on the norm of states handed to stepping operations.
pub const NORM_TOL: f64 = 1e-8;
/// Amplitudes below this modulus do not count as support.
pub const SUPPORT_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WalkError {
    #[error("state is not normalized (norm² = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("site {site} is outside a lattice of {size} sites")]
    SiteOutOfRange { site: usize, size: usize },
    #[error("lattice of {actual} sites is too small: the light cone needs at least {required}")]
    LatticeTooSmall { required: usize, actual: usize },
    #[error("lattice sizes differ ({left} vs {right})")]
    SizeMismatch { left: usize, right: usize },
    #[error("invalid walk parameters: {0}")]
    InvalidParams(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpinorField {
    amplitudes: Vec<SpinState>,
    origin: usize,
}

impl SpinorField {
    pub fn from_amplitudes(amplitudes: Vec<SpinState>, origin: usize) -> Result<Self, WalkError> {
        let size = amplitudes.len();
        if size == 0 {
            return Err(WalkError::InvalidParams("empty lattice".into()));
        }
        if origin >= size {
            return Err(WalkError::SiteOutOfRange { site: origin, size });
        }
        Ok(Self { amplitudes, origin })
    }

    /// Plane wave ψ(x) = e^{-ik(x-origin)} χ/√L with k = 2π·index/L.
    pub fn plane_wave(index: usize, spin: SpinState, size: usize, origin: usize) -> Result<Self, WalkError> {
        let k = 2.0 * PI * index as f64 / size as f64;
        let norm = 1.0 / (size as f64).sqrt();
        let amps = (0..size)
            .map(|x| {
                let dx = x as f64 - origin as f64;
                spin.scale(C64::from_polar(norm, -k * dx))
            })
            .collect();
        Self::from_amplitudes(amps, origin)
    }

    pub fn lattice_size(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn origin_index(&self) -> usize {
        self.origin
    }

    pub fn amplitudes(&self) -> &[SpinState] {
        &self.amplitudes
    }

    pub fn amplitude(&self, site: usize) -> SpinState {
        self.amplitudes[site]
    }

    /// Signed ring offset of `site` from the origin, in (-L/2, L/2].
    pub fn offset(&self, site: usize) -> i64 {
        let l = self.lattice_size() as i64;
        let mut d = (site as i64 - self.origin as i64).rem_euclid(l);
        if 2 * d > l {
            d -= l;
        }
        d
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(SpinState::norm_sqr).sum()
    }

    pub fn position_distribution(&self) -> Vec<f64> {
        self.amplitudes.iter().map(SpinState::norm_sqr).collect()
    }

    /// (P(up), P(down)).
    pub fn spin_populations(&self) -> [f64; 2] {
        self.amplitudes.iter().fold([0.0, 0.0], |acc, a| [acc[0] + a.up.norm_sqr(), acc[1] + a.down.norm_sqr()])
    }

    /// Largest ring distance from the origin carrying amplitude above the
    /// support threshold.
    pub fn support_radius(&self) -> usize {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| a.up.norm() > SUPPORT_THRESHOLD || a.down.norm() > SUPPORT_THRESHOLD)
            .map(|(x, _)| self.offset(x).unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn apply_coin(&mut self, coin: &SpinMatrix) {
        for a in &mut self.amplitudes {
            *a = coin.apply(*a);
        }
    }

    /// In-place T↑: the up component moves one site to the right.
    pub fn shift_up_in_place(&mut self) {
        let l = self.lattice_size();
        let last = self.amplitudes[l - 1].up;
        for x in (1..l).rev() {
            self.amplitudes[x].up = self.amplitudes[x - 1].up;
        }
        self.amplitudes[0].up = last;
    }

    /// In-place T↓: the down component moves one site to the left.
    pub fn shift_down_in_place(&mut self) {
        let l = self.lattice_size();
        let first = self.amplitudes[0].down;
        for x in 0..l - 1 {
            self.amplitudes[x].down = self.amplitudes[x + 1].down;
        }
        self.amplitudes[l - 1].down = first;
    }

    fn check_normalized(&self) -> Result<(), WalkError> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() > NORM_TOL || !n.is_finite() {
            return Err(WalkError::NotNormalized { norm_sqr: n });
        }
        Ok(())
    }
}

pub fn localized_state(x0: usize, spin: SpinState, lattice_size: usize) -> Result<SpinorField, WalkError> {
    if x0 >= lattice_size {
        return Err(WalkError::SiteOutOfRange { site: x0, size: lattice_size });
    }
    let n = spin.norm_sqr();
    if (n - 1.0).abs() > NORM_TOL {
        return Err(WalkError::NotNormalized { norm_sqr: n });
    }
    let mut amps = vec![SpinState::default(); lattice_size];
    amps[x0] = spin;
    SpinorField::from_amplitudes(amps, x0)
}

pub fn shift_up(field: &SpinorField) -> SpinorField {
    let mut out = field.clone();
    out.shift_up_in_place();
    out
}

pub fn shift_down(field: &SpinorField) -> SpinorField {
    let mut out = field.clone();
    out.shift_down_in_place();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Frame {
    #[default]
    Standard,
    /// R_y(θ1/2) at both ends of the step instead of R_y(θ1) at the start.
    Symmetric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Protocol {
    /// θ2 is ignored and taken as zero.
    SingleStep,
    #[default]
    SplitStep,
}

/// Coin angles and frame; everything the one-step Bloch unitary depends on.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coins {
    pub theta1: f64,
    pub theta2: f64,
    pub frame: Frame,
}

impl Coins {
    pub fn new(theta1: f64, theta2: f64) -> Self {
        Self { theta1, theta2, frame: Frame::Standard }
    }

    pub fn single_step(theta1: f64) -> Self {
        Self::new(theta1, 0.0)
    }

    pub fn with_frame(self, frame: Frame) -> Self {
        Self { frame, ..self }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WalkParams {
    pub theta1: f64,
    pub theta2: f64,
    pub steps: usize,
    pub kick: f64,
    pub traversals: usize,
    pub frame: Frame,
    pub protocol: Protocol,
}

impl WalkParams {
    /// Split-step walk with the full-zone kick φ = 2π/N and one traversal.
    pub fn split_step(theta1: f64, theta2: f64, steps: usize) -> Self {
        Self {
            theta1,
            theta2,
            steps,
            kick: 2.0 * PI / steps.max(1) as f64,
            traversals: 1,
            frame: Frame::Standard,
            protocol: Protocol::SplitStep,
        }
    }

    pub fn single_step(theta1: f64, steps: usize) -> Self {
        Self { protocol: Protocol::SingleStep, ..Self::split_step(theta1, 0.0, steps) }
    }

    pub fn with_kick(self, kick: f64) -> Self {
        Self { kick, ..self }
    }

    pub fn with_traversals(self, traversals: usize) -> Self {
        Self { traversals, ..self }
    }

    pub fn with_frame(self, frame: Frame) -> Self {
        Self { frame, ..self }
    }

    pub fn effective_theta2(&self) -> f64 {
        match self.protocol {
            Protocol::SingleStep => 0.0,
            Protocol::SplitStep => self.theta2,
        }
    }

    pub fn coins(&self) -> Coins {
        Coins { theta1: self.theta1, theta2: self.effective_theta2(), frame: self.frame }
    }

    pub fn total_steps(&self) -> usize {
        self.steps * self.traversals
    }

    /// True when the kicks sweep whole Brillouin zones.
    pub fn is_full_zone(&self) -> bool {
        let sweep = self.kick * self.total_steps() as f64 / (2.0 * PI);
        (sweep - sweep.round()).abs() < 1e-9 && sweep.round() != 0.0
    }

    /// Minimum ring size that keeps the light cone from wrapping.
    pub fn required_lattice_size(&self) -> usize {
        2 * self.total_steps() + 2
    }

    pub fn validate(&self) -> Result<(), WalkError> {
        if !(self.theta1.is_finite() && self.theta2.is_finite() && self.kick.is_finite()) {
            return Err(WalkError::InvalidParams("angles must be finite".into()));
        }
        if self.steps == 0 {
            return Err(WalkError::InvalidParams("steps must be positive".into()));
        }
        if self.traversals == 0 {
            return Err(WalkError::InvalidParams("traversals must be positive".into()));
        }
        Ok(())
    }
}

/// Applies step m of the Bloch-oscillating walk in place (no checks).
fn step_in_place(field: &mut SpinorField, params: &WalkParams, m: usize) {
    let kick = coin_rotation(Axis::Z, -(m as f64) * params.kick);
    let first = match params.frame {
        Frame::Standard => coin_rotation(Axis::Y, params.theta1),
        Frame::Symmetric => coin_rotation(Axis::Y, 0.5 * params.theta1),
    };
    field.apply_coin(&(kick * first));
    field.shift_up_in_place();
    field.apply_coin(&(kick * coin_rotation(Axis::Y, params.effective_theta2())));
    field.shift_down_in_place();
    if params.frame == Frame::Symmetric {
        field.apply_coin(&coin_rotation(Axis::Y, 0.5 * params.theta1));
    }
}

/// T↓ R_z(−mφ) R_y(θ2) T↑ R_z(−mφ) R_y(θ1) applied to `field`.
pub fn bloch_step(field: &SpinorField, params: &WalkParams, m: usize) -> Result<SpinorField, WalkError> {
    params.validate()?;
    field.check_normalized()?;
    let mut out = field.clone();
    step_in_place(&mut out, params, m);
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub step: usize,
    pub distribution: Vec<f64>,
    pub spin_populations: [f64; 2],
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    /// Step 0 is the initial state; step m follows m applications.
    pub snapshots: Vec<Snapshot>,
    pub final_state: SpinorField,
}

fn snapshot(field: &SpinorField, step: usize) -> Snapshot {
    Snapshot { step, distribution: field.position_distribution(), spin_populations: field.spin_populations() }
}

/// Runs m = 0 .. N·traversals − 1, refusing lattices small enough for the
/// light cone to wrap around.
pub fn run_walk(initial: &SpinorField, params: &WalkParams) -> Result<Trajectory, WalkError> {
    let required = params.required_lattice_size();
    if initial.lattice_size() < required {
        return Err(WalkError::LatticeTooSmall { required, actual: initial.lattice_size() });
    }
    run_walk_on_ring(initial, params)
}

/// Same as [`run_walk`] but lets amplitudes wrap around the ring, for
/// systems that are periodic by construction.
pub fn run_walk_on_ring(initial: &SpinorField, params: &WalkParams) -> Result<Trajectory, WalkError> {
    params.validate()?;
    initial.check_normalized()?;
    let total = params.total_steps();
    let mut field = initial.clone();
    let mut snapshots = Vec::with_capacity(total + 1);
    snapshots.push(snapshot(&field, 0));
    for m in 0..total {
        step_in_place(&mut field, params, m);
        snapshots.push(snapshot(&field, m + 1));
    }
    Ok(Trajectory { snapshots, final_state: field })
}

/// ⟨a|b⟩
pub fn overlap(a: &SpinorField, b: &SpinorField) -> Result<C64, WalkError> {
    if a.lattice_size() != b.lattice_size() {
        return Err(WalkError::SizeMismatch { left: a.lattice_size(), right: b.lattice_size() });
    }
    Ok(a.amplitudes.iter().zip(&b.amplitudes).map(|(x, y)| x.inner(y)).sum())
}

pub fn overlap_fidelity(a: &SpinorField, b: &SpinorField) -> Result<f64, WalkError> {
    Ok(overlap(a, b)?.norm_sqr())
}
