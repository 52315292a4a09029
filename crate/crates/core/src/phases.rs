//! Phase bookkeeping along the kicked momentum path k_m = k0 + mφ, the exact
//! per-momentum evolution it approximates, refocusing fidelities,
//! Landau-Zener leakage and the single-step revival check.
//!
//! Sign conventions: the "+" band is the e^{-iε} eigenvector, so over a
//! traversal it acquires the phase φ_geo − φ_dyn,+ where φ_dyn,+ = Σ ε > 0.
//! `geometric_phase` reports the phase actually acquired by the band state.

use std::f64::consts::PI;

use rayon::prelude::*;
use thiserror::Error;

use crate::angle::wrap;
use crate::spectral::{self, align_phase, bloch_unitary, diagonalize, gap_of, Eigen, SpectralError, GAP_TOL};
use crate::spin::{SpinMatrix, SpinState};
use crate::walk::{self, localized_state, Coins, Frame, SpinorField, WalkError, WalkParams};
use crate::C64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PhaseError {
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("band is gapless along the path (gap {gap:.3e} at k = {k:.6})")]
    Gapless { gap: f64, k: f64 },
    #[error("revival needs an even m for one traversal or an odd m for two (got m = {m}, traversals = {traversals})")]
    ParityMismatch { m: usize, traversals: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BandSign {
    Plus,
    Minus,
}

impl BandSign {
    fn sign(self) -> f64 {
        match self {
            BandSign::Plus => 1.0,
            BandSign::Minus => -1.0,
        }
    }

    fn vector(self, e: &Eigen) -> SpinState {
        match self {
            BandSign::Plus => e.v_plus,
            BandSign::Minus => e.v_minus,
        }
    }
}

/// Momenta k0 + mφ for m = 0 .. N·traversals − 1.
pub fn momentum_path(k0: f64, params: &WalkParams) -> Vec<f64> {
    (0..params.total_steps()).map(|m| k0 + m as f64 * params.kick).collect()
}

fn path_eigen(k0: f64, params: &WalkParams, extra: usize) -> Vec<Eigen> {
    let coins = params.coins();
    (0..params.total_steps() + extra).map(|m| diagonalize(&bloch_unitary(k0 + m as f64 * params.kick, coins))).collect()
}

fn path_gap(k0: f64, params: &WalkParams, eig: &[Eigen]) -> (f64, f64) {
    eig.iter()
        .enumerate()
        .map(|(m, e)| (gap_of(e.epsilon), k0 + m as f64 * params.kick))
        .fold((f64::INFINITY, 0.0), |acc, x| if x.0 < acc.0 { x } else { acc })
}

fn require_gap(k0: f64, params: &WalkParams, eig: &[Eigen]) -> Result<(), PhaseError> {
    let (gap, k) = path_gap(k0, params, eig);
    if gap <= GAP_TOL {
        return Err(PhaseError::Gapless { gap, k });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DynamicalPhase {
    pub value: f64,
    pub min_gap: f64,
    /// Set when the path passes within the gap tolerance of a band touching;
    /// the value is still the formal sum.
    pub near_gap_closure: bool,
}

/// ±Σ_{m=0}^{N·traversals−1} ε(k0 + mφ).
pub fn dynamical_phase(k0: f64, params: &WalkParams, band: BandSign) -> DynamicalPhase {
    let eig = path_eigen(k0, params, 0);
    let sum: f64 = eig.iter().map(|e| e.epsilon).sum();
    let (min_gap, _) = path_gap(k0, params, &eig);
    DynamicalPhase { value: band.sign() * sum, min_gap, near_gap_closure: min_gap <= GAP_TOL }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeometricPhase {
    /// In (−π, π].
    pub value: f64,
    /// False when the kicks do not sweep whole zones; the value is then
    /// gauge dependent.
    pub closed: bool,
}

/// Pancharatnam phase −arg Π_m ⟨v(k_m)|v(k_{m+1})⟩ along the path.
pub fn geometric_phase(k0: f64, params: &WalkParams, band: BandSign) -> Result<GeometricPhase, PhaseError> {
    geometric_phase_with_gauge(k0, params, band, |_| 0.0)
}

/// As [`geometric_phase`], with sample m's eigenvector multiplied by
/// e^{i·gauge(m)} before the overlaps are taken.
pub fn geometric_phase_with_gauge(
    k0: f64,
    params: &WalkParams,
    band: BandSign,
    gauge: impl Fn(usize) -> f64,
) -> Result<GeometricPhase, PhaseError> {
    let closed = params.is_full_zone();
    let eig = path_eigen(k0, params, usize::from(!closed));
    require_gap(k0, params, &eig)?;
    let vs: Vec<SpinState> =
        eig.iter().enumerate().map(|(m, e)| band.vector(e).scale(C64::from_polar(1.0, gauge(m)))).collect();
    let total = params.total_steps();
    let mut prod = C64::new(1.0, 0.0);
    for m in 0..total {
        let next = if closed { (m + 1) % total } else { m + 1 };
        prod *= vs[m].inner(&vs[next]);
        prod /= prod.norm();
    }
    Ok(GeometricPhase { value: wrap(-prod.arg()), closed })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseDecomposition {
    pub k0: f64,
    /// Σ ε along the path; the lower band carries the negation.
    pub phi_dyn_plus: f64,
    /// Geometric phase of the + band, in (−π, π].
    pub phi_geo: f64,
    /// Phase acquired by the + band, φ_geo − φ_dyn,+, in (−π, π].
    pub phi_total: f64,
    pub steps: usize,
    pub kick: f64,
    pub near_gap_closure: bool,
}

pub fn decompose(k0: f64, params: &WalkParams) -> Result<PhaseDecomposition, PhaseError> {
    let dynamical = dynamical_phase(k0, params, BandSign::Plus);
    let geo = geometric_phase(k0, params, BandSign::Plus)?;
    Ok(PhaseDecomposition {
        k0,
        phi_dyn_plus: dynamical.value,
        phi_geo: geo.value,
        phi_total: wrap(geo.value - dynamical.value),
        steps: params.total_steps(),
        kick: params.kick,
        near_gap_closure: dynamical.near_gap_closure,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BandAmplitudes {
    pub k: f64,
    /// Amplitude on the + band.
    pub c: C64,
    /// Amplitude on the − band.
    pub d: C64,
}

impl BandAmplitudes {
    pub fn of(k: f64, spin: SpinState, coins: Coins) -> Self {
        let e = diagonalize(&bloch_unitary(k, coins));
        Self { k, c: e.v_plus.inner(&spin), d: e.v_minus.inner(&spin) }
    }
}

/// Π_{m} U(k0 + mφ), later steps on the left.
pub fn evolution_operator(k0: f64, params: &WalkParams) -> SpinMatrix {
    let coins = params.coins();
    momentum_path(k0, params).into_iter().fold(SpinMatrix::identity(), |acc, k| bloch_unitary(k, coins).matrix * acc)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KEvolution {
    pub final_spin: SpinState,
    pub initial_amplitudes: BandAmplitudes,
    /// Band decomposition at k0 of the final spinor.
    pub final_amplitudes: BandAmplitudes,
    /// ⟨ψ0|ψf⟩
    pub overlap: C64,
    /// arg⟨ψ0|ψf⟩
    pub refocused_phase: f64,
}

pub fn exact_k_evolution(k0: f64, initial: SpinState, params: &WalkParams) -> KEvolution {
    let coins = params.coins();
    let final_spin = evolution_operator(k0, params) * initial;
    let overlap = initial.inner(&final_spin);
    KEvolution {
        final_spin,
        initial_amplitudes: BandAmplitudes::of(k0, initial, coins),
        final_amplitudes: BandAmplitudes::of(k0, final_spin, coins),
        overlap,
        refocused_phase: overlap.arg(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LzResult {
    pub k0: f64,
    pub p_model: f64,
    pub p_exact: f64,
}

/// Eigenvector at `k` with its phase aligned to `reference`.
fn aligned(k: f64, coins: Coins, band: BandSign, reference: &SpinState) -> SpinState {
    align_phase(reference, band.vector(&diagonalize(&bloch_unitary(k, coins))))
}

/// First-order interband leakage over one sweep, and the exact value from
/// starting in the lower band at k0.
pub fn lz_probability(k0: f64, params: &WalkParams) -> Result<LzResult, PhaseError> {
    let coins = params.coins();
    let total = params.total_steps();
    let phi = params.kick;
    let eig = path_eigen(k0, params, 1);
    require_gap(k0, params, &eig)?;

    // Parallel transport both bands along the path.
    let mut plus = vec![eig[0].v_plus];
    let mut minus = vec![eig[0].v_minus];
    for e in &eig[1..] {
        plus.push(align_phase(plus.last().unwrap(), e.v_plus));
        minus.push(align_phase(minus.last().unwrap(), e.v_minus));
    }

    let h = phi / 10.0;
    let mut cumulative = eig[0].epsilon;
    let mut sum = C64::new(0.0, 0.0);
    for m in 1..=total {
        let k = k0 + m as f64 * phi;
        cumulative += eig[m].epsilon;
        let fwd = aligned(k + h, coins, BandSign::Plus, &plus[m]);
        let bwd = aligned(k - h, coins, BandSign::Plus, &plus[m]);
        let deriv = SpinState::new((fwd.up - bwd.up) / (2.0 * h), (fwd.down - bwd.down) / (2.0 * h));
        let coupling = minus[m].inner(&deriv);
        sum += coupling * C64::from_polar(1.0, -2.0 * cumulative);
    }
    let p_model = phi * phi * sum.norm_sqr();

    let psi = evolution_operator(k0, params) * eig[0].v_minus;
    let p_exact = eig[0].v_plus.inner(&psi).norm_sqr();
    Ok(LzResult { k0, p_model, p_exact })
}

/// |⟨ψ0|ψf⟩|² from the position-space walk.
pub fn refocusing_fidelity_exact(params: &WalkParams, initial: &SpinorField) -> Result<f64, PhaseError> {
    let trajectory = walk::run_walk(initial, params)?;
    Ok(walk::overlap_fidelity(initial, &trajectory.final_state)?)
}

/// cos²(N·traversals·ε̄).
pub fn refocusing_fidelity_model(params: &WalkParams, n_k: usize) -> Result<f64, PhaseError> {
    let mean = spectral::mean_quasienergy(params.coins(), n_k)?;
    Ok((params.total_steps() as f64 * mean).cos().powi(2))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RevivalCheck {
    pub deviation: f64,
    pub bound: f64,
    pub predicted_phase: f64,
    pub steps: usize,
}

/// Deviation of the m·traversals-step single-step product (Φ = 2π/m) from
/// the predicted multiple of the identity, maximised over a k grid.
pub fn revival_deviation(theta: f64, m: usize, traversals: usize, n_k: usize) -> Result<RevivalCheck, PhaseError> {
    let (predicted_phase, exponent) = match (traversals, m % 2) {
        (1, 0) if m > 0 => (if (m / 2) % 2 == 1 { 1.0 } else { -1.0 }, m / 2),
        (2, 1) => (-1.0, m),
        _ => return Err(PhaseError::ParityMismatch { m, traversals }),
    };
    if n_k < 64 {
        return Err(SpectralError::GridTooCoarse { minimum: 64, got: n_k }.into());
    }
    let params = WalkParams::single_step(theta, m).with_traversals(traversals);
    let target = SpinMatrix::identity().scale(C64::new(predicted_phase, 0.0));
    let deviation = spectral::k_grid(n_k)
        .par_iter()
        .map(|&k| (evolution_operator(k, &params) - target).op_norm())
        .reduce(|| 0.0, f64::max);
    let bound = 2.0 * (0.5 * theta).cos().abs().powi(exponent as i32);
    Ok(RevivalCheck { deviation, bound, predicted_phase, steps: params.total_steps() })
}

/// Cell-centred grid over a rectangle of (θ1, θ2).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseGrid {
    pub theta1_range: (f64, f64),
    pub theta2_range: (f64, f64),
    pub n1: usize,
    pub n2: usize,
}

impl PhaseGrid {
    pub fn square(n: usize) -> Self {
        Self { theta1_range: (0.0, PI), theta2_range: (0.0, PI), n1: n, n2: n }
    }

    fn coord(range: (f64, f64), n: usize, i: usize) -> f64 {
        range.0 + (i as f64 + 0.5) * (range.1 - range.0) / n as f64
    }

    pub fn theta1(&self, i: usize) -> f64 {
        Self::coord(self.theta1_range, self.n1, i)
    }

    pub fn theta2(&self, j: usize) -> f64 {
        Self::coord(self.theta2_range, self.n2, j)
    }

    /// Points with θ1 as the slow index.
    pub fn points(&self) -> Vec<(f64, f64)> {
        (0..self.n1)
            .flat_map(|i| (0..self.n2).map(move |j| (i, j)))
            .map(|(i, j)| (self.theta1(i), self.theta2(j)))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseDiagramOptions {
    pub steps: usize,
    pub traversals: usize,
    pub frame: Frame,
    pub n_k_topology: usize,
    pub n_k_mean: usize,
}

impl PhaseDiagramOptions {
    pub fn new(steps: usize) -> Self {
        Self { steps, traversals: 1, frame: Frame::Standard, n_k_topology: 1024, n_k_mean: 4096 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhasePoint {
    pub theta1: f64,
    pub theta2: f64,
    pub f_exact: Option<f64>,
    pub f_model: Option<f64>,
    pub winding: Option<i64>,
    pub min_gap: Option<f64>,
    /// Failures at this point; they do not abort the sweep.
    pub errors: Vec<String>,
}

pub fn phase_point(theta1: f64, theta2: f64, opts: &PhaseDiagramOptions) -> PhasePoint {
    let params =
        WalkParams::split_step(theta1, theta2, opts.steps).with_traversals(opts.traversals).with_frame(opts.frame);
    let mut errors = Vec::new();
    fn keep<T>(errors: &mut Vec<String>, r: Result<T, PhaseError>, what: &str) -> Option<T> {
        r.map_err(|e| errors.push(format!("{what}: {e}"))).ok()
    }
    let size = params.required_lattice_size();
    let f_exact = keep(
        &mut errors,
        localized_state(size / 2, SpinState::up(), size)
            .map_err(PhaseError::from)
            .and_then(|init| refocusing_fidelity_exact(&params, &init)),
        "f_exact",
    );
    let f_model = keep(&mut errors, refocusing_fidelity_model(&params, opts.n_k_mean), "f_model");
    let band = spectral::band_structure(params.coins(), opts.n_k_topology).map_err(PhaseError::from);
    let min_gap = keep(&mut errors, band.clone().map(|b| b.min_gap()), "min_gap");
    let winding =
        keep(&mut errors, band.and_then(|b| spectral::winding_number(&b).map_err(PhaseError::from)), "winding");
    PhasePoint { theta1, theta2, f_exact, f_model, winding, min_gap, errors }
}

/// Evaluates every grid point in parallel; output order follows
/// [`PhaseGrid::points`].
pub fn phase_diagram(grid: &PhaseGrid, opts: &PhaseDiagramOptions) -> Vec<PhasePoint> {
    grid.points().par_iter().map(|&(t1, t2)| phase_point(t1, t2, opts)).collect()
}
