//! Momentum-space picture: per-k Bloch unitaries, quasi-energy bands, spinor
//! textures and their winding.

use std::f64::consts::PI;

use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use rayon::prelude::*;
use thiserror::Error;

use crate::angle::wrap as wrap_angle;
use crate::spin::{coin_rotation, Axis, SpinMatrix, SpinState};
use crate::walk::{Coins, Frame};
use crate::C64;

/// Bands closer than this to quasi-energy 0 or π have no defined topology.
pub const GAP_TOL: f64 = 1e-3;
/// |sin ε| below this marks a degenerate sample.
pub const DEGENERACY_TOL: f64 = 1e-12;
pub const WINDING_RESIDUAL_TOL: f64 = 0.01;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("momentum grid of {got} points is below the minimum of {minimum}")]
    GridTooCoarse { minimum: usize, got: usize },
    #[error("band is gapless (minimum gap {gap:.3e} at k = {k:.6}); topology is undefined")]
    Gapless { gap: f64, k: f64 },
    #[error("spinor texture does not span a plane (second eigenvalue ratio {ratio:.3e})")]
    DegenerateTexture { ratio: f64 },
    #[error("accumulated winding angle is {residual:.3e} rad away from a multiple of 2π")]
    WindingResidual { residual: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochMatrix {
    pub k: f64,
    pub matrix: SpinMatrix,
}

/// T↓(k) R_y(θ2) T↑(k) R_y(θ1) with T↑(k) = diag(1, e^{-ik}) and
/// T↓(k) = diag(e^{ik}, 1); the symmetric frame conjugates by R_y(θ1/2).
pub fn bloch_unitary(k: f64, coins: Coins) -> BlochMatrix {
    let one = C64::new(1.0, 0.0);
    let t_up = SpinMatrix::diag(one, C64::from_polar(1.0, -k));
    let t_down = SpinMatrix::diag(C64::from_polar(1.0, k), one);
    let core = t_down * coin_rotation(Axis::Y, coins.theta2) * t_up;
    let matrix = match coins.frame {
        Frame::Standard => core * coin_rotation(Axis::Y, coins.theta1),
        Frame::Symmetric => {
            let half = coin_rotation(Axis::Y, 0.5 * coins.theta1);
            half * core * half
        }
    };
    BlochMatrix { k, matrix }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Eigen {
    /// Quasi-energy in [0, π]; eigenvalues are e^{∓iε}.
    pub epsilon: f64,
    /// Bloch vector of the e^{-iε} ("+") eigenvector.
    pub n_plus: [f64; 3],
    pub v_plus: SpinState,
    pub v_minus: SpinState,
    pub degenerate: bool,
}

/// Splits a unit-determinant unitary as e^{-iε n·σ}.
pub fn diagonalize(bm: &BlochMatrix) -> Eigen {
    let u = &bm.matrix;
    let cos_eps = 0.5 * u.trace().re;
    let i = C64::new(0.0, 1.0);
    let mut a = [0.0; 3];
    for (j, aj) in a.iter_mut().enumerate() {
        *aj = 0.5 * (i * (*u * SpinMatrix::pauli(j)).trace()).re;
    }
    let sin_eps = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
    let epsilon = sin_eps.atan2(cos_eps);
    let degenerate = sin_eps < DEGENERACY_TOL;
    let n_plus = if degenerate { [0.0, 0.0, 1.0] } else { [a[0] / sin_eps, a[1] / sin_eps, a[2] / sin_eps] };
    let n_minus = [-n_plus[0], -n_plus[1], -n_plus[2]];
    Eigen {
        epsilon,
        n_plus,
        v_plus: SpinState::from_bloch_vector(n_plus),
        v_minus: SpinState::from_bloch_vector(n_minus),
        degenerate,
    }
}

pub fn quasienergy(k: f64, coins: Coins) -> f64 {
    diagonalize(&bloch_unitary(k, coins)).epsilon
}

/// Distance of a quasi-energy from the closures at 0 and π.
pub fn gap_of(epsilon: f64) -> f64 {
    epsilon.min(PI - epsilon)
}

/// k_j = −π + 2πj/N_k.
pub fn k_grid(n_k: usize) -> Vec<f64> {
    (0..n_k).map(|j| -PI + 2.0 * PI * j as f64 / n_k as f64).collect()
}

/// Phase-aligns `v` to `prev` so that ⟨prev|v⟩ is real and positive.
pub fn align_phase(prev: &SpinState, v: SpinState) -> SpinState {
    let ov = prev.inner(&v);
    if ov.norm() > 0.0 {
        v.scale(ov.conj() / ov.norm())
    } else {
        v
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlochBand {
    pub coins: Coins,
    pub k_grid: Vec<f64>,
    pub epsilon: Vec<f64>,
    pub n_plus: Vec<[f64; 3]>,
    pub n_minus: Vec<[f64; 3]>,
    /// Eigenvectors, parallel transported along the grid.
    pub v_plus: Vec<SpinState>,
    pub v_minus: Vec<SpinState>,
    pub degenerate: Vec<bool>,
}

impl BlochBand {
    pub fn len(&self) -> usize {
        self.k_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k_grid.is_empty()
    }

    /// (gap, k) at the sample closest to a band touching.
    pub fn min_gap_location(&self) -> (f64, f64) {
        self.epsilon.iter().zip(&self.k_grid).map(|(&e, &k)| (gap_of(e), k)).fold((f64::INFINITY, 0.0), |acc, x| {
            if x.0 < acc.0 {
                x
            } else {
                acc
            }
        })
    }

    pub fn min_gap(&self) -> f64 {
        self.min_gap_location().0
    }
}

fn check_grid(n_k: usize, minimum: usize) -> Result<(), SpectralError> {
    if n_k < minimum {
        return Err(SpectralError::GridTooCoarse { minimum, got: n_k });
    }
    Ok(())
}

pub fn band_structure(coins: Coins, n_k: usize) -> Result<BlochBand, SpectralError> {
    check_grid(n_k, 64)?;
    let k_grid = k_grid(n_k);
    let eig: Vec<Eigen> = k_grid.par_iter().map(|&k| diagonalize(&bloch_unitary(k, coins))).collect();
    let mut v_plus: Vec<SpinState> = Vec::with_capacity(n_k);
    let mut v_minus: Vec<SpinState> = Vec::with_capacity(n_k);
    for e in &eig {
        let (p, m) = match (v_plus.last(), v_minus.last()) {
            (Some(pp), Some(pm)) => (align_phase(pp, e.v_plus), align_phase(pm, e.v_minus)),
            _ => (e.v_plus, e.v_minus),
        };
        v_plus.push(p);
        v_minus.push(m);
    }
    Ok(BlochBand {
        coins,
        epsilon: eig.iter().map(|e| e.epsilon).collect(),
        n_plus: eig.iter().map(|e| e.n_plus).collect(),
        n_minus: eig.iter().map(|e| e.n_plus.map(|c| -c)).collect(),
        degenerate: eig.iter().map(|e| e.degenerate).collect(),
        k_grid,
        v_plus,
        v_minus,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChiralAxis {
    pub axis: [f64; 3],
    /// max_k |n(k)·A|
    pub residual: f64,
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Least-squares normal of the plane containing the texture n₊(k).
pub fn chiral_axis(band: &BlochBand) -> Result<ChiralAxis, SpectralError> {
    let mut scatter = Matrix3::<f64>::zeros();
    for (n, &deg) in band.n_plus.iter().zip(&band.degenerate) {
        if !deg {
            let v = Vector3::from(*n);
            scatter += v * v.transpose();
        }
    }
    let eig = SymmetricEigen::new(scatter);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let total: f64 = eig.eigenvalues.iter().sum();
    let ratio = if total > 0.0 { eig.eigenvalues[order[1]] / total } else { 0.0 };
    if ratio < 1e-6 {
        return Err(SpectralError::DegenerateTexture { ratio });
    }
    let col = eig.eigenvectors.column(order[0]);
    let mut axis = [col[0], col[1], col[2]];
    let norm = dot(&axis, &axis).sqrt();
    axis = axis.map(|c| c / norm);
    // Sign convention: the largest component is positive.
    let lead = axis.iter().copied().fold(0.0f64, |acc, c| if c.abs() > acc.abs() { c } else { acc });
    if lead < 0.0 {
        axis = axis.map(|c| -c);
    }
    let residual = band
        .n_plus
        .iter()
        .zip(&band.degenerate)
        .filter(|(_, &d)| !d)
        .map(|(n, _)| dot(n, &axis).abs())
        .fold(0.0, f64::max);
    Ok(ChiralAxis { axis, residual })
}

/// Total signed angle swept by the texture projected on the plane orthogonal
/// to `axis`, including the closing segment from the last sample to the first.
pub fn winding_angle(band: &BlochBand, axis: &[f64; 3]) -> f64 {
    // Orthonormal basis (e1, e2) with e1 × e2 = axis.
    let helper = if axis[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let d = dot(&helper, axis);
    let mut e1 = [helper[0] - d * axis[0], helper[1] - d * axis[1], helper[2] - d * axis[2]];
    let n1 = dot(&e1, &e1).sqrt();
    e1 = e1.map(|c| c / n1);
    let e2 = [axis[1] * e1[2] - axis[2] * e1[1], axis[2] * e1[0] - axis[0] * e1[2], axis[0] * e1[1] - axis[1] * e1[0]];
    let angles: Vec<f64> = band.n_plus.iter().map(|n| dot(n, &e2).atan2(dot(n, &e1))).collect();
    let len = angles.len();
    (0..len).map(|j| wrap_angle(angles[(j + 1) % len] - angles[j])).sum()
}

/// Number of times the texture encircles the chiral axis. The orientation
/// of the axis is a convention, so the count is reported as non-negative.
pub fn winding_number(band: &BlochBand) -> Result<i64, SpectralError> {
    let (gap, k) = band.min_gap_location();
    if gap <= GAP_TOL {
        return Err(SpectralError::Gapless { gap, k });
    }
    let axis = chiral_axis(band)?;
    let total = winding_angle(band, &axis.axis);
    let w = (total / (2.0 * PI)).round();
    let residual = (total - 2.0 * PI * w).abs();
    if residual >= WINDING_RESIDUAL_TOL {
        return Err(SpectralError::WindingResidual { residual });
    }
    Ok((w as i64).abs())
}

/// Mean of ε over the periodic grid (the trapezoid rule on [−π, π)).
pub fn mean_quasienergy(coins: Coins, n_k: usize) -> Result<f64, SpectralError> {
    check_grid(n_k, 256)?;
    // Collect first so the summation order does not depend on the thread count.
    let eps: Vec<f64> = k_grid(n_k).par_iter().map(|&k| quasienergy(k, coins)).collect();
    Ok(eps.iter().sum::<f64>() / n_k as f64)
}

pub fn min_gap(coins: Coins, n_k: usize) -> Result<f64, SpectralError> {
    check_grid(n_k, 512)?;
    Ok(k_grid(n_k).par_iter().map(|&k| gap_of(quasienergy(k, coins))).reduce(|| f64::INFINITY, f64::min))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BandTopology {
    pub winding: i64,
    pub chiral_axis: ChiralAxis,
    pub min_gap: f64,
    pub mean_quasienergy: f64,
}

pub fn band_topology(coins: Coins, n_k: usize) -> Result<BandTopology, SpectralError> {
    let band = band_structure(coins, n_k)?;
    let winding = winding_number(&band)?;
    Ok(BandTopology {
        winding,
        chiral_axis: chiral_axis(&band)?,
        min_gap: band.min_gap(),
        mean_quasienergy: band.epsilon.iter().sum::<f64>() / n_k as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn split(t1: f64, t2: f64) -> Coins {
        Coins::new(t1, t2)
    }

    /// Berry phase of the + band around the zone, computed from the
    /// overlaps of independently diagonalized eigenvectors.
    fn zak_phase(coins: Coins, n_k: usize) -> f64 {
        let vs: Vec<SpinState> = k_grid(n_k).iter().map(|&k| diagonalize(&bloch_unitary(k, coins)).v_plus).collect();
        let mut prod = C64::new(1.0, 0.0);
        for j in 0..n_k {
            prod *= vs[j].inner(&vs[(j + 1) % n_k]);
        }
        -prod.arg()
    }

    #[test]
    fn bare_translations() {
        let u = bloch_unitary(0.0, split(0.0, 0.0)).matrix;
        assert!(u.max_abs_diff(&SpinMatrix::identity()) < 1e-15);
        let k = 0.7;
        let u = bloch_unitary(k, split(0.0, 0.0)).matrix;
        let expect = SpinMatrix::diag(C64::from_polar(1.0, k), C64::from_polar(1.0, -k));
        assert!(u.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn bare_dispersion_is_abs_k() {
        for k in k_grid(128) {
            let e = quasienergy(k, split(0.0, 0.0));
            assert_abs_diff_eq!(e, k.abs(), epsilon = 1e-12);
        }
    }

    #[test]
    fn single_step_dispersion() {
        for t in [PI / 4.0, PI / 2.0, 3.0 * PI / 4.0] {
            for k in k_grid(1024) {
                let expect = (k.cos() * (t / 2.0).cos()).acos();
                assert_abs_diff_eq!(quasienergy(k, Coins::single_step(t)), expect, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn split_step_dispersion_closed_form() {
        // cos ε = cos(θ1/2)cos(θ2/2)cos k − sin(θ1/2)sin(θ2/2)
        let (t1, t2) = (0.9, 2.4);
        for k in k_grid(256) {
            let (s1, c1) = (t1 / 2.0f64).sin_cos();
            let (s2, c2) = (t2 / 2.0f64).sin_cos();
            let expect = (c1 * c2 * k.cos() - s1 * s2).acos();
            assert_abs_diff_eq!(quasienergy(k, split(t1, t2)), expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn eigenvectors_diagonalize() {
        let bm = bloch_unitary(0.4, split(1.0, 2.0));
        let e = diagonalize(&bm);
        let lhs = bm.matrix * e.v_plus;
        let rhs = e.v_plus.scale(C64::from_polar(1.0, -e.epsilon));
        assert!((lhs.up - rhs.up).norm() < 1e-13 && (lhs.down - rhs.down).norm() < 1e-13);
        let lhs = bm.matrix * e.v_minus;
        let rhs = e.v_minus.scale(C64::from_polar(1.0, e.epsilon));
        assert!((lhs.up - rhs.up).norm() < 1e-13 && (lhs.down - rhs.down).norm() < 1e-13);
        let b = e.v_plus.bloch_vector();
        for (bj, nj) in b.iter().zip(&e.n_plus) {
            assert_abs_diff_eq!(bj, nj, epsilon = 1e-13);
        }
    }

    #[test]
    fn degenerate_points_are_flagged() {
        let e = diagonalize(&bloch_unitary(0.0, split(0.0, 0.0)));
        assert!(e.degenerate);
        assert_eq!(e.epsilon, 0.0);
        let e = diagonalize(&bloch_unitary(0.3, split(0.0, 0.0)));
        assert!(!e.degenerate);
    }

    #[test]
    fn gapped_examples() {
        assert!(min_gap(split(PI / 4.0, 3.0 * PI / 4.0), 512).unwrap() > 0.1);
        assert!(min_gap(split(PI / 2.0, PI / 2.0), 512).unwrap() < 2.0 * PI / 512.0);
        assert_eq!(min_gap(split(0.0, 0.0), 512).unwrap(), 0.0);
        assert!(matches!(min_gap(split(0.1, 0.2), 100), Err(SpectralError::GridTooCoarse { .. })));
    }

    #[test]
    fn single_step_gap_grows_with_theta() {
        let gaps: Vec<f64> =
            (1..=20).map(|j| min_gap(Coins::single_step(PI * j as f64 / 20.0), 512).unwrap()).collect();
        assert!(gaps.windows(2).all(|w| w[1] >= w[0] - 1e-12));
    }

    #[test]
    fn band_invariants() {
        let band = band_structure(split(PI / 4.0, 3.0 * PI / 4.0), 256).unwrap();
        for j in 0..band.len() {
            let (p, m) = (band.n_plus[j], band.n_minus[j]);
            assert_abs_diff_eq!(dot(&p, &m), -1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(dot(&p, &p), 1.0, epsilon = 1e-12);
        }
        for j in 0..band.len() - 1 {
            let ov = band.v_plus[j].inner(&band.v_plus[j + 1]);
            assert!(ov.im.abs() < 1e-12 && ov.re > 0.0);
            assert!((band.epsilon[j + 1] - band.epsilon[j]).abs() < PI * 10.0 / 256.0);
        }
        assert!(matches!(band_structure(split(0.1, 0.2), 32), Err(SpectralError::GridTooCoarse { .. })));
    }

    #[test]
    fn periodic_in_k() {
        let c = split(0.7, 2.2);
        let a = diagonalize(&bloch_unitary(-PI, c));
        let b = diagonalize(&bloch_unitary(PI, c));
        assert_abs_diff_eq!(a.epsilon, b.epsilon, epsilon = 1e-9);
        for j in 0..3 {
            assert_abs_diff_eq!(a.n_plus[j], b.n_plus[j], epsilon = 1e-9);
        }
    }

    #[test]
    fn textures_lie_on_great_circles_in_both_frames() {
        for (t1, t2) in [(PI / 4.0, 3.0 * PI / 4.0), (3.0 * PI / 4.0, PI / 4.0)] {
            for frame in [Frame::Symmetric, Frame::Standard] {
                let band = band_structure(split(t1, t2).with_frame(frame), 1024).unwrap();
                let axis = chiral_axis(&band).unwrap();
                assert!(axis.residual < 1e-8, "{t1} {t2} {frame:?}: {}", axis.residual);
                assert_abs_diff_eq!(dot(&axis.axis, &axis.axis), 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn flat_texture_has_no_axis() {
        let band = band_structure(split(0.0, 0.0), 256).unwrap();
        assert!(matches!(chiral_axis(&band), Err(SpectralError::DegenerateTexture { .. })));
    }

    #[test]
    fn gapless_band_has_no_winding() {
        let band = band_structure(split(PI / 2.0, PI / 2.0), 1024).unwrap();
        assert!(matches!(winding_number(&band), Err(SpectralError::Gapless { .. })));
    }

    #[test]
    fn single_step_walks_wind_once() {
        for t in [PI / 4.0, PI / 2.0, 3.0 * PI / 4.0] {
            let band = band_structure(Coins::single_step(t), 1024).unwrap();
            assert_eq!(winding_number(&band).unwrap(), 1);
        }
    }

    #[test]
    fn winding_is_constant_within_a_gapped_region() {
        // θ1 > θ2 is connected to the single-step line θ2 = 0 without closing the gap.
        for (t1, t2) in [(3.0 * PI / 4.0, PI / 4.0), (2.5, 0.3), (1.2, 1.0)] {
            let band = band_structure(split(t1, t2), 1024).unwrap();
            assert_eq!(winding_number(&band).unwrap(), 1, "({t1}, {t2})");
        }
        for (t1, t2) in [(PI / 4.0, 3.0 * PI / 4.0), (0.3, 2.5), (1.0, 1.2)] {
            let band = band_structure(split(t1, t2), 1024).unwrap();
            assert_eq!(winding_number(&band).unwrap(), 0, "({t1}, {t2})");
        }
    }

    #[test]
    fn winding_matches_zak_phase() {
        for (t1, t2) in [(PI / 4.0, 3.0 * PI / 4.0), (3.0 * PI / 4.0, PI / 4.0), (2.0, 0.5)] {
            for frame in [Frame::Standard, Frame::Symmetric] {
                let c = split(t1, t2).with_frame(frame);
                let w = winding_number(&band_structure(c, 1024).unwrap()).unwrap();
                let zak = zak_phase(c, 1024);
                let expected = PI * w as f64;
                let d = wrap_angle(zak - expected).abs();
                assert!(d < 1e-3, "({t1}, {t2}) {frame:?}: zak {zak} W {w}");
            }
        }
    }

    #[test]
    fn mean_quasienergy_examples() {
        for t in [0.3, PI / 2.0, 2.9] {
            let e = mean_quasienergy(Coins::single_step(t), 4096).unwrap();
            assert_abs_diff_eq!(e, PI / 2.0, epsilon = 1e-6);
        }
        assert_abs_diff_eq!(mean_quasienergy(split(0.0, 0.0), 4096).unwrap(), PI / 2.0, epsilon = 1e-12);
        assert!(matches!(mean_quasienergy(split(0.0, 0.0), 100), Err(SpectralError::GridTooCoarse { .. })));
    }

    #[test]
    fn mean_quasienergy_converges_at_second_order() {
        // Smooth periodic integrand: the error drops much faster than 1/N_k².
        let c = split(0.6, 2.0);
        let fine = mean_quasienergy(c, 8192).unwrap();
        let e1 = (mean_quasienergy(c, 256).unwrap() - fine).abs();
        let e2 = (mean_quasienergy(c, 512).unwrap() - fine).abs();
        assert!(e2 <= e1 / 4.0 + 1e-14);
    }

    #[test]
    fn topology_summary() {
        let t = band_topology(Coins::single_step(PI / 2.0), 1024).unwrap();
        assert_eq!(t.winding, 1);
        assert!(t.min_gap > 0.0 && t.min_gap <= PI / 2.0);
        assert_abs_diff_eq!(t.mean_quasienergy, PI / 2.0, epsilon = 1e-9);
    }

    proptest! {
        #[test]
        fn unit_determinant(k in -PI..PI, t1 in -PI..PI, t2 in -PI..PI, sym in any::<bool>()) {
            let frame = if sym { Frame::Symmetric } else { Frame::Standard };
            let u = bloch_unitary(k, split(t1, t2).with_frame(frame)).matrix;
            prop_assert!((u.det() - C64::new(1.0, 0.0)).norm() < 1e-12);
            prop_assert!(u.is_unitary(1e-12));
        }

        #[test]
        fn eigen_reconstruction(k in -PI..PI, t1 in 0.0f64..PI, t2 in 0.0f64..PI, sym in any::<bool>()) {
            let frame = if sym { Frame::Symmetric } else { Frame::Standard };
            let bm = bloch_unitary(k, split(t1, t2).with_frame(frame));
            let e = diagonalize(&bm);
            let rebuilt = SpinMatrix::exp_pauli(e.epsilon, e.n_plus);
            prop_assert!(rebuilt.max_abs_diff(&bm.matrix) < 1e-10);
        }

        #[test]
        fn winding_ignores_eigenvector_phases(
            t1 in 0.1f64..3.0, t2 in 0.1f64..3.0, seed in any::<u64>()
        ) {
            prop_assume!((t1 - t2).abs() > 0.05);
            let band = band_structure(split(t1, t2), 256).unwrap();
            let w = winding_number(&band).unwrap();
            let mut regauged = band.clone();
            let mut state = seed;
            for (v, n) in regauged.v_plus.iter_mut().zip(regauged.n_plus.iter_mut()) {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let phase = (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 * PI;
                *v = v.scale(C64::from_polar(1.0, phase));
                *n = v.bloch_vector();
            }
            prop_assert_eq!(winding_number(&regauged).unwrap(), w);
        }

        #[test]
        fn winding_converged_in_grid(t1 in 0.1f64..3.0, t2 in 0.1f64..3.0) {
            prop_assume!((t1 - t2).abs() > 0.05);
            let a = winding_number(&band_structure(split(t1, t2), 128).unwrap()).unwrap();
            let b = winding_number(&band_structure(split(t1, t2), 256).unwrap()).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
