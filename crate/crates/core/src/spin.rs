//! Two-component spinors and 2×2 complex matrices.
//!
//! Basis order is (up, down) everywhere in the crate.

use std::ops::{Add, Mul, Sub};

use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct SpinState {
    pub up: C64,
    pub down: C64,
}

impl SpinState {
    pub const fn new(up: C64, down: C64) -> Self {
        Self { up, down }
    }

    pub const fn up() -> Self {
        Self { up: ONE, down: ZERO }
    }

    pub const fn down() -> Self {
        Self { up: ZERO, down: ONE }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.up.norm_sqr() + self.down.norm_sqr()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm_sqr().sqrt();
        Self::new(self.up / n, self.down / n)
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &SpinState) -> C64 {
        self.up.conj() * other.up + self.down.conj() * other.down
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.up * s, self.down * s)
    }

    /// Expectation values (⟨σx⟩, ⟨σy⟩, ⟨σz⟩) of a normalized spinor.
    pub fn bloch_vector(&self) -> [f64; 3] {
        let cross = self.up.conj() * self.down;
        [2.0 * cross.re, 2.0 * cross.im, self.up.norm_sqr() - self.down.norm_sqr()]
    }

    /// The +1 eigenvector of n·σ for a unit vector n, in a gauge that is
    /// smooth away from the south (resp. north) pole.
    pub fn from_bloch_vector(n: [f64; 3]) -> Self {
        let [x, y, z] = n;
        if z >= 0.0 {
            SpinState::new(C64::new(1.0 + z, 0.0), C64::new(x, y)).normalized()
        } else {
            SpinState::new(C64::new(x, -y), C64::new(1.0 - z, 0.0)).normalized()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinMatrix(pub [[C64; 2]; 2]);

impl SpinMatrix {
    pub const fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Self([[a, b], [c, d]])
    }

    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn diag(a: C64, d: C64) -> Self {
        Self::new(a, ZERO, ZERO, d)
    }

    pub fn pauli_x() -> Self {
        Self::new(ZERO, ONE, ONE, ZERO)
    }

    pub fn pauli_y() -> Self {
        Self::new(ZERO, C64::new(0.0, -1.0), C64::new(0.0, 1.0), ZERO)
    }

    pub fn pauli_z() -> Self {
        Self::diag(ONE, -ONE)
    }

    pub fn pauli(j: usize) -> Self {
        match j {
            0 => Self::pauli_x(),
            1 => Self::pauli_y(),
            2 => Self::pauli_z(),
            _ => panic!("pauli index {j} out of range"),
        }
    }

    /// e^{-i a n·σ} for a unit vector n.
    pub fn exp_pauli(a: f64, n: [f64; 3]) -> Self {
        let (s, c) = a.sin_cos();
        let mi = C64::new(0.0, -s);
        Self::new(
            C64::new(c, 0.0) + mi * n[2],
            mi * C64::new(n[0], -n[1]),
            mi * C64::new(n[0], n[1]),
            C64::new(c, 0.0) - mi * n[2],
        )
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[i][j]
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> C64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Self::new(m[0][0].conj(), m[1][0].conj(), m[0][1].conj(), m[1][1].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        let m = &self.0;
        Self::new(m[0][0] * s, m[0][1] * s, m[1][0] * s, m[1][1] * s)
    }

    pub fn apply(&self, v: SpinState) -> SpinState {
        let m = &self.0;
        SpinState::new(m[0][0] * v.up + m[0][1] * v.down, m[1][0] * v.up + m[1][1] * v.down)
    }

    /// Largest entry-wise modulus of the difference.
    pub fn max_abs_diff(&self, other: &SpinMatrix) -> f64 {
        let d = *self - *other;
        d.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Spectral norm (largest singular value).
    pub fn op_norm(&self) -> f64 {
        // Eigenvalues of the Hermitian A†A in closed form.
        let h = self.adjoint() * *self;
        let a = h.0[0][0].re;
        let d = h.0[1][1].re;
        let b = h.0[0][1].norm();
        let half_tr = 0.5 * (a + d);
        let disc = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        (half_tr + disc).max(0.0).sqrt()
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        (self.adjoint() * *self).max_abs_diff(&Self::identity()) <= tol
    }
}

impl Mul for SpinMatrix {
    type Output = SpinMatrix;

    fn mul(self, rhs: SpinMatrix) -> SpinMatrix {
        let a = &self.0;
        let b = &rhs.0;
        SpinMatrix::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

impl Mul<SpinState> for SpinMatrix {
    type Output = SpinState;

    fn mul(self, rhs: SpinState) -> SpinState {
        self.apply(rhs)
    }
}

impl Add for SpinMatrix {
    type Output = SpinMatrix;

    fn add(self, rhs: SpinMatrix) -> SpinMatrix {
        let mut out = self;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] += rhs.0[i][j];
            }
        }
        out
    }
}

impl Sub for SpinMatrix {
    type Output = SpinMatrix;

    fn sub(self, rhs: SpinMatrix) -> SpinMatrix {
        let mut out = self;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] -= rhs.0[i][j];
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    Y,
    Z,
}

/// e^{-i·angle·σ_axis/2}.
pub fn coin_rotation(axis: Axis, angle: f64) -> SpinMatrix {
    let (s, c) = (0.5 * angle).sin_cos();
    match axis {
        Axis::Y => SpinMatrix::new(C64::new(c, 0.0), C64::new(-s, 0.0), C64::new(s, 0.0), C64::new(c, 0.0)),
        Axis::Z => SpinMatrix::diag(C64::new(c, -s), C64::new(c, s)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn close(a: &SpinMatrix, b: &SpinMatrix, tol: f64) -> bool {
        a.max_abs_diff(b) <= tol
    }

    #[test]
    fn ry_zero_is_identity() {
        assert!(close(&coin_rotation(Axis::Y, 0.0), &SpinMatrix::identity(), 0.0));
    }

    #[test]
    fn ry_pi_flips_up_to_down() {
        let r = coin_rotation(Axis::Y, PI);
        let expect = SpinMatrix::new(C64::new(0.0, 0.0), C64::new(-1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        assert!(close(&r, &expect, 1e-15));
        let v = r * SpinState::up();
        assert_abs_diff_eq!(v.down.re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v.up.norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn rz_pi_is_diag_minus_i_plus_i() {
        let r = coin_rotation(Axis::Z, PI);
        let expect = SpinMatrix::diag(C64::new(0.0, -1.0), C64::new(0.0, 1.0));
        assert!(close(&r, &expect, 1e-15));
    }

    #[test]
    fn exp_pauli_matches_rotations() {
        let a = 0.7;
        assert!(close(&SpinMatrix::exp_pauli(a / 2.0, [0.0, 1.0, 0.0]), &coin_rotation(Axis::Y, a), 1e-15));
        assert!(close(&SpinMatrix::exp_pauli(a / 2.0, [0.0, 0.0, 1.0]), &coin_rotation(Axis::Z, a), 1e-15));
    }

    #[test]
    fn bloch_vector_of_basis_states() {
        assert_eq!(SpinState::up().bloch_vector(), [0.0, 0.0, 1.0]);
        assert_eq!(SpinState::down().bloch_vector(), [0.0, 0.0, -1.0]);
        let plus = SpinState::new(C64::new(1.0, 0.0), C64::new(1.0, 0.0)).normalized();
        let b = plus.bloch_vector();
        assert_abs_diff_eq!(b[0], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn op_norm_of_scaled_unitary() {
        let u = coin_rotation(Axis::Y, 1.1) * coin_rotation(Axis::Z, 0.3);
        assert_abs_diff_eq!(u.scale(C64::new(0.0, 3.0)).op_norm(), 3.0, epsilon = 1e-14);
        let d = SpinMatrix::diag(C64::new(0.5, 0.0), C64::new(0.0, -2.0));
        assert_abs_diff_eq!(d.op_norm(), 2.0, epsilon = 1e-15);
    }

    proptest! {
        #[test]
        fn rotations_are_special_unitary(angle in -20.0f64..20.0, z in any::<bool>()) {
            let axis = if z { Axis::Z } else { Axis::Y };
            let r = coin_rotation(axis, angle);
            prop_assert!(r.is_unitary(1e-12));
            prop_assert!((r.det() - C64::new(1.0, 0.0)).norm() < 1e-12);
        }

        #[test]
        fn bloch_vector_round_trip(theta in 0.0f64..PI, phi in -PI..PI) {
            let n = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
            let v = SpinState::from_bloch_vector(n);
            prop_assert!((v.norm_sqr() - 1.0).abs() < 1e-12);
            let back = v.bloch_vector();
            for j in 0..3 {
                prop_assert!((back[j] - n[j]).abs() < 1e-12);
            }
        }
    }
}
