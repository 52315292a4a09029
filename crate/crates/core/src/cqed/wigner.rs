//! Cavity density matrices, Wigner functions and fringe-phase readout.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix3, SymmetricEigen, Vector3};
use rayon::prelude::*;

use super::{coherent_state, CavityConfig, CqedError};
use crate::angle::wrap;
use crate::C64;

/// Dense ρ_{mn} = ⟨m|ρ|n⟩, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl DensityMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![C64::new(0.0, 0.0); dim * dim] }
    }

    pub fn from_pure(psi: &[C64]) -> Self {
        let mut rho = Self::zeros(psi.len());
        rho.add_pure(psi);
        rho
    }

    /// ρ += |ψ⟩⟨ψ|
    pub fn add_pure(&mut self, psi: &[C64]) {
        for m in 0..self.dim {
            for n in 0..self.dim {
                self.data[m * self.dim + n] += psi[m] * psi[n].conj();
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, m: usize, n: usize) -> C64 {
        self.data[m * self.dim + n]
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|n| self.get(n, n)).sum()
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (0..self.dim).all(|m| (0..self.dim).all(|n| (self.get(m, n) - self.get(n, m).conj()).norm() <= tol))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let m = DMatrix::from_fn(self.dim, self.dim, |i, j| self.get(i, j));
        SymmetricEigen::new(m).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Population in the top tenth (at least two) of the Fock levels.
    pub fn tail_population(&self) -> f64 {
        let top = (self.dim / 10).max(2).min(self.dim);
        (self.dim - top..self.dim).map(|n| self.get(n, n).re).sum()
    }
}

/// Rectangular sampling of the complex plane, endpoints included.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub re_range: (f64, f64),
    pub im_range: (f64, f64),
    pub n_re: usize,
    pub n_im: usize,
}

impl GridSpec {
    /// Square of half-width `half_width` centred on the origin with roughly
    /// the requested spacing.
    pub fn centered(half_width: f64, spacing: f64) -> Self {
        let n = (2.0 * half_width / spacing).round() as usize + 1;
        Self { re_range: (-half_width, half_width), im_range: (-half_width, half_width), n_re: n, n_im: n }
    }

    /// Covers both |0⟩ and |α⟩ with a margin of 3 at spacing 0.05.
    pub fn for_alpha(alpha: C64) -> Self {
        Self::centered(alpha.norm() + 3.0, 0.05)
    }

    pub fn re(&self, i: usize) -> f64 {
        self.re_range.0 + i as f64 * self.dx()
    }

    pub fn im(&self, j: usize) -> f64 {
        self.im_range.0 + j as f64 * self.dy()
    }

    pub fn dx(&self) -> f64 {
        (self.re_range.1 - self.re_range.0) / (self.n_re - 1) as f64
    }

    pub fn dy(&self) -> f64 {
        (self.im_range.1 - self.im_range.0) / (self.n_im - 1) as f64
    }

    pub fn len(&self) -> usize {
        self.n_re * self.n_im
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WignerGrid {
    pub spec: GridSpec,
    /// Index j·n_re + i holds W(re(i) + i·im(j)).
    pub values: Vec<f64>,
}

impl WignerGrid {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.spec.n_re + i]
    }

    /// Trapezoidal ∫ W d²β over the grid.
    pub fn integral(&self) -> f64 {
        let s = &self.spec;
        let w = |i: usize, n: usize| if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        let mut acc = 0.0;
        for j in 0..s.n_im {
            for i in 0..s.n_re {
                acc += w(i, s.n_re) * w(j, s.n_im) * self.value(i, j);
            }
        }
        acc * s.dx() * s.dy()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Bilinear interpolation; None outside the grid.
    pub fn interpolate(&self, beta: C64) -> Option<f64> {
        let s = &self.spec;
        let x = (beta.re - s.re_range.0) / s.dx();
        let y = (beta.im - s.im_range.0) / s.dy();
        if !(x >= 0.0 && y >= 0.0 && x <= (s.n_re - 1) as f64 && y <= (s.n_im - 1) as f64) {
            return None;
        }
        let i = (x.floor() as usize).min(s.n_re - 2);
        let j = (y.floor() as usize).min(s.n_im - 2);
        let (fx, fy) = (x - i as f64, y - j as f64);
        Some(
            (1.0 - fx) * (1.0 - fy) * self.value(i, j)
                + fx * (1.0 - fy) * self.value(i + 1, j)
                + (1.0 - fx) * fy * self.value(i, j + 1)
                + fx * fy * self.value(i + 1, j + 1),
        )
    }
}

/// W(β) = (2/π) Tr[D(−β) ρ D(β) Π], evaluated with the Laguerre recursion
/// for the matrix elements of the displaced parity operator.
pub fn wigner_point(rho: &DensityMatrix, beta: C64) -> f64 {
    let dim = rho.dim();
    let two_b = 2.0 * beta;
    let two_bc = two_b.conj();
    let sqrt: Vec<f64> = (0..dim).map(|n| (n as f64).sqrt()).collect();
    let mut w = vec![C64::new(0.0, 0.0); dim];
    w[0] = C64::new(2.0 / PI * (-2.0 * beta.norm_sqr()).exp(), 0.0);
    let mut acc = rho.get(0, 0).re * w[0].re;
    for n in 1..dim {
        w[n] = two_b * w[n - 1] / sqrt[n];
        acc += 2.0 * (rho.get(0, n) * w[n]).re;
    }
    for m in 1..dim {
        let mut prev = w[m];
        w[m] = (two_bc * prev - sqrt[m] * w[m - 1]) / sqrt[m];
        acc += (rho.get(m, m) * w[m]).re;
        for n in m + 1..dim {
            let next = (two_b * w[n - 1] - sqrt[m] * prev) / sqrt[n];
            prev = w[n];
            w[n] = next;
            acc += 2.0 * (rho.get(m, n) * w[n]).re;
        }
    }
    acc
}

/// Samples W on the grid. Refuses density matrices that reach the top of
/// the Fock space, where the truncation would distort the result.
pub fn wigner(rho: &DensityMatrix, spec: GridSpec) -> Result<WignerGrid, CqedError> {
    if spec.n_re < 2 || spec.n_im < 2 {
        return Err(CqedError::GridTooSmall("need at least 2 points per axis".into()));
    }
    let tail = rho.tail_population();
    if tail > 1e-8 {
        return Err(CqedError::CutoffNotConverged { tail });
    }
    let values = (0..spec.len())
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx % spec.n_re, idx / spec.n_re);
            wigner_point(rho, C64::new(spec.re(i), spec.im(j)))
        })
        .collect();
    Ok(WignerGrid { spec, values })
}

/// Least-squares fit of W/e^{−2s²} ≈ a cos κs + b sin κs + c along the
/// perpendicular bisector of 0 and α_f, s measured along i·α_f/|α_f|.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FringeFit {
    /// δ in a cos κs + b sin κs = A cos(κs + δ).
    pub raw_phase: f64,
    pub amplitude: f64,
    pub offset: f64,
    pub kappa: f64,
}

const BISECTOR_HALF_LENGTH: f64 = 1.0;
const BISECTOR_SAMPLES: usize = 201;

pub fn fit_fringes(wg: &WignerGrid, alpha_f: C64) -> Result<FringeFit, CqedError> {
    let r = alpha_f.norm();
    if r == 0.0 {
        return Err(CqedError::InvalidConfig("fringes need a nonzero alpha".into()));
    }
    let u = alpha_f / r;
    let along = C64::new(0.0, 1.0) * u;
    let mid = 0.5 * alpha_f;
    let kappa = 2.0 * r;
    let mut normal = Matrix3::<f64>::zeros();
    let mut rhs = Vector3::<f64>::zeros();
    for q in 0..BISECTOR_SAMPLES {
        let s = -BISECTOR_HALF_LENGTH + 2.0 * BISECTOR_HALF_LENGTH * q as f64 / (BISECTOR_SAMPLES - 1) as f64;
        let beta = mid + along * s;
        let w = wg
            .interpolate(beta)
            .ok_or_else(|| CqedError::GridTooSmall(format!("bisector point {beta} is off the grid")))?;
        let y = w / (-2.0 * s * s).exp();
        let row = Vector3::new((kappa * s).cos(), (kappa * s).sin(), 1.0);
        normal += row * row.transpose();
        rhs += row * y;
    }
    let coef = normal.lu().solve(&rhs).ok_or_else(|| CqedError::GridTooSmall("singular fringe fit".into()))?;
    Ok(FringeFit { raw_phase: (-coef[1]).atan2(coef[0]), amplitude: coef[0].hypot(coef[1]), offset: coef[2], kappa })
}

/// Relative phase δ of c₀|0⟩ + c₁|α⟩ read from the interference fringes,
/// calibrated so that (|α⟩ + |0⟩)/√2 sampled on the same grid reads 0 and
/// e^{iδ}|α⟩ + |0⟩ reads +δ. Returned in (−π, π].
pub fn fringe_phase(wg: &WignerGrid, cfg: &CavityConfig) -> Result<f64, CqedError> {
    let fit = fit_fringes(wg, cfg.alpha)?;
    let peak = wg.max();
    if fit.amplitude < 0.05 * peak {
        return Err(CqedError::FitFailure { contrast: fit.amplitude / peak });
    }
    let alpha = coherent_state(cfg.alpha, cfg.fock_cutoff)?.amplitudes;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut reference: Vec<C64> = alpha.iter().map(|a| a * h).collect();
    reference[0] += h;
    let norm = reference.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let reference: Vec<C64> = reference.iter().map(|a| a / norm).collect();
    let calib = fit_fringes(&wigner(&DensityMatrix::from_pure(&reference), wg.spec)?, cfg.alpha)?;
    Ok(wrap(calib.raw_phase - fit.raw_phase))
}
