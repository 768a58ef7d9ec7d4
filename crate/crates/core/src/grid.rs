//! The self-dual discretization of phase space and the sample containers living on it.
//!
//! A grid with `N` points per axis has period `L = √N` and spacing `h = 1/√N`, so
//! the FFT-dual grid (spacing `1/(N h)`) is the grid itself. Every transform in
//! the crate therefore maps grid samples to grid samples.

use std::sync::OnceLock;

use nalgebra::DMatrix;
use ndarray::Array2;
use num_complex::Complex64;
use serde::Serialize;

use crate::dft::CenteredDft;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PhaseGrid {
    n: usize,
}

impl PhaseGrid {
    pub const MIN_POINTS: usize = 64;

    pub fn new(n: usize) -> Result<Self> {
        if n < Self::MIN_POINTS || !n.is_power_of_two() {
            return Err(Error::InvalidGridSize(n));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Period `L = √N`.
    pub fn length(&self) -> f64 {
        (self.n as f64).sqrt()
    }

    pub fn half_length(&self) -> f64 {
        0.5 * self.length()
    }

    /// Node spacing `h = 1/√N`, equal to the dual spacing `1/(N h)`.
    pub fn spacing(&self) -> f64 {
        1.0 / self.length()
    }

    /// Quadrature weight `h²` of one phase-space cell.
    pub fn cell_area(&self) -> f64 {
        1.0 / self.n as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        (j as f64 - (self.n / 2) as f64) * self.spacing()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.node(j)).collect()
    }

    /// Index of the node at `t`, if `t` is a grid multiple inside the period.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let s = t / self.spacing();
        let r = s.round();
        if (s - r).abs() > 1e-9 {
            return None;
        }
        let j = r as i64 + (self.n / 2) as i64;
        (0..self.n as i64).contains(&j).then_some(j as usize)
    }

    /// Index of `-t_j`, i.e. the reflection about the origin node (periodic).
    pub fn mirror(&self, j: usize) -> usize {
        (self.n - j) % self.n
    }

    pub(crate) fn ensure_same(&self, other: &PhaseGrid) -> Result<()> {
        if self.n != other.n {
            return Err(Error::GridMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }
}

/// Validates a Schatten / Lebesgue exponent `p ∈ [1, ∞]`.
pub fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    Ok(())
}

/// Parses `inf` (or a number) into an exponent.
pub fn parse_exponent(s: &str) -> Result<f64> {
    let s = s.trim();
    let p = match s {
        "inf" | "Inf" | "infinity" | "∞" => f64::INFINITY,
        "4/3" => 4.0 / 3.0,
        _ => s
            .parse::<f64>()
            .map_err(|_| Error::OutOfRange(format!("cannot parse exponent {s:?}")))?,
    };
    check_exponent(p)?;
    Ok(p)
}

pub fn format_exponent(p: f64) -> String {
    if p.is_infinite() {
        "inf".to_string()
    } else if p == 4.0 / 3.0 {
        "4/3".to_string()
    } else {
        format!("{p}")
    }
}

/// ℓ^p norm of a nonnegative sequence, weighted by `weight` (`(w Σ x^p)^{1/p}`).
pub(crate) fn weighted_pnorm(values: impl Iterator<Item = f64>, p: f64, weight: f64) -> f64 {
    if p.is_infinite() {
        values.fold(0.0, f64::max)
    } else if p == 1.0 {
        weight * values.sum::<f64>()
    } else if p == 2.0 {
        (weight * values.map(|v| v * v).sum::<f64>()).sqrt()
    } else {
        (weight * values.map(|v| v.powf(p)).sum::<f64>()).powf(1.0 / p)
    }
}

/// Bilinear pairing without conjugation, `Σ u_j v_j` for vectors and `h² Σ F G`
/// for phase-space samples.
pub trait Pairing {
    fn pair_bilinear(&self, other: &Self) -> Result<Complex64>;
}

pub fn pair_bilinear<T: Pairing>(u: &T, v: &T) -> Result<Complex64> {
    u.pair_bilinear(v)
}

/// Samples `v_j = √h φ(t_j)` of a function on the line; the √h makes the
/// coordinate ℓ² norm approximate the L² norm.
#[derive(Clone, Debug)]
pub struct SpatialVector {
    grid: PhaseGrid,
    values: Vec<Complex64>,
}

impl SpatialVector {
    pub fn from_values(grid: PhaseGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::ShapeMismatch {
                expected: grid.n(),
                actual: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn sample(grid: PhaseGrid, f: impl Fn(f64) -> Complex64) -> Self {
        let w = grid.spacing().sqrt();
        let values = grid.nodes().into_iter().map(|t| f(t) * w).collect();
        Self { grid, values }
    }

    pub fn zeros(grid: PhaseGrid) -> Self {
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.n()],
        }
    }

    /// Coordinate vector with a single 1 at index `j`.
    pub fn unit(grid: PhaseGrid, j: usize) -> Self {
        let mut v = Self::zeros(grid);
        v.values[j] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn grid(&self) -> PhaseGrid {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn conj(&self) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| v.conj()).collect(),
        }
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    /// Unitary centered DFT, `(1/√N) Σ_j e^{-2πi ξ_k t_j} v_j`.
    pub fn unitary_dft(&self) -> Self {
        let mut values = self.values.clone();
        CenteredDft::for_len(self.grid.n()).forward(&mut values);
        let s = 1.0 / (self.grid.n() as f64).sqrt();
        values.iter_mut().for_each(|v| *v *= s);
        Self {
            grid: self.grid,
            values,
        }
    }

    /// `φ ↦ φ(· + a)`; see [`fractional_shift`].
    pub fn shifted(&self, a: f64) -> Result<Self> {
        fractional_shift(self, a)
    }
}

impl Pairing for SpatialVector {
    fn pair_bilinear(&self, other: &Self) -> Result<Complex64> {
        self.grid.ensure_same(&other.grid)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .sum())
    }
}

/// Periodic band-limited translation `φ ↦ φ(· + a)`: the DFT coefficients are
/// multiplied by `e^{2πi a ξ}`. Exact cyclic index shift when `a` is a grid multiple.
pub fn fractional_shift(v: &SpatialVector, a: f64) -> Result<SpatialVector> {
    let grid = v.grid;
    if !a.is_finite() || a.abs() >= grid.half_length() {
        return Err(Error::OutOfRange(format!(
            "shift {a} outside (-L/2, L/2) = ±{}",
            grid.half_length()
        )));
    }
    let mut values = v.values.clone();
    apply_shift_multiplier(grid, &mut values, a, 0);
    Ok(SpatialVector { grid, values })
}

/// In-place `F⁻¹ diag((2πiξ)^order e^{2πi a ξ}) F`.
pub(crate) fn apply_shift_multiplier(grid: PhaseGrid, buf: &mut [Complex64], a: f64, order: u32) {
    let n = grid.n();
    let dft = CenteredDft::for_len(n);
    dft.forward(buf);
    let two_pi = 2.0 * std::f64::consts::PI;
    for (k, v) in buf.iter_mut().enumerate() {
        let xi = grid.node(k);
        let mut m = Complex64::from_polar(1.0 / n as f64, two_pi * a * xi);
        if order > 0 {
            m *= Complex64::new(0.0, two_pi * xi).powu(order);
        }
        *v *= m;
    }
    dft.inverse(buf);
}

/// Complex samples `F(x_m, y_k)` on the phase grid; row index `m` is the first
/// coordinate, column index `k` the second.
#[derive(Clone, Debug)]
pub struct GridFunction {
    grid: PhaseGrid,
    values: Array2<Complex64>,
}

impl GridFunction {
    pub fn from_array(grid: PhaseGrid, values: Array2<Complex64>) -> Result<Self> {
        let (r, c) = values.dim();
        if r != grid.n() || c != grid.n() {
            return Err(Error::ShapeMismatch {
                expected: grid.n() * grid.n(),
                actual: r * c,
            });
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: PhaseGrid) -> Self {
        Self {
            grid,
            values: Array2::zeros((grid.n(), grid.n())),
        }
    }

    pub fn from_fn(grid: PhaseGrid, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let t = grid.nodes();
        let values = Array2::from_shape_fn((grid.n(), grid.n()), |(m, k)| f(t[m], t[k]));
        Self { grid, values }
    }

    pub fn constant(grid: PhaseGrid, c: Complex64) -> Self {
        Self {
            grid,
            values: Array2::from_elem((grid.n(), grid.n()), c),
        }
    }

    pub fn grid(&self) -> PhaseGrid {
        self.grid
    }

    pub fn values(&self) -> &Array2<Complex64> {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut Array2<Complex64> {
        &mut self.values
    }

    pub fn into_values(self) -> Array2<Complex64> {
        self.values
    }

    pub fn at(&self, m: usize, k: usize) -> Complex64 {
        self.values[[m, k]]
    }

    /// `(h² Σ |F|^p)^{1/p}`, or the grid maximum for `p = ∞`.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        check_exponent(p)?;
        Ok(weighted_pnorm(
            self.values.iter().map(|v| v.norm()),
            p,
            self.grid.cell_area(),
        ))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `max |F - G|`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.grid.ensure_same(&other.grid)?;
        Ok(self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `h² Σ F` (the DC value of either Fourier transform).
    pub fn integral(&self) -> Complex64 {
        self.values.sum() * self.grid.cell_area()
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.mapv(f),
        }
    }

    /// Entrywise product.
    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        self.grid.ensure_same(&other.grid)?;
        Ok(Self {
            grid: self.grid,
            values: &self.values * &other.values,
        })
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        self.map(|v| v * c)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.grid.ensure_same(&other.grid)?;
        Ok(Self {
            grid: self.grid,
            values: &self.values + &other.values,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.grid.ensure_same(&other.grid)?;
        Ok(Self {
            grid: self.grid,
            values: &self.values - &other.values,
        })
    }

    /// `F∼(x, y) = F(-x, -y)` on the periodic grid.
    pub fn reflect(&self) -> Self {
        let g = self.grid;
        let values =
            Array2::from_shape_fn((g.n(), g.n()), |(m, k)| self.values[[g.mirror(m), g.mirror(k)]]);
        Self { grid: g, values }
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }
}

impl Pairing for GridFunction {
    fn pair_bilinear(&self, other: &Self) -> Result<Complex64> {
        self.grid.ensure_same(&other.grid)?;
        let s: Complex64 = self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| a * b)
            .sum();
        Ok(s * self.grid.cell_area())
    }
}

/// `N × N` matrix of an operator on the discretized line, `A_ij ≈ h K(t_i, t_j)`.
///
/// The singular values are computed at most once and cached.
#[derive(Debug)]
pub struct OperatorMatrix {
    grid: PhaseGrid,
    entries: DMatrix<Complex64>,
    pub(crate) spectrum: OnceLock<Vec<f64>>,
}

impl Clone for OperatorMatrix {
    fn clone(&self) -> Self {
        Self {
            grid: self.grid,
            entries: self.entries.clone(),
            spectrum: self.spectrum.clone(),
        }
    }
}

impl OperatorMatrix {
    pub fn new(grid: PhaseGrid, entries: DMatrix<Complex64>) -> Result<Self> {
        if entries.nrows() != grid.n() || entries.ncols() != grid.n() {
            return Err(Error::ShapeMismatch {
                expected: grid.n() * grid.n(),
                actual: entries.len(),
            });
        }
        Ok(Self {
            grid,
            entries,
            spectrum: OnceLock::new(),
        })
    }

    pub fn zeros(grid: PhaseGrid) -> Self {
        Self::from_entries(grid, DMatrix::zeros(grid.n(), grid.n()))
    }

    pub fn identity(grid: PhaseGrid) -> Self {
        Self::from_entries(grid, DMatrix::identity(grid.n(), grid.n()))
    }

    pub(crate) fn from_entries(grid: PhaseGrid, entries: DMatrix<Complex64>) -> Self {
        debug_assert_eq!(entries.nrows(), grid.n());
        Self {
            grid,
            entries,
            spectrum: OnceLock::new(),
        }
    }

    /// `φ ⊗ ψ`, the operator with kernel `φ(s)ψ(u)`: `X_ij = φ_i ψ_j`.
    pub fn rank_one(phi: &SpatialVector, psi: &SpatialVector) -> Result<Self> {
        phi.grid.ensure_same(&psi.grid)?;
        let n = phi.grid.n();
        let entries = DMatrix::from_fn(n, n, |i, j| phi.values[i] * psi.values[j]);
        Ok(Self::from_entries(phi.grid, entries))
    }

    pub fn grid(&self) -> PhaseGrid {
        self.grid
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<Complex64> {
        self.entries
    }

    pub fn apply(&self, v: &SpatialVector) -> Result<SpatialVector> {
        self.grid.ensure_same(&v.grid)?;
        let x = nalgebra::DVector::from_column_slice(&v.values);
        let y = &self.entries * x;
        Ok(SpatialVector {
            grid: self.grid,
            values: y.as_slice().to_vec(),
        })
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.grid.ensure_same(&other.grid)?;
        Ok(Self::from_entries(self.grid, &self.entries * &other.entries))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.grid.ensure_same(&other.grid)?;
        Ok(Self::from_entries(self.grid, &self.entries + &other.entries))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.grid.ensure_same(&other.grid)?;
        Ok(Self::from_entries(self.grid, &self.entries - &other.entries))
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self::from_entries(self.grid, &self.entries * c)
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    /// `tr(A B) = Σ_ij A_ij B_ji` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Result<Complex64> {
        self.grid.ensure_same(&other.grid)?;
        let n = self.grid.n();
        let mut s = Complex64::new(0.0, 0.0);
        for j in 0..n {
            for i in 0..n {
                s += self.entries[(i, j)] * other.entries[(j, i)];
            }
        }
        Ok(s)
    }

    /// Largest entrywise modulus of `A - B`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.grid.ensure_same(&other.grid)?;
        Ok(self
            .entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Entrywise (Frobenius) ℓ² norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.entries
            .iter()
            .all(|v| v.re.is_finite() && v.im.is_finite())
    }
}
