//! Fourier–Wigner transform `α(X)(x, y) = tr(ρ(x, y) X)` and the damped transform `β̌`.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::dft::CenteredDft;
use crate::grid::{GridFunction, OperatorMatrix, PhaseGrid, SpatialVector};

use super::fourier::symplectic_ft;

/// Normalization of `φ(t) = c e^{-πt²}` making `φ ⊗ φ` the Weyl transform of `g`.
pub const GAUSSIAN_CONSTANT: f64 = 1.189_207_115_002_721; // 2^{1/4}

/// The phase-space Gaussian `g(z) = e^{-π|z|²/2}` and the line Gaussian `φ`.
#[derive(Clone, Debug)]
pub struct GaussianEnvelope {
    pub g: GridFunction,
    pub phi_g: SpatialVector,
}

impl GaussianEnvelope {
    pub fn new(grid: PhaseGrid) -> Self {
        Self {
            g: gaussian(grid),
            phi_g: gaussian_vector(grid),
        }
    }
}

pub fn gaussian(grid: PhaseGrid) -> GridFunction {
    GridFunction::from_fn(grid, |x, y| Complex64::new((-PI / 2.0 * (x * x + y * y)).exp(), 0.0))
}

pub fn gaussian_vector(grid: PhaseGrid) -> SpatialVector {
    SpatialVector::sample(grid, |t| Complex64::new(GAUSSIAN_CONSTANT * (-PI * t * t).exp(), 0.0))
}

/// For each grid offset `x_s = s h` the trace `tr(ρ(x_s, y) X)` is a DFT of the
/// wrapped diagonal `X[(i + s) mod N, i]`.
pub fn fourier_wigner(x: &OperatorMatrix) -> GridFunction {
    let grid = x.grid();
    let n = grid.n();
    let dft = CenteredDft::for_len(n);
    let nodes = grid.nodes();
    let e = x.entries();
    let mut out = Array2::zeros((n, n));
    out.as_slice_mut()
        .expect("standard layout")
        .par_chunks_mut(n)
        .enumerate()
        .for_each(|(m, row)| {
            let s = m + n - n / 2;
            for (i, v) in row.iter_mut().enumerate() {
                *v = e[((i + s) % n, i)];
            }
            dft.inverse(row);
            let xs = nodes[m];
            for (v, y) in row.iter_mut().zip(&nodes) {
                *v *= Complex64::from_polar(1.0, PI * xs * y);
            }
        });
    GridFunction::from_array(grid, out).expect("shape preserved")
}

/// `β̌(X) = (g · α(X))ˇ`.
pub fn beta_check(x: &OperatorMatrix) -> GridFunction {
    let g = gaussian(x.grid());
    symplectic_ft(&g.hadamard(&fourier_wigner(x)).expect("same grid"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::DerivativeOrder;
    use crate::transforms::rho::rho_matrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn literal_trace(x: &OperatorMatrix, m: usize, k: usize) -> Complex64 {
        let g = x.grid();
        let r = rho_matrix(g.node(m), g.node(k), g, DerivativeOrder::ZERO).unwrap();
        r.trace_product(x).unwrap()
    }

    #[test]
    fn gaussian_vector_is_unit() {
        let v = gaussian_vector(PhaseGrid::new(256).unwrap());
        assert!((v.norm() - 1.0).abs() < 1e-8);
        assert!((GAUSSIAN_CONSTANT - 2f64.powf(0.25)).abs() < 1e-15);
    }

    #[test]
    fn gaussian_rank_one_maps_to_g() {
        let grid = PhaseGrid::new(256).unwrap();
        let env = GaussianEnvelope::new(grid);
        let x = OperatorMatrix::rank_one(&env.phi_g, &env.phi_g).unwrap();
        let a = fourier_wigner(&x);
        assert!(a.max_abs_diff(&env.g).unwrap() < 1e-6);
        assert!((a.at(128, 128) - x.trace()).norm() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let (m, k) = (rng.random_range(1..256), rng.random_range(1..256));
            assert!((a.at(m, k) - literal_trace(&x, m, k)).norm() < 1e-10);
        }
    }

    #[test]
    fn identity_concentrates_at_origin() {
        let grid = PhaseGrid::new(64).unwrap();
        let a = fourier_wigner(&OperatorMatrix::identity(grid));
        for ((m, k), v) in a.values().indexed_iter() {
            let want = if m == 32 && k == 32 { 64.0 } else { 0.0 };
            assert!((v - want).norm() < 1e-10, "({m}, {k})");
        }
    }

    #[test]
    fn literal_trace_on_general_matrix() {
        let grid = PhaseGrid::new(64).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let e = nalgebra::DMatrix::from_fn(64, 64, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let x = OperatorMatrix::new(grid, e).unwrap();
        let a = fourier_wigner(&x);
        for (m, k) in [(1, 2), (5, 60), (32, 32), (63, 1), (17, 40)] {
            assert!((a.at(m, k) - literal_trace(&x, m, k)).norm() < 1e-10);
        }
        // Plancherel holds exactly for arbitrary matrices
        let rel = (a.lp_norm(2.0).unwrap() - x.frobenius_norm()) / x.frobenius_norm();
        assert!(rel.abs() < 1e-12);
    }

    #[test]
    fn beta_check_of_gaussian() {
        let grid = PhaseGrid::new(256).unwrap();
        let env = GaussianEnvelope::new(grid);
        let b = beta_check(&OperatorMatrix::rank_one(&env.phi_g, &env.phi_g).unwrap());
        let want = GridFunction::from_fn(grid, |a, b| c((-PI * (a * a + b * b)).exp(), 0.0));
        assert!(b.max_abs_diff(&want).unwrap() < 1e-6);
        assert!((b.lp_norm(1.0).unwrap() - 1.0).abs() < 1e-6);
        assert_eq!(beta_check(&OperatorMatrix::zeros(grid)).max_abs(), 0.0);
    }
}
