//! The projective translations `(ρ(x, y)φ)(t) = e^{πi(xy + 2yt)} φ(t + x)` and
//! their parameter derivatives.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::distribution::DerivativeOrder;
use crate::error::{Error, Result};
use crate::grid::{apply_shift_multiplier, OperatorMatrix, PhaseGrid};

pub(crate) fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

fn falling(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64)
}

/// Column `N/2` of `∂_x^order S_x`, the translation matrix; the full matrix is
/// circulant with `S_ij = c[(i - j + N/2) mod N]`.
fn shift_column(grid: PhaseGrid, x: f64, order: u32) -> Vec<Complex64> {
    let n = grid.n();
    let mut c = vec![Complex64::new(0.0, 0.0); n];
    c[n / 2] = Complex64::new(1.0, 0.0);
    apply_shift_multiplier(grid, &mut c, x, order);
    c
}

/// `∂_x^i ∂_y^b` of the phase `P(t) = e^{πi y (x + 2t)}`, sampled at the nodes.
fn phase_derivative(grid: PhaseGrid, x: f64, y: f64, i: u32, b: u32) -> Vec<Complex64> {
    let u = Complex64::new(0.0, PI);
    grid.nodes()
        .into_iter()
        .map(|t| {
            let s = x + 2.0 * t;
            let p = Complex64::from_polar(1.0, PI * y * s);
            let poly: Complex64 = (0..=b.min(i))
                .map(|j| {
                    u.powu(i + b - j)
                        * (binomial(b, j) * falling(i, j) * y.powi((i - j) as i32) * s.powi((b - j) as i32))
                })
                .sum();
            p * poly
        })
        .collect()
}

pub(crate) fn check_parameters(grid: PhaseGrid, x: f64, y: f64) -> Result<()> {
    let lim = grid.half_length();
    if !(x.is_finite() && y.is_finite()) || x.abs() >= lim || y.abs() >= lim {
        return Err(Error::OutOfRange(format!(
            "rho parameters ({x}, {y}) outside (-L/2, L/2)² = ±{lim}"
        )));
    }
    Ok(())
}

/// Adds `weight · ∂_x^{d_x} ∂_y^{d_y} ρ(x, y)` into `dest`.
pub(crate) fn accumulate_rho(
    dest: &mut DMatrix<Complex64>,
    grid: PhaseGrid,
    x: f64,
    y: f64,
    order: DerivativeOrder,
    weight: Complex64,
) {
    let n = grid.n();
    let terms: Vec<(Vec<Complex64>, Vec<Complex64>)> = (0..=order.dx)
        .map(|i| {
            let mut p = phase_derivative(grid, x, y, i, order.dy);
            let w = weight * binomial(order.dx, i);
            p.iter_mut().for_each(|v| *v *= w);
            (p, shift_column(grid, x, order.dx - i))
        })
        .collect();
    dest.as_mut_slice()
        .par_chunks_mut(n)
        .enumerate()
        .for_each(|(col, column)| {
            for (p, c) in &terms {
                for (row, v) in column.iter_mut().enumerate() {
                    *v += p[row] * c[(row + n + n / 2 - col) % n];
                }
            }
        });
}

/// Adds `weight · ∂_x^{d_x} ∂_y^{d_y} ρ(x, y) · rhs` into `dest`, applying the
/// translation to each column by FFT.
pub(crate) fn accumulate_rho_product(
    dest: &mut DMatrix<Complex64>,
    grid: PhaseGrid,
    x: f64,
    y: f64,
    order: DerivativeOrder,
    weight: Complex64,
    rhs: &DMatrix<Complex64>,
) {
    let n = grid.n();
    let phases: Vec<Vec<Complex64>> = (0..=order.dx)
        .map(|i| {
            let w = weight * binomial(order.dx, i);
            let mut p = phase_derivative(grid, x, y, i, order.dy);
            p.iter_mut().for_each(|v| *v *= w);
            p
        })
        .collect();
    dest.as_mut_slice()
        .par_chunks_mut(n)
        .zip(rhs.as_slice().par_chunks(n))
        .for_each(|(out, col)| {
            let mut buf = vec![Complex64::new(0.0, 0.0); n];
            for (i, p) in phases.iter().enumerate() {
                buf.copy_from_slice(col);
                apply_shift_multiplier(grid, &mut buf, x, order.dx - i as u32);
                for ((o, b), q) in out.iter_mut().zip(&buf).zip(p) {
                    *o += q * b;
                }
            }
        });
}

/// Matrix of `∂_x^{d_x} ∂_y^{d_y} ρ(x, y)`; the translation is the band-limited
/// shift, so for grid-multiple `x` the matrix is a phased cyclic permutation.
pub fn rho_matrix(x: f64, y: f64, grid: PhaseGrid, order: DerivativeOrder) -> Result<OperatorMatrix> {
    check_parameters(grid, x, y)?;
    let mut m = DMatrix::zeros(grid.n(), grid.n());
    accumulate_rho(&mut m, grid, x, y, order, Complex64::new(1.0, 0.0));
    Ok(OperatorMatrix::from_entries(grid, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::SpatialVector;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rho(x: f64, y: f64, g: PhaseGrid) -> OperatorMatrix {
        rho_matrix(x, y, g, DerivativeOrder::ZERO).unwrap()
    }

    #[test]
    fn identity_at_origin() {
        let g = PhaseGrid::new(64).unwrap();
        assert!(rho(0.0, 0.0, g).max_abs_diff(&OperatorMatrix::identity(g)).unwrap() < 1e-14);
    }

    #[test]
    fn acts_by_definition_on_grid_multiples() {
        let g = PhaseGrid::new(64).unwrap();
        let h = g.spacing();
        let (x, y) = (3.0 * h, -5.0 * h);
        let r = rho(x, y, g);
        let n = g.n();
        for i in 0..n {
            let t = g.node(i);
            for j in 0..n {
                let want = if j == (i + 3) % n {
                    Complex64::from_polar(1.0, PI * (x * y + 2.0 * y * t))
                } else {
                    c(0.0, 0.0)
                };
                assert!((r.entries()[(i, j)] - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn composition_law_on_grid_multiples() {
        let g = PhaseGrid::new(64).unwrap();
        let h = g.spacing();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let mut pick = || rng.random_range(-12i32..=12) as f64 * h;
            let (x, y, xp, yp) = (pick(), pick(), pick(), pick());
            let lhs = rho(x, y, g).compose(&rho(xp, yp, g)).unwrap();
            let rhs = rho(x + xp, y + yp, g).scaled(Complex64::from_polar(1.0, PI * (x * yp - xp * y)));
            assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-9);
        }
    }

    #[test]
    fn composition_law_off_grid_on_smooth_vectors() {
        let g = PhaseGrid::new(256).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let v = SpatialVector::sample(g, |t| c((-PI * t * t).exp(), 0.3 * t * (-PI * t * t).exp()));
        for _ in 0..20 {
            let mut pick = || rng.random_range(-1.5..1.5);
            let (x, y, xp, yp) = (pick(), pick(), pick(), pick());
            let lhs = rho(x, y, g).apply(&rho(xp, yp, g).apply(&v).unwrap()).unwrap();
            let phase = Complex64::from_polar(1.0, PI * (x * yp - xp * y));
            let rhs = rho(x + xp, y + yp, g).apply(&v).unwrap();
            for (a, b) in lhs.values().iter().zip(rhs.values()) {
                assert!((a - phase * b).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn inverse_is_negated_parameters() {
        let g = PhaseGrid::new(64).unwrap();
        let h = g.spacing();
        let (x, y) = (5.0 * h, -11.0 * h);
        let p = rho(x, y, g).compose(&rho(-x, -y, g)).unwrap();
        assert!(p.max_abs_diff(&OperatorMatrix::identity(g)).unwrap() < 1e-12);
        let g = PhaseGrid::new(256).unwrap();
        let v = SpatialVector::sample(g, |t| c((-PI * t * t).exp(), t * (-PI * t * t).exp()));
        let (x, y) = (0.37, -1.21);
        let w = rho(x, y, g).apply(&rho(-x, -y, g).apply(&v).unwrap()).unwrap();
        for (a, b) in v.values().iter().zip(w.values()) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    fn central(f: impl Fn(f64) -> OperatorMatrix, eps: f64) -> OperatorMatrix {
        f(eps).sub(&f(-eps)).unwrap().scaled(c(0.5 / eps, 0.0))
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let g = PhaseGrid::new(64).unwrap();
        let (x, y) = (0.41, -0.26);
        let eps = 1e-5;
        let d = |dx, dy, sx: f64, sy: f64| rho_matrix(x + sx, y + sy, g, DerivativeOrder::new(dx, dy)).unwrap();
        let cases: [((u32, u32), OperatorMatrix); 5] = [
            ((1, 0), central(|e| d(0, 0, e, 0.0), eps)),
            ((0, 1), central(|e| d(0, 0, 0.0, e), eps)),
            ((2, 0), central(|e| d(1, 0, e, 0.0), eps)),
            ((1, 1), central(|e| d(1, 0, 0.0, e), eps)),
            ((0, 2), central(|e| d(0, 1, 0.0, e), eps)),
        ];
        for ((dx, dy), fd) in cases {
            let exact = d(dx, dy, 0.0, 0.0);
            let rel = exact.sub(&fd).unwrap().frobenius_norm() / exact.frobenius_norm();
            assert!(rel < 1e-6, "order ({dx}, {dy}): {rel}");
        }
    }

    #[test]
    fn product_matches_dense_multiplication() {
        let g = PhaseGrid::new(64).unwrap();
        let rhs = rho(0.5, 0.25, g).add(&OperatorMatrix::identity(g)).unwrap();
        for order in [DerivativeOrder::ZERO, DerivativeOrder::new(1, 2), DerivativeOrder::new(2, 0)] {
            let w = c(0.3, -2.0);
            let mut got = DMatrix::zeros(64, 64);
            accumulate_rho_product(&mut got, g, -0.77, 1.3, order, w, rhs.entries());
            let want = rho_matrix(-0.77, 1.3, g, order).unwrap().compose(&rhs).unwrap().scaled(w);
            let got = OperatorMatrix::new(g, got).unwrap();
            assert!(got.max_abs_diff(&want).unwrap() < 1e-10 * want.frobenius_norm());
        }
    }

    #[test]
    fn rejects_large_parameters() {
        let g = PhaseGrid::new(64).unwrap();
        assert!(rho_matrix(4.0, 0.0, g, DerivativeOrder::ZERO).is_err());
        assert!(rho_matrix(0.0, -4.5, g, DerivativeOrder::ZERO).is_err());
    }
}
