//! Symplectic and ordinary Fourier transforms of grid functions and distributions.
//!
//! The symplectic transform uses the character `e((ξ,η),(x,y)) = e^{2πi(ξy − ηx)}`:
//! a forward DFT in the first coordinate, an inverse DFT in the second, and a
//! transpose. On the self-dual grid it is an exact involution.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::dft::CenteredDft;
use crate::distribution::{Atom, CompactDistribution};
use crate::error::{Error, Result};
use crate::grid::{GridFunction, PhaseGrid};

#[derive(Clone, Copy)]
enum Direction {
    Forward,
    Inverse,
}

fn dft_rows(values: &mut Array2<Complex64>, dir: Direction) {
    let n = values.ncols();
    let dft = CenteredDft::for_len(n);
    let data = values
        .as_slice_mut()
        .expect("grid arrays are kept in standard layout");
    data.par_chunks_mut(n).for_each(|row| match dir {
        Direction::Forward => dft.forward(row),
        Direction::Inverse => dft.inverse(row),
    });
}

fn transposed(values: &Array2<Complex64>) -> Array2<Complex64> {
    values.t().as_standard_layout().into_owned()
}

/// `F̌(ξ, η) = h² Σ e^{2πi(ξ y − η x)} F(x, y)`.
pub fn symplectic_ft(f: &GridFunction) -> GridFunction {
    let grid = f.grid();
    let mut a = f.values().clone();
    dft_rows(&mut a, Direction::Inverse);
    let mut a = transposed(&a);
    dft_rows(&mut a, Direction::Forward);
    let area = grid.cell_area();
    a.mapv_inplace(|v| v * area);
    GridFunction::from_array(grid, a).expect("shape preserved")
}

/// `F̂(ξ, η) = h² Σ e^{-2πi(x ξ + y η)} F(x, y)`.
pub fn fourier_2d(f: &GridFunction) -> GridFunction {
    let grid = f.grid();
    let mut a = f.values().clone();
    dft_rows(&mut a, Direction::Forward);
    let mut a = transposed(&a);
    dft_rows(&mut a, Direction::Forward);
    let area = grid.cell_area();
    let a = transposed(&a).mapv(|v| v * area);
    GridFunction::from_array(grid, a).expect("shape preserved")
}

/// Symplectic Fourier transform of a distribution, sampled on the grid.
///
/// Atoms use the closed form: `w ∂^d δ_{(a,b)}` maps to
/// `w (-1)^{|d|} (-2πiη)^{d_x} (2πiξ)^{d_y} e^{2πi(ξb - ηa)}`.
pub fn sft_of_distribution(t: &CompactDistribution, grid: PhaseGrid) -> Result<GridFunction> {
    t.validate_on(grid)?;
    match t {
        CompactDistribution::Density { values, .. } => Ok(symplectic_ft(values)),
        CompactDistribution::AtomicSum { atoms, .. } => Ok(atoms_sft(atoms, grid)),
        CompactDistribution::SmoothedAtoms { atoms, kernel, .. } => {
            atoms_sft(atoms, grid).hadamard(&symplectic_ft(kernel))
        }
    }
}

pub(crate) fn atoms_sft(atoms: &[Atom], grid: PhaseGrid) -> GridFunction {
    let n = grid.n();
    let nodes = grid.nodes();
    let factors: Vec<(Vec<Complex64>, Vec<Complex64>)> = atoms
        .iter()
        .map(|a| {
            // ξ is the first output coordinate and pairs with the atom's y.
            let by_xi = nodes
                .iter()
                .map(|&xi| {
                    Complex64::from_polar(1.0, 2.0 * PI * xi * a.y)
                        * Complex64::new(0.0, 2.0 * PI * xi).powu(a.order.dy)
                })
                .collect();
            let by_eta = nodes
                .iter()
                .map(|&eta| {
                    Complex64::from_polar(1.0, -2.0 * PI * eta * a.x)
                        * Complex64::new(0.0, -2.0 * PI * eta).powu(a.order.dx)
                        * a.weight
                        * a.order.sign()
                })
                .collect();
            (by_xi, by_eta)
        })
        .collect();
    let mut values = Array2::zeros((n, n));
    let data = values.as_slice_mut().expect("standard layout");
    data.par_chunks_mut(n).enumerate().for_each(|(m, row)| {
        for (by_xi, by_eta) in &factors {
            let u = by_xi[m];
            for (v, e) in row.iter_mut().zip(by_eta) {
                *v += u * e;
            }
        }
    });
    GridFunction::from_array(grid, values).expect("shape preserved")
}

/// Coefficients `C[p][q] = Σ F(x_m, y_k) e^{-2πi(ξ_p x_m + η_q y_k)}` scaled by `1/N²`,
/// so that `F(x, y) = Σ C[p][q] e^{2πi(ξ_p x + η_q y)}` at the nodes.
fn trig_coefficients(f: &GridFunction) -> Array2<Complex64> {
    let n = f.grid().n();
    let mut a = f.values().clone();
    dft_rows(&mut a, Direction::Forward);
    let mut a = transposed(&a);
    dft_rows(&mut a, Direction::Forward);
    let s = 1.0 / (n * n) as f64;
    transposed(&a).mapv(|v| v * s)
}

fn spectral_factors(grid: PhaseGrid, shift: f64, order: u32) -> Vec<Complex64> {
    grid.nodes()
        .into_iter()
        .map(|xi| {
            Complex64::from_polar(1.0, 2.0 * PI * xi * shift)
                * Complex64::new(0.0, 2.0 * PI * xi).powu(order)
        })
        .collect()
}

/// Trigonometric interpolant of grid samples, for evaluation and differentiation
/// off the grid.
#[derive(Clone, Debug)]
pub struct TrigInterpolant {
    grid: PhaseGrid,
    coeffs: Array2<Complex64>,
}

impl TrigInterpolant {
    pub fn new(f: &GridFunction) -> Self {
        Self {
            grid: f.grid(),
            coeffs: trig_coefficients(f),
        }
    }

    /// `∂_x^{dx} ∂_y^{dy}` of the interpolant at `(x, y)`.
    pub fn derivative_at(&self, x: f64, y: f64, dx: u32, dy: u32) -> Complex64 {
        let ex = spectral_factors(self.grid, x, dx);
        let ey = spectral_factors(self.grid, y, dy);
        let mut s = Complex64::new(0.0, 0.0);
        for (p, row) in self.coeffs.outer_iter().enumerate() {
            let r: Complex64 = row.iter().zip(&ey).map(|(a, b)| a * b).sum();
            s += ex[p] * r;
        }
        s
    }

    /// The grid function `z ↦ ∂^d F(z + (a, b))`.
    pub fn shifted_derivative(&self, a: f64, b: f64, dx: u32, dy: u32) -> GridFunction {
        let ex = spectral_factors(self.grid, a, dx);
        let ey = spectral_factors(self.grid, b, dy);
        let mut c = self.coeffs.clone();
        for ((p, q), v) in c.indexed_iter_mut() {
            *v *= ex[p] * ey[q];
        }
        dft_rows(&mut c, Direction::Inverse);
        let mut c = transposed(&c);
        dft_rows(&mut c, Direction::Inverse);
        GridFunction::from_array(self.grid, transposed(&c)).expect("shape preserved")
    }
}

/// `∂_x^{dx} ∂_y^{dy}` of the trigonometric interpolant of `f`, evaluated at `(x, y)`.
pub fn interpolate_derivative(f: &GridFunction, x: f64, y: f64, dx: u32, dy: u32) -> Complex64 {
    TrigInterpolant::new(f).derivative_at(x, y, dx, dy)
}

/// The grid function `z ↦ ∂^d f(z + (a, b))` of the trigonometric interpolant.
pub fn shifted_derivative(f: &GridFunction, a: f64, b: f64, dx: u32, dy: u32) -> GridFunction {
    TrigInterpolant::new(f).shifted_derivative(a, b, dx, dy)
}

/// Discrete periodic convolution `h² Σ_w F(w) G(z - w)`, computed through the
/// convolution theorem `(F ⊛ G)ˇ = F̌ Ǧ`.
pub fn convolve(f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
    if f.grid() != g.grid() {
        return Err(Error::GridMismatch {
            left: f.grid().n(),
            right: g.grid().n(),
        });
    }
    Ok(symplectic_ft(&symplectic_ft(f).hadamard(&symplectic_ft(g))?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::{Atom, DerivativeOrder};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn gauss(grid: PhaseGrid) -> GridFunction {
        GridFunction::from_fn(grid, |x, y| c((-PI / 2.0 * (x * x + y * y)).exp(), 0.0))
    }

    fn rough(grid: PhaseGrid) -> GridFunction {
        GridFunction::from_fn(grid, |x, y| {
            c((1.3 * x + 0.2 * y * y).sin(), (x * y).cos() - 0.5) * (-(x * x + 2.0 * y * y) / 3.0).exp()
        })
    }

    /// Literal double sum of the defining integral.
    fn sft_direct(f: &GridFunction) -> GridFunction {
        let g = f.grid();
        let t = g.nodes();
        let h2 = g.cell_area();
        GridFunction::from_fn(g, |xi, eta| {
            let mut s = c(0.0, 0.0);
            for (m, x) in t.iter().enumerate() {
                for (k, y) in t.iter().enumerate() {
                    s += Complex64::from_polar(1.0, 2.0 * PI * (xi * y - eta * x)) * f.at(m, k);
                }
            }
            s * h2
        })
    }

    #[test]
    fn matches_direct_double_sum() {
        let g = PhaseGrid::new(64).unwrap();
        let f = rough(g);
        let d = symplectic_ft(&f).max_abs_diff(&sft_direct(&f)).unwrap();
        assert!(d < 1e-10, "{d}");
        let twice = sft_direct(&sft_direct(&f));
        assert!(twice.max_abs_diff(&f).unwrap() < 1e-10);
    }

    #[test]
    fn involution() {
        let g = PhaseGrid::new(256).unwrap();
        let f = rough(g);
        assert!(symplectic_ft(&symplectic_ft(&f)).max_abs_diff(&f).unwrap() < 1e-10);
    }

    #[test]
    fn gaussian_transforms() {
        let g = PhaseGrid::new(256).unwrap();
        let want = GridFunction::from_fn(g, |a, b| c(2.0 * (-2.0 * PI * (a * a + b * b)).exp(), 0.0));
        for got in [symplectic_ft(&gauss(g)), fourier_2d(&gauss(g))] {
            // relative to the peak value 2
            assert!(got.max_abs_diff(&want).unwrap() / 2.0 < 1e-6);
        }
    }

    #[test]
    fn rotation_identity() {
        let g = PhaseGrid::new(128).unwrap();
        let f = rough(g);
        let s = symplectic_ft(&f);
        let o = fourier_2d(&f);
        let n = g.n();
        for a in 0..n {
            for b in 0..n {
                // F̌(ξ_a, η_b) = F̂(η_b, -ξ_a)
                assert!((s.at(a, b) - o.at(b, (n - a) % n)).norm() < 1e-10);
            }
        }
        for p in [1.0, 2.0, f64::INFINITY] {
            let (x, y) = (s.lp_norm(p).unwrap(), o.lp_norm(p).unwrap());
            assert!(((x - y) / y).abs() < 1e-12);
        }
    }

    #[test]
    fn dc_value() {
        let g = PhaseGrid::new(64).unwrap();
        let f = rough(g);
        let o = fourier_2d(&f);
        assert!((o.at(32, 32) - f.integral()).norm() < 1e-13);
    }

    #[test]
    fn atom_transforms() {
        let g = PhaseGrid::new(256).unwrap();
        let d0 = CompactDistribution::dirac(g, 0.0, 0.0).unwrap();
        let t = sft_of_distribution(&d0, g).unwrap();
        assert!(t.max_abs_diff(&GridFunction::constant(g, c(1.0, 0.0))).unwrap() < 1e-15);

        let (a, b) = (0.3, -0.7);
        let d = CompactDistribution::dirac(g, a, b).unwrap();
        let t = sft_of_distribution(&d, g).unwrap();
        let want = GridFunction::from_fn(g, |xi, eta| Complex64::from_polar(1.0, 2.0 * PI * (xi * b - eta * a)));
        assert!(t.max_abs_diff(&want).unwrap() < 1e-12);
        assert!(t.values().iter().all(|v| (v.norm() - 1.0).abs() < 1e-14));
    }

    #[test]
    fn derivative_atom_transform() {
        let g = PhaseGrid::new(256).unwrap();
        let one = c(1.0, 0.0);
        let dy = CompactDistribution::atoms(g, vec![Atom::derivative(0.0, 0.0, DerivativeOrder::new(0, 1), one)]).unwrap();
        let t = sft_of_distribution(&dy, g).unwrap();
        let want = GridFunction::from_fn(g, |xi, _| c(0.0, -2.0 * PI * xi));
        assert!(t.max_abs_diff(&want).unwrap() < 1e-12);
        // sup over the grid is attained at ξ = -L/2
        assert!((t.max_abs() - 2.0 * PI * g.half_length()).abs() < 1e-10);

        // cross-check: ∂_y δ ≈ -(δ_{(0,ε)} - δ_{(0,-ε)}) / 2ε
        let eps = 1e-5;
        let w = c(-1.0 / (2.0 * eps), 0.0);
        let fd = CompactDistribution::atoms(g, vec![Atom::point(0.0, eps, w), Atom::point(0.0, -eps, -w)]).unwrap();
        let tf = sft_of_distribution(&fd, g).unwrap();
        assert!(tf.max_abs_diff(&t).unwrap() / t.max_abs() < 1e-6);
    }

    #[test]
    fn interpolation_reproduces_smooth_function() {
        let g = PhaseGrid::new(128).unwrap();
        let f = |x: f64, y: f64| (-(x - 0.2).powi(2) - y * y).exp();
        let fx = |x: f64, y: f64| -2.0 * (x - 0.2) * f(x, y);
        let fxy = |x: f64, y: f64| 4.0 * (x - 0.2) * y * f(x, y);
        let s = GridFunction::from_fn(g, |x, y| c(f(x, y), 0.0));
        let (x, y) = (0.4321, -0.777);
        assert!((interpolate_derivative(&s, x, y, 0, 0).re - f(x, y)).abs() < 1e-12);
        assert!((interpolate_derivative(&s, x, y, 1, 0).re - fx(x, y)).abs() < 1e-10);
        assert!((interpolate_derivative(&s, x, y, 1, 1).re - fxy(x, y)).abs() < 1e-10);
        let sh = shifted_derivative(&s, x, y, 1, 0);
        // node (m, k) = origin
        assert!((sh.at(64, 64).re - fx(x, y)).abs() < 1e-10);
    }

    #[test]
    fn convolution_matches_direct_sum() {
        let g = PhaseGrid::new(64).unwrap();
        let f = rough(g);
        let k = GridFunction::from_fn(g, |x, y| c((-4.0 * (x * x + y * y)).exp(), x));
        let conv = convolve(&f, &k).unwrap();
        let n = g.n();
        let h2 = g.cell_area();
        for (m, kk) in [(10usize, 50usize), (32, 32), (0, 63)] {
            let mut s = c(0.0, 0.0);
            for p in 0..n {
                for q in 0..n {
                    // z - w on the periodic grid: node index m - p + N/2
                    let i = (m + n + n / 2 - p) % n;
                    let j = (kk + n + n / 2 - q) % n;
                    s += f.at(p, q) * k.at(i, j);
                }
            }
            assert!((s * h2 - conv.at(m, kk)).norm() < 1e-12);
        }
    }
}
