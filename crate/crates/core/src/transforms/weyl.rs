//! The Weyl transform `(W(T)φ)(ψ) = T(α(φ ⊗ ψ)∼)` and `Γ(f) = W(g f̌)`.
//!
//! On the grid a density acts as `W(S) = h² Σ_z S(z) ρ(-z)`. Its matrix is the
//! kernel `K(t, u) = h ∫ S(t - u, y) e^{-πi y (t + u)} dy` with the difference
//! `t - u` read cyclically, which keeps `α ∘ W = id` exact on the grid.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::dft::CenteredDft;
use crate::distribution::{Atom, CompactDistribution, DerivativeOrder};
use crate::error::Result;
use crate::grid::{GridFunction, OperatorMatrix, Pairing, PhaseGrid, SpatialVector};

use super::fourier::{symplectic_ft, TrigInterpolant};
use super::rho::{accumulate_rho, accumulate_rho_product, binomial, check_parameters};
use super::wigner::{fourier_wigner, gaussian};

pub fn weyl(t: &CompactDistribution, grid: PhaseGrid) -> Result<OperatorMatrix> {
    t.validate_on(grid)?;
    match t {
        CompactDistribution::Density { values, .. } => Ok(weyl_samples(values)),
        CompactDistribution::AtomicSum { atoms, .. } => weyl_atoms(atoms, grid),
        CompactDistribution::SmoothedAtoms { atoms, kernel, .. } => weyl_smoothed_atoms(atoms, kernel),
    }
}

/// `h² Σ_z S(z) ρ(-z)` for arbitrary samples; no support restriction.
pub fn weyl_samples(s: &GridFunction) -> OperatorMatrix {
    let grid = s.grid();
    let n = grid.n();
    let dft = CenteredDft::for_len(n);
    let nodes = grid.nodes();
    let area = grid.cell_area();
    let values = s.values();
    // Row m of the samples fills the wrapped diagonal j = i - (m - N/2).
    let diagonals: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|m| {
            let xs = nodes[m];
            let mut u: Vec<Complex64> = values
                .row(m)
                .iter()
                .zip(&nodes)
                .map(|(v, y)| v * Complex64::from_polar(area, PI * y * xs))
                .collect();
            dft.forward(&mut u);
            u
        })
        .collect();
    let mut a = DMatrix::zeros(n, n);
    for (m, u) in diagonals.iter().enumerate() {
        for (i, v) in u.iter().enumerate() {
            a[(i, (i + n + n / 2 - m) % n)] = *v;
        }
    }
    OperatorMatrix::from_entries(grid, a)
}

/// `Σ w ∂^dρ(-a, -b)` for atoms `w ∂^d δ_{(a, b)}`.
fn weyl_atoms(atoms: &[Atom], grid: PhaseGrid) -> Result<OperatorMatrix> {
    let mut a = DMatrix::zeros(grid.n(), grid.n());
    for atom in atoms {
        check_parameters(grid, -atom.x, -atom.y)?;
        accumulate_rho(&mut a, grid, -atom.x, -atom.y, atom.order, atom.weight);
    }
    Ok(OperatorMatrix::from_entries(grid, a))
}

/// Twisted translation: `W(δ_a ∗ K) = ρ(-a) W(e_a K)` with
/// `e_a(z) = e^{-πi(a_x z_y - z_x a_y)}`. Derivative atoms differentiate this in `a`.
fn weyl_smoothed_atoms(atoms: &[Atom], kernel: &GridFunction) -> Result<OperatorMatrix> {
    let grid = kernel.grid();
    let mut out = DMatrix::zeros(grid.n(), grid.n());
    for atom in atoms {
        check_parameters(grid, -atom.x, -atom.y)?;
        let (ax, ay) = (atom.x, atom.y);
        let d = atom.order;
        for i in 0..=d.dx {
            for j in 0..=d.dy {
                let (px, py) = (d.dx - i, d.dy - j);
                let twisted = GridFunction::from_fn(grid, |x, y| {
                    let poly = Complex64::new(0.0, -PI * y).powu(px) * Complex64::new(0.0, PI * x).powu(py);
                    poly * Complex64::from_polar(1.0, -PI * (ax * y - x * ay))
                })
                .hadamard(kernel)?;
                let sign = d.sign() * if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                let w = atom.weight * (sign * binomial(d.dx, i) * binomial(d.dy, j));
                let inner = weyl_samples(&twisted);
                accumulate_rho_product(&mut out, grid, -ax, -ay, DerivativeOrder::new(i, j), w, inner.entries());
            }
        }
    }
    Ok(OperatorMatrix::from_entries(grid, out))
}

/// `T(α(φ ⊗ ψ)∼)` evaluated from the definition: the Fourier–Wigner transform of
/// the rank-one operator, reflected and paired with `T`. Off-grid atoms are
/// evaluated on the trigonometric interpolant.
pub fn weyl_definitional_pairing(
    t: &CompactDistribution,
    phi: &SpatialVector,
    psi: &SpatialVector,
) -> Result<Complex64> {
    let grid = phi.grid();
    t.validate_on(grid)?;
    let f = fourier_wigner(&OperatorMatrix::rank_one(phi, psi)?).reflect();
    match t {
        CompactDistribution::Density { values, .. } => values.pair_bilinear(&f),
        CompactDistribution::AtomicSum { atoms, .. } => {
            let interp = TrigInterpolant::new(&f);
            Ok(atoms
                .iter()
                .map(|a| a.weight * a.order.sign() * interp.derivative_at(a.x, a.y, a.order.dx, a.order.dy))
                .sum())
        }
        CompactDistribution::SmoothedAtoms { atoms, kernel, .. } => {
            let interp = TrigInterpolant::new(&f);
            atoms.iter().try_fold(Complex64::new(0.0, 0.0), |acc, a| {
                let shifted = interp.shifted_derivative(a.x, a.y, a.order.dx, a.order.dy);
                Ok(acc + a.weight * a.order.sign() * kernel.pair_bilinear(&shifted)?)
            })
        }
    }
}

/// `Γ(f) = W(g f̌)`.
pub fn gamma(f: &GridFunction) -> OperatorMatrix {
    let damped = gaussian(f.grid()).hadamard(&symplectic_ft(f)).expect("same grid");
    weyl_samples(&damped)
}
