//! Mollification `T ↦ ρ_r ∗ T` by the rescaled bump `ρ_r(z) = r² ρ(r z)`.

use num_complex::Complex64;

use crate::distribution::{bump_profile, CompactDistribution};
use crate::error::{Error, Result};
use crate::grid::{GridFunction, PhaseGrid};

use super::fourier::{convolve, symplectic_ft};

/// Samples of `ρ_r ∝ exp(-1/(1 - r²|z|²))`, normalized so that `h² Σ ρ_r = 1`
/// holds on the grid itself.
pub fn mollifier_samples(grid: PhaseGrid, r: f64) -> Result<GridFunction> {
    if !(r > 1.0 && r.is_finite()) {
        return Err(Error::OutOfRange(format!("mollifier scale r = {r} must exceed 1")));
    }
    let raw = GridFunction::from_fn(grid, |x, y| Complex64::new(bump_profile(r * r * (x * x + y * y)), 0.0));
    let mass = raw.integral().re;
    Ok(raw.scaled(Complex64::new(1.0 / mass, 0.0)))
}

/// Returns `ρ_r ∗ T` and `ρ̌_r`. Densities are convolved by FFT; point masses
/// keep their exact locations and carry the sampled mollifier as a kernel.
pub fn mollify(t: &CompactDistribution, r: f64, grid: PhaseGrid) -> Result<(CompactDistribution, GridFunction)> {
    t.validate_on(grid)?;
    let support = t.support_box();
    if !support.expanded(1.0).fits(grid, 0.0) {
        return Err(Error::SupportTooLarge(support.expanded(1.0).to_string()));
    }
    let rho = mollifier_samples(grid, r)?;
    let rho_check = symplectic_ft(&rho);
    let spread = support.expanded(1.0 / r);
    let smoothed = match t {
        CompactDistribution::Density { values, .. } => {
            let mut conv = convolve(values, &rho)?;
            let nodes = grid.nodes();
            for ((m, k), v) in conv.values_mut().indexed_iter_mut() {
                if !spread.contains(nodes[m], nodes[k]) {
                    *v = Complex64::new(0.0, 0.0);
                }
            }
            CompactDistribution::density(conv, spread)?
        }
        CompactDistribution::AtomicSum { atoms, .. } => CompactDistribution::SmoothedAtoms {
            atoms: atoms.clone(),
            kernel: rho,
            kernel_radius: 1.0 / r,
            support: spread,
        },
        CompactDistribution::SmoothedAtoms {
            atoms,
            kernel,
            kernel_radius,
            ..
        } => CompactDistribution::SmoothedAtoms {
            atoms: atoms.clone(),
            kernel: convolve(kernel, &rho)?,
            kernel_radius: kernel_radius + 1.0 / r,
            support: spread,
        },
    };
    Ok((smoothed, rho_check))
}
