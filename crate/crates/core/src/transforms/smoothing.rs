//! Conjugation smoothing `Z = h² Σ_z ȟ(z) ρ(z) W ρ(-z)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::dft::CenteredDft;
use crate::error::Result;
use crate::grid::{GridFunction, OperatorMatrix};

use super::window::WindowPair;

pub fn conjugation_smoothing(w: &OperatorMatrix, wp: &WindowPair) -> Result<OperatorMatrix> {
    smooth_with(w, &wp.h_check)
}

/// For grid-multiple `z = (s h, y)` conjugation is exact:
/// `(ρ(z) W ρ(-z))_ij = e^{2πi y (i - j) h} W[i + s, j + s]`, so the `y` sum is a
/// DFT of each row of `ȟ`.
pub(crate) fn smooth_with(w: &OperatorMatrix, weight: &GridFunction) -> Result<OperatorMatrix> {
    let grid = w.grid();
    grid.ensure_same(&weight.grid())?;
    let n = grid.n();
    let dft = CenteredDft::for_len(n);
    let area = grid.cell_area();
    // kernels[m][d] = h² Σ_k ȟ(x_m, y_k) e^{2πi y_k d h}
    let kernels: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|m| {
            let mut row: Vec<Complex64> = weight.values().row(m).iter().map(|v| v * area).collect();
            dft.inverse(&mut row);
            row.rotate_left(n / 2);
            row
        })
        .collect();
    let e = w.entries();
    let mut z = DMatrix::zeros(n, n);
    z.as_mut_slice()
        .par_chunks_mut(n)
        .enumerate()
        .for_each(|(j, col)| {
            for (m, kern) in kernels.iter().enumerate() {
                let shift = m + n / 2;
                let src = e.column((j + shift) % n);
                for (i, v) in col.iter_mut().enumerate() {
                    *v += kern[(i + n - j) % n] * src[(i + shift) % n];
                }
            }
        });
    Ok(OperatorMatrix::from_entries(grid, z))
}
