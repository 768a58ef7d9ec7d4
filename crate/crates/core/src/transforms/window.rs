//! Smooth cutoff `f ≡ 1` on a box `K`, the window `h = e^{π|z|²/2} f` and the
//! constant `C_K = ‖ȟ‖₁`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::distribution::SupportBox;
use crate::error::{Error, Result};
use crate::grid::{GridFunction, PhaseGrid};

use super::fourier::symplectic_ft;

pub const DEFAULT_TRANSITION_WIDTH: f64 = 0.5;

#[derive(Clone, Debug)]
pub struct WindowPair {
    pub k: SupportBox,
    pub width: f64,
    pub f_win: GridFunction,
    pub h_win: GridFunction,
    pub h_check: GridFunction,
    pub c_k: f64,
}

/// The `C^∞` step: 1 for `t ≤ 0`, 0 for `t ≥ 1`.
pub fn smooth_step(t: f64) -> f64 {
    let psi = |t: f64| if t > 0.0 { (-1.0 / t).exp() } else { 0.0 };
    let (a, b) = (psi(1.0 - t), psi(t));
    a / (a + b)
}

/// `f(z) = S(dist(z, K) / w)`.
pub fn window_and_ck(k: SupportBox, grid: PhaseGrid, width: f64) -> Result<WindowPair> {
    if !(width > 0.0 && width.is_finite()) {
        return Err(Error::OutOfRange(format!("transition width {width}")));
    }
    if !k.expanded(width + 1.0).fits(grid, 0.0) {
        return Err(Error::SupportTooLarge(k.to_string()));
    }
    let f_win = GridFunction::from_fn(grid, |x, y| Complex64::new(smooth_step(k.distance(x, y) / width), 0.0));
    let h_win = GridFunction::from_fn(grid, |x, y| {
        let f = smooth_step(k.distance(x, y) / width);
        Complex64::new(if f == 0.0 { 0.0 } else { (PI / 2.0 * (x * x + y * y)).exp() * f }, 0.0)
    });
    let h_check = symplectic_ft(&h_win);
    let c_k = h_check.lp_norm(1.0)?;
    Ok(WindowPair {
        k,
        width,
        f_win,
        h_win,
        h_check,
        c_k,
    })
}
