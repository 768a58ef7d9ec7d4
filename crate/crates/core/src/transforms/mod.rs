//! Fourier transforms, ρ(x, y), the Fourier–Wigner and Weyl transforms, windows,
//! mollification and conjugation smoothing.

pub mod fourier;
pub mod mollify;
pub mod rho;
pub mod smoothing;
pub mod weyl;
pub mod wigner;
pub mod window;

pub use fourier::{
    convolve, fourier_2d, interpolate_derivative, sft_of_distribution, shifted_derivative, symplectic_ft,
    TrigInterpolant,
};
pub use mollify::{mollifier_samples, mollify};
pub use rho::rho_matrix;
pub use smoothing::conjugation_smoothing;
pub use weyl::{gamma, weyl, weyl_definitional_pairing, weyl_samples};
pub use wigner::{beta_check, fourier_wigner, gaussian, gaussian_vector, GaussianEnvelope, GAUSSIAN_CONSTANT};
pub use window::{smooth_step, window_and_ck, WindowPair, DEFAULT_TRANSITION_WIDTH};
