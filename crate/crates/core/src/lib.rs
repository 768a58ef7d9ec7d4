//! Weyl, Fourier–Wigner and symplectic Fourier transforms on a self-dual
//! discretization of the phase plane, with Schatten-norm diagnostics and a
//! harness for the norm equivalence `C_K⁻¹‖T̂‖_p ≤ ‖W(T)‖_{S^p} ≤ C_K‖T̂‖_p`.

mod dft;
pub mod distribution;
pub mod error;
pub mod grid;
pub mod schatten;
pub mod schema;
pub mod transforms;
pub mod verify;

pub use distribution::{Atom, Bump, CompactDistribution, DerivativeOrder, SupportBox};
pub use error::{Error, Result};
pub use grid::{
    format_exponent, fractional_shift, pair_bilinear, parse_exponent, GridFunction, OperatorMatrix, Pairing,
    PhaseGrid, SpatialVector,
};
pub use schatten::{compactness_profile, schatten_norm, singular_values, SchattenReport};
pub use schema::{parse_distribution, DistributionDoc};
pub use transforms::*;
