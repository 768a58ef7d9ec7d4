//! Seeded random objects with Gaussian envelopes, so that grid truncation stays
//! far below every tolerance.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::grid::{GridFunction, OperatorMatrix, PhaseGrid, SpatialVector};

pub type SampleRng = ChaCha8Rng;

/// Amplitude, center, width and modulation of one phase-space Gaussian.
type Packet2d = (Complex64, (f64, f64), f64, (f64, f64));

pub fn sample_rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal_complex(rng: &mut SampleRng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Sum of one to three wave packets `c e^{-π((t-μ)/s)²} e^{2πiνt}`.
pub fn random_smooth_vector(grid: PhaseGrid, rng: &mut SampleRng) -> SpatialVector {
    let packets: Vec<(Complex64, f64, f64, f64)> = (0..rng.random_range(1..=3))
        .map(|_| {
            (
                normal_complex(rng),
                rng.random_range(-1.5..1.5),
                rng.random_range(0.5..1.2),
                rng.random_range(-1.5..1.5),
            )
        })
        .collect();
    SpatialVector::sample(grid, |t| {
        packets
            .iter()
            .map(|(c, mu, s, nu)| c * Complex64::from_polar((-PI * ((t - mu) / s).powi(2)).exp(), 2.0 * PI * nu * t))
            .sum()
    })
}

/// `Σ_{k ≤ rank} u_k ⊗ v_k` with rank drawn from `1..=max_rank`.
pub fn random_trace_class(grid: PhaseGrid, rng: &mut SampleRng, max_rank: usize) -> OperatorMatrix {
    let rank = rng.random_range(1..=max_rank.max(1));
    let mut x = OperatorMatrix::zeros(grid);
    for _ in 0..rank {
        let (u, v) = (random_smooth_vector(grid, rng), random_smooth_vector(grid, rng));
        x = x.add(&OperatorMatrix::rank_one(&u, &v).expect("same grid")).expect("same grid");
    }
    x
}

/// Sum of one to four modulated phase-space Gaussians centered in `[-2, 2]²`.
pub fn random_test_function(grid: PhaseGrid, rng: &mut SampleRng) -> GridFunction {
    let terms: Vec<Packet2d> = (0..rng.random_range(1..=4))
        .map(|_| {
            (
                normal_complex(rng),
                (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)),
                rng.random_range(0.5..1.5),
                (rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5)),
            )
        })
        .collect();
    GridFunction::from_fn(grid, |x, y| {
        terms
            .iter()
            .map(|(c, (cx, cy), s, (mx, my))| {
                let r2 = ((x - cx).powi(2) + (y - cy).powi(2)) / (s * s);
                c * Complex64::from_polar((-PI * r2).exp(), 2.0 * PI * (mx * x + my * y))
            })
            .sum()
    })
}

/// Haar-like random unitary from the QR factorization of a Gaussian matrix.
pub fn random_unitary(n: usize, rng: &mut SampleRng) -> DMatrix<Complex64> {
    let a = DMatrix::from_fn(n, n, |_, _| normal_complex(rng));
    a.qr().q()
}
