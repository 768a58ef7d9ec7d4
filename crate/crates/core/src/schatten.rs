//! Singular values, Schatten norms and compactness diagnostics.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{check_exponent, format_exponent, weighted_pnorm, OperatorMatrix};

/// Relative threshold below which a singular value does not count toward the rank.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Descending singular values; computed once per matrix.
pub fn singular_values(a: &OperatorMatrix) -> Result<&[f64]> {
    if let Some(s) = a.spectrum.get() {
        return Ok(s);
    }
    if !a.is_finite() {
        return Err(Error::NonFinite("operator entries"));
    }
    let mut s: Vec<f64> = a.entries().clone().singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    Ok(a.spectrum.get_or_init(|| s))
}

pub fn schatten_norm(a: &OperatorMatrix, p: f64) -> Result<f64> {
    check_exponent(p)?;
    Ok(weighted_pnorm(singular_values(a)?.iter().copied(), p, 1.0))
}

/// `σ_k / σ₁` for each requested 1-based index `k`.
pub fn compactness_profile(a: &OperatorMatrix, ks: &[usize]) -> Result<Vec<f64>> {
    let s = singular_values(a)?;
    let top = s[0];
    ks.iter()
        .map(|&k| {
            if k == 0 || k > s.len() {
                return Err(Error::OutOfRange(format!("singular value index {k} not in 1..={}", s.len())));
            }
            Ok(if top == 0.0 { 0.0 } else { s[k - 1] / top })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchattenReport {
    pub singular_values: Vec<f64>,
    /// Keyed by the exponent as spelled on the command line (`inf` for ∞).
    pub norms: BTreeMap<String, f64>,
    pub numerical_rank: usize,
}

impl SchattenReport {
    pub fn new(a: &OperatorMatrix, ps: &[f64]) -> Result<Self> {
        let s = singular_values(a)?;
        let mut norms = BTreeMap::new();
        for &p in ps {
            norms.insert(format_exponent(p), schatten_norm(a, p)?);
        }
        let cut = s[0] * RANK_TOLERANCE;
        Ok(Self {
            singular_values: s.to_vec(),
            norms,
            numerical_rank: s.iter().filter(|&&v| v > cut).count(),
        })
    }
}
