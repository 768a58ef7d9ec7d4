//! Inequality and identity suites.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::distribution::{bump_profile, CompactDistribution, SupportBox};
use crate::error::Result;
use crate::grid::{format_exponent, GridFunction, OperatorMatrix, Pairing, PhaseGrid};
use crate::schatten::schatten_norm;
use crate::transforms::{
    beta_check, conjugation_smoothing, gamma, gaussian, gaussian_vector, mollifier_samples, mollify,
    sft_of_distribution, symplectic_ft, weyl, window_and_ck, DEFAULT_TRANSITION_WIDTH,
};

use super::families::{Integrability, TestFamily};
use super::report::{CheckRecord, SuiteReport};
use super::samplers::{random_smooth_vector, random_test_function, random_trace_class, sample_rng, SampleRng};
use super::{DEFAULT_P_LIST, DEFAULT_R_LIST, SLACK};

/// Rank bound of the random trace-class samples.
pub const MAX_SAMPLE_RANK: usize = 8;

/// Absolute floor, relative to the operator scale, below which two computed
/// operator norms are indistinguishable from rounding.
pub const ROUNDING_FLOOR: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub grid: PhaseGrid,
    pub seed: u64,
    /// Number of random samples where a suite draws them.
    pub samples: usize,
    pub p_list: Vec<f64>,
    pub r_list: Vec<f64>,
    pub slack: f64,
}

impl SuiteConfig {
    pub fn new(grid: PhaseGrid, seed: u64) -> Self {
        Self {
            grid,
            seed,
            samples: 200,
            p_list: DEFAULT_P_LIST.to_vec(),
            r_list: DEFAULT_R_LIST.to_vec(),
            slack: SLACK,
        }
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    /// Independent stream `index` of the configured seed.
    fn rng(&self, index: usize) -> SampleRng {
        let mut rng = sample_rng(self.seed);
        rng.set_stream(index as u64);
        rng
    }

    fn factor(&self) -> f64 {
        1.0 + self.slack
    }
}

fn p_label(p: f64) -> Option<String> {
    Some(format_exponent(p))
}

fn eq1_records(cfg: &SuiteConfig, case: &str, x: &OperatorMatrix) -> Result<Vec<CheckRecord>> {
    let b = beta_check(x);
    cfg.p_list
        .iter()
        .map(|&p| {
            Ok(CheckRecord::at_most(
                "eq1",
                case,
                p_label(p),
                b.lp_norm(p)?,
                schatten_norm(x, p)?,
                cfg.factor(),
                0.0,
            ))
        })
        .collect()
}

/// `‖β̌(X)‖_p ≤ (1 + slack) ‖X‖_{S^p}` on random trace-class `X`, plus the
/// equality case `X = φ ⊗ φ` at `p = 1`.
pub fn check_eq1(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let g = cfg.grid;
    let phi = gaussian_vector(g);
    let witness = OperatorMatrix::rank_one(&phi, &phi)?;
    let mut records = vec![CheckRecord::close_absolute(
        "eq1-equality",
        "gaussian",
        p_label(1.0),
        beta_check(&witness).lp_norm(1.0)?,
        schatten_norm(&witness, 1.0)?,
        1e-6,
    )];
    records.extend(eq1_records(cfg, "gaussian", &witness)?);
    records.extend(eq1_records(cfg, "zero", &OperatorMatrix::zeros(g))?);
    let random: Vec<Vec<CheckRecord>> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let x = random_trace_class(g, &mut cfg.rng(i), MAX_SAMPLE_RANK);
            eq1_records(cfg, &format!("random-{i}"), &x)
        })
        .collect::<Result<_>>()?;
    records.extend(random.into_iter().flatten());
    Ok(SuiteReport::new("eq1", g.n(), cfg.seed, records))
}

fn eq2_records(cfg: &SuiteConfig, case: &str, f: &GridFunction) -> Result<Vec<CheckRecord>> {
    let op = gamma(f);
    cfg.p_list
        .iter()
        .map(|&p| {
            Ok(CheckRecord::at_most(
                "eq2",
                case,
                p_label(p),
                schatten_norm(&op, p)?,
                f.lp_norm(p)?,
                cfg.factor(),
                0.0,
            ))
        })
        .collect()
}

/// `‖Γ f‖_{S^p} ≤ (1 + slack) ‖f‖_p` on random smooth `f`.
pub fn check_eq2(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let g = cfg.grid;
    let sg = symplectic_ft(&gaussian(g));
    let mut records = vec![CheckRecord::close_absolute(
        "gaussian-l1",
        "sft-gaussian",
        p_label(1.0),
        sg.lp_norm(1.0)?,
        1.0,
        1e-6,
    )];
    records.extend(eq2_records(cfg, "sft-gaussian", &sg)?);
    records.extend(eq2_records(cfg, "zero", &GridFunction::zeros(g))?);
    let random: Vec<Vec<CheckRecord>> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let f = random_test_function(g, &mut cfg.rng(i));
            eq2_records(cfg, &format!("random-{i}"), &f)
        })
        .collect::<Result<_>>()?;
    records.extend(random.into_iter().flatten());
    Ok(SuiteReport::new("eq2", g.n(), cfg.seed, records))
}

/// Rank-one checks per family member in the `L_T` chain.
pub const CHAIN_VECTORS_PER_MEMBER: usize = 4;

/// `tr(Γ(f) X) = ⟨f, β̌(X)⟩` on random pairs (relative `1e-5`), and the chain
/// `⟨(h T)ˇ, β̌(φ ⊗ ψ)⟩ = (W(T)φ)(ψ)` on each family member (relative `1e-4`).
pub fn check_adjointness(cfg: &SuiteConfig, family: &TestFamily) -> Result<SuiteReport> {
    let g = cfg.grid;
    let adjoint = |case: &str, f: &GridFunction, x: &OperatorMatrix| -> Result<CheckRecord> {
        let lhs = gamma(f).trace_product(x)?;
        let rhs = f.pair_bilinear(&beta_check(x))?;
        Ok(CheckRecord::close("adjoint", case, None, lhs, rhs, 1e-5))
    };
    let phi = gaussian_vector(g);
    let xg = OperatorMatrix::rank_one(&phi, &phi)?;
    let sg = symplectic_ft(&gaussian(g));
    let mut records = vec![
        adjoint("zero-f", &GridFunction::zeros(g), &xg)?,
        adjoint("zero-x", &sg, &OperatorMatrix::zeros(g))?,
        adjoint("gaussian", &sg, &xg)?,
    ];
    // ⟨2e^{-2π|ζ|²}, e^{-π|ζ|²}⟩ = 2/3
    let closed = Complex64::new(2.0 / 3.0, 0.0);
    records.push(CheckRecord::close("adjoint-closed-form", "gaussian", None, sg.pair_bilinear(&beta_check(&xg))?, closed, 1e-6));
    let random: Vec<CheckRecord> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = cfg.rng(i);
            let f = random_test_function(g, &mut rng);
            let x = random_trace_class(g, &mut rng, MAX_SAMPLE_RANK);
            adjoint(&format!("random-{i}"), &f, &x)
        })
        .collect::<Result<_>>()?;
    records.extend(random);

    let wp = window_and_ck(family.k, g, DEFAULT_TRANSITION_WIDTH)?;
    for (mi, m) in family.members.iter().enumerate() {
        let CompactDistribution::Density { values, .. } = &m.distribution else {
            continue;
        };
        let lt = symplectic_ft(&wp.h_win.hadamard(values)?);
        let w = weyl(&m.distribution, g)?;
        for j in 0..CHAIN_VECTORS_PER_MEMBER {
            let mut rng = cfg.rng(cfg.samples + mi * CHAIN_VECTORS_PER_MEMBER + j);
            let (phi, psi) = (random_smooth_vector(g, &mut rng), random_smooth_vector(g, &mut rng));
            let lhs = lt.pair_bilinear(&beta_check(&OperatorMatrix::rank_one(&phi, &psi)?))?;
            let rhs = w.apply(&phi)?.pair_bilinear(&psi)?;
            records.push(CheckRecord::close("lt-chain", &format!("{}-{j}", m.name), None, lhs, rhs, 1e-4));
        }
    }
    Ok(SuiteReport::new("adjoint", g.n(), cfg.seed, records))
}

/// Random test functions per member in the converse identity.
pub const CONVERSE_TEST_FUNCTIONS: usize = 20;

const CONVERSE_Q: [f64; 3] = [1.0, 2.0, f64::INFINITY];

fn converse_member(cfg: &SuiteConfig, name: &str, t: &CompactDistribution, k: SupportBox, stream: usize) -> Result<Vec<CheckRecord>> {
    let g = cfg.grid;
    let wp = window_and_ck(k, g, DEFAULT_TRANSITION_WIDTH)?;
    let w = weyl(t, g)?;
    let z = conjugation_smoothing(&w, &wp)?;
    let tc = sft_of_distribution(t, g)?;
    let identity = |case: String, phi: &GridFunction| -> Result<CheckRecord> {
        let lhs = gamma(phi).trace_product(&z)?;
        let rhs = phi.pair_bilinear(&tc)?;
        Ok(CheckRecord::close("converse-identity", &case, None, lhs, rhs, 1e-3))
    };
    let mut records = vec![identity(format!("{name}-zero"), &GridFunction::zeros(g))?];
    for j in 0..CONVERSE_TEST_FUNCTIONS {
        let phi = random_test_function(g, &mut cfg.rng(stream * CONVERSE_TEST_FUNCTIONS + j));
        records.push(identity(format!("{name}-{j}"), &phi)?);
    }
    for q in CONVERSE_Q {
        let wq = schatten_norm(&w, q)?;
        records.push(CheckRecord::at_most("smoothing-bound", name, p_label(q), schatten_norm(&z, q)?, wp.c_k * wq, cfg.factor(), 0.0));
        records.push(CheckRecord::at_most("lower-bound", name, p_label(q), tc.lp_norm(q)?, wp.c_k * wq, cfg.factor(), 0.0));
    }
    Ok(records)
}

/// Builds `Z` from the window of the family's box and checks
/// `tr(Γ(φ) Z) = ⟨φ, Ť⟩`, `‖Z‖_{S^q} ≤ C_K ‖W(T)‖_{S^q}` and
/// `‖Ť‖_q ≤ C_K ‖W(T)‖_{S^q}` on every density member.
pub fn converse_check(cfg: &SuiteConfig, family: &TestFamily) -> Result<SuiteReport> {
    let g = cfg.grid;
    let densities: Vec<(usize, &super::families::FamilyMember)> = family
        .members
        .iter()
        .enumerate()
        .filter(|(_, m)| matches!(m.distribution, CompactDistribution::Density { .. }))
        .collect();
    let parts: Vec<Vec<CheckRecord>> = densities
        .par_iter()
        .map(|(i, m)| converse_member(cfg, &m.name, &m.distribution, family.k, *i))
        .collect::<Result<_>>()?;
    let mut records: Vec<CheckRecord> = parts.into_iter().flatten().collect();

    // Gaussian-weighted bump tested against φ = ǧ.
    let k = SupportBox::square(2.0);
    let tg = CompactDistribution::density_from_fn(g, k, |x, y| {
        let r2 = x * x + y * y;
        Complex64::new((-PI / 2.0 * r2).exp() * bump_profile(r2 / 4.0), 0.0)
    })?;
    let wp = window_and_ck(k, g, DEFAULT_TRANSITION_WIDTH)?;
    let z = conjugation_smoothing(&weyl(&tg, g)?, &wp)?;
    let sg = symplectic_ft(&gaussian(g));
    let lhs = gamma(&sg).trace_product(&z)?;
    let rhs = sg.pair_bilinear(&sft_of_distribution(&tg, g)?)?;
    records.push(CheckRecord::close("converse-identity", "gaussian-bump", None, lhs, rhs, 1e-3));
    Ok(SuiteReport::new("converse", g.n(), cfg.seed, records))
}

/// `ρ̌_r(0) = 1`, `‖ρ̌_r‖_∞ = 1`, unit grid mass, and `ρ̌_r → 1` on `|ξ|, |η| ≤ 2`.
pub fn mollifier_transform_checks(cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    let g = cfg.grid;
    let nodes = g.nodes();
    let mut records = Vec::new();
    let mut previous: Option<f64> = None;
    for &r in &cfg.r_list {
        let rho = mollifier_samples(g, r)?;
        let rc = symplectic_ft(&rho);
        let case = format!("r{r}");
        let one = Complex64::new(1.0, 0.0);
        records.push(CheckRecord::close("rho-check-origin", &case, None, rc.at(g.n() / 2, g.n() / 2), one, 1e-8));
        records.push(CheckRecord::close_absolute("rho-check-sup", &case, None, rc.max_abs(), 1.0, 1e-8));
        records.push(CheckRecord::close_absolute("rho-mass", &case, None, rho.integral().re, 1.0, 1e-6));
        let dev = rc
            .values()
            .indexed_iter()
            .filter(|((m, k), _)| nodes[*m].abs() <= 2.0 && nodes[*k].abs() <= 2.0)
            .map(|(_, v)| (v - 1.0).norm())
            .fold(0.0, f64::max);
        if let Some(prev) = previous {
            records.push(CheckRecord::at_most("rho-check-monotone", &case, None, dev, prev, 1.0, 0.0));
        }
        previous = Some(dev);
    }
    if let (Some(dev), Some(r)) = (previous, cfg.r_list.last()) {
        records.push(CheckRecord::at_most("rho-check-compact", &format!("r{r}"), None, dev, 1.0, 1e-2, 0.0));
    }
    Ok(records)
}

/// For each `r`: `‖W(ρ_r ∗ T) - W(T)‖_{S^∞} ≤ (1 + slack) C_K max|ρ̌_r Ť - Ť|`
/// with `K = supp T + B`, the left side nonincreasing in `r` (within the slack),
/// and `W(ρ_r ∗ T)` trace class. With `vanishing`, also
/// `‖W(ρ_r ∗ T) - W(T)‖ < 1e-2 ‖W(T)‖` at the largest `r`.
pub fn mollifier_convergence(cfg: &SuiteConfig, case: &str, t: &CompactDistribution, vanishing: bool) -> Result<Vec<CheckRecord>> {
    let g = cfg.grid;
    let k = t.support_box().expanded(1.0);
    let wp = window_and_ck(k, g, DEFAULT_TRANSITION_WIDTH)?;
    let w = weyl(t, g)?;
    let w_op = schatten_norm(&w, f64::INFINITY)?;
    let floor = ROUNDING_FLOOR * w_op.max(1.0);
    let tc = sft_of_distribution(t, g)?;
    let mut records = Vec::new();
    let mut previous: Option<f64> = None;
    let mut last = 0.0;
    for &r in &cfg.r_list {
        let (tr, rc) = mollify(t, r, g)?;
        let wr = weyl(&tr, g)?;
        let lhs = schatten_norm(&wr.sub(&w)?, f64::INFINITY)?;
        let gap = rc.hadamard(&tc)?.sub(&tc)?.max_abs();
        let label = format!("{case}-r{r}");
        records.push(CheckRecord::at_most("mollifier-bound", &label, None, lhs, wp.c_k * gap, cfg.factor(), floor));
        if let Some(prev) = previous {
            records.push(CheckRecord::at_most("mollifier-monotone", &label, None, lhs, prev, cfg.factor(), floor));
        }
        records.push(CheckRecord::at_most("mollifier-trace-class", &label, p_label(1.0), schatten_norm(&wr, 1.0)?, f64::MAX, 1.0, 0.0));
        previous = Some(lhs);
        last = lhs;
    }
    if vanishing {
        let r = cfg.r_list.last().copied().unwrap_or(f64::NAN);
        records.push(CheckRecord::at_most("mollifier-vanishing", &format!("{case}-r{r}"), None, last, w_op, 1e-2, 0.0));
    }
    Ok(records)
}

/// Mollifier checks over every member of the given families; members whose
/// transform is integrable for all `p` get the vanishing check.
pub fn mollifier_suite(cfg: &SuiteConfig, families: &[&TestFamily]) -> Result<SuiteReport> {
    let members: Vec<_> = families.iter().flat_map(|f| f.members.iter()).collect();
    let parts: Vec<Vec<CheckRecord>> = members
        .par_iter()
        .map(|m| mollifier_convergence(cfg, &m.name, &m.distribution, m.integrability == Integrability::Everywhere))
        .collect::<Result<_>>()?;
    let mut records = mollifier_transform_checks(cfg)?;
    records.extend(parts.into_iter().flatten());
    Ok(SuiteReport::new("mollifier", cfg.grid.n(), cfg.seed, records))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::families::family_by_name;

    fn cfg(samples: usize) -> SuiteConfig {
        SuiteConfig::new(PhaseGrid::new(256).unwrap(), 42).with_samples(samples)
    }

    #[test]
    fn eq1_small_run() {
        let r = check_eq1(&cfg(4)).unwrap();
        assert!(r.pass, "{:?}", r.failures().collect::<Vec<_>>());
        assert_eq!(r.records.len(), 1 + 5 * (2 + 4));
    }

    #[test]
    fn eq2_small_run() {
        let r = check_eq2(&cfg(4)).unwrap();
        assert!(r.pass, "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn adjoint_small_run() {
        let c = cfg(4);
        let f1 = family_by_name(c.grid, "F1").unwrap();
        let r = check_adjointness(&c, &f1).unwrap();
        assert!(r.pass, "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = check_eq1(&cfg(2)).unwrap();
        let b = check_eq1(&cfg(2)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mollifier_transform() {
        let recs = mollifier_transform_checks(&cfg(0)).unwrap();
        assert!(recs.iter().all(|r| r.pass), "{recs:?}");
    }

    #[test]
    fn mollifier_delta() {
        let c = cfg(0);
        let t = CompactDistribution::dirac(c.grid, 0.0, 0.0).unwrap();
        let recs = mollifier_convergence(&c, "delta", &t, false).unwrap();
        assert!(recs.iter().all(|r| r.pass), "{recs:?}");
    }
}
