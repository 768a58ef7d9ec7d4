//! Test families, the inequality and identity suites, the norm-equivalence
//! sweep, and their reports.
//!
//! Suites never abort on a violated check: every comparison is recorded with
//! its verdict and the report carries an overall flag.

pub mod families;
pub mod report;
pub mod samplers;
pub mod suites;
pub mod sweep;

pub use families::{builtin_families, family_by_name, FamilyMember, Integrability, TestFamily};
pub use report::{CheckRecord, Relation, SuiteReport};
pub use suites::{
    check_adjointness, check_eq1, check_eq2, converse_check, mollifier_convergence, mollifier_suite,
    mollifier_transform_checks, SuiteConfig,
};
pub use sweep::{theorem_sweep, MemberProfile, SweepCell, SweepResult};

/// Multiplicative slack on every inequality check.
pub const SLACK: f64 = 0.05;

/// Exponents of the inequality suites.
pub const DEFAULT_P_LIST: [f64; 5] = [1.0, 4.0 / 3.0, 2.0, 4.0, f64::INFINITY];

/// Exponents of the norm-equivalence sweep.
pub const SWEEP_P_LIST: [f64; 4] = [1.0, 2.0, 4.5, f64::INFINITY];

/// Mollifier scales.
pub const DEFAULT_R_LIST: [f64; 4] = [2.0, 4.0, 8.0, 16.0];
