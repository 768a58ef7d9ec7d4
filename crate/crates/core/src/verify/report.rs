//! Check records and suite reports. JSON is canonical; the CSV rows are a flat
//! projection with one row per record.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Relation {
    /// `lhs ≤ factor · rhs + floor`.
    AtMost { factor: f64, floor: f64 },
    /// `|L - R| ≤ tolerance · max(|L|, |R|)`.
    Close { tolerance: f64 },
    /// `|L - R| ≤ tolerance`.
    CloseAbsolute { tolerance: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: String,
    pub case: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<String>,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
    /// The quantity compared against `limit`.
    pub measured: f64,
    pub limit: f64,
    pub pass: bool,
}

impl CheckRecord {
    pub fn at_most(check: &str, case: &str, p: Option<String>, lhs: f64, rhs: f64, factor: f64, floor: f64) -> Self {
        let limit = factor * rhs + floor;
        Self {
            check: check.to_string(),
            case: case.to_string(),
            p,
            lhs,
            rhs,
            relation: Relation::AtMost { factor, floor },
            measured: lhs,
            limit,
            pass: lhs.is_finite() && lhs <= limit,
        }
    }

    pub fn close(check: &str, case: &str, p: Option<String>, lhs: Complex64, rhs: Complex64, tolerance: f64) -> Self {
        let scale = lhs.norm().max(rhs.norm());
        let measured = if scale == 0.0 { 0.0 } else { (lhs - rhs).norm() / scale };
        Self {
            check: check.to_string(),
            case: case.to_string(),
            p,
            lhs: lhs.norm(),
            rhs: rhs.norm(),
            relation: Relation::Close { tolerance },
            measured,
            limit: tolerance,
            pass: measured.is_finite() && measured <= tolerance,
        }
    }

    pub fn close_absolute(check: &str, case: &str, p: Option<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let measured = (lhs - rhs).abs();
        Self {
            check: check.to_string(),
            case: case.to_string(),
            p,
            lhs,
            rhs,
            relation: Relation::CloseAbsolute { tolerance },
            measured,
            limit: tolerance,
            pass: measured.is_finite() && measured <= tolerance,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub grid_n: usize,
    pub seed: u64,
    pub records: Vec<CheckRecord>,
    pub violations: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub suite: String,
    pub check: String,
    pub case: String,
    pub p: String,
    pub lhs: f64,
    pub rhs: f64,
    pub measured: f64,
    pub limit: f64,
    pub pass: bool,
}

impl SuiteReport {
    pub fn new(suite: &str, grid_n: usize, seed: u64, records: Vec<CheckRecord>) -> Self {
        let violations = records.iter().filter(|r| !r.pass).count();
        Self {
            suite: suite.to_string(),
            grid_n,
            seed,
            records,
            violations,
            pass: violations == 0,
        }
    }

    /// Records of a given check, in order.
    pub fn records_for<'a>(&'a self, check: &'a str) -> impl Iterator<Item = &'a CheckRecord> + 'a {
        self.records.iter().filter(move |r| r.check == check)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.pass)
    }

    pub fn csv_rows(&self) -> Vec<CheckRow> {
        self.records
            .iter()
            .map(|r| CheckRow {
                suite: self.suite.clone(),
                check: r.check.clone(),
                case: r.case.clone(),
                p: r.p.clone().unwrap_or_default(),
                lhs: r.lhs,
                rhs: r.rhs,
                measured: r.measured,
                limit: r.limit,
                pass: r.pass,
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Combines reports of several suites into one.
    pub fn merge(suite: &str, parts: Vec<SuiteReport>) -> Self {
        let grid_n = parts.first().map_or(0, |p| p.grid_n);
        let seed = parts.first().map_or(0, |p| p.seed);
        let records = parts.into_iter().flat_map(|p| p.records).collect();
        Self::new(suite, grid_n, seed, records)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts() {
        assert!(CheckRecord::at_most("a", "x", None, 1.04, 1.0, 1.05, 0.0).pass);
        assert!(!CheckRecord::at_most("a", "x", None, 1.06, 1.0, 1.05, 0.0).pass);
        assert!(!CheckRecord::at_most("a", "x", None, f64::NAN, 1.0, 1.05, 0.0).pass);
        let one = Complex64::new(1.0, 0.0);
        assert!(CheckRecord::close("b", "x", None, one, one * (1.0 + 1e-7), 1e-6).pass);
        assert!(!CheckRecord::close("b", "x", None, one, -one, 1e-6).pass);
        assert!(CheckRecord::close("b", "x", None, one * 0.0, one * 0.0, 1e-6).pass);
        assert!(CheckRecord::close_absolute("c", "x", None, 1.0, 1.0 + 1e-7, 1e-6).pass);
    }

    #[test]
    fn report_round_trip() {
        let recs = vec![
            CheckRecord::at_most("eq1", "m0", Some("inf".into()), 0.5, 1.0, 1.05, 0.0),
            CheckRecord::at_most("eq1", "m1", Some("2".into()), 2.0, 1.0, 1.05, 0.0),
        ];
        let r = SuiteReport::new("eq1", 256, 7, recs);
        assert_eq!(r.violations, 1);
        assert!(!r.pass);
        let back: SuiteReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(r.csv_rows().len(), 2);
    }
}
