//! JSON documents describing a distribution.
//!
//! ```json
//! {"kind": "atoms", "atoms": [{"x": 0.3, "y": -0.7, "dx": 0, "dy": 1, "re": 1.0, "im": 0.0}]}
//! {"kind": "circle", "radius": 2.0, "nodes": 256}
//! {"kind": "density", "bumps": [{"center": [0.0, 0.0], "radius": 2.0, "modulation": [0.5, 0.0]}]}
//! {"kind": "density", "support": {"x_min": -1, "x_max": 1, "y_min": -1, "y_max": 1},
//!  "samples": {"n": 64, "re": [...], "im": [...]}}
//! ```
//!
//! `dx`, `dy`, `im` default to zero and `re` to one. Sample arrays are row-major
//! with the first coordinate as the row index.

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::distribution::{Atom, Bump, CompactDistribution, DerivativeOrder, SupportBox};
use crate::error::{Error, Result};
use crate::grid::{GridFunction, PhaseGrid};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum DistributionDoc {
    Atoms {
        atoms: Vec<AtomDoc>,
    },
    Density {
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        bumps: Vec<Bump>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        samples: Option<SamplesDoc>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        support: Option<SupportBox>,
    },
    Circle {
        radius: f64,
        nodes: i64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomDoc {
    pub x: f64,
    pub y: f64,
    #[serde(default)]
    pub dx: u32,
    #[serde(default)]
    pub dy: u32,
    #[serde(default = "one")]
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplesDoc {
    pub n: usize,
    pub re: Vec<f64>,
    #[serde(default)]
    pub im: Vec<f64>,
}

impl DistributionDoc {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("distribution documents always serialize")
    }

    pub fn build(&self, grid: PhaseGrid) -> Result<CompactDistribution> {
        match self {
            Self::Atoms { atoms } => CompactDistribution::atoms(
                grid,
                atoms
                    .iter()
                    .map(|a| {
                        Atom::derivative(
                            a.x,
                            a.y,
                            DerivativeOrder::new(a.dx, a.dy),
                            Complex64::new(a.re, a.im),
                        )
                    })
                    .collect(),
            ),
            Self::Circle { radius, nodes } => {
                if *nodes < 0 {
                    return Err(Error::Schema(format!("negative node count {nodes}")));
                }
                CompactDistribution::circle(grid, *radius, *nodes as usize)
            }
            Self::Density {
                bumps,
                samples,
                support,
            } => match (bumps.is_empty(), samples) {
                (false, None) => CompactDistribution::bumps(grid, bumps),
                (true, Some(s)) => {
                    let support = support.ok_or_else(|| {
                        Error::Schema("sampled density needs a support box".to_string())
                    })?;
                    CompactDistribution::density(s.to_grid_function(grid)?, support)
                }
                _ => Err(Error::Schema(
                    "density needs exactly one of `bumps` or `samples`".to_string(),
                )),
            },
        }
    }
}

impl SamplesDoc {
    fn to_grid_function(&self, grid: PhaseGrid) -> Result<GridFunction> {
        let n = grid.n();
        if self.n != n {
            return Err(Error::GridMismatch {
                left: self.n,
                right: n,
            });
        }
        if self.re.len() != n * n || !(self.im.is_empty() || self.im.len() == n * n) {
            return Err(Error::ShapeMismatch {
                expected: n * n,
                actual: self.re.len(),
            });
        }
        let values = Array2::from_shape_fn((n, n), |(m, k)| {
            let idx = m * n + k;
            Complex64::new(self.re[idx], self.im.get(idx).copied().unwrap_or(0.0))
        });
        GridFunction::from_array(grid, values)
    }
}

pub fn parse_distribution(text: &str, grid: PhaseGrid) -> Result<CompactDistribution> {
    DistributionDoc::from_json(text)?.build(grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_each_kind() {
        let g = PhaseGrid::new(64).unwrap();
        let t = parse_distribution(r#"{"kind":"atoms","atoms":[{"x":0.5,"y":-0.25,"dy":1}]}"#, g)
            .unwrap();
        let CompactDistribution::AtomicSum { atoms, .. } = t else {
            panic!()
        };
        assert_eq!(atoms[0].order, DerivativeOrder::new(0, 1));
        assert_eq!(atoms[0].weight, Complex64::new(1.0, 0.0));

        let t = parse_distribution(r#"{"kind":"circle","radius":1.5,"nodes":128}"#, g).unwrap();
        assert!(matches!(t, CompactDistribution::AtomicSum { ref atoms, .. } if atoms.len() == 128));

        let t = parse_distribution(
            r#"{"kind":"density","bumps":[{"center":[0.0,0.5],"radius":1.0}]}"#,
            g,
        )
        .unwrap();
        assert_eq!(t.support_box(), SupportBox::new((-1.0, 1.0), (-0.5, 1.5)));
    }

    #[test]
    fn sampled_density() {
        let g = PhaseGrid::new(64).unwrap();
        let mut re = vec![0.0; 64 * 64];
        re[32 * 64 + 32] = 2.0;
        let doc = DistributionDoc::Density {
            bumps: vec![],
            samples: Some(SamplesDoc { n: 64, re, im: vec![] }),
            support: Some(SupportBox::square(0.5)),
        };
        let text = doc.to_json();
        assert_eq!(DistributionDoc::from_json(&text).unwrap(), doc);
        let t = doc.build(g).unwrap();
        let CompactDistribution::Density { values, .. } = t else {
            panic!()
        };
        assert_eq!(values.at(32, 32), Complex64::new(2.0, 0.0));
    }

    #[test]
    fn rejects_bad_documents() {
        let g = PhaseGrid::new(64).unwrap();
        assert!(matches!(
            parse_distribution(r#"{"kind":"circle","radius":1.0,"nodes":-4}"#, g),
            Err(Error::Schema(_))
        ));
        assert!(parse_distribution(r#"{"kind":"blob"}"#, g).is_err());
        assert!(parse_distribution(r#"{"kind":"density"}"#, g).is_err());
        assert!(parse_distribution(r#"{"kind":"atoms","atoms":[{"x":9.0,"y":0.0}]}"#, g).is_err());
    }
}
