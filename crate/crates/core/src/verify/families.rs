//! Built-in test families: smooth bumps (F1), point-mass sums (F2) and circle
//! measures (F3), all supported in `[-2, 2]²`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::distribution::{Atom, Bump, CompactDistribution, DerivativeOrder, SupportBox};
use crate::error::{Error, Result};
use crate::grid::PhaseGrid;

/// Exponents `p` for which `‖T̂‖_p` is finite on the continuum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Integrability {
    Everywhere,
    SupremumOnly,
    Nowhere,
    Above { threshold: f64 },
}

impl Integrability {
    pub fn finite_at(&self, p: f64) -> bool {
        match self {
            Self::Everywhere => true,
            Self::SupremumOnly => p.is_infinite(),
            Self::Nowhere => false,
            Self::Above { threshold } => p > *threshold,
        }
    }
}

#[derive(Clone, Debug)]
pub struct FamilyMember {
    pub name: String,
    pub distribution: CompactDistribution,
    pub integrability: Integrability,
}

#[derive(Clone, Debug)]
pub struct TestFamily {
    pub name: String,
    pub description: String,
    pub k: SupportBox,
    pub members: Vec<FamilyMember>,
}

/// Smallest grid the built-in families are resolved on.
pub const MIN_FAMILY_GRID: usize = 256;

fn member(name: &str, distribution: CompactDistribution, integrability: Integrability) -> FamilyMember {
    FamilyMember {
        name: name.to_string(),
        distribution,
        integrability,
    }
}

fn bump(center: (f64, f64), radius: f64, modulation: (f64, f64)) -> Bump {
    Bump {
        center,
        radius,
        modulation,
        amplitude: 1.0,
    }
}

fn f1(grid: PhaseGrid) -> Result<TestFamily> {
    let bumps = [
        ("centered-r2", bump((0.0, 0.0), 2.0, (0.0, 0.0))),
        ("offset-modulated", bump((0.5, -0.3), 1.2, (0.5, 0.0))),
        ("narrow", bump((-1.0, 1.0), 0.8, (0.0, 0.0))),
        ("diagonal-modulated", bump((0.8, 0.8), 1.0, (1.0, 1.0))),
        ("wide-low", bump((0.0, -0.5), 1.5, (0.0, 0.0))),
        ("fast-modulated", bump((-0.6, 0.2), 0.6, (2.0, 0.0))),
    ];
    let members = bumps
        .iter()
        .map(|(name, b)| Ok(member(name, CompactDistribution::bump(grid, b)?, Integrability::Everywhere)))
        .collect::<Result<_>>()?;
    Ok(TestFamily {
        name: "F1".to_string(),
        description: "smooth compactly supported bumps with varying centers, widths and modulations".to_string(),
        k: SupportBox::square(2.0),
        members,
    })
}

fn f2(grid: PhaseGrid) -> Result<TestFamily> {
    let one = Complex64::new(1.0, 0.0);
    let ring: Vec<Atom> = (0..8)
        .map(|k| {
            let th = k as f64 * PI / 4.0 + 0.1;
            Atom::point(1.6 * th.cos(), 1.6 * th.sin(), Complex64::from_polar(1.0 - 0.08 * k as f64, 0.7 * k as f64))
        })
        .collect();
    let members = vec![
        member("single-off-grid", CompactDistribution::dirac(grid, 0.3, -0.7)?, Integrability::SupremumOnly),
        member(
            "pair",
            CompactDistribution::atoms(grid, vec![Atom::point(0.0, 0.0, one), Atom::point(1.0, -0.5, one * 0.5)])?,
            Integrability::SupremumOnly,
        ),
        member(
            "three-off-grid",
            CompactDistribution::atoms(
                grid,
                vec![
                    Atom::point(0.3, -0.7, one),
                    Atom::point(-1.13, 0.41, Complex64::new(0.0, 0.5)),
                    Atom::point(0.77, 1.21, Complex64::new(-0.7, 0.0)),
                ],
            )?,
            Integrability::SupremumOnly,
        ),
        member("ring-of-eight", CompactDistribution::atoms(grid, ring)?, Integrability::SupremumOnly),
        member(
            "dy-derivative",
            CompactDistribution::atoms(grid, vec![Atom::derivative(0.2, 0.1, DerivativeOrder::new(0, 1), one)])?,
            Integrability::Nowhere,
        ),
    ];
    Ok(TestFamily {
        name: "F2".to_string(),
        description: "finite sums of weighted point masses, off-grid locations and one y-derivative".to_string(),
        k: SupportBox::square(2.0),
        members,
    })
}

fn f3(grid: PhaseGrid) -> Result<TestFamily> {
    let members = [1.0, 1.5, 2.0]
        .iter()
        .map(|&r| {
            Ok(member(
                &format!("circle-r{r}"),
                CompactDistribution::circle(grid, r, 256)?,
                // |Ť| decays like |ζ|^{-1/2}
                Integrability::Above { threshold: 4.0 },
            ))
        })
        .collect::<Result<_>>()?;
    Ok(TestFamily {
        name: "F3".to_string(),
        description: "arc-length measures of circles, 256-node quadrature".to_string(),
        k: SupportBox::square(2.0),
        members,
    })
}

fn check_grid(grid: PhaseGrid) -> Result<()> {
    if grid.n() < MIN_FAMILY_GRID {
        return Err(Error::OutOfRange(format!(
            "built-in families need N >= {MIN_FAMILY_GRID}, got {}",
            grid.n()
        )));
    }
    Ok(())
}

pub fn builtin_families(grid: PhaseGrid) -> Result<Vec<TestFamily>> {
    check_grid(grid)?;
    Ok(vec![f1(grid)?, f2(grid)?, f3(grid)?])
}

/// `F1`, `F2` or `F3` (case-insensitive).
pub fn family_by_name(grid: PhaseGrid, name: &str) -> Result<TestFamily> {
    check_grid(grid)?;
    match name.to_ascii_uppercase().as_str() {
        "F1" => f1(grid),
        "F2" => f2(grid),
        "F3" => f3(grid),
        _ => Err(Error::OutOfRange(format!("unknown family {name:?}"))),
    }
}
