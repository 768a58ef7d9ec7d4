//! Compactly supported distributions on the phase plane: sampled densities,
//! weighted (derivative) point masses, and point masses smoothed by a kernel.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GridFunction, PhaseGrid};

/// Largest total derivative order `d_x + d_y` accepted on an atom.
pub const MAX_DERIVATIVE_ORDER: u32 = 4;

/// Distance every support box keeps from the edge of the grid domain.
pub const SUPPORT_MARGIN: f64 = 1.0;

/// Closed axis-aligned box `[x_min, x_max] × [y_min, y_max]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportBox {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl SupportBox {
    pub fn new(x: (f64, f64), y: (f64, f64)) -> Self {
        Self {
            x_min: x.0.min(x.1),
            x_max: x.0.max(x.1),
            y_min: y.0.min(y.1),
            y_max: y.0.max(y.1),
        }
    }

    /// `[-a, a]²`.
    pub fn square(a: f64) -> Self {
        Self::new((-a, a), (-a, a))
    }

    pub fn point(x: f64, y: f64) -> Self {
        Self::new((x, x), (y, y))
    }

    pub fn bounding(points: impl IntoIterator<Item = (f64, f64)>) -> Option<Self> {
        points.into_iter().fold(None, |acc, (x, y)| {
            Some(match acc {
                None => Self::point(x, y),
                Some(b) => Self::new((b.x_min.min(x), b.x_max.max(x)), (b.y_min.min(y), b.y_max.max(y))),
            })
        })
    }

    pub fn expanded(&self, d: f64) -> Self {
        Self::new((self.x_min - d, self.x_max + d), (self.y_min - d, self.y_max + d))
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x_min && x <= self.x_max && y >= self.y_min && y <= self.y_max
    }

    pub fn contains_box(&self, other: &SupportBox) -> bool {
        other.x_min >= self.x_min
            && other.x_max <= self.x_max
            && other.y_min >= self.y_min
            && other.y_max <= self.y_max
    }

    /// Euclidean distance from `(x, y)` to the box (zero inside).
    pub fn distance(&self, x: f64, y: f64) -> f64 {
        let dx = (self.x_min - x).max(0.0).max(x - self.x_max);
        let dy = (self.y_min - y).max(0.0).max(y - self.y_max);
        dx.hypot(dy)
    }

    /// Largest `|z|` over the box.
    pub fn max_radius(&self) -> f64 {
        let x = self.x_min.abs().max(self.x_max.abs());
        let y = self.y_min.abs().max(self.y_max.abs());
        x.hypot(y)
    }

    /// Whether the box lies in the open domain `(-L/2 + margin, L/2 - margin)²`.
    pub fn fits(&self, grid: PhaseGrid, margin: f64) -> bool {
        let lim = grid.half_length() - margin;
        self.x_min > -lim && self.x_max < lim && self.y_min > -lim && self.y_max < lim
    }
}

impl fmt::Display for SupportBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}] x [{}, {}]",
            self.x_min, self.x_max, self.y_min, self.y_max
        )
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivativeOrder {
    pub dx: u32,
    pub dy: u32,
}

impl DerivativeOrder {
    pub const ZERO: DerivativeOrder = DerivativeOrder { dx: 0, dy: 0 };

    pub fn new(dx: u32, dy: u32) -> Self {
        Self { dx, dy }
    }

    pub fn total(&self) -> u32 {
        self.dx + self.dy
    }

    /// `(-1)^{d_x + d_y}`.
    pub fn sign(&self) -> f64 {
        if self.total().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }
}

/// `w ∂_x^{d_x} ∂_y^{d_y} δ_{(x, y)}`, acting by `f ↦ w (-1)^{d_x+d_y} ∂^d f(x, y)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Atom {
    pub x: f64,
    pub y: f64,
    pub order: DerivativeOrder,
    pub weight: Complex64,
}

impl Atom {
    pub fn point(x: f64, y: f64, weight: Complex64) -> Self {
        Self {
            x,
            y,
            order: DerivativeOrder::ZERO,
            weight,
        }
    }

    pub fn derivative(x: f64, y: f64, order: DerivativeOrder, weight: Complex64) -> Self {
        Self { x, y, order, weight }
    }
}

#[derive(Clone, Debug)]
pub enum CompactDistribution {
    /// Grid samples vanishing outside `support`.
    Density {
        values: GridFunction,
        support: SupportBox,
    },
    /// Finite sum of weighted derivative point masses.
    AtomicSum {
        atoms: Vec<Atom>,
        support: SupportBox,
    },
    /// `Σ_m atom_m ∗ kernel`, with the kernel sampled around the origin and
    /// vanishing outside the disc of radius `kernel_radius`.
    SmoothedAtoms {
        atoms: Vec<Atom>,
        kernel: GridFunction,
        kernel_radius: f64,
        support: SupportBox,
    },
}

impl CompactDistribution {
    pub fn atoms(grid: PhaseGrid, atoms: Vec<Atom>) -> Result<Self> {
        validate_atoms(&atoms)?;
        let support = SupportBox::bounding(atoms.iter().map(|a| (a.x, a.y)))
            .ok_or_else(|| Error::OutOfRange("empty atom list".to_string()))?;
        if !support.fits(grid, SUPPORT_MARGIN) {
            return Err(Error::SupportTooLarge(support.to_string()));
        }
        Ok(Self::AtomicSum { atoms, support })
    }

    pub fn dirac(grid: PhaseGrid, x: f64, y: f64) -> Result<Self> {
        Self::atoms(grid, vec![Atom::point(x, y, Complex64::new(1.0, 0.0))])
    }

    /// Density from samples; fails if any sample outside `support` is nonzero.
    pub fn density(values: GridFunction, support: SupportBox) -> Result<Self> {
        let grid = values.grid();
        if !support.fits(grid, SUPPORT_MARGIN) {
            return Err(Error::SupportTooLarge(support.to_string()));
        }
        if !values.is_finite() {
            return Err(Error::NonFinite("density samples"));
        }
        let t = grid.nodes();
        for ((m, k), v) in values.values().indexed_iter() {
            if *v != Complex64::new(0.0, 0.0) && !support.contains(t[m], t[k]) {
                return Err(Error::DensityOutsideSupport);
            }
        }
        Ok(Self::Density { values, support })
    }

    /// Samples `f` at the nodes inside `support` and zero elsewhere.
    pub fn density_from_fn(
        grid: PhaseGrid,
        support: SupportBox,
        f: impl Fn(f64, f64) -> Complex64,
    ) -> Result<Self> {
        let zero = Complex64::new(0.0, 0.0);
        let values = GridFunction::from_fn(grid, |x, y| {
            if support.contains(x, y) {
                f(x, y)
            } else {
                zero
            }
        });
        Self::density(values, support)
    }

    /// Arc-length measure of the circle of radius `radius`, as `nodes` equal
    /// point masses `2πR/M` at equally spaced angles.
    pub fn circle(grid: PhaseGrid, radius: f64, nodes: usize) -> Result<Self> {
        if !(radius > 0.0 && radius < grid.half_length() - SUPPORT_MARGIN) {
            return Err(Error::SupportTooLarge(format!("circle of radius {radius}")));
        }
        if nodes < 64 {
            return Err(Error::OutOfRange(format!(
                "circle quadrature needs at least 64 nodes, got {nodes}"
            )));
        }
        let w = Complex64::new(2.0 * PI * radius / nodes as f64, 0.0);
        let atoms = (0..nodes)
            .map(|m| {
                let th = 2.0 * PI * m as f64 / nodes as f64;
                Atom::point(radius * th.cos(), radius * th.sin(), w)
            })
            .collect();
        Self::atoms(grid, atoms)
    }

    /// `amplitude · exp(-1/(1 - |z - c|²/R²)) · e^{2πi(μx + νy)}` on the open disc.
    pub fn bump(grid: PhaseGrid, bump: &Bump) -> Result<Self> {
        let support = SupportBox::new(
            (bump.center.0 - bump.radius, bump.center.0 + bump.radius),
            (bump.center.1 - bump.radius, bump.center.1 + bump.radius),
        );
        Self::density_from_fn(grid, support, |x, y| bump.eval(x, y))
    }

    pub fn bumps(grid: PhaseGrid, bumps: &[Bump]) -> Result<Self> {
        let support = SupportBox::bounding(bumps.iter().flat_map(|b| {
            [
                (b.center.0 - b.radius, b.center.1 - b.radius),
                (b.center.0 + b.radius, b.center.1 + b.radius),
            ]
        }))
        .ok_or_else(|| Error::OutOfRange("empty bump list".to_string()))?;
        Self::density_from_fn(grid, support, |x, y| bumps.iter().map(|b| b.eval(x, y)).sum())
    }

    pub fn support_box(&self) -> SupportBox {
        match self {
            Self::Density { support, .. }
            | Self::AtomicSum { support, .. }
            | Self::SmoothedAtoms { support, .. } => *support,
        }
    }

    /// Checks the margin invariant against `grid` and grid agreement of samples.
    pub fn validate_on(&self, grid: PhaseGrid) -> Result<()> {
        let support = self.support_box();
        if !support.fits(grid, SUPPORT_MARGIN) {
            return Err(Error::SupportTooLarge(support.to_string()));
        }
        match self {
            Self::Density { values, .. } => grid.ensure_same(&values.grid()),
            Self::AtomicSum { atoms, .. } => validate_atoms(atoms),
            Self::SmoothedAtoms { atoms, kernel, .. } => {
                grid.ensure_same(&kernel.grid())?;
                validate_atoms(atoms)
            }
        }
    }

    /// `a·self + b·other` for two densities on the same grid.
    pub fn combine_densities(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        match (self, other) {
            (
                Self::Density { values: u, support: su },
                Self::Density { values: v, support: sv },
            ) => {
                let values = u.scaled(a).add(&v.scaled(b))?;
                let support = SupportBox::new(
                    (su.x_min.min(sv.x_min), su.x_max.max(sv.x_max)),
                    (su.y_min.min(sv.y_min), su.y_max.max(sv.y_max)),
                );
                Self::density(values, support)
            }
            _ => Err(Error::OutOfRange(
                "linear combination is only defined here for densities".to_string(),
            )),
        }
    }
}

fn validate_atoms(atoms: &[Atom]) -> Result<()> {
    if atoms.is_empty() {
        return Err(Error::OutOfRange("empty atom list".to_string()));
    }
    for a in atoms {
        if !(a.x.is_finite() && a.y.is_finite() && a.weight.re.is_finite() && a.weight.im.is_finite()) {
            return Err(Error::NonFinite("atom"));
        }
        if a.order.total() > MAX_DERIVATIVE_ORDER {
            return Err(Error::OrderTooHigh {
                dx: a.order.dx,
                dy: a.order.dy,
            });
        }
    }
    Ok(())
}

/// `exp(-1/(1 - s))` for `s < 1`, zero otherwise (`s` is a squared radius).
pub fn bump_profile(s: f64) -> f64 {
    if s < 1.0 {
        (-1.0 / (1.0 - s)).exp()
    } else {
        0.0
    }
}

/// A modulated smooth bump; see [`CompactDistribution::bump`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub center: (f64, f64),
    pub radius: f64,
    #[serde(default)]
    pub modulation: (f64, f64),
    #[serde(default = "unit_amplitude")]
    pub amplitude: f64,
}

fn unit_amplitude() -> f64 {
    1.0
}

impl Bump {
    pub fn centered(radius: f64) -> Self {
        Self {
            center: (0.0, 0.0),
            radius,
            modulation: (0.0, 0.0),
            amplitude: 1.0,
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> Complex64 {
        let dx = x - self.center.0;
        let dy = y - self.center.1;
        let s = (dx * dx + dy * dy) / (self.radius * self.radius);
        let v = self.amplitude * bump_profile(s);
        if v == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(v, 2.0 * PI * (self.modulation.0 * x + self.modulation.1 * y))
    }
}
