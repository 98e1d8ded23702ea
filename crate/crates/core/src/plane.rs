//! Planar states, the southeast partial order, closed quadrants and plain
//! orbit iteration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::systems::{self, SystemId, SystemParams};

/// A state `(x, y)` of one of the systems. Both coordinates are finite and
/// nonnegative whenever the value was built through [`Point::new`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() && x >= 0.0 && y >= 0.0 {
            Ok(Self { x, y })
        } else {
            Err(Error::InvalidPoint { x, y })
        }
    }

    /// Max-norm distance.
    pub fn dist_inf(&self, other: &Point) -> f64 {
        (self.x - other.x).abs().max((self.y - other.y).abs())
    }

    pub fn norm_inf(&self) -> f64 {
        self.x.abs().max(self.y.abs())
    }
}

/// `a ⪯se b` iff `a.x <= b.x` and `a.y >= b.y`.
pub fn se_leq(a: &Point, b: &Point) -> bool {
    a.x <= b.x && a.y >= b.y
}

/// True when `a` and `b` are ordered one way or the other.
pub fn se_comparable(a: &Point, b: &Point) -> bool {
    se_leq(a, b) || se_leq(b, a)
}

/// Closed quadrants relative to a base point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quadrant {
    /// `u >= x, v >= y`
    Q1,
    /// `u <= x, v >= y`
    Q2,
    /// `u <= x, v <= y`
    Q3,
    /// `u >= x, v <= y`
    Q4,
}

impl Quadrant {
    pub fn contains(self, base: &Point, p: &Point) -> bool {
        match self {
            Quadrant::Q1 => p.x >= base.x && p.y >= base.y,
            Quadrant::Q2 => p.x <= base.x && p.y >= base.y,
            Quadrant::Q3 => p.x <= base.x && p.y <= base.y,
            Quadrant::Q4 => p.x >= base.x && p.y <= base.y,
        }
    }

    /// Strict version: membership in the interior of the quadrant.
    pub fn contains_interior(self, base: &Point, p: &Point) -> bool {
        match self {
            Quadrant::Q1 => p.x > base.x && p.y > base.y,
            Quadrant::Q2 => p.x < base.x && p.y > base.y,
            Quadrant::Q3 => p.x < base.x && p.y < base.y,
            Quadrant::Q4 => p.x > base.x && p.y < base.y,
        }
    }
}

pub fn in_quadrant(base: &Point, q: Quadrant, p: &Point) -> bool {
    q.contains(base, p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    MaxIterations,
    EnteredTrap,
    DomainError,
    ConvergedToFixedPoint,
}

/// A finite orbit segment. `points[k + 1]` is the image of `points[k]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitTrace {
    pub points: Vec<Point>,
    pub terminated_by: Termination,
}

impl OrbitTrace {
    pub fn last(&self) -> &Point {
        // never empty: the start point is always recorded
        self.points.last().expect("orbit trace holds its start point")
    }

    /// Number of map applications recorded.
    pub fn steps(&self) -> usize {
        self.points.len() - 1
    }
}

/// Apply the map up to `n` times from `start`. Stops early with
/// [`Termination::DomainError`] when the next image is undefined, keeping the
/// last valid state as the final point.
pub fn iterate(system: SystemId, params: &SystemParams, start: Point, n: usize) -> OrbitTrace {
    let mut points = Vec::with_capacity(n.saturating_add(1).min(1 << 20));
    points.push(start);
    let mut p = start;
    for _ in 0..n {
        match systems::step(system, params, &p) {
            Ok(next) => {
                points.push(next);
                p = next;
            }
            Err(_) => {
                return OrbitTrace {
                    points,
                    terminated_by: Termination::DomainError,
                }
            }
        }
    }
    OrbitTrace {
        points,
        terminated_by: Termination::MaxIterations,
    }
}
