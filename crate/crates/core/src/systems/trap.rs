//! Forward-invariant rectangles on either side of the interior saddle.
//!
//! With `x̄` the saddle abscissa and `h(s) = α₁/s - A₁`:
//!
//! * upper trap `(0, x̄-ε] × [h(x̄-ε), ∞)`, closed at `x = 0` for (11,14),
//!   where the map is defined on the y-axis. Orbits inside tend to `(0, ∞)`.
//! * lower trap `[x̄+ε, ∞) × [0, h(x̄+ε)]`. Orbits inside tend to
//!   `(α₁/A₁, 0)`.

use serde::{Deserialize, Serialize};

use super::{interior_saddle, SystemId, SystemParams};
use crate::error::{Error, Result};
use crate::plane::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TrapSide {
    LowerTrap,
    UpperTrap,
}

/// An axis-aligned rectangle; infinite bounds are stored as `f64::INFINITY`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapSpec {
    pub side: TrapSide,
    pub epsilon: f64,
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
    /// Whether `x = x_lo` is excluded.
    pub x_lo_open: bool,
}

impl TrapSpec {
    pub fn contains(&self, p: &Point) -> bool {
        let x_lo_ok = if self.x_lo_open {
            p.x > self.x_lo
        } else {
            p.x >= self.x_lo
        };
        x_lo_ok && p.x <= self.x_hi && p.y >= self.y_lo && p.y <= self.y_hi
    }
}

impl std::fmt::Display for TrapSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let open = if self.x_lo_open { '(' } else { '[' };
        let close_y = if self.y_hi.is_infinite() { ')' } else { ']' };
        let close_x = if self.x_hi.is_infinite() { ')' } else { ']' };
        write!(
            f,
            "{open}{}, {}{close_x} x [{}, {}{close_y}",
            self.x_lo, self.x_hi, self.y_lo, self.y_hi
        )
    }
}

/// The trapping rectangle on `side` for the given `epsilon`.
pub fn trap(system: SystemId, params: &SystemParams, side: TrapSide, epsilon: f64) -> Result<TrapSpec> {
    let saddle = interior_saddle(system, params)?;
    build(system, params, saddle.point.x, side, epsilon)
}

fn build(
    system: SystemId,
    params: &SystemParams,
    x_bar: f64,
    side: TrapSide,
    epsilon: f64,
) -> Result<TrapSpec> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::InvalidEpsilon(epsilon));
    }
    let h = |s: f64| params.alpha1 / s - params.a1;
    match side {
        TrapSide::UpperTrap => {
            let x_hi = x_bar - epsilon;
            if x_hi <= 0.0 {
                return Err(Error::InvalidEpsilon(epsilon));
            }
            Ok(TrapSpec {
                side,
                epsilon,
                x_lo: 0.0,
                x_hi,
                y_lo: h(x_hi),
                y_hi: f64::INFINITY,
                x_lo_open: system == SystemId::Sys1106,
            })
        }
        TrapSide::LowerTrap => {
            let x_lo = x_bar + epsilon;
            let y_hi = h(x_lo);
            if y_hi <= 0.0 {
                return Err(Error::InvalidEpsilon(epsilon));
            }
            Ok(TrapSpec {
                side,
                epsilon,
                x_lo,
                x_hi: f64::INFINITY,
                y_lo: 0.0,
                y_hi,
                x_lo_open: false,
            })
        }
    }
}

/// Half the saddle abscissa, halved further until both rectangles are
/// nondegenerate.
pub fn default_epsilon(system: SystemId, params: &SystemParams) -> Result<f64> {
    let saddle = interior_saddle(system, params)?;
    let x_bar = saddle.point.x;
    let mut eps = x_bar / 2.0;
    while eps > 0.0 {
        if build(system, params, x_bar, TrapSide::LowerTrap, eps).is_ok()
            && build(system, params, x_bar, TrapSide::UpperTrap, eps).is_ok()
        {
            return Ok(eps);
        }
        eps /= 2.0;
    }
    Err(Error::InvalidEpsilon(eps))
}
