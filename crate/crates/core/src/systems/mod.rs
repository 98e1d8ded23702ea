//! The two concrete systems and their closed-form analysis.
//!
//! Both share the first component `x' = α₁ / (A₁ + y)`. The second is
//! `y' = γ₂ y / x` for (11,6) and `y' = y / (A₂ + x)` for (11,14), the latter
//! in the reduced form where the original `γ₂` has been scaled out of `x`.

mod equilibrium;
mod fate;
mod hypotheses;
mod region;
mod trap;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::plane::Point;

pub use equilibrium::{
    eigen_analysis, equilibria, interior_saddle, EquilibriumKind, EquilibriumReport, Stability,
};
pub use fate::{
    classify_orbit, Certificate, FateClassifier, FateCode, OrbitFate, DIVERGENCE_X, DIVERGENCE_Y,
    NEAR_BOUNDARY_X, NEAR_BOUNDARY_Y, SADDLE_RADIUS,
};
pub use hypotheses::{check_theorem_hypotheses, in_delta, HypothesisCheck, HypothesisReport};
pub use region::{classify_region, RegionClass};
pub use trap::{default_epsilon, trap, TrapSide, TrapSpec};

/// Row-major 2×2 matrix.
pub type Mat2 = [[f64; 2]; 2];

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

pub fn det(m: &Mat2) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

pub fn trace(m: &Mat2) -> f64 {
    m[0][0] + m[1][1]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SystemId {
    #[serde(rename = "11-06")]
    Sys1106,
    #[serde(rename = "11-14")]
    Sys1114,
}

impl SystemId {
    pub fn label(self) -> &'static str {
        match self {
            SystemId::Sys1106 => "11-06",
            SystemId::Sys1114 => "11-14",
        }
    }

    /// Name of the third parameter: `gamma2` or `a2`.
    pub fn third_name(self) -> &'static str {
        match self {
            SystemId::Sys1106 => "gamma2",
            SystemId::Sys1114 => "a2",
        }
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SystemId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "11-06" | "11-6" | "1106" => Ok(SystemId::Sys1106),
            "11-14" | "1114" => Ok(SystemId::Sys1114),
            other => Err(format!("unknown system `{other}` (expected 11-06 or 11-14)")),
        }
    }
}

/// `α₁`, `A₁` and the third parameter (`γ₂` for (11,6), `A₂` for (11,14)).
/// All strictly positive and finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub alpha1: f64,
    pub a1: f64,
    pub third: f64,
}

impl SystemParams {
    pub fn new(alpha1: f64, a1: f64, third: f64) -> Result<Self> {
        Self::checked(alpha1, a1, third, "third")
    }

    /// Same as [`SystemParams::new`] but names the third parameter after the
    /// system in error messages.
    pub fn for_system(system: SystemId, alpha1: f64, a1: f64, third: f64) -> Result<Self> {
        Self::checked(alpha1, a1, third, system.third_name())
    }

    fn checked(alpha1: f64, a1: f64, third: f64, third_name: &'static str) -> Result<Self> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(alpha1) {
            return Err(Error::NonPositiveParameter("alpha1"));
        }
        if !positive(a1) {
            return Err(Error::NonPositiveParameter("a1"));
        }
        if !positive(third) {
            return Err(Error::NonPositiveParameter(third_name));
        }
        Ok(Self { alpha1, a1, third })
    }

    /// `α₁ / A₁`, the x-coordinate of the boundary equilibrium.
    pub fn boundary_x(&self) -> f64 {
        self.alpha1 / self.a1
    }

    /// Parameters keyed by their flag names for `system`.
    pub fn named(&self, system: SystemId) -> BTreeMap<&'static str, f64> {
        BTreeMap::from([
            ("alpha1", self.alpha1),
            ("a1", self.a1),
            (system.third_name(), self.third),
        ])
    }
}

/// One application of the map.
pub fn step(system: SystemId, params: &SystemParams, p: &Point) -> Result<Point> {
    let x = params.alpha1 / (params.a1 + p.y);
    let y = match system {
        SystemId::Sys1106 => {
            if p.x == 0.0 {
                return Err(Error::ZeroDenominator { at: *p });
            }
            params.third * p.y / p.x
        }
        SystemId::Sys1114 => p.y / (params.third + p.x),
    };
    if x.is_finite() && y.is_finite() {
        Ok(Point { x, y })
    } else {
        Err(Error::NonFinite { at: *p })
    }
}

/// Analytic Jacobian of the map at `p`.
pub fn jacobian(system: SystemId, params: &SystemParams, p: &Point) -> Result<Mat2> {
    let d = params.a1 + p.y;
    let df_dy = -params.alpha1 / (d * d);
    let (dg_dx, dg_dy) = match system {
        SystemId::Sys1106 => {
            if p.x == 0.0 {
                return Err(Error::ZeroDenominator { at: *p });
            }
            (-params.third * p.y / (p.x * p.x), params.third / p.x)
        }
        SystemId::Sys1114 => {
            let s = params.third + p.x;
            (-p.y / (s * s), 1.0 / s)
        }
    };
    Ok([[0.0, df_dy], [dg_dx, dg_dy]])
}
