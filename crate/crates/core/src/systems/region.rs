use std::fmt;

use serde::{Deserialize, Serialize};

use super::{SystemId, SystemParams};

/// Parameter regions with distinct global behavior.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionClass {
    /// `γ₂ > α₁/A₁`: only the boundary equilibrium, a saddle.
    #[serde(rename = "R1106_SaddleOnly")]
    R1106SaddleOnly,
    /// `γ₂ = α₁/A₁`: the two equilibria coincide.
    #[serde(rename = "R1106_Nonhyperbolic")]
    R1106Nonhyperbolic,
    /// `γ₂ < α₁/A₁`: stable boundary equilibrium plus interior saddle.
    #[serde(rename = "R1106_TwoEquilibria")]
    R1106TwoEquilibria,
    /// `A₂ >= 1`: boundary equilibrium attracts everything.
    #[serde(rename = "R1114_GAS")]
    R1114Gas,
    /// `A₂ + α₁/A₁ < 1`
    #[serde(rename = "R1114_SaddleOnly")]
    R1114SaddleOnly,
    /// `A₂ + α₁/A₁ = 1`
    #[serde(rename = "R1114_Nonhyperbolic")]
    R1114Nonhyperbolic,
    /// `A₂ + α₁/A₁ > 1` and `A₂ < 1`
    #[serde(rename = "R1114_TwoEquilibria")]
    R1114TwoEquilibria,
}

impl RegionClass {
    pub fn tag(self) -> &'static str {
        match self {
            RegionClass::R1106SaddleOnly => "R1106_SaddleOnly",
            RegionClass::R1106Nonhyperbolic => "R1106_Nonhyperbolic",
            RegionClass::R1106TwoEquilibria => "R1106_TwoEquilibria",
            RegionClass::R1114Gas => "R1114_GAS",
            RegionClass::R1114SaddleOnly => "R1114_SaddleOnly",
            RegionClass::R1114Nonhyperbolic => "R1114_Nonhyperbolic",
            RegionClass::R1114TwoEquilibria => "R1114_TwoEquilibria",
        }
    }

    /// The tag without its system prefix, e.g. `TwoEquilibria`.
    pub fn kind(self) -> &'static str {
        let tag = self.tag();
        &tag[tag.find('_').map_or(0, |i| i + 1)..]
    }

    pub fn has_interior_saddle(self) -> bool {
        matches!(
            self,
            RegionClass::R1106TwoEquilibria | RegionClass::R1114TwoEquilibria
        )
    }

    /// Regions where every orbit off the x-axis escapes to `(0, ∞)`.
    pub fn off_axis_diverges(self) -> bool {
        matches!(
            self,
            RegionClass::R1106SaddleOnly
                | RegionClass::R1106Nonhyperbolic
                | RegionClass::R1114SaddleOnly
                | RegionClass::R1114Nonhyperbolic
        )
    }
}

impl fmt::Display for RegionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Exact-threshold classification. Comparisons are made on products so the
/// boundaries are not moved by division rounding.
pub fn classify_region(system: SystemId, params: &SystemParams) -> RegionClass {
    match system {
        SystemId::Sys1106 => {
            let lhs = params.third * params.a1;
            if lhs > params.alpha1 {
                RegionClass::R1106SaddleOnly
            } else if lhs == params.alpha1 {
                RegionClass::R1106Nonhyperbolic
            } else {
                RegionClass::R1106TwoEquilibria
            }
        }
        SystemId::Sys1114 => {
            if params.third >= 1.0 {
                return RegionClass::R1114Gas;
            }
            // A₂ + α₁/A₁ vs 1  <=>  α₁ vs (1 - A₂)·A₁
            let rhs = (1.0 - params.third) * params.a1;
            if params.alpha1 < rhs {
                RegionClass::R1114SaddleOnly
            } else if params.alpha1 == rhs {
                RegionClass::R1114Nonhyperbolic
            } else {
                RegionClass::R1114TwoEquilibria
            }
        }
    }
}
