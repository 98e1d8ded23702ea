//! Certified asymptotic classification of single orbits.

use serde::{Deserialize, Serialize};

use super::{
    classify_region, default_epsilon, interior_saddle, step, trap, RegionClass, SystemId,
    SystemParams, TrapSide, TrapSpec,
};
use crate::plane::{OrbitTrace, Point, Termination};

/// Max-norm radius around the interior saddle that counts as arrival.
pub const SADDLE_RADIUS: f64 = 1e-12;
/// Proximity to `(α₁/A₁, 0)` accepted as convergence where that point attracts.
pub const NEAR_BOUNDARY_Y: f64 = 1e-12;
pub const NEAR_BOUNDARY_X: f64 = 1e-9;
/// Escape box for the limit `(0, ∞)` when no trapping rectangle exists.
pub const DIVERGENCE_Y: f64 = 1e12;
pub const DIVERGENCE_X: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FateCode {
    /// Limit `(α₁/A₁, 0)`.
    Lower,
    /// Limit `(0, ∞)`.
    Upper,
    /// Limit: the interior saddle.
    Saddle,
    Undecided,
    Undefined,
}

impl FateCode {
    pub const ALL: [FateCode; 5] = [
        FateCode::Lower,
        FateCode::Upper,
        FateCode::Saddle,
        FateCode::Undecided,
        FateCode::Undefined,
    ];

    /// Gray level used in PGM rasters.
    pub fn gray(self) -> u8 {
        match self {
            FateCode::Lower => 64,
            FateCode::Upper => 192,
            FateCode::Saddle => 128,
            FateCode::Undecided => 0,
            FateCode::Undefined => 255,
        }
    }

    pub fn from_gray(level: u8) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.gray() == level)
    }

    pub fn name(self) -> &'static str {
        match self {
            FateCode::Lower => "Lower",
            FateCode::Upper => "Upper",
            FateCode::Saddle => "Saddle",
            FateCode::Undecided => "Undecided",
            FateCode::Undefined => "Undefined",
        }
    }
}

impl std::fmt::Display for FateCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Why a Lower/Upper verdict is final.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Certificate {
    /// The orbit entered this forward-invariant rectangle.
    Trap(TrapSpec),
    /// Within `NEAR_BOUNDARY_*` of an attracting `(α₁/A₁, 0)`.
    NearBoundaryEquilibrium,
    /// Reached `(α₁/A₁, 0)` along the invariant x-axis.
    OnInvariantAxis,
    /// Crossed into `y > DIVERGENCE_Y, x < DIVERGENCE_X` in a region where
    /// every off-axis orbit escapes.
    Divergence,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitFate {
    pub fate: FateCode,
    pub iterations_used: usize,
    pub certificate: Option<Certificate>,
}

#[derive(Debug, Clone)]
enum Mode {
    /// Interior saddle with both trapping rectangles.
    Saddle {
        z: Point,
        upper: TrapSpec,
        lower: TrapSpec,
    },
    /// Boundary equilibrium attracts; escape still checked.
    Attracting,
    /// Only the x-axis reaches the boundary equilibrium.
    Escaping,
}

/// Precomputed per-parameter state for repeated classification.
#[derive(Debug, Clone)]
pub struct FateClassifier {
    system: SystemId,
    params: SystemParams,
    region: RegionClass,
    mode: Mode,
}

impl FateClassifier {
    pub fn new(system: SystemId, params: &SystemParams) -> Self {
        let region = classify_region(system, params);
        let mode = if region.off_axis_diverges() {
            Mode::Escaping
        } else {
            saddle_mode(system, params).unwrap_or(Mode::Attracting)
        };
        Self {
            system,
            params: *params,
            region,
            mode,
        }
    }

    pub fn system(&self) -> SystemId {
        self.system
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn region(&self) -> RegionClass {
        self.region
    }

    /// Trapping rectangles `(upper, lower)` when the interior saddle exists.
    pub fn traps(&self) -> Option<(&TrapSpec, &TrapSpec)> {
        match &self.mode {
            Mode::Saddle { upper, lower, .. } => Some((upper, lower)),
            _ => None,
        }
    }

    pub fn classify(&self, start: Point, max_iter: usize) -> OrbitFate {
        self.run(start, max_iter, |_| {}).0
    }

    /// Like [`FateClassifier::classify`] but also returns the visited states.
    pub fn classify_traced(&self, start: Point, max_iter: usize) -> (OrbitFate, OrbitTrace) {
        let mut points = Vec::new();
        let (fate, terminated_by) = self.run(start, max_iter, |p| points.push(*p));
        (
            fate,
            OrbitTrace {
                points,
                terminated_by,
            },
        )
    }

    fn run(
        &self,
        start: Point,
        max_iter: usize,
        mut visit: impl FnMut(&Point),
    ) -> (OrbitFate, Termination) {
        let mut p = start;
        let mut used = 0;
        visit(&p);
        let undefined = |used| {
            (
                OrbitFate {
                    fate: FateCode::Undefined,
                    iterations_used: used,
                    certificate: None,
                },
                Termination::DomainError,
            )
        };
        // (11,14) on the y-axis: classify from the first iterate instead.
        if self.system == SystemId::Sys1114 && p.x == 0.0 && max_iter > 0 {
            match step(self.system, &self.params, &p) {
                Ok(next) => p = next,
                Err(_) => return undefined(used),
            }
            used = 1;
            visit(&p);
        }
        loop {
            if let Some((fate, certificate, term)) = self.check(&p) {
                return (
                    OrbitFate {
                        fate,
                        iterations_used: used,
                        certificate,
                    },
                    term,
                );
            }
            if used >= max_iter {
                return (
                    OrbitFate {
                        fate: FateCode::Undecided,
                        iterations_used: used,
                        certificate: None,
                    },
                    Termination::MaxIterations,
                );
            }
            match step(self.system, &self.params, &p) {
                Ok(next) => p = next,
                Err(_) => return undefined(used),
            }
            used += 1;
            visit(&p);
        }
    }

    fn check(&self, p: &Point) -> Option<(FateCode, Option<Certificate>, Termination)> {
        match &self.mode {
            Mode::Saddle { z, upper, lower } => {
                if p.dist_inf(z) <= SADDLE_RADIUS {
                    Some((FateCode::Saddle, None, Termination::ConvergedToFixedPoint))
                } else if upper.contains(p) {
                    Some((
                        FateCode::Upper,
                        Some(Certificate::Trap(*upper)),
                        Termination::EnteredTrap,
                    ))
                } else if lower.contains(p) {
                    Some((
                        FateCode::Lower,
                        Some(Certificate::Trap(*lower)),
                        Termination::EnteredTrap,
                    ))
                } else {
                    None
                }
            }
            Mode::Attracting => {
                if self.near_boundary(p) {
                    Some((
                        FateCode::Lower,
                        Some(Certificate::NearBoundaryEquilibrium),
                        Termination::ConvergedToFixedPoint,
                    ))
                } else {
                    self.diverged(p)
                }
            }
            Mode::Escaping => {
                if p.y == 0.0 && (p.x - self.params.boundary_x()).abs() < NEAR_BOUNDARY_X {
                    Some((
                        FateCode::Lower,
                        Some(Certificate::OnInvariantAxis),
                        Termination::ConvergedToFixedPoint,
                    ))
                } else {
                    self.diverged(p)
                }
            }
        }
    }

    fn near_boundary(&self, p: &Point) -> bool {
        p.y.abs() < NEAR_BOUNDARY_Y && (p.x - self.params.boundary_x()).abs() < NEAR_BOUNDARY_X
    }

    fn diverged(&self, p: &Point) -> Option<(FateCode, Option<Certificate>, Termination)> {
        (p.y > DIVERGENCE_Y && p.x < DIVERGENCE_X).then_some((
            FateCode::Upper,
            Some(Certificate::Divergence),
            Termination::EnteredTrap,
        ))
    }
}

fn saddle_mode(system: SystemId, params: &SystemParams) -> Option<Mode> {
    let z = interior_saddle(system, params).ok()?.point;
    let eps = default_epsilon(system, params).ok()?;
    let upper = trap(system, params, TrapSide::UpperTrap, eps).ok()?;
    let lower = trap(system, params, TrapSide::LowerTrap, eps).ok()?;
    Some(Mode::Saddle { z, upper, lower })
}

/// One-shot classification; build a [`FateClassifier`] for repeated queries.
pub fn classify_orbit(
    system: SystemId,
    params: &SystemParams,
    start: Point,
    max_iter: usize,
) -> OrbitFate {
    FateClassifier::new(system, params).classify(start, max_iter)
}
