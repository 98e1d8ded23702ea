use serde::{Deserialize, Serialize};

use super::{classify_region, jacobian, Mat2, RegionClass, SystemId, SystemParams};
use crate::error::{Error, Result};
use crate::plane::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stability {
    LocallyAsymptoticallyStable,
    Saddle,
    Nonhyperbolic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EquilibriumKind {
    /// `(α₁/A₁, 0)`, present for every parameter choice.
    Boundary,
    /// The positive equilibrium of the two-equilibria regions.
    Interior,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumReport {
    pub kind: EquilibriumKind,
    pub point: Point,
    pub jacobian: Mat2,
    /// `(λ, μ)` with `|λ| <= |μ|`.
    pub eigenvalues: [f64; 2],
    pub stability: Stability,
    /// Unit eigenvector of `λ` with nonnegative entries; only for saddles.
    pub eigvec_stable: Option<[f64; 2]>,
}

impl EquilibriumReport {
    pub fn lambda(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn mu(&self) -> f64 {
        self.eigenvalues[1]
    }

    /// Slope `v₂/v₁` of the stable eigenspace, when there is one.
    pub fn stable_slope(&self) -> Option<f64> {
        self.eigvec_stable.map(|v| v[1] / v[0])
    }
}

/// All equilibria in the closed positive quadrant: the boundary one first,
/// then the interior saddle when it exists. Coincident equilibria are
/// reported once.
pub fn equilibria(system: SystemId, params: &SystemParams) -> Vec<EquilibriumReport> {
    let region = classify_region(system, params);
    let mut out = Vec::with_capacity(2);
    out.push(boundary_report(system, params, region));
    if let Some(z) = interior_point(system, params, region) {
        out.push(interior_report(system, params, z));
    }
    out
}

/// The equilibrium at `which` in the order returned by [`equilibria`].
pub fn eigen_analysis(
    system: SystemId,
    params: &SystemParams,
    which: usize,
) -> Result<EquilibriumReport> {
    let mut all = equilibria(system, params);
    let count = all.len();
    if which >= count {
        return Err(Error::IndexOutOfRange {
            index: which,
            count,
        });
    }
    Ok(all.swap_remove(which))
}

/// The interior saddle, or [`Error::NoInteriorSaddle`] outside the
/// two-equilibria regions.
pub fn interior_saddle(system: SystemId, params: &SystemParams) -> Result<EquilibriumReport> {
    let region = classify_region(system, params);
    interior_point(system, params, region)
        .map(|z| interior_report(system, params, z))
        .ok_or(Error::NoInteriorSaddle)
}

fn interior_point(system: SystemId, params: &SystemParams, region: RegionClass) -> Option<Point> {
    if !region.has_interior_saddle() {
        return None;
    }
    let x = match system {
        SystemId::Sys1106 => params.third,
        SystemId::Sys1114 => 1.0 - params.third,
    };
    let y = params.alpha1 / x - params.a1;
    // Rounding can push ȳ to zero right at the region boundary.
    if y > 0.0 {
        Point::new(x, y).ok()
    } else {
        None
    }
}

fn boundary_report(system: SystemId, params: &SystemParams, region: RegionClass) -> EquilibriumReport {
    let point = Point {
        x: params.boundary_x(),
        y: 0.0,
    };
    let jac = jacobian(system, params, &point).expect("boundary equilibrium has x > 0");
    let second = match system {
        SystemId::Sys1106 => params.third * params.a1 / params.alpha1,
        SystemId::Sys1114 => 1.0 / (params.third + params.alpha1 / params.a1),
    };
    let stability = match region {
        RegionClass::R1106SaddleOnly | RegionClass::R1114SaddleOnly => Stability::Saddle,
        RegionClass::R1106Nonhyperbolic | RegionClass::R1114Nonhyperbolic => {
            Stability::Nonhyperbolic
        }
        RegionClass::R1106TwoEquilibria | RegionClass::R1114TwoEquilibria | RegionClass::R1114Gas => {
            Stability::LocallyAsymptoticallyStable
        }
    };
    let eigvec_stable = (stability == Stability::Saddle).then(|| stable_eigenvector(&jac, 0.0));
    EquilibriumReport {
        kind: EquilibriumKind::Boundary,
        point,
        jacobian: jac,
        eigenvalues: [0.0, second],
        stability,
        eigvec_stable,
    }
}

fn interior_report(system: SystemId, params: &SystemParams, point: Point) -> EquilibriumReport {
    let jac = jacobian(system, params, &point).expect("interior equilibrium has x > 0");
    let disc = match system {
        SystemId::Sys1106 => 5.0 - 4.0 * params.third * params.a1 / params.alpha1,
        SystemId::Sys1114 => {
            let s = 1.0 - params.third;
            5.0 - 4.0 * params.third - 4.0 * params.a1 * s * s / params.alpha1
        }
    };
    let root = disc.sqrt();
    let lambda = (1.0 - root) / 2.0;
    let mu = (1.0 + root) / 2.0;
    EquilibriumReport {
        kind: EquilibriumKind::Interior,
        point,
        jacobian: jac,
        eigenvalues: [lambda, mu],
        stability: Stability::Saddle,
        eigvec_stable: Some(stable_eigenvector(&jac, lambda)),
    }
}

/// Unit eigenvector of `m` for eigenvalue `lambda`, oriented so its entries
/// sum to a nonnegative number.
fn stable_eigenvector(m: &Mat2, lambda: f64) -> [f64; 2] {
    let v = if m[0][1] != 0.0 {
        [m[0][1], lambda - m[0][0]]
    } else if m[1][0] != 0.0 {
        [lambda - m[1][1], m[1][0]]
    } else if (m[0][0] - lambda).abs() <= (m[1][1] - lambda).abs() {
        [1.0, 0.0]
    } else {
        [0.0, 1.0]
    };
    let norm = v[0].hypot(v[1]);
    let sign = if v[0] + v[1] < 0.0 { -1.0 } else { 1.0 };
    [sign * v[0] / norm, sign * v[1] / norm]
}
