//! Numerical check of the conditions under which the interior saddle has an
//! increasing invariant separatrix with endpoints on the boundary.

use serde::{Deserialize, Serialize};

use super::{det, interior_saddle, jacobian, step, SystemId, SystemParams};
use crate::error::Error;
use crate::plane::{Point, Quadrant};

/// Grid resolution per component of Δ for the partial-derivative sign checks.
const DELTA_GRID: usize = 32;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    /// False when the parameters have no interior saddle.
    pub applicable: bool,
    pub checks: Vec<HypothesisCheck>,
    pub det_jacobian: Option<f64>,
}

impl HypothesisReport {
    pub fn all_passed(&self) -> bool {
        self.applicable && self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> impl Iterator<Item = &HypothesisCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// `Δ = (0,∞)² ∩ int(Q₁(z̄) ∪ Q₃(z̄))`.
pub fn in_delta(z: &Point, p: &Point) -> bool {
    p.x > 0.0
        && p.y > 0.0
        && (Quadrant::Q1.contains_interior(z, p) || Quadrant::Q3.contains_interior(z, p))
}

fn delta_samples(z: &Point) -> Vec<Point> {
    let n = DELTA_GRID;
    let t = |i: usize| (i as f64 + 0.5) / n as f64;
    let mut out = Vec::with_capacity(2 * n * n);
    for i in 0..n {
        for j in 0..n {
            // below-left block, then a block reaching 4z̄ above-right
            out.push(Point {
                x: z.x * t(i),
                y: z.y * t(j),
            });
            out.push(Point {
                x: z.x * (1.0 + 3.0 * t(i)),
                y: z.y * (1.0 + 3.0 * t(j)),
            });
        }
    }
    out
}

pub fn check_theorem_hypotheses(system: SystemId, params: &SystemParams) -> HypothesisReport {
    let saddle = match interior_saddle(system, params) {
        Ok(s) => s,
        Err(Error::NoInteriorSaddle) | Err(_) => {
            return HypothesisReport {
                applicable: false,
                checks: Vec::new(),
                det_jacobian: None,
            }
        }
    };
    let z = saddle.point;
    let mut checks = Vec::new();
    let mut push = |name: &str, passed: bool, detail: String| {
        checks.push(HypothesisCheck {
            name: name.to_string(),
            passed,
            detail,
        })
    };

    push(
        "delta_nonempty",
        z.x > 0.0 && z.y > 0.0,
        format!("saddle ({}, {}) is interior to (0,inf)^2", z.x, z.y),
    );

    let samples = delta_samples(&z);
    debug_assert!(samples.iter().all(|p| in_delta(&z, p)));
    let mut worst_fy = f64::NEG_INFINITY;
    let mut worst_gx = f64::NEG_INFINITY;
    for p in &samples {
        if let Ok(j) = jacobian(system, params, p) {
            worst_fy = worst_fy.max(j[0][1]);
            worst_gx = worst_gx.max(j[1][0]);
        } else {
            worst_fy = f64::INFINITY;
            worst_gx = f64::INFINITY;
        }
    }
    push(
        "df_dy_negative_on_delta",
        worst_fy < 0.0,
        format!("max df/dy over {} points = {worst_fy:e}", samples.len()),
    );
    push(
        "dg_dx_negative_on_delta",
        worst_gx < 0.0,
        format!("max dg/dx over {} points = {worst_gx:e}", samples.len()),
    );

    let (lambda, mu) = (saddle.lambda(), saddle.mu());
    push(
        "eigenvalue_ordering",
        lambda != 0.0 && lambda.abs() < 1.0 && 1.0 < mu && lambda.abs() < mu,
        format!("lambda = {lambda}, mu = {mu}"),
    );

    let v = saddle.eigvec_stable.unwrap_or([0.0, 0.0]);
    push(
        "stable_eigenspace_not_axis",
        v[0] != 0.0 && v[1] != 0.0,
        format!("v_lambda = ({}, {})", v[0], v[1]),
    );

    let d = det(&saddle.jacobian);
    push("det_jacobian_negative", d < 0.0, format!("det J(z) = {d}"));

    // f depends on y alone and is strictly decreasing, so f(x, y) = x̄ pins
    // y; then g(x, y) = ȳ is affine in 1/x (11,6) or x (11,14).
    let y_pre = params.alpha1 / z.x - params.a1;
    let x_pre = match system {
        SystemId::Sys1106 => params.third * y_pre / z.y,
        SystemId::Sys1114 => y_pre / z.y - params.third,
    };
    let pre = Point { x: x_pre, y: y_pre };
    let maps_to_z = step(system, params, &pre)
        .map(|img| img.dist_inf(&z) <= 1e-12 * (1.0 + z.norm_inf()))
        .unwrap_or(false);
    push(
        "unique_preimage_of_saddle",
        maps_to_z && !in_delta(&z, &pre),
        format!("T(x, y) = z has the single solution ({x_pre}, {y_pre})"),
    );

    let boundary = Point {
        x: params.boundary_x(),
        y: 0.0,
    };
    push(
        "no_fixed_point_in_delta",
        !in_delta(&z, &boundary),
        format!("boundary equilibrium ({}, 0)", boundary.x),
    );

    HypothesisReport {
        applicable: true,
        checks,
        det_jacobian: Some(d),
    }
}
