//! Property suites over the structural claims: order preservation, monotone
//! `y` sequences, absence of period-two points in Δ, and the saddle
//! hypotheses.
//!
//! Random cases draw from `ChaCha8Rng` seeded with the suite seed; case `i`
//! uses stream `i`, so every case can be replayed on its own.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::plane::{se_leq, Point};
use crate::systems::{
    check_theorem_hypotheses, classify_region, equilibria, in_delta, interior_saddle, jacobian,
    mat_mul, step, RegionClass, SystemId, SystemParams,
};

pub const RNG_ALGORITHM: &str = "ChaCha8Rng/seed_from_u64/stream=case";

/// Sampling range (log-uniform per coordinate) for random starts and pairs.
pub const SAMPLE_LO: f64 = 1e-3;
pub const SAMPLE_HI: f64 = 1e3;

pub const MONOTONE_STEPS: usize = 50;
pub const NEWTON_RESIDUAL: f64 = 1e-12;
pub const ROOT_MATCH: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SuiteStatus {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteFailure {
    pub case_index: usize,
    pub inputs: Value,
    pub observed: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub system: SystemId,
    pub params: SystemParams,
    pub status: SuiteStatus,
    pub cases_run: usize,
    /// Cases that neither passed nor failed (e.g. non-convergent Newton seeds).
    pub inconclusive: usize,
    pub failures: Vec<SuiteFailure>,
    pub seed: Option<u64>,
    pub rng: Option<String>,
    pub wall_time_ms: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.status != SuiteStatus::Fail
    }

    #[allow(clippy::too_many_arguments)]
    fn finish(
        suite: &str,
        system: SystemId,
        params: &SystemParams,
        seed: Option<u64>,
        cases_run: usize,
        inconclusive: usize,
        mut failures: Vec<SuiteFailure>,
        started: Instant,
    ) -> Self {
        failures.sort_by_key(|f| f.case_index);
        let status = if failures.is_empty() {
            SuiteStatus::Pass
        } else {
            SuiteStatus::Fail
        };
        Self {
            suite: suite.to_string(),
            system,
            params: *params,
            status,
            cases_run,
            inconclusive,
            failures,
            seed,
            rng: seed.map(|_| RNG_ALGORITHM.to_string()),
            wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
        }
    }

    pub fn not_applicable(suite: &str, system: SystemId, params: &SystemParams) -> Self {
        Self {
            suite: suite.to_string(),
            system,
            params: *params,
            status: SuiteStatus::NotApplicable,
            cases_run: 0,
            inconclusive: 0,
            failures: Vec::new(),
            seed: None,
            rng: None,
            wall_time_ms: 0.0,
        }
    }
}

/// Generator for case `index` of a suite seeded with `seed`.
pub fn case_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    let (a, b) = (lo.ln(), hi.ln());
    rng.gen_range(a..b).exp()
}

fn random_point<R: Rng>(rng: &mut R) -> Point {
    Point {
        x: log_uniform(rng, SAMPLE_LO, SAMPLE_HI),
        y: log_uniform(rng, SAMPLE_LO, SAMPLE_HI),
    }
}

fn pt_json(p: &Point) -> Value {
    json!([p.x, p.y])
}

/// The comparable pair `(a, b)`, `a ⪯se b`, of order-suite case `index`.
pub fn order_case(seed: u64, index: usize) -> (Point, Point) {
    let mut rng = case_rng(seed, index);
    let p = random_point(&mut rng);
    let q = random_point(&mut rng);
    (
        Point {
            x: p.x.min(q.x),
            y: p.y.max(q.y),
        },
        Point {
            x: p.x.max(q.x),
            y: p.y.min(q.y),
        },
    )
}

/// `Ok` when the images of `a ⪯se b` are ordered the same way.
pub fn check_order_pair(
    system: SystemId,
    params: &SystemParams,
    a: &Point,
    b: &Point,
) -> std::result::Result<(), Value> {
    match (step(system, params, a), step(system, params, b)) {
        (Ok(ta), Ok(tb)) if se_leq(&ta, &tb) => Ok(()),
        (Ok(ta), Ok(tb)) => Err(json!({ "image_a": pt_json(&ta), "image_b": pt_json(&tb) })),
        (ra, rb) => Err(json!({
            "image_a": ra.map(|p| pt_json(&p)).unwrap_or_else(|e| json!(e.to_string())),
            "image_b": rb.map(|p| pt_json(&p)).unwrap_or_else(|e| json!(e.to_string())),
        })),
    }
}

pub fn run_order_suite(system: SystemId, params: &SystemParams, n_cases: usize, seed: u64) -> SuiteReport {
    let started = Instant::now();
    let failures: Vec<SuiteFailure> = (0..n_cases)
        .into_par_iter()
        .filter_map(|i| {
            let (a, b) = order_case(seed, i);
            check_order_pair(system, params, &a, &b)
                .err()
                .map(|observed| SuiteFailure {
                    case_index: i,
                    inputs: json!({ "a": pt_json(&a), "b": pt_json(&b) }),
                    observed,
                })
        })
        .collect();
    SuiteReport::finish("order", system, params, Some(seed), n_cases, 0, failures, started)
}

/// Random start of monotone-suite case `index`.
pub fn monotone_case(seed: u64, index: usize) -> Point {
    random_point(&mut case_rng(seed, index))
}

/// First `n` with `y_n > y_{n-1}` along `steps` iterates, if any.
pub fn check_nonincreasing_y(
    params: &SystemParams,
    start: &Point,
    steps: usize,
) -> std::result::Result<(), Value> {
    let trace = crate::plane::iterate(SystemId::Sys1114, params, *start, steps);
    for (n, w) in trace.points.windows(2).enumerate() {
        if w[1].y > w[0].y {
            return Err(json!({ "n": n + 1, "y_prev": w[0].y, "y_next": w[1].y }));
        }
    }
    Ok(())
}

/// `y_n` never increases along (11,14) orbits when `A₂ >= 1`.
pub fn run_monotone_y_suite(params: &SystemParams, n_cases: usize, seed: u64) -> Result<SuiteReport> {
    if params.third < 1.0 {
        return Err(Error::Precondition(format!(
            "monotone-y suite needs a2 >= 1, got {}",
            params.third
        )));
    }
    let started = Instant::now();
    let failures: Vec<SuiteFailure> = (0..n_cases)
        .into_par_iter()
        .filter_map(|i| {
            let start = monotone_case(seed, i);
            check_nonincreasing_y(params, &start, MONOTONE_STEPS)
                .err()
                .map(|observed| SuiteFailure {
                    case_index: i,
                    inputs: json!({ "start": pt_json(&start), "steps": MONOTONE_STEPS }),
                    observed,
                })
        })
        .collect();
    Ok(SuiteReport::finish(
        "monotone_y",
        SystemId::Sys1114,
        params,
        Some(seed),
        n_cases,
        0,
        failures,
        started,
    ))
}

/// `y_{n+1} >= y_n` for `n >= 1` along an off-axis (11,6) orbit. Orbits are
/// cut short where the iterates overflow.
pub fn check_nondecreasing_y(
    params: &SystemParams,
    start: &Point,
    steps: usize,
) -> std::result::Result<(), Value> {
    let trace = crate::plane::iterate(SystemId::Sys1106, params, *start, steps);
    for (n, w) in trace.points.windows(2).enumerate().skip(1) {
        if w[1].y < w[0].y {
            return Err(json!({ "n": n + 1, "y_prev": w[0].y, "y_next": w[1].y }));
        }
    }
    Ok(())
}

/// On the boundary `γ₂ = α₁/A₁` of (11,6), `y_n` is nondecreasing from
/// `n = 1` on every orbit off the axes.
pub fn run_monotone_growth_suite(params: &SystemParams, n_cases: usize, seed: u64) -> Result<SuiteReport> {
    if classify_region(SystemId::Sys1106, params) != RegionClass::R1106Nonhyperbolic {
        return Err(Error::Precondition(
            "monotone-growth suite needs gamma2 * a1 == alpha1".into(),
        ));
    }
    let started = Instant::now();
    let failures: Vec<SuiteFailure> = (0..n_cases)
        .into_par_iter()
        .filter_map(|i| {
            let start = monotone_case(seed, i);
            check_nondecreasing_y(params, &start, MONOTONE_STEPS)
                .err()
                .map(|observed| SuiteFailure {
                    case_index: i,
                    inputs: json!({ "start": pt_json(&start), "steps": MONOTONE_STEPS }),
                    observed,
                })
        })
        .collect();
    Ok(SuiteReport::finish(
        "monotone_growth",
        SystemId::Sys1106,
        params,
        Some(seed),
        n_cases,
        0,
        failures,
        started,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NewtonOutcome {
    Converged { root: [f64; 2], iterations: usize },
    Inconclusive { last: [f64; 2], residual: f64 },
}

fn second_iterate(system: SystemId, params: &SystemParams, p: [f64; 2]) -> Option<([f64; 2], [[f64; 2]; 2])> {
    let p0 = Point::new(p[0], p[1]).ok()?;
    let p1 = step(system, params, &p0).ok()?;
    let p2 = step(system, params, &p1).ok()?;
    let j = mat_mul(
        &jacobian(system, params, &p1).ok()?,
        &jacobian(system, params, &p0).ok()?,
    );
    Some(([p2.x, p2.y], j))
}

fn residual_of(system: SystemId, params: &SystemParams, p: [f64; 2]) -> Option<([f64; 2], f64, [[f64; 2]; 2])> {
    let (t2, j) = second_iterate(system, params, p)?;
    let f = [t2[0] - p[0], t2[1] - p[1]];
    Some((f, f[0].abs().max(f[1].abs()), j))
}

/// Damped Newton on `T²(p) - p` using the chain-rule Jacobian
/// `J(T(p))·J(p)`. The step is halved while it increases the residual or
/// leaves the domain of the map.
pub fn newton_period_two(
    system: SystemId,
    params: &SystemParams,
    seed: [f64; 2],
    max_iters: usize,
) -> NewtonOutcome {
    let mut p = seed;
    let Some((mut f, mut res, mut jt2)) = residual_of(system, params, p) else {
        return NewtonOutcome::Inconclusive {
            last: p,
            residual: f64::INFINITY,
        };
    };
    for it in 0..=max_iters {
        if res <= NEWTON_RESIDUAL {
            return NewtonOutcome::Converged {
                root: p,
                iterations: it,
            };
        }
        if it == max_iters {
            break;
        }
        let j = [
            [jt2[0][0] - 1.0, jt2[0][1]],
            [jt2[1][0], jt2[1][1] - 1.0],
        ];
        let d = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let dx = -(j[1][1] * f[0] - j[0][1] * f[1]) / d;
        let dy = -(-j[1][0] * f[0] + j[0][0] * f[1]) / d;
        let mut scale = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let trial = [p[0] + scale * dx, p[1] + scale * dy];
            if let Some(next) = residual_of(system, params, trial) {
                if next.1 < res {
                    accepted = Some((trial, next));
                    break;
                }
            }
            scale *= 0.5;
        }
        let Some((trial, next)) = accepted else { break };
        p = trial;
        (f, res, jt2) = next;
    }
    NewtonOutcome::Inconclusive { last: p, residual: res }
}

/// Cell-center seeds of a `grid × grid` mesh on `(0, 4x̄] × (0, 4ȳ]` that fall in Δ.
pub fn period_two_seeds(z: &Point, grid: usize) -> Vec<[f64; 2]> {
    let mut seeds = Vec::new();
    for i in 0..grid {
        for j in 0..grid {
            let p = Point {
                x: 4.0 * z.x * (i as f64 + 0.5) / grid as f64,
                y: 4.0 * z.y * (j as f64 + 0.5) / grid as f64,
            };
            if in_delta(z, &p) {
                seeds.push([p.x, p.y]);
            }
        }
    }
    seeds
}

pub fn run_period_two_search(
    system: SystemId,
    params: &SystemParams,
    grid: usize,
    newton_iters: usize,
) -> SuiteReport {
    let started = Instant::now();
    let Ok(saddle) = interior_saddle(system, params) else {
        return SuiteReport::not_applicable("period_two", system, params);
    };
    let known: Vec<Point> = equilibria(system, params).into_iter().map(|e| e.point).collect();
    let seeds = period_two_seeds(&saddle.point, grid);
    let outcomes: Vec<(usize, NewtonOutcome)> = seeds
        .par_iter()
        .enumerate()
        .map(|(i, s)| (i, newton_period_two(system, params, *s, newton_iters)))
        .collect();
    let mut inconclusive = 0;
    let mut failures = Vec::new();
    for (i, outcome) in outcomes {
        match outcome {
            NewtonOutcome::Converged { root, .. } => {
                let r = Point { x: root[0], y: root[1] };
                if !known.iter().any(|k| k.dist_inf(&r) <= ROOT_MATCH) {
                    failures.push(SuiteFailure {
                        case_index: i,
                        inputs: json!({ "seed": seeds[i] }),
                        observed: json!({ "root": root }),
                    });
                }
            }
            NewtonOutcome::Inconclusive { .. } => inconclusive += 1,
        }
    }
    SuiteReport::finish(
        "period_two",
        system,
        params,
        None,
        seeds.len(),
        inconclusive,
        failures,
        started,
    )
}

pub fn run_hypothesis_suite(system: SystemId, params: &SystemParams) -> SuiteReport {
    let started = Instant::now();
    let report = check_theorem_hypotheses(system, params);
    if !report.applicable {
        return SuiteReport::not_applicable("hypotheses", system, params);
    }
    let failures = report
        .checks
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.passed)
        .map(|(i, c)| SuiteFailure {
            case_index: i,
            inputs: json!({ "hypothesis": c.name }),
            observed: json!({ "detail": c.detail }),
        })
        .collect();
    SuiteReport::finish(
        "hypotheses",
        system,
        params,
        None,
        report.checks.len(),
        0,
        failures,
        started,
    )
}
