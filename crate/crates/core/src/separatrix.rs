//! The invariant curve `C` through the interior saddle, tabulated by
//! bisection on orbit fates.
//!
//! Points above `C` escape to `(0, ∞)` and points below converge to
//! `(α₁/A₁, 0)`, so at each abscissa the height of `C` is the boundary
//! between [`FateCode::Upper`] and [`FateCode::Lower`] starts.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::plane::Point;
use crate::systems::{interior_saddle, step, FateClassifier, FateCode, SystemId, SystemParams};

/// Lower bracket end as a fraction of the saddle height.
const LOWER_BRACKET: f64 = 1e-9;
/// Upper bracket doubling stops at `2^30 · ȳ`.
const MAX_DOUBLINGS: u32 = 30;
/// Neighborhood of `x̄` used by the tangency check.
pub const TANGENCY_WINDOW: f64 = 1e-2;
pub const TANGENCY_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparatrixCurve {
    pub system: SystemId,
    pub params: SystemParams,
    /// Sorted by `x`; strictly increasing in both coordinates.
    pub samples: Vec<Point>,
    pub bisection_tol: f64,
    pub saddle: Point,
}

impl SeparatrixCurve {
    pub fn x_min(&self) -> f64 {
        self.samples[0].x
    }

    pub fn x_max(&self) -> f64 {
        self.samples[self.samples.len() - 1].x
    }

    /// Piecewise-linear interpolation; `None` outside the sampled range.
    pub fn eval(&self, x: f64) -> Option<f64> {
        let s = &self.samples;
        if s.is_empty() || !(x >= s[0].x && x <= s[s.len() - 1].x) {
            return None;
        }
        let i = s.partition_point(|p| p.x < x);
        if i < s.len() && s[i].x == x {
            return Some(s[i].y);
        }
        let (a, b) = (s[i - 1], s[i]);
        let t = (x - a.x) / (b.x - a.x);
        Some(a.y + t * (b.y - a.y))
    }

    /// Largest deviation of a sample from the chord of its two neighbors: a
    /// conservative estimate of the interpolation error between samples.
    pub fn interpolation_gap(&self) -> f64 {
        self.samples
            .windows(3)
            .map(|w| {
                let t = (w[1].x - w[0].x) / (w[2].x - w[0].x);
                (w[0].y + t * (w[2].y - w[0].y) - w[1].y).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Allowed image deviation for the invariance check.
    pub fn invariance_bound(&self) -> f64 {
        10.0 * (self.bisection_tol + self.interpolation_gap())
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.samples
            .windows(2)
            .all(|w| w[1].x > w[0].x && w[1].y > w[0].y)
    }

    /// `x,y` header then one sample per line, shortest round-trip decimals.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "x,y")?;
        for p in &self.samples {
            writeln!(out, "{},{}", p.x, p.y)?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV is ASCII")
    }
}

/// Sample abscissae on `[x_min, x_max]`: half of them inside
/// `[0.8 x̄, 1.2 x̄]` with cubic clustering toward `x̄` (which is always a
/// sample), the rest spread uniformly over what remains of the window.
pub fn sample_abscissae(x_min: f64, x_max: f64, x_bar: f64, n: usize) -> Vec<f64> {
    let a = x_min.max(0.8 * x_bar);
    let b = x_max.min(1.2 * x_bar);
    let left_len = a - x_min;
    let right_len = x_max - b;

    let mut n_in = n / 2;
    let mut n_out = n - n_in;
    if left_len + right_len <= 0.0 {
        n_in = n;
        n_out = 0;
    }
    let (mut n_ol, mut n_or) = (0, 0);
    if n_out > 0 {
        n_ol = ((n_out as f64) * left_len / (left_len + right_len)).round() as usize;
        if left_len > 0.0 {
            n_ol = n_ol.max(1);
        }
        n_ol = n_ol.min(n_out);
        n_or = n_out - n_ol;
        if right_len > 0.0 && n_or == 0 && n_ol > 1 {
            n_ol -= 1;
            n_or = 1;
        }
        if right_len <= 0.0 {
            n_ol = n_out;
            n_or = 0;
        }
    }

    let mut xs = Vec::with_capacity(n);
    for k in 0..n_ol {
        xs.push(x_min + left_len * k as f64 / n_ol as f64);
    }
    for k in 1..=n_or {
        xs.push(b + right_len * k as f64 / n_or as f64);
    }

    xs.push(x_bar);
    let rest = n_in.saturating_sub(1);
    let (l_room, r_room) = (x_bar - a, b - x_bar);
    let n_il = if l_room + r_room > 0.0 {
        ((rest as f64) * l_room / (l_room + r_room)).round() as usize
    } else {
        0
    };
    let n_ir = rest - n_il;
    for k in 1..=n_il {
        let t = k as f64 / n_il as f64;
        xs.push(x_bar - l_room * t * t * t);
    }
    for k in 1..=n_ir {
        let t = k as f64 / n_ir as f64;
        xs.push(x_bar + r_room * t * t * t);
    }

    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}

/// Fate with one retry at twice the budget; `None` if still undecided.
fn decided_fate(c: &FateClassifier, p: Point, max_iter: usize) -> Option<FateCode> {
    let f = c.classify(p, max_iter).fate;
    let f = if f == FateCode::Undecided {
        c.classify(p, max_iter.saturating_mul(2)).fate
    } else {
        f
    };
    (f != FateCode::Undecided).then_some(f)
}

fn bisect_at(c: &FateClassifier, x: f64, y_bar: f64, tol: f64, max_iter: usize) -> Result<f64> {
    let fate = |y: f64| decided_fate(c, Point { x, y }, max_iter);

    let mut lo = LOWER_BRACKET * y_bar;
    match fate(lo) {
        Some(FateCode::Lower) => {}
        Some(FateCode::Saddle) => return Ok(lo),
        _ => {
            return Err(Error::BisectionFailed {
                x,
                reason: "lower bracket end is not below the curve",
            })
        }
    }
    let mut hi = 2.0 * y_bar;
    let mut doublings = 1;
    loop {
        match fate(hi) {
            Some(FateCode::Upper) => break,
            Some(FateCode::Saddle) => return Ok(hi),
            Some(FateCode::Lower) if doublings < MAX_DOUBLINGS => {
                lo = hi;
                hi *= 2.0;
                doublings += 1;
            }
            _ => {
                return Err(Error::BisectionFailed {
                    x,
                    reason: "no upper bracket end above the curve",
                })
            }
        }
    }

    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match fate(mid) {
            Some(FateCode::Upper) => hi = mid,
            Some(FateCode::Lower) => lo = mid,
            Some(FateCode::Saddle) => return Ok(mid),
            _ => {
                return Err(Error::BisectionFailed {
                    x,
                    reason: "undecided fate inside the bracket",
                })
            }
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Tabulate `C` at `n_samples` abscissae in `[x_min, x_max]`, each to a
/// bracket of width at most `tol`. Samples are computed in parallel on the
/// current rayon pool; the result does not depend on the pool size.
pub fn compute_separatrix(
    system: SystemId,
    params: &SystemParams,
    x_min: f64,
    x_max: f64,
    n_samples: usize,
    tol: f64,
    max_iter: usize,
) -> Result<SeparatrixCurve> {
    let saddle = interior_saddle(system, params)?.point;
    if !(x_min > 0.0 && x_min <= saddle.x && saddle.x <= x_max && x_min < x_max && x_max.is_finite()) {
        return Err(Error::Precondition(format!(
            "window [{x_min}, {x_max}] must satisfy 0 < x_min <= {} <= x_max",
            saddle.x
        )));
    }
    if n_samples < 3 {
        return Err(Error::Precondition("at least 3 samples are required".into()));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::Precondition("tolerance must be positive".into()));
    }
    if max_iter == 0 {
        return Err(Error::Precondition("max_iter must be at least 1".into()));
    }

    let classifier = FateClassifier::new(system, params);
    let xs = sample_abscissae(x_min, x_max, saddle.x, n_samples);
    let ys = xs
        .par_iter()
        .map(|&x| bisect_at(&classifier, x, saddle.y, tol, max_iter))
        .collect::<Result<Vec<f64>>>()?;
    let samples = xs.into_iter().zip(ys).map(|(x, y)| Point { x, y }).collect();
    Ok(SeparatrixCurve {
        system,
        params: *params,
        samples,
        bisection_tol: tol,
        saddle,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub n_probe: usize,
    pub max_deviation: f64,
    /// Abscissa of the probe attaining `max_deviation`.
    pub worst_x: f64,
    pub bound: f64,
    pub passed: bool,
}

/// Vertical offset of `p` from the curve, with `p.x` inside the window.
fn offset(curve: &SeparatrixCurve, p: &Point) -> Result<f64> {
    curve.eval(p.x).map(|c| p.y - c).ok_or(Error::ImageOutOfRange {
        x: p.x,
        lo: curve.x_min(),
        hi: curve.x_max(),
    })
}

/// Change of vertical offset from the curve over one step, for a point that
/// lies on the curve up to the invariance bound. Points far from the curve are
/// rejected with [`Error::NotOnCurve`].
pub fn probe_point(curve: &SeparatrixCurve, p: &Point) -> Result<f64> {
    let before = offset(curve, p)?;
    if before.abs() > curve.invariance_bound() {
        return Err(Error::NotOnCurve {
            x: p.x,
            y: p.y,
            offset: before,
        });
    }
    let img = step(curve.system, &curve.params, p)?;
    let after = offset(curve, &img)?;
    Ok((after - before).abs())
}

/// Map `n_probe` points of the interpolated curve forward once and measure
/// how far the images land from the curve.
pub fn validate_invariance(curve: &SeparatrixCurve, n_probe: usize) -> Result<InvarianceReport> {
    if curve.samples.len() < 2 || n_probe == 0 {
        return Err(Error::Precondition("need a curve with samples and at least one probe".into()));
    }
    let (lo, hi) = (curve.x_min(), curve.x_max());
    let mut max_deviation = 0.0;
    let mut worst_x = lo;
    for k in 0..n_probe {
        let x = lo + (hi - lo) * (k as f64 + 0.5) / n_probe as f64;
        let y = curve.eval(x).expect("probe inside window");
        let dev = probe_point(curve, &Point { x, y })?;
        if dev > max_deviation {
            max_deviation = dev;
            worst_x = x;
        }
    }
    let bound = curve.invariance_bound();
    Ok(InvarianceReport {
        n_probe,
        max_deviation,
        worst_x,
        bound,
        passed: max_deviation <= bound,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TangencyReport {
    pub secant_slope: f64,
    pub eigen_slope: f64,
    pub difference: f64,
    pub passed: bool,
}

/// Compare the secant of the samples adjacent to `x̄` with the slope of the
/// stable eigenvector at the saddle.
pub fn tangency_check(curve: &SeparatrixCurve) -> Result<TangencyReport> {
    let xb = curve.saddle.x;
    let near_left: Vec<&Point> = curve
        .samples
        .iter()
        .filter(|p| p.x < xb && xb - p.x <= TANGENCY_WINDOW)
        .collect();
    let near_right: Vec<&Point> = curve
        .samples
        .iter()
        .filter(|p| p.x > xb && p.x - xb <= TANGENCY_WINDOW)
        .collect();
    if near_left.len() < 2 || near_right.len() < 2 {
        return Err(Error::InsufficientSamples);
    }
    let l = near_left[near_left.len() - 1];
    let r = near_right[0];
    let secant_slope = (r.y - l.y) / (r.x - l.x);
    let eigen_slope = interior_saddle(curve.system, &curve.params)?
        .stable_slope()
        .ok_or(Error::NoInteriorSaddle)?;
    let difference = (secant_slope - eigen_slope).abs();
    Ok(TangencyReport {
        secant_slope,
        eigen_slope,
        difference,
        passed: difference <= TANGENCY_THRESHOLD,
    })
}
