#![allow(dead_code)]

use cpd_core::systems::{classify_region, RegionClass};
use cpd_core::{SystemId, SystemParams};
use rand::Rng;

pub const REGIONS: [(SystemId, RegionClass); 7] = [
    (SystemId::Sys1106, RegionClass::R1106SaddleOnly),
    (SystemId::Sys1106, RegionClass::R1106Nonhyperbolic),
    (SystemId::Sys1106, RegionClass::R1106TwoEquilibria),
    (SystemId::Sys1114, RegionClass::R1114Gas),
    (SystemId::Sys1114, RegionClass::R1114SaddleOnly),
    (SystemId::Sys1114, RegionClass::R1114Nonhyperbolic),
    (SystemId::Sys1114, RegionClass::R1114TwoEquilibria),
];

pub fn params(a: f64, b: f64, c: f64) -> SystemParams {
    SystemParams::new(a, b, c).unwrap()
}

pub fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo.ln()..hi.ln()).exp()
}

/// Parameters drawn inside `region`, each coordinate roughly log-uniform on [0.1, 10].
pub fn draw_params<R: Rng>(rng: &mut R, region: RegionClass) -> SystemParams {
    loop {
        let alpha1 = log_uniform(rng, 0.1, 10.0);
        let a1 = log_uniform(rng, 0.1, 10.0);
        let p = match region {
            RegionClass::R1106SaddleOnly => params(alpha1, a1, alpha1 / a1 * log_uniform(rng, 1.01, 10.0)),
            RegionClass::R1106TwoEquilibria => params(alpha1, a1, alpha1 / a1 * log_uniform(rng, 0.05, 0.99)),
            RegionClass::R1106Nonhyperbolic => {
                // a power-of-two A₁ makes γ₂·A₁ exact
                let a1 = 2f64.powi(rng.gen_range(-3..=3));
                let g = log_uniform(rng, 0.1, 10.0);
                params(g * a1, a1, g)
            }
            RegionClass::R1114Gas => params(alpha1, a1, rng.gen_range(1.0..10.0)),
            RegionClass::R1114SaddleOnly => {
                let a2 = rng.gen_range(0.01..0.99);
                params((1.0 - a2) * a1 * rng.gen_range(0.05..0.99), a1, a2)
            }
            RegionClass::R1114TwoEquilibria => {
                let a2 = rng.gen_range(0.01..0.99);
                params((1.0 - a2) * a1 * log_uniform(rng, 1.01, 20.0), a1, a2)
            }
            RegionClass::R1114Nonhyperbolic => {
                let a2 = rng.gen_range(0.01..0.99);
                params((1.0 - a2) * a1, a1, a2)
            }
        };
        let system = if region.tag().starts_with("R1106") {
            SystemId::Sys1106
        } else {
            SystemId::Sys1114
        };
        if classify_region(system, &p) == region {
            return p;
        }
    }
}

/// Eigenvalues at an equilibrium straight from trace and determinant of a
/// 2×2 matrix, ascending.
pub fn eig_from_matrix(m: [[f64; 2]; 2]) -> [f64; 2] {
    let t = m[0][0] + m[1][1];
    let d = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let s = (t * t / 4.0 - d).sqrt();
    [t / 2.0 - s, t / 2.0 + s]
}

/// Closed-form spectra written out independently: the boundary point has
/// `{0, γ₂A₁/α₁}` or `{0, 1/(A₂ + α₁/A₁)}`; the interior saddle has
/// `(1 ± √(5 − 4γ₂A₁/α₁))/2` or `(1 ± √(5 − 4A₂ − 4A₁(1−A₂)²/α₁))/2`.
pub fn oracle_eigenvalues(system: SystemId, p: &SystemParams, interior: bool) -> [f64; 2] {
    let (a, b, c) = (p.alpha1, p.a1, p.third);
    let mut ev = match (system, interior) {
        (SystemId::Sys1106, false) => [0.0, c * b / a],
        (SystemId::Sys1114, false) => [0.0, 1.0 / (c + a / b)],
        (SystemId::Sys1106, true) => {
            let r = (5.0 - 4.0 * c * b / a).sqrt();
            [(1.0 - r) / 2.0, (1.0 + r) / 2.0]
        }
        (SystemId::Sys1114, true) => {
            let r = (5.0 - 4.0 * c - 4.0 * b * (1.0 - c) * (1.0 - c) / a).sqrt();
            [(1.0 - r) / 2.0, (1.0 + r) / 2.0]
        }
    };
    ev.sort_by(f64::total_cmp);
    ev
}

/// Central differences with `h = 1e-6·(1 + |coordinate|)`.
pub fn fd_jacobian(system: SystemId, p: &SystemParams, x: f64, y: f64) -> [[f64; 2]; 2] {
    let f = |x: f64, y: f64| -> [f64; 2] {
        let fx = p.alpha1 / (p.a1 + y);
        let gy = match system {
            SystemId::Sys1106 => p.third * y / x,
            SystemId::Sys1114 => y / (p.third + x),
        };
        [fx, gy]
    };
    let hx = 1e-6 * (1.0 + x.abs());
    let hy = 1e-6 * (1.0 + y.abs());
    let (xp, xm) = (f(x + hx, y), f(x - hx, y));
    let (yp, ym) = (f(x, y + hy), f(x, y - hy));
    [
        [(xp[0] - xm[0]) / (2.0 * hx), (yp[0] - ym[0]) / (2.0 * hy)],
        [(xp[1] - xm[1]) / (2.0 * hx), (yp[1] - ym[1]) / (2.0 * hy)],
    ]
}
