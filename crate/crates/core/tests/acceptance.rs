//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{draw_params, eig_from_matrix, fd_jacobian, log_uniform, oracle_eigenvalues, params, REGIONS};
use cpd_core::basin::{rasterize, Window};
use cpd_core::separatrix::{compute_separatrix, tangency_check, validate_invariance, SeparatrixCurve};
use cpd_core::systems::{
    classify_region, default_epsilon, equilibria, interior_saddle, jacobian, step, trap, EquilibriumKind,
    FateClassifier, FateCode, TrapSide,
};
use cpd_core::taxonomy::census;
use cpd_core::verify::{
    run_monotone_growth_suite, run_monotone_y_suite, run_period_two_search, NewtonOutcome, SuiteStatus,
};
use cpd_core::{Point, SystemId, SystemParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn single_worker<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(f)
}

fn with_workers<T: Send>(n: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap().install(f)
}

fn taxonomy_counts() -> Outcome {
    let t0 = Instant::now();
    let c = census();
    let dt = t0.elapsed();
    let counts = (
        c.special_cases,
        c.competitive_cases,
        c.trivial_cases,
        c.nontrivial_competitive_cases,
        c.strongly_competitive_cases,
    );
    let a1 = (c.assumption1.total, c.assumption1.trivial_within, c.assumption1.nontrivial);
    let a2 = (c.assumption2.total, c.assumption2.trivial_within, c.assumption2.nontrivial);
    let ok = counts == (2401, 289, 81, 208, 64)
        && a1 == (121, 9, 112)
        && a2 == (121, 9, 112)
        && dt < Duration::from_millis(1);
    check(ok, format!("counts {counts:?} assumption {a1:?} {a2:?} in {dt:?}"))
}

fn equilibria_closed_form() -> Outcome {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst_res = 0.0f64;
    let mut worst_eig = 0.0f64;
    let mut n = 0;
    for (system, region) in REGIONS {
        for _ in 0..1000 {
            let p = draw_params(&mut rng, region);
            for e in equilibria(system, &p) {
                let z = e.point;
                let tz = step(system, &p, &z).map_err(|err| err.to_string())?;
                worst_res = worst_res.max(tz.dist_inf(&z) / (1.0 + z.norm_inf()));
                let interior = e.kind == EquilibriumKind::Interior;
                let oracle = oracle_eigenvalues(system, &p, interior);
                let mut got = e.eigenvalues;
                got.sort_by(f64::total_cmp);
                let via_matrix = eig_from_matrix(jacobian(system, &p, &z).unwrap());
                for k in 0..2 {
                    worst_eig = worst_eig
                        .max((got[k] - oracle[k]).abs())
                        .max((got[k] - via_matrix[k]).abs());
                }
                n += 1;
            }
        }
    }
    let dt = t0.elapsed();
    check(
        worst_res <= 1e-12 && worst_eig <= 1e-12 && dt < Duration::from_secs(1),
        format!("{n} equilibria, max scaled residual {worst_res:.2e}, max eigenvalue gap {worst_eig:.2e}, {dt:?}"),
    )
}

fn saddle_spectrum() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut violations = 0;
    let mut worst_sum = 0.0f64;
    for (system, region) in REGIONS {
        if !region.has_interior_saddle() {
            continue;
        }
        for _ in 0..10_000 {
            let p = draw_params(&mut rng, region);
            let s = interior_saddle(system, &p).map_err(|e| e.to_string())?;
            let (l, m) = (s.lambda(), s.mu());
            worst_sum = worst_sum.max((l + m - 1.0).abs());
            if !((l + m - 1.0).abs() <= 1e-12 && -1.0 < l && l < 0.0 && 1.0 < m) {
                violations += 1;
            }
        }
    }
    check(
        violations == 0,
        format!("20000 draws, {violations} violations, max |λ+μ-1| {worst_sum:.2e}"),
    )
}

fn jacobian_vs_fd() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for (system, region) in REGIONS {
        let count = if system == SystemId::Sys1106 { 334 } else { 250 };
        for _ in 0..count {
            let p = draw_params(&mut rng, region);
            let x = log_uniform(&mut rng, 0.05, 20.0);
            let y = log_uniform(&mut rng, 0.05, 20.0);
            let a = jacobian(system, &p, &Point { x, y }).unwrap();
            let fd = fd_jacobian(system, &p, x, y);
            for r in 0..2 {
                for c in 0..2 {
                    worst = worst.max((a[r][c] - fd[r][c]).abs() / a[r][c].abs().max(1.0));
                }
            }
        }
    }
    check(worst <= 1e-6, format!("≥1000 points per system, max relative gap {worst:.2e}"))
}

fn trap_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut escapes = 0;
    let mut detail = Vec::new();
    for (system, p) in [(SystemId::Sys1106, params(2.0, 1.0, 1.0)), (SystemId::Sys1114, params(1.0, 1.0, 0.5))] {
        let eps = default_epsilon(system, &p).map_err(|e| e.to_string())?;
        for side in [TrapSide::UpperTrap, TrapSide::LowerTrap] {
            let t = trap(system, &p, side, eps).map_err(|e| e.to_string())?;
            for k in 0..10_000 {
                let q = match side {
                    TrapSide::UpperTrap => {
                        let x = if k == 0 { t.x_hi } else { rng.gen_range(0.0..t.x_hi) };
                        let y = if k == 0 { t.y_lo } else { t.y_lo + log_uniform(&mut rng, 1e-9, 1e6) };
                        Point { x, y }
                    }
                    TrapSide::LowerTrap => {
                        let x = if k == 0 { t.x_lo } else { t.x_lo + log_uniform(&mut rng, 1e-9, 1e6) };
                        let y = if k == 0 { t.y_hi } else { rng.gen_range(0.0..=t.y_hi) };
                        Point { x, y }
                    }
                };
                if !t.contains(&q) {
                    continue;
                }
                match step(system, &p, &q) {
                    Ok(img) if t.contains(&img) => {}
                    _ => escapes += 1,
                }
            }
            detail.push(format!("{system} {side:?} {t}"));
        }
    }
    check(escapes == 0, format!("{escapes} escapes; eps default; {}", detail.join("; ")))
}

fn canonical_curve(system: SystemId, n: usize) -> Result<SeparatrixCurve, String> {
    let (p, lo, hi) = match system {
        SystemId::Sys1106 => (params(2.0, 1.0, 1.0), 0.5, 2.0),
        SystemId::Sys1114 => (params(1.0, 1.0, 0.5), 0.25, 2.0),
    };
    compute_separatrix(system, &p, lo, hi, n, 1e-10, 10_000).map_err(|e| e.to_string())
}

fn separatrix_through_saddle() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (system, xb, yb) in [(SystemId::Sys1106, 1.0, 1.0), (SystemId::Sys1114, 0.5, 1.0)] {
        let t0 = Instant::now();
        let c = canonical_curve(system, 33)?;
        let dt = t0.elapsed();
        let y = c.eval(xb).ok_or("saddle outside curve")?;
        let err = (y - yb).abs();
        ok &= err <= 1e-10 && dt < Duration::from_secs(10);
        parts.push(format!("{system}: |C(x̄)-ȳ| = {err:.2e} in {dt:?}"));
    }
    check(ok, parts.join("; "))
}

fn tangency() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (system, expected) in [
        (SystemId::Sys1106, 3f64.sqrt() - 1.0),
        (SystemId::Sys1114, 2.0 * (2f64.sqrt() - 1.0)),
    ] {
        let c = canonical_curve(system, 33)?;
        let t = tangency_check(&c).map_err(|e| e.to_string())?;
        let diff = (t.secant_slope - expected).abs();
        ok &= diff <= 1e-3 && (t.eigen_slope - expected).abs() <= 1e-12;
        parts.push(format!("{system}: secant {:.6} vs {expected:.6}", t.secant_slope));
    }
    check(ok, parts.join("; "))
}

fn forward_invariance() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for system in [SystemId::Sys1106, SystemId::Sys1114] {
        let c = canonical_curve(system, 65)?;
        let r = validate_invariance(&c, 100).map_err(|e| e.to_string())?;
        ok &= r.n_probe == 100 && r.max_deviation < 1e-3;
        parts.push(format!("{system}: max deviation {:.2e} over {} probes", r.max_deviation, r.n_probe));
    }
    check(ok, parts.join("; "))
}

fn basin_vs_separatrix() -> Outcome {
    let system = SystemId::Sys1106;
    let p = params(2.0, 1.0, 1.0);
    let t0 = Instant::now();
    let (raster, curve) = single_worker(|| {
        let raster = rasterize(system, &p, Window::new(0.01, 4.0, 0.01, 4.0), 100, 100, 10_000);
        let curve = compute_separatrix(system, &p, 0.01, 4.0, 129, 1e-10, 10_000);
        (raster, curve)
    });
    let dt = t0.elapsed();
    let raster = raster.map_err(|e| e.to_string())?;
    let curve = curve.map_err(|e| e.to_string())?;
    let guard = raster.cell_height();
    let mut contradictions = 0;
    let mut undecided = 0;
    for row in 0..raster.height {
        for col in 0..raster.width {
            let z = raster.cell_center(col, row);
            let cy = curve.eval(z.x).ok_or("cell outside curve domain")?;
            match raster.get(col, row) {
                FateCode::Upper if z.y < cy - guard => contradictions += 1,
                FateCode::Lower if z.y > cy + guard => contradictions += 1,
                FateCode::Undecided => undecided += 1,
                _ => {}
            }
        }
    }
    let frac = undecided as f64 / (raster.width * raster.height) as f64;
    check(
        contradictions == 0 && frac < 0.01 && dt < Duration::from_secs(30),
        format!("{contradictions} contradictions, undecided {:.2}%, {dt:?} single worker", frac * 100.0),
    )
}

fn all_cells(system: SystemId, p: SystemParams, w: Window, want: FateCode) -> Result<String, String> {
    let r = rasterize(system, &p, w, 100, 100, 10_000).map_err(|e| e.to_string())?;
    let bad = r.cells.iter().filter(|c| **c != want).count();
    let s = format!("{system} {:?}: {bad}/10000 not {}", (p.alpha1, p.a1, p.third), want.name());
    if bad == 0 {
        Ok(s)
    } else {
        Err(s)
    }
}

fn random_starts_upper(system: SystemId, p: SystemParams, seed: u64, max_iter: usize) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let clf = FateClassifier::new(system, &p);
    let mut bad = 0;
    for _ in 0..1000 {
        let z = Point {
            x: log_uniform(&mut rng, 1e-3, 1e3),
            y: log_uniform(&mut rng, 1e-3, 1e3),
        };
        if clf.classify(z, max_iter).fate != FateCode::Upper {
            bad += 1;
        }
    }
    let s = format!(
        "{system} {:?} [{}]: {bad}/1000 starts not Upper within {max_iter} steps",
        (p.alpha1, p.a1, p.third),
        classify_region(system, &p).kind()
    );
    if bad == 0 {
        Ok(s)
    } else {
        Err(s)
    }
}

fn global_regions() -> Outcome {
    let w = Window::new(0.0, 4.0, 0.0, 4.0);
    let results = [
        all_cells(SystemId::Sys1114, params(1.0, 1.0, 2.0), w, FateCode::Lower),
        all_cells(SystemId::Sys1114, params(0.2, 1.0, 0.5), w, FateCode::Upper),
        random_starts_upper(SystemId::Sys1106, params(1.0, 1.0, 2.0), 10, 100_000),
        // escape from the nonhyperbolic boundary point is algebraic, roughly 1/y steps
        random_starts_upper(SystemId::Sys1106, params(1.0, 1.0, 1.0), 11, 10_000_000),
        random_starts_upper(SystemId::Sys1114, params(0.5, 1.0, 0.5), 12, 10_000_000),
    ];
    let ok = results.iter().all(|r| r.is_ok());
    let text: Vec<String> = results.into_iter().map(|r| r.unwrap_or_else(|e| e)).collect();
    check(ok, text.join("; "))
}

fn monotone_suites() -> Outcome {
    let dec = run_monotone_y_suite(&params(1.0, 1.0, 1.0), 1000, 21).map_err(|e| e.to_string())?;
    let inc = run_monotone_growth_suite(&params(1.0, 1.0, 1.0), 1000, 22).map_err(|e| e.to_string())?;
    check(
        dec.status == SuiteStatus::Pass && inc.status == SuiteStatus::Pass,
        format!(
            "decrease: {} failures / {} orbits; increase: {} failures / {} orbits",
            dec.failures.len(),
            dec.cases_run,
            inc.failures.len(),
            inc.cases_run
        ),
    )
}

fn period_two() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (system, p) in [(SystemId::Sys1106, params(2.0, 1.0, 1.0)), (SystemId::Sys1114, params(1.0, 1.0, 0.5))] {
        let r = run_period_two_search(system, &p, 32, 50);
        let converged = r.cases_run - r.inconclusive;
        ok &= r.status == SuiteStatus::Pass && converged > 0;
        parts.push(format!(
            "{system}: {} seeds, {converged} converged to known fixed points, {} stray roots",
            r.cases_run,
            r.failures.len()
        ));
    }
    let z = interior_saddle(SystemId::Sys1106, &params(2.0, 1.0, 1.0)).unwrap().point;
    let at_saddle = cpd_core::verify::newton_period_two(SystemId::Sys1106, &params(2.0, 1.0, 1.0), [z.x, z.y], 50);
    ok &= matches!(at_saddle, NewtonOutcome::Converged { iterations: 0, .. });
    check(ok, parts.join("; "))
}

fn determinism() -> Outcome {
    let artifacts = |n: usize| {
        with_workers(n, || {
            let b1 = rasterize(
                SystemId::Sys1106,
                &params(2.0, 1.0, 1.0),
                Window::new(0.01, 4.0, 0.01, 4.0),
                64,
                64,
                10_000,
            )
            .unwrap()
            .to_pgm();
            let b2 = rasterize(
                SystemId::Sys1114,
                &params(1.0, 1.0, 0.5),
                Window::new(0.0, 3.0, 0.0, 3.0),
                64,
                64,
                10_000,
            )
            .unwrap()
            .to_pgm();
            let c1 = canonical_curve(SystemId::Sys1106, 33).unwrap().to_csv();
            let c2 = canonical_curve(SystemId::Sys1114, 33).unwrap().to_csv();
            (b1, b2, c1, c2)
        })
    };
    let base = artifacts(1);
    let same = [4, 8].iter().all(|&n| artifacts(n) == base);
    check(same, "2 rasters and 2 separatrix CSVs compared at 1, 4 and 8 workers".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("taxonomy exactness", taxonomy_counts),
        ("closed-form equilibria", equilibria_closed_form),
        ("saddle spectral structure", saddle_spectrum),
        ("jacobian correctness", jacobian_vs_fd),
        ("trapping invariance", trap_invariance),
        ("separatrix through the saddle", separatrix_through_saddle),
        ("tangency at the saddle", tangency),
        ("forward invariance of the separatrix", forward_invariance),
        ("basin/separatrix consistency", basin_vs_separatrix),
        ("global-behavior regions", global_regions),
        ("monotone-y suites", monotone_suites),
        ("period-two absence", period_two),
        ("determinism across worker counts", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let result = f();
        let dt = t0.elapsed();
        let (tag, detail) = match result {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} {tag}  {name}: {detail} [{:.2?}]", i + 1, dt);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
