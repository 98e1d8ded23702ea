//! `cpd`: command-line front end for the (11,6)/(11,14) analysis library.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use cpd_core::basin::{rasterize, Window};
use cpd_core::separatrix::compute_separatrix;
use cpd_core::systems::{
    check_theorem_hypotheses, classify_region, equilibria, FateClassifier, RegionClass,
};
use cpd_core::verify::{
    run_hypothesis_suite, run_monotone_growth_suite, run_monotone_y_suite, run_order_suite,
    run_period_two_search, SuiteReport,
};
use cpd_core::{plane, taxonomy, Point, SystemId, SystemParams};

#[derive(Parser, Debug)]
#[command(name = "cpd", version, about = "Competitive planar difference systems (11,6) and (11,14)")]
#[command(allow_negative_numbers = true)]
struct Cli {
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true, env = "CPD_WORKERS")]
    workers: Option<usize>,

    /// Output file; stdout when omitted (required for `basin`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Region, equilibria, spectra and saddle hypotheses as JSON.
    Analyze {
        #[command(flatten)]
        sys: SystemArgs,
    },
    /// Iterate from a start point; CSV `n,x,y` plus a fate comment.
    Orbit {
        #[command(flatten)]
        sys: SystemArgs,
        /// Start point `x,y`.
        #[arg(long, allow_hyphen_values = true)]
        start: String,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        /// Iteration budget for the fate classifier.
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
    },
    /// Tabulate the separatrix through the interior saddle as CSV `x,y`.
    Separatrix {
        #[command(flatten)]
        sys: SystemArgs,
        /// `x_min,x_max`.
        #[arg(long, allow_hyphen_values = true)]
        xrange: String,
        #[arg(long, default_value_t = 33)]
        samples: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
    },
    /// Basin raster as binary PGM plus a `<out>.json` sidecar.
    Basin {
        #[command(flatten)]
        sys: SystemArgs,
        /// `x_lo,x_hi,y_lo,y_hi`.
        #[arg(long, allow_hyphen_values = true)]
        window: String,
        /// `WIDTHxHEIGHT`.
        #[arg(long, default_value = "100x100")]
        grid: String,
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
    },
    /// Census of the competitive special cases as JSON.
    Taxonomy,
    /// Run property suites; exit status 1 if any fails.
    Verify {
        #[command(flatten)]
        sys: SystemArgs,
        /// Suites to run (repeatable); all of them by default.
        #[arg(long = "suite", value_enum)]
        suites: Vec<Suite>,
        #[arg(long, default_value_t = 10_000)]
        cases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Seed mesh size for the period-two search.
        #[arg(long, default_value_t = 32)]
        grid: usize,
        #[arg(long, default_value_t = 50)]
        newton_iters: usize,
        /// Report zero wall time so reruns are byte-identical.
        #[arg(long)]
        no_timing: bool,
    },
}

#[derive(Args, Debug)]
struct SystemArgs {
    /// `11-06` or `11-14`.
    #[arg(long)]
    system: SystemId,
    #[arg(long)]
    alpha1: f64,
    #[arg(long)]
    a1: f64,
    /// Third parameter of (11,6).
    #[arg(long)]
    gamma2: Option<f64>,
    /// Third parameter of (11,14).
    #[arg(long)]
    a2: Option<f64>,
}

impl SystemArgs {
    fn resolve(&self) -> anyhow::Result<(SystemId, SystemParams)> {
        let third = match (self.system, self.gamma2, self.a2) {
            (SystemId::Sys1106, _, Some(_)) => bail!("--a2 is not a parameter of system 11-06 (use --gamma2)"),
            (SystemId::Sys1114, Some(_), _) => bail!("--gamma2 is not a parameter of system 11-14 (use --a2)"),
            (SystemId::Sys1106, Some(g), None) => g,
            (SystemId::Sys1114, None, Some(a)) => a,
            (SystemId::Sys1106, None, None) => bail!("--gamma2 is required for system 11-06"),
            (SystemId::Sys1114, None, None) => bail!("--a2 is required for system 11-14"),
        };
        let params = SystemParams::for_system(self.system, self.alpha1, self.a1, third)?;
        Ok((self.system, params))
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Suite {
    Order,
    Monotone,
    PeriodTwo,
    Hypotheses,
}

/// Usage errors exit with 2, failed suites with 1.
enum Outcome {
    Success,
    SuiteFailure,
}

fn parse_list(s: &str, n: usize, what: &str) -> anyhow::Result<Vec<f64>> {
    let vals = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| anyhow!("{what} must be {n} comma-separated numbers, got `{s}`"))?;
    if vals.len() != n {
        bail!("{what} must be {n} comma-separated numbers, got `{s}`");
    }
    Ok(vals)
}

fn parse_grid(s: &str) -> anyhow::Result<(usize, usize)> {
    let err = || anyhow!("grid must look like WIDTHxHEIGHT with both at least 1, got `{s}`");
    let (w, h) = s.split_once(['x', 'X']).ok_or_else(err)?;
    let w: usize = w.trim().parse().map_err(|_| err())?;
    let h: usize = h.trim().parse().map_err(|_| err())?;
    if w == 0 || h == 0 {
        return Err(err());
    }
    Ok((w, h))
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn open_out(out: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json(out: &Option<PathBuf>, doc: &serde_json::Value) -> anyhow::Result<()> {
    let mut w = open_out(out)?;
    serde_json::to_writer_pretty(&mut w, doc)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn region_json(region: RegionClass) -> serde_json::Value {
    json!({ "tag": region.tag(), "kind": region.kind() })
}

fn cmd_analyze(out: &Option<PathBuf>, sys: &SystemArgs) -> anyhow::Result<Outcome> {
    let (system, params) = sys.resolve()?;
    let doc = json!({
        "schema": "cpd-analyze-1",
        "system": system,
        "params": params.named(system),
        "region": region_json(classify_region(system, &params)),
        "equilibria": equilibria(system, &params),
        "hypotheses": check_theorem_hypotheses(system, &params),
    });
    write_json(out, &doc)?;
    Ok(Outcome::Success)
}

fn cmd_orbit(
    out: &Option<PathBuf>,
    sys: &SystemArgs,
    start: &str,
    steps: usize,
    max_iter: usize,
) -> anyhow::Result<Outcome> {
    let (system, params) = sys.resolve()?;
    let xy = parse_list(start, 2, "--start")?;
    let start = Point::new(xy[0], xy[1])?;
    let trace = plane::iterate(system, &params, start, steps);
    let fate = FateClassifier::new(system, &params).classify(start, max_iter);
    let mut w = open_out(out)?;
    writeln!(w, "n,x,y")?;
    for (n, p) in trace.points.iter().enumerate() {
        writeln!(w, "{n},{},{}", p.x, p.y)?;
    }
    writeln!(w, "# fate={} iters={}", fate.fate.name(), fate.iterations_used)?;
    w.flush()?;
    Ok(Outcome::Success)
}

fn cmd_separatrix(
    out: &Option<PathBuf>,
    sys: &SystemArgs,
    xrange: &str,
    samples: usize,
    tol: f64,
    max_iter: usize,
) -> anyhow::Result<Outcome> {
    let (system, params) = sys.resolve()?;
    let r = parse_list(xrange, 2, "--xrange")?;
    let curve = compute_separatrix(system, &params, r[0], r[1], samples, tol, max_iter)?;
    let mut w = open_out(out)?;
    curve.write_csv(&mut w)?;
    w.flush()?;
    Ok(Outcome::Success)
}

fn cmd_basin(
    out: &Option<PathBuf>,
    sys: &SystemArgs,
    window: &str,
    grid: &str,
    max_iter: usize,
) -> anyhow::Result<Outcome> {
    let (system, params) = sys.resolve()?;
    let Some(path) = out else {
        bail!("basin needs --out for the PGM image");
    };
    let v = parse_list(window, 4, "--window")?;
    let (width, height) = parse_grid(grid)?;
    let raster = rasterize(system, &params, Window::new(v[0], v[1], v[2], v[3]), width, height, max_iter)?;
    let mut w = BufWriter::new(File::create(path).with_context(|| format!("cannot create {}", path.display()))?);
    raster.write_pgm(&mut w)?;
    w.flush()?;
    write_json(&Some(sidecar_path(path)), &raster.sidecar())?;
    Ok(Outcome::Success)
}

fn cmd_taxonomy(out: &Option<PathBuf>) -> anyhow::Result<Outcome> {
    write_json(out, &serde_json::to_value(taxonomy::census())?)?;
    Ok(Outcome::Success)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    out: &Option<PathBuf>,
    sys: &SystemArgs,
    suites: &[Suite],
    cases: usize,
    seed: u64,
    grid: usize,
    newton_iters: usize,
    no_timing: bool,
) -> anyhow::Result<Outcome> {
    let (system, params) = sys.resolve()?;
    if cases == 0 {
        bail!("--cases must be at least 1");
    }
    let explicit = !suites.is_empty();
    let selected: Vec<Suite> = if explicit {
        suites.to_vec()
    } else {
        vec![Suite::Order, Suite::Monotone, Suite::PeriodTwo, Suite::Hypotheses]
    };
    let mut reports: Vec<SuiteReport> = Vec::new();
    for suite in selected {
        let report = match suite {
            Suite::Order => run_order_suite(system, &params, cases, seed),
            Suite::Monotone => {
                let run = match system {
                    SystemId::Sys1114 => run_monotone_y_suite(&params, cases, seed),
                    SystemId::Sys1106 => run_monotone_growth_suite(&params, cases, seed),
                };
                match run {
                    Ok(r) => r,
                    Err(e) if explicit => return Err(e.into()),
                    Err(_) => SuiteReport::not_applicable("monotone", system, &params),
                }
            }
            Suite::PeriodTwo => run_period_two_search(system, &params, grid, newton_iters),
            Suite::Hypotheses => run_hypothesis_suite(system, &params),
        };
        reports.push(report);
    }
    if no_timing {
        for r in &mut reports {
            r.wall_time_ms = 0.0;
        }
    }
    let passed = reports.iter().all(SuiteReport::passed);
    let doc = json!({
        "schema": "cpd-verify-1",
        "system": system,
        "params": params.named(system),
        "passed": passed,
        "reports": reports,
    });
    write_json(out, &doc)?;
    Ok(if passed { Outcome::Success } else { Outcome::SuiteFailure })
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let out = &cli.out;
    match &cli.command {
        Command::Analyze { sys } => cmd_analyze(out, sys),
        Command::Orbit { sys, start, steps, max_iter } => cmd_orbit(out, sys, start, *steps, *max_iter),
        Command::Separatrix { sys, xrange, samples, tol, max_iter } => {
            cmd_separatrix(out, sys, xrange, *samples, *tol, *max_iter)
        }
        Command::Basin { sys, window, grid, max_iter } => cmd_basin(out, sys, window, grid, *max_iter),
        Command::Taxonomy => cmd_taxonomy(out),
        Command::Verify { sys, suites, cases, seed, grid, newton_iters, no_timing } => {
            cmd_verify(out, sys, suites, *cases, *seed, *grid, *newton_iters, *no_timing)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let rendered = e.to_string();
            let line = rendered.lines().next().unwrap_or("invalid arguments");
            eprintln!("{line}");
            return ExitCode::from(2);
        }
    };
    let result = match cli.workers {
        Some(0) => Err(anyhow!("--workers must be at least 1")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(anyhow::Error::from)
            .and_then(|pool| pool.install(|| run(&cli))),
        None => run(&cli),
    };
    match result {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::SuiteFailure) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", format!("{e:#}").replace('\n', " "));
            ExitCode::from(2)
        }
    }
}
