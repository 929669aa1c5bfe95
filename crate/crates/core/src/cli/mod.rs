//! Command-line driver: build a catalog metric, run checks over a grid, report.
//!
//! Exit codes: 0 when every check passes (flagged counts as passing), 2 when a
//! check fails, 1 on configuration, parameter or domain errors.

mod checks;
mod config;
mod report;

pub use checks::{embedding_for_family, embedding_suite, geodesic, initial_state, run_check, worst_over, CONE_TOLERANCE};
pub use config::{parse_assignment, parse_point, Check, Format, GridSpec, OutputSpec, RunConfig};
pub use report::{write_text, CheckReport, Report, Status};

use crate::catalog::{build, FamilyMetric};
use crate::error::{Error, Result};
use crate::geodesic::write_trajectory_csv;
use crate::geometry::ChartPoint;
use crate::sampling;
use clap::{Args, Parser, Subcommand};
use std::ffi::OsString;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(name = "bianchi", version, about = "Verify diagonal Bianchi II, III and V Einstein metrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run checks (einstein, weyl, petrov, killing, yano, ks, ode by default) on one family.
    Verify(Common),
    /// Petrov type of one family over the grid.
    Classify(Common),
    /// Integrate one geodesic and report the drift of its conserved quantities.
    Geodesic(Common),
    /// Numerical identities of the elliptic-function machinery.
    EllipticSelftest(Common),
    /// Embedding and coordinate-change checks; every map when no family is given.
    Embed(Common),
}

#[derive(Args, Debug, Default)]
struct Common {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    family: Option<String>,
    /// Family parameter, `name=value`.
    #[arg(long = "param", value_name = "K=V")]
    params: Vec<String>,
    /// `N` quasi-random points, or `lo:hi:n` for each of the four coordinates.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Tolerance override, `check=value`.
    #[arg(long = "tol", value_name = "CHECK=V")]
    tols: Vec<String>,
    /// Comma-separated check names (verify only).
    #[arg(long)]
    checks: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
    /// Affine span of a geodesic run.
    #[arg(long)]
    span: Option<f64>,
    /// Initial chart point of a geodesic, `x,y,z,t`.
    #[arg(long)]
    start: Option<String>,
    /// Initial covariant momentum of a geodesic.
    #[arg(long)]
    momentum: Option<String>,
}

impl Common {
    fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(f) = &self.family {
            cfg.family = Some(f.clone());
        }
        for a in &self.params {
            let (k, v) = parse_assignment(a)?;
            cfg.params.insert(k, v);
        }
        if let Some(g) = &self.grid {
            cfg.grid = g.parse()?;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        for a in &self.tols {
            let (k, v) = parse_assignment(a)?;
            cfg.tolerances.insert(k, v);
        }
        if let Some(c) = &self.checks {
            cfg.checks = c.split(',').map(|s| s.trim().parse()).collect::<Result<_>>()?;
        }
        if self.out.is_some() || self.format.is_some() {
            let mut o = cfg.output.take().unwrap_or(OutputSpec { path: None, format: Format::Json });
            if let Some(p) = &self.out {
                o.path = Some(p.clone());
            }
            if let Some(f) = &self.format {
                o.format = f.parse()?;
            }
            cfg.output = Some(o);
        }
        if let Some(s) = self.span {
            cfg.span = s;
        }
        if let Some(s) = &self.start {
            cfg.start = Some(parse_point(s)?);
        }
        if let Some(s) = &self.momentum {
            cfg.momentum = Some(parse_point(s)?);
        }
        cfg.validate_tolerances()?;
        if !(cfg.span > 0.0) {
            return Err(Error::Config(format!("span must be positive, got {}", cfg.span)));
        }
        Ok(cfg)
    }
}

/// Grid points for a constructed family, all inside its validity domain.
pub fn grid_points(fm: &FamilyMetric, grid: &GridSpec, seed: u64) -> Result<Vec<ChartPoint>> {
    let points = match (&grid.ranges, &grid.counts) {
        (Some(r), Some(c)) => {
            if r.len() != 4 || c.len() != 4 {
                return Err(Error::Config("grid ranges and counts need four entries each".into()));
            }
            let lo = [r[0][0], r[1][0], r[2][0], r[3][0]];
            let hi = [r[0][1], r[1][1], r[2][1], r[3][1]];
            sampling::regular(&lo, &hi, &[c[0], c[1], c[2], c[3]])
        }
        (None, None) => fm.sample_points(grid.count.unwrap_or(20), seed),
        _ => return Err(Error::Config("grid needs both ranges and counts".into())),
    };
    if points.is_empty() {
        return Err(Error::Config("grid is empty".into()));
    }
    if let Some(x) = points.iter().find(|x| !fm.metric.contains(x)) {
        return Err(Error::OutsideDomain(*x));
    }
    Ok(points)
}

fn build_family(cfg: &RunConfig) -> Result<FamilyMetric> {
    build(cfg.family()?, &cfg.params)
}

fn report_for(command: &str, fm: Option<&FamilyMetric>, cfg: &RunConfig) -> Report {
    match fm {
        Some(fm) => Report::new(command, Some(fm.family.to_string()), fm.params.clone(), cfg.seed),
        None => Report::new(command, None, cfg.params.clone(), cfg.seed),
    }
}

/// Runs one subcommand on a resolved configuration. Errors map to exit code 1.
pub fn run(command: &str, cfg: &RunConfig) -> Result<Report> {
    match command {
        "verify" | "classify" => {
            let fm = build_family(cfg)?;
            let points = grid_points(&fm, &cfg.grid, cfg.seed)?;
            let checks: Vec<Check> = match (command, cfg.checks.is_empty()) {
                ("classify", _) => vec![Check::Petrov],
                (_, true) => Check::DEFAULT.to_vec(),
                _ => cfg.checks.clone(),
            };
            let mut r = report_for(command, Some(&fm), cfg);
            for c in checks {
                r.checks.insert(c.name().to_string(), run_check(c, &fm, &points, cfg)?);
            }
            Ok(r)
        }
        "geodesic" => {
            let fm = build_family(cfg)?;
            let points = grid_points(&fm, &cfg.grid, cfg.seed)?;
            let tol = cfg.tolerance(Check::Geodesic, Some(fm.family));
            let (check, run, charges) = geodesic(&fm, &points, cfg, tol)?;
            let mut r = report_for(command, Some(&fm), cfg);
            let mut check = check;
            if let Some(path) = cfg.output.as_ref().and_then(|o| o.path.as_ref()) {
                let side = trajectory_path(path);
                write_trajectory_csv(&side, &run, &charges)?;
                check = check.with_detail("trajectory", side.display().to_string());
            }
            r.checks.insert(Check::Geodesic.name().to_string(), check);
            Ok(r)
        }
        "elliptic-selftest" => {
            let mut r = report_for(command, None, cfg);
            let dummy = crate::catalog::build(crate::catalog::Family::Flat3, &Default::default())?;
            r.checks.insert(Check::EllipticSelftest.name().to_string(), run_check(Check::EllipticSelftest, &dummy, &[], cfg)?);
            Ok(r)
        }
        "embed" => {
            let tol = cfg.tolerance(Check::Embedding, None);
            if cfg.family.is_none() {
                let mut r = report_for(command, None, cfg);
                for (name, c) in embedding_suite(cfg.seed, tol)? {
                    r.checks.insert(name, c);
                }
                return Ok(r);
            }
            let fm = build_family(cfg)?;
            let points = grid_points(&fm, &cfg.grid, cfg.seed)?;
            let mut r = report_for(command, Some(&fm), cfg);
            r.checks.insert(Check::Embedding.name().to_string(), embedding_for_family(&fm, &points, tol)?);
            Ok(r)
        }
        other => Err(Error::Config(format!("unknown command '{other}'"))),
    }
}

/// `run.json` → `run.trajectory.csv`.
pub fn trajectory_path(out: &Path) -> PathBuf {
    out.with_extension("trajectory.csv")
}

fn emit(report: &Report, cfg: &RunConfig) -> Result<()> {
    let format = cfg.output.as_ref().map(|o| o.format).unwrap_or_default();
    let text = match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv()?,
    };
    match cfg.output.as_ref().and_then(|o| o.path.as_ref()) {
        Some(p) => write_text(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Entry point behind the binary; returns the process exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (name, common) = match &cli.command {
        Command::Verify(c) => ("verify", c),
        Command::Classify(c) => ("classify", c),
        Command::Geodesic(c) => ("geodesic", c),
        Command::EllipticSelftest(c) => ("elliptic-selftest", c),
        Command::Embed(c) => ("embed", c),
    };
    let outcome = common.resolve().and_then(|cfg| {
        let report = run(name, &cfg)?;
        emit(&report, &cfg)?;
        Ok(report)
    });
    match outcome {
        Ok(report) => {
            eprint!("{}", report.summary());
            if report.all_pass() {
                0
            } else {
                2
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
