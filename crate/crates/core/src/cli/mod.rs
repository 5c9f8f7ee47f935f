//! Command-line front end: spec files in, CSV tables and verdict blocks out.
//!
//! Exit codes: 0 success, 1 a check failed, 2 no convergence at `Rmax`,
//! 64 usage, spec or computation errors.

mod spec;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use spec::{Child, CoverSpec, FactorKind, GraphSpec, SpecError};

use crate::covering::{
    converse_counterexample_report, diag_sheet_check, fiber_sum_residual, lambda0_compare, mass_deficit_compare,
    validate_covering, ConverseOptions, CoverError, CoveringMap, Sheets,
};
use crate::curvature::{bakry_emery_bound, build_exact_kappa, build_feller_counterexample, ollivier_bd, CurvatureError};
use crate::feller::{
    birth_death_nonfeller, certificate_v, comparison_w, series_inner_degree, series_nonfeller, uniform_feller_probe,
    FellerError, NonFellerVerdict, SeriesReport, SeriesVerdict,
};
use crate::graph::{ball, sphere_profile, validate_graph, Graph, GraphError, GraphOracle, Sequence, SphereProfile, VertexId};
use crate::heat::{
    capacity, green, heat_kernel, heat_mass, lambda0, HeatError, MassVerdict, MonotoneEstimate, RadiusSchedule,
    UtVerdict, Verdict,
};
use crate::metric::{davies_table, degree_metric, feller2_check, jump_size, verify_intrinsic, MetricError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Default sample radius for local checks.
const CHECK_RADIUS: usize = 4;
/// Default ball for the metric checks.
const METRIC_RADIUS: usize = 8;
/// Pass threshold for fiber-sum residuals on finitely many sheets.
const FIBER_TOL: f64 = 1e-9;
/// Allowed negativity of the sheet inequality.
const SHEET_TOL: f64 = 1e-10;
/// Allowed residual in the heat kernel upper bound.
const DAVIES_TOL: f64 = 1e-10;
/// Allowed excess in `Σ b ρ² <= m`.
const INTRINSIC_TOL: f64 = 1e-12;
/// Agreement required between base and cover heat mass deficits.
const MASS_TOL: f64 = 1e-3;
/// Accuracy demanded of prescribed curvature.
const KAPPA_TOL: f64 = 1e-12;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Heat(#[from] HeatError),
    #[error(transparent)]
    Feller(#[from] FellerError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Parser, Debug)]
#[command(name = "heatgraph", version, about = "Heat kernels and related probes on weighted graphs")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Graph spec file (.hg).
    #[arg(long, global = true)]
    spec: Option<PathBuf>,
    /// Base point; defaults to the root of the graph.
    #[arg(long, global = true)]
    x: Option<VertexId>,
    /// Second point; defaults to `x`.
    #[arg(long, global = true)]
    y: Option<VertexId>,
    /// Comma-separated times; defaults to 16 points k/15 on [0, 1].
    #[arg(long, global = true, value_delimiter = ',')]
    t: Vec<f64>,
    /// Fixed radius instead of the exhaustion schedule, or the sample radius of local checks.
    #[arg(long = "R", global = true)]
    radius: Option<usize>,
    /// Largest exhaustion radius.
    #[arg(long = "Rmax", global = true, default_value_t = 24)]
    rmax: usize,
    /// Convergence tolerance.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// CSV destination; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Checks symmetry, positivity and local finiteness.
    Validate,
    /// Heat kernel and heat mass over the time grid.
    Heat,
    /// Green's function g(x, y) along the exhaustion.
    Green,
    /// Capacity of x and the Green's function at x.
    Capacity,
    /// Bottom of the spectrum.
    Lambda0,
    /// Feller criteria, certificates and the uniform probe.
    Feller,
    /// Intrinsic metric checks and the heat kernel upper bound.
    Metric {
        /// Constant in the measure decay condition.
        #[arg(long = "C", default_value_t = 1.0)]
        constant: f64,
    },
    /// Curvature calculators and constructions.
    Curvature {
        #[command(subcommand)]
        which: CurvatureCommand,
    },
    /// Covering maps and fiber-sum checks.
    Cover {
        #[command(subcommand)]
        which: CoverCommand,
    },
}

#[derive(Subcommand, Debug)]
enum CurvatureCommand {
    /// Ollivier-Ricci and Bakry-Émery curvature along a birth-death chain.
    Kappa {
        #[arg(long = "N", default_value_t = 30)]
        n: usize,
    },
    /// Bakry-Émery bound at every vertex of B_R(x).
    Be,
    /// Chain with curvature bounded below by k_r that fails the Feller property.
    Counterexample {
        /// Target sequence k_r.
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        #[arg(long = "N", default_value_t = 30)]
        n: usize,
    },
    /// Chain with curvature exactly k_r.
    ExactKappa {
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        #[arg(long = "N", default_value_t = 30)]
        n: usize,
    },
}

#[derive(Subcommand, Debug)]
enum CoverCommand {
    /// Checks the covering axioms on a ball.
    Validate,
    /// Fiber sums of cover kernels against the base kernel.
    FiberSum,
    /// Diagonal sheet inequality.
    SheetCheck,
    /// Bottom of the spectrum on base and cover.
    Lambda0Compare,
    /// Heat mass deficits on base and cover.
    MassCompare,
    /// Non-Feller base with a uniformly transient, Feller-like cover.
    ConverseReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Status {
    Ok,
    Inconclusive,
    Failed,
}

impl Status {
    fn code(self) -> i32 {
        match self {
            Status::Ok => EXIT_OK,
            Status::Inconclusive => EXIT_INCONCLUSIVE,
            Status::Failed => EXIT_FAILED,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Inconclusive => "inconclusive",
            Status::Failed => "failed",
        }
    }

    fn check(pass: bool) -> Self {
        if pass {
            Status::Ok
        } else {
            Status::Failed
        }
    }
}

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// A table, its verdict lines and the overall status.
struct Outcome {
    table: Table,
    lines: Vec<String>,
    status: Status,
}

impl Outcome {
    fn new(table: Table) -> Self {
        Outcome { table, lines: Vec::new(), status: Status::Ok }
    }

    fn verdict(&mut self, status: Status, line: String) {
        self.status = self.status.max(status);
        self.lines.push(line);
    }

    fn note(&mut self, line: String) {
        self.lines.push(line);
    }
}

/// Floats with 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    let ctx = Context::new(&cli.common)?;
    let outcome = match &cli.command {
        Command::Validate => ctx.validate()?,
        Command::Heat => ctx.heat()?,
        Command::Green => ctx.green()?,
        Command::Capacity => ctx.capacity()?,
        Command::Lambda0 => ctx.lambda0()?,
        Command::Feller => ctx.feller()?,
        Command::Metric { constant } => ctx.metric(*constant)?,
        Command::Curvature { which } => match which {
            CurvatureCommand::Kappa { n } => ctx.kappa(*n)?,
            CurvatureCommand::Be => ctx.bakry_emery()?,
            CurvatureCommand::Counterexample { k, n } => ctx.counterexample(k, *n)?,
            CurvatureCommand::ExactKappa { k, n } => ctx.exact_kappa(k, *n)?,
        },
        Command::Cover { which } => match which {
            CoverCommand::Validate => ctx.cover_validate()?,
            CoverCommand::FiberSum => ctx.fiber_sum()?,
            CoverCommand::SheetCheck => ctx.sheet_check()?,
            CoverCommand::Lambda0Compare => ctx.lambda0_compare()?,
            CoverCommand::MassCompare => ctx.mass_compare()?,
            CoverCommand::ConverseReport => ctx.converse()?,
        },
    };
    emit(&cli.common, &outcome)?;
    Ok(outcome.status.code())
}

fn emit(common: &Common, outcome: &Outcome) -> Result<(), CliError> {
    let io_err = |path: &PathBuf| {
        let path = path.display().to_string();
        move |source| CliError::Io { path, source }
    };
    let sink: Box<dyn Write> = match &common.out {
        Some(path) => Box::new(File::create(path).map_err(io_err(path))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut csv = csv::Writer::from_writer(sink);
    csv.write_record(&outcome.table.header)?;
    for row in &outcome.table.rows {
        csv.write_record(row)?;
    }
    csv.flush().map_err(|source| CliError::Io { path: "csv output".into(), source })?;
    drop(csv);

    let mut block = format!("verdict: {}\n", outcome.status.label());
    for line in &outcome.lines {
        block.push_str(line);
        block.push('\n');
    }
    let written = if common.out.is_some() {
        io::stdout().lock().write_all(block.as_bytes())
    } else {
        io::stderr().lock().write_all(block.as_bytes())
    };
    written.map_err(|source| CliError::Io { path: "verdict output".into(), source })
}

fn estimate_status(e: &MonotoneEstimate, single_radius: bool) -> Status {
    if e.exact || single_radius || e.verdict != Verdict::Inconclusive {
        Status::Ok
    } else {
        Status::Inconclusive
    }
}

fn estimate_evidence(e: &MonotoneEstimate) -> String {
    format!(
        "value {} at R={}, last increment {}, limit {}{}",
        num(e.last().unwrap_or(f64::NAN)),
        e.radii.last().copied().unwrap_or(0),
        num(e.last_increment().unwrap_or(f64::NAN)),
        num(e.best().unwrap_or(f64::NAN)),
        if e.exact { ", exact" } else { "" }
    )
}

fn series_status(v: SeriesVerdict) -> Status {
    match v {
        SeriesVerdict::Inconclusive => Status::Inconclusive,
        _ => Status::Ok,
    }
}

fn series_evidence(s: &SeriesReport) -> String {
    format!(
        "partial sum {} at r={}, tail power {}, rate {}",
        num(s.partial_sums.last().copied().unwrap_or(f64::NAN)),
        s.radii.last().copied().unwrap_or(0),
        num(s.fit.power),
        num(s.fit.rate)
    )
}

fn parse_sequence(text: &str) -> Result<Sequence, CliError> {
    Sequence::parse(text).map_err(|e| CliError::Usage(format!("--k: {e}")))
}

struct Context<'a> {
    common: &'a Common,
    spec: Option<GraphSpec>,
}

impl<'a> Context<'a> {
    fn new(common: &'a Common) -> Result<Self, CliError> {
        if !(common.tol > 0.0) {
            return Err(CliError::Usage(format!("--tol must be positive, got {}", common.tol)));
        }
        if let Some(t) = common.t.iter().find(|t| !(**t >= 0.0 && t.is_finite())) {
            return Err(CliError::Usage(format!("--t values must be finite and nonnegative, got {t}")));
        }
        let spec = common.spec.as_deref().map(GraphSpec::load).transpose()?;
        Ok(Context { common, spec })
    }

    fn spec(&self) -> Result<&GraphSpec, CliError> {
        self.spec.as_ref().ok_or_else(|| CliError::Usage("--spec is required for this command".into()))
    }

    fn graph(&self) -> Result<GraphOracle, CliError> {
        Ok(self.spec()?.build()?)
    }

    fn covering(&self) -> Result<CoveringMap, CliError> {
        Ok(self.spec()?.covering()?)
    }

    fn times(&self) -> Vec<f64> {
        if self.common.t.is_empty() {
            (0..16).map(|k| k as f64 / 15.0).collect()
        } else {
            self.common.t.clone()
        }
    }

    fn positive_times(&self) -> Vec<f64> {
        self.times().into_iter().filter(|&t| t > 0.0).collect()
    }

    fn schedule(&self) -> RadiusSchedule {
        match self.common.radius {
            Some(r) => RadiusSchedule::explicit(vec![r]),
            None => RadiusSchedule::up_to(self.common.rmax),
        }
    }

    fn single_radius(&self) -> bool {
        self.common.radius.is_some()
    }

    fn sample_radius(&self, default: usize) -> usize {
        self.common.radius.unwrap_or(default)
    }

    fn x(&self, g: &dyn Graph) -> VertexId {
        self.common.x.clone().unwrap_or_else(|| g.root())
    }

    fn y(&self, x: &VertexId) -> VertexId {
        self.common.y.clone().unwrap_or_else(|| x.clone())
    }

    fn validate(&self) -> Result<Outcome, CliError> {
        let g = self.graph()?;
        let report = validate_graph(g.as_ref(), self.sample_radius(CHECK_RADIUS));
        let mut out = Outcome::new(Table::new(&["violation"]));
        for v in &report.violations {
            out.table.push(vec![v.to_string()]);
            out.note(format!("violation: {v}"));
        }
        out.verdict(
            Status::check(report.is_valid()),
            format!(
                "graph: {} ({} vertices checked, {} violations)",
                if report.is_valid() { "valid" } else { "invalid" },
                report.checked,
                report.violations.len()
            ),
        );
        Ok(out)
    }

    fn heat(&self) -> Result<Outcome, CliError> {
        let g = self.graph()?;
        let x = self.x(g.as_ref());
        let y = self.y(&x);
        let schedule = self.schedule();
        let mut out = Outcome::new(Table::new(&["quantity", "t", "R", "value"]));
        for t in self.times() {
            let k = heat_kernel(g.as_ref(), &x, &y, t, self.common.tol, &schedule)?;
            let e = &k.estimate;
            for (r, v) in e.radii.iter().zip(&e.values) {
                out.table.push(vec!["kernel".into(), num(t), r.to_string(), num(*v)]);
            }
            let status = estimate_status(e, self.single_radius());
            out.verdict(status, format!("kernel p_t({x},{y}) t={}: {} ({})", num(t), e.verdict, estimate_evidence(e)));
        }
        for t in self.times() {
            let m = heat_mass(g.as_ref(), &x, t, self.common.tol, &schedule)?;
            let e = &m.estimate;
            for (r, v) in e.radii.iter().zip(&e.values) {
                out.table.push(vec!["mass".into(), num(t), r.to_string(), num(*v)]);
            }
            let status = match m.verdict {
                MassVerdict::Inconclusive if !self.single_radius() && t > 0.0 => Status::Inconclusive,
                _ => Status::Ok,
            };
            out.verdict(
                status,
                format!("mass at {x} t={}: {} (deficit {}, {})", num(t), m.verdict, num(m.deficit()), estimate_evidence(e)),
            );
        }
        Ok(out)
    }

    fn green(&self) -> Result<Outcome, CliError> {
        let g = self.graph()?;
        let x = self.x(g.as_ref());
        let y = self.y(&x);
        let e = green(g.as_ref(), &x, &y, self.common.tol, &self.schedule())?;
        let mut out = Outcome::new(Table::new(&["R", "green"]));
        for (r, v) in e.radii.iter().zip(&e.values) {
            out.table.push(vec![r.to_string(), num(*v)]);
        }
        out.verdict(estimate_status(&e, self.single_radius()), format!("green g({x},{y}): {} ({})", e.verdict, estimate_evidence(&e)));
        Ok(out)
    }

    fn capacity(&self) -> Result<Outcome, CliError> {
        let g = self.graph()?;
        let x = self.x(g.as_ref());
        let rep = capacity(g.as_ref(), &x, self.common.tol, &self.schedule())?;
        let mut out = Outcome::new(Table::new(&["R", "capacity", "green"]));
        for (i, r) in rep.capacity.radii.iter().enumerate() {
            let gv = rep.green.values.get(i).copied().unwrap_or(f64::NAN);
            out.table.push(vec![r.to_string(), num(rep.capacity.values[i]), num(gv)]);
        }
        let status = match rep.verdict {
            UtVerdict::Inconclusive if !self.single_radius() => Status::Inconclusive,
            _ => Status::Ok,
        };
        out.verdict(
            status,
            format!(
                "capacity of {x}: {} (capacity {}, cap*g {})",
                rep.verdict,
                estimate_evidence(&rep.capacity),
                num(rep.reciprocity())
            ),
        );
        Ok(out)
    }

    fn lambda0(&self) -> Result<Outcome, CliError> {
        let g = self.graph()?;
        let x = self.x(g.as_ref());
        let e = lambda0(g.as_ref(), &x, self.common.tol, &self.schedule())?;
        let mut out = Outcome::new(Table::new(&["R", "lambda0"]));
        for (r, v) in e.radii.iter().zip(&e.values) {
            out.table.push(vec![r.to_string(), num(*v)]);
        }
        out.verdict(estimate_status(&e, self.single_radius()), format!("lambda0: {} ({})", e.verdict, estimate_evidence(&e)));
        Ok(out)
    }

    fn profiles(&self, g: &dyn Graph, x: &VertexId) -> Result<Vec<SphereProfile>, CliError> {
        let mut profiles = Vec::new();
        for r in 1..=self.common.rmax {
            match sphere_profile(g, x, r) {
                Ok(p) => profiles.push(p),
                Err(GraphError::EmptySphere { .. }) => break,
                Err(e) => return Err(e.into()),
            }
        }
        Ok(profiles)
    }

    fn feller(&self) -> Result<Outcome, CliError> {
        let g = self.graph()?;
        let x = self.x(g.as_ref());
        let rmax = self.common.rmax;
        let mut out = Outcome::new(Table::new(&["table", "r", "value", "aux"]));
        if g.finite_vertices().is_some() {
            out.verdict(Status::Ok, "finite graph: Feller (every function vanishes at infinity)".into());
            return Ok(out);
        }

        let inner = series_inner_degree(g.as_ref(), &x, rmax)?;
        let nonfeller = series_nonfeller(g.as_ref(), &x, rmax)?;
        for (name, s) in [("inner_degree_series", &inner), ("nonfeller_series", &nonfeller)] {
            for (i, r) in s.radii.iter().enumerate() {
                out.table.push(vec![name.into(), r.to_string(), num(s.terms[i]), num(s.partial_sums[i])]);
            }
        }
        let both_open = inner.verdict == SeriesVerdict::Inconclusive && nonfeller.verdict == SeriesVerdict::Inconclusive;
        let open = if both_open { Status::Inconclusive } else { Status::Ok };
        out.verdict(
            open,
            format!("sum 1/D_-(r) {}: Feller-suspected when divergent ({})", inner.verdict, series_evidence(&inner)),
        );
        out.verdict(
            open,
            format!(
                "sum (D - d_- + 1)/d_- {}: non-Feller-suspected when convergent ({})",
                nonfeller.verdict,
                series_evidence(&nonfeller)
            ),
        );

        if let Some(GraphSpec::BirthDeath { b, m }) = &self.spec {
            let seq = |s: &str| Sequence::parse(s).map_err(|e| SpecError::Invalid(e.to_string()));
            let rep = birth_death_nonfeller(&seq(b)?, &seq(m)?, rmax)?;
            for (name, s) in [("conductance_series", &rep.conductance), ("tail_mass_series", &rep.tail_mass)] {
                for (i, r) in s.radii.iter().enumerate() {
                    out.table.push(vec![name.into(), r.to_string(), num(s.terms[i]), num(s.partial_sums[i])]);
                }
            }
            let status = if rep.verdict == NonFellerVerdict::Inconclusive { Status::Inconclusive } else { Status::Ok };
            out.verdict(
                status,
                format!(
                    "birth-death chain: {} (sum 1/b {}, tail mass series {})",
                    rep.verdict,
                    rep.conductance.verdict,
                    rep.tail_mass.verdict
                ),
            );
        }

        let profiles = self.profiles(g.as_ref(), &x)?;
        let n = profiles.len();
        if n > 0 {
            let cert = certificate_v(|r| profiles[r - 1].inner_max, -1.0, n)?;
            for (r, v) in cert.values.iter().enumerate() {
                out.table.push(vec!["certificate_v".into(), r.to_string(), num(*v), num(cert.recursion_residual)]);
            }
            out.note(format!(
                "certificate v (lambda=-1): {} (v({n}) = {})",
                if cert.vanishing { "vanishing" } else { "not vanishing" },
                num(cert.values[n])
            ));
            let w = comparison_w(|r| profiles[r - 1].degree_max, |r| profiles[r - 1].inner_min, -1.0, 1.0, n)?;
            for (r, v) in w.values.iter().enumerate() {
                out.table.push(vec!["comparison_w".into(), r.to_string(), num(*v), String::new()]);
            }
            out.note(format!(
                "comparison w (lambda=-1): {} (w({n}) = {}, inf estimate {})",
                if w.bounded_below { "bounded below" } else { "not bounded below" },
                num(w.values[n]),
                num(w.epsilon.unwrap_or(0.0))
            ));
        }

        let times = self.positive_times();
        if let Some(horizon) = times.iter().copied().reduce(f64::max) {
            let probe = uniform_feller_probe(g.as_ref(), &x, horizon, times.len().max(2), rmax)?;
            for row in &probe.rows {
                out.table.push(vec!["uniform_probe".into(), row.distance.to_string(), num(row.max_kernel), num(row.argmax_time)]);
            }
            out.note(format!(
                "uniform probe on [0, {}]: {} (max comparison residual {})",
                num(horizon),
                if probe.is_decreasing() { "decreasing along the ray" } else { "not decreasing" },
                num(probe.max_residual())
            ));
        }
        Ok(out)
    }

    fn metric(&self, constant: f64) -> Result<Outcome, CliError> {
        let g = self.graph()?;
        let x = self.x(g.as_ref());
        let radius = self.sample_radius(METRIC_RADIUS);
        let metric = degree_metric();
        let mut out = Outcome::new(Table::new(&["table", "key", "value", "aux"]));

        let excess = verify_intrinsic(g.as_ref(), &metric, &x, radius)?;
        out.table.push(vec!["intrinsic".into(), radius.to_string(), num(excess), String::new()]);
        out.verdict(
            Status::check(excess <= INTRINSIC_TOL),
            format!("degree metric intrinsic on B_{radius}: {} (max sum b rho^2 - m = {})", excess <= INTRINSIC_TOL, num(excess)),
        );
        let jump = jump_size(g.as_ref(), &metric, &x, radius)?;
        out.table.push(vec!["jump".into(), radius.to_string(), num(jump), String::new()]);

        let times = self.positive_times();
        let domain = self.common.rmax.max(radius);
        for row in davies_table(g.as_ref(), &metric, jump, &x, radius, &times, domain)? {
            out.table.push(vec!["davies".into(), num(row.t), num(row.max_residual), row.pairs.to_string()]);
            out.verdict(
                Status::check(row.max_residual <= DAVIES_TOL),
                format!(
                    "upper bound t={}: {} (max residual {} over {} pairs, worst ({}; {}), jump {})",
                    num(row.t),
                    row.max_residual <= DAVIES_TOL,
                    num(row.max_residual),
                    row.pairs,
                    row.worst_pair.0,
                    row.worst_pair.1,
                    num(jump)
                ),
            );
        }

        if g.finite_vertices().is_none() {
            let decay = feller2_check(g.as_ref(), &metric, jump, &x, constant, radius)?;
            for row in &decay.rows {
                out.table.push(vec!["measure_decay".into(), row.vertex.to_string(), num(row.lhs), num(row.rhs)]);
            }
            out.note(format!(
                "measure decay with C={}: {} ({} vertices, {} failures)",
                num(constant),
                if decay.passes() { "holds" } else { "fails" },
                decay.rows.len(),
                decay.failures().count()
            ));
        }
        Ok(out)
    }

    fn kappa(&self, n: usize) -> Result<Outcome, CliError> {
        let chain = self
            .spec()?
            .birth_death()
            .ok_or_else(|| CliError::Usage("curvature kappa needs a birth_death spec".into()))??;
        let mut out = Outcome::new(Table::new(&["r", "kappa", "be_literal", "be_normalized"]));
        for r in 1..=n {
            let kappa = ollivier_bd(&chain, r)?;
            let be = bakry_emery_bound(&chain, &VertexId::scalar(r as i64))?;
            out.table.push(vec![r.to_string(), num(kappa), num(be.literal), num(be.normalized)]);
        }
        out.note(format!("curvature tabulated for r = 1..={n}"));
        Ok(out)
    }

    fn bakry_emery(&self) -> Result<Outcome, CliError> {
        let g = self.graph()?;
        let x = self.x(g.as_ref());
        let region = ball(g.as_ref(), &x, self.sample_radius(CHECK_RADIUS))?;
        let mut out = Outcome::new(Table::new(&["vertex", "be_literal", "be_normalized"]));
        let mut lowest = f64::INFINITY;
        for v in region.vertices() {
            let be = bakry_emery_bound(g.as_ref(), v)?;
            lowest = lowest.min(be.normalized);
            out.table.push(vec![v.to_string(), num(be.literal), num(be.normalized)]);
        }
        out.note(format!("lowest normalized bound {} over {} vertices", num(lowest), out.table.rows.len()));
        Ok(out)
    }

    fn counterexample(&self, k: &str, n: usize) -> Result<Outcome, CliError> {
        let ex = build_feller_counterexample(&parse_sequence(k)?, n)?;
        let mut out = Outcome::new(Table::new(&["r", "kappa", "target", "be_normalized", "w_minus", "w_plus", "ok"]));
        for row in &ex.rows {
            out.table.push(vec![
                row.r.to_string(),
                num(row.kappa),
                num(row.target),
                num(row.bakry_emery.normalized),
                num(row.w.minus),
                num(row.w.plus),
                row.w.ok.to_string(),
            ]);
        }
        out.verdict(Status::check(ex.all_pass()), format!("curvature bounds k_r = {k} for r <= {n}: {}", ex.all_pass()));
        out.verdict(
            series_status(ex.nonfeller.verdict),
            format!("non-Feller series: {} ({})", ex.nonfeller.verdict, series_evidence(&ex.nonfeller)),
        );
        Ok(out)
    }

    fn exact_kappa(&self, k: &str, n: usize) -> Result<Outcome, CliError> {
        let ex = build_exact_kappa(&parse_sequence(k)?, n)?;
        let mut out = Outcome::new(Table::new(&["r", "c", "kappa", "target", "b"]));
        for row in &ex.rows {
            let b = ex.chain.edge_weight(row.r as i64)?;
            out.table.push(vec![row.r.to_string(), num(row.c), num(row.kappa), num(row.target), num(b)]);
        }
        let err = ex.max_error();
        out.verdict(Status::check(err <= KAPPA_TOL), format!("kappa = k_r for r <= {n}: {} (max error {})", err <= KAPPA_TOL, num(err)));
        let (lo, hi) = ex.weight_range;
        let bounded = lo >= 1.0 && hi <= 3.0 && ex.step_ratio <= 1.0 + KAPPA_TOL;
        out.verdict(
            Status::check(bounded),
            format!("weights in [1, 3] with steps <= 2^-r: {bounded} (range [{}, {}], max 2^r step {})", num(lo), num(hi), num(ex.step_ratio)),
        );
        out.note(format!("non-Feller test: {}", ex.nonfeller.verdict));
        Ok(out)
    }

    fn cover_validate(&self) -> Result<Outcome, CliError> {
        let c = self.covering()?;
        let report = validate_covering(&c, self.sample_radius(CHECK_RADIUS));
        let mut out = Outcome::new(Table::new(&["violation"]));
        for v in &report.violations {
            out.table.push(vec![v.to_string()]);
            out.note(format!("violation: {v}"));
        }
        out.verdict(
            Status::check(report.is_valid()),
            format!(
                "covering {}: {} ({} sheets, {} vertices checked, {} violations)",
                c.name(),
                if report.is_valid() { "valid" } else { "invalid" },
                c.sheets(),
                report.checked,
                report.violations.len()
            ),
        );
        Ok(out)
    }

    fn fiber_sum(&self) -> Result<Outcome, CliError> {
        let c = self.covering()?;
        let x = self.x(c.base.as_ref());
        let y = self.y(&x);
        let schedule = self.schedule();
        let threshold = match c.sheets() {
            Sheets::Finite(_) => FIBER_TOL,
            Sheets::Infinite => FIBER_TOL.max(10.0 * self.common.tol),
        };
        let mut out = Outcome::new(Table::new(&["t", "R", "fiber_sum", "base", "residual"]));
        for t in self.times() {
            let f = fiber_sum_residual(&c, &x, &y, t, self.common.tol, &schedule)?;
            let base = f.base.estimate.best().unwrap_or(f64::NAN);
            for (i, r) in f.sums.radii.iter().enumerate() {
                out.table.push(vec![num(t), r.to_string(), num(f.sums.values[i]), num(base), num(f.residuals[i])]);
            }
            let res = f.last_residual();
            let status = match estimate_status(&f.sums, self.single_radius()) {
                Status::Ok => Status::check(res.abs() <= threshold),
                other => other,
            };
            out.verdict(
                status,
                format!(
                    "fiber sum t={} over {x},{y}: {} (residual {}, threshold {}, sums {})",
                    num(t),
                    status.label(),
                    num(res),
                    num(threshold),
                    f.sums.verdict
                ),
            );
        }
        Ok(out)
    }

    fn sheet_check(&self) -> Result<Outcome, CliError> {
        let c = self.covering()?;
        let x = self.x(c.base.as_ref());
        let schedule = self.schedule();
        let mut out = Outcome::new(Table::new(&["t", "sheets", "cover_diag", "base_diag", "residual"]));
        for t in self.times() {
            let s = diag_sheet_check(&c, &x, t, self.common.tol, &schedule)?;
            out.table.push(vec![num(t), s.sheets.to_string(), num(s.cover_diagonal), num(s.base_diagonal), num(s.residual)]);
            out.verdict(
                Status::check(s.residual >= -SHEET_TOL),
                format!("sheet inequality t={}: {} (n p~ - p = {})", num(t), s.residual >= -SHEET_TOL, num(s.residual)),
            );
        }
        Ok(out)
    }

    fn lambda0_compare(&self) -> Result<Outcome, CliError> {
        let c = self.covering()?;
        let cmp = lambda0_compare(&c, self.common.tol, &self.schedule())?;
        let mut out = Outcome::new(Table::new(&["side", "R", "lambda0"]));
        for (side, e) in [("base", &cmp.base), ("cover", &cmp.cover)] {
            for (r, v) in e.radii.iter().zip(&e.values) {
                out.table.push(vec![side.into(), r.to_string(), num(*v)]);
            }
        }
        out.verdict(
            Status::check(cmp.holds),
            format!(
                "cover lambda0 >= base lambda0: {} (gap {}, base {}, cover {})",
                cmp.holds,
                num(cmp.gap),
                num(cmp.base.best().unwrap_or(f64::NAN)),
                num(cmp.cover.best().unwrap_or(f64::NAN))
            ),
        );
        Ok(out)
    }

    fn mass_compare(&self) -> Result<Outcome, CliError> {
        let c = self.covering()?;
        let x = self.x(c.base.as_ref());
        let x_lift = c.lift(&x)?;
        let mut out = Outcome::new(Table::new(&["side", "t", "R", "mass"]));
        for t in self.positive_times() {
            let cmp = mass_deficit_compare(&c, &x_lift, t, self.common.tol, &self.schedule())?;
            for (side, rep) in [("base", &cmp.base), ("cover", &cmp.cover)] {
                for (r, v) in rep.estimate.radii.iter().zip(&rep.estimate.values) {
                    out.table.push(vec![side.into(), num(t), r.to_string(), num(*v)]);
                }
            }
            let open = !self.single_radius()
                && (cmp.base.verdict == MassVerdict::Inconclusive || cmp.cover.verdict == MassVerdict::Inconclusive);
            let status = if open { Status::Inconclusive } else { Status::check(cmp.difference < MASS_TOL) };
            out.verdict(
                status,
                format!(
                    "mass deficits t={}: {} (base {} {}, cover {} {}, difference {})",
                    num(t),
                    status.label(),
                    cmp.base.verdict,
                    num(cmp.base.deficit()),
                    cmp.cover.verdict,
                    num(cmp.cover.deficit()),
                    num(cmp.difference)
                ),
            );
        }
        Ok(out)
    }

    fn converse(&self) -> Result<Outcome, CliError> {
        let opts = ConverseOptions { tol: self.common.tol.max(ConverseOptions::default().tol), ..ConverseOptions::default() };
        let rep = converse_counterexample_report(&opts)?;
        let mut out = Outcome::new(Table::new(&["quantity", "r", "value"]));
        for (r, v) in rep.certificate.iter().enumerate() {
            out.table.push(vec!["certificate".into(), r.to_string(), num(*v)]);
        }
        for (name, probe) in [("base_probe", &rep.base_probe), ("cover_probe", &rep.cover_probe)] {
            for row in &probe.rows {
                out.table.push(vec![name.into(), row.distance.to_string(), num(row.max_kernel)]);
            }
        }
        let cap = rep.cover_capacity.capacity.best().unwrap_or(f64::NAN);
        out.verdict(
            Status::check(rep.base_nonfeller()),
            format!(
                "base non-Feller: {} (chain {}, tail sum {}, certificate floor {}, residual {}, retention {})",
                rep.base_nonfeller(),
                rep.chain.verdict,
                num(rep.tail_sum),
                num(rep.certificate_floor),
                num(rep.certificate_residual),
                num(rep.base_retention)
            ),
        );
        out.verdict(
            Status::check(rep.cover_transient()),
            format!("cover uniformly transient: {} (capacity {}, {})", rep.cover_transient(), num(cap), rep.cover_capacity.verdict),
        );
        out.verdict(
            Status::check(rep.cover_decays()),
            format!(
                "cover kernel decays along a ray: {} (lifted certificate residual {})",
                rep.cover_decays(),
                num(rep.lift_residual)
            ),
        );
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format_keeps_seventeen_digits() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(0.1).parse::<f64>().unwrap(), 0.1);
        assert_eq!(num(f64::INFINITY), "inf");
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run(["heatgraph", "no-such-command"]), EXIT_USAGE);
        assert_eq!(run(["heatgraph", "heat"]), EXIT_USAGE);
        assert_eq!(run(["heatgraph", "--help"]), EXIT_OK);
        assert_eq!(run(["heatgraph", "heat", "--spec", "/nonexistent/x.hg"]), EXIT_USAGE);
    }

    #[test]
    fn status_ordering() {
        assert_eq!(Status::Ok.max(Status::Inconclusive), Status::Inconclusive);
        assert_eq!(Status::Failed.max(Status::Inconclusive).code(), EXIT_FAILED);
    }
}
