//! `heatcorner` command line: coefficient tables, verification suites and reports.
//!
//! Exit codes: 0 every check passed, 1 some check failed, 2 configuration
//! error, 3 numerical infeasibility.

pub mod config;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansions::{
    b_coeffs, c2_general_conjecture, cone_coeffs, cone_rationals, corner_coeffs, parse_angle, AngleData, AngleRepr,
    CoefficientKind, CoefficientSource, CurvatureJet,
};
use crate::verify::{run_suite, Suite};
pub use config::{Format, RunConfig, SurfaceKind};
pub use report::{Report, SuiteReport};

#[derive(Parser, Debug)]
#[command(name = "heatcorner", version, about = "Heat-trace corner, cone-point and rotation coefficients")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form coefficient triples for the given orders and angles.
    Coeffs(CoeffsArgs),
    /// Run one verification suite and print every check.
    Verify(VerifyArgs),
    /// Run suites and write CSV and JSON reports.
    Report(ReportArgs),
}

#[derive(Args, Debug, Default)]
struct Common {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    profile: Option<SurfaceKind>,
    /// Constant curvature of the sphere or hyperbolic profile.
    #[arg(long = "K", allow_hyphen_values = true)]
    curvature: Option<f64>,
    /// Odd coefficients a3,a5,… of a poly_odd profile.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    coeffs: Option<Vec<f64>>,
    /// Perturbation of the bump profile.
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<f64>,
    #[arg(long)]
    valid_radius: Option<f64>,
    /// Disk radius for spectral suites [default: 1].
    #[arg(long)]
    radius: Option<f64>,
    /// Cone or corner orders.
    #[arg(long, value_delimiter = ',')]
    k: Vec<u32>,
    /// Smallest order in the consistency and trig suites [default: 2].
    #[arg(long)]
    kmin: Option<u32>,
    /// Largest order in the consistency and trig suites [default: 20].
    #[arg(long)]
    kmax: Option<u32>,
    /// Rotation angles such as pi, 2pi/3 or decimal radians.
    #[arg(long, value_parser = parse_angle_arg, allow_hyphen_values = true)]
    phi: Vec<AngleRepr>,
    /// Sector or corner angle [default: pi/3].
    #[arg(long, value_parser = parse_angle_arg)]
    gamma: Option<AngleRepr>,
    #[arg(long)]
    t_min: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    /// Grid points per decade [default: 20].
    #[arg(long)]
    grid: Option<usize>,
    /// Random jets in the consistency suite [default: 100].
    #[arg(long)]
    jets: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Tolerance override NAME=VALUE; see the README for names and defaults.
    #[arg(long = "tol", value_parser = parse_tol)]
    tol: Vec<(String, f64)>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CoeffsArgs {
    #[command(flatten)]
    common: Common,
    /// Curvature at the fixed point (decimal or p/q).
    #[arg(long = "K0", allow_hyphen_values = true)]
    k0: Option<String>,
    /// Laplacian of the curvature at the fixed point (decimal or p/q).
    #[arg(long = "lapK", allow_hyphen_values = true)]
    lap_k: Option<String>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    suite: Suite,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct ReportArgs {
    suites: Vec<Suite>,
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
}

fn parse_angle_arg(s: &str) -> std::result::Result<AngleRepr, String> {
    parse_angle(s).map_err(|e| e.to_string())
}

fn parse_tol(s: &str) -> std::result::Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got '{s}'"))?;
    let v: f64 = v.parse().map_err(|_| format!("bad tolerance value in '{s}'"))?;
    Ok((k.trim().to_string(), v))
}

impl Common {
    /// Loads the config file, if any, and lays the flags over it.
    fn resolve(&self) -> Result<RunConfig> {
        let mut c = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        let s = &mut c.surface;
        set(&mut s.kind, self.profile);
        set(&mut s.k, self.curvature);
        set(&mut s.coeffs, self.coeffs.clone());
        set(&mut s.delta, self.delta);
        set(&mut s.valid_radius, self.valid_radius);
        let t = &mut c.task;
        set(&mut t.radius, self.radius);
        if !self.k.is_empty() {
            t.k = self.k.clone();
        }
        set(&mut t.kmin, self.kmin);
        set(&mut t.kmax, self.kmax);
        if !self.phi.is_empty() {
            t.phi = self.phi.clone();
        }
        set(&mut t.gamma, self.gamma);
        set(&mut t.t_min, self.t_min);
        set(&mut t.t_max, self.t_max);
        set(&mut t.grid, self.grid);
        set(&mut t.jets, self.jets);
        t.tol_overrides.extend(self.tol.iter().cloned());
        set(&mut c.output.format, self.format);
        set(&mut c.output.path, self.out.clone());
        set(&mut c.seed, self.seed);
        Ok(c)
    }
}

fn set<T>(slot: &mut T, flag: Option<impl Into<T>>) {
    if let Some(v) = flag {
        *slot = v.into();
    }
}

/// Exit code for an error.
#[must_use]
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Input(_) | Error::Symmetry(_) | Error::Profile(_) => 2,
        Error::Domain { .. } | Error::Convexity(_) | Error::Solver(_) | Error::Truncation { .. } | Error::Fit(_) => 3,
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I: IntoIterator<Item = OsString>>(args: I) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Coeffs(a) => cmd_coeffs(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Report(a) => cmd_report(&a),
    };
    match outcome {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

type Q = Ratio<i128>;

/// Exact value of a decimal (`-0.25`, `3`) or fraction (`2/3`).
fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let (n, d): (i128, i128) = (n.trim().parse().ok()?, d.trim().parse().ok()?);
        return (d != 0).then(|| Q::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty()
        || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
        || frac.len() > 30
    {
        return None;
    }
    let digits: i128 = format!("{int}{frac}").parse().ok()?;
    let v = Q::new(digits, 10i128.checked_pow(frac.len() as u32)?);
    Some(if neg { -v } else { v })
}

fn parse_number(name: &str, s: &str) -> Result<f64> {
    if let Some(q) = parse_rational(s) {
        return q.to_f64().ok_or_else(|| Error::Config(format!("{name} = {s} is out of range")));
    }
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Config(format!("{name} = '{s}' is not a number")))
}

fn show(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// One coefficient triple with its exact form when one exists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffRow {
    pub kind: CoefficientKind,
    pub source: CoefficientSource,
    pub label: String,
    pub values: [f64; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<[String; 3]>,
}

/// `C² = 2 − 2cos φ` when it is rational, which for `φ = pπ/q` in `(0, π]` means `q ≤ 3`.
fn exact_c2(a: &AngleData) -> Option<Q> {
    match a.repr() {
        AngleRepr::PiFraction { num, den } => match (num, den) {
            (1, 1) => Some(Q::from_integer(4)),
            (1, 2) => Some(Q::from_integer(2)),
            (1, 3) => Some(Q::from_integer(1)),
            (2, 3) => Some(Q::from_integer(3)),
            _ => None,
        },
        AngleRepr::Radians(_) => None,
    }
}

/// Rows for `cone a`, `corner c` at each `k`, `b` at each `phi`, and the corner at `gamma`.
pub fn coeff_rows(
    k0: &str,
    lap: &str,
    ks: &[u32],
    phis: &[AngleRepr],
    gamma: Option<AngleRepr>,
) -> Result<Vec<CoeffRow>> {
    let kf = parse_number("K0", k0)?;
    let lf = parse_number("lapK", lap)?;
    let jet = CurvatureJet::symmetric(kf, lf);
    let exact_in = parse_rational(k0).zip(parse_rational(lap));
    let mut rows = Vec::new();
    let cone_exact = |k: u32, half: bool| -> Result<Option<[String; 3]>> {
        let r = cone_rationals(k)?;
        Ok(exact_in.map(|(kk, l)| {
            let h = if half { Q::new(1, 2) } else { Q::from_integer(1) };
            [show(&(r.a0 * h)), show(&(r.a1_k * kk * h)), show(&((r.a2_kk * kk * kk - r.a2_lap * l) * h))]
        }))
    };
    for &k in ks {
        rows.push(CoeffRow {
            kind: CoefficientKind::ConeA,
            source: CoefficientSource::ClosedForm,
            label: format!("k={k}"),
            values: cone_coeffs(&jet, k)?.as_array(),
            exact: cone_exact(k, false)?,
        });
        rows.push(CoeffRow {
            kind: CoefficientKind::CornerC,
            source: CoefficientSource::ClosedForm,
            label: format!("k={k}"),
            values: corner_coeffs(&jet, k)?.as_array(),
            exact: cone_exact(k, true)?,
        });
    }
    for &phi in phis {
        let a = AngleData::canonical(phi)?;
        let exact = exact_c2(&a).zip(exact_in).map(|(c2, (kk, l))| {
            let (c4, c6) = (c2 * c2, c2 * c2 * c2);
            let two = Q::from_integer(2);
            let b2 = (Q::from_integer(12) / c6 - two / c4) * kk * kk - two * l / c6;
            [show(&(Q::from_integer(1) / c2)), show(&(two * kk / c4)), show(&b2)]
        });
        rows.push(CoeffRow {
            kind: CoefficientKind::RotationB,
            source: CoefficientSource::ClosedForm,
            label: format!("phi={}", a.repr()),
            values: b_coeffs(&jet, &a)?.as_array(),
            exact,
        });
    }
    if let Some(g) = gamma {
        let label = format!("gamma={g}");
        match g {
            AngleRepr::PiFraction { num: 1, den } if (2..=1000).contains(&den) => rows.push(CoeffRow {
                kind: CoefficientKind::CornerC,
                source: CoefficientSource::ClosedForm,
                label,
                values: corner_coeffs(&jet, den as u32)?.as_array(),
                exact: cone_exact(den as u32, true)?,
            }),
            _ => {
                let t = c2_general_conjecture(&jet, g.radians())?;
                rows.push(CoeffRow { kind: t.kind(), source: t.source(), label, values: t.as_array(), exact: None });
            }
        }
    }
    Ok(rows)
}

fn kind_name(k: CoefficientKind) -> &'static str {
    match k {
        CoefficientKind::RotationB => "b",
        CoefficientKind::ConeA => "a",
        CoefficientKind::CornerC => "c",
    }
}

fn source_name(s: CoefficientSource) -> &'static str {
    match s {
        CoefficientSource::ClosedForm => "closed_form",
        CoefficientSource::Fitted => "fitted",
        CoefficientSource::Conjecture => "conjecture",
    }
}

fn render_coeffs(rows: &[CoeffRow], format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["kind", "label", "source", "v0", "v1", "v2", "exact0", "exact1", "exact2"])
                .expect("in-memory write");
            for r in rows {
                let ex = r.exact.clone().unwrap_or_default();
                let v: Vec<String> = r.values.iter().map(|x| format!("{x:e}")).collect();
                w.write_record([
                    kind_name(r.kind),
                    &r.label,
                    source_name(r.source),
                    &v[0],
                    &v[1],
                    &v[2],
                    &ex[0],
                    &ex[1],
                    &ex[2],
                ])
                .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
        }
        Format::Text => {
            let mut s = String::new();
            for r in rows {
                let tag = if r.source == CoefficientSource::Conjecture { " [conjecture]" } else { "" };
                s += &format!(
                    "{} {}: {} = ({}, {}, {}){tag}",
                    match r.kind {
                        CoefficientKind::RotationB => "rotation",
                        CoefficientKind::ConeA => "cone",
                        CoefficientKind::CornerC => "corner",
                    },
                    r.label,
                    kind_name(r.kind),
                    r.values[0],
                    r.values[1],
                    r.values[2]
                );
                if let Some(e) = &r.exact {
                    s += &format!("  exact ({}, {}, {})", e[0], e[1], e[2]);
                }
                s.push('\n');
            }
            s
        }
    }
}

fn emit(text: &str, path: Option<&PathBuf>) -> Result<()> {
    match path {
        Some(p) => report::write_file(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_coeffs(a: &CoeffsArgs) -> Result<bool> {
    let mut cfg = a.common.resolve()?;
    if a.k0.is_some() {
        cfg.task.k0 = a.k0.clone();
    }
    if a.lap_k.is_some() {
        cfg.task.lap_k = a.lap_k.clone();
    }
    let t = &cfg.task;
    if t.k.is_empty() && t.phi.is_empty() && t.gamma.is_none() {
        return Err(Error::Config("give at least one of --k, --phi or --gamma".into()));
    }
    let k0 = t.k0.clone().unwrap_or_else(|| "0".into());
    let lap = t.lap_k.clone().unwrap_or_else(|| "0".into());
    let rows = coeff_rows(&k0, &lap, &t.k, &t.phi, t.gamma)?;
    for w in cfg.inexact_angles() {
        eprintln!("note: {w}");
    }
    emit(&render_coeffs(&rows, cfg.output.format.unwrap_or(Format::Text)), cfg.output.path.as_ref())?;
    Ok(true)
}

fn run_suites(cfg: &RunConfig, suites: &[Suite]) -> Result<(Report, Vec<f64>)> {
    let params = cfg.suite_params()?;
    for &s in suites {
        crate::verify::preflight(s, &params)?;
    }
    let mut out = Vec::new();
    let mut times = Vec::new();
    for &s in suites {
        let start = Instant::now();
        out.push(SuiteReport { suite: s, checks: run_suite(s, &params)? });
        times.push(start.elapsed().as_secs_f64());
    }
    Ok((Report::new(cfg.clone(), out), times))
}

fn cmd_verify(a: &VerifyArgs) -> Result<bool> {
    let mut cfg = a.common.resolve()?;
    cfg.task.suite = Some(a.suite);
    let (report, times) = run_suites(&cfg, &[a.suite])?;
    for w in &report.warnings {
        eprintln!("note: {w}");
    }
    match cfg.output.format.unwrap_or(Format::Text) {
        Format::Text => {
            let mut s = String::new();
            for c in report.checks() {
                s += &format!(
                    "{} {} [{}] measured {:e} target {:e} tolerance {:e} ({})\n",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.parameters,
                    c.measured,
                    c.target,
                    c.tolerance,
                    c.comparison.name()
                );
            }
            let n = report.checks().count();
            let passed = report.checks().filter(|c| c.pass).count();
            s += &format!("{}: {passed}/{n} checks passed in {:.2} s\n", a.suite, times[0]);
            emit(&s, cfg.output.path.as_ref())?;
        }
        Format::Csv => emit(&report.to_csv(), cfg.output.path.as_ref())?,
        Format::Json => emit(&report.to_json(), cfg.output.path.as_ref())?,
    }
    if cfg.output.format.is_some_and(|f| f != Format::Text) {
        eprintln!("{}: wall time {:.2} s", a.suite, times[0]);
    }
    Ok(report.all_pass())
}

fn cmd_report(a: &ReportArgs) -> Result<bool> {
    let mut cfg = a.common.resolve()?;
    if a.csv.is_some() {
        cfg.output.csv = a.csv.clone();
    }
    if a.json.is_some() {
        cfg.output.json = a.json.clone();
    }
    let suites: Vec<Suite> = if a.suites.is_empty() { cfg.task.suite.into_iter().collect() } else { a.suites.clone() };
    let (report, _) = run_suites(&cfg, &suites)?;
    let o = &cfg.output;
    if let Some(p) = &o.csv {
        report::write_file(p, &report.to_csv())?;
    }
    if let Some(p) = &o.json {
        report::write_file(p, &report.to_json())?;
    }
    if o.csv.is_none() && o.json.is_none() {
        let text = match o.format {
            Some(Format::Json) => report.to_json(),
            _ => report.to_csv(),
        };
        emit(&text, o.path.as_ref())?;
    }
    Ok(report.all_pass())
}
