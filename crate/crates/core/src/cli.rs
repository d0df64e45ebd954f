//! Command-line front end: CSV tables of the spectral curves and JSON check reports.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::asympt::{
    crossing_value_residual, fit_rate_exponent, flux_ground_coefficient, model_crossing,
    model_groundstate_strongfield, model_weakfield, spacing_residual, strong_field_constant,
};
use crate::intersect::crossing;
use crate::oracle::{exterior_shoot, ShootConfig};
use crate::specfun::{alpha, alpha_root};
use crate::steklov::{check_flux, curve_table, dtn_diff_norm, exterior_eigenvalue, ground_state, SpectralParams};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(#[from] crate::Error),
    #[error("output error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "magsteklov", about = "Magnetic Steklov eigenvalues of the disk exterior")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Eigenvalue curves: CSV `b,n,lambda`.
    Curves,
    /// Ground state envelope: CSV `b,n_min,lambda,asym,residual`.
    Groundstate,
    /// Crossing points: CSV `n,nu,z,lambda,g_residual,defining_residual`.
    Crossings,
    /// Weak-field law checks (JSON report).
    Weakfield,
    /// Strong-field and large-index law checks (JSON report).
    Strongfield,
    /// Norm of the DtN difference (JSON report).
    Norms,
    /// Closed form against Riccati shooting.
    OracleCheck,
    /// Print the constant α.
    Alpha,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct Opts {
    /// Aharonov–Bohm flux in (−1/2, 1/2].
    #[arg(long, global = true, default_value_t = 0.0, allow_negative_numbers = true)]
    pub nu: f64,
    /// Field grid: MIN MAX COUNT, optionally followed by `linear` or `log`.
    #[arg(long, global = true, num_args = 3..=4, value_names = ["MIN", "MAX", "COUNT", "SPACING"], allow_negative_numbers = true)]
    pub b_grid: Option<Vec<String>>,
    /// Logarithmic spacing for --b-grid.
    #[arg(long, global = true)]
    pub log: bool,
    /// Inclusive mode range LO HI.
    #[arg(long, global = true, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    pub n_range: Option<Vec<i64>>,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl BGrid {
    pub fn new(min: f64, max: f64, count: usize, spacing: Spacing) -> Result<Self, CliError> {
        if count == 0 {
            return Err(CliError::Config("b grid needs count >= 1".into()));
        }
        if !(min.is_finite() && max.is_finite()) || max < min || (count > 1 && max == min) {
            return Err(CliError::Config(format!("b grid needs min < max (got {min}, {max})")));
        }
        if spacing == Spacing::Log && !(min > 0.0) {
            return Err(CliError::Config("log spacing requires min > 0".into()));
        }
        Ok(Self { min, max, count, spacing })
    }

    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let t = i as f64 / last;
                if i + 1 == self.count {
                    return self.max;
                }
                match self.spacing {
                    Spacing::Linear => self.min + (self.max - self.min) * t,
                    Spacing::Log => (self.min.ln() + (self.max.ln() - self.min.ln()) * t).exp(),
                }
            })
            .collect()
    }
}

/// Validated invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub nu: f64,
    pub b_grid: Option<BGrid>,
    pub n_range: Option<(i64, i64)>,
    pub out_path: Option<std::path::PathBuf>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let o = cli.opts;
        check_flux(o.nu).map_err(|e| CliError::Config(e.to_string()))?;
        let b_grid = match o.b_grid {
            None => None,
            Some(v) => {
                let num = |s: &str| s.parse::<f64>().map_err(|_| CliError::Config(format!("bad --b-grid value {s:?}")));
                let count = v[2].parse::<usize>().map_err(|_| CliError::Config(format!("bad --b-grid count {:?}", v[2])))?;
                let spacing = match (v.get(3).map(String::as_str), o.log) {
                    (None, false) | (Some("linear"), false) => Spacing::Linear,
                    (None, true) | (Some("log"), _) => Spacing::Log,
                    (Some("linear"), true) => return Err(CliError::Config("--log conflicts with `linear`".into())),
                    (Some(s), _) => return Err(CliError::Config(format!("unknown spacing {s:?}"))),
                };
                Some(BGrid::new(num(&v[0])?, num(&v[1])?, count, spacing)?)
            }
        };
        if o.log && b_grid.is_none() {
            return Err(CliError::Config("--log needs --b-grid".into()));
        }
        let n_range = match o.n_range {
            None => None,
            Some(v) if v[0] <= v[1] => Some((v[0], v[1])),
            Some(v) => return Err(CliError::Config(format!("empty --n-range {} {}", v[0], v[1]))),
        };
        Ok(Self { command: cli.command, nu: o.nu, b_grid, n_range, out_path: o.out, format: o.format })
    }

    fn grid_or(&self, default: BGrid) -> Vec<f64> {
        self.b_grid.unwrap_or(default).points()
    }
}

/// 12 significant digits; plain decimal for moderate magnitudes, exponent form otherwise.
pub fn fmt_num(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.11e}", x);
    let (mant, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..12).contains(&exp) {
        return sci;
    }
    let (sign, mant) = mant.strip_prefix('-').map_or(("", mant), |m| ("-", m));
    let digits: String = mant.chars().filter(|c| *c != '.').collect();
    let point = exp + 1;
    if point <= 0 {
        format!("{sign}0.{}{}", "0".repeat((-point) as usize), digits)
    } else {
        let p = point as usize;
        if p == digits.len() {
            format!("{sign}{digits}")
        } else {
            format!("{sign}{}.{}", &digits[..p], &digits[p..])
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub check: String,
    pub anchor: String,
    pub value: f64,
    pub bound: String,
    pub pass: bool,
}

fn within(check: &str, anchor: &str, value: f64, lo: f64, hi: f64) -> Check {
    Check {
        check: check.into(),
        anchor: anchor.into(),
        value,
        bound: format!("[{lo}, {hi}]"),
        pass: value >= lo && value <= hi,
    }
}

fn at_most(check: &str, anchor: &str, value: f64, cap: f64) -> Check {
    Check { check: check.into(), anchor: anchor.into(), value, bound: format!("<= {cap}"), pass: value.abs() <= cap }
}

/// What a run produced: rendered output plus whether every check passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub output: String,
    pub passed: bool,
}

fn csv_field(f: &str) -> String {
    if f.contains([',', '"', '\n']) {
        format!("\"{}\"", f.replace('"', "\"\""))
    } else {
        f.to_string()
    }
}

fn csv(header: &str, rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut s = String::from(header);
    s.push('\n');
    for r in rows {
        let fields: Vec<String> = r.iter().map(|f| csv_field(f)).collect();
        s.push_str(&fields.join(","));
        s.push('\n');
    }
    s
}

fn report(checks: Vec<Check>, format: Format) -> Result<Outcome, CliError> {
    let passed = checks.iter().all(|c| c.pass);
    let output = match format {
        Format::Json => serde_json::to_string_pretty(&checks).expect("checks serialise") + "\n",
        Format::Csv => csv(
            "check,anchor,value,bound,pass",
            checks.iter().map(|c| {
                vec![c.check.clone(), c.anchor.clone(), fmt_num(c.value), c.bound.clone(), c.pass.to_string()]
            }),
        ),
    };
    Ok(Outcome { output, passed })
}

fn rows_json<T: Serialize>(rows: &T) -> String {
    serde_json::to_string_pretty(rows).expect("rows serialise") + "\n"
}

fn curves(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let bs = cfg.grid_or(BGrid::new(0.0, 5.0, 201, Spacing::Linear)?);
    if bs.iter().any(|&b| b < 0.0) {
        return Err(CliError::Config("curves plots b >= 0 only".into()));
    }
    let (lo, hi) = cfg.n_range.unwrap_or((-3, 4));
    let table = curve_table(cfg.nu, &bs, lo, hi)?;
    let output = match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => csv(
            "b,n,lambda",
            table.rows.iter().flat_map(|r| r.entries.iter().map(move |(n, l)| vec![fmt_num(r.b), n.to_string(), fmt_num(*l)])),
        ),
        Format::Json => rows_json(&table),
    };
    Ok(Outcome { output, passed: true })
}

#[derive(Serialize)]
struct GroundRow {
    b: f64,
    n_min: i64,
    lambda: f64,
    asym: f64,
    residual: f64,
}

fn groundstate(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let bs = cfg.grid_or(BGrid::new(0.01, 100.0, 100, Spacing::Log)?);
    if bs.iter().any(|&b| !(b > 0.0)) {
        return Err(CliError::Config("groundstate needs b > 0".into()));
    }
    let (a, c) = (alpha(), strong_field_constant());
    let rows = bs
        .par_iter()
        .map(|&b| {
            let g = ground_state(b, cfg.nu)?;
            let asym = a * b.sqrt() + c;
            Ok(GroundRow { b, n_min: g.n_min, lambda: g.lambda, asym, residual: (g.lambda - asym) * b.sqrt() })
        })
        .collect::<Result<Vec<_>, crate::Error>>()?;
    let output = match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => csv(
            "b,n_min,lambda,asym,residual",
            rows.iter().map(|r| vec![fmt_num(r.b), r.n_min.to_string(), fmt_num(r.lambda), fmt_num(r.asym), fmt_num(r.residual)]),
        ),
        Format::Json => rows_json(&rows),
    };
    Ok(Outcome { output, passed: true })
}

fn crossings(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let (lo, hi) = cfg.n_range.unwrap_or((0, 10));
    if lo < 0 {
        return Err(CliError::Config("crossings are indexed by n >= 0".into()));
    }
    let pts = (lo..=hi).into_par_iter().map(|n| crossing(n, cfg.nu)).collect::<Result<Vec<_>, _>>()?;
    let output = match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => csv(
            "n,nu,z,lambda,g_residual,defining_residual",
            pts.iter().map(|p| {
                vec![
                    p.n.to_string(),
                    fmt_num(p.nu),
                    fmt_num(p.z),
                    fmt_num(p.lambda_at_z),
                    fmt_num(p.g_residual),
                    fmt_num(p.defining_residual),
                ]
            }),
        ),
        Format::Json => rows_json(&pts),
    };
    Ok(Outcome { output, passed: true })
}

fn weakfield(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let nu = cfg.nu;
    let mut checks = Vec::new();
    if nu == 0.0 {
        let log_law = model_weakfield(0, 0.0)?.observe(1e-8)?;
        checks.push(within("lambda_0(b)*log(b) at b=1e-8", "weak-field log law, mode 0", log_law, -2.1, -1.9));
        let lin = model_weakfield(3, 0.0)?.observe(1e-6)?;
        checks.push(within("(lambda_3(b)-3)/b at b=1e-6", "weak-field linear law, |n| >= 2", lin, -1.51, -1.49));
        let blogb = model_weakfield(1, 0.0)?.observe(1e-8)?;
        checks.push(within("(lambda_1(b)-1)/(b log b) at b=1e-8", "weak-field b log b law, |n| = 1", blogb, 0.9, 1.1));
        let blogb_neg = model_weakfield(-1, 0.0)?.observe(1e-8)?;
        checks.push(within("(lambda_-1(b)-1)/(b log b) at b=1e-8", "weak-field b log b law, n = -1 (sign n)", blogb_neg, -1.1, -0.9));
    } else {
        let s = nu.abs();
        let coef = flux_ground_coefficient(nu)?;
        let est = model_weakfield(0, nu)?.observe(1e-8)?;
        checks.push(at_most(
            "|(lambda_0(b,nu)-|nu|)/b^|nu| - coefficient| at b=1e-8",
            "flux ground-mode coefficient 2G(1-|nu|)G(|nu|+1/2)/(sqrt(pi)G(|nu|))",
            (est - coef).abs(),
            1e-2,
        ));
        let bs: Vec<f64> = (4..=9).map(|k| 10f64.powi(-k)).collect();
        let slope = fit_rate_exponent(nu, &bs)?;
        checks.push(at_most("|fitted rate exponent - |nu||", "flux rate b^|nu|", slope - s, 0.05));
        for n in [-1, 1] {
            let m = model_weakfield(n, nu)?;
            for b in [1e-4, 1e-6, 1e-8] {
                checks.push(at_most(
                    &format!("(lambda_{n}(b,nu)-|n-nu|)/b^(1-|nu|) at b={b:e}"),
                    "flux rate b^(1-|nu|), |n| = 1",
                    m.observe(b)?,
                    10.0,
                ));
            }
        }
        let m2 = model_weakfield(2, nu)?;
        checks.push(at_most("(lambda_2(b,nu)-|2-nu|)/b at b=1e-6", "flux rate b, |n| >= 2", m2.observe(1e-6)?, 10.0));
    }
    report(checks, cfg.format.unwrap_or(Format::Json))
}

fn strongfield(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let nu = cfg.nu;
    let model = model_groundstate_strongfield(nu)?;
    let bs = cfg.b_grid.map(|g| g.points()).unwrap_or_else(|| vec![1e2, 1e3, 1e4]);
    let mut checks = Vec::new();
    for b in bs {
        checks.push(at_most(
            &format!("|(lambda_DN(b)-alpha sqrt(b)-(alpha^2+2)/6) sqrt(b)| at b={b:e}"),
            "strong-field ground state alpha b^1/2 + (alpha^2+2)/6",
            model.residual(b)?,
            10.0,
        ));
    }
    let cm = model_crossing(25, nu)?;
    for n in [25i64, 50, 100, 200] {
        checks.push(at_most(
            &format!("|crossing residual r(n)| at n={n}"),
            "crossing law (n-nu) - alpha sqrt(n-nu) + (alpha^2+2)/3",
            cm.residual(n as f64)?,
            10.0,
        ));
        checks.push(at_most(
            &format!("|spacing residual * n| at n={n}"),
            "crossing spacing 1 - alpha/(2 sqrt(n-nu))",
            spacing_residual(n, nu)?,
            10.0,
        ));
        checks.push(at_most(
            &format!("|crossing value residual * sqrt(n-nu)| at n={n}"),
            "crossing value alpha sqrt(n-nu) + (1-alpha^2)/3",
            crossing_value_residual(n, nu)?,
            10.0,
        ));
    }
    report(checks, cfg.format.unwrap_or(Format::Json))
}

fn norms(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let nu = cfg.nu;
    let n_max = cfg.n_range.map(|(lo, hi)| lo.abs().max(hi.abs())).unwrap_or(50);
    if n_max < 10 {
        return Err(CliError::Config(format!("norms need n_max >= 10, got {n_max}")));
    }
    let mut checks = Vec::new();
    if nu == 0.0 {
        let r = dtn_diff_norm(1e-6, 0.0, n_max)?;
        checks.push(within("norm*|log b| at b=1e-6", "operator-norm rate 1/|log b| (nu = 0)", r.norm * 1e-6f64.ln().abs(), 1.5, 2.5));
    } else {
        for b in [1e-4, 1e-6, 1e-8] {
            let r = dtn_diff_norm(b, nu, n_max)?;
            checks.push(at_most(&format!("norm/b^|nu| at b={b:e}"), "operator-norm rate b^|nu| (nu != 0)", r.norm / b.powf(nu.abs()), 5.0));
        }
    }
    for b in [1e-4, 1e-6] {
        let r = dtn_diff_norm(b, nu, n_max)?;
        let g0 = (exterior_eigenvalue(SpectralParams::new(0, b, nu)?)? - nu.abs()).abs();
        checks.push(Check {
            check: format!("tail gap (|n| in [{}, {n_max}]) <= gap at n=0, b={b:e}", n_max - 9),
            anchor: "uniform O(b) tail of the gaps".into(),
            value: r.tail,
            bound: format!("<= {g0}"),
            pass: r.tail <= g0,
        });
    }
    report(checks, cfg.format.unwrap_or(Format::Json))
}

/// Mixed tolerance of the oracle comparison.
pub const ORACLE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleRow {
    pub n: i64,
    pub b: f64,
    pub nu: f64,
    pub closed: f64,
    pub shoot: f64,
    pub diff: f64,
    pub pass: bool,
}

/// Closed-form vs shooting on an (n, b) grid at one flux.
pub fn oracle_rows(nu: f64, ns: (i64, i64), bs: &[f64]) -> crate::Result<Vec<OracleRow>> {
    let grid: Vec<(i64, f64)> = (ns.0..=ns.1).flat_map(|n| bs.iter().map(move |&b| (n, b))).collect();
    grid.par_iter()
        .map(|&(n, b)| {
            let p = SpectralParams::new(n, b, nu)?;
            let closed = exterior_eigenvalue(p)?;
            let shoot = exterior_shoot(p, ShootConfig::exterior(&p))?;
            let diff = (closed - shoot).abs();
            Ok(OracleRow { n, b, nu, closed, shoot, diff, pass: diff <= ORACLE_TOL * (1.0 + closed.abs()) })
        })
        .collect()
}

fn oracle_check(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let bs = cfg.b_grid.map(|g| g.points()).unwrap_or_else(|| vec![0.5, 1.0, 5.0, 20.0]);
    if bs.iter().any(|&b| !(b > 0.0)) {
        return Err(CliError::Config("oracle-check needs b > 0".into()));
    }
    let rows = oracle_rows(cfg.nu, cfg.n_range.unwrap_or((-10, 10)), &bs)?;
    let passed = rows.iter().all(|r| r.pass);
    let output = match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => csv(
            "n,b,nu,closed,shoot,diff,pass",
            rows.iter().map(|r| {
                vec![r.n.to_string(), fmt_num(r.b), fmt_num(r.nu), fmt_num(r.closed), fmt_num(r.shoot), fmt_num(r.diff), r.pass.to_string()]
            }),
        ),
        Format::Json => rows_json(&rows),
    };
    Ok(Outcome { output, passed })
}

/// Executes the command and returns its rendered output.
pub fn execute(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cfg.command {
        Command::Curves => curves(cfg),
        Command::Groundstate => groundstate(cfg),
        Command::Crossings => crossings(cfg),
        Command::Weakfield => weakfield(cfg),
        Command::Strongfield => strongfield(cfg),
        Command::Norms => norms(cfg),
        Command::OracleCheck => oracle_check(cfg),
        Command::Alpha => Ok(Outcome { output: format!("{}\n", fmt_num(alpha_root()?)), passed: true }),
    }
}

/// Executes and writes to `--out` or `stdout`. Returns the process exit code.
pub fn run(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<u8, CliError> {
    let outcome = execute(cfg)?;
    match &cfg.out_path {
        Some(path) => std::fs::write(path, outcome.output.as_bytes())?,
        None => stdout.write_all(outcome.output.as_bytes())?,
    }
    Ok(if outcome.passed { 0 } else { 1 })
}
