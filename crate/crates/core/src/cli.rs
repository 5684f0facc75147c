//! Batch front end: reads a JSON run configuration, runs one pipeline and
//! writes a CSV or JSON report.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::dispersion::{sigma_scan, tau_star};
use crate::error::Error;
use crate::expansion::second_order;
use crate::irrotational::{self, assumption_window, chain, froude_threshold, tau0_root};
use crate::options::SolverOptions;
use crate::stream::{critical_point_with, froude_condition, stream_profile_with, subcritical_shear, StreamSolution};
use crate::vorticity::VorticitySpec;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_NO_ROOT: i32 = 4;

/// Significant digits of every number written to CSV.
pub const CSV_DIGITS: usize = 12;
pub const SCHEMA: &str = "v1";

#[derive(Debug, Parser)]
#[command(
    name = "stokes",
    version,
    about = "Small-amplitude Stokes-wave analysis on shear flows"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum CommandKind {
    Stream,
    Dispersion,
    Mu2,
    IrrotationalScan,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Uniform stream summary and Froude verdict.
    Stream(CommonArgs),
    /// Dispersion function on a τ-grid and its positive root.
    Dispersion(CommonArgs),
    /// Second-order wavelength and eigenvalue coefficients.
    Mu2(CommonArgs),
    /// Irrotational coefficient chain over a τ-grid, with τ₀, F₀ and the validity window.
    IrrotationalScan(CommonArgs),
}

#[derive(Debug, Clone, clap::Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Overrides the ODE and root-finding tolerances.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TauScan {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl TauScan {
    pub fn grid(&self) -> Vec<f64> {
        crate::numerics::linspace(self.min, self.max, self.n)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

/// Contents of the `--config` file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub omega_poly: Option<Vec<f64>>,
    pub s: Option<f64>,
    #[serde(rename = "R")]
    pub r: Option<f64>,
    /// Froude number of the conjugate supercritical stream; irrotational
    /// flow only. Selects the stream over the deeper conjugate depth.
    pub froude: Option<f64>,
    pub tau_scan: Option<TauScan>,
    #[serde(default)]
    pub output: OutputConfig,
    pub tolerances: Option<SolverOptions>,
}

/// Failure of a CLI run, carrying its exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Solver(#[from] Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_INVALID_CONFIG,
            CliError::Io(_) => EXIT_NUMERICAL,
            CliError::Solver(e) => match e {
                Error::NoRoot { .. } => EXIT_NO_ROOT,
                Error::InvalidInput(_)
                | Error::BelowShearFloor { .. }
                | Error::NoSubcriticalStream { .. }
                | Error::NoTwoRoots { .. }
                | Error::NoThetaRoot { .. }
                | Error::TauBelowMinimum { .. } => EXIT_INVALID_CONFIG,
                _ => EXIT_NUMERICAL,
            },
        }
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| invalid(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    fn validate(&self) -> Result<(), CliError> {
        let selectors = [self.s, self.r, self.froude].iter().filter(|x| x.is_some()).count();
        if selectors > 1 {
            return Err(invalid("give at most one of s, R and froude"));
        }
        for (name, v) in [("s", self.s), ("R", self.r), ("froude", self.froude)] {
            if v.is_some_and(|x| !x.is_finite()) {
                return Err(invalid(format!("{name} must be finite")));
            }
        }
        if let Some(scan) = &self.tau_scan {
            if !(scan.min.is_finite() && scan.max.is_finite() && scan.min < scan.max) || scan.n < 2 {
                return Err(invalid("tau_scan needs finite min < max and n >= 2"));
            }
        }
        if let Some(t) = &self.tolerances {
            let tols = [
                t.quad_abs_tol,
                t.quad_rel_tol,
                t.ode_tol,
                t.root_tol,
                t.resonance_threshold,
            ];
            if tols.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
                return Err(invalid("tolerances must be positive"));
            }
            if t.grid_points < 5 || t.grid_points % 2 == 0 {
                return Err(invalid("grid_points must be odd and at least 5"));
            }
        }
        if let Some(c) = &self.omega_poly {
            VorticitySpec::new(c.clone()).map_err(|e| invalid(e.to_string()))?;
        }
        Ok(())
    }

    fn vorticity(&self) -> Result<VorticitySpec, CliError> {
        let c = self
            .omega_poly
            .clone()
            .ok_or_else(|| invalid("omega_poly is required"))?;
        VorticitySpec::new(c).map_err(|e| invalid(e.to_string()))
    }

    fn options(&self, tol: Option<f64>) -> Result<SolverOptions, CliError> {
        let mut opts = self.tolerances.unwrap_or_default();
        if let Some(t) = tol {
            if !(t.is_finite() && t > 0.0) {
                return Err(invalid("--tol must be positive"));
            }
            opts.ode_tol = t;
            opts.root_tol = t;
        }
        Ok(opts)
    }

    /// The shear parameter selected by `s`, `R` or `froude`.
    fn shear(&self, v: &VorticitySpec) -> Result<f64, CliError> {
        if let Some(s) = self.s {
            return Ok(s);
        }
        if let Some(r) = self.r {
            return Ok(subcritical_shear(v, r)?);
        }
        if let Some(f) = self.froude {
            if !v.is_irrotational() {
                return Err(invalid("froude selects a stream only for irrotational flow"));
            }
            if f <= 1.0 {
                return Err(invalid("froude must exceed 1"));
            }
            return Ok(irrotational::theta_from_froude(f).cbrt().recip());
        }
        Err(invalid("one of s, R or froude is required"))
    }

    fn stream(&self, opts: &SolverOptions) -> Result<StreamSolution, CliError> {
        let v = self.vorticity()?;
        let s = self.shear(&v)?;
        Ok(stream_profile_with(&v, s, opts)?)
    }
}

/// A table with trailing named scalars.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    pub scalars: Vec<(&'static str, Value)>,
}

impl Report {
    fn new(command: &'static str) -> Self {
        Self {
            command,
            columns: Vec::new(),
            rows: Vec::new(),
            scalars: Vec::new(),
        }
    }

    fn scalar(mut self, name: &'static str, v: impl Into<Value>) -> Self {
        self.scalars.push((name, v.into()));
        self
    }

    /// Without a table the scalars form a one-row CSV; otherwise they follow
    /// the table as `# name,value` footer lines.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if self.columns.is_empty() {
            let names: Vec<&str> = self.scalars.iter().map(|(n, _)| *n).collect();
            let values: Vec<String> = self.scalars.iter().map(|(_, v)| csv_value(v)).collect();
            let _ = writeln!(out, "{}", names.join(","));
            let _ = writeln!(out, "{}", values.join(","));
            return out;
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(csv_value).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        for (name, v) in &self.scalars {
            let _ = writeln!(out, "# {name},{}", csv_value(v));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        map.insert("schema".into(), SCHEMA.into());
        map.insert("command".into(), self.command.into());
        if !self.columns.is_empty() {
            map.insert("columns".into(), json!(self.columns));
            map.insert("rows".into(), json!(self.rows));
        }
        for (name, v) in &self.scalars {
            map.insert((*name).into(), v.clone());
        }
        Value::Object(map)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
                s.push('\n');
                s
            }
        }
    }
}

fn csv_value(v: &Value) -> String {
    match v {
        Value::Number(n) if n.is_f64() => format_sig(n.as_f64().unwrap_or(f64::NAN), CSV_DIGITS),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
        Value::Null => "nan".into(),
        other => other.to_string(),
    }
}

/// `%.{digits}g`-style formatting: `digits` significant digits, trailing
/// zeros removed, exponent form outside `[1e-5, 10^digits)`.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Finite numbers as JSON numbers; NaN and infinities as `null`.
fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub fn cmd_stream(cfg: &RunConfig, opts: &SolverOptions) -> Result<Report, CliError> {
    let st = cfg.stream(opts)?;
    let cp = critical_point_with(st.vorticity(), opts)?;
    let verdict = format!("{:?}", froude_condition(&st));
    Ok(Report::new("stream")
        .scalar("s", num(st.s))
        .scalar("d", num(st.depth))
        .scalar("R", num(st.bernoulli))
        .scalar("kappa", num(st.kappa))
        .scalar("F", num(st.froude))
        .scalar("s_c", num(cp.s_c))
        .scalar("R_c", num(cp.r_c))
        .scalar("verdict", verdict))
}

pub fn cmd_dispersion(cfg: &RunConfig, opts: &SolverOptions) -> Result<Report, CliError> {
    let st = cfg.stream(opts)?;
    let disp = tau_star(&st)?;
    let (taus, sigmas) = match &cfg.tau_scan {
        Some(scan) => {
            let g = scan.grid();
            let s = sigma_scan(&st, &g)?;
            (g, s)
        }
        None => (disp.tau_grid.clone(), disp.sigma_values.clone()),
    };
    let mut report = Report::new("dispersion");
    report.columns = vec!["tau", "sigma"];
    report.rows = taus.iter().zip(&sigmas).map(|(&t, &s)| vec![num(t), num(s)]).collect();
    Ok(report
        .scalar("tau_star", num(disp.tau_star))
        .scalar("lambda0", num(disp.lambda0)))
}

pub fn cmd_mu2(cfg: &RunConfig, opts: &SolverOptions) -> Result<Report, CliError> {
    let st = cfg.stream(opts)?;
    let pipe = second_order(&st)?;
    let r = pipe.result;
    Ok(Report::new("mu2")
        .scalar("s", num(st.s))
        .scalar("tau_star", num(pipe.dispersion.tau_star))
        .scalar("lambda0", num(pipe.dispersion.lambda0))
        .scalar("lambda2", num(r.lambda2))
        .scalar("Lambda2", num(r.big_lambda2))
        .scalar("mu2", num(r.mu2))
        .scalar("I1", num(r.i1))
        .scalar("I2", num(r.i2))
        .scalar("mu2_eigen_route", num(r.mu2_eigen_route))
        .scalar("relation_residual", num(r.relation_residual))
        .scalar("y_form_residual", num(r.y_form_residual))
        .scalar("lambda2_q_numeric", num(pipe.lambda2_q_numeric))
        .scalar("kernel_projection", num(pipe.modes.projection)))
}

/// Default τ-range of the irrotational scan.
const DEFAULT_SCAN: TauScan = TauScan {
    min: 0.5,
    max: 3.0,
    n: 51,
};

pub fn cmd_irrotational_scan(cfg: &RunConfig, _opts: &SolverOptions) -> Result<Report, CliError> {
    let scan = cfg.tau_scan.unwrap_or(DEFAULT_SCAN);
    let mut report = Report::new("irrotational-scan");
    report.columns = vec!["tau", "theta", "F", "f", "lambda2", "mu2_sign"];
    for tau in scan.grid() {
        let c = chain(tau)?;
        let sign = if c.mu2 > 0.0 {
            1
        } else if c.mu2 < 0.0 {
            -1
        } else {
            0
        };
        report.rows.push(vec![
            num(tau),
            num(c.theta),
            num(c.froude),
            num(c.f_value),
            num(c.lambda2),
            sign.into(),
        ]);
    }
    let window = assumption_window()?;
    Ok(report
        .scalar("tau0", num(tau0_root()?))
        .scalar("F0", num(froude_threshold()?))
        .scalar("window_low", num(window.low))
        .scalar("window_high", num(window.high)))
}

fn default_format(kind: CommandKind) -> Format {
    match kind {
        CommandKind::Mu2 => Format::Json,
        _ => Format::Csv,
    }
}

/// Runs one subcommand and returns the rendered report and its destination.
pub fn execute(kind: CommandKind, args: &CommonArgs) -> Result<(String, Option<PathBuf>), CliError> {
    let cfg = RunConfig::load(&args.config)?;
    let opts = cfg.options(args.tol)?;
    let report = match kind {
        CommandKind::Stream => cmd_stream(&cfg, &opts)?,
        CommandKind::Dispersion => cmd_dispersion(&cfg, &opts)?,
        CommandKind::Mu2 => cmd_mu2(&cfg, &opts)?,
        CommandKind::IrrotationalScan => cmd_irrotational_scan(&cfg, &opts)?,
    };
    let format = args.format.or(cfg.output.format).unwrap_or(default_format(kind));
    let dest = args.out.clone().or(cfg.output.path.clone());
    Ok((report.render(format), dest))
}

/// Parses arguments, runs, writes output and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID_CONFIG } else { EXIT_OK };
        }
    };
    let (kind, args) = match &cli.command {
        Command::Stream(a) => (CommandKind::Stream, a),
        Command::Dispersion(a) => (CommandKind::Dispersion, a),
        Command::Mu2(a) => (CommandKind::Mu2, a),
        Command::IrrotationalScan(a) => (CommandKind::IrrotationalScan, a),
    };
    let outcome = execute(kind, args).and_then(|(text, dest)| {
        match dest {
            Some(path) => std::fs::write(path, text)?,
            None => print!("{text}"),
        }
        Ok(())
    });
    match outcome {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_sig(1.0, 12), "1");
        assert_eq!(format_sig(-0.5, 12), "-0.5");
        assert_eq!(format_sig(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(format_sig(2.0f64.sqrt(), 12), "1.41421356237");
        assert_eq!(format_sig(123456.789, 12), "123456.789");
        assert_eq!(format_sig(1.5e-7, 12), "1.5e-07");
        assert_eq!(format_sig(6.02214076e23, 12), "6.02214076e+23");
        assert_eq!(format_sig(999999999999.9, 12), "1e+12");
        assert_eq!(format_sig(f64::NAN, 12), "nan");
        assert_eq!(format_sig(0.0, 12), "0");
    }

    #[test]
    fn config_validation() {
        assert!(RunConfig::from_json(r#"{"omega_poly":[0],"s":0.8}"#).is_ok());
        let bad = [
            r#"{"omega_poly":[0],"s":0.8,"R":2}"#,
            r#"{"omega_poly":[0],"tau_scan":{"min":1,"max":0.5,"n":4}}"#,
            r#"{"omega_poly":[0],"tau_scan":{"min":0,"max":1,"n":1}}"#,
            r#"{"omega_poly":[0],"speed":3}"#,
            r#"{"omega_poly":[0],"s":0.8,"froude":1.2}"#,
            r#"{"omega_poly":[0],"tolerances":{"grid_points":100}}"#,
            "not json",
        ];
        for text in bad {
            let e = RunConfig::from_json(text).unwrap_err();
            assert_eq!(e.exit_code(), EXIT_INVALID_CONFIG, "{text}");
        }
        let cfg = RunConfig::from_json(r#"{"omega_poly":[0]}"#).unwrap();
        let e = cmd_stream(&cfg, &SolverOptions::default()).unwrap_err();
        assert_eq!(e.exit_code(), EXIT_INVALID_CONFIG);
    }

    #[test]
    fn stream_report_for_linear_flow() {
        let cfg = RunConfig::from_json(r#"{"omega_poly":[0],"s":0.8}"#).unwrap();
        let r = cmd_stream(&cfg, &SolverOptions::default().with_grid_points(201)).unwrap();
        let f = r.scalars.iter().find(|(n, _)| *n == "F").unwrap().1.as_f64().unwrap();
        assert!((f - 0.8f64.powf(1.5)).abs() < 1e-12);
        let csv = r.to_csv();
        assert!(csv.starts_with("s,d,R,kappa,F,s_c,R_c,verdict\n"));
        assert!(csv.trim_end().ends_with("SubcriticalWavesExist"));
        assert_eq!(r.to_json()["schema"], "v1");
    }

    #[test]
    fn exit_codes_for_solver_errors() {
        let code = |e: Error| CliError::from(e).exit_code();
        assert_eq!(
            code(Error::NoRoot {
                sigma0: 0.1,
                froude: 1.1
            }),
            EXIT_NO_ROOT
        );
        assert_eq!(
            code(Error::NearResonance {
                tau: 1.0,
                determinant: 0.0
            }),
            EXIT_NUMERICAL
        );
        assert_eq!(code(Error::NoBracket { lo: 0.5, hi: 3.0 }), EXIT_NUMERICAL);
        assert_eq!(code(Error::BelowShearFloor { s: 0.1, floor: 0.5 }), EXIT_INVALID_CONFIG);
    }

    #[test]
    fn froude_selector_gives_deep_conjugate_stream() {
        let cfg = RunConfig::from_json(r#"{"omega_poly":[0],"froude":1.2}"#).unwrap();
        let v = cfg.vorticity().unwrap();
        let s = cfg.shear(&v).unwrap();
        let theta = irrotational::theta_from_froude(1.2);
        assert!((s.powi(-3) - theta).abs() < 1e-12);
        let rot = RunConfig::from_json(r#"{"omega_poly":[0.3],"froude":1.2}"#).unwrap();
        assert!(rot.shear(&rot.vorticity().unwrap()).is_err());
    }
}
