//! Command-line surface: `bound`, `oracle`, `simulate`, `sweep`, `path`
//! and `stationary`.
//!
//! Every flag mirrors a key of the JSON configuration object. A file given
//! with `--config` wins over flags for the keys it sets; a previously
//! emitted JSON report is accepted too (its embedded `config` is used).

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::action::{max_stationarity_residual, CostKind};
use crate::closed_forms::{gaussian_bound, noise_constants, poisson_bound};
use crate::error::{Error, Result};
use crate::minimizer::{grid_dp, refine_candidates, MinimizerConfig};
use crate::model::{MapSpec, NoiseSpec, ProcessConfig};
use crate::montecarlo::{estimate, scaling_curve, McConfig, McEstimate, DEFAULT_MAX_STEPS};
use crate::stationary::log_limit;

pub const DEFAULT_EPSILON: f64 = 0.1;
pub const DEFAULT_STATIONARY_EPSILONS: [f64; 4] = [0.1, 0.05, 0.02, 0.01];

/// Header of the sweep/simulate CSV, in column order.
pub const CSV_HEADER: &str = "epsilon,trials,censored,mean_tau,stderr,scaled,bound_reference";

/// Rounds to 10 significant digits.
pub fn sig10(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.9e}").parse().unwrap_or(x)
}

fn fmt_num(x: f64) -> String {
    format!("{}", sig10(x))
}

/// Parses a comma-separated list of positive reals.
pub fn parse_epsilons(s: &str) -> Result<Vec<f64>> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::config("empty epsilon list"));
    }
    s.split(',')
        .map(|tok| {
            let tok = tok.trim();
            let v: f64 = tok
                .parse()
                .map_err(|_| Error::config(format!("invalid epsilon {tok:?}")))?;
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(Error::config(format!(
                    "epsilon must be positive, got {tok:?}"
                )))
            }
        })
        .collect()
}

/// Parses tabulated knots written as `x:y,x:y,...`.
pub fn parse_knots(s: &str) -> Result<Vec<[f64; 2]>> {
    let knots = s
        .split(',')
        .map(|pair| {
            let (x, y) = pair
                .split_once(':')
                .ok_or_else(|| Error::config(format!("knot {pair:?} is not of the form x:y")))?;
            let parse = |t: &str| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::config(format!("invalid number {t:?} in knot {pair:?}")))
            };
            Ok([parse(x)?, parse(y)?])
        })
        .collect::<Result<Vec<_>>>()?;
    MapSpec::Tabulated {
        knots: knots.clone(),
    }
    .validate()?;
    Ok(knots)
}

/// The JSON configuration object. Absent keys fall back to flags, then to
/// defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<MapSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilons: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub half_width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub max_len: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_steps: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numeric: Option<bool>,
}

/// Parses a configuration file, or the `config` object of a report.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut value: Value = serde_json::from_str(text)?;
    if let Some(inner) = value.get_mut("config") {
        value = inner.take();
    }
    Ok(serde_json::from_value(value)?)
}

impl RunConfig {
    /// Keys set in `other` replace ours.
    pub fn overlay(self, other: RunConfig) -> RunConfig {
        RunConfig {
            map: other.map.or(self.map),
            noise: other.noise.or(self.noise),
            epsilon: other.epsilon.or(self.epsilon),
            epsilons: other.epsilons.or(self.epsilons),
            half_width: other.half_width.or(self.half_width),
            start: other.start.or(self.start),
            max_len: other.max_len.or(self.max_len),
            grid: other.grid.or(self.grid),
            trials: other.trials.or(self.trials),
            max_steps: other.max_steps.or(self.max_steps),
            seed: other.seed.or(self.seed),
            workers: other.workers.or(self.workers),
            numeric: other.numeric.or(self.numeric),
        }
    }

    pub fn process(&self) -> Result<ProcessConfig> {
        let map = self
            .map
            .clone()
            .ok_or_else(|| Error::config("a map is required (--map)"))?;
        ProcessConfig::new(
            map,
            self.noise.clone().unwrap_or_default(),
            self.epsilon.unwrap_or(DEFAULT_EPSILON),
            self.half_width.unwrap_or(1.0),
            self.start.unwrap_or(0.0),
        )
    }

    pub fn minimizer(&self, cost: CostKind) -> Result<MinimizerConfig> {
        let d = MinimizerConfig::default();
        let cfg = MinimizerConfig {
            max_len: self.max_len.unwrap_or(d.max_len),
            grid: self.grid.unwrap_or(d.grid),
            cost,
            start: self.start.unwrap_or(0.0),
            ..d
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn monte_carlo(&self) -> Result<McConfig> {
        let d = McConfig::default();
        let mc = McConfig {
            trials: self.trials.unwrap_or(d.trials),
            max_steps: self.max_steps.unwrap_or(DEFAULT_MAX_STEPS),
            seed: self.seed.unwrap_or(d.seed),
            workers: self.workers.unwrap_or(d.workers),
        };
        mc.validate()?;
        Ok(mc)
    }

    /// All keys with their effective values, suitable for embedding in reports.
    pub fn resolved(&self) -> Result<RunConfig> {
        let p = self.process()?;
        let m = self.minimizer(CostKind::Quadratic)?;
        let mc = self.monte_carlo()?;
        Ok(RunConfig {
            map: Some(p.map),
            noise: Some(p.noise),
            epsilon: Some(p.epsilon),
            epsilons: self.epsilons.clone(),
            half_width: Some(p.half_width),
            start: Some(p.start),
            max_len: Some(m.max_len),
            grid: Some(m.grid),
            trials: Some(mc.trials),
            max_steps: Some(mc.max_steps),
            seed: Some(mc.seed),
            workers: Some(mc.workers),
            numeric: Some(self.numeric.unwrap_or(false)),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Exit-time bound from a closed form (or the numeric minimiser with --numeric).
    Bound,
    /// Grid DP plus refinement, with argmin path and stationarity diagnostics.
    Oracle,
    /// Monte Carlo mean exit time at one epsilon.
    Simulate,
    /// Monte Carlo scaling curve over --epsilons.
    Sweep,
    /// The optimal exit path.
    Path,
    /// -ε² log of the stationary density of f(x) = -|ax| at x = -1.
    Stationary,
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "exitbound",
    version,
    about = "Large-deviation exit-time bounds for nonlinear autoregressions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Map family: linear, dead_zone, saturated, half_line, two_slope,
    /// abs_value, quadratic, ricker, tabulated.
    #[arg(long, global = true)]
    pub map: Option<String>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub b: Option<f64>,
    #[arg(long, global = true)]
    pub c: Option<f64>,
    #[arg(long, global = true)]
    pub r: Option<f64>,
    /// Tabulated knots as x:y,x:y,...
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub knots: Option<String>,

    /// Noise family: gaussian, laplace, cauchy, poisson_diff.
    #[arg(long, global = true)]
    pub noise: Option<String>,
    /// Laplace scale b.
    #[arg(long = "noise-b", global = true)]
    pub noise_b: Option<f64>,
    /// Poisson-difference rate λ.
    #[arg(long, global = true)]
    pub lambda: Option<f64>,

    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    /// Comma-separated, descending.
    #[arg(long, global = true)]
    pub epsilons: Option<String>,
    #[arg(long = "half-width", global = true)]
    pub half_width: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub start: Option<f64>,
    /// Largest path length.
    #[arg(long = "M", global = true)]
    pub max_len: Option<usize>,
    /// Grid points over [-h, h].
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    #[arg(long, global = true)]
    pub trials: Option<u64>,
    #[arg(long = "max-steps", global = true)]
    pub max_steps: Option<u64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Use the numeric minimiser instead of a closed form.
    #[arg(long, global = true)]
    pub numeric: bool,
    /// JSON configuration (or report) file; its keys override flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// Builds a map from `--map` and its parameter flags.
pub fn map_from_flags(
    family: &str,
    a: Option<f64>,
    b: Option<f64>,
    c: Option<f64>,
    r: Option<f64>,
    knots: Option<&str>,
) -> Result<MapSpec> {
    let need = |v: Option<f64>, name: &str| {
        v.ok_or_else(|| Error::config(format!("--map {family} requires --{name}")))
    };
    let map = match family {
        "linear" => MapSpec::Linear { a: need(a, "a")? },
        "dead_zone" => MapSpec::DeadZone {
            a: need(a, "a")?,
            b: need(b, "b")?,
        },
        "saturated" => MapSpec::Saturated {
            a: need(a, "a")?,
            c: need(c, "c")?,
        },
        "half_line" => MapSpec::HalfLine { a: need(a, "a")? },
        "two_slope" => MapSpec::TwoSlope {
            a: need(a, "a")?,
            b: need(b, "b")?,
        },
        "abs_value" => MapSpec::AbsValue { a: need(a, "a")? },
        "quadratic" => MapSpec::Quadratic { a: need(a, "a")? },
        "ricker" => MapSpec::Ricker { r: need(r, "r")? },
        "tabulated" => MapSpec::Tabulated {
            knots: parse_knots(
                knots.ok_or_else(|| Error::config("--map tabulated requires --knots"))?,
            )?,
        },
        other => return Err(Error::config(format!("unknown map family {other:?}"))),
    };
    map.validate()?;
    Ok(map)
}

pub fn noise_from_flags(family: &str, b: Option<f64>, lambda: Option<f64>) -> Result<NoiseSpec> {
    let noise = match family {
        "gaussian" => NoiseSpec::Gaussian,
        "laplace" => NoiseSpec::Laplace {
            b: b.ok_or_else(|| Error::config("--noise laplace requires --noise-b"))?,
        },
        "cauchy" => NoiseSpec::Cauchy,
        "poisson_diff" => NoiseSpec::PoissonDiff {
            lambda: lambda
                .ok_or_else(|| Error::config("--noise poisson_diff requires --lambda"))?,
        },
        other => return Err(Error::config(format!("unknown noise family {other:?}"))),
    };
    noise.validate()?;
    Ok(noise)
}

impl Cli {
    fn flag_config(&self) -> Result<RunConfig> {
        let map = match &self.map {
            Some(f) => Some(map_from_flags(
                f,
                self.a,
                self.b,
                self.c,
                self.r,
                self.knots.as_deref(),
            )?),
            // stationary only needs a slope
            None if self.command == Command::Stationary => self.a.map(|a| MapSpec::AbsValue { a }),
            None => None,
        };
        let noise = self
            .noise
            .as_deref()
            .map(|f| noise_from_flags(f, self.noise_b, self.lambda))
            .transpose()?;
        Ok(RunConfig {
            map,
            noise,
            epsilon: self.epsilon,
            epsilons: self.epsilons.as_deref().map(parse_epsilons).transpose()?,
            half_width: self.half_width,
            start: self.start,
            max_len: self.max_len,
            grid: self.grid,
            trials: self.trials,
            max_steps: self.max_steps,
            seed: self.seed,
            workers: self.workers,
            numeric: self.numeric.then_some(true),
        })
    }

    /// Effective configuration: flags overlaid by the `--config` file.
    pub fn run_config(&self) -> Result<RunConfig> {
        let flags = self.flag_config()?;
        match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                Ok(flags.overlay(parse_config(&text)?))
            }
            None => Ok(flags),
        }
    }
}

/// Resolved invocation.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub command: Command,
    pub config: RunConfig,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl RunSpec {
    pub fn from_cli(cli: &Cli) -> Result<RunSpec> {
        let config = cli.run_config()?;
        let default_format = match cli.command {
            Command::Sweep => Format::Csv,
            _ => Format::Json,
        };
        Ok(RunSpec {
            command: cli.command,
            config,
            format: cli.format.unwrap_or(default_format),
            out: cli.out.clone(),
        })
    }
}

fn params_of(map: &MapSpec) -> Value {
    let mut v = serde_json::to_value(map).expect("maps serialize");
    if let Some(obj) = v.as_object_mut() {
        obj.remove("family");
    }
    v
}

/// Path cost matching the innovation law's rate function.
fn cost_for(noise: &NoiseSpec) -> Result<CostKind> {
    match *noise {
        NoiseSpec::Gaussian => Ok(CostKind::Quadratic),
        NoiseSpec::PoissonDiff { lambda } => Ok(CostKind::L1 { lambda }),
        NoiseSpec::Laplace { b } => Ok(CostKind::L1 { lambda: 1.0 / b }),
        NoiseSpec::Cauchy => Err(Error::Domain(
            "cauchy noise has no rate function; only the bound command applies".into(),
        )),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Numeric,
    NoiseConstant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub family: String,
    pub params: Value,
    pub half_width: f64,
    pub noise: String,
    pub method: Method,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_star: Option<usize>,
    pub caveats: Vec<String>,
    pub config: RunConfig,
}

pub fn cmd_bound(config: &RunConfig) -> Result<BoundReport> {
    let p = config.process()?;
    let numeric = config.numeric.unwrap_or(false);
    let h = p.half_width;
    let mut caveats = Vec::new();
    let (method, value, n_star) = match (&p.noise, numeric) {
        (NoiseSpec::Laplace { .. } | NoiseSpec::Cauchy, false) => {
            let c = noise_constants(&p.noise)?;
            caveats.push("noise constant assumes a contraction with |a| < 1".to_string());
            if h != 1.0 {
                caveats.push("constant scaled linearly from half-width 1".to_string());
            }
            (Method::NoiseConstant, c.value * h, None)
        }
        (NoiseSpec::PoissonDiff { lambda }, false) => {
            let cf = poisson_bound(&p.map, *lambda, h)?;
            (Method::ClosedForm, cf.value, cf.n_star)
        }
        (NoiseSpec::Gaussian, false) => {
            let m = config.minimizer(CostKind::Quadratic)?;
            let cf = gaussian_bound(&p.map, h, m.max_len)?;
            caveats.extend(cf.caveats);
            (Method::ClosedForm, cf.value, cf.n_star)
        }
        (noise, true) => {
            let m = config.minimizer(cost_for(noise)?)?;
            let sol = grid_dp(&p.map, h, &m)?;
            let r = refine_candidates(&p.map, &sol, &m);
            if !r.converged {
                caveats.push("refinement stopped at max_sweeps".to_string());
            }
            (Method::Numeric, r.value, Some(r.n_star))
        }
    };
    Ok(BoundReport {
        family: p.map.family_name().to_string(),
        params: params_of(&p.map),
        half_width: h,
        noise: p.noise.family_name().to_string(),
        method,
        value: sig10(value),
        n_star,
        caveats,
        config: config.resolved()?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub family: String,
    pub params: Value,
    pub half_width: f64,
    pub noise: String,
    pub value: f64,
    pub n_star: usize,
    pub grid_value: f64,
    pub grid_n_star: usize,
    pub path: Vec<f64>,
    pub max_stationarity_residual: f64,
    pub converged: bool,
    pub config: RunConfig,
}

pub fn cmd_oracle(config: &RunConfig) -> Result<OracleReport> {
    let p = config.process()?;
    let m = config.minimizer(cost_for(&p.noise)?)?;
    let sol = grid_dp(&p.map, p.half_width, &m)?;
    let r = refine_candidates(&p.map, &sol, &m);
    let residual = match m.cost {
        CostKind::Quadratic => max_stationarity_residual(&r.path, &p.map),
        CostKind::L1 { .. } => f64::NAN,
    };
    Ok(OracleReport {
        family: p.map.family_name().to_string(),
        params: params_of(&p.map),
        half_width: p.half_width,
        noise: p.noise.family_name().to_string(),
        value: sig10(r.value),
        n_star: r.n_star,
        grid_value: sig10(sol.result.value),
        grid_n_star: sol.result.n_star,
        path: r.path.points().iter().map(|&y| sig10(y)).collect(),
        max_stationarity_residual: sig10(residual),
        converged: r.converged,
        config: config.resolved()?,
    })
}

/// One row of the sweep CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub epsilon: f64,
    pub trials: u64,
    pub censored: u64,
    pub mean_tau: f64,
    pub stderr: f64,
    pub scaled: f64,
    pub bound_reference: f64,
}

impl SweepRow {
    fn new(e: &McEstimate, bound_reference: f64) -> Self {
        SweepRow {
            epsilon: sig10(e.epsilon),
            trials: e.trials,
            censored: e.censored,
            mean_tau: sig10(e.mean_tau),
            stderr: sig10(e.stderr),
            scaled: sig10(e.scaled),
            bound_reference: sig10(bound_reference),
        }
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            fmt_num(self.epsilon),
            self.trials,
            self.censored,
            fmt_num(self.mean_tau),
            fmt_num(self.stderr),
            fmt_num(self.scaled),
            fmt_num(self.bound_reference)
        )
    }
}

/// `cmd_bound`'s value, falling back to the numeric minimiser when no
/// closed form exists. NaN if neither applies.
fn bound_reference(config: &RunConfig) -> f64 {
    match cmd_bound(config) {
        Ok(r) => r.value,
        Err(Error::NoClosedForm(_)) => {
            let numeric = RunConfig {
                numeric: Some(true),
                ..config.clone()
            };
            cmd_bound(&numeric).map(|r| r.value).unwrap_or(f64::NAN)
        }
        Err(_) => f64::NAN,
    }
}

pub fn cmd_simulate(config: &RunConfig) -> Result<(McEstimate, SweepRow)> {
    let p = config.process()?;
    let mc = config.monte_carlo()?;
    let est = estimate(&p, &mc)?;
    let row = SweepRow::new(&est, bound_reference(config));
    Ok((est, row))
}

pub fn cmd_sweep(config: &RunConfig) -> Result<Vec<SweepRow>> {
    let epsilons = config
        .epsilons
        .as_ref()
        .filter(|e| !e.is_empty())
        .ok_or_else(|| Error::config("sweep requires a nonempty --epsilons list"))?;
    let p = config.process()?;
    let mc = config.monte_carlo()?;
    let reference = bound_reference(config);
    Ok(scaling_curve(&p, epsilons, &mc)?
        .iter()
        .map(|e| SweepRow::new(e, reference))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathReport {
    pub value: f64,
    pub n_star: usize,
    pub path: Vec<f64>,
}

pub fn cmd_path(config: &RunConfig) -> Result<PathReport> {
    let o = cmd_oracle(config)?;
    Ok(PathReport {
        value: o.value,
        n_star: o.n_star,
        path: o.path,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationaryReport {
    pub a: f64,
    pub x: f64,
    pub rows: Vec<(f64, f64)>,
    pub target: f64,
}

pub fn cmd_stationary(config: &RunConfig) -> Result<StationaryReport> {
    let a = match config.map {
        Some(MapSpec::AbsValue { a }) | Some(MapSpec::Linear { a }) => a.abs(),
        Some(ref m) => {
            return Err(Error::Domain(format!(
                "stationary density is defined for f(x) = -|ax|, not {}",
                m.family_name()
            )))
        }
        None => return Err(Error::config("stationary requires --a")),
    };
    let epsilons = config
        .epsilons
        .clone()
        .unwrap_or_else(|| DEFAULT_STATIONARY_EPSILONS.to_vec());
    let x = -1.0;
    let values = log_limit(a, x, &epsilons)?;
    Ok(StationaryReport {
        a,
        x,
        rows: epsilons
            .iter()
            .zip(values)
            .map(|(&e, v)| (sig10(e), sig10(v)))
            .collect(),
        target: sig10((1.0 - a * a) / 2.0),
    })
}

fn write_json<T: Serialize>(out: &mut dyn Write, v: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)?;
    Ok(())
}

/// Executes a resolved invocation, writing its output to `out`.
pub fn execute(spec: &RunSpec, out: &mut dyn Write) -> Result<()> {
    let cfg = &spec.config;
    match (spec.command, spec.format) {
        (Command::Bound, _) => write_json(out, &cmd_bound(cfg)?),
        (Command::Oracle, _) => write_json(out, &cmd_oracle(cfg)?),
        (Command::Simulate, Format::Json) => write_json(out, &cmd_simulate(cfg)?.0),
        (Command::Simulate, Format::Csv) => {
            let (_, row) = cmd_simulate(cfg)?;
            writeln!(out, "{CSV_HEADER}")?;
            writeln!(out, "{}", row.to_csv())?;
            Ok(())
        }
        (Command::Sweep, Format::Json) => write_json(out, &cmd_sweep(cfg)?),
        (Command::Sweep, Format::Csv) => {
            let rows = cmd_sweep(cfg)?;
            writeln!(out, "{CSV_HEADER}")?;
            for r in rows {
                writeln!(out, "{}", r.to_csv())?;
            }
            Ok(())
        }
        (Command::Path, Format::Json) => write_json(out, &cmd_path(cfg)?),
        (Command::Path, Format::Csv) => {
            let p = cmd_path(cfg)?;
            writeln!(out, "n,y")?;
            for (n, y) in p.path.iter().enumerate() {
                writeln!(out, "{n},{}", fmt_num(*y))?;
            }
            Ok(())
        }
        (Command::Stationary, Format::Json) => write_json(out, &cmd_stationary(cfg)?),
        (Command::Stationary, Format::Csv) => {
            let s = cmd_stationary(cfg)?;
            writeln!(out, "epsilon,value,target")?;
            for (e, v) in s.rows {
                writeln!(out, "{},{},{}", fmt_num(e), fmt_num(v), fmt_num(s.target))?;
            }
            Ok(())
        }
    }
}

/// Parses nothing; runs an already-parsed command line.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let spec = RunSpec::from_cli(cli)?;
    match &spec.out {
        Some(path) => {
            let mut buf = Vec::new();
            execute(&spec, &mut buf)?;
            std::fs::write(path, buf)?;
            Ok(())
        }
        None => execute(&spec, out),
    }
}
