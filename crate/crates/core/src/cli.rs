//! Command-line front end: config parsing, flag merging and command dispatch.
//!
//! A run is described by an optional TOML file (`--config`) whose keys mirror
//! the long flags with `-` replaced by `_`. Flags override file values. See
//! the README for the full key list.

use std::f64::consts::PI;
use std::fs;
use std::ops::Range;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use toml::Spanned;

use crate::engine::{run, EvolutionConfig, Window};
use crate::error::{Error, Result};
use crate::experiments::{
    sigma_profiles, sweep, threshold_scaling, ScanRange, SweepSpec, ThresholdCriterion, WindowPolicy,
};
use crate::io::{self, Format};
use crate::operators::{ModelLabel, WalkModel};
use crate::potentials::{
    ackley_field, bivariate_gaussian_field, delta_oracle_field, linear_field, rastrigin_field, GaussianParams,
    OracleSpec, PotentialField,
};
use crate::state::{GridGeometry, Vertex};

#[derive(Debug, Parser)]
#[command(name = "qwsearch", version, about = "Quantum walk search under phase potentials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Evolve once and write the success-probability series.
    Run,
    /// Peak success probability versus sigma.
    SigmaSweep,
    /// Peak success probability versus lambda = c * pi.
    LambdaSweep,
    /// Regime thresholds in sigma across grid sizes, with power-law fits.
    Thresholds,
    /// Model 1 against Model 2 on identical fields.
    CompareModels,
    /// Write the potential grid as plain text.
    FieldDump,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Run => "run",
            Command::SigmaSweep => "sigma-sweep",
            Command::LambdaSweep => "lambda-sweep",
            Command::Thresholds => "thresholds",
            Command::CompareModels => "compare-models",
            Command::FieldDump => "field-dump",
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// TOML experiment file; flags override its values.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Grid side length L.
    #[arg(long, global = true, value_name = "L")]
    pub grid: Option<usize>,
    #[arg(long, global = true)]
    pub sigma: Option<f64>,
    /// Peak height in units of pi.
    #[arg(long = "lambda-c", global = true, value_name = "C")]
    pub lambda_c: Option<f64>,
    #[arg(long, global = true)]
    pub rho: Option<f64>,
    #[arg(long = "mu-x", global = true)]
    pub mu_x: Option<f64>,
    #[arg(long = "mu-y", global = true)]
    pub mu_y: Option<f64>,
    /// Field strength of the linear potential.
    #[arg(long, global = true)]
    pub phi: Option<f64>,
    /// 1 (Grover, flip-flop, periodic) or 2 (Hadamard, standard, reflective).
    #[arg(long, global = true)]
    pub model: Option<u8>,
    /// gaussian, delta, linear, ackley, rastrigin or file:PATH.
    #[arg(long, global = true)]
    pub potential: Option<String>,
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    /// Peak window A:B, both ends inclusive.
    #[arg(long, global = true, value_name = "A:B")]
    pub window: Option<String>,
    #[arg(long, global = true, value_name = "X,Y")]
    pub target: Option<String>,
    /// csv or json.
    #[arg(long, global = true)]
    pub format: Option<String>,
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Worker threads for sweeps (0 = all cores).
    #[arg(long, global = true, value_name = "K")]
    pub jobs: Option<usize>,
}

/// Keys accepted in a config file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    grid: Option<Spanned<usize>>,
    sigma: Option<Spanned<f64>>,
    sigma_x: Option<Spanned<f64>>,
    sigma_y: Option<Spanned<f64>>,
    lambda_c: Option<Spanned<f64>>,
    rho: Option<Spanned<f64>>,
    mu_x: Option<Spanned<f64>>,
    mu_y: Option<Spanned<f64>>,
    phi: Option<Spanned<f64>>,
    model: Option<Spanned<u8>>,
    potential: Option<Spanned<String>>,
    steps: Option<Spanned<usize>>,
    window: Option<Spanned<[usize; 2]>>,
    target: Option<Spanned<[usize; 2]>>,
    format: Option<Spanned<String>>,
    out: Option<Spanned<String>>,
    jobs: Option<Spanned<usize>>,
    snapshots: Option<Spanned<Vec<usize>>>,
    grid_sizes: Option<Spanned<Vec<usize>>>,
    sigmas: Option<Spanned<Vec<f64>>>,
    sigma_min: Option<Spanned<f64>>,
    sigma_max: Option<Spanned<f64>>,
    per_decade: Option<Spanned<usize>>,
    c_values: Option<Spanned<Vec<f64>>>,
    epsilons: Option<Spanned<Vec<f64>>>,
    uniform_epsilon: Option<Spanned<f64>>,
}

/// Where a setting came from, for diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Origin {
    Default,
    Line(usize),
    Flag,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PotentialChoice {
    Gaussian,
    Delta,
    Linear,
    Ackley,
    Rastrigin,
    File(PathBuf),
}

impl std::str::FromStr for PotentialChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "gaussian" => PotentialChoice::Gaussian,
            "delta" => PotentialChoice::Delta,
            "linear" => PotentialChoice::Linear,
            "ackley" => PotentialChoice::Ackley,
            "rastrigin" => PotentialChoice::Rastrigin,
            other => match other.strip_prefix("file:") {
                Some(path) if !path.is_empty() => PotentialChoice::File(PathBuf::from(path)),
                _ => {
                    return Err(format!(
                        "unknown potential `{other}` (expected gaussian, delta, linear, ackley, rastrigin or file:PATH)"
                    ))
                }
            },
        })
    }
}

/// A fully defaulted, validated experiment description.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Experiment {
    pub grid: usize,
    pub sigma: Option<f64>,
    pub sigma_x: Option<f64>,
    pub sigma_y: Option<f64>,
    pub lambda_c: f64,
    pub rho: f64,
    pub mu_x: Option<f64>,
    pub mu_y: Option<f64>,
    pub phi: f64,
    pub model: ModelLabel,
    pub potential: PotentialChoice,
    pub steps: Option<usize>,
    pub window: Option<Window>,
    pub target: Option<Vertex>,
    pub format: Format,
    pub out: PathBuf,
    pub jobs: usize,
    pub snapshots: Vec<usize>,
    pub grid_sizes: Option<Vec<usize>>,
    pub sigmas: Option<Vec<f64>>,
    pub scan: ScanRange,
    pub c_values: Option<Vec<f64>>,
    pub epsilons: Vec<f64>,
    pub uniform_epsilon: f64,
}

impl Default for Experiment {
    fn default() -> Self {
        Experiment {
            grid: 100,
            sigma: None,
            sigma_x: None,
            sigma_y: None,
            lambda_c: 1.0,
            rho: 0.0,
            mu_x: None,
            mu_y: None,
            phi: PI / 8.0,
            model: ModelLabel::Model1,
            potential: PotentialChoice::Gaussian,
            steps: None,
            window: None,
            target: None,
            format: Format::Csv,
            out: PathBuf::from("out"),
            jobs: 0,
            snapshots: Vec::new(),
            grid_sizes: None,
            sigmas: None,
            scan: ScanRange::default(),
            c_values: None,
            epsilons: vec![0.9, 0.5, 0.1],
            uniform_epsilon: 0.5,
        }
    }
}

fn line_of(text: &str, span: Range<usize>) -> usize {
    text[..span.start.min(text.len())].matches('\n').count() + 1
}

/// Tracks each key's origin so validation errors can name a line or flag.
struct Builder<'a> {
    text: &'a str,
    exp: Experiment,
    origins: std::collections::HashMap<&'static str, Origin>,
}

impl<'a> Builder<'a> {
    fn file<T>(&mut self, key: &'static str, v: Option<Spanned<T>>) -> Option<T> {
        v.map(|s| {
            self.origins.insert(key, Origin::Line(line_of(self.text, s.span())));
            s.into_inner()
        })
    }

    fn flag<T>(&mut self, key: &'static str, v: Option<T>) -> Option<T> {
        if v.is_some() {
            self.origins.insert(key, Origin::Flag);
        }
        v
    }

    fn origin(&self, key: &str) -> Origin {
        self.origins.get(key).copied().unwrap_or(Origin::Default)
    }

    fn fail(&self, key: &str, message: impl Into<String>) -> Error {
        let message = message.into();
        match self.origin(key) {
            Origin::Line(line) => Error::Config { key: key.to_string(), line, message },
            Origin::Flag => Error::Usage(format!("--{}: {message}", key.replace('_', "-"))),
            Origin::Default => Error::Usage(format!("{key}: {message}")),
        }
    }
}

fn parse_window(s: &str) -> std::result::Result<Window, String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected A:B, got `{s}`"))?;
    let a = a.trim().parse().map_err(|_| format!("bad window start `{a}`"))?;
    let b = b.trim().parse().map_err(|_| format!("bad window end `{b}`"))?;
    Ok(Window::new(a, b))
}

fn parse_target(s: &str) -> std::result::Result<Vertex, String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected X,Y, got `{s}`"))?;
    let x = x.trim().parse().map_err(|_| format!("bad x coordinate `{x}`"))?;
    let y = y.trim().parse().map_err(|_| format!("bad y coordinate `{y}`"))?;
    Ok(Vertex::new(x, y))
}

fn parse_model(m: u8) -> std::result::Result<ModelLabel, String> {
    match m {
        1 => Ok(ModelLabel::Model1),
        2 => Ok(ModelLabel::Model2),
        other => Err(format!("model must be 1 or 2, got {other}")),
    }
}

/// Parses a config document (may be empty) and applies flag overrides.
pub fn parse_config(text: &str, flags: &Flags) -> Result<Experiment> {
    let file: ConfigFile = toml::from_str(text).map_err(|e| {
        let line = e.span().map_or(0, |s| line_of(text, s));
        let message = e.message().to_string();
        let key = message.split('`').nth(1).unwrap_or("<document>").to_string();
        Error::Config { key, line, message }
    })?;

    let mut b = Builder { text, exp: Experiment::default(), origins: Default::default() };

    // Scalars: file first, then flags on top.
    macro_rules! take {
        ($key:ident) => {{
            let from_file = b.file(stringify!($key), file.$key);
            b.flag(stringify!($key), flags.$key.clone()).or(from_file)
        }};
        ($key:ident, file_only) => {
            b.file(stringify!($key), file.$key)
        };
    }

    let grid = take!(grid);
    let sigma = take!(sigma);
    let sigma_x = take!(sigma_x, file_only);
    let sigma_y = take!(sigma_y, file_only);
    let lambda_c = take!(lambda_c);
    let rho = take!(rho);
    let mu_x = take!(mu_x);
    let mu_y = take!(mu_y);
    let phi = take!(phi);
    let model = take!(model);
    let file_potential = take!(potential, file_only);
    let potential = b.flag("potential", flags.potential.clone()).or(file_potential);
    let steps = take!(steps);
    let file_window = take!(window, file_only).map(|[a, e]| Window::new(a, e));
    let flag_window = b.flag("window", flags.window.clone());
    let file_target = take!(target, file_only).map(|[x, y]| Vertex::new(x, y));
    let flag_target = b.flag("target", flags.target.clone());
    let file_format = take!(format, file_only);
    let format = b.flag("format", flags.format.clone()).or(file_format);
    let file_out = take!(out, file_only).map(PathBuf::from);
    let out = b.flag("out", flags.out.clone()).or(file_out);
    let jobs = take!(jobs);
    let snapshots = take!(snapshots, file_only);
    let grid_sizes = take!(grid_sizes, file_only);
    let sigmas = take!(sigmas, file_only);
    let sigma_min = take!(sigma_min, file_only);
    let sigma_max = take!(sigma_max, file_only);
    let per_decade = take!(per_decade, file_only);
    let c_values = take!(c_values, file_only);
    let epsilons = take!(epsilons, file_only);
    let uniform_epsilon = take!(uniform_epsilon, file_only);

    if let Some(g) = grid {
        if g < 2 {
            return Err(b.fail("grid", format!("grid side must be at least 2, got {g}")));
        }
        b.exp.grid = g;
    }
    for (key, v) in [("sigma", sigma), ("sigma_x", sigma_x), ("sigma_y", sigma_y)] {
        if let Some(s) = v {
            if !(s > 0.0 && s.is_finite()) {
                return Err(b.fail(key, format!("must be positive, got {s}")));
            }
        }
    }
    b.exp.sigma = sigma;
    b.exp.sigma_x = sigma_x;
    b.exp.sigma_y = sigma_y;
    if let Some(c) = lambda_c {
        if !(c >= 0.0 && c.is_finite()) {
            return Err(b.fail("lambda_c", format!("must be nonnegative, got {c}")));
        }
        b.exp.lambda_c = c;
    }
    if let Some(r) = rho {
        if r.is_nan() || r.abs() >= 1.0 {
            return Err(b.fail("rho", format!("|rho| must be < 1, got {r}")));
        }
        b.exp.rho = r;
    }
    b.exp.mu_x = mu_x;
    b.exp.mu_y = mu_y;
    if let Some(p) = phi {
        b.exp.phi = p;
    }
    if let Some(m) = model {
        b.exp.model = parse_model(m).map_err(|e| b.fail("model", e))?;
    }
    if let Some(p) = potential {
        b.exp.potential = p.parse().map_err(|e: String| b.fail("potential", e))?;
    }
    b.exp.steps = steps;
    b.exp.window = match flag_window {
        Some(w) => Some(parse_window(&w).map_err(|e| b.fail("window", e))?),
        None => file_window,
    };
    if let Some(w) = b.exp.window {
        if w.start > w.end {
            return Err(b.fail("window", format!("start {} exceeds end {}", w.start, w.end)));
        }
    }
    b.exp.target = match flag_target {
        Some(t) => Some(parse_target(&t).map_err(|e| b.fail("target", e))?),
        None => file_target,
    };
    if let Some(t) = b.exp.target {
        if t.x >= b.exp.grid || t.y >= b.exp.grid {
            return Err(b.fail("target", format!("({}, {}) lies outside the {g}x{g} grid", t.x, t.y, g = b.exp.grid)));
        }
    }
    if let Some(f) = format {
        b.exp.format = f.parse().map_err(|e: String| b.fail("format", e))?;
    }
    if let Some(o) = out {
        b.exp.out = o;
    }
    if let Some(j) = jobs {
        b.exp.jobs = j;
    }
    b.exp.snapshots = snapshots.unwrap_or_default();
    if let Some(sizes) = &grid_sizes {
        if sizes.is_empty() || sizes.iter().any(|&s| s < 2) {
            return Err(b.fail("grid_sizes", "every grid size must be at least 2"));
        }
    }
    b.exp.grid_sizes = grid_sizes;
    if let Some(list) = &sigmas {
        if list.is_empty() || list.iter().any(|s| !(*s > 0.0 && s.is_finite())) {
            return Err(b.fail("sigmas", "every sigma must be positive"));
        }
    }
    b.exp.sigmas = sigmas;
    if let Some(v) = sigma_min {
        b.exp.scan.min = v;
    }
    if let Some(v) = sigma_max {
        b.exp.scan.max = v;
    }
    if let Some(v) = per_decade {
        b.exp.scan.per_decade = v;
    }
    if !(b.exp.scan.min > 0.0 && b.exp.scan.max >= b.exp.scan.min && b.exp.scan.per_decade > 0) {
        return Err(b.fail("sigma_min", "scan range must satisfy 0 < sigma_min <= sigma_max, per_decade > 0"));
    }
    if let Some(list) = &c_values {
        if list.is_empty() || list.iter().any(|c| !(*c >= 0.0 && c.is_finite())) {
            return Err(b.fail("c_values", "every c must be nonnegative"));
        }
    }
    b.exp.c_values = c_values;
    if let Some(list) = epsilons {
        if list.is_empty() || list.iter().any(|e| !(*e > 0.0 && *e < 1.0)) {
            return Err(b.fail("epsilons", "every epsilon must lie in (0, 1)"));
        }
        b.exp.epsilons = list;
    }
    if let Some(e) = uniform_epsilon {
        if !(0.0..1.0).contains(&e) {
            return Err(b.fail("uniform_epsilon", "must lie in [0, 1)"));
        }
        b.exp.uniform_epsilon = e;
    }

    // Cross-key conflicts.
    let gaussian_keys = ["sigma", "sigma_x", "sigma_y", "rho", "mu_x", "mu_y"];
    if b.exp.potential != PotentialChoice::Gaussian {
        if let Some(key) = gaussian_keys.iter().find(|k| b.origin(k) != Origin::Default) {
            return Err(b.fail(key, format!("only applies to the gaussian potential, not {:?}", b.exp.potential)));
        }
    }
    if let (Some(steps), Some(w)) = (b.exp.steps, b.exp.window) {
        if w.end > steps {
            return Err(b.fail("window", format!("window end {} exceeds steps {steps}", w.end)));
        }
    }
    let last_step = b.exp.steps.or(b.exp.window.map(|w| w.end)).unwrap_or(3 * b.exp.grid);
    if let Some(s) = b.exp.snapshots.iter().find(|&&s| s > last_step) {
        return Err(b.fail("snapshots", format!("snapshot {s} falls after the last step {last_step}")));
    }
    Ok(b.exp)
}

pub fn load_experiment(flags: &Flags) -> Result<Experiment> {
    let text = match &flags.config {
        Some(path) => fs::read_to_string(path).map_err(|e| Error::io(path, e))?,
        None => String::new(),
    };
    parse_config(&text, flags)
}

impl Experiment {
    pub fn geometry(&self) -> Result<GridGeometry> {
        GridGeometry::new(self.grid)
    }

    pub fn target(&self) -> Result<Vertex> {
        Ok(self.target.unwrap_or(self.geometry()?.center()))
    }

    pub fn window(&self) -> Result<Window> {
        Ok(self.window.unwrap_or(Window::default_for(self.geometry()?)))
    }

    pub fn window_policy(&self) -> WindowPolicy {
        self.window.map_or(WindowPolicy::ThreeSide, WindowPolicy::Fixed)
    }

    pub fn walk_model(&self) -> WalkModel {
        WalkModel::from_label(self.model).expect("model1 or model2")
    }

    pub fn gaussian_params(&self, sigma: f64) -> Result<GaussianParams> {
        let mut p = GaussianParams::centered(self.geometry()?, sigma, self.lambda_c * PI)?;
        p.sigma_x = self.sigma_x.unwrap_or(sigma);
        p.sigma_y = self.sigma_y.unwrap_or(sigma);
        p.rho = self.rho;
        p.mu_x = self.mu_x.unwrap_or(p.mu_x);
        p.mu_y = self.mu_y.unwrap_or(p.mu_y);
        p.validate()?;
        Ok(p)
    }

    pub fn field(&self) -> Result<PotentialField> {
        let g = self.geometry()?;
        let lambda = self.lambda_c * PI;
        match &self.potential {
            PotentialChoice::Gaussian => {
                let sigma = self.sigma.or(self.sigma_x.zip(self.sigma_y).map(|(x, _)| x)).ok_or_else(|| {
                    Error::Usage("the gaussian potential needs --sigma (or sigma in the config)".into())
                })?;
                bivariate_gaussian_field(g, &self.gaussian_params(sigma)?)
            }
            PotentialChoice::Delta => {
                delta_oracle_field(g, &OracleSpec { marked: vec![self.target()?], phase: lambda })
            }
            PotentialChoice::Linear => linear_field(g, self.phi),
            PotentialChoice::Ackley => ackley_field(g, lambda),
            PotentialChoice::Rastrigin => rastrigin_field(g, lambda),
            PotentialChoice::File(path) => {
                let f = PotentialField::load(path)?;
                if f.geometry() != g {
                    return Err(Error::Usage(format!(
                        "{} holds a {}x{} grid but --grid is {}",
                        path.display(),
                        f.geometry().side(),
                        f.geometry().side(),
                        self.grid
                    )));
                }
                Ok(f)
            }
        }
    }

    pub fn evolution_config(&self) -> Result<EvolutionConfig> {
        let window = self.window()?;
        // Without an explicit step count the run stops at the window end.
        let steps = self.steps.unwrap_or(window.end).max(window.end);
        Ok(EvolutionConfig::new(self.walk_model(), self.field()?, self.target()?)
            .with_window(window)
            .with_steps(steps)
            .with_snapshots(self.snapshots.clone()))
    }

    fn output(&self, stem: &str) -> PathBuf {
        self.out.join(format!("{stem}.{}", self.format.extension()))
    }
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct ProfileRecord {
    pub grid_side: usize,
    pub sigma: f64,
    pub p_max: f64,
    pub p_akr: f64,
    pub p_uniform: f64,
}

/// Executes one command; returns the files written.
pub fn execute(command: Command, exp: &Experiment) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(&exp.out).map_err(|e| Error::io(&exp.out, e))?;
    let mut written = Vec::new();
    match command {
        Command::Run => {
            let config = exp.evolution_config()?;
            let record = run(&config)?;
            let path = exp.output("series");
            io::emit_series(&record.success_series, exp.format, &path)?;
            written.push(path);
            for snap in &record.snapshots {
                let path = exp.output(&format!("distribution_t{}", snap.time_step()));
                io::emit_distribution(snap, exp.format, &path)?;
                written.push(path);
            }
            println!(
                "peak p_max = {} at t = {} (window [{}, {}], p_uniform = {})",
                record.peak.probability,
                record.peak.step,
                record.window.start,
                record.window.end,
                1.0 / (exp.grid * exp.grid) as f64
            );
        }
        Command::SigmaSweep => {
            let spec = SweepSpec {
                grid_sizes: exp.grid_sizes.clone().unwrap_or_else(|| vec![exp.grid]),
                sigmas: exp.sigmas.clone().unwrap_or_else(|| exp.scan.sigmas()),
                c_values: exp.c_values.clone().unwrap_or_else(|| vec![exp.lambda_c]),
                models: vec![exp.model],
                window: exp.window_policy(),
                jobs: exp.jobs,
            };
            written.push(write_table(exp, &spec, "sigma_sweep")?);
        }
        Command::LambdaSweep => {
            let default_sigmas = vec![0.01, 0.1, 0.2, 0.3, 0.4, 0.5];
            let spec = SweepSpec {
                grid_sizes: vec![exp.grid],
                sigmas: exp.sigmas.clone().or(exp.sigma.map(|s| vec![s])).unwrap_or(default_sigmas),
                c_values: exp.c_values.clone().unwrap_or_else(|| (0..=40).map(|i| i as f64 / 20.0).collect()),
                models: vec![exp.model],
                window: exp.window_policy(),
                jobs: exp.jobs,
            };
            written.push(write_table(exp, &spec, "lambda_sweep")?);
        }
        Command::CompareModels => {
            let spec = SweepSpec {
                grid_sizes: vec![exp.grid],
                sigmas: exp.sigmas.clone().or(exp.sigma.map(|s| vec![s])).unwrap_or_else(|| exp.scan.sigmas()),
                c_values: exp.c_values.clone().unwrap_or_else(|| vec![exp.lambda_c]),
                models: vec![ModelLabel::Model1, ModelLabel::Model2],
                window: WindowPolicy::Fixed(exp.window.unwrap_or(Window::new(0, 300))),
                jobs: exp.jobs,
            };
            written.push(write_table(exp, &spec, "compare_models")?);
        }
        Command::Thresholds => {
            let sizes = exp.grid_sizes.clone().unwrap_or_else(|| (1..=10).map(|k| 20 * k).collect());
            let profiles = sigma_profiles(&sizes, &exp.scan, exp.window_policy(), exp.jobs)?;
            let mut results = Vec::new();
            for &eps in &exp.epsilons {
                results.push(threshold_scaling(
                    &profiles,
                    ThresholdCriterion::BelowFractionOfAkr,
                    eps,
                    exp.scan.relative_width,
                    exp.jobs,
                )?);
            }
            results.push(threshold_scaling(
                &profiles,
                ThresholdCriterion::CloseToUniform,
                exp.uniform_epsilon,
                exp.scan.relative_width,
                exp.jobs,
            )?);
            io::emit_thresholds(&results, exp.format, &exp.out)?;
            let records: Vec<ProfileRecord> = profiles
                .iter()
                .flat_map(|p| {
                    p.points.iter().map(move |&(sigma, p_max)| ProfileRecord {
                        grid_side: p.grid_side,
                        sigma,
                        p_max,
                        p_akr: p.p_akr,
                        p_uniform: p.p_uniform,
                    })
                })
                .collect();
            let path = exp.output("profiles");
            match exp.format {
                Format::Csv => io::write_csv(&path, &records)?,
                Format::Json => io::write_json(&path, &records)?,
            }
            written.push(path);
            for r in &results {
                match &r.fit {
                    Some(fit) => println!(
                        "{} eps={}: sigma* ~ N^{} (prefactor {}, rms log residual {}, {} sizes, {} not found)",
                        r.criterion,
                        r.epsilon,
                        fit.exponent,
                        fit.prefactor,
                        fit.residual,
                        r.thresholds.len(),
                        r.not_found.len()
                    ),
                    None => println!(
                        "{} eps={}: no fit ({})",
                        r.criterion,
                        r.epsilon,
                        r.fit_error.as_deref().unwrap_or("unknown")
                    ),
                }
            }
        }
        Command::FieldDump => {
            let path = exp.out.join("field.txt");
            io::emit_field(&exp.field()?, &path)?;
            written.push(path);
        }
    }
    Ok(written)
}

fn write_table(exp: &Experiment, spec: &SweepSpec, stem: &str) -> Result<PathBuf> {
    let table = sweep(spec)?;
    for f in &table.failures {
        eprintln!("warning: L={} sigma={} c={} {}: {}", f.grid_side, f.sigma, f.c, f.model, f.message);
    }
    let path = exp.output(stem);
    io::emit_table(&table, exp.format, &path)?;
    Ok(path)
}

/// Entry point used by the binary. Exit codes: 0 success, 1 usage error,
/// 2 runtime failure.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let outcome = load_experiment(&cli.flags).and_then(|exp| execute(cli.command, &exp));
    match outcome {
        Ok(files) => {
            for f in files {
                eprintln!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("qwsearch {}: {e}", cli.command.name());
            ExitCode::from(if e.is_usage() { 1 } else { 2 })
        }
    }
}

/// Helper for callers that already hold a path to a config file.
pub fn experiment_from_file(path: &Path) -> Result<Experiment> {
    load_experiment(&Flags { config: Some(path.to_path_buf()), ..Flags::default() })
}
