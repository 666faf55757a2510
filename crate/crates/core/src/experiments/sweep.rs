use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{run, EvolutionConfig, Peak, Window};
use crate::error::{Error, Result};
use crate::operators::{ModelLabel, WalkModel};
use crate::potentials::{bivariate_gaussian_field, delta_oracle_field, GaussianParams, OracleSpec};
use crate::state::GridGeometry;

/// How the peak window is chosen for each run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum WindowPolicy {
    /// `[0, 3L]`.
    #[default]
    ThreeSide,
    Fixed(Window),
}

impl WindowPolicy {
    pub fn window_for(&self, geometry: GridGeometry) -> Window {
        match self {
            WindowPolicy::ThreeSide => Window::default_for(geometry),
            WindowPolicy::Fixed(w) => *w,
        }
    }
}

/// Cartesian product of grid sizes, widths, peak heights `c * pi` and models.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub grid_sizes: Vec<usize>,
    pub sigmas: Vec<f64>,
    pub c_values: Vec<f64>,
    pub models: Vec<ModelLabel>,
    pub window: WindowPolicy,
    /// Worker threads; 0 uses every core.
    pub jobs: usize,
}

impl SweepSpec {
    /// Model 1 at `lambda = pi` on the default window.
    pub fn sigma_sweep(grid_sizes: Vec<usize>, sigmas: Vec<f64>) -> Self {
        SweepSpec {
            grid_sizes,
            sigmas,
            c_values: vec![1.0],
            models: vec![ModelLabel::Model1],
            window: WindowPolicy::ThreeSide,
            jobs: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidSweep(m.to_string()));
        if self.grid_sizes.is_empty() || self.sigmas.is_empty() || self.c_values.is_empty() || self.models.is_empty() {
            return bad("grid sizes, sigmas, c values and models must all be nonempty");
        }
        if self.sigmas.iter().any(|s| !(*s > 0.0 && s.is_finite())) {
            return bad("every sigma must be positive and finite");
        }
        if self.c_values.iter().any(|c| !(*c >= 0.0 && c.is_finite())) {
            return bad("every c must be nonnegative and finite");
        }
        if self.models.contains(&ModelLabel::Custom) {
            return bad("sweeps support model1 and model2 only");
        }
        for &side in &self.grid_sizes {
            GridGeometry::new(side)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub grid_side: usize,
    pub sigma: f64,
    pub c: f64,
    pub model: ModelLabel,
    pub peak_step: usize,
    pub p_max: f64,
    /// `1 / N`.
    pub p_uniform: f64,
    /// Peak of the delta-oracle AKR run on the same grid and window.
    pub p_akr: f64,
}

/// A row whose run failed; the sweep carries on without it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepFailure {
    pub grid_side: usize,
    pub sigma: f64,
    pub c: f64,
    pub model: ModelLabel,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableMetadata {
    pub generated_unix_secs: u64,
    pub code_version: String,
}

impl TableMetadata {
    pub fn now() -> Self {
        let generated_unix_secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        TableMetadata { generated_unix_secs, code_version: env!("CARGO_PKG_VERSION").to_string() }
    }
}

/// Sweep results, sorted by `(L, sigma, c, model)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub metadata: TableMetadata,
    pub rows: Vec<SweepRow>,
    pub failures: Vec<SweepFailure>,
}

impl SweepTable {
    pub fn find(&self, grid_side: usize, sigma: f64, c: f64, model: ModelLabel) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.grid_side == grid_side && r.sigma == sigma && r.c == c && r.model == model)
    }

    pub fn rows_for(&self, model: ModelLabel) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(move |r| r.model == model)
    }
}

pub(crate) fn thread_pool(jobs: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("thread pool")
}

/// `n` points per decade from `min` to `max`, both included.
pub fn log_spaced(min: f64, max: f64, per_decade: usize) -> Vec<f64> {
    assert!(min > 0.0 && max >= min && per_decade > 0);
    let (lo, hi) = (min.log10(), max.log10());
    let steps = ((hi - lo) * per_decade as f64).round() as usize;
    if steps == 0 {
        return vec![min];
    }
    (0..=steps).map(|i| 10f64.powf(lo + (hi - lo) * i as f64 / steps as f64)).collect()
}

/// Peak success probability at the grid center for a centered Gaussian
/// field of width `sigma` and height `c * pi`.
pub fn gaussian_peak(side: usize, sigma: f64, c: f64, model: ModelLabel, window: Window) -> Result<Peak> {
    let geometry = GridGeometry::new(side)?;
    let params = GaussianParams::centered(geometry, sigma, c * PI)?;
    let field = bivariate_gaussian_field(geometry, &params)?;
    let model = WalkModel::from_label(model).ok_or_else(|| Error::InvalidSweep("custom model".into()))?;
    let config = EvolutionConfig::new(model, field, geometry.center()).with_window(window);
    Ok(run(&config)?.peak)
}

/// Peak of the ideal AKR search (delta oracle of phase `pi` at the center).
pub fn akr_peak(side: usize, window: Window) -> Result<Peak> {
    let geometry = GridGeometry::new(side)?;
    let field = delta_oracle_field(geometry, &OracleSpec::single(geometry.center()))?;
    let config = EvolutionConfig::new(WalkModel::model1(), field, geometry.center()).with_window(window);
    Ok(run(&config)?.peak)
}

fn sort_key(a: (usize, f64, f64, ModelLabel), b: (usize, f64, f64, ModelLabel)) -> std::cmp::Ordering {
    a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.total_cmp(&b.2)).then(a.3.cmp(&b.3))
}

/// Runs every point of `spec` on a bounded pool.
pub fn sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let pool = thread_pool(spec.jobs);

    let mut sizes = spec.grid_sizes.clone();
    sizes.sort_unstable();
    sizes.dedup();
    let akr: BTreeMap<usize, Result<Peak>> = pool
        .install(|| {
            sizes
                .par_iter()
                .map(|&side| {
                    let window = spec.window.window_for(GridGeometry::new(side)?);
                    Ok((side, akr_peak(side, window)))
                })
                .collect::<Result<Vec<_>>>()
        })?
        .into_iter()
        .collect();

    let mut points = Vec::new();
    for &side in &sizes {
        for &sigma in &spec.sigmas {
            for &c in &spec.c_values {
                for &model in &spec.models {
                    points.push((side, sigma, c, model));
                }
            }
        }
    }
    points.sort_by(|a, b| sort_key(*a, *b));
    points.dedup();

    let outcomes: Vec<_> = pool.install(|| {
        points
            .par_iter()
            .map(|&(side, sigma, c, model)| {
                let window = spec.window.window_for(GridGeometry::new(side)?);
                let p_akr = match &akr[&side] {
                    Ok(p) => p.probability,
                    Err(e) => return Err(Error::InvalidSweep(format!("AKR reference failed: {e}"))),
                };
                let peak = gaussian_peak(side, sigma, c, model, window)?;
                Ok(SweepRow {
                    grid_side: side,
                    sigma,
                    c,
                    model,
                    peak_step: peak.step,
                    p_max: peak.probability,
                    p_uniform: 1.0 / (side * side) as f64,
                    p_akr,
                })
            })
            .collect()
    });

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (outcome, &(grid_side, sigma, c, model)) in outcomes.into_iter().zip(&points) {
        match outcome {
            Ok(row) => rows.push(row),
            Err(e) => failures.push(SweepFailure { grid_side, sigma, c, model, message: e.to_string() }),
        }
    }
    Ok(SweepTable { metadata: TableMetadata::now(), rows, failures })
}

/// Model 1 peaks versus `sigma` at fixed `lambda = c pi`.
pub fn sigma_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    sweep(spec)
}

/// Peaks versus `c` on a single grid, one curve per `sigma`.
pub fn lambda_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    if spec.grid_sizes.len() != 1 {
        return Err(Error::InvalidSweep("a lambda sweep uses exactly one grid size".into()));
    }
    sweep(spec)
}

/// Model 1 and Model 2 on identical fields over the window `[0, 300]`.
pub fn compare_models(side: usize, sigmas: &[f64], c_values: &[f64], jobs: usize) -> Result<SweepTable> {
    sweep(&SweepSpec {
        grid_sizes: vec![side],
        sigmas: sigmas.to_vec(),
        c_values: c_values.to_vec(),
        models: vec![ModelLabel::Model1, ModelLabel::Model2],
        window: WindowPolicy::Fixed(Window::new(0, 300)),
        jobs,
    })
}

/// `c` maximizing `p_max` for one `(L, sigma, model)` curve; ties go to the
/// smaller `c`.
pub fn best_c(table: &SweepTable, side: usize, sigma: f64, model: ModelLabel) -> Option<(f64, f64)> {
    table.rows.iter().filter(|r| r.grid_side == side && r.sigma == sigma && r.model == model).fold(
        None,
        |best: Option<(f64, f64)>, r| match best {
            Some((_, p)) if p >= r.p_max => best,
            _ => Some((r.c, r.p_max)),
        },
    )
}
