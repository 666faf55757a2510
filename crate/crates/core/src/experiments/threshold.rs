//! Regime thresholds in `sigma`: where the peak falls below a fraction of the
//! AKR peak, and where it comes within `epsilon` of the uniform probability.
//!
//! Each grid size is scanned once on a log-spaced `sigma` grid (a
//! [`SigmaProfile`]). A threshold is the first scanned crossing, refined by
//! log-space bisection between the last failing and first passing point.
//! Later points that fail again do not move the threshold; they set
//! [`ThresholdResult::non_monotone`].

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fit::{fit_power_law, PowerLawFit};
use super::sweep::{akr_peak, gaussian_peak, log_spaced, thread_pool, WindowPolicy};
use crate::engine::Window;
use crate::error::{Error, Result};
use crate::operators::ModelLabel;
use crate::state::GridGeometry;

/// Ratio between `sigma*` and the point the certificate checks below it.
pub const CERTIFICATE_RATIO: f64 = 1.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdCriterion {
    /// `p_max(sigma) <= epsilon * p_akr`.
    BelowFractionOfAkr,
    /// `1 - p_u / p_max(sigma) <= epsilon`.
    CloseToUniform,
}

impl ThresholdCriterion {
    pub fn holds(&self, p_max: f64, p_akr: f64, p_uniform: f64, epsilon: f64) -> bool {
        match self {
            ThresholdCriterion::BelowFractionOfAkr => p_max <= epsilon * p_akr,
            ThresholdCriterion::CloseToUniform => 1.0 - p_uniform / p_max <= epsilon,
        }
    }
}

impl fmt::Display for ThresholdCriterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThresholdCriterion::BelowFractionOfAkr => f.write_str("below-akr"),
            ThresholdCriterion::CloseToUniform => f.write_str("near-uniform"),
        }
    }
}

/// Log-spaced scan plus the bisection stopping width.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRange {
    pub min: f64,
    pub max: f64,
    pub per_decade: usize,
    /// Bisection stops once `hi / lo <= 1 + relative_width`.
    pub relative_width: f64,
}

impl Default for ScanRange {
    fn default() -> Self {
        ScanRange { min: 1e-2, max: 1e4, per_decade: 40, relative_width: 1e-2 }
    }
}

impl ScanRange {
    pub fn sigmas(&self) -> Vec<f64> {
        log_spaced(self.min, self.max, self.per_decade)
    }

    fn validate(&self) -> Result<()> {
        if !(self.min > 0.0 && self.max >= self.min && self.max.is_finite() && self.per_decade > 0) {
            return Err(Error::InvalidSweep(format!("bad scan range [{}, {}]", self.min, self.max)));
        }
        if self.relative_width.is_nan() || self.relative_width <= 0.0 {
            return Err(Error::InvalidSweep("bisection width must be positive".into()));
        }
        Ok(())
    }
}

/// Model 1 peak probability versus `sigma` at `lambda = pi` on one grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SigmaProfile {
    pub grid_side: usize,
    pub window: Window,
    pub p_akr: f64,
    pub p_uniform: f64,
    /// `(sigma, p_max)`, ascending in `sigma`.
    pub points: Vec<(f64, f64)>,
}

impl SigmaProfile {
    fn peak(&self, sigma: f64) -> Result<f64> {
        Ok(gaussian_peak(self.grid_side, sigma, 1.0, ModelLabel::Model1, self.window)?.probability)
    }
}

/// Scans every grid size over `range` on one pool of `jobs` workers.
pub fn sigma_profiles(
    sizes: &[usize],
    range: &ScanRange,
    window: WindowPolicy,
    jobs: usize,
) -> Result<Vec<SigmaProfile>> {
    range.validate()?;
    let sigmas = range.sigmas();
    let windows: Vec<Window> =
        sizes.iter().map(|&s| Ok(window.window_for(GridGeometry::new(s)?))).collect::<Result<_>>()?;
    let pool = thread_pool(jobs);

    let akr: Vec<f64> = pool.install(|| {
        sizes.par_iter().zip(&windows).map(|(&side, &w)| Ok(akr_peak(side, w)?.probability)).collect::<Result<_>>()
    })?;

    let jobs_list: Vec<(usize, f64)> = (0..sizes.len()).flat_map(|i| sigmas.iter().map(move |&s| (i, s))).collect();
    let peaks: Vec<f64> = pool.install(|| {
        jobs_list
            .par_iter()
            .map(|&(i, sigma)| Ok(gaussian_peak(sizes[i], sigma, 1.0, ModelLabel::Model1, windows[i])?.probability))
            .collect::<Result<_>>()
    })?;

    Ok(sizes
        .iter()
        .enumerate()
        .map(|(i, &side)| SigmaProfile {
            grid_side: side,
            window: windows[i],
            p_akr: akr[i],
            p_uniform: 1.0 / (side * side) as f64,
            points: sigmas
                .iter()
                .copied()
                .zip(peaks[i * sigmas.len()..(i + 1) * sigmas.len()].iter().copied())
                .collect(),
        })
        .collect())
}

/// Evaluations at `sigma* / 1.05` and `sigma*` that make a threshold auditable.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub sigma_below: f64,
    pub p_max_below: f64,
    pub fails_below: bool,
    pub holds_at_star: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub grid_side: usize,
    pub criterion: ThresholdCriterion,
    pub epsilon: f64,
    pub sigma_star: f64,
    pub p_max_at_star: f64,
    /// Largest `sigma` known to fail the criterion; `None` when it already
    /// holds at the bottom of the scan.
    pub last_failing_sigma: Option<f64>,
    pub certificate: Certificate,
    /// Some scanned `sigma > sigma*` fails the criterion again.
    pub non_monotone: bool,
    pub p_akr: f64,
    pub p_uniform: f64,
}

/// First crossing of `criterion` in `profile`, refined by bisection.
pub fn find_threshold(
    profile: &SigmaProfile,
    criterion: ThresholdCriterion,
    epsilon: f64,
    relative_width: f64,
) -> Result<ThresholdResult> {
    check_epsilon(criterion, epsilon)?;
    let holds = |p: f64| criterion.holds(p, profile.p_akr, profile.p_uniform, epsilon);
    let first = profile.points.iter().position(|&(_, p)| holds(p)).ok_or_else(|| Error::ThresholdNotFound {
        grid_side: profile.grid_side,
        criterion: criterion.to_string(),
        min: profile.points.first().map_or(f64::NAN, |p| p.0),
        max: profile.points.last().map_or(f64::NAN, |p| p.0),
    })?;

    let (mut hi, mut p_hi) = profile.points[first];
    let mut lo = if first > 0 { Some(profile.points[first - 1].0) } else { None };
    if let Some(mut low) = lo {
        while hi / low > 1.0 + relative_width {
            let mid = (low * hi).sqrt();
            let p = profile.peak(mid)?;
            if holds(p) {
                hi = mid;
                p_hi = p;
            } else {
                low = mid;
            }
        }
        lo = Some(low);
    }

    let sigma_below = hi / CERTIFICATE_RATIO;
    let p_max_below = profile.peak(sigma_below)?;
    let certificate =
        Certificate { sigma_below, p_max_below, fails_below: !holds(p_max_below), holds_at_star: holds(p_hi) };
    let non_monotone = profile.points[first + 1..].iter().any(|&(_, p)| !holds(p));

    Ok(ThresholdResult {
        grid_side: profile.grid_side,
        criterion,
        epsilon,
        sigma_star: hi,
        p_max_at_star: p_hi,
        last_failing_sigma: lo,
        certificate,
        non_monotone,
        p_akr: profile.p_akr,
        p_uniform: profile.p_uniform,
    })
}

fn check_epsilon(criterion: ThresholdCriterion, epsilon: f64) -> Result<()> {
    let ok = match criterion {
        // epsilon >= 1 holds trivially wherever the walk tracks AKR.
        ThresholdCriterion::BelowFractionOfAkr => epsilon > 0.0 && epsilon < 1.0,
        ThresholdCriterion::CloseToUniform => (0.0..1.0).contains(&epsilon),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidSweep(format!("epsilon {epsilon} out of range for the {criterion} criterion")))
    }
}

/// Smallest `sigma` with `p_max(sigma) <= epsilon * p_akr` on an `L x L` grid.
pub fn find_sigma_below_akr(side: usize, epsilon: f64, range: &ScanRange, jobs: usize) -> Result<ThresholdResult> {
    check_epsilon(ThresholdCriterion::BelowFractionOfAkr, epsilon)?;
    let profile = sigma_profiles(&[side], range, WindowPolicy::ThreeSide, jobs)?.remove(0);
    find_threshold(&profile, ThresholdCriterion::BelowFractionOfAkr, epsilon, range.relative_width)
}

/// Smallest `sigma` with `1 - p_u / p_max(sigma) <= epsilon`.
pub fn find_sigma_near_uniform(side: usize, epsilon: f64, range: &ScanRange, jobs: usize) -> Result<ThresholdResult> {
    check_epsilon(ThresholdCriterion::CloseToUniform, epsilon)?;
    let profile = sigma_profiles(&[side], range, WindowPolicy::ThreeSide, jobs)?.remove(0);
    find_threshold(&profile, ThresholdCriterion::CloseToUniform, epsilon, range.relative_width)
}

/// Thresholds across grid sizes and the fit `sigma* ~ N^a`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingResult {
    pub criterion: ThresholdCriterion,
    pub epsilon: f64,
    pub thresholds: Vec<ThresholdResult>,
    /// Grid sizes where the criterion was never met.
    pub not_found: Vec<usize>,
    pub fit: Option<PowerLawFit>,
    pub fit_error: Option<String>,
}

impl ScalingResult {
    /// `(N, sigma*)` pairs fed to the fit.
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.thresholds.iter().map(|t| ((t.grid_side * t.grid_side) as f64, t.sigma_star)).collect()
    }
}

/// Thresholds for each profile, bisected in parallel, then fitted.
pub fn threshold_scaling(
    profiles: &[SigmaProfile],
    criterion: ThresholdCriterion,
    epsilon: f64,
    relative_width: f64,
    jobs: usize,
) -> Result<ScalingResult> {
    check_epsilon(criterion, epsilon)?;
    let outcomes: Vec<Result<ThresholdResult>> = thread_pool(jobs)
        .install(|| profiles.par_iter().map(|p| find_threshold(p, criterion, epsilon, relative_width)).collect());
    let mut thresholds = Vec::new();
    let mut not_found = Vec::new();
    for (outcome, profile) in outcomes.into_iter().zip(profiles) {
        match outcome {
            Ok(t) => thresholds.push(t),
            Err(Error::ThresholdNotFound { .. }) => not_found.push(profile.grid_side),
            Err(e) => return Err(e),
        }
    }
    let mut result = ScalingResult { criterion, epsilon, thresholds, not_found, fit: None, fit_error: None };
    match fit_power_law(&result.points()) {
        Ok(fit) => result.fit = Some(fit),
        Err(e) => result.fit_error = Some(e.to_string()),
    }
    Ok(result)
}
