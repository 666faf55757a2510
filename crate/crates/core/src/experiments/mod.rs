//! Parameter sweeps, regime thresholds and scaling fits built on [`crate::engine`].
//!
//! Sweep rows are independent runs executed on a bounded rayon pool; results
//! are always returned in `(L, sigma, c, model)` order regardless of which
//! worker finished first.

mod fit;
mod sweep;
mod threshold;

pub use fit::{fit_power_law, PowerLawFit};
pub use sweep::{
    akr_peak, best_c, compare_models, gaussian_peak, lambda_sweep, log_spaced, sigma_sweep, sweep, SweepFailure,
    SweepRow, SweepSpec, SweepTable, TableMetadata, WindowPolicy,
};
pub use threshold::{
    find_sigma_below_akr, find_sigma_near_uniform, find_threshold, sigma_profiles, threshold_scaling, Certificate,
    ScalingResult, ScanRange, SigmaProfile, ThresholdCriterion, ThresholdResult, CERTIFICATE_RATIO,
};
