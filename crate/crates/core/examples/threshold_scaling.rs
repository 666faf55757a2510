//! Thresholds in sigma across grid sizes and their power-law fits in N = L^2.
//! Uses a coarser scan than the acceptance run by default.
//!
//!     cargo run --release --example threshold_scaling [MAX_L] [POINTS_PER_DECADE]

use qwsearch::experiments::{sigma_profiles, threshold_scaling, ScanRange, ThresholdCriterion, WindowPolicy};

fn main() -> qwsearch::Result<()> {
    let mut args = std::env::args().skip(1);
    let max_side: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(100);
    let per_decade: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(10);
    let sizes: Vec<usize> = (20..=max_side).step_by(20).collect();
    let range = ScanRange { per_decade, ..ScanRange::default() };

    let profiles = sigma_profiles(&sizes, &range, WindowPolicy::ThreeSide, 0)?;
    let cases = [
        (ThresholdCriterion::BelowFractionOfAkr, 0.9),
        (ThresholdCriterion::BelowFractionOfAkr, 0.5),
        (ThresholdCriterion::BelowFractionOfAkr, 0.1),
        (ThresholdCriterion::CloseToUniform, 0.5),
    ];
    for (criterion, eps) in cases {
        let s = threshold_scaling(&profiles, criterion, eps, range.relative_width, 0)?;
        println!("{criterion} eps={eps}");
        for t in &s.thresholds {
            let flag = if t.non_monotone { "  (re-crosses later)" } else { "" };
            println!("  L={:>4}  sigma*={:>10.4}{flag}", t.grid_side, t.sigma_star);
        }
        match s.fit {
            Some(f) => {
                println!("  sigma* ~ {:.4} N^{:.4}  (rms log residual {:.4})", f.prefactor, f.exponent, f.residual)
            }
            None => println!("  no fit: {}", s.fit_error.unwrap_or_default()),
        }
    }
    Ok(())
}
