//! Position distribution at the moment of peak success, summarized by how
//! much probability sits within a few sites of the target.
//!
//!     cargo run --release --example peak_distributions [SIGMA...]

use std::f64::consts::PI;

use qwsearch::{bivariate_gaussian_field, run, EvolutionConfig, GaussianParams, GridGeometry, WalkModel};

fn main() -> qwsearch::Result<()> {
    let mut sigmas: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    if sigmas.is_empty() {
        sigmas = vec![0.35, 0.4, 50.0];
    }
    let g = GridGeometry::new(100)?;
    let target = g.center();
    for sigma in sigmas {
        let field = bivariate_gaussian_field(g, &GaussianParams::centered(g, sigma, PI)?)?;
        let config = EvolutionConfig::new(WalkModel::model1(), field.clone(), target);
        let peak = run(&config)?.peak;
        let snap = &run(&config.with_snapshots(vec![peak.step]))?.snapshots[0];

        let near = |r: usize| -> f64 {
            (0..g.n_vertices())
                .map(|i| g.vertex_at(i))
                .filter(|v| v.x.abs_diff(target.x) <= r && v.y.abs_diff(target.y) <= r)
                .map(|v| snap.get(v))
                .sum()
        };
        let top = snap.argmax();
        println!(
            "sigma={sigma}: t={} p(target)={:.5} argmax=({}, {}) mass within 1: {:.4}, 5: {:.4}, 20: {:.4}",
            peak.step,
            peak.probability,
            top.x,
            top.y,
            near(1),
            near(5),
            near(20)
        );
    }
    Ok(())
}
