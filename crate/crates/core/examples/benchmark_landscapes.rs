//! Search on inverted Ackley and Rastrigin landscapes and on a linear
//! (electric) field, for both walk models.
//!
//!     cargo run --release --example benchmark_landscapes [L]

use std::f64::consts::PI;

use qwsearch::{ackley_field, linear_field, rastrigin_field, run, EvolutionConfig, GridGeometry, WalkModel};

fn main() -> qwsearch::Result<()> {
    let side: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(64);
    let g = GridGeometry::new(side)?;
    let n = g.n_vertices() as f64;
    let fields = [
        ("ackley", ackley_field(g, PI)?),
        ("rastrigin", rastrigin_field(g, PI)?),
        ("linear pi/8", linear_field(g, PI / 8.0)?),
    ];
    for (name, field) in fields {
        // The global optimum of both benchmarks is mapped to the grid centre.
        let target = g.center();
        for model in [WalkModel::model1(), WalkModel::model2()] {
            let rec = run(&EvolutionConfig::new(model.clone(), field.clone(), target))?;
            println!(
                "{name:>12} {:>7}: p_max = {:.5} ({:.1}/N) at t = {}",
                model.label(),
                rec.peak.probability,
                rec.peak.probability * n,
                rec.peak.step
            );
        }
    }
    Ok(())
}
