//! Success probability over time on a 100x100 grid for a few Gaussian widths,
//! next to the ideal marked-vertex search.
//!
//!     cargo run --release --example success_curves [OUT_DIR]

use std::f64::consts::PI;
use std::path::PathBuf;

use qwsearch::io::{emit_series, Format};
use qwsearch::{
    bivariate_gaussian_field, delta_oracle_field, run, EvolutionConfig, GaussianParams, GridGeometry, OracleSpec,
    WalkModel, Window,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).map(PathBuf::from);
    let g = GridGeometry::new(100)?;
    let target = g.center();

    let mut fields = vec![("delta".to_string(), delta_oracle_field(g, &OracleSpec::single(target))?)];
    for sigma in [0.01, 0.35, 0.4, 50.0] {
        let params = GaussianParams::centered(g, sigma, PI)?;
        fields.push((format!("sigma_{sigma}"), bivariate_gaussian_field(g, &params)?));
    }

    println!("{:>12} {:>12} {:>6}", "field", "p_max", "t");
    for (name, field) in fields {
        // The sigma = 0.4 peak sits just past 3L, so look a little further.
        let config = EvolutionConfig::new(WalkModel::model1(), field, target).with_window(Window::new(0, 320));
        let record = run(&config)?;
        println!("{name:>12} {:>12.6} {:>6}", record.peak.probability, record.peak.step);
        if let Some(dir) = &out {
            std::fs::create_dir_all(dir)?;
            emit_series(&record.success_series, Format::Csv, &dir.join(format!("{name}.csv")))?;
        }
    }
    Ok(())
}
