//! Writes a correlated, off-centre Gaussian field to the plain-text grid
//! format, reads it back, and runs a search on the loaded field.
//!
//!     cargo run --release --example field_file [PATH]

use std::f64::consts::PI;
use std::path::PathBuf;

use qwsearch::{
    bivariate_gaussian_field, run, EvolutionConfig, GaussianParams, GridGeometry, PotentialField, Vertex, WalkModel,
};

fn main() -> qwsearch::Result<()> {
    let path =
        std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("qwsearch_field.txt"));
    let g = GridGeometry::new(40)?;
    let params = GaussianParams { mu_x: 12.0, mu_y: 25.0, sigma_x: 0.6, sigma_y: 0.3, rho: 0.5, lambda: PI };
    let field = bivariate_gaussian_field(g, &params)?;
    field.save(&path)?;

    let loaded = PotentialField::load(&path)?;
    let identical = loaded.values().iter().zip(field.values()).all(|(a, b)| a.to_bits() == b.to_bits());
    println!("wrote {} ({} values, bit-identical on reload: {identical})", path.display(), loaded.values().len());

    let target = Vertex::new(12, 25);
    let rec = run(&EvolutionConfig::new(WalkModel::model1(), loaded, target))?;
    println!("peak at ({}, {}): p_max = {:.5} at t = {}", target.x, target.y, rec.peak.probability, rec.peak.step);
    Ok(())
}
