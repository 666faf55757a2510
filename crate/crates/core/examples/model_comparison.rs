//! Grover coin with flip-flop shift on a torus against the Hadamard coin with
//! a standard shift and reflecting walls, on identical Gaussian fields.
//!
//!     cargo run --release --example model_comparison

use qwsearch::experiments::{compare_models, log_spaced};
use qwsearch::ModelLabel;

fn main() -> qwsearch::Result<()> {
    let side = 100;
    let n = (side * side) as f64;
    let sigmas = log_spaced(1e-2, 1e4, 3);
    let table = compare_models(side, &sigmas, &[1.0], 0)?;
    println!("lambda = pi, window [0, 300]; peaks in units of 1/N");
    println!("{:>10} {:>10} {:>10}", "sigma", "model 1", "model 2");
    for &s in &sigmas {
        let p = |m| table.find(side, s, 1.0, m).map_or(f64::NAN, |r| r.p_max * n);
        println!("{s:>10.3} {:>10.2} {:>10.2}", p(ModelLabel::Model1), p(ModelLabel::Model2));
    }

    let cs: Vec<f64> = (0..=20).map(|i| i as f64 / 10.0).collect();
    let table = compare_models(side, &[1.0], &cs, 0)?;
    println!("\nsigma = 1, varying lambda = c * pi");
    for &c in &cs {
        let p1 = table.find(side, 1.0, c, ModelLabel::Model1).map_or(f64::NAN, |r| r.p_max);
        let p2 = table.find(side, 1.0, c, ModelLabel::Model2).map_or(f64::NAN, |r| r.p_max);
        let mark = if p2 > p1 { "  model 2 ahead" } else { "" };
        println!("c={c:>4.1}  {p1:.6}  {p2:.6}{mark}");
    }
    Ok(())
}
