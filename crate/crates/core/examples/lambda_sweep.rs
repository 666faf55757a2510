//! Peak success probability against the potential height lambda = c * pi on
//! a 100x100 grid, for a few widths.
//!
//!     cargo run --release --example lambda_sweep

use qwsearch::experiments::{best_c, lambda_sweep, SweepSpec};
use qwsearch::ModelLabel;

fn main() -> qwsearch::Result<()> {
    let sigmas = vec![0.01, 0.3, 0.4, 0.5];
    let mut spec = SweepSpec::sigma_sweep(vec![100], sigmas.clone());
    spec.c_values = (0..=20).map(|i| i as f64 / 10.0).collect();
    let table = lambda_sweep(&spec)?;

    print!("{:>6}", "c");
    for s in &sigmas {
        print!(" {:>10}", format!("s={s}"));
    }
    println!();
    for &c in &spec.c_values {
        print!("{c:>6.2}");
        for &s in &sigmas {
            print!(" {:>10.5}", table.find(100, s, c, ModelLabel::Model1).map_or(f64::NAN, |r| r.p_max));
        }
        println!();
    }
    for &s in &sigmas {
        if let Some((c, p)) = best_c(&table, 100, s, ModelLabel::Model1) {
            println!("sigma={s}: best c={c} with p_max={p:.5}");
        }
    }
    Ok(())
}
