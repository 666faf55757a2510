//! Peak success probability against the width of the Gaussian potential,
//! showing the sharp drop below sigma ~ 0.5 and the slow return towards 1/N.
//!
//!     cargo run --release --example sigma_sweep [L] [POINTS_PER_DECADE]

use qwsearch::experiments::{log_spaced, sweep, SweepSpec};

fn main() -> qwsearch::Result<()> {
    let mut args = std::env::args().skip(1);
    let side: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(100);
    let per_decade: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(6);

    let spec = SweepSpec::sigma_sweep(vec![side], log_spaced(1e-2, 1e4, per_decade));
    let table = sweep(&spec)?;
    let p_akr = table.rows[0].p_akr;
    let p_u = table.rows[0].p_uniform;
    println!("L={side}  p_akr={p_akr:.5}  1/N={p_u:e}");
    println!("{:>12} {:>12} {:>10} {:>10}", "sigma", "p_max", "/p_akr", "*N");
    for r in &table.rows {
        println!("{:>12.4} {:>12.6} {:>10.4} {:>10.2}", r.sigma, r.p_max, r.p_max / p_akr, r.p_max / p_u);
    }
    Ok(())
}
