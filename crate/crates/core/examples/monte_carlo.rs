//! Seeded simulation checked against the exact laws.
//!
//! cargo run --release --example monte_carlo [seed] [trials]

use walklab::montecarlo::{self, SimConfig, DEFAULT_SEED};

fn main() -> walklab::Result<()> {
    let mut args = std::env::args().skip(1);
    let seed = args.next().map_or(DEFAULT_SEED, |s| s.parse().expect("seed"));
    let trials = args.next().map_or(100_000, |s| s.parse().expect("trials"));
    let cfg = SimConfig::new(seed, trials).with_streams(8);

    let battery = montecarlo::calibration_battery(&cfg)?;
    println!("{:<36} {:>12} {:>12} {:>10} {:>7}", "estimate", "mean", "exact", "stderr", "z");
    for c in &battery {
        println!(
            "{:<36} {:>12.6} {:>12.6} {:>10.6} {:>7.2}",
            c.label, c.estimate.mean, c.exact, c.estimate.stderr, c.z
        );
    }
    let outside = battery.iter().filter(|c| !c.within_3sigma()).count();
    println!("{outside} of {} outside 3 sigma", battery.len());
    Ok(())
}
