//! Absorption between two barriers.
//!
//! cargo run --example ruin

use walklab::numerics::{Prob, Ratio};
use walklab::ruin::{self, Horizon, RuinSpec};

fn main() -> walklab::Result<()> {
    let fair = RuinSpec::new(5, 3, Prob::half())?;
    let r = ruin::solve(&fair)?;
    println!("A=5 B=3 fair: win {} ruin {} E[tau] {}", r.prob_win, r.prob_ruin, r.expected_duration);

    for k in -2..=4 {
        let r = ruin::solve(&RuinSpec::with_start(5, 3, Prob::half(), k)?)?;
        println!("  start {k:>2}: win {:>4}  E[tau] {}", r.prob_win, r.expected_duration);
    }

    let spec = RuinSpec::new(10, 10, "45/100".parse()?)?;
    println!("A=B=10 p=45/100:\n{}", ruin::solve(&spec)?.to_json(6));

    println!("rho     A  win      ruin");
    for rho in ["51/49", "55/45", "60/40"] {
        let rho_r: Ratio = rho.parse()?;
        for a in [3u64, 10] {
            let r = ruin::ruin_symmetric(a, &rho_r)?;
            println!("{rho:<7} {a:<2} {}  {}", r.prob_win.to_decimal(4), r.prob_ruin.to_decimal(4));
        }
    }

    let approx = ruin::ruin_approx(1000, 1000, 0.49)?;
    println!("A=B=1000 p=0.49 (floating): win {:.3e}, E[tau] {:.1}", approx.prob_win, approx.expected_duration);

    let p: Prob = "3/5".parse()?;
    println!("p=3/5: reach 100 before 0 from 1: {}", ruin::escape_probability(&p, Horizon::Finite(100))?.to_decimal(8));
    println!("p=3/5: never return to 0 from 1: {}", ruin::escape_probability(&p, Horizon::Infinite)?);
    Ok(())
}
