//! The four reference tables, straight from the library.
//!
//! cargo run --example tables

use walklab::laws::{self, Span, WalkParams};
use walklab::numerics::Ratio;
use walklab::ruin;

fn main() -> walklab::Result<()> {
    let fair = WalkParams::fair();
    let pmf = laws::lead_time_pmf_at(10, &fair, 3)?;
    let cdf = laws::lead_time_cdf_table(10, &fair, 3)?;
    println!("2k    p(2k,20)  P(<=2k)");
    for (a, b) in pmf.rows.iter().zip(&cdf.rows) {
        println!("{:<5} {:<9} {}", 2 * a.index, a.exact.to_decimal(3), b.exact.to_decimal(3));
    }

    println!();
    for level in [0.99, 0.9, 0.5, 0.1, 0.05, 0.01] {
        println!("p = {level:<5} x = {}", laws::lead_fraction_quantile(level, Span { days: 365.0 })?);
    }

    println!();
    for rho in ["51/49", "55/45", "60/40"] {
        let r: Ratio = rho.parse()?;
        let cells: Vec<String> = [3u64, 10]
            .iter()
            .map(|&a| {
                let res = ruin::ruin_symmetric(a, &r).unwrap();
                format!("A={a}: {}% / {}%",
                    (res.prob_win * Ratio::from(100)).to_decimal(0),
                    (res.prob_ruin * Ratio::from(100)).to_decimal(0))
            })
            .collect();
        println!("rho = {rho}  {}", cells.join("   "));
    }
    Ok(())
}
