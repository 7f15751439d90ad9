//! Lead time of a fair game, its arcsine limit, and returns to the origin.
//!
//! cargo run --example coin_tossing

use walklab::laws::{self, Span, WalkParams};

fn main() -> walklab::Result<()> {
    let fair = WalkParams::fair();

    let pmf = laws::lead_time_pmf_at(10, &fair, 4)?;
    print!("{}", pmf.to_csv());

    for n in [10u64, 50, 100] {
        let cdf = laws::lead_time_cdf_table(n, &fair, 6)?;
        let worst = (1..n)
            .map(|a| {
                let exact = cdf.rows[a as usize].exact.to_f64();
                (exact - laws::arcsine_cdf(a as f64 / n as f64).unwrap()).abs()
            })
            .fold(0.0, f64::max);
        println!("2n = {:>3}: max |cdf - arcsine| over interior alpha = {worst:.4}", 2 * n);
    }

    let year = Span { days: 365.0 };
    for level in [0.5, 0.1, 0.05] {
        let span = laws::lead_fraction_quantile(level, year)?;
        println!("with probability {level} the trailing player leads at most {span}");
    }

    println!("u_20 = {}", laws::u2n(10, &fair).to_decimal(6));
    let biased: WalkParams = "1/3".parse()?;
    println!("p = 1/3: u_20 = {}, first return at 20 = {}",
        laws::u2n(10, &biased).to_decimal(6),
        laws::first_return_prob(10, &biased)?.to_decimal(6));

    for r in [0u64, 5, 10, 20, 30] {
        println!("P(exactly {r:>2} returns in 100 tosses) = {}", laws::return_count_pmf(r, 50, &fair)?.to_decimal(6));
    }
    Ok(())
}
