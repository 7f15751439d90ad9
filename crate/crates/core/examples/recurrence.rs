//! Returns to the origin in one, two and three dimensions.
//!
//! cargo run --release --example recurrence

use walklab::laws::WalkParams;
use walklab::recurrence;

fn main() -> walklab::Result<()> {
    for p in ["1/2", "1/3", "3/5", "9/10"] {
        let w: WalkParams = p.parse()?;
        let report = recurrence::classify(1, Some(&w))?;
        println!("d=1 p={p}: {}", serde_json::to_string(&report).unwrap());
    }
    let third: WalkParams = "1/3".parse()?;
    for terms in [10u64, 50, 200] {
        println!("  p=1/3 partial sum to {terms}: {}", recurrence::partial_sum_u(&third, terms).to_decimal(6));
    }

    println!("{}", recurrence::recurrence_bracket(2, 2000)?.to_json());

    for n in [1u64, 10, 100] {
        println!("u3d({n}) = {:.6e}  bound {:.6e}", recurrence::u3d_f64(n), recurrence::u3d_bound(n));
    }
    println!("{}", recurrence::recurrence_bracket(3, 1000)?.to_json());
    Ok(())
}
