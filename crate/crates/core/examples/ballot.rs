//! Path counting: endpoints, ballot counts, reflection and loops.
//!
//! cargo run --example ballot

use walklab::numerics::Ratio;
use walklab::paths::{self, LatticePoint, LoopMode};

fn main() -> walklab::Result<()> {
    // 5 votes to 3: paths from the origin to (8, 2)
    let (x, y) = (8, 2);
    let all = paths::count_paths_to(x, y);
    let ahead = paths::count_always_positive(x, y);
    println!("paths to ({x},{y}): {all}, always ahead: {ahead}");
    println!("fraction always ahead: {} (y/x = {})", Ratio::of_counts(&ahead, &all), Ratio::new(y, x as i64));

    let brute = paths::count_enumerated(x, |p| p.endpoint().y == y && p.sums()[1..].iter().all(|&s| s > 0))?;
    println!("by enumeration: {brute}");

    for p in paths::enumerate_paths(6, |p| p.endpoint().y == 2 && p.sums()[1..].iter().all(|&s| s > 0))? {
        println!("  {p}  reversed {}", paths::reverse_path(&p));
    }

    let (a, b) = (LatticePoint::new(0, 2), LatticePoint::new(10, 4));
    let (touching, mirrored) = paths::count_touching_reflection(a, b)?;
    println!("{a} -> {b}: {touching} paths touch the axis, {mirrored} paths from {}", a.reflected());

    println!("n  nonnegative loops  positive loops of length 2n+2");
    for n in 0..=8 {
        println!(
            "{n}  {}  {}",
            paths::count_loops(n, LoopMode::Nonnegative),
            paths::count_loops(n + 1, LoopMode::StrictlyPositive)
        );
    }
    Ok(())
}
