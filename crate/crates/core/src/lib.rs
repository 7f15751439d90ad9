//! Exact laws of the simple random walk on the integers, with brute-force
//! enumeration and seeded Monte Carlo for cross-checking.
//!
//! Probabilities are exact rationals ([`Ratio`]); decimals are rendered
//! from them only at the output boundary.

pub mod cli;
pub mod error;
pub mod laws;
pub mod montecarlo;
pub mod numerics;
pub mod paths;
pub mod recurrence;
pub mod ruin;
pub mod verify;

pub use error::{Result, WalkError};
pub use laws::{LawTable, WalkParams};
pub use numerics::{binomial, multinomial, Prob, Ratio};
pub use paths::{LatticePoint, Path};
pub use ruin::{RuinResult, RuinSpec};
