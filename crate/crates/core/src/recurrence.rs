//! Returns to the origin over an infinite horizon.
//!
//! In one dimension the expected number of visits `u = sum u_{2n}` is
//! `1/|p - q|`, finite exactly when `p != q`. A finite `u` means
//! (first Borel–Cantelli lemma) that only finitely many returns happen
//! almost surely, so the origin is transient, and the return probability
//! is `P_0 = (u - 1)/u = 1 - |p - q|`. The same dichotomy is used on the
//! square and cubic lattices: `sum u^(2)_{2n}` diverges like `ln(N)/pi`
//! (persistent), while `u^(3)_{2n} < c n^{-3/2}` makes the 3D sum finite
//! (transient). The 3D value is bracketed between an exact partial sum
//! and that sum plus the integral of the bound over the tail.

use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Result, WalkError};
use crate::laws::{u2n, WalkParams};
use crate::numerics::{binomial, ln_factorials, BigCount, Ratio};

/// Largest `n` for which [`u3d`] sums exactly.
pub const U3D_EXACT_CAP: u64 = 2000;

/// `3 sqrt(3) / (2 pi sqrt(pi))`, the constant of the 3D bound.
pub fn u3d_bound_constant() -> f64 {
    let pi = std::f64::consts::PI;
    3.0 * 3f64.sqrt() / (2.0 * pi * pi.sqrt())
}

/// Value of a (possibly divergent) series of return probabilities.
#[derive(Clone, Debug, PartialEq)]
pub enum SeriesValue {
    Exact(Ratio),
    Divergent,
    Bracket { lo: f64, hi: f64 },
}

impl Serialize for SeriesValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            SeriesValue::Exact(r) => r.serialize(s),
            SeriesValue::Divergent => s.serialize_str("divergent"),
            SeriesValue::Bracket { lo, hi } => {
                let mut m = s.serialize_map(Some(2))?;
                m.serialize_entry("lo", lo)?;
                m.serialize_entry("hi", hi)?;
                m.end()
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Transient,
    Persistent,
}

/// Partial-sum growth of the 2D series against `ln N`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DivergenceEvidence {
    pub terms: u64,
    pub partial_sum: f64,
    /// Least-squares slope of partial sums against `ln n`.
    pub slope: f64,
    /// Whether `slope` is within 20% of `1/pi`.
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecurrenceReport {
    pub dimension: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<Ratio>,
    pub u_sum: SeriesValue,
    pub p_return: SeriesValue,
    pub classification: Classification,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evidence: Option<DivergenceEvidence>,
}

impl RecurrenceReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// `sum_{n>=0} u_{2n} = 1/|p - q|`, or `None` when `p = q` (divergent).
pub fn series_sum_u(w: &WalkParams) -> Option<Ratio> {
    let gap = (w.p() - &w.q()).abs();
    gap.recip()
}

/// `sum_{n=0}^{terms} u_{2n}`, exact.
pub fn partial_sum_u(w: &WalkParams, terms: u64) -> Ratio {
    (0..=terms).map(|n| u2n(n, w)).sum()
}

/// `P_0 = 1 - |p - q|`.
pub fn prob_return_origin(w: &WalkParams) -> Ratio {
    Ratio::one() - (w.p() - &w.q()).abs()
}

/// Default number of 3D terms used by [`classify`].
pub const DEFAULT_TERMS: u64 = 1000;

/// Transient/persistent classification of the origin. One dimension needs
/// walk parameters; two and three dimensions are the symmetric walk and
/// ignore `w`.
pub fn classify(dimension: u32, w: Option<&WalkParams>) -> Result<RecurrenceReport> {
    match dimension {
        1 => {
            let fair = WalkParams::fair();
            let w = w.unwrap_or(&fair);
            let (u_sum, classification) = match series_sum_u(w) {
                Some(u) => (SeriesValue::Exact(u), Classification::Transient),
                None => (SeriesValue::Divergent, Classification::Persistent),
            };
            Ok(RecurrenceReport {
                dimension,
                p: Some(w.p().clone()),
                u_sum,
                p_return: SeriesValue::Exact(prob_return_origin(w)),
                classification,
                terms: None,
                evidence: None,
            })
        }
        2 | 3 => recurrence_bracket(dimension, DEFAULT_TERMS),
        d => Err(WalkError::UnsupportedDimension(d)),
    }
}

/// `C(2n, n)^2 / 4^{2n}`: probability the square-lattice walk is back at the
/// origin after `2n` steps.
pub fn u2d(n: u64) -> Ratio {
    let c = binomial(2 * n, n as i64);
    Ratio::of_counts(&(&c * &c), &(BigCount::from(1u32) << (4 * n)))
}

/// `sum_{j+k+l=n} (n! / (j! k! l!))^2`, reduced to a single sum with
/// `sum_{j+k=m} (m!/(j! k!))^2 = C(2m, m)`.
fn trinomial_square_sum(n: u64, central: &[BigCount]) -> BigCount {
    let mut c = BigCount::from(1u32);
    let mut acc = BigCount::from(0u32);
    for l in 0..=n {
        acc += &c * &c * &central[(n - l) as usize];
        c = c * (n - l) / (l + 1);
    }
    acc
}

fn central_binomials(n: u64) -> Vec<BigCount> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut c = BigCount::from(1u32);
    out.push(c.clone());
    for m in 1..=n {
        // C(2m, m) = C(2m-2, m-1) * 2(2m-1)/m
        c = c * (2 * (2 * m - 1)) / m;
        out.push(c.clone());
    }
    out
}

/// Numerator of `u3d(n)` over `36^n`.
fn u3d_numerator(n: u64, central: &[BigCount]) -> BigCount {
    &central[n as usize] * trinomial_square_sum(n, central)
}

/// Probability the cubic-lattice walk is back at the origin after `2n`
/// steps: `6^{-2n} sum_{j+k<=n} (2n)! / (j! j! k! k! (n-j-k)! (n-j-k)!)`.
pub fn u3d(n: u64) -> Result<Ratio> {
    if n > U3D_EXACT_CAP {
        return Err(WalkError::TooLarge { n, cap: U3D_EXACT_CAP });
    }
    let central = central_binomials(n);
    Ok(Ratio::of_counts(&u3d_numerator(n, &central), &BigCount::from(36u32).pow(n as u32)))
}

/// Floating-point `u3d` for any `n`, summed in log space.
pub fn u3d_f64(n: u64) -> f64 {
    let lf = ln_factorials(2 * n);
    let ln_choose = |a: u64, b: u64| lf[a as usize] - lf[b as usize] - lf[(a - b) as usize];
    let base = ln_choose(2 * n, n) - n as f64 * 36f64.ln();
    let terms: Vec<f64> = (0..=n)
        .map(|l| 2.0 * ln_choose(n, l) + ln_choose(2 * (n - l), n - l))
        .collect();
    let max = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let s: f64 = terms.iter().map(|t| (t - max).exp()).sum();
    (base + max + s.ln()).exp()
}

/// The asymptotic bound `c n^{-3/2}` on `u3d(n)`.
pub fn u3d_bound(n: u64) -> f64 {
    u3d_bound_constant() / (n as f64).powf(1.5)
}

/// `sum_{n=0}^{terms} u3d(n)` as an exact rational over `36^terms`.
pub fn u3d_partial_sum(terms: u64) -> Result<Ratio> {
    if terms > U3D_EXACT_CAP {
        return Err(WalkError::TooLarge { n: terms, cap: U3D_EXACT_CAP });
    }
    let central = central_binomials(terms);
    let nums: Vec<BigCount> =
        (0..=terms).into_par_iter().map(|n| u3d_numerator(n, &central)).collect();
    // Horner over powers of 36 keeps one common denominator.
    let mut acc = BigCount::from(0u32);
    for num in nums {
        acc = acc * 36u32 + num;
    }
    Ok(Ratio::of_counts(&acc, &BigCount::from(36u32).pow(terms as u32)))
}

fn u2d_partial_sums(terms: u64) -> Vec<f64> {
    let mut out = Vec::with_capacity(terms as usize + 1);
    let mut u = 1.0f64;
    let mut acc = 0.0f64;
    for n in 0..=terms {
        if n > 0 {
            // u2d(n) = u2d(n-1) * ((2n-1)/(2n))^2
            let r = (2 * n - 1) as f64 / (2 * n) as f64;
            u *= r * r;
        }
        acc += u;
        out.push(acc);
    }
    out
}

/// Least-squares slope of `ys` against `ln xs`.
fn log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0.ln()).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(x, y) in points {
        let dx = x.ln() - mx;
        sxy += dx * (y - my);
        sxx += dx * dx;
    }
    sxy / sxx
}

/// Finite-`terms` picture of the 2D or 3D return series.
///
/// 3D: `u` lies in `[S_N, S_N + 2c/sqrt(N)]`, where `S_N` is the exact partial
/// sum and the upper tail integrates the bound `c n^{-3/2}` from `N`; the
/// return probability bracket follows from `P_0 = (u - 1)/u`.
///
/// 2D: reports the partial sum and its growth rate against `ln N`. The
/// classification is persistent regardless of the fit.
pub fn recurrence_bracket(dimension: u32, terms: u64) -> Result<RecurrenceReport> {
    if terms < 10 {
        return Err(WalkError::DomainRange { value: terms.to_string(), domain: "terms >= 10" });
    }
    match dimension {
        3 => {
            let partial = u3d_partial_sum(terms)?.to_f64();
            let tail = 2.0 * u3d_bound_constant() / (terms as f64).sqrt();
            let (lo, hi) = (partial, partial + tail);
            Ok(RecurrenceReport {
                dimension,
                p: None,
                u_sum: SeriesValue::Bracket { lo, hi },
                p_return: SeriesValue::Bracket { lo: (lo - 1.0) / lo, hi: (hi - 1.0) / hi },
                classification: Classification::Transient,
                terms: Some(terms),
                evidence: None,
            })
        }
        2 => {
            let sums = u2d_partial_sums(terms);
            let points: Vec<(f64, f64)> =
                (10..=terms).map(|n| (n as f64, sums[n as usize])).collect();
            let slope = log_slope(&points);
            let target = 1.0 / std::f64::consts::PI;
            Ok(RecurrenceReport {
                dimension,
                p: None,
                u_sum: SeriesValue::Divergent,
                p_return: SeriesValue::Exact(Ratio::one()),
                classification: Classification::Persistent,
                terms: Some(terms),
                evidence: Some(DivergenceEvidence {
                    terms,
                    partial_sum: sums[terms as usize],
                    slope,
                    consistent: (slope - target).abs() <= 0.2 * target,
                }),
            })
        }
        d => Err(WalkError::UnsupportedDimension(d)),
    }
}
