//! Return, first-return, lead-time and return-count laws of the simple walk.
//!
//! The fair-coin laws (no-return, non-negativity, first passage through -1,
//! lead time, return counts) are only established for `p = 1/2`; those
//! functions take the walk parameters anyway and reject any other `p`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Result, WalkError};
use crate::numerics::{binomial, pow2, Prob, Ratio};

/// Up-step probability of a simple walk. The down-step probability is
/// always derived as `1 - p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkParams {
    p: Prob,
}

impl WalkParams {
    pub fn new(p: Prob) -> Self {
        WalkParams { p }
    }

    pub fn fair() -> Self {
        WalkParams { p: Prob::half() }
    }

    pub fn p(&self) -> &Ratio {
        self.p.value()
    }

    pub fn q(&self) -> Ratio {
        Ratio::one() - self.p.value()
    }

    pub fn prob(&self) -> &Prob {
        &self.p
    }

    pub fn is_fair(&self) -> bool {
        self.p.is_half()
    }

    fn require_fair(&self, law: &'static str) -> Result<()> {
        if self.is_fair() {
            Ok(())
        } else {
            Err(WalkError::BiasedUnsupported { law, p: self.p.to_string() })
        }
    }
}

impl std::str::FromStr for WalkParams {
    type Err = WalkError;
    fn from_str(s: &str) -> Result<Self> {
        Ok(WalkParams::new(s.parse()?))
    }
}

/// One row of a [`LawTable`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LawRow {
    pub index: i64,
    pub exact: Ratio,
    pub decimal: f64,
}

/// Labelled table of exact values with their rounded decimal rendering.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LawTable {
    pub label: String,
    pub rows: Vec<LawRow>,
    #[serde(skip)]
    precision: usize,
}

pub const DEFAULT_PRECISION: usize = 6;

impl LawTable {
    pub fn new(label: impl Into<String>, precision: usize) -> Self {
        LawTable { label: label.into(), rows: Vec::new(), precision }
    }

    /// Panics if `index` does not increase.
    pub fn push(&mut self, index: i64, exact: Ratio) {
        if let Some(last) = self.rows.last() {
            assert!(index > last.index, "law table indices must increase");
        }
        let decimal = exact.rounded_f64(self.precision);
        self.rows.push(LawRow { index, exact, decimal });
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    /// Re-render every decimal at a different precision.
    pub fn with_precision(mut self, precision: usize) -> Self {
        self.precision = precision;
        for row in &mut self.rows {
            row.decimal = row.exact.rounded_f64(precision);
        }
        self
    }

    pub fn get(&self, index: i64) -> Option<&LawRow> {
        self.rows.iter().find(|r| r.index == index)
    }

    pub fn total(&self) -> Ratio {
        self.rows.iter().map(|r| r.exact.clone()).sum()
    }

    /// CSV with header `index,exact,decimal`; decimals printed with exactly
    /// `precision` places.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,exact,decimal\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{}\n",
                row.index,
                row.exact,
                row.exact.to_decimal(self.precision)
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("law tables serialize")
    }
}

/// `u_{2n} = C(2n, n) p^n q^n`, the probability of being at the origin at
/// time `2n`.
pub fn u2n(n: u64, w: &WalkParams) -> Ratio {
    let pq = w.p() * &w.q();
    Ratio::from_count(&binomial(2 * n, n as i64)) * pq.pow(n as i32)
}

/// `u_0, u_2, ..., u_{2n}` of the fair walk, via
/// `u_{2k} = u_{2k-2} (2k - 1) / (2k)`.
pub fn fair_u_sequence(n: u64) -> Vec<Ratio> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut u = Ratio::one();
    out.push(u.clone());
    for k in 1..=n as i64 {
        u = u * Ratio::new(2 * k - 1, 2 * k);
        out.push(u.clone());
    }
    out
}

/// Probability that the first return to the origin happens at time `2n`:
/// `(2/n) C(2n-2, n-1) p^n q^n`, which equals `u_{2n} / (2n - 1)`.
pub fn first_return_prob(n: u64, w: &WalkParams) -> Result<Ratio> {
    if n == 0 {
        return Err(WalkError::DomainRange { value: "n = 0".into(), domain: "n >= 1" });
    }
    let pq = w.p() * &w.q();
    let c = Ratio::from_count(&binomial(2 * n - 2, n as i64 - 1));
    Ok(Ratio::new(2, n as i64) * c * pq.pow(n as i32))
}

fn require_positive(n: u64) -> Result<()> {
    if n == 0 {
        Err(WalkError::DomainRange { value: "n = 0".into(), domain: "n >= 1" })
    } else {
        Ok(())
    }
}

fn fair_u2n(n: u64) -> Ratio {
    Ratio::of_counts(&binomial(2 * n, n as i64), &pow2(2 * n))
}

/// `P(S_1 != 0, ..., S_{2n} != 0)` for the fair walk.
pub fn no_return_prob(n: u64, w: &WalkParams) -> Result<Ratio> {
    w.require_fair("no_return_prob")?;
    require_positive(n)?;
    Ok(fair_u2n(n))
}

/// `P(S_1 >= 0, ..., S_{2n} >= 0)` for the fair walk.
pub fn nonnegative_prob(n: u64, w: &WalkParams) -> Result<Ratio> {
    w.require_fair("nonnegative_prob")?;
    require_positive(n)?;
    Ok(fair_u2n(n))
}

/// Probability that the first passage through -1 happens at time `2n - 1`:
/// `C(2n-2, n-1) / (n 2^{2n-1})`.
pub fn first_passage_minus1_prob(n: u64, w: &WalkParams) -> Result<Ratio> {
    w.require_fair("first_passage_minus1_prob")?;
    require_positive(n)?;
    let c = binomial(2 * n - 2, n as i64 - 1);
    Ok(Ratio::of_counts(&c, &(pow2(2 * n - 1) * n)))
}

/// Distribution of the time spent on the positive side up to `2n`:
/// row `k` holds `p_{2k,2n} = u_{2k} u_{2n-2k}` for `k = 0..=n`.
pub fn lead_time_pmf(n: u64, w: &WalkParams) -> Result<LawTable> {
    lead_time_pmf_at(n, w, DEFAULT_PRECISION)
}

pub fn lead_time_pmf_at(n: u64, w: &WalkParams, precision: usize) -> Result<LawTable> {
    w.require_fair("lead_time_pmf")?;
    require_positive(n)?;
    let u = fair_u_sequence(n);
    let mut table = LawTable::new(format!("lead time pmf, 2n = {}", 2 * n), precision);
    for k in 0..=n as usize {
        table.push(k as i64, &u[k] * &u[n as usize - k]);
    }
    Ok(table)
}

/// Cumulative lead-time distribution table, rows `alpha = 0..=n`.
pub fn lead_time_cdf_table(n: u64, w: &WalkParams, precision: usize) -> Result<LawTable> {
    let pmf = lead_time_pmf_at(n, w, precision)?;
    let mut table = LawTable::new(format!("lead time cdf, 2n = {}", 2 * n), precision);
    let mut acc = Ratio::zero();
    for row in pmf.rows {
        acc = acc + row.exact;
        table.push(row.index, acc.clone());
    }
    Ok(table)
}

/// `P(2k <= 2 alpha) = sum_{k <= alpha} p_{2k,2n}`.
pub fn lead_time_cdf(n: u64, alpha: i64, w: &WalkParams) -> Result<Ratio> {
    w.require_fair("lead_time_cdf")?;
    if alpha < 0 || alpha as u64 > n {
        return Err(WalkError::IndexRange { index: alpha, max: n });
    }
    let pmf = lead_time_pmf(n, w)?;
    Ok(pmf.rows[..=alpha as usize].iter().map(|r| r.exact.clone()).sum())
}

/// Arcsine approximation `(2/pi) asin(sqrt(x))` of the lead-time CDF at
/// fraction `x = alpha / n`.
pub fn arcsine_cdf(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(WalkError::DomainRange { value: x.to_string(), domain: "[0, 1]" });
    }
    Ok(std::f64::consts::FRAC_2_PI * x.sqrt().asin())
}

/// A span of time, kept in days.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Span {
    pub days: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpanUnit {
    Days,
    Hours,
}

impl SpanUnit {
    pub fn suffix(self) -> &'static str {
        match self {
            SpanUnit::Days => "d",
            SpanUnit::Hours => "h",
        }
    }
}

impl Span {
    pub fn hours(&self) -> f64 {
        self.days * 24.0
    }

    /// Days when at least one day, otherwise hours.
    pub fn unit(&self) -> SpanUnit {
        if self.days >= 1.0 {
            SpanUnit::Days
        } else {
            SpanUnit::Hours
        }
    }

    /// Value in [`Span::unit`] units, rounded to `places` decimals.
    pub fn render(&self, places: usize) -> String {
        match self.unit() {
            SpanUnit::Days => format!("{:.*}", places, self.days),
            SpanUnit::Hours => format!("{:.*}", places, self.hours()),
        }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.render(1), self.unit().suffix())
    }
}

impl Serialize for Span {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.days)
    }
}

/// Longest lead the less fortunate of two players keeps over a game of
/// length `horizon`, with probability `prob`: `x = sin^2(pi prob / 4)`
/// of the horizon.
pub fn lead_fraction_quantile(prob: f64, horizon: Span) -> Result<Span> {
    if !(prob > 0.0 && prob < 1.0) {
        return Err(WalkError::DomainRange { value: prob.to_string(), domain: "(0, 1)" });
    }
    if !(horizon.days > 0.0) {
        return Err(WalkError::DomainRange {
            value: horizon.days.to_string(),
            domain: "horizon > 0",
        });
    }
    let x = (std::f64::consts::FRAC_PI_4 * prob).sin().powi(2);
    Ok(Span { days: x * horizon.days })
}

/// Probability of exactly `r` returns to the origin up to time `2n`:
/// `C(2n - r, n) / 2^{2n - r}`.
pub fn return_count_pmf(r: u64, n: u64, w: &WalkParams) -> Result<Ratio> {
    w.require_fair("return_count_pmf")?;
    require_positive(n)?;
    if r > n {
        return Err(WalkError::IndexRange { index: r as i64, max: n });
    }
    Ok(Ratio::of_counts(&binomial(2 * n - r, n as i64), &pow2(2 * n - r)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::count_enumerated;

    fn third() -> WalkParams {
        "1/3".parse().unwrap()
    }

    #[test]
    fn u2n_examples() {
        let fair = WalkParams::fair();
        assert_eq!(u2n(10, &fair), Ratio::new(184756, 1 << 20));
        assert_eq!(u2n(10, &fair).to_decimal(3), "0.176");
        assert_eq!(u2n(0, &third()), Ratio::one());
        assert_eq!(u2n(10, &third()).to_decimal(4), "0.0543");
    }

    #[test]
    fn first_return_examples() {
        assert_eq!(first_return_prob(1, &third()).unwrap(), Ratio::new(4, 9));
        assert_eq!(first_return_prob(10, &third()).unwrap().to_decimal(4), "0.0029");
        assert_eq!(first_return_prob(5, &WalkParams::fair()).unwrap(), Ratio::new(28, 1024));
        assert!(first_return_prob(0, &third()).is_err());
    }

    #[test]
    fn first_return_small_polynomials() {
        let coeffs = [2, 2, 4, 10, 28];
        for w in [third(), WalkParams::fair()] {
            let pq = w.p() * &w.q();
            for (i, &c) in coeffs.iter().enumerate() {
                let n = i as u64 + 1;
                let expect = Ratio::from(c) * pq.pow(n as i32);
                assert_eq!(first_return_prob(n, &w).unwrap(), expect);
            }
        }
    }

    #[test]
    fn fair_only_laws_reject_bias() {
        let w = third();
        assert!(matches!(no_return_prob(3, &w), Err(WalkError::BiasedUnsupported { .. })));
        assert!(matches!(nonnegative_prob(3, &w), Err(WalkError::BiasedUnsupported { .. })));
        assert!(first_passage_minus1_prob(3, &w).is_err());
        assert!(lead_time_pmf(3, &w).is_err());
        assert!(lead_time_cdf(3, 1, &w).is_err());
        assert!(return_count_pmf(1, 3, &w).is_err());
    }

    #[test]
    fn no_return_and_nonnegative() {
        let fair = WalkParams::fair();
        assert_eq!(no_return_prob(10, &fair).unwrap().to_decimal(5), "0.17620");
        assert_eq!(no_return_prob(1, &fair).unwrap(), Ratio::half());
        let count = count_enumerated(14, |p| p.sums()[1..].iter().all(|&s| s != 0)).unwrap();
        assert_eq!(no_return_prob(7, &fair).unwrap(), Ratio::new(count as i64, 1 << 14));
        assert_eq!(nonnegative_prob(1, &fair).unwrap(), Ratio::half());
        let count = count_enumerated(12, |p| p.sums().iter().all(|&s| s >= 0)).unwrap();
        assert_eq!(nonnegative_prob(6, &fair).unwrap(), Ratio::new(count as i64, 1 << 12));
    }

    #[test]
    fn first_passage_examples() {
        let fair = WalkParams::fair();
        assert_eq!(first_passage_minus1_prob(1, &fair).unwrap(), Ratio::half());
        assert_eq!(first_passage_minus1_prob(2, &fair).unwrap(), Ratio::new(1, 8));
        assert_eq!(
            first_passage_minus1_prob(10, &fair).unwrap(),
            first_return_prob(10, &fair).unwrap()
        );
    }

    #[test]
    fn lead_time_examples() {
        let fair = WalkParams::fair();
        let t = lead_time_pmf(10, &fair).unwrap();
        assert_eq!(t.rows.len(), 11);
        assert_eq!(t.rows[0].exact.to_decimal(3), "0.176");
        assert_eq!(t.rows[5].exact.to_decimal(3), "0.061");
        assert_eq!(t.total(), Ratio::one());
        let t1 = lead_time_pmf(1, &fair).unwrap();
        assert_eq!(t1.rows[0].exact, Ratio::half());
        assert_eq!(t1.rows[1].exact, Ratio::half());
        assert_eq!(lead_time_pmf(2, &fair).unwrap().rows[1].exact, Ratio::new(1, 4));
    }

    #[test]
    fn lead_time_cdf_examples() {
        let fair = WalkParams::fair();
        assert_eq!(lead_time_cdf(10, 3, &fair).unwrap().to_decimal(3), "0.408");
        assert_eq!(lead_time_cdf(10, 10, &fair).unwrap(), Ratio::one());
        assert_eq!(lead_time_cdf(2, 0, &fair).unwrap(), Ratio::new(3, 8));
        assert_eq!(
            lead_time_cdf(10, 11, &fair),
            Err(WalkError::IndexRange { index: 11, max: 10 })
        );
        assert!(lead_time_cdf(10, -1, &fair).is_err());
    }

    #[test]
    fn arcsine_examples() {
        assert_eq!(arcsine_cdf(0.0).unwrap(), 0.0);
        assert!((arcsine_cdf(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((arcsine_cdf(0.3).unwrap() - 0.369010).abs() < 1e-6);
        assert!(arcsine_cdf(1.5).is_err());
        assert!(arcsine_cdf(-0.1).is_err());
    }

    #[test]
    fn quantile_examples() {
        let year = Span { days: 365.0 };
        let q05 = lead_fraction_quantile(0.05, year).unwrap();
        assert_eq!(q05.unit(), SpanUnit::Hours);
        assert_eq!(q05.render(1), "13.5");
        let q50 = lead_fraction_quantile(0.50, year).unwrap();
        assert_eq!(q50.unit(), SpanUnit::Days);
        assert_eq!(q50.render(1), "53.5");
        let near_one = lead_fraction_quantile(1.0 - 1e-12, year).unwrap();
        assert!((near_one.days / 365.0 - 0.5).abs() < 1e-9);
        assert!(lead_fraction_quantile(0.0, year).is_err());
        assert!(lead_fraction_quantile(1.0, year).is_err());
        assert!(lead_fraction_quantile(0.5, Span { days: 0.0 }).is_err());
    }

    #[test]
    fn return_count_examples() {
        let fair = WalkParams::fair();
        assert_eq!(return_count_pmf(0, 50, &fair).unwrap().to_decimal(4), "0.0796");
        assert_eq!(return_count_pmf(10, 50, &fair).unwrap().to_decimal(4), "0.0484");
        assert_eq!(return_count_pmf(2, 2, &fair).unwrap(), Ratio::new(1, 4));
        assert_eq!(return_count_pmf(3, 2, &fair), Err(WalkError::IndexRange { index: 3, max: 2 }));
        let total: Ratio = (0..=20).map(|r| return_count_pmf(r, 20, &fair).unwrap()).sum();
        assert_eq!(total, Ratio::one());
    }

    #[test]
    fn csv_and_json_shapes() {
        let t = lead_time_pmf_at(1, &WalkParams::fair(), 3).unwrap();
        assert_eq!(t.to_csv(), "index,exact,decimal\n0,1/2,0.500\n1,1/2,0.500\n");
        let v: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v["rows"][0]["exact"], "1/2");
        assert_eq!(v["rows"][0]["decimal"], 0.5);
        assert!(v["label"].is_string());
    }
}
