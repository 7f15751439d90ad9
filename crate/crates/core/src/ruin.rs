//! Two-barrier absorption ("gambler's ruin").
//!
//! The walk starts at `start` (default 0) and stops at the first time it
//! reaches `+A` (a win) or `-B` (ruin). Everything is exact; the singular
//! point `p = q` of the biased formulas is detected by exact equality and
//! routed to the unbiased closed forms.

use serde::Serialize;
use serde_json::json;

use crate::error::{Result, WalkError};
use crate::numerics::{Prob, Ratio};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuinSpec {
    /// Upper barrier `A > 0`.
    pub upper: u64,
    /// Lower barrier `-B`, `B > 0`.
    pub lower: u64,
    pub p: Prob,
    /// Starting height in `[-B, A]`.
    pub start: i64,
}

impl RuinSpec {
    pub fn new(upper: u64, lower: u64, p: Prob) -> Result<Self> {
        Self::with_start(upper, lower, p, 0)
    }

    pub fn with_start(upper: u64, lower: u64, p: Prob, start: i64) -> Result<Self> {
        if upper == 0 || lower == 0 || start > upper as i64 || start < -(lower as i64) {
            return Err(WalkError::InvalidSpec(format!("A = {upper}, B = {lower}, start = {start}")));
        }
        Ok(RuinSpec { upper, lower, p, start })
    }

    pub fn q(&self) -> Ratio {
        Ratio::one() - self.p.value()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuinResult {
    /// Probability of absorption at `+A`.
    pub prob_win: Ratio,
    /// Probability of absorption at `-B`.
    pub prob_ruin: Ratio,
    /// Expected number of steps to absorption.
    pub expected_duration: Ratio,
}

impl RuinResult {
    pub fn to_json_value(&self, precision: usize) -> serde_json::Value {
        json!({
            "prob_win": self.prob_win.to_string(),
            "prob_ruin": self.prob_ruin.to_string(),
            "expected_duration": self.expected_duration.to_string(),
            "decimal": {
                "prob_win": self.prob_win.rounded_f64(precision),
                "prob_ruin": self.prob_ruin.rounded_f64(precision),
                "expected_duration": self.expected_duration.rounded_f64(precision),
            }
        })
    }

    pub fn to_json(&self, precision: usize) -> String {
        serde_json::to_string_pretty(&self.to_json_value(precision)).unwrap()
    }
}

/// CSV for a parameter sweep, header `param,prob_win,prob_ruin,duration`.
pub fn sweep_csv(rows: &[(String, RuinResult)], precision: usize) -> String {
    let mut out = String::from("param,prob_win,prob_ruin,duration\n");
    for (param, r) in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            param,
            r.prob_win.to_decimal(precision),
            r.prob_ruin.to_decimal(precision),
            r.expected_duration.to_decimal(precision)
        ));
    }
    out
}

/// Fair walk: win `(B+k)/(A+B)`, ruin `(A-k)/(A+B)`, duration `(A-k)(B+k)`.
pub fn ruin_unbiased(spec: &RuinSpec) -> Result<RuinResult> {
    if !spec.p.is_half() {
        return Err(WalkError::NotUnbiased(spec.p.to_string()));
    }
    let a = spec.upper as i64;
    let b = spec.lower as i64;
    let k = spec.start;
    Ok(RuinResult {
        prob_win: Ratio::new(b + k, a + b),
        prob_ruin: Ratio::new(a - k, a + b),
        expected_duration: Ratio::from((a - k) * (b + k)),
    })
}

/// Biased walk started at 0, with `rho = q/p`:
///
/// ```text
/// P(win)  = (1 - rho^B) / (1 - rho^(A+B))
/// P(ruin) = (1 - rho^-A) / (1 - rho^-(A+B))
/// E[tau]  = B/(q-p) - (A+B)/(q-p) * P(win)
/// ```
///
/// `p = 1/2` is routed to [`ruin_unbiased`].
pub fn ruin_biased(spec: &RuinSpec) -> Result<RuinResult> {
    let p = spec.p.value();
    if p.is_zero() || p.is_one() {
        return Err(WalkError::DegenerateP(spec.p.to_string()));
    }
    if spec.p.is_half() {
        return ruin_unbiased(spec);
    }
    if spec.start != 0 {
        return Err(WalkError::StartUnsupported(spec.start));
    }
    let q = spec.q();
    let rho = &q / p;
    let a = spec.upper as i32;
    let b = spec.lower as i32;
    let one = Ratio::one();
    let prob_win = (&one - &rho.pow(b)) / (&one - &rho.pow(a + b));
    let inv = p / &q;
    let prob_ruin = (&one - &inv.pow(a)) / (&one - &inv.pow(a + b));
    let drift = &q - p;
    let expected_duration =
        Ratio::from(b as i64) / drift.clone() - Ratio::from((a + b) as i64) / drift * &prob_win;
    Ok(RuinResult { prob_win, prob_ruin, expected_duration })
}

/// Symmetric barriers `A = B` as functions of `rho = q/p`:
/// win `1/(1 + rho^A)`, ruin `1/(1 + rho^-A)`, and duration
/// `A (1+rho)/(1-rho) (1-rho^A)/(1+rho^A)`.
pub fn ruin_symmetric(a: u64, rho: &Ratio) -> Result<RuinResult> {
    if a == 0 {
        return Err(WalkError::InvalidSpec(format!("A = {a}")));
    }
    if rho.is_negative() || rho.is_zero() {
        return Err(WalkError::DomainRange { value: rho.to_string(), domain: "rho > 0" });
    }
    if rho.is_one() {
        return Err(WalkError::RhoOne);
    }
    let one = Ratio::one();
    let ra = rho.pow(a as i32);
    let prob_win = (&one + &ra).recip().unwrap();
    let prob_ruin = (&one + &ra.recip().unwrap()).recip().unwrap();
    let expected_duration = Ratio::from(a as i64) * (&one + rho) / (&one - rho)
        * ((&one - &ra) / (&one + &ra));
    Ok(RuinResult { prob_win, prob_ruin, expected_duration })
}

/// Expected duration for arbitrary barriers written in `rho = q/p`:
/// `(rho+1)/(1-rho) [A (1-rho^B)/(1-rho^(A+B)) - B (1-rho^-A)/(1-rho^-(A+B))]`.
pub fn duration_in_rho(a: u64, b: u64, rho: &Ratio) -> Result<Ratio> {
    if rho.is_negative() || rho.is_zero() {
        return Err(WalkError::DomainRange { value: rho.to_string(), domain: "rho > 0" });
    }
    if rho.is_one() {
        return Err(WalkError::RhoOne);
    }
    let one = Ratio::one();
    let (a, b) = (a as i32, b as i32);
    let win = (&one - &rho.pow(b)) / (&one - &rho.pow(a + b));
    let ruin = (&one - &rho.pow(-a)) / (&one - &rho.pow(-(a + b)));
    Ok((&one + rho) / (&one - rho) * (Ratio::from(a as i64) * win - Ratio::from(b as i64) * ruin))
}

/// Deterministic walks: `p = 1` wins in `A - k` steps, `p = 0` is ruined
/// in `B + k` steps.
pub fn ruin_degenerate(spec: &RuinSpec) -> Result<RuinResult> {
    let p = spec.p.value();
    let a = spec.upper as i64;
    let b = spec.lower as i64;
    if p.is_one() {
        Ok(RuinResult {
            prob_win: Ratio::one(),
            prob_ruin: Ratio::zero(),
            expected_duration: Ratio::from(a - spec.start),
        })
    } else if p.is_zero() {
        Ok(RuinResult {
            prob_win: Ratio::zero(),
            prob_ruin: Ratio::one(),
            expected_duration: Ratio::from(b + spec.start),
        })
    } else {
        Err(WalkError::DomainRange { value: spec.p.to_string(), domain: "p in {0, 1}" })
    }
}

/// Picks the degenerate, unbiased or biased closed form.
pub fn solve(spec: &RuinSpec) -> Result<RuinResult> {
    let p = spec.p.value();
    if p.is_zero() || p.is_one() {
        ruin_degenerate(spec)
    } else if spec.p.is_half() {
        ruin_unbiased(spec)
    } else {
        ruin_biased(spec)
    }
}

/// Floating-point absorption values for barriers too far apart for exact
/// powers of `rho`. Approximate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ApproxRuin {
    pub prob_win: f64,
    pub prob_ruin: f64,
    pub expected_duration: f64,
}

/// Log-space evaluation of the biased formulas; `p = 1/2` falls back to
/// the unbiased ones. Start offset 0 only.
pub fn ruin_approx(a: u64, b: u64, p: f64) -> Result<ApproxRuin> {
    if !(p > 0.0 && p < 1.0) {
        return Err(WalkError::DomainRange { value: p.to_string(), domain: "(0, 1)" });
    }
    if a == 0 || b == 0 {
        return Err(WalkError::InvalidSpec(format!("A = {a}, B = {b}")));
    }
    let (af, bf) = (a as f64, b as f64);
    let q = 1.0 - p;
    if p == 0.5 {
        return Ok(ApproxRuin {
            prob_win: bf / (af + bf),
            prob_ruin: af / (af + bf),
            expected_duration: af * bf,
        });
    }
    let l = (q / p).ln();
    // (1 - rho^B) / (1 - rho^(A+B)) without forming rho^(A+B)
    let win = if l > 0.0 {
        (-af * l).exp() * (-(-bf * l).exp_m1()) / (-(-(af + bf) * l).exp_m1())
    } else {
        (bf * l).exp_m1() / ((af + bf) * l).exp_m1()
    };
    Ok(ApproxRuin {
        prob_win: win,
        prob_ruin: 1.0 - win,
        expected_duration: (bf - (af + bf) * win) / (q - p),
    })
}

/// Target barrier for [`escape_probability`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Horizon {
    Finite(u64),
    /// The limit `N -> infinity`.
    Infinite,
}

fn require_open_unit(p: &Prob) -> Result<()> {
    if p.value().is_zero() || p.value().is_one() {
        Err(WalkError::DomainRange { value: p.to_string(), domain: "0 < p < 1" })
    } else {
        Ok(())
    }
}

/// Probability of reaching `N` before `0` from `S_0 = 1`:
/// `(1 - q/p) / (1 - (q/p)^N)`; in the limit `1 - q/p` for `p > q` and
/// `0` for `p < q`.
pub fn escape_probability(p: &Prob, horizon: Horizon) -> Result<Ratio> {
    require_open_unit(p)?;
    if p.is_half() {
        return Err(WalkError::NotBiased);
    }
    let q = p.complement();
    let rho = q.value() / p.value();
    let one = Ratio::one();
    match horizon {
        Horizon::Finite(0) => {
            Err(WalkError::DomainRange { value: "N = 0".into(), domain: "N >= 1" })
        }
        Horizon::Finite(n) => Ok((&one - &rho) / (&one - &rho.pow(n as i32))),
        Horizon::Infinite if p.value() > q.value() => Ok(one - rho),
        Horizon::Infinite => Ok(Ratio::zero()),
    }
}

/// Fair-walk escape probability `1/N` (and `0` in the limit).
pub fn escape_probability_fair(horizon: Horizon) -> Result<Ratio> {
    match horizon {
        Horizon::Finite(0) => {
            Err(WalkError::DomainRange { value: "N = 0".into(), domain: "N >= 1" })
        }
        Horizon::Finite(n) => Ok(Ratio::new(1, n as i64)),
        Horizon::Infinite => Ok(Ratio::zero()),
    }
}

/// Probability of ever hitting 0 from `S_0 = start` with no upper barrier:
/// `min(1, q/p)` from `+1`, `min(1, p/q)` from `-1`.
pub fn hit_zero_probability(p: &Prob, start: i8) -> Result<Ratio> {
    require_open_unit(p)?;
    let q = p.complement();
    let r = match start {
        1 => q.value() / p.value(),
        -1 => p.value() / q.value(),
        _ => {
            return Err(WalkError::DomainRange { value: start.to_string(), domain: "start = ±1" })
        }
    };
    Ok(r.min(Ratio::one()))
}
