//! Seeded Monte Carlo estimates for the exact laws.
//!
//! Step `k` of trial `t` is drawn from Philox4x32-10 keyed by
//! `(seed, t, k)`, so estimates depend only on `(seed, trials)`: the number
//! of streams and the thread schedule never change a result. Per-trial
//! outcomes are integers and are aggregated with integer sums.

pub mod philox;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Result, WalkError};
use crate::laws::{self, WalkParams};
use crate::numerics::{Prob, Ratio};
use crate::paths::Path;
use crate::ruin::{self, RuinSpec};

/// Per-trial step limit for absorption runs.
pub const STEP_CAP: u64 = 10_000_000;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimConfig {
    pub seed: u64,
    pub trials: u64,
    /// Number of contiguous trial blocks processed in parallel.
    pub streams: u32,
}

impl SimConfig {
    pub fn new(seed: u64, trials: u64) -> Self {
        SimConfig { seed, trials, streams: 1 }
    }

    pub fn with_streams(mut self, streams: u32) -> Self {
        self.streams = streams.max(1);
        self
    }
}

/// Sample mean with its standard error and a normal 95% interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub trials: u64,
    pub ci95: (f64, f64),
}

impl Estimate {
    /// From integer sums of `trials` observations.
    fn from_sums(sum: u128, sumsq: u128, trials: u64) -> Self {
        if trials == 0 {
            return Estimate { mean: f64::NAN, stderr: f64::NAN, trials, ci95: (f64::NAN, f64::NAN) };
        }
        let n = trials as u128;
        let mean = sum as f64 / trials as f64;
        let stderr = if trials > 1 {
            // (n sumsq - sum^2) / (n (n-1)) is the unbiased sample variance
            let num = BigInt::from(n) * BigInt::from(sumsq) - BigInt::from(sum) * BigInt::from(sum);
            let var = Ratio::new(num, BigInt::from(n * (n - 1))).to_f64();
            (var.max(0.0) / trials as f64).sqrt()
        } else {
            0.0
        };
        Estimate { mean, stderr, trials, ci95: (mean - 1.96 * stderr, mean + 1.96 * stderr) }
    }

    /// Standard score of `exact` against this estimate; 0 when both the
    /// spread and the difference vanish.
    pub fn z(&self, exact: f64) -> f64 {
        let d = self.mean - exact;
        if d == 0.0 {
            0.0
        } else {
            d / self.stderr
        }
    }

    /// `|mean - exact| <= k * stderr`.
    pub fn within(&self, exact: f64, k: f64) -> bool {
        (self.mean - exact).abs() <= k * self.stderr
    }

    pub const CSV_HEADER: &'static str = "mean,stderr,lo,hi,trials";

    pub fn csv_fields(&self, precision: usize) -> String {
        format!(
            "{:.p$},{:.p$},{:.p$},{:.p$},{}",
            self.mean,
            self.stderr,
            self.ci95.0,
            self.ci95.1,
            self.trials,
            p = precision
        )
    }
}

impl Serialize for Estimate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Estimate", 4)?;
        st.serialize_field("mean", &self.mean)?;
        st.serialize_field("stderr", &self.stderr)?;
        st.serialize_field("ci95", &[self.ci95.0, self.ci95.1])?;
        st.serialize_field("trials", &self.trials)?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateRow {
    pub index: i64,
    pub estimate: Estimate,
}

/// Empirical counterpart of a [`laws::LawTable`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateTable {
    pub label: String,
    pub rows: Vec<EstimateRow>,
}

/// Draws ±1 steps for a fixed seed and up-probability.
#[derive(Clone, Copy, Debug)]
struct StepSource {
    seed: u64,
    /// `floor(p * 2^64)`; a draw below it is an up-step.
    threshold: u128,
}

impl StepSource {
    fn new(seed: u64, p: &Prob) -> Self {
        let scaled = p.value().numer() * (BigInt::from(1u8) << 64u32) / p.value().denom();
        StepSource { seed, threshold: scaled.to_u128().expect("p in [0, 1]") }
    }

    #[inline]
    fn step(&self, trial: u64, k: u64) -> i64 {
        if (philox::draw_u64(self.seed, trial, k) as u128) < self.threshold {
            1
        } else {
            -1
        }
    }
}

/// Integer sums of `width` per-trial observations.
#[derive(Clone, Debug)]
struct Tally {
    sum: Vec<u128>,
    sumsq: Vec<u128>,
}

impl Tally {
    fn new(width: usize) -> Self {
        Tally { sum: vec![0; width], sumsq: vec![0; width] }
    }

    fn add(&mut self, obs: &[u64]) {
        for (i, &v) in obs.iter().enumerate() {
            self.sum[i] += v as u128;
            self.sumsq[i] += (v as u128) * (v as u128);
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for i in 0..self.sum.len() {
            self.sum[i] += other.sum[i];
            self.sumsq[i] += other.sumsq[i];
        }
        self
    }

    fn estimate(&self, slot: usize, trials: u64) -> Estimate {
        Estimate::from_sums(self.sum[slot], self.sumsq[slot], trials)
    }
}

/// Runs `trial(t, obs)` for every trial, each filling `width` observations.
fn run_trials<F>(cfg: &SimConfig, width: usize, trial: F) -> Tally
where
    F: Fn(u64, &mut [u64]) + Sync,
{
    let streams = cfg.streams.max(1) as u64;
    let block = cfg.trials.div_ceil(streams).max(1);
    let blocks: Vec<(u64, u64)> = (0..streams)
        .map(|s| (s * block, ((s + 1) * block).min(cfg.trials)))
        .filter(|(lo, hi)| lo < hi)
        .collect();
    let tallies: Vec<Tally> = blocks
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut tally = Tally::new(width);
            let mut obs = vec![0u64; width];
            for t in lo..hi {
                obs.iter_mut().for_each(|v| *v = 0);
                trial(t, &mut obs);
                tally.add(&obs);
            }
            tally
        })
        .collect();
    tallies.into_iter().fold(Tally::new(width), Tally::merge)
}

/// `cfg.trials` independent walks of `steps` steps.
pub fn simulate_walk(cfg: &SimConfig, w: &WalkParams, steps: u64) -> impl Iterator<Item = Path> {
    let src = StepSource::new(cfg.seed, w.prob());
    (0..cfg.trials).map(move |t| {
        let steps = (0..steps).map(|k| src.step(t, k) as i8).collect();
        Path::from_steps(steps).expect("generated steps are ±1")
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RuinEstimate {
    pub prob_win: Estimate,
    pub duration: Estimate,
    /// Trials stopped by the step cap; excluded from both estimates.
    pub capped: u64,
    pub trials: u64,
}

impl RuinEstimate {
    pub fn capped_fraction(&self) -> f64 {
        self.capped as f64 / self.trials as f64
    }
}

/// Runs walks to absorption at `+A` or `-B`.
pub fn estimate_ruin(cfg: &SimConfig, spec: &RuinSpec) -> RuinEstimate {
    estimate_ruin_capped(cfg, spec, STEP_CAP)
}

pub fn estimate_ruin_capped(cfg: &SimConfig, spec: &RuinSpec, cap: u64) -> RuinEstimate {
    let src = StepSource::new(cfg.seed, &spec.p);
    let upper = spec.upper as i64;
    let lower = -(spec.lower as i64);
    let tally = run_trials(cfg, 3, |t, obs| {
        let mut s = spec.start;
        let mut k = 0u64;
        while s < upper && s > lower {
            if k == cap {
                obs[2] = 1;
                return;
            }
            s += src.step(t, k);
            k += 1;
        }
        obs[0] = (s == upper) as u64;
        obs[1] = k;
    });
    let capped = tally.sum[2] as u64;
    let done = cfg.trials - capped;
    RuinEstimate {
        prob_win: tally.estimate(0, done),
        duration: tally.estimate(1, done),
        capped,
        trials: cfg.trials,
    }
}

/// Empirical lead-time distribution over `2n` fair steps, using the
/// either-endpoint-positive rule for each unit of time.
pub fn estimate_lead_time(cfg: &SimConfig, n: u64) -> EstimateTable {
    let src = StepSource::new(cfg.seed, &Prob::half());
    let width = n as usize + 1;
    let tally = run_trials(cfg, width, |t, obs| {
        let mut s = 0i64;
        let mut positive = 0usize;
        for k in 0..2 * n {
            let next = s + src.step(t, k);
            if s > 0 || next > 0 {
                positive += 1;
            }
            s = next;
        }
        obs[positive / 2] = 1;
    });
    EstimateTable {
        label: format!("lead time pmf estimate, 2n = {}", 2 * n),
        rows: (0..width)
            .map(|k| EstimateRow { index: k as i64, estimate: tally.estimate(k, cfg.trials) })
            .collect(),
    }
}

fn count_returns(src: &StepSource, t: u64, steps: u64) -> usize {
    let mut s = 0i64;
    let mut returns = 0;
    for k in 0..steps {
        s += src.step(t, k);
        if s == 0 {
            returns += 1;
        }
    }
    returns
}

/// Probability of exactly `r` returns to the origin within `2n` fair steps.
pub fn estimate_return_counts(cfg: &SimConfig, n: u64, r: u64) -> Estimate {
    let src = StepSource::new(cfg.seed, &Prob::half());
    let tally = run_trials(cfg, 1, |t, obs| {
        obs[0] = (count_returns(&src, t, 2 * n) as u64 == r) as u64;
    });
    tally.estimate(0, cfg.trials)
}

/// Distribution of the number of returns within `2n` fair steps.
pub fn estimate_return_count_table(cfg: &SimConfig, n: u64) -> EstimateTable {
    let src = StepSource::new(cfg.seed, &Prob::half());
    let width = n as usize + 1;
    let tally = run_trials(cfg, width, |t, obs| {
        obs[count_returns(&src, t, 2 * n)] = 1;
    });
    EstimateTable {
        label: format!("return count estimate, 2n = {}", 2 * n),
        rows: (0..width)
            .map(|r| EstimateRow { index: r as i64, estimate: tally.estimate(r, cfg.trials) })
            .collect(),
    }
}

/// Probability that `S_{2n} = 0`.
pub fn estimate_return_at(cfg: &SimConfig, w: &WalkParams, n: u64) -> Estimate {
    let src = StepSource::new(cfg.seed, w.prob());
    let tally = run_trials(cfg, 1, |t, obs| {
        let s: i64 = (0..2 * n).map(|k| src.step(t, k)).sum();
        obs[0] = (s == 0) as u64;
    });
    tally.estimate(0, cfg.trials)
}

/// Probability that the first return to the origin happens at `2n`.
pub fn estimate_first_return(cfg: &SimConfig, w: &WalkParams, n: u64) -> Estimate {
    let src = StepSource::new(cfg.seed, w.prob());
    let tally = run_trials(cfg, 1, |t, obs| {
        let mut s = 0i64;
        for k in 0..2 * n {
            s += src.step(t, k);
            if s == 0 {
                obs[0] = (k + 1 == 2 * n) as u64;
                return;
            }
        }
    });
    tally.estimate(0, cfg.trials)
}

/// One Monte Carlo estimate set against its exact value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Calibration {
    pub label: String,
    pub estimate: Estimate,
    pub exact: f64,
    pub z: f64,
}

impl Calibration {
    fn new(label: impl Into<String>, estimate: Estimate, exact: &Ratio) -> Self {
        let exact = exact.to_f64();
        Calibration { label: label.into(), estimate, exact, z: estimate.z(exact) }
    }

    pub fn within_3sigma(&self) -> bool {
        self.estimate.within(self.exact, 3.0)
    }
}

/// Estimates for a fixed set of laws and parameters at one seed, each
/// paired with its exact value.
pub fn calibration_battery(cfg: &SimConfig) -> Result<Vec<Calibration>> {
    let half = Prob::half();
    let fair = WalkParams::fair();
    let third: WalkParams = "1/3".parse()?;
    let mut out = Vec::new();

    for (a, b, p) in [(5u64, 3u64, "1/2"), (3, 3, "45/100"), (10, 10, "49/100"), (4, 6, "3/5")] {
        let spec = RuinSpec::new(a, b, p.parse()?)?;
        let exact = ruin::solve(&spec)?;
        let est = estimate_ruin(cfg, &spec);
        if est.capped > 0 {
            return Err(WalkError::DomainRange {
                value: format!("{} capped trials", est.capped),
                domain: "ruin runs below the step cap",
            });
        }
        out.push(Calibration::new(format!("ruin win A={a} B={b} p={p}"), est.prob_win, &exact.prob_win));
        out.push(Calibration::new(
            format!("ruin duration A={a} B={b} p={p}"),
            est.duration,
            &exact.expected_duration,
        ));
    }

    let lead = estimate_lead_time(cfg, 10);
    let pmf = laws::lead_time_pmf(10, &fair)?;
    for k in [0usize, 5] {
        out.push(Calibration::new(format!("lead time 2n=20 k={k}"), lead.rows[k].estimate, &pmf.rows[k].exact));
    }
    let lead1 = estimate_lead_time(cfg, 1);
    out.push(Calibration::new("lead time 2n=2 k=0", lead1.rows[0].estimate, &Ratio::half()));

    for r in [0u64, 10, 20] {
        let exact = laws::return_count_pmf(r, 50, &fair)?;
        out.push(Calibration::new(
            format!("return count 2n=100 r={r}"),
            estimate_return_counts(cfg, 50, r),
            &exact,
        ));
    }
    out.push(Calibration::new(
        "first return 2n=20 p=1/3",
        estimate_first_return(cfg, &third, 10),
        &laws::first_return_prob(10, &third)?,
    ));
    out.push(Calibration::new(
        "return at 2n=20 p=1/3",
        estimate_return_at(cfg, &third, 10),
        &laws::u2n(10, &third),
    ));
    let ruin_offset = RuinSpec::with_start(5, 3, half, 2)?;
    let est = estimate_ruin(cfg, &ruin_offset);
    out.push(Calibration::new(
        "ruin duration A=5 B=3 start=2",
        est.duration,
        &ruin::ruin_unbiased(&ruin_offset)?.expected_duration,
    ));
    Ok(out)
}
