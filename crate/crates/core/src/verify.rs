//! Self-check battery: every closed form against exhaustive enumeration or
//! an exact linear solve, plus the identities tying the laws together.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Result, WalkError};
use crate::laws::{self, WalkParams};
use crate::numerics::{binomial, pow2, Prob, Ratio};
use crate::paths::{self, LatticePoint, LoopMode, Path};
use crate::recurrence;
use crate::ruin::{self, RuinSpec};

/// Largest half-length checked by enumeration (paths of length 14).
pub const ENUMERATION_HALF_LENGTH: u64 = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Ballot,
    Laws,
    Ruin,
    Recurrence,
}

impl Group {
    pub const ALL: [Group; 4] = [Group::Ballot, Group::Laws, Group::Ruin, Group::Recurrence];

    pub fn name(self) -> &'static str {
        match self {
            Group::Ballot => "ballot",
            Group::Laws => "laws",
            Group::Ruin => "ruin",
            Group::Recurrence => "recurrence",
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Group {
    type Err = WalkError;

    fn from_str(s: &str) -> Result<Self> {
        Group::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| WalkError::Parse(format!("unknown check group '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub group: Group,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    pub only: Option<Group>,
    /// Test hook: the named check is reported as failed.
    pub inject_fault: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("group,check,status,detail\n");
        for c in &self.checks {
            let status = if c.passed { "pass" } else { "fail" };
            out.push_str(&format!("{},{},{},{}\n", c.group, c.name, status, c.detail.replace(',', ";")));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let failed: Vec<&str> = self.failures().map(|c| c.name.as_str()).collect();
        serde_json::to_string_pretty(&serde_json::json!({
            "passed": self.passed(),
            "total": self.checks.len(),
            "failed": failed,
            "checks": self.checks,
        }))
        .unwrap()
    }
}

struct Battery<'a> {
    opts: &'a VerifyOptions,
    checks: Vec<Check>,
}

impl Battery<'_> {
    fn record(&mut self, group: Group, name: &str, outcome: Result<std::result::Result<(), String>>) {
        let (mut passed, mut detail) = match outcome {
            Ok(Ok(())) => (true, String::new()),
            Ok(Err(d)) => (false, d),
            Err(e) => (false, format!("error: {e}")),
        };
        if self.opts.inject_fault.as_deref() == Some(name) {
            passed = false;
            detail = "injected fault".into();
        }
        self.checks.push(Check { group, name: name.to_string(), passed, detail });
    }
}

fn expect_eq<T: PartialEq + fmt::Display>(what: &str, got: T, want: T) -> std::result::Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got}, expected {want}"))
    }
}

/// Collects the first mismatch of a sweep.
fn sweep<I>(items: I) -> Result<std::result::Result<(), String>>
where
    I: IntoIterator<Item = Result<std::result::Result<(), String>>>,
{
    for item in items {
        match item? {
            Ok(()) => {}
            Err(e) => return Ok(Err(e)),
        }
    }
    Ok(Ok(()))
}

/// Probability of a path under up-probability `p`.
fn path_weight(path: &Path, p: &Ratio, q: &Ratio) -> Ratio {
    let ups = path.steps().iter().filter(|&&s| s > 0).count() as i32;
    let downs = path.len() as i32 - ups;
    p.pow(ups) * q.pow(downs)
}

fn enumerated_prob<F: Fn(&Path) -> bool>(len: u64, w: &WalkParams, pred: F) -> Result<Ratio> {
    let (p, q) = (w.p().clone(), w.q());
    if w.is_fair() {
        let count = paths::count_enumerated(len, pred)?;
        return Ok(Ratio::of_counts(&count.into(), &pow2(len)));
    }
    Ok(paths::enumerate_paths(len, pred)?.iter().map(|path| path_weight(path, &p, &q)).sum())
}

fn ballot_checks(b: &mut Battery) {
    let n = 2 * ENUMERATION_HALF_LENGTH;
    b.record(
        Group::Ballot,
        "path-count-enumeration",
        sweep((1..=n).flat_map(|x| {
            (-(x as i64)..=x as i64).map(move |y| {
                let got = paths::count_paths_to(x, y);
                let want = paths::count_enumerated(x, |p| p.endpoint().y == y)?;
                Ok(expect_eq(&format!("N({x},{y})"), got, want.into()))
            })
        })),
    );
    b.record(
        Group::Ballot,
        "ballot-theorem",
        sweep((1..=n).flat_map(|x| {
            (1..=x as i64).filter(move |y| (x as i64 + y) % 2 == 0).map(move |y| {
                let got = paths::count_always_positive(x, y);
                let want = paths::count_enumerated(x, |p| {
                    p.endpoint().y == y && p.sums()[1..].iter().all(|&s| s > 0)
                })?;
                Ok(expect_eq(&format!("positive paths to ({x},{y})"), got, want.into()))
            })
        })),
    );
    b.record(
        Group::Ballot,
        "reversal-duality",
        sweep((1..=n).flat_map(|x| {
            (1..=x as i64).filter(move |y| (x as i64 + y) % 2 == 0).map(move |y| {
                let below_end = paths::count_enumerated(x, |p| {
                    let s = p.sums();
                    p.endpoint().y == y && s[..s.len() - 1].iter().all(|&v| v < y)
                })?;
                let reversed = paths::enumerate_paths(x, |p| p.endpoint().y == y)?
                    .iter()
                    .map(paths::reverse_path)
                    .filter(|p| p.sums()[1..].iter().all(|&s| s > 0))
                    .count() as u64;
                Ok(expect_eq(&format!("max-at-end paths to ({x},{y})"), below_end, reversed))
            })
        })),
    );
    let mut pairs = Vec::new();
    for bx in 1..=12u64 {
        for ax in 0..bx {
            for ay in 1..=12i64 {
                for by in 1..=12i64 {
                    if ((bx - ax) as i64 + by - ay) % 2 == 0 && (by - ay).unsigned_abs() <= bx - ax {
                        pairs.push((LatticePoint::new(ax, ay), LatticePoint::new(bx, by)));
                    }
                }
            }
        }
    }
    b.record(
        Group::Ballot,
        "reflection-lemma",
        sweep(pairs.into_iter().map(|(a, bp)| {
            let (touching, mirrored) = paths::count_touching_reflection(a, bp)?;
            Ok(expect_eq(&format!("reflection {a} -> {bp}"), touching, mirrored))
        })),
    );
    b.record(
        Group::Ballot,
        "loop-counts",
        sweep((1..=ENUMERATION_HALF_LENGTH).map(|n| {
            let nonneg = paths::count_enumerated(2 * n, |p| {
                p.endpoint().y == 0 && p.sums().iter().all(|&s| s >= 0)
            })?;
            let positive = paths::count_enumerated(2 * n, |p| {
                p.endpoint().y == 0 && p.sums()[1..p.len()].iter().all(|&s| s > 0)
            })?;
            Ok(expect_eq(&format!("L({})", 2 * n), paths::count_loops(n, LoopMode::Nonnegative), nonneg.into())
                .and(expect_eq(
                    &format!("positive L({})", 2 * n),
                    paths::count_loops(n, LoopMode::StrictlyPositive),
                    positive.into(),
                )))
        })),
    );
}

fn law_checks(b: &mut Battery) -> Result<()> {
    let fair = WalkParams::fair();
    let third: WalkParams = "1/3".parse()?;
    let three_fifths: WalkParams = "3/5".parse()?;
    let halves = 1..=ENUMERATION_HALF_LENGTH;

    b.record(
        Group::Laws,
        "u2n-enumeration",
        sweep([&fair, &third, &three_fifths].into_iter().flat_map(|w| {
            halves.clone().map(move |n| {
                let want = enumerated_prob(2 * n, w, |p| p.endpoint().y == 0)?;
                Ok(expect_eq(&format!("u({}) p={}", 2 * n, w.p()), laws::u2n(n, w), want))
            })
        })),
    );
    b.record(
        Group::Laws,
        "first-return-enumeration",
        sweep([&fair, &third, &three_fifths].into_iter().flat_map(|w| {
            halves.clone().map(move |n| {
                let want = enumerated_prob(2 * n, w, |p| {
                    p.endpoint().y == 0 && p.sums()[1..p.len()].iter().all(|&s| s != 0)
                })?;
                Ok(expect_eq(&format!("f({}) p={}", 2 * n, w.p()), laws::first_return_prob(n, w)?, want))
            })
        })),
    );
    b.record(
        Group::Laws,
        "no-return-enumeration",
        sweep(halves.clone().map(|n| {
            let want = enumerated_prob(2 * n, &fair, |p| p.sums()[1..].iter().all(|&s| s != 0))?;
            Ok(expect_eq(&format!("no return to {}", 2 * n), laws::no_return_prob(n, &fair)?, want))
        })),
    );
    b.record(
        Group::Laws,
        "nonnegative-enumeration",
        sweep(halves.clone().map(|n| {
            let want = enumerated_prob(2 * n, &fair, |p| p.sums().iter().all(|&s| s >= 0))?;
            Ok(expect_eq(&format!("nonnegative to {}", 2 * n), laws::nonnegative_prob(n, &fair)?, want))
        })),
    );
    b.record(
        Group::Laws,
        "first-passage-enumeration",
        sweep(halves.clone().map(|n| {
            let len = 2 * n - 1;
            let want = enumerated_prob(len, &fair, |p| {
                p.endpoint().y == -1 && p.sums()[..p.len()].iter().all(|&s| s >= 0)
            })?;
            Ok(expect_eq(
                &format!("first passage at {len}"),
                laws::first_passage_minus1_prob(n, &fair)?,
                want,
            ))
        })),
    );
    b.record(
        Group::Laws,
        "lead-time-enumeration",
        sweep(halves.clone().map(|n| {
            let pmf = laws::lead_time_pmf(n, &fair)?;
            let all = paths::enumerate_paths(2 * n, |_| true)?;
            let mut counts = vec![0u64; n as usize + 1];
            for p in &all {
                counts[p.positive_side_time() / 2] += 1;
            }
            for (k, c) in counts.iter().enumerate() {
                let want = Ratio::of_counts(&(*c).into(), &pow2(2 * n));
                if pmf.rows[k].exact != want {
                    return Ok(Err(format!("p(2*{k},{}) = {} vs {}", 2 * n, pmf.rows[k].exact, want)));
                }
            }
            Ok(Ok(()))
        })),
    );
    b.record(
        Group::Laws,
        "return-count-enumeration",
        sweep(halves.clone().flat_map(|n| {
            (0..=n).map(move |r| {
                let want = enumerated_prob(2 * n, &WalkParams::fair(), |p| p.returns_to_origin() as u64 == r)?;
                Ok(expect_eq(
                    &format!("{r} returns by {}", 2 * n),
                    laws::return_count_pmf(r, n, &WalkParams::fair())?,
                    want,
                ))
            })
        })),
    );
    b.record(
        Group::Laws,
        "u-recurrence-identity",
        sweep((1..=200u64).map(|n| {
            let lhs = laws::u2n(n - 1, &fair);
            let rhs = Ratio::new(2 * n as i64, 2 * n as i64 - 1) * laws::u2n(n, &fair);
            Ok(expect_eq(&format!("u({}) vs u({})", 2 * n - 2, 2 * n), lhs, rhs))
        })),
    );
    b.record(
        Group::Laws,
        "first-return-difference",
        sweep((1..=200u64).map(|n| {
            let diff = laws::u2n(n - 1, &fair) - laws::u2n(n, &fair);
            Ok(expect_eq(&format!("f({})", 2 * n), laws::first_return_prob(n, &fair)?, diff))
        })),
    );
    b.record(
        Group::Laws,
        "lead-time-normalized",
        sweep((1..=60u64).map(|n| {
            let pmf = laws::lead_time_pmf(n, &fair)?;
            let symmetric = (0..=n as usize).all(|k| pmf.rows[k].exact == pmf.rows[n as usize - k].exact);
            Ok(expect_eq(&format!("total 2n={}", 2 * n), pmf.total(), Ratio::one()).and(if symmetric {
                Ok(())
            } else {
                Err(format!("asymmetric pmf at 2n={}", 2 * n))
            }))
        })),
    );
    b.record(
        Group::Laws,
        "return-count-normalized",
        sweep((1..=60u64).map(|n| {
            let total: Ratio = (0..=n).map(|r| laws::return_count_pmf(r, n, &fair)).sum::<Result<Ratio>>()?;
            Ok(expect_eq(&format!("total 2n={}", 2 * n), total, Ratio::one()))
        })),
    );
    Ok(())
}

/// Win probability and expected duration from the first-step equations
/// `h(x) = p h(x+1) + q h(x-1)` and `e(x) = 1 + p e(x+1) + q e(x-1)` on the
/// interior `-B < x < A`, solved by Gaussian elimination over the rationals.
/// Returns the values at `start`.
pub fn first_step_solve(spec: &RuinSpec) -> Result<(Ratio, Ratio)> {
    let a = spec.upper as i64;
    let b = spec.lower as i64;
    let p = spec.p.value().clone();
    let q = spec.q();
    let states: Vec<i64> = (-b + 1..a).collect();
    let m = states.len();
    if m == 0 {
        return Err(WalkError::InvalidSpec("no interior states".into()));
    }
    // columns: m unknowns, then the two right-hand sides
    let mut rows: Vec<Vec<Ratio>> = vec![vec![Ratio::zero(); m + 2]; m];
    for (i, &x) in states.iter().enumerate() {
        rows[i][i] = Ratio::one();
        if x + 1 == a {
            rows[i][m] = rows[i][m].clone() + &p;
        } else {
            rows[i][i + 1] = -p.clone();
        }
        if x - 1 > -b {
            rows[i][i - 1] = -q.clone();
        }
        rows[i][m + 1] = Ratio::one();
    }
    for col in 0..m {
        let pivot = (col..m)
            .find(|&r| !rows[r][col].is_zero())
            .ok_or_else(|| WalkError::InvalidSpec("singular first-step system".into()))?;
        rows.swap(col, pivot);
        let inv = rows[col][col].recip().expect("nonzero pivot");
        for v in rows[col].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..m {
            if r != col && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in col..m + 2 {
                    let delta = &factor * &rows[col][c];
                    rows[r][c] = &rows[r][c] - &delta;
                }
            }
        }
    }
    let i = states
        .iter()
        .position(|&x| x == spec.start)
        .ok_or(WalkError::StartUnsupported(spec.start))?;
    Ok((rows[i][m].clone(), rows[i][m + 1].clone()))
}

fn ruin_checks(b: &mut Battery) -> Result<()> {
    let ps: Vec<Prob> = ["1/3", "1/2", "3/5"].iter().map(|s| s.parse()).collect::<Result<_>>()?;
    let mut specs = Vec::new();
    for p in &ps {
        for a in 1..12u64 {
            for lower in 1..=12 - a {
                specs.push(RuinSpec::new(a, lower, p.clone())?);
            }
        }
    }
    b.record(
        Group::Ruin,
        "first-step-solver",
        sweep(specs.iter().map(|spec| {
            let exact = ruin::solve(spec)?;
            let (win, duration) = first_step_solve(spec)?;
            let label = format!("A={} B={} p={}", spec.upper, spec.lower, spec.p);
            Ok(expect_eq(&format!("win {label}"), exact.prob_win, win)
                .and(expect_eq(&format!("duration {label}"), exact.expected_duration, duration)))
        })),
    );
    b.record(
        Group::Ruin,
        "win-plus-ruin",
        sweep(specs.iter().map(|spec| {
            let r = ruin::solve(spec)?;
            Ok(expect_eq(
                &format!("A={} B={} p={}", spec.upper, spec.lower, spec.p),
                r.prob_win + r.prob_ruin,
                Ratio::one(),
            ))
        })),
    );
    let mut offsets = Vec::new();
    for a in 1..8u64 {
        for lower in 1..8u64 {
            for k in -(lower as i64) + 1..a as i64 {
                offsets.push(RuinSpec::with_start(a, lower, Prob::half(), k)?);
            }
        }
    }
    b.record(
        Group::Ruin,
        "start-offset-solver",
        sweep(offsets.iter().map(|spec| {
            let exact = ruin::ruin_unbiased(spec)?;
            let (win, duration) = first_step_solve(spec)?;
            let label = format!("A={} B={} k={}", spec.upper, spec.lower, spec.start);
            Ok(expect_eq(&format!("win {label}"), exact.prob_win, win)
                .and(expect_eq(&format!("duration {label}"), exact.expected_duration, duration)))
        })),
    );
    let rhos: Vec<Ratio> = ["1/2", "2/3", "51/49", "11/9", "3/2", "2"]
        .iter()
        .map(|s| s.parse())
        .collect::<Result<_>>()?;
    b.record(
        Group::Ruin,
        "symmetric-form",
        sweep(rhos.iter().flat_map(|rho| {
            (1..=10u64).map(move |a| {
                // rho = q/p  =>  p = 1/(1+rho)
                let p = Prob::new((Ratio::one() + rho).recip().expect("rho > 0"))?;
                let direct = ruin::solve(&RuinSpec::new(a, a, p)?)?;
                let sym = ruin::ruin_symmetric(a, rho)?;
                let label = format!("A={a} rho={rho}");
                Ok(expect_eq(&format!("win {label}"), sym.prob_win, direct.prob_win)
                    .and(expect_eq(&format!("duration {label}"), sym.expected_duration, direct.expected_duration)))
            })
        })),
    );
    b.record(
        Group::Ruin,
        "duration-in-rho",
        sweep(rhos.iter().filter(|r| !r.is_one()).flat_map(|rho| {
            (1..=6u64).flat_map(move |a| {
                (1..=6u64).map(move |lower| {
                    let p = Prob::new((Ratio::one() + rho).recip().expect("rho > 0"))?;
                    let direct = ruin::solve(&RuinSpec::new(a, lower, p)?)?;
                    Ok(expect_eq(
                        &format!("A={a} B={lower} rho={rho}"),
                        ruin::duration_in_rho(a, lower, rho)?,
                        direct.expected_duration,
                    ))
                })
            })
        })),
    );
    Ok(())
}

fn recurrence_checks(b: &mut Battery) -> Result<()> {
    let ps: Vec<WalkParams> = ["1/3", "3/5", "1/10", "7/8"].iter().map(|s| s.parse()).collect::<Result<_>>()?;
    b.record(
        Group::Recurrence,
        "return-identity",
        sweep(ps.iter().map(|w| {
            let u = recurrence::series_sum_u(w).ok_or(WalkError::NotBiased)?;
            let p0 = recurrence::prob_return_origin(w);
            let via_p0 = (Ratio::one() - p0).recip().ok_or(WalkError::NotBiased)?;
            Ok(expect_eq(&format!("p={}", w.p()), u, via_p0))
        })),
    );
    b.record(
        Group::Recurrence,
        "partial-sums-increase",
        sweep(ps.iter().map(|w| {
            let limit = recurrence::series_sum_u(w).ok_or(WalkError::NotBiased)?;
            let s = recurrence::partial_sum_u(w, 60);
            Ok(if s < limit && s > Ratio::one() {
                Ok(())
            } else {
                Err(format!("partial sum {s} vs limit {limit} at p={}", w.p()))
            })
        })),
    );
    b.record(
        Group::Recurrence,
        "u2d-square",
        sweep((0..=40u64).map(|n| {
            Ok(expect_eq(&format!("u2d({n})"), recurrence::u2d(n), laws::u2n(n, &WalkParams::fair()).pow(2)))
        })),
    );
    b.record(
        Group::Recurrence,
        "u3d-multinomial",
        sweep((0..=12u64).map(|n| {
            // sum over j + k + l = n of (2n)! / (j! k! l!)^2, divided by 6^{2n}
            let mut total = crate::numerics::BigCount::from(0u8);
            for j in 0..=n {
                for k in 0..=n - j {
                    let l = n - j - k;
                    total += crate::numerics::multinomial(2 * n, &[j, j, k, k, l, l])?;
                }
            }
            let want = Ratio::of_counts(&total, &(crate::numerics::BigCount::from(6u8).pow(2 * n as u32)));
            Ok(expect_eq(&format!("u3d({n})"), recurrence::u3d(n)?, want))
        })),
    );
    b.record(
        Group::Recurrence,
        "u3d-below-bound",
        sweep((10..=300u64).map(|n| {
            let (u, bound) = (recurrence::u3d_f64(n), recurrence::u3d_bound(n));
            Ok(if u < bound { Ok(()) } else { Err(format!("u3d({n}) = {u} >= {bound}")) })
        })),
    );
    b.record(Group::Recurrence, "three-d-bracket", {
        recurrence::recurrence_bracket(3, 200).map(|report| match report.p_return {
            recurrence::SeriesValue::Bracket { lo, hi } if lo < hi && lo > 0.3 && hi < 0.4 => Ok(()),
            other => Err(format!("bracket {other:?}")),
        })
    });
    b.record(
        Group::Recurrence,
        "central-binomial",
        sweep((1..=30u64).map(|n| {
            Ok(expect_eq(
                &format!("C({},{n})", 2 * n),
                binomial(2 * n, n as i64),
                binomial(2 * n - 1, n as i64 - 1) * 2u8,
            ))
        })),
    );
    Ok(())
}

/// Runs the battery, or one group of it.
pub fn run(opts: &VerifyOptions) -> Result<VerifyReport> {
    let mut b = Battery { opts, checks: Vec::new() };
    let wanted = |g: Group| opts.only.map_or(true, |o| o == g);
    if wanted(Group::Ballot) {
        ballot_checks(&mut b);
    }
    if wanted(Group::Laws) {
        law_checks(&mut b)?;
    }
    if wanted(Group::Ruin) {
        ruin_checks(&mut b)?;
    }
    if wanted(Group::Recurrence) {
        recurrence_checks(&mut b)?;
    }
    if let Some(name) = &opts.inject_fault {
        if !b.checks.iter().any(|c| &c.name == name) {
            return Err(WalkError::Parse(format!("no check named '{name}'")));
        }
    }
    Ok(VerifyReport { checks: b.checks })
}
