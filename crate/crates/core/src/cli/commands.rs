use clap::ValueEnum;
use serde_json::json;

use super::output::{Cell, Format, Frame};
use super::{CliError, FigureArgs, LawArgs, LawName, Outcome, RecurrenceArgs, Settings, SimTarget, SimulateArgs};
use crate::laws::{self, LawTable, Span, WalkParams};
use crate::montecarlo::{self, Estimate, SimConfig};
use crate::numerics::{Prob, Ratio};
use crate::paths::{self, LoopMode};
use crate::recurrence::{self, RecurrenceReport, SeriesValue};
use crate::ruin::{self, Horizon, RuinResult, RuinSpec};
use crate::verify::{self, Group, VerifyOptions};

type CmdResult = Result<Outcome, CliError>;

fn emit(frame: &Frame, s: &Settings) -> CmdResult {
    Ok(Outcome { text: frame.render(s.format, s.precision), failure: None })
}

fn need<T>(value: Option<T>, flag: &str, what: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("{what} requires --{flag}")))
}

fn walk(p: &Option<String>) -> Result<WalkParams, CliError> {
    match p {
        Some(p) => Ok(p.parse()?),
        None => Ok(WalkParams::fair()),
    }
}

fn law_frame(table: &LawTable) -> Frame {
    let mut f = Frame::new(table.label.clone(), &["index", "exact", "decimal"]);
    for row in &table.rows {
        f.push(vec![row.index.into(), row.exact.to_string().into(), row.exact.clone().into()]);
    }
    f
}

fn quantity_frame(label: &str, rows: Vec<(&str, Cell, Cell)>) -> Frame {
    let mut f = Frame::new(label, &["quantity", "exact", "decimal"]);
    for (name, exact, decimal) in rows {
        f.push(vec![name.into(), exact, decimal]);
    }
    f
}

fn exact_frame(label: &str, value: Ratio) -> Frame {
    quantity_frame(label, vec![(label, value.to_string().into(), value.into())])
}

fn float_frame(label: &str, value: f64) -> Frame {
    quantity_frame(label, vec![(label, "".into(), value.into())])
}

fn ruin_frame(label: &str, r: RuinResult) -> Frame {
    quantity_frame(
        label,
        vec![
            ("prob_win", r.prob_win.to_string().into(), r.prob_win.into()),
            ("prob_ruin", r.prob_ruin.to_string().into(), r.prob_ruin.into()),
            ("expected_duration", r.expected_duration.to_string().into(), r.expected_duration.into()),
        ],
    )
}

/// Probability levels of the lead-quantile table.
pub const TABLE3_LEVELS: [&str; 14] =
    ["0.99", "0.95", "0.90", "0.80", "0.70", "0.60", "0.50", "0.40", "0.30", "0.20", "0.10", "0.05", "0.02", "0.01"];

/// Odds ratios of the symmetric-barrier table.
pub const TABLE4_RHOS: [&str; 3] = ["51/49", "55/45", "60/40"];

pub fn table(id: u8, s: &Settings) -> CmdResult {
    let fair = WalkParams::fair();
    let frame = match id {
        1 => law_frame(&laws::lead_time_pmf_at(10, &fair, s.precision)?),
        2 => law_frame(&laws::lead_time_cdf_table(10, &fair, s.precision)?),
        3 => {
            let year = Span { days: 365.0 };
            let mut f = Frame::new("lead quantile over 365 days", &["p", "value", "unit"]).meta("horizon_days", json!(365));
            for level in TABLE3_LEVELS {
                let span = laws::lead_fraction_quantile(level.parse().expect("fixed level"), year)?;
                let value = match span.unit() {
                    laws::SpanUnit::Days => span.days,
                    laws::SpanUnit::Hours => span.hours(),
                };
                f.push(vec![level.into(), value.into(), span.unit().suffix().into()]);
            }
            f
        }
        4 => {
            let mut f = Frame::new("symmetric barriers A = B", &["rho", "a", "prob_win", "prob_ruin"]);
            for rho in TABLE4_RHOS {
                let r: Ratio = rho.parse()?;
                for a in [3u64, 10] {
                    let res = ruin::ruin_symmetric(a, &r)?;
                    f.push(vec![rho.into(), a.into(), res.prob_win.into(), res.prob_ruin.into()]);
                }
            }
            f
        }
        _ => return Err(CliError::Usage(format!("unknown table id {id}"))),
    };
    emit(&frame, s)
}

fn horizon(text: &str) -> Result<Horizon, CliError> {
    if text == "inf" {
        Ok(Horizon::Infinite)
    } else {
        text.parse()
            .map(Horizon::Finite)
            .map_err(|_| CliError::Usage(format!("horizon must be an integer or 'inf', got '{text}'")))
    }
}

pub fn law(args: &LawArgs, s: &Settings) -> CmdResult {
    use LawName::*;
    let w = walk(&args.p)?;
    let name = args.name.to_possible_value().expect("law names").get_name().to_string();
    let label = name.as_str();
    let n = || need(args.n, "n", label);
    let frame = match args.name {
        U2n => exact_frame(label, laws::u2n(n()?, &w)),
        FirstReturn => exact_frame(label, laws::first_return_prob(n()?, &w)?),
        NoReturn => exact_frame(label, laws::no_return_prob(n()?, &w)?),
        Nonnegative => exact_frame(label, laws::nonnegative_prob(n()?, &w)?),
        FirstPassage => exact_frame(label, laws::first_passage_minus1_prob(n()?, &w)?),
        LeadTime => law_frame(&laws::lead_time_pmf_at(n()?, &w, s.precision)?),
        LeadCdf => match args.alpha {
            Some(alpha) => exact_frame(label, laws::lead_time_cdf(n()?, alpha, &w)?),
            None => law_frame(&laws::lead_time_cdf_table(n()?, &w, s.precision)?),
        },
        Arcsine => float_frame(label, laws::arcsine_cdf(need(args.frac, "frac", label)?)?),
        LeadQuantile => {
            let days = match &args.horizon {
                Some(h) => h.parse().map_err(|_| CliError::Usage(format!("horizon '{h}' is not a number of days")))?,
                None => 365.0,
            };
            let span = laws::lead_fraction_quantile(need(args.level, "level", label)?, Span { days })?;
            float_frame(label, span.days).meta("unit", json!("d"))
        }
        ReturnCount => {
            let n = n()?;
            match args.r {
                Some(r) => exact_frame(label, laws::return_count_pmf(r, n, &w)?),
                None => {
                    let mut t = LawTable::new(format!("return count pmf, 2n = {}", 2 * n), s.precision);
                    for r in 0..=n {
                        t.push(r as i64, laws::return_count_pmf(r, n, &w)?);
                    }
                    law_frame(&t)
                }
            }
        }
        Ruin | RuinUnbiased | RuinBiased => {
            let spec = RuinSpec::with_start(
                need(args.a, "a", label)?,
                need(args.b, "b", label)?,
                w.prob().clone(),
                args.start.unwrap_or(0),
            )?;
            let result = match args.name {
                RuinUnbiased => ruin::ruin_unbiased(&spec)?,
                RuinBiased => ruin::ruin_biased(&spec)?,
                _ => ruin::solve(&spec)?,
            };
            ruin_frame(label, result)
        }
        RuinSymmetric => {
            let rho: Ratio = need(args.rho.as_ref(), "rho", label)?.parse()?;
            ruin_frame(label, ruin::ruin_symmetric(need(args.a, "a", label)?, &rho)?)
        }
        DurationRho => {
            let rho: Ratio = need(args.rho.as_ref(), "rho", label)?.parse()?;
            exact_frame(label, ruin::duration_in_rho(need(args.a, "a", label)?, need(args.b, "b", label)?, &rho)?)
        }
        RuinApprox => {
            let r = ruin::ruin_approx(need(args.a, "a", label)?, need(args.b, "b", label)?, w.p().to_f64())?;
            quantity_frame(
                label,
                vec![
                    ("prob_win", "".into(), r.prob_win.into()),
                    ("prob_ruin", "".into(), r.prob_ruin.into()),
                    ("expected_duration", "".into(), r.expected_duration.into()),
                ],
            )
        }
        Escape => {
            let h = horizon(need(args.horizon.as_deref(), "horizon", label)?)?;
            let value = if w.is_fair() {
                ruin::escape_probability_fair(h)?
            } else {
                ruin::escape_probability(w.prob(), h)?
            };
            exact_frame(label, value)
        }
        HitZero => {
            let start = need(args.start, "start", label)?;
            let start = i8::try_from(start).map_err(|_| CliError::Usage("start must be 1 or -1".into()))?;
            exact_frame(label, ruin::hit_zero_probability(w.prob(), start)?)
        }
        SeriesSum => match recurrence::series_sum_u(&w) {
            Some(u) => exact_frame(label, u),
            None => quantity_frame(label, vec![(label, "divergent".into(), "divergent".into())]),
        },
        ReturnProb => exact_frame(label, recurrence::prob_return_origin(&w)),
        U2d => exact_frame(label, recurrence::u2d(n()?)),
        U3d => exact_frame(label, recurrence::u3d(n()?)?),
        U3dBound => float_frame(label, recurrence::u3d_bound(n()?)),
        PathCount | Ballot => {
            let (x, y) = (need(args.x, "x", label)?, need(args.y, "y", label)?);
            let count = if args.name == PathCount {
                paths::count_paths_to(x, y)
            } else {
                paths::count_always_positive(x, y)
            };
            quantity_frame(label, vec![(label, count.to_string().into(), count.to_string().into())])
        }
        Loops => {
            let mode = match args.mode.as_str() {
                "nonnegative" => LoopMode::Nonnegative,
                "positive" => LoopMode::StrictlyPositive,
                m => return Err(CliError::Usage(format!("unknown loop mode '{m}'"))),
            };
            let count = paths::count_loops(n()?, mode);
            quantity_frame(label, vec![(label, count.to_string().into(), count.to_string().into())])
        }
    };
    emit(&frame, s)
}

/// Symmetric-barrier values at `rho`, using the fair walk at `rho = 1`.
fn symmetric_at(a: u64, rho: &Ratio) -> Result<RuinResult, CliError> {
    if rho.is_one() {
        Ok(ruin::ruin_unbiased(&RuinSpec::new(a, a, Prob::half())?)?)
    } else {
        Ok(ruin::ruin_symmetric(a, rho)?)
    }
}

fn rho_grid(args: &FigureArgs) -> Vec<Ratio> {
    let steps = args.rho_steps.unwrap_or(10).max(1) as i64;
    let max = args.rho_max.unwrap_or(5) as i64;
    (1..=max * steps).map(|j| Ratio::new(j, steps)).collect()
}

pub fn figure(args: &FigureArgs, s: &Settings) -> CmdResult {
    let fair = WalkParams::fair();
    let n = args.n.unwrap_or(10);
    let frame = match args.id {
        3 => {
            let pmf = laws::lead_time_pmf_at(n, &fair, s.precision)?;
            let mut f = Frame::new(pmf.label.clone(), &["two_k", "exact"]);
            for row in pmf.rows {
                f.push(vec![(2 * row.index).into(), row.exact.into()]);
            }
            f
        }
        4 => {
            let cdf = laws::lead_time_cdf_table(n, &fair, s.precision)?;
            let mut f = Frame::new(cdf.label.clone(), &["two_alpha", "exact"]);
            for row in cdf.rows {
                f.push(vec![(2 * row.index).into(), row.exact.into()]);
            }
            f
        }
        5 => {
            let cdf = laws::lead_time_cdf_table(n, &fair, s.precision)?;
            let mut f = Frame::new(format!("lead time cdf vs arcsine, 2n = {}", 2 * n), &["alpha", "exact", "arcsine"]);
            for row in cdf.rows {
                let arcsine = laws::arcsine_cdf(row.index as f64 / n as f64)?;
                f.push(vec![row.index.into(), row.exact.into(), arcsine.into()]);
            }
            f
        }
        7 => {
            let barriers = if args.a.is_empty() { vec![3, 10] } else { args.a.clone() };
            let mut f = Frame::new("symmetric barriers: absorption vs rho", &["a", "rho", "prob_win", "prob_ruin"]);
            for &a in &barriers {
                for rho in rho_grid(args) {
                    let r = symmetric_at(a, &rho)?;
                    f.push(vec![a.into(), rho.into(), r.prob_win.into(), r.prob_ruin.into()]);
                }
            }
            f
        }
        8 => {
            let mut f = Frame::new("symmetric barriers: win probability vs A", &["rho", "a", "prob_win"]);
            for rho in TABLE4_RHOS {
                let r: Ratio = rho.parse()?;
                for a in 1..=args.a_max.unwrap_or(20) {
                    f.push(vec![rho.into(), a.into(), ruin::ruin_symmetric(a, &r)?.prob_win.into()]);
                }
            }
            f
        }
        9 => {
            let barriers = if args.a.is_empty() { vec![2, 3, 4] } else { args.a.clone() };
            let mut f = Frame::new("symmetric barriers: expected duration vs rho", &["a", "rho", "duration"]);
            for &a in &barriers {
                for rho in rho_grid(args) {
                    let r = symmetric_at(a, &rho)?;
                    f.push(vec![a.into(), rho.into(), r.expected_duration.into()]);
                }
            }
            f
        }
        id => return Err(CliError::Usage(format!("unknown figure id {id}; expected 3, 4, 5, 7, 8 or 9"))),
    };
    emit(&frame, s)
}

const ESTIMATE_COLUMNS: [&str; 8] = ["quantity", "mean", "stderr", "lo", "hi", "trials", "exact", "z"];

fn estimate_row(quantity: Cell, e: &Estimate, exact: Option<Ratio>) -> Vec<Cell> {
    let (exact_cell, z) = match exact {
        Some(x) => {
            let z = e.z(x.to_f64());
            (Cell::Exact(x), Cell::Float(z))
        }
        None => (Cell::Text(String::new()), Cell::Text(String::new())),
    };
    vec![
        quantity,
        e.mean.into(),
        e.stderr.into(),
        e.ci95.0.into(),
        e.ci95.1.into(),
        e.trials.into(),
        exact_cell,
        z,
    ]
}

/// Largest tolerated fraction of step-capped trials.
pub const MAX_CAPPED_FRACTION: f64 = 0.001;

pub fn simulate(args: &SimulateArgs, s: &Settings) -> CmdResult {
    if s.trials == 0 {
        return Err(CliError::Usage("trials must be positive".into()));
    }
    let streams = args
        .streams
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get() as u32));
    let cfg = SimConfig::new(s.seed, s.trials).with_streams(streams);
    let w = walk(&args.p)?;
    let mut failure = None;
    let frame = match args.target {
        SimTarget::Ruin => {
            let spec = RuinSpec::with_start(
                need(args.a, "a", "simulate ruin")?,
                need(args.b, "b", "simulate ruin")?,
                w.prob().clone(),
                args.start.unwrap_or(0),
            )?;
            let est = montecarlo::estimate_ruin_capped(&cfg, &spec, args.step_cap.unwrap_or(montecarlo::STEP_CAP));
            let exact = ruin::solve(&spec).ok();
            if est.capped_fraction() > MAX_CAPPED_FRACTION {
                failure = Some(CliError::Quality(format!(
                    "step cap hit in {} of {} trials",
                    est.capped, est.trials
                )));
            }
            let mut f = Frame::new("ruin estimate", &ESTIMATE_COLUMNS)
                .meta("seed", json!(s.seed))
                .meta("capped", json!(est.capped));
            f.push(estimate_row("prob_win".into(), &est.prob_win, exact.as_ref().map(|r| r.prob_win.clone())));
            f.push(estimate_row("duration".into(), &est.duration, exact.map(|r| r.expected_duration)));
            f
        }
        SimTarget::Lead => {
            let n = need(args.n, "n", "simulate lead")?;
            let table = montecarlo::estimate_lead_time(&cfg, n);
            let exact = laws::lead_time_pmf(n, &WalkParams::fair())?;
            let mut f = Frame::new(table.label, &ESTIMATE_COLUMNS).meta("seed", json!(s.seed));
            for (row, ex) in table.rows.iter().zip(exact.rows) {
                f.push(estimate_row(row.index.into(), &row.estimate, Some(ex.exact)));
            }
            f
        }
        SimTarget::Returns => {
            let n = need(args.n, "n", "simulate returns")?;
            let fair = WalkParams::fair();
            let mut f = Frame::new(format!("return count estimate, 2n = {}", 2 * n), &ESTIMATE_COLUMNS)
                .meta("seed", json!(s.seed));
            match args.r {
                Some(r) => {
                    let e = montecarlo::estimate_return_counts(&cfg, n, r);
                    f.push(estimate_row(r.into(), &e, laws::return_count_pmf(r, n, &fair).ok()));
                }
                None => {
                    let table = montecarlo::estimate_return_count_table(&cfg, n);
                    for row in &table.rows {
                        let exact = laws::return_count_pmf(row.index as u64, n, &fair)?;
                        f.push(estimate_row(row.index.into(), &row.estimate, Some(exact)));
                    }
                }
            }
            f
        }
        SimTarget::FirstReturn => {
            let n = need(args.n, "n", "simulate first-return")?;
            let e = montecarlo::estimate_first_return(&cfg, &w, n);
            let mut f = Frame::new(format!("first return at 2n = {}", 2 * n), &ESTIMATE_COLUMNS)
                .meta("seed", json!(s.seed));
            f.push(estimate_row("first_return".into(), &e, Some(laws::first_return_prob(n, &w)?)));
            f
        }
    };
    Ok(Outcome { text: frame.render(s.format, s.precision), failure })
}

fn series_cells(name: &str, v: &SeriesValue) -> Vec<(String, Cell)> {
    match v {
        SeriesValue::Exact(r) => vec![(name.to_string(), r.clone().into())],
        SeriesValue::Divergent => vec![(name.to_string(), "divergent".into())],
        SeriesValue::Bracket { lo, hi } => {
            vec![(format!("{name}_lo"), (*lo).into()), (format!("{name}_hi"), (*hi).into())]
        }
    }
}

fn report_frame(r: &RecurrenceReport) -> Frame {
    let mut f = Frame::new(format!("recurrence, d = {}", r.dimension), &["field", "value"]);
    let mut fields: Vec<(String, Cell)> = vec![("dimension".into(), (r.dimension as i64).into())];
    if let Some(p) = &r.p {
        fields.push(("p".into(), p.to_string().into()));
    }
    fields.push((
        "classification".into(),
        serde_json::to_value(r.classification).expect("enum").as_str().unwrap_or_default().into(),
    ));
    fields.extend(series_cells("u_sum", &r.u_sum));
    fields.extend(series_cells("p_return", &r.p_return));
    if let Some(t) = r.terms {
        fields.push(("terms".into(), t.into()));
    }
    if let Some(e) = &r.evidence {
        fields.push(("partial_sum".into(), e.partial_sum.into()));
        fields.push(("log_slope".into(), e.slope.into()));
        fields.push(("slope_consistent".into(), e.consistent.to_string().into()));
    }
    for (k, v) in fields {
        f.push(vec![k.into(), v]);
    }
    f
}

pub fn recurrence(args: &RecurrenceArgs, s: &Settings) -> CmdResult {
    let report = match args.dim {
        1 => {
            if args.terms.is_some() {
                return Err(CliError::Usage("--terms applies to dimensions 2 and 3".into()));
            }
            recurrence::classify(1, Some(&walk(&args.p)?))?
        }
        d => {
            if args.p.is_some() {
                return Err(CliError::Usage("--p applies to dimension 1 only".into()));
            }
            recurrence::recurrence_bracket(d, args.terms.unwrap_or(recurrence::DEFAULT_TERMS))?
        }
    };
    let text = match s.format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => report_frame(&report).to_csv(s.precision),
    };
    Ok(Outcome { text, failure: None })
}

pub fn verify(only: Option<&str>, inject_fault: Option<String>, s: &Settings) -> CmdResult {
    let only = only.map(|g| g.parse::<Group>()).transpose()?;
    let report = verify::run(&VerifyOptions { only, inject_fault })?;
    let text = match s.format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => report.to_csv(),
    };
    let failed: Vec<String> = report.failures().map(|c| format!("{} ({})", c.name, c.detail)).collect();
    let failure = if failed.is_empty() { None } else { Some(CliError::Verify(failed)) };
    Ok(Outcome { text, failure })
}
