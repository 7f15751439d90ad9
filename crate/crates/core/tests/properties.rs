mod common;

use common::{r, rat};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;
use walklab::laws::{self, WalkParams};
use walklab::montecarlo::{self, SimConfig};
use walklab::numerics::{binomial, ln_central_binomial_asymptotic, generalized_binomial, Prob, Ratio};
use walklab::paths::{self, LatticePoint, LoopMode};
use walklab::recurrence::{self, Classification};
use walklab::ruin::{self, RuinSpec};

fn walk(n: i64, d: i64) -> WalkParams {
    WalkParams::new(Prob::new(Ratio::new(n, d)).unwrap())
}

/// Probability strictly between 0 and 1, not 1/2.
fn biased_p() -> impl Strategy<Value = (i64, i64)> {
    (2i64..60).prop_flat_map(|d| (1..d, Just(d))).prop_filter("p != 1/2", |(n, d)| 2 * n != *d)
}

proptest! {
    #[test]
    fn ratio_addition_is_exact(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
        let (x, y) = (Ratio::new(a, b), Ratio::new(c, d));
        prop_assert_eq!(x.clone() + y.clone() - y, x);
    }

    #[test]
    fn binomial_symmetry(n in 0u64..200, k in 0i64..200) {
        prop_assume!(k as u64 <= n);
        prop_assert_eq!(binomial(n, k), binomial(n, n as i64 - k));
    }

    #[test]
    fn binomial_matches_pascal_oracle(n in 0u64..40, k in 0u64..40) {
        prop_assert_eq!(binomial(n, k as i64), common::binom(n, k));
    }

    #[test]
    fn ballot_property(x in 1u32..=14, y in 1i64..=14) {
        prop_assume!(y <= x as i64 && (x as i64 + y) % 2 == 0);
        let want = common::count(x, |s| s[x as usize] == y && s[1..].iter().all(|&v| v > 0));
        prop_assert_eq!(paths::count_always_positive(x as u64, y), BigUint::from(want));
        // the count is the fraction y/x of all paths to the endpoint
        let all = paths::count_paths_to(x as u64, y);
        prop_assert_eq!(
            Ratio::of_counts(&paths::count_always_positive(x as u64, y), &all),
            Ratio::new(y, x as i64)
        );
    }

    #[test]
    fn reversal_duality(x in 1u32..=14, y in 1i64..=14) {
        prop_assume!(y <= x as i64 && (x as i64 + y) % 2 == 0);
        let max_at_end = common::count(x, |s| s[x as usize] == y && s[..x as usize].iter().all(|&v| v < y));
        let reversed = paths::enumerate_paths(x as u64, |p| p.endpoint().y == y)
            .unwrap()
            .iter()
            .map(paths::reverse_path)
            .filter(|p| p.sums()[1..].iter().all(|&s| s > 0))
            .count() as u64;
        prop_assert_eq!(max_at_end, reversed);
        prop_assert_eq!(BigUint::from(reversed), paths::count_always_positive(x as u64, y));
    }

    #[test]
    fn reversed_sums(mask in 0u32..1 << 12) {
        let steps: Vec<i8> = (0..12).map(|i| if mask >> i & 1 == 1 { 1 } else { -1 }).collect();
        let p = paths::Path::from_steps(steps).unwrap();
        let rev = paths::reverse_path(&p);
        let (s, t) = (p.sums(), rev.sums());
        let n = s.len() - 1;
        for i in 0..=n {
            prop_assert_eq!(t[i], s[n] - s[n - i]);
        }
    }

    #[test]
    fn ruin_complementarity_and_swap(a in 1u64..25, b in 1u64..25, (n, d) in biased_p()) {
        let p = Prob::new(Ratio::new(n, d)).unwrap();
        let res = ruin::ruin_biased(&RuinSpec::new(a, b, p.clone()).unwrap()).unwrap();
        prop_assert_eq!(res.prob_win.clone() + res.prob_ruin.clone(), Ratio::one());
        let swapped = ruin::ruin_biased(&RuinSpec::new(b, a, p.complement()).unwrap()).unwrap();
        prop_assert_eq!(&res.prob_win, &swapped.prob_ruin);
        prop_assert_eq!(&res.expected_duration, &swapped.expected_duration);
    }

    #[test]
    fn ruin_matches_tridiagonal_oracle(a in 1i64..10, b in 1i64..10, (n, d) in biased_p(), k in -9i64..10) {
        prop_assume!(k > -b && k < a);
        let pr = rat(n, d);
        let p = Prob::new(Ratio::new(n, d)).unwrap();
        let (win, duration) = common::ruin_oracle(a, b, &pr, 0);
        let res = ruin::solve(&RuinSpec::new(a as u64, b as u64, p).unwrap()).unwrap();
        prop_assert_eq!(r(&res.prob_win), win);
        prop_assert_eq!(r(&res.expected_duration), duration);
        // start offsets, fair walk
        let (win, duration) = common::ruin_oracle(a, b, &rat(1, 2), k);
        let res = ruin::solve(&RuinSpec::with_start(a as u64, b as u64, Prob::half(), k).unwrap()).unwrap();
        prop_assert_eq!(r(&res.prob_win), win);
        prop_assert_eq!(r(&res.expected_duration), duration);
    }

    #[test]
    fn duration_in_rho_agrees(a in 1u64..15, b in 1u64..15, (n, d) in biased_p()) {
        let p = Prob::new(Ratio::new(n, d)).unwrap();
        let rho = p.complement().value() / p.value();
        let direct = ruin::ruin_biased(&RuinSpec::new(a, b, p).unwrap()).unwrap();
        prop_assert_eq!(ruin::duration_in_rho(a, b, &rho).unwrap(), direct.expected_duration);
    }

    #[test]
    fn return_identity(( n, d) in biased_p()) {
        let w = walk(n, d);
        let u = recurrence::series_sum_u(&w).unwrap();
        prop_assert_eq!(u.clone(), (Ratio::one() - recurrence::prob_return_origin(&w)).recip().unwrap());
        prop_assert_eq!(r(&u), rat(d, (d - 2 * n).abs()));
    }

    #[test]
    fn first_return_identities(n in 1u64..=12, (pn, pd) in prop_oneof![Just((1i64, 2i64)), Just((1, 3)), Just((2, 5))]) {
        let w = walk(pn, pd);
        let f = laws::first_return_prob(n, &w).unwrap();
        let four_pq = Ratio::from(4) * w.p() * &w.q();
        prop_assert_eq!(&f, &(four_pq * laws::u2n(n - 1, &w) - laws::u2n(n, &w)));
        prop_assert_eq!(&f, &(laws::u2n(n, &w) / Ratio::from(2 * n as i64 - 1)));
    }

    #[test]
    fn simulation_ignores_streams(seed in any::<u64>(), streams in 1u32..9) {
        let spec = RuinSpec::new(4, 3, "2/5".parse().unwrap()).unwrap();
        let base = SimConfig::new(seed, 300);
        prop_assert_eq!(
            montecarlo::estimate_ruin(&base, &spec),
            montecarlo::estimate_ruin(&base.with_streams(streams), &spec)
        );
        prop_assert_eq!(
            montecarlo::estimate_lead_time(&base, 4),
            montecarlo::estimate_lead_time(&base.with_streams(streams), 4)
        );
    }
}

#[test]
fn pascal_identity_exhaustive() {
    for n in 2..=64u64 {
        for k in 1..n as i64 {
            assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
        }
    }
}

#[test]
fn generalized_binomial_identity() {
    for n in 0..=30u64 {
        let g = generalized_binomial(&Ratio::new(-1, 2), n) * Ratio::from(-4).pow(n as i32);
        assert_eq!(g, Ratio::from_count(&binomial(2 * n, n as i64)));
    }
}

#[test]
fn asymptotic_error_shrinks() {
    let errs: Vec<f64> = [1u64, 10, 100, 1000]
        .iter()
        .map(|&n| {
            let ln_exact = walklab::numerics::ln_big(&binomial(2 * n, n as i64));
            (1.0 - (ln_exact - ln_central_binomial_asymptotic(n)).exp()).abs()
        })
        .collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
}

#[test]
fn reflection_exhaustive() {
    for bx in 1..=12u64 {
        for ax in 0..bx {
            for ay in 1..=12i64 {
                for by in 1..=12i64 {
                    let dx = bx - ax;
                    if (dx as i64 + by - ay) % 2 != 0 || (by - ay).unsigned_abs() > dx {
                        continue;
                    }
                    let (t, m) =
                        paths::count_touching_reflection(LatticePoint::new(ax, ay), LatticePoint::new(bx, by)).unwrap();
                    assert_eq!(t, m, "({ax},{ay}) -> ({bx},{by})");
                    let oracle = common::count(dx as u32, |s| {
                        s[dx as usize] + ay == by && s.iter().any(|&v| v + ay <= 0)
                    });
                    assert_eq!(t, BigUint::from(oracle));
                }
            }
        }
    }
}

#[test]
fn loop_count_shift() {
    for n in 0..=10 {
        assert_eq!(paths::count_loops(n, LoopMode::Nonnegative), paths::count_loops(n + 1, LoopMode::StrictlyPositive));
    }
}

#[test]
fn three_way_equality() {
    let fair = WalkParams::fair();
    for n in 1..=12 {
        let u = laws::u2n(n, &fair);
        assert_eq!(laws::no_return_prob(n, &fair).unwrap(), u);
        assert_eq!(laws::nonnegative_prob(n, &fair).unwrap(), u);
    }
}

#[test]
fn fair_u_recurrence() {
    let fair = WalkParams::fair();
    for n in 1..=20i64 {
        assert_eq!(laws::u2n(n as u64 - 1, &fair), Ratio::new(2 * n, 2 * n - 1) * laws::u2n(n as u64, &fair));
    }
}

#[test]
fn lead_time_shape() {
    let fair = WalkParams::fair();
    for n in 1..=40u64 {
        let pmf = laws::lead_time_pmf(n, &fair).unwrap();
        assert_eq!(pmf.total(), Ratio::one());
        for k in 0..=n as usize {
            assert_eq!(pmf.rows[k].exact, pmf.rows[n as usize - k].exact);
        }
    }
    let mut last = 0.0;
    for n in [50u64, 100, 200] {
        let pmf = laws::lead_time_pmf(n, &fair).unwrap();
        let ratio = (pmf.rows[0].exact.clone() / pmf.rows[n as usize / 2].exact.clone()).to_f64();
        let target = (std::f64::consts::PI * n as f64).sqrt() / 2.0;
        assert!((ratio / target - 1.0).abs() < 0.1, "n={n}: {ratio} vs {target}");
        assert!(ratio > last);
        last = ratio;
    }
}

#[test]
fn lead_time_product_form() {
    let fair = WalkParams::fair();
    for n in 1..=12u64 {
        let pmf = laws::lead_time_pmf(n, &fair).unwrap();
        for k in 0..=n {
            let num = common::binom(n, k).pow(2) * common::binom(2 * n, n);
            let den = common::binom(2 * n, 2 * k) * (BigUint::one() << (2 * n));
            let want = BigRational::new(num.into(), den.into());
            assert_eq!(r(&pmf.rows[k as usize].exact), want, "n={n} k={k}");
        }
    }
}

#[test]
fn lead_time_side_rule_enumeration() {
    let half = rat(1, 2);
    let fair = WalkParams::fair();
    for n in 1..=6u32 {
        let pmf = laws::lead_time_pmf(n as u64, &fair).unwrap();
        for k in 0..=n as usize {
            let want = common::prob(2 * n, &half, |s| common::positive_time(s) == 2 * k);
            assert_eq!(r(&pmf.rows[k].exact), want);
        }
    }
}

#[test]
fn arcsine_gap_shrinks() {
    let fair = WalkParams::fair();
    let gap = |n: u64| {
        (0..=n)
            .map(|a| {
                let e = laws::lead_time_cdf(n, a as i64, &fair).unwrap().to_f64();
                (e - laws::arcsine_cdf(a as f64 / n as f64).unwrap()).abs()
            })
            .fold(0.0, f64::max)
    };
    assert!(gap(50) < gap(10));
}

#[test]
fn unbiased_limit() {
    for a in 1..=10u64 {
        for b in 1..=10u64 {
            let fair = ruin::ruin_unbiased(&RuinSpec::new(a, b, Prob::half()).unwrap()).unwrap();
            for p in ["500001/1000000", "499999/1000000"] {
                let near = ruin::ruin_biased(&RuinSpec::new(a, b, p.parse().unwrap()).unwrap()).unwrap();
                for (x, y) in [
                    (&near.prob_win, &fair.prob_win),
                    (&near.prob_ruin, &fair.prob_ruin),
                    (&near.expected_duration, &fair.expected_duration),
                ] {
                    let rel = ((x.clone() - y.clone()) / y.clone()).abs().to_f64();
                    assert!(rel < 1e-4, "A={a} B={b} p={p}: {x} vs {y}");
                }
            }
        }
    }
}

#[test]
fn symmetric_duration_peaks_at_fair() {
    for a in [2u64, 3, 4, 10] {
        let rhos = ["1/2", "9/10", "99/100", "101/100", "11/10", "2"];
        let vals: Vec<f64> = rhos
            .iter()
            .map(|s| ruin::ruin_symmetric(a, &s.parse().unwrap()).unwrap().expected_duration.to_f64())
            .collect();
        let a2 = (a * a) as f64;
        assert!(vals.iter().all(|&v| v < a2));
        let best = vals.iter().cloned().fold(f64::MIN, f64::max);
        assert!(best == vals[2] || best == vals[3], "{vals:?}");
        assert!((vals[2] - a2).abs() / a2 < 1e-2);
        let far = |rho: &str| ruin::ruin_symmetric(a, &rho.parse().unwrap()).unwrap().expected_duration.to_f64();
        assert!((far("1000") - a as f64).abs() < 0.01 * a as f64);
        assert!((far("1/1000") - a as f64).abs() < 0.01 * a as f64);
    }
}

#[test]
fn win_probability_decreases_with_barrier() {
    for rho in ["51/49", "55/45", "60/40"] {
        let rho: Ratio = rho.parse().unwrap();
        let wins: Vec<Ratio> = (1..=20).map(|a| ruin::ruin_symmetric(a, &rho).unwrap().prob_win).collect();
        assert!(wins.windows(2).all(|w| w[1] < w[0]));
    }
}

#[test]
fn partial_sums_converge_monotonically() {
    let w = walk(1, 3);
    let mut last = Ratio::zero();
    for n in 0..=200 {
        let s = recurrence::partial_sum_u(&w, n);
        assert!(s > last);
        last = s;
    }
    assert!((last.to_f64() - 3.0).abs() < 1e-3);
}

#[test]
fn u2d_is_square_and_vandermonde() {
    let fair = WalkParams::fair();
    for n in 0..=50u64 {
        assert_eq!(recurrence::u2d(n), laws::u2n(n, &fair).pow(2));
        let sum: BigUint = (0..=n).map(|k| binomial(n, k as i64).pow(2)).sum();
        assert_eq!(sum, binomial(2 * n, n as i64));
    }
}

#[test]
fn three_d_partial_sums_bounded() {
    let c = recurrence::u3d_bound_constant();
    let mut sum = 0.0;
    let mut bound = 1.0;
    for n in 1..=300u64 {
        let u = recurrence::u3d_f64(n);
        assert!(u > 0.0);
        sum += u;
        bound += c * (n as f64).powf(-1.5);
        assert!(1.0 + sum <= bound, "n={n}");
    }
    for terms in [10u64, 100, 400] {
        let report = recurrence::recurrence_bracket(3, terms).unwrap();
        assert_eq!(report.classification, Classification::Transient);
    }
}

#[test]
fn first_return_small_polynomials() {
    for (n, d) in [(1i64, 3i64), (1, 2)] {
        let w = walk(n, d);
        let pq = w.p() * &w.q();
        for (k, coef) in [(1u64, 2i64), (2, 2), (3, 4), (4, 10), (5, 28)] {
            assert_eq!(laws::first_return_prob(k, &w).unwrap(), Ratio::from(coef) * pq.pow(k as i32));
        }
    }
}

#[test]
fn biased_first_return_estimate() {
    let w = walk(1, 3);
    let e = montecarlo::estimate_first_return(&SimConfig::new(42, 100_000).with_streams(4), &w, 10);
    assert!(e.within(0.0029, 3.0), "{e:?}");
}
