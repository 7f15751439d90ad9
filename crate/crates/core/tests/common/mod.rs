//! Oracles that share no code with the library: walks are bit patterns,
//! probabilities are summed path weights, and the ruin problem is a
//! tridiagonal solve.
#![allow(dead_code)]

use std::process::Command;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use walklab::numerics::Ratio;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn r(x: &Ratio) -> BigRational {
    x.as_rational().clone()
}

/// Prefix sums `S_0..S_len` of the walk whose step `i` is up when bit
/// `len - 1 - i` of `mask` is set.
pub fn sums(mask: u32, len: u32) -> Vec<i64> {
    let mut out = Vec::with_capacity(len as usize + 1);
    let mut s = 0i64;
    out.push(0);
    for i in 0..len {
        s += if mask >> (len - 1 - i) & 1 == 1 { 1 } else { -1 };
        out.push(s);
    }
    out
}

/// Number of length-`len` walks whose prefix sums satisfy `pred`.
pub fn count<F: Fn(&[i64]) -> bool>(len: u32, pred: F) -> u64 {
    (0..1u32 << len).filter(|&m| pred(&sums(m, len))).count() as u64
}

/// Probability under up-probability `p` that the prefix sums satisfy `pred`.
pub fn prob<F: Fn(&[i64]) -> bool>(len: u32, p: &BigRational, pred: F) -> BigRational {
    let q = BigRational::one() - p;
    let mut total = BigRational::zero();
    for m in 0..1u32 << len {
        let s = sums(m, len);
        if pred(&s) {
            let ups = m.count_ones() as i32;
            total += num_traits::pow::Pow::pow(p, ups) * num_traits::pow::Pow::pow(&q, len as i32 - ups);
        }
    }
    total
}

/// Time units on the positive side: unit `i` counts when `S_{i-1} > 0` or `S_i > 0`.
pub fn positive_time(s: &[i64]) -> usize {
    s.windows(2).filter(|w| w[0] > 0 || w[1] > 0).count()
}

pub fn returns(s: &[i64]) -> usize {
    s[1..].iter().filter(|&&v| v == 0).count()
}

/// Pascal's triangle row by row.
pub fn binom(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut row = vec![BigUint::one()];
    for _ in 0..n {
        let mut next = vec![BigUint::one(); row.len() + 1];
        for j in 1..row.len() {
            next[j] = &row[j - 1] + &row[j];
        }
        row = next;
    }
    row[k as usize].clone()
}

/// Win probability and expected duration from `start` for barriers `+a`,
/// `-b`, by forward elimination on the tridiagonal first-step system.
pub fn ruin_oracle(a: i64, b: i64, p: &BigRational, start: i64) -> (BigRational, BigRational) {
    let q = BigRational::one() - p;
    // unknowns x = -b+1 .. a-1; row: -q h(x-1) + h(x) - p h(x+1) = rhs
    let m = (a + b - 1) as usize;
    let solve = |rhs: Vec<BigRational>| -> Vec<BigRational> {
        let mut diag = vec![BigRational::one(); m];
        let mut d = rhs;
        for i in 1..m {
            // eliminate the sub-diagonal -q using row i-1
            let factor = -&q / &diag[i - 1];
            diag[i] = &diag[i] + &factor * p;
            let prev = d[i - 1].clone();
            d[i] = &d[i] - &factor * prev;
        }
        let mut x = vec![BigRational::zero(); m];
        for i in (0..m).rev() {
            let upper = if i + 1 < m { p * &x[i + 1] } else { BigRational::zero() };
            x[i] = (&d[i] + upper) / &diag[i];
        }
        x
    };
    let mut win_rhs = vec![BigRational::zero(); m];
    win_rhs[m - 1] = p.clone();
    let win = solve(win_rhs);
    let duration = solve(vec![BigRational::one(); m]);
    let i = (start + b - 1) as usize;
    (win[i].clone(), duration[i].clone())
}

/// Half-even rounding of `x` to `places` decimals, done on integers.
pub fn round_half_even(x: &BigRational, places: u32) -> String {
    let scale = BigInt::from(10u32).pow(places);
    let scaled = x * BigRational::from_integer(scale.clone());
    let neg = scaled < BigRational::zero();
    let a = if neg { -scaled } else { scaled };
    let fl = a.floor().to_integer();
    let frac = &a - BigRational::from_integer(fl.clone());
    let half = rat(1, 2);
    let n = if frac > half || (frac == half && (&fl % 2u32) == BigInt::one()) { fl + 1 } else { fl };
    let digits = n.to_string();
    let p = places as usize;
    let padded = format!("{:0>width$}", digits, width = p + 1);
    let (int, dec) = padded.split_at(padded.len() - p);
    let body = if p == 0 { int.to_string() } else { format!("{int}.{dec}") };
    if neg && n_is_nonzero(&digits) {
        format!("-{body}")
    } else {
        body
    }
}

fn n_is_nonzero(digits: &str) -> bool {
    digits.chars().any(|c| c != '0')
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn walklab(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_walklab"))
        .args(args)
        .env_remove("WALKLAB_SEED")
        .env_remove("WALKLAB_CONFIG")
        .output()
        .expect("run walklab");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

/// CSV body rows split into fields, header dropped.
pub fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}
