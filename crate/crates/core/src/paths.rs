//! ±1 lattice paths: representation, exhaustive enumeration, and the
//! classical counting results (ballot theorem, reflection, loop counts).

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::error::{Result, WalkError};
use crate::numerics::{binomial, BigCount};

/// Largest path length `enumerate_paths` will sweep (2^26 ≈ 6.7e7 paths).
pub const MAX_ENUMERATION_STEPS: u64 = 26;

/// A finite ±1 walk from the origin with its prefix sums.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    steps: Vec<i8>,
    sums: Vec<i64>,
}

impl Path {
    pub fn from_steps(steps: Vec<i8>) -> Result<Self> {
        let mut sums = Vec::with_capacity(steps.len() + 1);
        let mut s = 0i64;
        sums.push(s);
        for &x in &steps {
            if x != 1 && x != -1 {
                return Err(WalkError::InvalidStep(x as i64));
            }
            s += x as i64;
            sums.push(s);
        }
        Ok(Path { steps, sums })
    }

    /// Bits of `mask` read most significant first; a set bit is an up-step.
    fn from_mask(mask: u64, n: u32) -> Self {
        let steps = (0..n)
            .map(|i| if (mask >> (n - 1 - i)) & 1 == 1 { 1 } else { -1 })
            .collect();
        Path::from_steps(steps).expect("mask steps are ±1")
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> &[i8] {
        &self.steps
    }

    /// `S_0 = 0, S_1, ..., S_n`.
    pub fn sums(&self) -> &[i64] {
        &self.sums
    }

    pub fn endpoint(&self) -> LatticePoint {
        LatticePoint { x: self.len() as u64, y: *self.sums.last().unwrap() }
    }

    /// Number of unit time intervals spent on the positive side: the side
    /// from `k-1` to `k` counts when either `S_{k-1}` or `S_k` is positive.
    pub fn positive_side_time(&self) -> usize {
        self.sums.windows(2).filter(|w| w[0] > 0 || w[1] > 0).count()
    }

    /// Number of times `k >= 1` with `S_k = 0`.
    pub fn returns_to_origin(&self) -> usize {
        self.sums[1..].iter().filter(|&&s| s == 0).count()
    }
}

/// `+` for an up-step, `-` for a down-step.
impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &x in &self.steps {
            f.write_str(if x > 0 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

/// Accepts `+` and either `-` or the Unicode minus `−`.
impl FromStr for Path {
    type Err = WalkError;
    fn from_str(s: &str) -> Result<Self> {
        let steps = s
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' | '−' => Ok(-1),
                _ => Err(WalkError::Parse(s.to_string())),
            })
            .collect::<Result<Vec<i8>>>()?;
        Path::from_steps(steps)
    }
}

/// A point `(time, height)` of the path diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LatticePoint {
    pub x: u64,
    pub y: i64,
}

impl LatticePoint {
    pub fn new(x: u64, y: i64) -> Self {
        LatticePoint { x, y }
    }

    pub fn reflected(&self) -> Self {
        LatticePoint { x: self.x, y: -self.y }
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

fn check_enumerable(n: u64) -> Result<()> {
    if n > MAX_ENUMERATION_STEPS {
        return Err(WalkError::TooLarge { n, cap: MAX_ENUMERATION_STEPS });
    }
    Ok(())
}

/// All length-`n` paths accepted by `predicate`, in lexicographic step
/// order with `-1 < +1`.
pub fn enumerate_paths<F>(n: u64, predicate: F) -> Result<Vec<Path>>
where
    F: Fn(&Path) -> bool,
{
    check_enumerable(n)?;
    Ok((0..1u64 << n)
        .map(|mask| Path::from_mask(mask, n as u32))
        .filter(|p| predicate(p))
        .collect())
}

/// Like [`enumerate_paths`] but only counts, without keeping the paths.
pub fn count_enumerated<F>(n: u64, predicate: F) -> Result<u64>
where
    F: Fn(&Path) -> bool,
{
    check_enumerable(n)?;
    Ok((0..1u64 << n)
        .filter(|&mask| predicate(&Path::from_mask(mask, n as u32)))
        .count() as u64)
}

/// `N_{x,y}`: number of paths from the origin to `(x, y)`.
pub fn count_paths_to(x: u64, y: i64) -> BigCount {
    if y.unsigned_abs() > x || (x as i64 + y) % 2 != 0 {
        return BigCount::zero();
    }
    binomial(x, (x as i64 + y) / 2)
}

/// Paths to `(x, y)` with `S_1, ..., S_x > 0`; equals `(y/x) N_{x,y}`.
///
/// Zero for unreachable endpoints and for `x = 0` or `y <= 0`.
pub fn count_always_positive(x: u64, y: i64) -> BigCount {
    if x == 0 || y <= 0 {
        return BigCount::zero();
    }
    let total = count_paths_to(x, y);
    let scaled = total * y as u64;
    debug_assert!((&scaled % x).is_zero());
    scaled / x
}

/// Returns `(paths A -> B that touch or cross the axis, paths A' -> B)`
/// where `A'` is `A` reflected in the axis. The first count comes from a
/// direct sweep over heights, the second from the binomial formula.
pub fn count_touching_reflection(a: LatticePoint, b: LatticePoint) -> Result<(BigCount, BigCount)> {
    if a.y <= 0 || b.y <= 0 || a.x >= b.x {
        return Err(WalkError::InvalidPoints(format!(
            "need A.y > 0, B.y > 0 and A.x < B.x, got A = {a}, B = {b}"
        )));
    }
    let dx = b.x - a.x;
    if (dx as i64 + b.y - a.y) % 2 != 0 {
        return Err(WalkError::Unreachable(format!("{b} from {a}")));
    }
    let touching = count_touching_sweep(a.y, b.y, dx);
    let reflected = count_paths_to(dx, b.y + a.y);
    Ok((touching, reflected))
}

/// Paths of `steps` steps from height `from` to height `to` that visit
/// height zero at least once, by dynamic programming over
/// (height, touched-yet) states.
fn count_touching_sweep(from: i64, to: i64, steps: u64) -> BigCount {
    let lo = from.min(to) - steps as i64;
    let hi = from.max(to) + steps as i64;
    let width = (hi - lo + 1) as usize;
    let idx = |h: i64| (h - lo) as usize;
    let mut fresh = vec![BigCount::zero(); width];
    let mut touched = vec![BigCount::zero(); width];
    fresh[idx(from)] = BigCount::from(1u32);
    for _ in 0..steps {
        let mut nf = vec![BigCount::zero(); width];
        let mut nt = vec![BigCount::zero(); width];
        for h in lo..=hi {
            let i = idx(h);
            if fresh[i].is_zero() && touched[i].is_zero() {
                continue;
            }
            for next in [h - 1, h + 1] {
                if next < lo || next > hi {
                    continue;
                }
                let j = idx(next);
                nt[j] += &touched[i];
                if next == 0 {
                    nt[j] += &fresh[i];
                } else {
                    nf[j] += &fresh[i];
                }
            }
        }
        fresh = nf;
        touched = nt;
    }
    touched[idx(to)].clone()
}

/// The path with its steps in reverse order; its sums are
/// `S*_i = S_n - S_{n-i}`.
pub fn reverse_path(p: &Path) -> Path {
    let steps = p.steps.iter().rev().copied().collect();
    Path::from_steps(steps).expect("reversed steps are ±1")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoopMode {
    /// `S_1, ..., S_{2n-1} >= 0`, `S_{2n} = 0`
    Nonnegative,
    /// `S_1, ..., S_{2n-1} > 0`, `S_{2n} = 0`
    StrictlyPositive,
}

/// Catalan-type count `L_{2m} = C(2m, m) / (m + 1)`.
fn catalan(m: u64) -> BigCount {
    binomial(2 * m, m as i64) / (m + 1)
}

/// Loops of length `2n` that stay non-negative (`L_{2n}`) or strictly
/// positive before closing (`L_{2n-2}`).
pub fn count_loops(n: u64, mode: LoopMode) -> BigCount {
    match mode {
        LoopMode::Nonnegative => catalan(n),
        LoopMode::StrictlyPositive => {
            if n == 0 {
                BigCount::zero()
            } else {
                catalan(n - 1)
            }
        }
    }
}
