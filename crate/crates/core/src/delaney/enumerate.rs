//! Self-dual candidate symbols built on a `k x k` grid.
//!
//! Grid node `(x, y)`, `1 <= x, y <= k`, with `(1, 1)` at the bottom left,
//! is element `(y - 1) k + (x - 1)`. Horizontal neighbours `(x, y)-(x+1, y)`
//! are joined by `r0` when `x` is even and `r1` when `x` is odd; vertical
//! neighbours `(x, y)-(x, y+1)` by `r3` when `y` is even and `r2` when `y` is
//! odd. With a periodic boundary (even `k`) the rows and columns close up
//! through `r0` and `r3`; otherwise unmatched generators fix their node.
//!
//! `m01 = m23 = n` everywhere. `m12` is chosen freely on each `⟨r1, r2⟩`
//! orbit on or below the diagonal and mirrored above it, which makes the
//! reflection `(x, y) -> (y, x)` an isomorphism onto the dual symbol.

use super::DelaneySymbol;

/// Choices of `m12` on an orbit with more than one element.
pub const M12_CHOICES: [u32; 5] = [2, 4, 6, 8, 12];
/// Choices of `m12` on a single-element orbit.
pub const M12_SINGLETON_CHOICES: [u32; 5] = [1, 2, 3, 4, 6];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    /// Unmatched generators at the grid boundary are self-loops.
    Loop,
    /// Rows and columns close up into cycles; needs even `k`.
    Periodic,
}

impl std::str::FromStr for Boundary {
    type Err = EnumerationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "loop" => Ok(Boundary::Loop),
            "periodic" => Ok(Boundary::Periodic),
            _ => Err(EnumerationError::Boundary(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EnumerationError {
    #[error("n and k must be positive")]
    Zero,
    #[error("k = {k} must divide n = {n} or equal 2n")]
    Divisibility { n: u32, k: usize },
    #[error("a periodic boundary needs even k, got {0}")]
    PeriodicOdd(usize),
    #[error("k = 2n = {0} needs a periodic boundary")]
    NeedsPeriodic(usize),
    #[error("unknown boundary '{0}', expected loop or periodic")]
    Boundary(String),
    #[error("candidate count does not fit in 128 bits")]
    Overflow,
}

fn check(n: u32, k: usize, boundary: Boundary) -> Result<(), EnumerationError> {
    if n == 0 || k == 0 {
        return Err(EnumerationError::Zero);
    }
    let divides = (n as usize) % k == 0;
    let double = k == 2 * n as usize;
    if !divides && !double {
        return Err(EnumerationError::Divisibility { n, k });
    }
    if boundary == Boundary::Periodic && k % 2 == 1 {
        return Err(EnumerationError::PeriodicOdd(k));
    }
    if !divides && boundary == Boundary::Loop {
        return Err(EnumerationError::NeedsPeriodic(k));
    }
    Ok(())
}

/// Number of candidates, `5^(c (c + 1) / 2)` with `c = ceil(k / 2)`.
pub fn count_candidates(n: u32, k: usize, boundary: Boundary) -> Result<u128, EnumerationError> {
    check(n, k, boundary)?;
    let c = k.div_ceil(2) as u32;
    5u128.checked_pow(c * (c + 1) / 2).ok_or(EnumerationError::Overflow)
}

/// The grid reflection `(x, y) -> (y, x)` as a map on elements.
pub fn reflection_map(k: usize) -> Vec<usize> {
    (0..k * k).map(|s| (s % k) * k + s / k).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    /// `m12` per `⟨r1, r2⟩` orbit, orbits ordered by their first grid node
    /// (left to right, then bottom to top).
    pub m12: Vec<u32>,
    pub symbol: DelaneySymbol,
}

/// Iterator over all candidates for `(n, k, boundary)`.
#[derive(Debug, Clone)]
pub struct Candidates {
    n: u32,
    k: usize,
    blocks: usize,
    ops: Vec<Vec<usize>>,
    /// Free blocks `(a, b)` with `b <= a`, in orbit order.
    free: Vec<(usize, usize)>,
    digits: Vec<usize>,
    done: bool,
}

pub fn enumerate_candidates(n: u32, k: usize, boundary: Boundary) -> Result<Candidates, EnumerationError> {
    check(n, k, boundary)?;
    let idx = |x: usize, y: usize| (y - 1) * k + (x - 1);
    let mut ops: Vec<Vec<usize>> = vec![(0..k * k).collect(); 4];
    let mut join = |g: usize, a: usize, b: usize| {
        ops[g][a] = b;
        ops[g][b] = a;
    };
    for y in 1..=k {
        for x in 1..k {
            join(if x % 2 == 0 { 0 } else { 1 }, idx(x, y), idx(x + 1, y));
        }
        if boundary == Boundary::Periodic {
            join(0, idx(k, y), idx(1, y));
        }
    }
    for x in 1..=k {
        for y in 1..k {
            join(if y % 2 == 0 { 3 } else { 2 }, idx(x, y), idx(x, y + 1));
        }
        if boundary == Boundary::Periodic {
            join(3, idx(x, k), idx(x, 1));
        }
    }
    let blocks = k.div_ceil(2);
    let mut free = Vec::new();
    for b in 0..blocks {
        for a in b..blocks {
            free.push((a, b));
        }
    }
    free.sort_by_key(|&(a, b)| (b, a));
    let digits = vec![0; free.len()];
    Ok(Candidates { n, k, blocks, ops, free, digits, done: false })
}

impl Candidates {
    fn block_size(&self, a: usize) -> usize {
        // Block a covers grid columns 2a+1 and 2a+2 (the latter may not exist).
        if 2 * a + 2 <= self.k {
            2
        } else {
            1
        }
    }

    fn current(&self) -> Candidate {
        let nb = self.blocks;
        let mut grid = vec![0u32; nb * nb];
        for (&(a, b), &d) in self.free.iter().zip(&self.digits) {
            let singleton = self.block_size(a) * self.block_size(b) == 1;
            let v = if singleton { M12_SINGLETON_CHOICES[d] } else { M12_CHOICES[d] };
            grid[b * nb + a] = v;
            grid[a * nb + b] = v;
        }
        let k = self.k;
        let m12: Vec<u32> = (0..k * k).map(|s| grid[((s / k) / 2) * nb + (s % k) / 2]).collect();
        let n = self.n;
        let symbol = DelaneySymbol::new(3, self.ops.clone(), vec![vec![n; k * k], m12, vec![n; k * k]])
            .expect("grid symbol has consistent shape");
        Candidate { m12: grid, symbol }
    }
}

impl Iterator for Candidates {
    type Item = Candidate;

    fn next(&mut self) -> Option<Candidate> {
        if self.done {
            return None;
        }
        let out = self.current();
        // Advance the mixed-radix counter, last free block fastest.
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < M12_CHOICES.len() {
                break;
            }
            self.digits[i] = 0;
        }
        Some(out)
    }
}
