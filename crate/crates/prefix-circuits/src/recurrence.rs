//! Exact width tables for consistent tree pairs and per-depth segment sums.
//!
//! All widths are arbitrary-precision naturals: they grow geometrically in the
//! depth and overflow 64-bit integers near depth 100.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Key of one pair-width cell: fanout bound `k`, gathering-tree depth budget
/// `d`, distribution depth budget `h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PairKey {
    pub k: u32,
    pub d: u32,
    pub h: u32,
}

impl PairKey {
    pub fn new(k: u32, d: u32, h: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidFanout(k));
        }
        Ok(PairKey { k, d, h })
    }

    /// Number of non-final blocks a saturated pair may use: `min(d, k-1)`.
    pub fn ell(&self) -> u32 {
        self.d.min(self.k - 1)
    }
}

/// Memoized table of maximum pair widths for one fanout bound.
#[derive(Debug, Clone)]
pub struct WidthTable {
    k: u32,
    memo: HashMap<(u32, u32), BigUint>,
}

impl WidthTable {
    pub fn new(k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidFanout(k));
        }
        Ok(WidthTable { k, memo: HashMap::new() })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Maximum width of a consistent pair with budgets `(d, h)`.
    ///
    /// Base cases are width 1; otherwise the sum over block budgets
    /// `d-1, ..., d-l+1` plus twice the `d-l` cell, one level down.
    pub fn get(&mut self, d: u32, h: u32) -> BigUint {
        if let Some(v) = self.memo.get(&(d, h)) {
            return v.clone();
        }
        let value = if d == 0 || h == 0 {
            BigUint::one()
        } else {
            let l = d.min(self.k - 1);
            let mut acc = BigUint::zero();
            for i in 1..l {
                acc += self.get(d - i, h - 1);
            }
            acc += self.get(d - l, h - 1) * 2u32;
            acc
        };
        self.memo.insert((d, h), value.clone());
        value
    }
}

/// One-shot pair width `w_k(d, h)`.
pub fn pair_width(k: u32, d: u32, h: u32) -> Result<BigUint> {
    let key = PairKey::new(k, d, h)?;
    let mut table = WidthTable::new(key.k)?;
    Ok(table.get(key.d, key.h))
}

/// Segment-sum table `w*_k(0..=D)` filled by the linear recurrence, seeded
/// from the direct diagonal sums.
#[derive(Debug, Clone)]
pub struct StarTable {
    k: u32,
    values: Vec<BigUint>,
}

impl StarTable {
    pub fn new(k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidFanout(k));
        }
        Ok(StarTable { k, values: Vec::new() })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    fn extend_to(&mut self, depth: u32) {
        let k = self.k as usize;
        while self.values.len() <= depth as usize {
            let next = self.values.len();
            let v = if next < k {
                // seeds come from the direct diagonal sum
                star_width_direct(self.k, next as u32).expect("valid k")
            } else {
                let mut acc = BigUint::from(self.k);
                for i in 2..self.k {
                    acc += &self.values[next - i as usize];
                }
                acc += &self.values[next - k] * 2u32;
                acc
            };
            self.values.push(v);
        }
    }

    pub fn value(&mut self, depth: u32) -> BigUint {
        self.extend_to(depth);
        self.values[depth as usize].clone()
    }
}

/// Direct route: `w*_k(D)` as the sum of pair widths along the diagonal.
pub fn star_width_direct(k: u32, depth: u32) -> Result<BigUint> {
    let mut table = WidthTable::new(k)?;
    let mut acc = BigUint::zero();
    for d in 0..=depth {
        acc += table.get(d, depth - d);
    }
    Ok(acc)
}

/// Recurrent route: same values via the linear recurrence with direct seeds.
pub fn star_width_recurrent(k: u32, depth: u32) -> Result<BigUint> {
    let mut table = StarTable::new(k)?;
    Ok(table.value(depth))
}

/// The bound pair for the exact circuit width at a given depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WidthBounds {
    pub depth: u32,
    pub lower: BigUint,
    pub upper: BigUint,
}

/// Lower and upper width bounds at depth `D`: `w*_k(D-1)` and `w*_k(D)`.
pub fn circuit_width_bounds(k: u32, depth: u32) -> Result<WidthBounds> {
    if depth == 0 {
        return Err(Error::InvalidDepth(0));
    }
    let mut table = StarTable::new(k)?;
    Ok(WidthBounds {
        depth,
        lower: table.value(depth - 1),
        upper: table.value(depth),
    })
}

/// Guaranteed-constructible input count at depth `D`: `1 + w*_k(D-1)`.
pub fn max_inputs(k: u32, depth: u32) -> Result<BigUint> {
    if depth == 0 {
        return Err(Error::InvalidDepth(0));
    }
    let mut table = StarTable::new(k)?;
    Ok(table.value(depth - 1) + 1u32)
}

/// Least constructive depth for `n` inputs; 0 for the trivial single input.
pub fn min_depth(k: u32, n: u64) -> Result<u32> {
    if k < 2 {
        return Err(Error::InvalidFanout(k));
    }
    if n == 0 {
        return Err(Error::OutOfRange("input count must be at least 1".into()));
    }
    if n == 1 {
        return Ok(0);
    }
    let target = BigUint::from(n);
    let mut table = StarTable::new(k)?;
    let mut depth = 1u32;
    loop {
        if table.value(depth - 1) + 1u32 >= target {
            return Ok(depth);
        }
        depth += 1;
    }
}

/// Fibonacci numbers with `fib(1) = fib(2) = 1`.
pub fn fib(m: u32) -> Result<BigUint> {
    if m == 0 {
        return Err(Error::OutOfRange("fibonacci index must be at least 1".into()));
    }
    let (mut a, mut b) = (BigUint::one(), BigUint::one());
    for _ in 2..m {
        let next = &a + &b;
        a = b;
        b = next;
    }
    Ok(if m == 1 { a } else { b })
}
