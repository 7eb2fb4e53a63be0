//! Independent brute-force checks: raw partition maximization for the width
//! tables, and exhaustive minimal-depth search over zero-deficiency circuits
//! at desk scale.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Raw partition oracle for pair widths: maximizes the sum over all
/// admissible block-depth tuples `d > d_1 > ... > d_(r-1) >= d_r` with
/// `r <= k`, one level down per tuple entry. Memoized independently of the
/// collapsed recurrence.
pub struct PartitionOracle {
    k: u32,
    memo: HashMap<(u32, u32), BigUint>,
}

impl PartitionOracle {
    pub fn new(k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidFanout(k));
        }
        Ok(PartitionOracle { k, memo: HashMap::new() })
    }

    pub fn width(&mut self, d: u32, h: u32) -> BigUint {
        if let Some(v) = self.memo.get(&(d, h)) {
            return v.clone();
        }
        let value = if d == 0 || h == 0 {
            BigUint::one()
        } else {
            admissible_tuples(self.k, d)
                .into_iter()
                .map(|t| self.tuple_sum(&t, h))
                .max()
                .expect("at least one admissible tuple")
        };
        self.memo.insert((d, h), value.clone());
        value
    }

    /// All optimal tuples for a cell, sorted; used to check the shape of the
    /// maximizers, not just the maximum.
    pub fn optimal_tuples(&mut self, d: u32, h: u32) -> Vec<Vec<u32>> {
        if d == 0 || h == 0 {
            return vec![vec![]];
        }
        let best = self.width(d, h);
        let mut out: Vec<Vec<u32>> = admissible_tuples(self.k, d)
            .into_iter()
            .filter(|t| self.tuple_sum(t, h) == best)
            .collect();
        out.sort();
        out
    }

    fn tuple_sum(&mut self, tuple: &[u32], h: u32) -> BigUint {
        let mut acc = BigUint::zero();
        for &entry in tuple {
            acc += self.width(entry, h - 1);
        }
        acc
    }
}

/// All block-depth tuples `d > d_1 > ... > d_(r-1) >= d_r >= 0` with at most
/// `k` entries: strictly decreasing, except the final entry may repeat its
/// predecessor.
fn admissible_tuples(k: u32, d: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut partial: Vec<u32> = Vec::new();
    fn extend(out: &mut Vec<Vec<u32>>, partial: &mut Vec<u32>, k: u32, bound: u32) {
        for next in (0..bound).rev() {
            partial.push(next);
            out.push(partial.clone());
            if (partial.len() as u32) < k {
                // closing duplicate of the last entry
                partial.push(next);
                out.push(partial.clone());
                partial.pop();
                // strictly smaller continuations
                extend(out, partial, k, next);
            }
            partial.pop();
        }
    }
    extend(&mut out, &mut partial, k, d);
    out
}

/// One-shot oracle width.
pub fn pair_width_oracle(k: u32, d: u32, h: u32) -> Result<BigUint> {
    Ok(PartitionOracle::new(k)?.width(d, h))
}

/// Exhaustive-search configuration. The op budget per candidate depth D is
/// pinned to the optimality identity 2n - 2 - D.
#[derive(Debug, Clone, Copy)]
pub struct SearchConfig {
    pub k: u32,
    pub n: usize,
    pub max_depth: Option<u32>,
}

impl SearchConfig {
    pub fn new(k: u32, n: usize) -> Self {
        SearchConfig { k, n, max_depth: None }
    }
}

#[derive(Clone, Copy)]
struct SearchNode {
    lo: u8,
    hi: u8,
    depth: u8,
    fanout: u8,
}

struct Search {
    k: u8,

    depth_cap: u8,
    nodes: Vec<SearchNode>,
    /// prefix_done[i] set when the interval [1, i+1] exists.
    prefix_done: Vec<bool>,
    missing: usize,
}

impl Search {
    fn new(k: u32, n: usize, depth_cap: u32) -> Self {
        let nodes = (0..n)
            .map(|i| SearchNode { lo: i as u8 + 1, hi: i as u8 + 1, depth: 0, fanout: 0 })
            .collect();
        let mut prefix_done = vec![false; n];
        prefix_done[0] = true; // s1 = x1 is free
        Search { k: k as u8, depth_cap: depth_cap as u8, nodes, prefix_done, missing: n - 1 }
    }

    /// Canonical key: ops are added by strictly increasing (hi, -lo), which
    /// every DAG admits because both arguments of an op sort below it.
    fn key(lo: u8, hi: u8) -> u16 {
        ((hi as u16) << 8) | (255 - lo as u16)
    }

    fn dfs(&mut self, ops_left: usize, last_key: u16) -> bool {
        if self.missing == 0 {
            debug_assert_eq!(ops_left, 0, "optimality bound violated");
            return true;
        }
        if ops_left < self.missing {
            return false;
        }
        // first missing prefix bounds the next op's right endpoint: anything
        // beyond it could never be completed under the canonical order
        let first_missing = self.prefix_done.iter().position(|&p| !p).unwrap() as u8 + 1;

        // enumerate candidate ops: existing adjacent intervals with spare
        // fanout, in canonical order
        let count = self.nodes.len();
        let mut candidates: Vec<(u16, usize, usize)> = Vec::new();
        for a in 0..count {
            let na = self.nodes[a];
            if na.fanout >= self.k {
                continue;
            }
            for b in 0..count {
                let nb = self.nodes[b];
                if nb.lo != na.hi + 1 || nb.fanout >= self.k {
                    continue;
                }
                if nb.hi > first_missing {
                    continue;
                }
                let key = Self::key(na.lo, nb.hi);
                if key <= last_key {
                    continue;
                }
                let depth = na.depth.max(nb.depth) + 1;
                if depth > self.depth_cap {
                    continue;
                }
                if self.exists(na.lo, nb.hi) {
                    continue;
                }
                candidates.push((key, a, b));
            }
        }
        candidates.sort_unstable();
        candidates.dedup_by_key(|c| (c.0, self.nodes[c.1].depth.max(self.nodes[c.2].depth)));

        for (key, a, b) in candidates {
            let (lo, hi) = (self.nodes[a].lo, self.nodes[b].hi);
            let depth = self.nodes[a].depth.max(self.nodes[b].depth) + 1;
            self.nodes[a].fanout += 1;
            self.nodes[b].fanout += 1;
            self.nodes.push(SearchNode { lo, hi, depth, fanout: 0 });
            let was_prefix = lo == 1;
            if was_prefix {
                self.prefix_done[hi as usize - 1] = true;
                self.missing -= 1;
            }

            if self.dfs(ops_left - 1, key) {
                return true;
            }

            if was_prefix {
                self.prefix_done[hi as usize - 1] = false;
                self.missing += 1;
            }
            self.nodes.pop();
            self.nodes[a].fanout -= 1;
            self.nodes[b].fanout -= 1;
        }
        false
    }

    fn exists(&self, lo: u8, hi: u8) -> bool {
        self.nodes.iter().any(|n| n.lo == lo && n.hi == hi)
    }
}

/// Least depth admitting a zero-deficiency, fanout-bounded prefix circuit,
/// found by iterative deepening over exhaustive op insertion.
pub fn min_depth_exhaustive(cfg: SearchConfig) -> Result<Option<u32>> {
    if cfg.k < 2 {
        return Err(Error::InvalidFanout(cfg.k));
    }
    if cfg.n == 0 || cfg.n > 8 {
        return Err(Error::OutOfRange(format!(
            "exhaustive search covers 1..=8 inputs, got {}",
            cfg.n
        )));
    }
    if cfg.n == 1 {
        return Ok(Some(0));
    }
    let hard_cap = cfg.n as u32 - 1;
    let max_depth = cfg.max_depth.unwrap_or(hard_cap).min(hard_cap);
    let floor = (cfg.n as f64).log2().ceil() as u32;
    for depth in floor.max(1)..=max_depth {
        let budget = 2 * cfg.n - 2 - depth as usize;
        let mut search = Search::new(cfg.k, cfg.n, depth);
        if search.dfs(budget, 0) {
            return Ok(Some(depth));
        }
    }
    Ok(None)
}
