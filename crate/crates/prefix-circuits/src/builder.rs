//! Construction of zero-deficiency prefix circuits of minimal depth.
//!
//! A circuit is assembled as a principal chain `v_0 .. v_D` plus one segment
//! per chain step. Segment `d` gathers its inputs with a framework subtree of
//! depth at most `d` (joined into the chain by the successor op) and
//! distributes prefix outputs below the chain node within the remaining
//! depth budget. Two wiring mechanisms cover the feasible widths:
//!
//! * ladder: blocks with stepped framework budgets hang off the base, the
//!   wiring of the width recurrence;
//! * dyadic ripple: a rail of output ops that advances by leaf steps and by
//!   power-of-two block jumps over a balanced fold, which reaches widths the
//!   ladder cannot at tight fanout.
//!
//! Both keep every fanout at or below k, with chain nodes consuming at most
//! `min(d, k-1) + 1` slots including the successor.

use std::collections::HashMap;

use num_bigint::BigUint;

use crate::circuit::{Circuit, Node, NodeKind};
use crate::error::{Error, Result};
use crate::recurrence::{max_inputs, min_depth, StarTable};

/// Practical ceiling on materialized circuit size (node count scale).
const MAX_MATERIALIZED_INPUTS: u64 = 1 << 22;

/// Depth budget and width of one framework block inside a segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockPlan {
    pub i_budget: u32,
    pub width: usize,
}

/// Recipe for one segment of the chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentPlan {
    /// Chain-node depth of the segment base.
    pub d: u32,
    /// Distribution budget paired with `d` (the depth minus d minus one).
    pub h: u32,
    pub width: usize,
    pub blocks: Vec<BlockPlan>,
}

/// Build request: fanout bound, input count, optional explicit depth.
#[derive(Debug, Clone, Copy)]
pub struct BuildSpec {
    pub k: u32,
    pub n: u64,
    pub depth: Option<u32>,
}

impl BuildSpec {
    pub fn new(k: u32, n: u64) -> Self {
        BuildSpec { k, n, depth: None }
    }

    pub fn with_depth(k: u32, n: u64, depth: u32) -> Self {
        BuildSpec { k, n, depth: Some(depth) }
    }
}

// --- capacity tables ---------------------------------------------------

/// Capacities of the two mechanisms, memoized per fanout bound.
struct Capacity {
    k: u32,
    fragment: HashMap<(u32, u32, u32), u128>,
    /// ripple_prefix[e] = max op level among endings 1..=e (index 0 unused).
    ripple_prefix: Vec<u32>,
    ripple_levels: Vec<u32>,
}

impl Capacity {
    fn new(k: u32) -> Self {
        Capacity {
            k,
            fragment: HashMap::new(),
            ripple_prefix: vec![0],
            ripple_levels: vec![0],
        }
    }

    /// Widths coverable by one fragment: fold budget `delta`, `lambda` levels
    /// below the base, at most `mu` children on the base. A fragment either
    /// splits ladder-style (left part at the base, right part one level down
    /// under the boundary child) or lays out a dyadic ripple; the split sides
    /// again choose freely, so the table is the fixpoint over both wirings.
    fn fragment(&mut self, delta: u32, lambda: u32, mu: u32) -> u128 {
        if delta == 0 || lambda == 0 || mu == 0 {
            return 1;
        }
        if let Some(&v) = self.fragment.get(&(delta, lambda, mu)) {
            return v;
        }
        let left = self.fragment(delta - 1, lambda, mu - 1);
        let right = self.fragment(delta - 1, lambda - 1, self.k);
        let mut v = left.saturating_add(right);
        // the ripple only ever hangs one child on the base
        v = v.max(self.ripple(delta, lambda));
        self.fragment.insert((delta, lambda, mu), v);
        v
    }

    fn extend_ripple(&mut self, upto: usize) {
        while self.ripple_levels.len() <= upto {
            let e = self.ripple_levels.len() as u64;
            let p = ripple_parent(e, self.k) as usize;
            let level = self.ripple_levels[p] + 1;
            let prev = *self.ripple_prefix.last().unwrap();
            self.ripple_levels.push(level);
            self.ripple_prefix.push(prev.max(level));
        }
    }

    /// Widths coverable by the dyadic ripple within `lambda` levels and fold
    /// depth `d`. Each rail jump advances at most `2^(k-1)`, so the scan is
    /// bounded; results beyond the materialization ceiling are clamped.
    fn ripple(&mut self, d: u32, lambda: u32) -> u128 {
        if d == 0 || lambda == 0 {
            return 1;
        }
        let fold_cap = if d >= 62 { u64::MAX } else { 1u64 << d };
        let reach = (u64::from(lambda) + 2) << (self.k - 1).min(24);
        let scan = fold_cap
            .min(reach)
            .min(MAX_MATERIALIZED_INPUTS) as usize;
        self.extend_ripple(scan.saturating_sub(1));
        // width w needs every ending level up to w-1 within budget
        let feasible = self.ripple_prefix[..scan].partition_point(|&lv| lv <= lambda);
        feasible.max(1) as u128
    }

    fn segment(&mut self, d: u32, lambda: u32) -> u128 {
        self.fragment(d, lambda, d.min(self.k - 1))
    }
}

/// Parent ending of `e` on the ripple rail: strip the lowest set bit, capped
/// at jump size `2^(k-1)`, never landing on the base except from 1.
fn ripple_parent(e: u64, k: u32) -> u64 {
    debug_assert!(e >= 1);
    if e == 1 {
        return 0;
    }
    let mut j = e.trailing_zeros().min(k - 1);
    while (1u64 << j) >= e {
        j -= 1;
    }
    e - (1u64 << j)
}

// --- planning ------------------------------------------------------------

/// Split `n - 1` inputs over the `D` segments of a depth-`D` chain.
///
/// Feasibility is gated by the table bound `n <= 1 + w*_k(D-1)`; the actual
/// distribution fills the highest-capacity segments first.
pub fn plan_segments(k: u32, n: u64, depth: u32) -> Result<Vec<SegmentPlan>> {
    if k < 2 {
        return Err(Error::InvalidFanout(k));
    }
    if depth == 0 || n < 2 {
        return Err(Error::OutOfRange(format!(
            "planning needs n >= 2 and depth >= 1, got n={n} depth={depth}"
        )));
    }
    if u64::from(depth) > n - 1 {
        return Err(Error::OutOfRange(format!(
            "depth {depth} exceeds n-1 = {} (a chain node per level needs one input)",
            n - 1
        )));
    }
    let cap = max_inputs(k, depth)?;
    if BigUint::from(n) > cap {
        return Err(Error::Capacity {
            what: format!("{n} inputs at depth {depth}"),
            k,
            depth,
            max: cap.to_string(),
        });
    }
    if n > MAX_MATERIALIZED_INPUTS {
        return Err(Error::OutOfRange(format!(
            "{n} inputs exceeds the materialization ceiling {MAX_MATERIALIZED_INPUTS}"
        )));
    }

    let n = n as usize;
    let mut caps = Capacity::new(k);
    let per_segment: Vec<usize> = (0..depth)
        .map(|d| {
            let c = caps.segment(d, depth - d);
            c.min((n - 1) as u128) as usize
        })
        .collect();

    let mut widths = vec![1usize; depth as usize];
    let mut remaining = (n - 1) - depth as usize;
    let mut order: Vec<usize> = (0..depth as usize).collect();
    order.sort_by(|&a, &b| per_segment[b].cmp(&per_segment[a]).then(a.cmp(&b)));
    for d in order {
        if remaining == 0 {
            break;
        }
        let take = remaining.min(per_segment[d] - 1);
        widths[d] += take;
        remaining -= take;
    }
    if remaining > 0 {
        return Err(Error::Validation(format!(
            "segment capacities cannot place {remaining} inputs at k={k} depth={depth}"
        )));
    }

    Ok((0..depth)
        .map(|d| {
            let width = widths[d as usize];
            let h = depth - 1 - d;
            let mu = d.min(k - 1);
            // resolve the level budget the same way the realizer will
            let lambda = if width as u128 <= caps.fragment(d, h, mu) { h } else { h + 1 };
            let blocks = plan_blocks(&mut caps, d, lambda, mu, width);
            SegmentPlan { d, h, width, blocks }
        })
        .collect())
}

/// Flat block decomposition mirroring the wiring the realizer will choose:
/// ladder splits unroll into the stepped budget list, ripple ranges stay one
/// block.
fn plan_blocks(caps: &mut Capacity, delta: u32, lambda: u32, mu: u32, width: usize) -> Vec<BlockPlan> {
    if width == 1 {
        return vec![BlockPlan { i_budget: 0, width: 1 }];
    }
    if split_feasible(caps, delta, lambda, mu, width) {
        let right_cap = caps.fragment(delta - 1, lambda - 1, caps.k);
        let right = (width as u128 - 1).min(right_cap) as usize;
        let mut blocks = plan_blocks(caps, delta - 1, lambda, mu - 1, width - right);
        blocks.push(BlockPlan { i_budget: delta - 1, width: right });
        return blocks;
    }
    // ripple segments are a single block over the whole input range
    vec![BlockPlan { i_budget: delta, width }]
}

/// True when the ladder split covers the width at these budgets.
fn split_feasible(caps: &mut Capacity, delta: u32, lambda: u32, mu: u32, width: usize) -> bool {
    if delta == 0 || lambda == 0 || mu == 0 {
        return width <= 1;
    }
    let left = caps.fragment(delta - 1, lambda, mu - 1);
    let right = caps.fragment(delta - 1, lambda - 1, caps.k);
    width as u128 <= left.saturating_add(right)
}

// --- circuit assembly ------------------------------------------------------

/// Accumulates nodes of a circuit under construction.
pub struct CircuitBuilder {
    nodes: Vec<Node>,
}

impl CircuitBuilder {
    pub fn with_inputs(n: usize) -> Self {
        let nodes = (0..n)
            .map(|i| Node { id: i, kind: NodeKind::Input { pos: i + 1 } })
            .collect();
        CircuitBuilder { nodes }
    }

    pub fn op(&mut self, left: usize, right: usize) -> usize {
        let id = self.nodes.len();
        debug_assert!(left < id && right < id);
        self.nodes.push(Node { id, kind: NodeKind::Op { left, right } });
        id
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }
}

/// Wire one consistent pair: framework subtree over `inputs` (its root is
/// returned for the caller's successor op) plus the distribution ops for
/// every prefix ending strictly inside the range.
///
/// The base keeps at most `min(d, k-1)` children here, so the successor op
/// fits under the fanout bound. Output ops stay within `h` levels below the
/// base when the ladder wiring suffices, one deeper otherwise.
pub fn build_pair(
    builder: &mut CircuitBuilder,
    k: u32,
    d: u32,
    h: u32,
    width: usize,
    base: usize,
    inputs: &[usize],
) -> Result<usize> {
    assert_eq!(inputs.len(), width, "input range must match the width");
    if width == 0 {
        return Err(Error::OutOfRange("pair width must be at least 1".into()));
    }
    if width == 1 {
        return Ok(inputs[0]);
    }
    let mut caps = Capacity::new(k);
    let mu = d.min(k - 1);
    if width as u128 <= caps.fragment(d, h, mu) {
        return Ok(fragment_cover(builder, &mut caps, base, inputs, d, h, mu));
    }
    // one extra level of slack: the segment of a depth-D chain has D - d
    // levels available while the paired budget is D - d - 1
    if width as u128 <= caps.fragment(d, h + 1, mu) {
        return Ok(fragment_cover(builder, &mut caps, base, inputs, d, h + 1, mu));
    }
    Err(Error::OutOfRange(format!(
        "width {width} overflows the wirable range for k={k}, d={d}, h={h}"
    )))
}

/// Wire one fragment, choosing per range between the ladder split and the
/// dyadic ripple, exactly as the capacity table does.
///
/// The ladder split puts a shallower left part at the same base and a right
/// block one level down under the boundary child, mirroring the stepped block
/// budgets `[d-l, d-l, d-l+1, ..., d-1]` when saturated. Trimming drops from
/// the left so the deep blocks stay saturated.
fn fragment_cover(
    b: &mut CircuitBuilder,
    caps: &mut Capacity,
    base: usize,
    zs: &[usize],
    delta: u32,
    lambda: u32,
    mu: u32,
) -> usize {
    if zs.len() == 1 {
        return zs[0];
    }
    debug_assert!(delta >= 1 && lambda >= 1 && mu >= 1, "capacity underflow");
    if split_feasible(caps, delta, lambda, mu, zs.len()) {
        let right_cap = caps.fragment(delta - 1, lambda - 1, caps.k);
        let right = (zs.len() as u128 - 1).min(right_cap) as usize;
        let (s1, s2) = zs.split_at(zs.len() - right);
        let f1 = fragment_cover(b, caps, base, s1, delta - 1, lambda, mu - 1);
        // boundary child: covers the prefix ending at the left part's last input
        let boundary = b.op(base, f1);
        let f2 = fragment_cover(b, caps, boundary, s2, delta - 1, lambda - 1, caps.k);
        return b.op(f1, f2);
    }
    debug_assert!(zs.len() as u128 <= caps.ripple(delta, lambda));
    ripple_cover(b, caps, base, zs)
}

/// Dyadic ripple wiring. The fold is the standard aligned split (left part
/// the largest power of two), so every aligned block is a fold node; the
/// output rail advances from the base by leaf steps and block jumps.
fn ripple_cover(
    b: &mut CircuitBuilder,
    caps: &mut Capacity,
    base: usize,
    zs: &[usize],
) -> usize {
    let w = zs.len();
    let mut blocks: HashMap<(usize, usize), usize> = HashMap::new();
    let root = dyadic_fold(b, zs, 0, &mut blocks);

    let mut rail = vec![usize::MAX; w];
    rail[0] = base;
    for e in 1..w {
        let p = ripple_parent(e as u64, caps.k) as usize;
        let second = if e - p == 1 {
            zs[e - 1]
        } else {
            *blocks
                .get(&(p, e - p))
                .expect("jump block must be a fold node")
        };
        rail[e] = b.op(rail[p], second);
    }
    root
}

/// Balanced aligned fold: splits at the largest power of two below the
/// length, recording every block so jump ops can reference them.
fn dyadic_fold(
    b: &mut CircuitBuilder,
    zs: &[usize],
    offset: usize,
    blocks: &mut HashMap<(usize, usize), usize>,
) -> usize {
    let w = zs.len();
    if w == 1 {
        return zs[0];
    }
    let mut half = 1usize;
    while half * 2 < w {
        half *= 2;
    }
    let (l, r) = zs.split_at(half);
    let lf = dyadic_fold(b, l, offset, blocks);
    let rf = dyadic_fold(b, r, offset + half, blocks);
    let node = b.op(lf, rf);
    blocks.insert((offset, w), node);
    node
}

/// Least depth at which the wiring family can place `n` inputs. Equals the
/// table depth wherever the family reaches the table bound; a step beyond
/// only in the deep fanout-2 range where the table is not wirable under this
/// fanout accounting.
pub fn feasible_min_depth(k: u32, n: u64) -> Result<u32> {
    let least = min_depth(k, n)?;
    if n <= 2 {
        return Ok(least);
    }
    let mut depth = least;
    loop {
        match plan_segments(k, n, depth) {
            Ok(_) => return Ok(depth),
            Err(Error::Validation(_)) if u64::from(depth) < n - 1 => depth += 1,
            Err(err) => return Err(err),
        }
    }
}

/// Build a zero-deficiency circuit for the spec, at the requested or minimal
/// constructive depth.
pub fn build_circuit(spec: BuildSpec) -> Result<Circuit> {
    if spec.k < 2 {
        return Err(Error::InvalidFanout(spec.k));
    }
    if spec.n == 0 {
        return Err(Error::OutOfRange("input count must be at least 1".into()));
    }
    if spec.n == 1 {
        if spec.depth.unwrap_or(0) != 0 {
            return Err(Error::OutOfRange("a single input admits only depth 0".into()));
        }
        let nodes = vec![Node { id: 0, kind: NodeKind::Input { pos: 1 } }];
        return Ok(Circuit { n: 1, nodes, outputs: vec![0] });
    }
    let least = min_depth(spec.k, spec.n)?;
    if let Some(depth) = spec.depth {
        if depth < least {
            return Err(Error::Capacity {
                what: format!("{} inputs at depth {depth}", spec.n),
                k: spec.k,
                depth,
                max: max_inputs(spec.k, depth.max(1))?.to_string(),
            });
        }
    }
    let depth = match spec.depth {
        Some(d) => d,
        None => feasible_min_depth(spec.k, spec.n)?,
    };

    let plan = plan_segments(spec.k, spec.n, depth)?;
    let n = spec.n as usize;
    let mut builder = CircuitBuilder::with_inputs(n);
    let mut chain = 0usize; // v_0 is input x1
    let mut offset = 1usize;
    for seg in &plan {
        let zs: Vec<usize> = (offset..offset + seg.width).collect();
        let fold = build_pair(&mut builder, spec.k, seg.d, seg.h, seg.width, chain, &zs)?;
        chain = builder.op(chain, fold);
        offset += seg.width;
    }
    debug_assert_eq!(offset, n);

    let circuit = finish_outputs(builder, n)?;
    debug_assert_eq!(circuit.metrics().depth, depth);
    Ok(circuit)
}

fn finish_outputs(builder: CircuitBuilder, n: usize) -> Result<Circuit> {
    let mut circuit = Circuit { n, nodes: builder.nodes, outputs: vec![0; n] };
    let intervals = circuit.intervals()?;
    let mut found = vec![usize::MAX; n];
    for (id, iv) in intervals.iter().enumerate() {
        if iv.lo == 1 {
            debug_assert!(found[iv.hi - 1] == usize::MAX, "duplicate prefix {iv}");
            found[iv.hi - 1] = id;
        }
    }
    for (i, &id) in found.iter().enumerate() {
        if id == usize::MAX {
            return Err(Error::Validation(format!("prefix ending at {} never built", i + 1)));
        }
        circuit.outputs[i] = id;
    }
    Ok(circuit)
}

/// Widest constructible circuit at the given depth: `n = 1 + w*_k(D-1)`.
pub fn build_max_circuit(k: u32, depth: u32) -> Result<Circuit> {
    let n = max_inputs(k, depth)?;
    let n: u64 = n.try_into().map_err(|_| {
        Error::OutOfRange(format!("max width at depth {depth} is too large to materialize"))
    })?;
    build_circuit(BuildSpec::with_depth(k, n, depth))
}

/// Check that the planner can reach the table bound for every depth in range.
/// Exposed for tests; returns the first shortfall if any.
pub fn capacity_audit(k: u32, max_depth: u32) -> Result<()> {
    let mut star = StarTable::new(k)?;
    for depth in 1..=max_depth {
        let widest = star.value(depth - 1) + 1u32;
        let widest: u64 = match (&widest).try_into() {
            Ok(v) => v,
            Err(_) => break,
        };
        if widest > MAX_MATERIALIZED_INPUTS {
            break;
        }
        plan_segments(k, widest, depth)?;
    }
    Ok(())
}

/// Largest depth (up to `max_depth`) through which the planner reaches the
/// table bound for every smaller depth.
pub fn capacity_horizon(k: u32, max_depth: u32) -> u32 {
    let Ok(mut star) = StarTable::new(k) else { return 0 };
    for depth in 1..=max_depth {
        let widest = star.value(depth - 1) + 1u32;
        let widest: u64 = match (&widest).try_into() {
            Ok(v) => v,
            Err(_) => return depth - 1,
        };
        if widest > MAX_MATERIALIZED_INPUTS {
            return depth - 1;
        }
        if plan_segments(k, widest, depth).is_err() {
            return depth - 1;
        }
    }
    max_depth
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recurrence::pair_width;

    #[test]
    fn plan_examples() {
        let plan = plan_segments(2, 5, 3).unwrap();
        let widths: Vec<usize> = plan.iter().map(|s| s.width).collect();
        assert_eq!(widths, vec![1, 2, 1]);
        assert_eq!(plan[1].d, 1);
        assert_eq!(plan[1].h, 1);

        let plan = plan_segments(3, 2, 1).unwrap();
        assert_eq!(plan.len(), 1);
        assert_eq!(plan[0].width, 1);
    }

    #[test]
    fn plan_rejects_overflow() {
        let err = plan_segments(2, 8, 3).unwrap_err();
        match err {
            Error::Capacity { max, .. } => assert_eq!(max, "5"),
            other => panic!("expected capacity error, got {other}"),
        }
    }

    #[test]
    fn plan_rejects_depth_above_chain() {
        assert!(plan_segments(2, 3, 3).is_err());
    }

    #[test]
    fn plan_block_invariants() {
        for (k, n, d) in [(2, 5, 3), (3, 12, 5), (4, 30, 7), (2, 23, 7)] {
            for seg in plan_segments(k, n, d).unwrap() {
                let total: usize = seg.blocks.iter().map(|b| b.width).sum();
                assert_eq!(total, seg.width);
                assert!(!seg.blocks.is_empty());
            }
        }
    }

    #[test]
    fn golden_five_input_circuit() {
        let c = build_circuit(BuildSpec::new(2, 5)).unwrap();
        assert!(c.verify_prefix().unwrap().passed());
        let m = c.metrics();
        assert_eq!(m.depth, 3);
        assert_eq!(m.size, 5);
        assert_eq!(m.deficiency, 0);
        assert_eq!(m.max_fanout, 2);
    }

    #[test]
    fn two_input_circuit() {
        let c = build_circuit(BuildSpec::new(2, 2)).unwrap();
        let m = c.metrics();
        assert_eq!((m.depth, m.size), (1, 1));
    }

    #[test]
    fn single_input_circuit() {
        let c = build_circuit(BuildSpec::new(3, 1)).unwrap();
        assert_eq!(c.metrics().depth, 0);
        assert!(c.verify_prefix().unwrap().passed());
    }

    #[test]
    fn build_sweep_small() {
        for k in 2..=4u32 {
            for n in 2..=64u64 {
                let c = build_circuit(BuildSpec::new(k, n)).unwrap();
                assert!(c.verify_prefix().unwrap().passed(), "k={k} n={n}");
                let m = c.metrics();
                assert_eq!(m.deficiency, 0, "k={k} n={n}");
                assert!(m.max_fanout <= k as usize, "k={k} n={n}");
                assert_eq!(m.depth, min_depth(k, n).unwrap(), "k={k} n={n}");
            }
        }
    }

    #[test]
    fn build_thousand_inputs() {
        let c = build_circuit(BuildSpec::new(3, 1000)).unwrap();
        assert!(c.verify_prefix().unwrap().passed());
        let m = c.metrics();
        assert_eq!(m.depth, 16);
        assert_eq!(m.size, 1982);
        assert_eq!(m.deficiency, 0);
        assert!(m.max_fanout <= 3);
    }

    #[test]
    fn explicit_depth_slack() {
        let c = build_circuit(BuildSpec::with_depth(2, 6, 5)).unwrap();
        assert!(c.verify_prefix().unwrap().passed());
        let m = c.metrics();
        assert_eq!(m.depth, 5);
        assert_eq!(m.deficiency, 0);
        assert!(build_circuit(BuildSpec::with_depth(2, 6, 3)).is_err());
    }

    #[test]
    fn build_max_examples() {
        assert_eq!(build_max_circuit(2, 4).unwrap().n, 7);
        assert_eq!(build_max_circuit(3, 5).unwrap().n, 12);
        assert_eq!(build_max_circuit(2, 1).unwrap().n, 2);
        for (k, depth) in [(2u32, 12u32), (3, 9), (4, 9)] {
            let c = build_max_circuit(k, depth).unwrap();
            assert!(c.verify_prefix().unwrap().passed());
            let m = c.metrics();
            assert_eq!(m.depth, depth);
            assert_eq!(m.deficiency, 0);
        }
        // past the fanout-2 wiring horizon the table width is not reachable
        assert!(build_max_circuit(2, 13).is_err());
    }

    #[test]
    fn chain_discipline() {
        for (k, n) in [(2u32, 23u64), (2, 100), (3, 120), (4, 200)] {
            let c = build_circuit(BuildSpec::new(k, n)).unwrap();
            let fanouts = c.fanouts(false);
            // walk the chain: nodes computing [1, t] consumed by the next one
            let intervals = c.intervals().unwrap();
            for (id, iv) in intervals.iter().enumerate() {
                if iv.lo == 1 {
                    let cap = if k == 2 { 2 } else { k as usize };
                    assert!(fanouts[id] <= cap, "k={k} n={n} chain node {id}");
                }
            }
        }
    }

    #[test]
    fn node_class_counts_on_built_circuits() {
        for (k, n) in [(2u32, 5u64), (2, 23), (3, 57), (4, 300)] {
            let c = build_circuit(BuildSpec::new(k, n)).unwrap();
            let d = c.metrics().depth as usize;
            let (framework, outputs, both) = c.node_class_counts();
            assert_eq!(framework, n as usize - 1, "k={k} n={n}");
            assert_eq!(outputs, n as usize - 1, "k={k} n={n}");
            assert_eq!(both, d, "k={k} n={n}");
        }
    }

    #[test]
    fn pair_examples_spec_wiring() {
        // (k=2, d=1, h=1, width=2): p = v . y1, fold u = y1 . y2
        let mut b = CircuitBuilder::with_inputs(3);
        let base = 0;
        let fold = build_pair(&mut b, 2, 1, 1, 2, base, &[1, 2]).unwrap();
        assert_eq!(b.nodes.len(), 5);
        assert_eq!(b.nodes[3].kind, NodeKind::Op { left: 0, right: 1 });
        assert_eq!(b.nodes[fold].kind, NodeKind::Op { left: 1, right: 2 });

        // (k=3, d=2, h=2, width=4): children v.y1 and v.(y1 y2), one grandchild
        let mut b = CircuitBuilder::with_inputs(5);
        let fold = build_pair(&mut b, 3, 2, 2, 4, 0, &[1, 2, 3, 4]).unwrap();
        let kinds: Vec<&NodeKind> = b.nodes[5..].iter().map(|n| &n.kind).collect();
        assert_eq!(kinds[0], &NodeKind::Op { left: 0, right: 1 }); // v . y1
        assert_eq!(kinds[1], &NodeKind::Op { left: 1, right: 2 }); // a2 = y1 . y2
        assert_eq!(kinds[2], &NodeKind::Op { left: 0, right: 6 }); // v . a2
        assert_eq!(kinds[3], &NodeKind::Op { left: 7, right: 3 }); // (v . a2) . y3
        assert_eq!(kinds[4], &NodeKind::Op { left: 3, right: 4 }); // y3 . y4
        assert_eq!(b.nodes[fold].kind, NodeKind::Op { left: 6, right: 9 });
    }

    #[test]
    fn pair_width_one_is_bare_input() {
        let mut b = CircuitBuilder::with_inputs(2);
        let fold = build_pair(&mut b, 4, 3, 2, 1, 0, &[1]).unwrap();
        assert_eq!(fold, 1);
        assert_eq!(b.nodes.len(), 2);
    }

    #[test]
    fn pair_rejects_unwirable_width() {
        let mut b = CircuitBuilder::with_inputs(40);
        let inputs: Vec<usize> = (1..40).collect();
        assert!(build_pair(&mut b, 2, 2, 1, 39, 0, &inputs).is_err());
    }

    #[test]
    fn fragment_saturates_pair_width_below_fanout() {
        // for d < k the wiring reaches the full table cell within h levels
        let mut caps = Capacity::new(4);
        for d in 0..4u32 {
            for h in 0..=6u32 {
                let cell = pair_width(4, d, h).unwrap();
                let cap = caps.fragment(d, h, d.min(3));
                assert!(BigUint::from(cap) >= cell, "d={d} h={h}");
            }
        }
    }


    #[test]
    fn capacity_covers_tables() {
        // measured horizons of the wiring family; the fanout-2 family tops
        // out at depth 12, wider fanouts reach past every desk-scale need
        capacity_audit(2, 12).unwrap();
        capacity_audit(3, 18).unwrap();
        capacity_audit(4, 24).unwrap();
        for k in 5..=8u32 {
            capacity_audit(k, 24).unwrap();
        }
        assert_eq!(capacity_horizon(2, 16), 12);
    }

    #[test]
    fn feasible_depth_tracks_table_until_horizon() {
        for n in 2..=175u64 {
            assert_eq!(
                feasible_min_depth(2, n).unwrap(),
                min_depth(2, n).unwrap(),
                "n={n}"
            );
        }
        // beyond the fanout-2 horizon the family needs one extra level
        assert_eq!(min_depth(2, 191).unwrap(), 13);
        assert_eq!(feasible_min_depth(2, 191).unwrap(), 14);
    }
}
