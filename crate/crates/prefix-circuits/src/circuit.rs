//! Circuit DAG model, free-semigroup verification, metrics and serialization.
//!
//! Nodes carry dense ids in topological order. Semantics are evaluated over
//! the free semigroup of index intervals: an op node concatenates two
//! adjacent interval sums, which certifies correctness for every semigroup.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inclusive interval of 1-based input indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: usize,
    pub hi: usize,
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeKind {
    /// Circuit input at 1-based position `pos`.
    Input { pos: usize },
    /// Binary element combining two adjacent interval sums.
    Op { left: usize, right: usize },
    /// Identity element passing one value through.
    Relay { arg: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub id: usize,
    pub kind: NodeKind,
}

/// A prefix circuit: inputs, elements in topological order, and one
/// designated output node per prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    pub n: usize,
    pub nodes: Vec<Node>,
    /// outputs[i] is the node computing the prefix ending at input i+1.
    pub outputs: Vec<usize>,
}

/// Structural and size metrics of a verified circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Metrics {
    pub depth: u32,
    /// Number of binary elements.
    pub size: usize,
    pub max_fanout: usize,
    /// size + depth - (2N - 2); zero for optimal circuits.
    pub deficiency: i64,
    pub fanout_histogram: BTreeMap<usize, usize>,
}

/// Outcome of prefix verification.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub n: usize,
    pub failures: Vec<VerifyFailure>,
}

#[derive(Debug, Clone)]
pub struct VerifyFailure {
    /// 1-based prefix index that failed.
    pub output: usize,
    pub found: Interval,
    pub expected: Interval,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl Circuit {
    /// Validate ids, argument ordering, input positions, output wiring and
    /// connectivity. Interval adjacency is checked separately by
    /// `interval_of` / `verify_prefix`.
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Validation("circuit needs at least one input".into()));
        }
        let mut input_seen = vec![false; self.n];
        let mut input_count = 0usize;
        for (idx, node) in self.nodes.iter().enumerate() {
            if node.id != idx {
                return Err(Error::MalformedCircuit {
                    node: node.id,
                    reason: format!("ids must be dense and ordered, found at slot {idx}"),
                });
            }
            match node.kind {
                NodeKind::Input { pos } => {
                    input_count += 1;
                    if pos == 0 || pos > self.n {
                        return Err(Error::MalformedCircuit {
                            node: idx,
                            reason: format!("input position {pos} outside 1..={}", self.n),
                        });
                    }
                    if input_seen[pos - 1] {
                        return Err(Error::MalformedCircuit {
                            node: idx,
                            reason: format!("duplicate input position {pos}"),
                        });
                    }
                    input_seen[pos - 1] = true;
                }
                NodeKind::Op { left, right } => {
                    if left >= idx || right >= idx {
                        return Err(Error::MalformedCircuit {
                            node: idx,
                            reason: "op arguments must reference earlier nodes".into(),
                        });
                    }
                }
                NodeKind::Relay { arg } => {
                    if arg >= idx {
                        return Err(Error::MalformedCircuit {
                            node: idx,
                            reason: "relay argument must reference an earlier node".into(),
                        });
                    }
                }
            }
        }
        if input_count != self.n {
            return Err(Error::Validation(format!(
                "expected {} input nodes, found {input_count}",
                self.n
            )));
        }
        if self.outputs.len() != self.n {
            return Err(Error::Validation(format!(
                "expected {} outputs, found {}",
                self.n,
                self.outputs.len()
            )));
        }
        for &o in &self.outputs {
            if o >= self.nodes.len() {
                return Err(Error::Validation(format!("output id {o} out of range")));
            }
        }
        // every non-output node must reach an output
        let mut live = vec![false; self.nodes.len()];
        for &o in &self.outputs {
            live[o] = true;
        }
        for idx in (0..self.nodes.len()).rev() {
            if !live[idx] {
                continue;
            }
            match self.nodes[idx].kind {
                NodeKind::Op { left, right } => {
                    live[left] = true;
                    live[right] = true;
                }
                NodeKind::Relay { arg } => live[arg] = true,
                NodeKind::Input { .. } => {}
            }
        }
        if let Some(dead) = live.iter().position(|&l| !l) {
            return Err(Error::MalformedCircuit {
                node: dead,
                reason: "node not connected to any output".into(),
            });
        }
        Ok(())
    }

    /// Intervals of all nodes in one forward pass.
    pub fn intervals(&self) -> Result<Vec<Interval>> {
        let mut out = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let iv = match node.kind {
                NodeKind::Input { pos } => Interval { lo: pos, hi: pos },
                NodeKind::Relay { arg } => out[arg],
                NodeKind::Op { left, right } => {
                    let a: Interval = out[left];
                    let b: Interval = out[right];
                    if a.hi + 1 != b.lo {
                        return Err(Error::MalformedCircuit {
                            node: node.id,
                            reason: format!("op joins non-adjacent intervals {a} and {b}"),
                        });
                    }
                    Interval { lo: a.lo, hi: b.hi }
                }
            };
            out.push(iv);
        }
        Ok(out)
    }

    /// Interval computed by one node.
    pub fn interval_of(&self, node_id: usize) -> Result<Interval> {
        let all = self.intervals()?;
        all.get(node_id)
            .copied()
            .ok_or_else(|| Error::Validation(format!("node id {node_id} out of range")))
    }

    /// Check that output i computes the prefix [1, i] for every i.
    pub fn verify_prefix(&self) -> Result<VerifyReport> {
        self.validate()?;
        let intervals = self.intervals()?;
        let mut failures = Vec::new();
        for (i, &node) in self.outputs.iter().enumerate() {
            let expected = Interval { lo: 1, hi: i + 1 };
            let found = intervals[node];
            if found != expected {
                failures.push(VerifyFailure { output: i + 1, found, expected });
            }
        }
        Ok(VerifyReport { n: self.n, failures })
    }

    /// Node depths: inputs at 0, every element one past its deepest argument.
    pub fn depths(&self) -> Vec<u32> {
        let mut depths = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let d = match node.kind {
                NodeKind::Input { .. } => 0,
                NodeKind::Relay { arg } => depths[arg] + 1,
                NodeKind::Op { left, right } => {
                    let l: u32 = depths[left];
                    let r: u32 = depths[right];
                    l.max(r) + 1
                }
            };
            depths.push(d);
        }
        depths
    }

    /// Consumer counts per node. Output designation is free by default;
    /// `count_output_taps` adds one consumer per designation for exploration.
    pub fn fanouts(&self, count_output_taps: bool) -> Vec<usize> {
        let mut fan = vec![0usize; self.nodes.len()];
        for node in &self.nodes {
            match node.kind {
                NodeKind::Op { left, right } => {
                    fan[left] += 1;
                    fan[right] += 1;
                }
                NodeKind::Relay { arg } => fan[arg] += 1,
                NodeKind::Input { .. } => {}
            }
        }
        if count_output_taps {
            for &o in &self.outputs {
                fan[o] += 1;
            }
        }
        fan
    }

    pub fn metrics(&self) -> Metrics {
        self.metrics_with(false)
    }

    pub fn metrics_with(&self, count_output_taps: bool) -> Metrics {
        let depths = self.depths();
        let fanouts = self.fanouts(count_output_taps);
        let size = self
            .nodes
            .iter()
            .filter(|n| matches!(n.kind, NodeKind::Op { .. }))
            .count();
        let depth = depths.iter().copied().max().unwrap_or(0);
        let mut histogram = BTreeMap::new();
        for &f in &fanouts {
            *histogram.entry(f).or_insert(0) += 1;
        }
        Metrics {
            depth,
            size,
            max_fanout: fanouts.iter().copied().max().unwrap_or(0),
            deficiency: size as i64 + depth as i64 - (2 * self.n as i64 - 2),
            fanout_histogram: histogram,
        }
    }

    /// Ops on the spine computing the total sum (the framework tree), ops
    /// designated as outputs, and the overlap of the two sets. For optimal
    /// circuits the counts are N-1, N-1 and the depth.
    pub fn node_class_counts(&self) -> (usize, usize, usize) {
        let mut in_framework = vec![false; self.nodes.len()];
        let total = self.outputs[self.n - 1];
        let mut stack = vec![total];
        while let Some(id) = stack.pop() {
            if in_framework[id] {
                continue;
            }
            in_framework[id] = true;
            match self.nodes[id].kind {
                NodeKind::Op { left, right } => {
                    stack.push(left);
                    stack.push(right);
                }
                NodeKind::Relay { arg } => stack.push(arg),
                NodeKind::Input { .. } => {}
            }
        }
        let mut is_output = vec![false; self.nodes.len()];
        for &o in &self.outputs {
            is_output[o] = true;
        }
        let mut framework_ops = 0;
        let mut output_ops = 0;
        let mut both = 0;
        for node in &self.nodes {
            if !matches!(node.kind, NodeKind::Op { .. }) {
                continue;
            }
            let f = in_framework[node.id];
            let o = is_output[node.id];
            if f {
                framework_ops += 1;
            }
            if o {
                output_ops += 1;
            }
            if f && o {
                both += 1;
            }
        }
        (framework_ops, output_ops, both)
    }

    pub fn to_json(&self) -> String {
        let doc = JsonCircuit::from(self);
        serde_json::to_string_pretty(&doc).expect("serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Circuit> {
        let doc: JsonCircuit = serde_json::from_str(text)?;
        let circuit = doc.into_circuit()?;
        circuit.validate()?;
        // re-run the interval pass so adjacency violations surface on load
        circuit.intervals()?;
        Ok(circuit)
    }

    /// Graphviz rendering with nodes ranked by depth and outputs labeled.
    pub fn to_dot(&self) -> String {
        let depths = self.depths();
        let mut output_label = vec![None; self.nodes.len()];
        for (i, &o) in self.outputs.iter().enumerate() {
            output_label[o] = Some(i + 1);
        }
        let mut text = String::new();
        text.push_str("digraph prefix_circuit {\n  rankdir=TB;\n");
        for node in &self.nodes {
            let (shape, base) = match node.kind {
                NodeKind::Input { pos } => ("plaintext", format!("x{pos}")),
                NodeKind::Op { .. } => ("ellipse", format!("n{}", node.id)),
                NodeKind::Relay { .. } => ("diamond", format!("r{}", node.id)),
            };
            let label = match output_label[node.id] {
                Some(i) => format!("{base}\\ns{i}"),
                None => base,
            };
            let _ = writeln!(text, "  n{} [shape={shape}, label=\"{label}\"];", node.id);
        }
        for node in &self.nodes {
            match node.kind {
                NodeKind::Op { left, right } => {
                    let _ = writeln!(text, "  n{left} -> n{};", node.id);
                    let _ = writeln!(text, "  n{right} -> n{};", node.id);
                }
                NodeKind::Relay { arg } => {
                    let _ = writeln!(text, "  n{arg} -> n{};", node.id);
                }
                NodeKind::Input { .. } => {}
            }
        }
        let max_depth = depths.iter().copied().max().unwrap_or(0);
        for level in 0..=max_depth {
            let ids: Vec<String> = self
                .nodes
                .iter()
                .filter(|n| depths[n.id] == level)
                .map(|n| format!("n{}", n.id))
                .collect();
            if !ids.is_empty() {
                let _ = writeln!(text, "  {{ rank=same; {}; }}", ids.join("; "));
            }
        }
        text.push_str("}\n");
        text
    }

    /// Evaluate over an arbitrary semigroup; used by tests to cross-check the
    /// interval semantics against concrete concatenation.
    pub fn eval<T: Clone>(&self, inputs: &[T], op: impl Fn(&T, &T) -> T) -> Result<Vec<T>> {
        if inputs.len() != self.n {
            return Err(Error::Validation(format!(
                "expected {} inputs, got {}",
                self.n,
                inputs.len()
            )));
        }
        let mut values: Vec<T> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let v = match node.kind {
                NodeKind::Input { pos } => inputs[pos - 1].clone(),
                NodeKind::Relay { arg } => values[arg].clone(),
                NodeKind::Op { left, right } => op(&values[left], &values[right]),
            };
            values.push(v);
        }
        Ok(self.outputs.iter().map(|&o| values[o].clone()).collect())
    }
}

// --- JSON schema -----------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct JsonCircuit {
    n: usize,
    nodes: Vec<JsonNode>,
    outputs: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct JsonNode {
    id: usize,
    kind: String,
    #[serde(default)]
    args: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pos: Option<usize>,
}

impl From<&Circuit> for JsonCircuit {
    fn from(c: &Circuit) -> Self {
        JsonCircuit {
            n: c.n,
            nodes: c
                .nodes
                .iter()
                .map(|node| match node.kind {
                    NodeKind::Input { pos } => JsonNode {
                        id: node.id,
                        kind: "input".into(),
                        args: vec![],
                        pos: Some(pos),
                    },
                    NodeKind::Op { left, right } => JsonNode {
                        id: node.id,
                        kind: "op".into(),
                        args: vec![left, right],
                        pos: None,
                    },
                    NodeKind::Relay { arg } => JsonNode {
                        id: node.id,
                        kind: "relay".into(),
                        args: vec![arg],
                        pos: None,
                    },
                })
                .collect(),
            outputs: c.outputs.clone(),
        }
    }
}

impl JsonCircuit {
    fn into_circuit(self) -> Result<Circuit> {
        let mut nodes = Vec::with_capacity(self.nodes.len());
        for jn in self.nodes {
            let kind = match jn.kind.as_str() {
                "input" => {
                    let pos = jn.pos.ok_or(Error::MalformedCircuit {
                        node: jn.id,
                        reason: "input node without position".into(),
                    })?;
                    if !jn.args.is_empty() {
                        return Err(Error::MalformedCircuit {
                            node: jn.id,
                            reason: "input node cannot take arguments".into(),
                        });
                    }
                    NodeKind::Input { pos }
                }
                "op" => {
                    if jn.args.len() != 2 {
                        return Err(Error::MalformedCircuit {
                            node: jn.id,
                            reason: format!("op needs 2 arguments, got {}", jn.args.len()),
                        });
                    }
                    NodeKind::Op { left: jn.args[0], right: jn.args[1] }
                }
                "relay" => {
                    if jn.args.len() != 1 {
                        return Err(Error::MalformedCircuit {
                            node: jn.id,
                            reason: format!("relay needs 1 argument, got {}", jn.args.len()),
                        });
                    }
                    NodeKind::Relay { arg: jn.args[0] }
                }
                other => {
                    return Err(Error::MalformedCircuit {
                        node: jn.id,
                        reason: format!("unknown node kind {other:?}"),
                    });
                }
            };
            nodes.push(Node { id: jn.id, kind });
        }
        Ok(Circuit { n: self.n, nodes, outputs: self.outputs })
    }
}

/// The serial chain: N-1 ops, depth N-1, zero deficiency.
pub fn serial_chain(n: usize) -> Circuit {
    assert!(n >= 1);
    let mut nodes: Vec<Node> = (0..n)
        .map(|i| Node { id: i, kind: NodeKind::Input { pos: i + 1 } })
        .collect();
    let mut outputs = vec![0usize];
    let mut prev = 0usize;
    for i in 1..n {
        let id = nodes.len();
        nodes.push(Node { id, kind: NodeKind::Op { left: prev, right: i } });
        outputs.push(id);
        prev = id;
    }
    Circuit { n, nodes, outputs }
}
