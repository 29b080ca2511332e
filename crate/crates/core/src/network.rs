//! Goal networks: the data model, validation, generation, and serialization.
//!
//! A goal network is a directed acyclic graph of subgoal nodes. Every node
//! holds a fixed potential information content `u_hat` (bits) and a relevance
//! weight `r` toward goal completion. Traversal starts at a single start node
//! and ends at a terminal, at a threshold crossing, or when a budget runs out.
//!
//! A start→terminal walk is *complete* when its mean relevance is exactly one
//! per node (`Σ r / G = 1`), i.e. the walk carries a full relevance budget.
//! The generator always lays down one designated complete path and decorates
//! it with zero-relevance, high-information decoy branches that make myopic
//! traversal suboptimal.

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::substream;

/// Tolerance for the per-path relevance condition `Σ r / N ≤ 1`.
pub const RELEVANCE_TOL: f64 = 1e-12;

/// Tolerance under which a path's mean relevance counts as exactly one.
pub const COMPLETENESS_TOL: f64 = 1e-9;

/// Index of a subgoal node, dense in `[0, node_count)` within its network.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A subgoal: an information state with fixed potential information and
/// relevance to goal completion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubgoalNode {
    pub id: NodeId,
    /// Potential information at the node, in bits. Non-negative.
    pub u_hat: f64,
    /// Relevance contribution of the node to goal completion. Non-negative.
    pub r: f64,
}

/// An ordered walk through a network, identified by its node sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct PathSpec {
    pub nodes: Vec<NodeId>,
}

impl PathSpec {
    pub fn new(nodes: Vec<NodeId>) -> Self {
        Self { nodes }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// A goal as a network: DAG of subgoals with a single start node, a set of
/// terminals, an optional stopping threshold (bits), and a feature vector
/// describing the goal class. Serialized through the `tis-net v1` text
/// format ([`to_text`]/[`from_text`]).
#[derive(Debug, Clone)]
pub struct GoalNetwork {
    nodes: Vec<SubgoalNode>,
    /// Sorted, de-duplicated directed edges.
    edges: Vec<(NodeId, NodeId)>,
    start: NodeId,
    terminals: BTreeSet<NodeId>,
    goal_threshold_w: Option<f64>,
    feature_vector: Vec<f64>,
    successors: Vec<Vec<NodeId>>,
}

impl PartialEq for GoalNetwork {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes
            && self.edges == other.edges
            && self.start == other.start
            && self.terminals == other.terminals
            && self.goal_threshold_w == other.goal_threshold_w
            && self.feature_vector == other.feature_vector
    }
}

impl GoalNetwork {
    pub fn new(
        nodes: Vec<SubgoalNode>,
        mut edges: Vec<(NodeId, NodeId)>,
        start: NodeId,
        terminals: BTreeSet<NodeId>,
        goal_threshold_w: Option<f64>,
        feature_vector: Vec<f64>,
    ) -> Self {
        edges.sort();
        edges.dedup();
        let mut successors = vec![Vec::new(); nodes.len()];
        for &(from, to) in &edges {
            if from.0 < nodes.len() && to.0 < nodes.len() {
                successors[from.0].push(to);
            }
        }
        // edges are sorted, so each successor list is ascending by id
        Self {
            nodes,
            edges,
            start,
            terminals,
            goal_threshold_w,
            feature_vector,
            successors,
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[SubgoalNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &SubgoalNode {
        &self.nodes[id.0]
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn start(&self) -> NodeId {
        self.start
    }

    pub fn terminals(&self) -> &BTreeSet<NodeId> {
        &self.terminals
    }

    pub fn is_terminal(&self, id: NodeId) -> bool {
        self.terminals.contains(&id)
    }

    pub fn goal_threshold_w(&self) -> Option<f64> {
        self.goal_threshold_w
    }

    pub fn feature_vector(&self) -> &[f64] {
        &self.feature_vector
    }

    /// Successors of `id`, ascending by node id.
    pub fn successors(&self, id: NodeId) -> &[NodeId] {
        self.successors.get(id.0).map(Vec::as_slice).unwrap_or(&[])
    }

    /// A copy of the network with the stopping threshold removed. Used when a
    /// reference traversal must run to the end of its path.
    pub fn without_threshold(&self) -> GoalNetwork {
        self.with_threshold(None)
    }

    /// A copy of the network with the stopping threshold replaced.
    pub fn with_threshold(&self, goal_threshold_w: Option<f64>) -> GoalNetwork {
        let mut net = self.clone();
        net.goal_threshold_w = goal_threshold_w;
        net
    }

    /// A topological order of the node ids, or `None` when the edge relation
    /// has a cycle.
    pub fn topological_order(&self) -> Option<Vec<NodeId>> {
        let n = self.nodes.len();
        let mut indegree = vec![0usize; n];
        for &(from, to) in &self.edges {
            if from.0 < n && to.0 < n {
                indegree[to.0] += 1;
            }
        }
        let mut queue: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        queue.sort_unstable();
        let mut order = Vec::with_capacity(n);
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            order.push(NodeId(v));
            for &succ in &self.successors[v] {
                indegree[succ.0] -= 1;
                if indegree[succ.0] == 0 {
                    queue.push(succ.0);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    fn reachable_from_start(&self) -> Vec<bool> {
        let n = self.nodes.len();
        let mut seen = vec![false; n];
        if self.start.0 >= n {
            return seen;
        }
        let mut stack = vec![self.start.0];
        seen[self.start.0] = true;
        while let Some(v) = stack.pop() {
            for &succ in &self.successors[v] {
                if !seen[succ.0] {
                    seen[succ.0] = true;
                    stack.push(succ.0);
                }
            }
        }
        seen
    }

    /// Checks every structural invariant and returns a report naming each
    /// violated rule and the node or edge it concerns.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let n = self.nodes.len();
        if n == 0 {
            report.push("non-empty", "network has no nodes");
            return report;
        }
        for (i, node) in self.nodes.iter().enumerate() {
            if node.id.0 != i {
                report.push("id density", format!("node at position {i} has id {}", node.id));
            }
            if !(node.u_hat >= 0.0) || !node.u_hat.is_finite() {
                report.push("u_hat ≥ 0", format!("node {} has u_hat {}", node.id, node.u_hat));
            }
            if !(node.r >= 0.0) || !node.r.is_finite() {
                report.push("r ≥ 0", format!("node {} has r {}", node.id, node.r));
            }
        }
        for &(from, to) in &self.edges {
            if from.0 >= n || to.0 >= n {
                report.push("edge endpoints", format!("edge {from} -> {to}"));
            } else if from == to {
                report.push("no self-edge", format!("edge {from} -> {to}"));
            }
        }
        if self.start.0 >= n {
            report.push("start known", format!("start node {}", self.start));
        }
        for &t in &self.terminals {
            if t.0 >= n {
                report.push("terminal known", format!("terminal node {t}"));
            }
        }
        if let Some(w) = self.goal_threshold_w {
            if !(w >= 0.0) || !w.is_finite() {
                report.push("goal_threshold_w ≥ 0", format!("threshold {w}"));
            }
        }
        if self.feature_vector.iter().any(|f| !f.is_finite()) {
            report.push("feature finite", "feature vector has a non-finite entry");
        }
        if !report.is_ok() {
            return report;
        }
        if self.topological_order().is_none() {
            report.push("acyclic", "edge relation contains a cycle");
            return report;
        }
        let reachable = self.reachable_from_start();
        for v in 0..n {
            if !reachable[v] {
                report.push("reachable from start", format!("node {v}"));
            }
        }
        report
    }
}

/// A single broken rule, naming the node or edge concerned.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: &'static str,
    pub subject: String,
}

/// Report-style validation result: empty means every invariant holds.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, rule: &'static str, subject: impl Into<String>) {
        self.violations.push(Violation {
            rule,
            subject: subject.into(),
        });
    }

    pub fn has_rule(&self, rule: &str) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            write!(f, "ok")
        } else {
            for v in &self.violations {
                writeln!(f, "violation `{}`: {}", v.rule, v.subject)?;
            }
            Ok(())
        }
    }
}

/// Validates a walk against a network: it must start at the network's start
/// node, follow edges, never repeat a node, and satisfy the relevance
/// condition `Σ r / N ≤ 1`.
pub fn validate_path(net: &GoalNetwork, path: &PathSpec) -> ValidationReport {
    let mut report = ValidationReport::default();
    if path.nodes.is_empty() {
        report.push("non-empty", "path has no nodes");
        return report;
    }
    let n = net.node_count();
    for &id in &path.nodes {
        if id.0 >= n {
            report.push("known node", format!("node {id}"));
        }
    }
    if !report.is_ok() {
        return report;
    }
    if path.nodes[0] != net.start() {
        report.push(
            "first node = start",
            format!("path starts at node {}", path.nodes[0]),
        );
    }
    let mut seen = BTreeSet::new();
    for &id in &path.nodes {
        if !seen.insert(id) {
            report.push("no repeated node", format!("node {id}"));
        }
    }
    for pair in path.nodes.windows(2) {
        if !net.successors(pair[0]).contains(&pair[1]) {
            report.push("consecutive edge", format!("edge {} -> {}", pair[0], pair[1]));
        }
    }
    let sum_r: f64 = path.nodes.iter().map(|&id| net.node(id).r).sum();
    let mean = sum_r / path.nodes.len() as f64;
    if mean > 1.0 + RELEVANCE_TOL {
        report.push(
            "relevance condition",
            format!("Σ r / N = {mean} exceeds 1"),
        );
    }
    report
}

/// Parameters for the seeded network generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorParams {
    /// Total number of nodes, in `[2, 10_000]`.
    pub node_count: usize,
    /// Maximum out-degree, ≥ 1. One means a pure chain.
    pub branching: usize,
    /// Lower bound of the potential-information draw, > 0.
    pub u_hat_min: f64,
    /// Upper bound of the potential-information draw, ≥ `u_hat_min`.
    pub u_hat_max: f64,
    /// Relevance carried by each ordinary node of the designated path, in
    /// `(0, 1]`. The terminal absorbs the remainder so the designated path is
    /// exactly on budget.
    pub relevance_budget: f64,
    /// Fraction of all nodes turned into zero-relevance decoys, in `[0, 1]`.
    pub decoy_fraction: f64,
    /// Goal-class feature vector copied onto the network.
    #[serde(default)]
    pub feature: Vec<f64>,
    /// When set, the stopping threshold is this fraction of the designated
    /// path's maximum relevance-weighted information.
    #[serde(default)]
    pub threshold_fraction: Option<f64>,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        Self {
            node_count: 12,
            branching: 3,
            u_hat_min: 1.0,
            u_hat_max: 8.0,
            relevance_budget: 1.0,
            decoy_fraction: 0.3,
            feature: Vec::new(),
            threshold_fraction: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("invalid parameter `{field}`: {message}")]
    InvalidParameter { field: &'static str, message: String },
}

fn param_err(field: &'static str, message: impl Into<String>) -> GeneratorError {
    GeneratorError::InvalidParameter {
        field,
        message: message.into(),
    }
}

impl GeneratorParams {
    /// Checks every parameter range, naming the offending field.
    pub fn validate(&self) -> Result<(), GeneratorError> {
        if self.node_count < 2 || self.node_count > 10_000 {
            return Err(param_err(
                "node_count",
                format!("{} is outside [2, 10000]", self.node_count),
            ));
        }
        if self.branching < 1 {
            return Err(param_err("branching", "must be at least 1"));
        }
        if !(self.u_hat_min > 0.0) || !self.u_hat_min.is_finite() {
            return Err(param_err(
                "u_hat_min",
                format!("{} must be positive and finite", self.u_hat_min),
            ));
        }
        if !(self.u_hat_max >= self.u_hat_min) || !self.u_hat_max.is_finite() {
            return Err(param_err(
                "u_hat_max",
                format!("{} must be finite and ≥ u_hat_min", self.u_hat_max),
            ));
        }
        if !(self.relevance_budget > 0.0 && self.relevance_budget <= 1.0) {
            return Err(param_err(
                "relevance_budget",
                format!("{} is outside (0, 1]", self.relevance_budget),
            ));
        }
        if !(0.0..=1.0).contains(&self.decoy_fraction) || !self.decoy_fraction.is_finite() {
            return Err(param_err(
                "decoy_fraction",
                format!("{} is outside [0, 1]", self.decoy_fraction),
            ));
        }
        if self.feature.iter().any(|f| !f.is_finite()) {
            return Err(param_err("feature", "entries must be finite"));
        }
        if let Some(t) = self.threshold_fraction {
            if !(t >= 0.0) || !t.is_finite() {
                return Err(param_err(
                    "threshold_fraction",
                    format!("{t} must be non-negative and finite"),
                ));
            }
        }
        Ok(())
    }
}

/// Generates a valid goal network, deterministically for a given
/// `(params, seed)` pair.
///
/// The generator lays down one designated start→terminal chain whose mean
/// relevance is exactly one per node, then spends the decoy budget on
/// zero-relevance, high-information nodes. Decoys attach as one-node detours
/// around chain edges while out-degree capacity lasts; any remainder is
/// embedded into the chain itself, so small or chain-like networks stay
/// branch-free. Detours rejoin the chain and never jump straight to the
/// terminal, so every maximal walk still reaches it.
pub fn generate_network(params: &GeneratorParams, seed: u64) -> Result<GoalNetwork, GeneratorError> {
    params.validate()?;
    let mut rng = substream(seed, &["goal-network"], &[]);
    let n = params.node_count;
    let branching = params.branching;
    let decoy_total = ((params.decoy_fraction * n as f64).round() as usize).min(n - 2);
    let relevant = n - decoy_total; // designated-chain nodes carrying relevance
    let capacity = relevant.saturating_sub(2) * (branching - 1);
    let embedded = decoy_total.saturating_sub(capacity);
    let detours = decoy_total - embedded;
    let chain_len = relevant + embedded;

    // Which chain positions hold embedded decoys (never the first or last).
    let embed_positions: BTreeSet<usize> = if embedded > 0 {
        rand::seq::index::sample(&mut rng, chain_len - 2, embedded)
            .iter()
            .map(|k| k + 1)
            .collect()
    } else {
        BTreeSet::new()
    };

    let decoy_lo = params.u_hat_min + 0.75 * (params.u_hat_max - params.u_hat_min);
    let draw_u = |rng: &mut rand_chacha::ChaCha12Rng, decoy: bool| -> f64 {
        let (lo, hi) = if decoy {
            (decoy_lo, params.u_hat_max)
        } else {
            (params.u_hat_min, params.u_hat_max)
        };
        if hi > lo {
            rng.gen_range(lo..hi)
        } else {
            lo
        }
    };

    let mut nodes = Vec::with_capacity(n);
    let mut assigned_r = 0.0f64;
    for pos in 0..chain_len {
        let is_embed = embed_positions.contains(&pos);
        let u_hat = draw_u(&mut rng, is_embed);
        let r = if is_embed {
            0.0
        } else if pos == chain_len - 1 {
            // the terminal absorbs the residual so the chain is exactly on budget
            chain_len as f64 - assigned_r
        } else {
            params.relevance_budget
        };
        assigned_r += r;
        nodes.push(SubgoalNode {
            id: NodeId(pos),
            u_hat,
            r,
        });
    }

    let mut edges: Vec<(NodeId, NodeId)> = (0..chain_len - 1)
        .map(|k| (NodeId(k), NodeId(k + 1)))
        .collect();

    // Detour slots: chain edges whose target is not the terminal.
    let eligible: Vec<usize> = (0..chain_len.saturating_sub(2)).collect();
    let mut remaining: Vec<usize> = vec![branching - 1; eligible.len()];
    for d in 0..detours {
        let open: Vec<usize> = eligible
            .iter()
            .copied()
            .filter(|&k| remaining[k] > 0)
            .collect();
        debug_assert!(!open.is_empty(), "detour capacity exhausted");
        let k = open[rng.gen_range(0..open.len())];
        remaining[k] -= 1;
        let id = NodeId(chain_len + d);
        let u_hat = draw_u(&mut rng, true);
        nodes.push(SubgoalNode { id, u_hat, r: 0.0 });
        edges.push((NodeId(k), id));
        edges.push((id, NodeId(k + 1)));
    }

    let goal_threshold_w = params.threshold_fraction.map(|frac| {
        let chain_x: f64 = (0..chain_len)
            .map(|pos| nodes[pos].r * nodes[pos].u_hat)
            .sum();
        frac * chain_x
    });

    let terminals = BTreeSet::from([NodeId(chain_len - 1)]);
    Ok(GoalNetwork::new(
        nodes,
        edges,
        NodeId(0),
        terminals,
        goal_threshold_w,
        params.feature.clone(),
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line 1: expected header `tis-net v1`")]
    Header,
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

/// Serializes a network in the `tis-net v1` text format.
///
/// ```text
/// tis-net v1
/// nodes
/// <id> <u_hat> <r>
/// edges
/// <from> -> <to>
/// start <id>
/// terminals <id> ...
/// threshold <w>      (omitted when unset)
/// features <f> ...   (omitted when empty)
/// ```
///
/// Floats use the shortest representation that round-trips, so
/// `parse ∘ serialize` is the identity.
pub fn to_text(net: &GoalNetwork) -> String {
    let mut out = String::from("tis-net v1\n");
    out.push_str("nodes\n");
    for node in net.nodes() {
        out.push_str(&format!("{} {} {}\n", node.id, node.u_hat, node.r));
    }
    out.push_str("edges\n");
    for &(from, to) in net.edges() {
        out.push_str(&format!("{from} -> {to}\n"));
    }
    out.push_str(&format!("start {}\n", net.start()));
    let terminal_list = net
        .terminals()
        .iter()
        .map(|t| t.to_string())
        .collect::<Vec<_>>()
        .join(" ");
    if terminal_list.is_empty() {
        out.push_str("terminals\n");
    } else {
        out.push_str(&format!("terminals {terminal_list}\n"));
    }
    if let Some(w) = net.goal_threshold_w() {
        out.push_str(&format!("threshold {w}\n"));
    }
    if !net.feature_vector().is_empty() {
        let features = net
            .feature_vector()
            .iter()
            .map(|f| f.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        out.push_str(&format!("features {features}\n"));
    }
    out
}

/// Parses the `tis-net v1` text format. Blank lines and `#` comments are
/// skipped. The result is not validated beyond id density; run
/// [`GoalNetwork::validate`] for the full invariant check.
pub fn from_text(text: &str) -> Result<GoalNetwork, ParseError> {
    #[derive(PartialEq)]
    enum Mode {
        Preamble,
        Nodes,
        Edges,
    }
    let mut mode = Mode::Preamble;
    let mut saw_header = false;
    let mut nodes: Vec<SubgoalNode> = Vec::new();
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    let mut start: Option<NodeId> = None;
    let mut terminals: BTreeSet<NodeId> = BTreeSet::new();
    let mut saw_terminals = false;
    let mut threshold: Option<f64> = None;
    let mut features: Vec<f64> = Vec::new();

    let parse_id = |line: usize, token: &str| -> Result<NodeId, ParseError> {
        token
            .parse::<usize>()
            .map(NodeId)
            .map_err(|_| syntax(line, format!("expected node id, got `{token}`")))
    };
    let parse_f = |line: usize, token: &str| -> Result<f64, ParseError> {
        token
            .parse::<f64>()
            .map_err(|_| syntax(line, format!("expected number, got `{token}`")))
    };

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !saw_header {
            if line != "tis-net v1" {
                return Err(ParseError::Header);
            }
            saw_header = true;
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "nodes" => {
                mode = Mode::Nodes;
                continue;
            }
            "edges" => {
                mode = Mode::Edges;
                continue;
            }
            "start" => {
                if tokens.len() != 2 {
                    return Err(syntax(lineno, "expected `start <id>`"));
                }
                start = Some(parse_id(lineno, tokens[1])?);
                continue;
            }
            "terminals" => {
                saw_terminals = true;
                for token in &tokens[1..] {
                    terminals.insert(parse_id(lineno, token)?);
                }
                continue;
            }
            "threshold" => {
                if tokens.len() != 2 {
                    return Err(syntax(lineno, "expected `threshold <w>`"));
                }
                threshold = Some(parse_f(lineno, tokens[1])?);
                continue;
            }
            "features" => {
                for token in &tokens[1..] {
                    features.push(parse_f(lineno, token)?);
                }
                continue;
            }
            _ => {}
        }
        match mode {
            Mode::Nodes => {
                if tokens.len() != 3 {
                    return Err(syntax(lineno, "expected `<id> <u_hat> <r>`"));
                }
                nodes.push(SubgoalNode {
                    id: parse_id(lineno, tokens[0])?,
                    u_hat: parse_f(lineno, tokens[1])?,
                    r: parse_f(lineno, tokens[2])?,
                });
            }
            Mode::Edges => {
                if tokens.len() != 3 || tokens[1] != "->" {
                    return Err(syntax(lineno, "expected `<from> -> <to>`"));
                }
                edges.push((parse_id(lineno, tokens[0])?, parse_id(lineno, tokens[2])?));
            }
            Mode::Preamble => {
                return Err(syntax(lineno, format!("unexpected line `{line}`")));
            }
        }
    }
    if !saw_header {
        return Err(ParseError::Header);
    }
    nodes.sort_by_key(|n| n.id);
    for (i, node) in nodes.iter().enumerate() {
        if node.id.0 != i {
            return Err(syntax(0, format!("node ids are not dense: missing id {i}")));
        }
    }
    let start = start.ok_or_else(|| syntax(0, "missing `start` line"))?;
    if !saw_terminals {
        return Err(syntax(0, "missing `terminals` line"));
    }
    Ok(GoalNetwork::new(
        nodes, edges, start, terminals, threshold, features,
    ))
}
