//! Exact optimal-path queries over a goal network.
//!
//! Three distinct notions of "optimal" are kept separate because the indices
//! built on them bind to different reference sequences:
//!
//! * [`max_info_path`] — the start→terminal walk carrying the most potential
//!   information, the denominator of the hierarchical planning index.
//! * [`min_info_complete_path`] — the cheapest complete walk; its total is the
//!   goal's intrinsic complexity.
//! * [`optimal_planning_path`] — the complete walk with the least potential
//!   information per node, the denominator of the one-shot planning index.
//!
//! [`enumerate_all_paths`] provides the brute-force ground truth the dynamic
//! programs are verified against.
//!
//! Ties are always broken the same way: higher (or lower) objective first,
//! then fewer nodes, then the lexicographically smallest id sequence, so
//! every query is deterministic.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::network::{GoalNetwork, NodeId, PathSpec, COMPLETENESS_TOL};

/// Upper bound on live states in the complete-path search. Queries on
/// desk-scale networks stay far below this.
const STATE_CAP: usize = 4_000_000;

/// An optimal walk plus its information totals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub path: PathSpec,
    /// Σ u_hat over the walk, in bits.
    pub total_info: f64,
    /// `total_info` divided by the number of nodes.
    pub normalized_info: f64,
    /// Whether the walk's mean relevance is one per node.
    pub complete: bool,
}

impl OracleResult {
    fn from_path(net: &GoalNetwork, nodes: Vec<NodeId>) -> Self {
        let total_info: f64 = nodes.iter().map(|&id| net.node(id).u_hat).sum();
        let len = nodes.len().max(1) as f64;
        let sum_r: f64 = nodes.iter().map(|&id| net.node(id).r).sum();
        let complete = is_complete(sum_r, nodes.len());
        Self {
            path: PathSpec::new(nodes),
            total_info,
            normalized_info: total_info / len,
            complete,
        }
    }
}

fn is_complete(sum_r: f64, len: usize) -> bool {
    len > 0 && (sum_r - len as f64).abs() <= COMPLETENESS_TOL * (len as f64).max(1.0)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("no start→terminal walk exists")]
    Infeasible,
    #[error("no complete start→terminal walk exists")]
    NoCompletePath,
    #[error("walk count exceeds cap {cap}")]
    CapacityExceeded { cap: usize },
    #[error("network is not a valid DAG: {0}")]
    InvalidNetwork(String),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
}

#[derive(Debug, Clone, Copy)]
struct Suffix {
    total: f64,
    len: usize,
    next: Option<NodeId>,
}

/// True when `a` beats `b` under (total desc, len asc, successor id asc).
/// Comparing successor ids decides lexicographic order because tied suffixes
/// through different successors first differ exactly there.
fn better_max(a: &Suffix, b: &Suffix) -> bool {
    if a.total != b.total {
        return a.total > b.total;
    }
    if a.len != b.len {
        return a.len < b.len;
    }
    match (a.next, b.next) {
        (Some(x), Some(y)) => x < y,
        _ => false,
    }
}

/// The start→terminal walk maximizing total potential information.
pub fn max_info_path(net: &GoalNetwork) -> Result<OracleResult, OracleError> {
    let order = net
        .topological_order()
        .ok_or_else(|| OracleError::InvalidNetwork("edge relation has a cycle".into()))?;
    let n = net.node_count();
    if net.start().0 >= n {
        return Err(OracleError::UnknownNode(net.start()));
    }
    let mut best: Vec<Option<Suffix>> = vec![None; n];
    for &v in order.iter().rev() {
        let u_hat = net.node(v).u_hat;
        let mut candidate: Option<Suffix> = net.is_terminal(v).then_some(Suffix {
            total: u_hat,
            len: 1,
            next: None,
        });
        for &succ in net.successors(v) {
            if let Some(tail) = best[succ.0] {
                let extended = Suffix {
                    total: u_hat + tail.total,
                    len: tail.len + 1,
                    next: Some(succ),
                };
                if candidate.map_or(true, |c| better_max(&extended, &c)) {
                    candidate = Some(extended);
                }
            }
        }
        best[v.0] = candidate;
    }
    let root = best[net.start().0].ok_or(OracleError::Infeasible)?;
    let mut nodes = vec![net.start()];
    let mut cursor = root;
    while let Some(next) = cursor.next {
        nodes.push(next);
        cursor = best[next.0].expect("suffix chain is materialized");
    }
    Ok(OracleResult::from_path(net, nodes))
}

/// The maximum-information walk of at most `max_len` nodes starting at
/// `from`, with no terminal requirement. Supplies the per-segment reference
/// for the hierarchical planning index.
pub fn max_info_walk_bounded(
    net: &GoalNetwork,
    from: NodeId,
    max_len: usize,
) -> Result<OracleResult, OracleError> {
    let n = net.node_count();
    if from.0 >= n {
        return Err(OracleError::UnknownNode(from));
    }
    if net.topological_order().is_none() {
        return Err(OracleError::InvalidNetwork("edge relation has a cycle".into()));
    }
    let cap = max_len.clamp(1, n);
    // best[l][v]: best walk from v using at most l nodes
    let mut layers: Vec<Vec<Option<Suffix>>> = Vec::with_capacity(cap + 1);
    layers.push(vec![None; n]); // l = 0 unused
    for l in 1..=cap {
        let mut layer = vec![None; n];
        for v in 0..n {
            let u_hat = net.node(NodeId(v)).u_hat;
            let mut candidate = Suffix {
                total: u_hat,
                len: 1,
                next: None,
            };
            if l > 1 {
                for &succ in net.successors(NodeId(v)) {
                    if let Some(tail) = layers[l - 1][succ.0] {
                        let extended = Suffix {
                            total: u_hat + tail.total,
                            len: tail.len + 1,
                            next: Some(succ),
                        };
                        if better_max(&extended, &candidate) {
                            candidate = extended;
                        }
                    }
                }
            }
            layer[v] = Some(candidate);
        }
        layers.push(layer);
    }
    let mut nodes = vec![from];
    let mut level = cap;
    let mut cursor = layers[level][from.0].expect("every node has a length-1 walk");
    while let Some(next) = cursor.next {
        nodes.push(next);
        level -= 1;
        cursor = layers[level][next.0].expect("suffix chain is materialized");
    }
    Ok(OracleResult::from_path(net, nodes))
}

#[derive(Debug, Clone)]
struct PrefixEntry {
    r_sum: f64,
    u_total: f64,
    path: Vec<NodeId>,
}

fn better_min(u_a: f64, path_a: &[NodeId], u_b: f64, path_b: &[NodeId]) -> bool {
    if u_a != u_b {
        return u_a < u_b;
    }
    path_a < path_b
}

/// Layered search over `(node, relevance-sum)` states. Prefix relevance sums
/// are bucketed at the completeness tolerance, and per state only the
/// cheapest (then lexicographically smallest) prefix survives, which is exact
/// because extending a prefix adds the same values regardless of its history.
fn complete_path_candidates(net: &GoalNetwork) -> Result<Vec<PrefixEntry>, OracleError> {
    if net.topological_order().is_none() {
        return Err(OracleError::InvalidNetwork("edge relation has a cycle".into()));
    }
    let n = net.node_count();
    if net.start().0 >= n {
        return Err(OracleError::UnknownNode(net.start()));
    }
    let key_of = |r_sum: f64| -> i64 { (r_sum / COMPLETENESS_TOL).round() as i64 };
    let start = net.start();
    let mut layer: BTreeMap<(usize, i64), PrefixEntry> = BTreeMap::new();
    let start_entry = PrefixEntry {
        r_sum: net.node(start).r,
        u_total: net.node(start).u_hat,
        path: vec![start],
    };
    layer.insert((start.0, key_of(start_entry.r_sum)), start_entry);
    let mut candidates: Vec<PrefixEntry> = Vec::new();
    let mut states = 0usize;
    for len in 1..=n {
        for ((node, _), entry) in &layer {
            if net.is_terminal(NodeId(*node)) && is_complete(entry.r_sum, len) {
                candidates.push(entry.clone());
            }
        }
        if len == n {
            break;
        }
        let mut next: BTreeMap<(usize, i64), PrefixEntry> = BTreeMap::new();
        for ((node, _), entry) in &layer {
            for &succ in net.successors(NodeId(*node)) {
                let r_sum = entry.r_sum + net.node(succ).r;
                let u_total = entry.u_total + net.node(succ).u_hat;
                let key = (succ.0, key_of(r_sum));
                let replace = match next.get(&key) {
                    None => true,
                    Some(existing) => {
                        // candidate path differs from existing only in its prefix
                        let mut path = entry.path.clone();
                        path.push(succ);
                        better_min(u_total, &path, existing.u_total, &existing.path)
                    }
                };
                if replace {
                    let mut path = entry.path.clone();
                    path.push(succ);
                    next.insert(key, PrefixEntry { r_sum, u_total, path });
                }
            }
        }
        states += next.len();
        if states > STATE_CAP {
            return Err(OracleError::CapacityExceeded { cap: STATE_CAP });
        }
        if next.is_empty() {
            break;
        }
        layer = next;
    }
    Ok(candidates)
}

fn pick_candidate<F>(candidates: Vec<PrefixEntry>, objective: F) -> Option<PrefixEntry>
where
    F: Fn(&PrefixEntry) -> f64,
{
    let mut best: Option<(f64, PrefixEntry)> = None;
    for entry in candidates {
        let score = objective(&entry);
        let replace = match &best {
            None => true,
            Some((bs, be)) => {
                if score != *bs {
                    score < *bs
                } else if entry.path.len() != be.path.len() {
                    entry.path.len() < be.path.len()
                } else {
                    entry.path < be.path
                }
            }
        };
        if replace {
            best = Some((score, entry));
        }
    }
    best.map(|(_, entry)| entry)
}

/// The complete start→terminal walk with the least total potential
/// information. Its total is the goal's intrinsic complexity.
pub fn min_info_complete_path(net: &GoalNetwork) -> Result<OracleResult, OracleError> {
    let candidates = complete_path_candidates(net)?;
    let best = pick_candidate(candidates, |e| e.u_total).ok_or(OracleError::NoCompletePath)?;
    Ok(OracleResult::from_path(net, best.path))
}

/// The complete start→terminal walk with the least potential information per
/// node.
pub fn optimal_planning_path(net: &GoalNetwork) -> Result<OracleResult, OracleError> {
    let candidates = complete_path_candidates(net)?;
    let best = pick_candidate(candidates, |e| e.u_total / e.path.len() as f64)
        .ok_or(OracleError::NoCompletePath)?;
    Ok(OracleResult::from_path(net, best.path))
}

/// Every start→terminal walk, in lexicographic order of the id sequence.
/// Walks are simple because the network is acyclic; a walk may pass through
/// one terminal on its way to another. Errs once more than `cap` walks exist.
pub fn enumerate_all_paths(net: &GoalNetwork, cap: usize) -> Result<Vec<PathSpec>, OracleError> {
    if net.topological_order().is_none() {
        return Err(OracleError::InvalidNetwork("edge relation has a cycle".into()));
    }
    if net.start().0 >= net.node_count() {
        return Err(OracleError::UnknownNode(net.start()));
    }
    let mut paths = Vec::new();
    let mut current = vec![net.start()];
    // guard against exploring exponentially many incomplete walks
    let step_cap = cap.saturating_mul(net.node_count().max(1)).max(1024);
    let mut steps = 0usize;
    fn walk(
        net: &GoalNetwork,
        current: &mut Vec<NodeId>,
        paths: &mut Vec<PathSpec>,
        cap: usize,
        step_cap: usize,
        steps: &mut usize,
    ) -> Result<(), OracleError> {
        *steps += 1;
        if *steps > step_cap {
            return Err(OracleError::CapacityExceeded { cap });
        }
        let last = *current.last().expect("walk is never empty");
        if net.is_terminal(last) {
            if paths.len() >= cap {
                return Err(OracleError::CapacityExceeded { cap });
            }
            paths.push(PathSpec::new(current.clone()));
        }
        for &succ in net.successors(last) {
            current.push(succ);
            walk(net, current, paths, cap, step_cap, steps)?;
            current.pop();
        }
        Ok(())
    }
    walk(net, &mut current, &mut paths, cap, step_cap, &mut steps)?;
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{GoalNetwork, SubgoalNode};
    use std::collections::BTreeSet;

    fn net_from(
        specs: &[(f64, f64)],
        edges: &[(usize, usize)],
        terminals: &[usize],
    ) -> GoalNetwork {
        let nodes = specs
            .iter()
            .enumerate()
            .map(|(i, &(u_hat, r))| SubgoalNode {
                id: NodeId(i),
                u_hat,
                r,
            })
            .collect();
        GoalNetwork::new(
            nodes,
            edges.iter().map(|&(a, b)| (NodeId(a), NodeId(b))).collect(),
            NodeId(0),
            terminals.iter().map(|&t| NodeId(t)).collect::<BTreeSet<_>>(),
            None,
            Vec::new(),
        )
    }

    #[test]
    fn chain_max_info_is_its_only_path() {
        let net = net_from(&[(4.0, 1.0), (4.0, 1.0)], &[(0, 1)], &[1]);
        let result = max_info_path(&net).unwrap();
        assert_eq!(result.total_info, 8.0);
        assert_eq!(result.path.nodes, vec![NodeId(0), NodeId(1)]);
        assert!(result.complete);
    }

    #[test]
    fn max_info_prefers_heavier_branch() {
        // 0 -> 1 (total 9), 0 -> 2 (total 7)
        let net = net_from(
            &[(1.0, 1.0), (8.0, 1.0), (6.0, 1.0)],
            &[(0, 1), (0, 2)],
            &[1, 2],
        );
        let result = max_info_path(&net).unwrap();
        assert_eq!(result.total_info, 9.0);
        assert_eq!(result.path.nodes, vec![NodeId(0), NodeId(1)]);
    }

    #[test]
    fn max_info_errors_when_no_terminal_reachable() {
        let net = net_from(&[(1.0, 1.0), (1.0, 1.0)], &[(0, 1)], &[]);
        assert_eq!(max_info_path(&net).unwrap_err(), OracleError::Infeasible);
    }

    #[test]
    fn unique_complete_path_wins_regardless_of_info() {
        // branch 1 is complete (r = 1 everywhere), branch 2 is cheap but incomplete
        let net = net_from(
            &[(1.0, 1.0), (9.0, 1.0), (0.5, 0.2)],
            &[(0, 1), (0, 2)],
            &[1, 2],
        );
        let result = min_info_complete_path(&net).unwrap();
        assert_eq!(result.path.nodes, vec![NodeId(0), NodeId(1)]);
        assert!(result.complete);
    }

    #[test]
    fn min_info_complete_picks_cheaper_of_two() {
        // two complete branches with totals 10 and 12
        let net = net_from(
            &[(2.0, 1.0), (8.0, 1.0), (10.0, 1.0)],
            &[(0, 1), (0, 2)],
            &[1, 2],
        );
        let result = min_info_complete_path(&net).unwrap();
        assert_eq!(result.total_info, 10.0);
        assert_eq!(result.path.nodes, vec![NodeId(0), NodeId(1)]);
    }

    #[test]
    fn no_complete_path_is_an_error() {
        let net = net_from(&[(1.0, 0.5), (1.0, 0.5)], &[(0, 1)], &[1]);
        assert_eq!(
            min_info_complete_path(&net).unwrap_err(),
            OracleError::NoCompletePath
        );
    }

    #[test]
    fn optimal_planning_minimizes_per_node_info() {
        // complete 2-node path with total 8 (4.0/node) vs complete 3-node path
        // with total 9 (3.0/node)
        let net = net_from(
            &[(2.0, 1.0), (6.0, 1.0), (3.0, 1.0), (4.0, 1.0)],
            &[(0, 1), (0, 2), (2, 3)],
            &[1, 3],
        );
        let result = optimal_planning_path(&net).unwrap();
        assert_eq!(result.path.nodes, vec![NodeId(0), NodeId(2), NodeId(3)]);
        assert!((result.normalized_info - 3.0).abs() < 1e-12);
    }

    #[test]
    fn single_complete_path_is_returned_unconditionally() {
        let net = net_from(&[(5.0, 1.0), (7.0, 1.0)], &[(0, 1)], &[1]);
        let result = optimal_planning_path(&net).unwrap();
        assert_eq!(result.path.nodes, vec![NodeId(0), NodeId(1)]);
    }

    #[test]
    fn chain_enumerates_one_path() {
        let net = net_from(&[(1.0, 1.0), (1.0, 1.0), (1.0, 1.0)], &[(0, 1), (1, 2)], &[2]);
        let paths = enumerate_all_paths(&net, 16).unwrap();
        assert_eq!(paths.len(), 1);
    }

    #[test]
    fn binary_tree_enumerates_leaf_paths() {
        // depth-3 binary tree: 4 leaves
        let net = net_from(
            &[
                (1.0, 1.0),
                (1.0, 1.0),
                (1.0, 1.0),
                (1.0, 1.0),
                (1.0, 1.0),
                (1.0, 1.0),
                (1.0, 1.0),
            ],
            &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)],
            &[3, 4, 5, 6],
        );
        let paths = enumerate_all_paths(&net, 16).unwrap();
        assert_eq!(paths.len(), 4);
    }

    #[test]
    fn enumeration_respects_the_cap() {
        let net = net_from(
            &[
                (1.0, 1.0),
                (1.0, 1.0),
                (1.0, 1.0),
                (1.0, 1.0),
                (1.0, 1.0),
                (1.0, 1.0),
                (1.0, 1.0),
            ],
            &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)],
            &[3, 4, 5, 6],
        );
        assert_eq!(
            enumerate_all_paths(&net, 2).unwrap_err(),
            OracleError::CapacityExceeded { cap: 2 }
        );
    }

    #[test]
    fn bounded_walk_tracks_the_best_prefix() {
        let net = net_from(
            &[(1.0, 1.0), (8.0, 0.0), (2.0, 1.0), (3.0, 1.0)],
            &[(0, 1), (0, 2), (1, 3), (2, 3)],
            &[3],
        );
        let result = max_info_walk_bounded(&net, NodeId(0), 2).unwrap();
        assert_eq!(result.path.nodes, vec![NodeId(0), NodeId(1)]);
        assert_eq!(result.total_info, 9.0);
        let full = max_info_walk_bounded(&net, NodeId(0), 4).unwrap();
        assert_eq!(full.path.nodes, vec![NodeId(0), NodeId(1), NodeId(3)]);
    }
}
