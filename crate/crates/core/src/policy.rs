//! Traversal policies: how an agent walks a goal network.
//!
//! All policies share the same loop — visit a node, realize a gain, check the
//! stop rules, pick a successor — and differ only in the pick:
//!
//! * [`PolicyKind::RandomWalk`] draws a successor uniformly.
//! * [`PolicyKind::GreedySolver`] takes the successor with the best predicted
//!   one-step gain, blind to relevance.
//! * [`PolicyKind::HorizonPlanner`] enumerates the maximal walks within its
//!   horizon, scores each by relevance-weighted predicted gain per node,
//!   commits to a prefix, and replans when the commitment runs out.
//! * [`PolicyKind::OracleFollower`] walks the optimal planning path, which
//!   makes it the reference for solve-relative indices.
//!
//! Stop rules, in order of precedence after each visit: the realized
//! complexity crossed the network threshold, the node is a terminal, the step
//! budget is spent, or there is no successor to move to.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::agent::{
    elapsed_time, predicted_gain, realized_gain_with_ability, Agent, AgentError,
};
use crate::metrics::visits_complexity;
use crate::network::{GoalNetwork, NodeId, PathSpec};
use crate::oracle::{optimal_planning_path, OracleError};
use crate::rng::substream;
use rand::Rng;

/// One visited node with everything the indices need about the visit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Visit {
    pub node: NodeId,
    /// Realized information gain, in bits. May be negative; never exceeds `u_hat`.
    pub u_realized: f64,
    pub u_hat: f64,
    pub r: f64,
    pub t_elapsed: f64,
}

/// One planning event: where in the visit order it happened and the walk that
/// was planned from there (the executed prefix may be shorter).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanSegment {
    pub start_index: usize,
    pub planned: PathSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    TerminalReached,
    ThresholdMet,
    StepBudgetExhausted,
    DeadEnd,
}

impl StopReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            StopReason::TerminalReached => "terminal_reached",
            StopReason::ThresholdMet => "threshold_met",
            StopReason::StepBudgetExhausted => "step_budget_exhausted",
            StopReason::DeadEnd => "dead_end",
        }
    }
}

/// The ordered record of one traversal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub visited: Vec<Visit>,
    /// One entry per planning event; segment `h` spans the visit indices from
    /// its `start_index` up to the next segment's.
    pub plan_segments: Vec<PlanSegment>,
    pub stop_reason: StopReason,
}

impl Trajectory {
    pub fn path(&self) -> PathSpec {
        PathSpec::new(self.visited.iter().map(|v| v.node).collect())
    }

    pub fn len(&self) -> usize {
        self.visited.len()
    }

    pub fn is_empty(&self) -> bool {
        self.visited.is_empty()
    }

    /// Visit-index spans of the plan segments, in order.
    pub fn segment_spans(&self) -> Vec<(usize, usize)> {
        let mut spans = Vec::with_capacity(self.plan_segments.len());
        for (i, segment) in self.plan_segments.iter().enumerate() {
            let end = self
                .plan_segments
                .get(i + 1)
                .map_or(self.visited.len(), |next| next.start_index);
            spans.push((segment.start_index, end));
        }
        spans
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum PolicyKind {
    RandomWalk,
    GreedySolver,
    HorizonPlanner { horizon: usize, replan_period: usize },
    OracleFollower,
}

impl PolicyKind {
    /// The policy an agent's own parameters call for: a planner when it has a
    /// lookahead horizon, otherwise a greedy solver.
    pub fn from_agent(agent: &Agent) -> Self {
        if agent.planning_horizon >= 1 {
            PolicyKind::HorizonPlanner {
                horizon: agent.planning_horizon,
                replan_period: agent.replan_period.max(1),
            }
        } else {
            PolicyKind::GreedySolver
        }
    }

    pub fn label(&self) -> String {
        match self {
            PolicyKind::RandomWalk => "random_walk".into(),
            PolicyKind::GreedySolver => "greedy_solver".into(),
            PolicyKind::HorizonPlanner {
                horizon,
                replan_period,
            } => format!("planner_h{horizon}_p{replan_period}"),
            PolicyKind::OracleFollower => "oracle_follower".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolicyError {
    #[error("step budget must be at least 1")]
    InvalidBudget,
    #[error("horizon planner needs horizon ≥ 1 and replan period ≥ 1")]
    InvalidHorizon,
    #[error(transparent)]
    Agent(#[from] AgentError),
    #[error("oracle follower: {0}")]
    Oracle(#[from] OracleError),
}

/// Result of checking a trajectory against a stopping threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopCheck {
    Continue,
    /// The realized complexity exceeded the threshold by `margin` bits.
    ThresholdMet { margin: f64 },
}

/// Compares the trajectory's realized complexity `Σ r·u` against the
/// threshold `w`; met only on strict excess.
pub fn stopping_check(traj: &Trajectory, w: f64) -> StopCheck {
    let x = visits_complexity(&traj.visited);
    if x > w {
        StopCheck::ThresholdMet { margin: x - w }
    } else {
        StopCheck::Continue
    }
}

/// Maximal walks of at most `horizon` nodes leaving `from`: each candidate
/// extends until the horizon, a terminal, or a dead end. Lexicographic order.
fn candidate_walks(net: &GoalNetwork, from: NodeId, horizon: usize) -> Vec<Vec<NodeId>> {
    fn extend(
        net: &GoalNetwork,
        horizon: usize,
        walk: &mut Vec<NodeId>,
        out: &mut Vec<Vec<NodeId>>,
    ) {
        let last = *walk.last().expect("walk is never empty");
        if walk.len() == horizon || net.is_terminal(last) || net.successors(last).is_empty() {
            out.push(walk.clone());
            return;
        }
        for &succ in net.successors(last) {
            walk.push(succ);
            extend(net, horizon, walk, out);
            walk.pop();
        }
    }
    let mut out = Vec::new();
    for &succ in net.successors(from) {
        let mut walk = vec![succ];
        extend(net, horizon, &mut walk, &mut out);
    }
    out
}

fn walk_score(net: &GoalNetwork, agent: &Agent, ability_q: f64, walk: &[NodeId]) -> f64 {
    let total: f64 = walk
        .iter()
        .map(|&id| {
            let node = net.node(id);
            node.r * predicted_gain(agent, ability_q, node)
        })
        .sum();
    total / walk.len() as f64
}

/// Runs one policy on one network. Deterministic for fixed inputs; the seed
/// feeds both the gain noise and any random choices.
pub fn run_policy(
    net: &GoalNetwork,
    agent: &Agent,
    kind: &PolicyKind,
    seed: u64,
    step_budget: usize,
) -> Result<Trajectory, PolicyError> {
    if step_budget == 0 {
        return Err(PolicyError::InvalidBudget);
    }
    if let PolicyKind::HorizonPlanner {
        horizon,
        replan_period,
    } = kind
    {
        if *horizon == 0 || *replan_period == 0 {
            return Err(PolicyError::InvalidHorizon);
        }
    }
    agent.check()?;
    let ability_q = agent.expected_ability(net.feature_vector())?;
    let follower_path: Option<Vec<NodeId>> = match kind {
        PolicyKind::OracleFollower => Some(optimal_planning_path(net)?.path.nodes),
        _ => None,
    };

    let mut rng = substream(seed, &["policy"], &[]);
    let mut visited: Vec<Visit> = Vec::new();
    let mut segments: Vec<PlanSegment> = Vec::new();
    let mut plan_queue: VecDeque<NodeId> = VecDeque::new();
    let mut follower_pos = 0usize;
    let mut running_x = 0.0f64;
    let mut current = net.start();

    let stop_reason = loop {
        let node = net.node(current);
        let u_realized = realized_gain_with_ability(agent, ability_q, node, &mut rng);
        visited.push(Visit {
            node: current,
            u_realized,
            u_hat: node.u_hat,
            r: node.r,
            t_elapsed: elapsed_time(ability_q, node),
        });
        running_x += node.r * u_realized;
        if let Some(w) = net.goal_threshold_w() {
            if running_x > w {
                break StopReason::ThresholdMet;
            }
        }
        if net.is_terminal(current) {
            break StopReason::TerminalReached;
        }
        if visited.len() >= step_budget {
            break StopReason::StepBudgetExhausted;
        }
        let next = match kind {
            PolicyKind::RandomWalk => {
                let succ = net.successors(current);
                if succ.is_empty() {
                    None
                } else {
                    Some(succ[rng.gen_range(0..succ.len())])
                }
            }
            PolicyKind::GreedySolver => {
                let mut best: Option<(NodeId, f64)> = None;
                for &succ in net.successors(current) {
                    let gain = predicted_gain(agent, ability_q, net.node(succ));
                    // strict improvement keeps the lowest id on ties
                    if best.map_or(true, |(_, g)| gain > g) {
                        best = Some((succ, gain));
                    }
                }
                best.map(|(id, _)| id)
            }
            PolicyKind::HorizonPlanner {
                horizon,
                replan_period,
            } => {
                if plan_queue.is_empty() {
                    let walks = candidate_walks(net, current, *horizon);
                    let mut best: Option<(&Vec<NodeId>, f64)> = None;
                    for walk in &walks {
                        let score = walk_score(net, agent, ability_q, walk);
                        // strict improvement keeps the lexicographically
                        // smallest walk on ties (walks come out in lex order)
                        if best.map_or(true, |(_, s)| score > s) {
                            best = Some((walk, score));
                        }
                    }
                    if let Some((walk, _)) = best {
                        let mut planned = vec![current];
                        planned.extend_from_slice(walk);
                        segments.push(PlanSegment {
                            start_index: visited.len() - 1,
                            planned: PathSpec::new(planned),
                        });
                        for &id in walk.iter().take(*replan_period) {
                            plan_queue.push_back(id);
                        }
                    }
                }
                plan_queue.pop_front()
            }
            PolicyKind::OracleFollower => {
                follower_pos += 1;
                follower_path
                    .as_ref()
                    .and_then(|path| path.get(follower_pos).copied())
            }
        };
        match next {
            Some(id) => current = id,
            None => break StopReason::DeadEnd,
        }
    };

    if segments.is_empty() {
        // non-planning policies engage once: the whole walk is one segment
        let planned = match (kind, &follower_path) {
            (PolicyKind::OracleFollower, Some(path)) => PathSpec::new(path.clone()),
            _ => PathSpec::new(visited.iter().map(|v| v.node).collect()),
        };
        segments.push(PlanSegment {
            start_index: 0,
            planned,
        });
    }

    Ok(Trajectory {
        visited,
        plan_segments: segments,
        stop_reason,
    })
}
