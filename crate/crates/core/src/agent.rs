//! Agents: expertise, expected ability, realized information gain, and time.
//!
//! Expected ability decays exponentially with the distance between the
//! agent's expertise features and the goal-class features (surprisal). The
//! realized gain at a node saturates toward the node's potential information
//! as ability grows, is scaled down by an environment penalty, and carries
//! additive Gaussian noise — so a gain can even be negative, but never
//! exceeds the node's potential.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::network::SubgoalNode;

/// A parameterized solver/planner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Agent {
    /// Expertise features; compared against a goal's feature vector.
    pub expertise_vector: Vec<f64>,
    /// Expected ability on a perfectly familiar goal, in bits per subgoal. > 0.
    pub base_ability: f64,
    /// Exponential decay rate of ability in feature distance. ≥ 0.
    pub surprisal_decay_kappa: f64,
    /// Standard deviation of the additive information noise, in bits. ≥ 0.
    pub noise_sigma: f64,
    /// Multiplicative environmental loss, in `[0, 1)`.
    pub env_penalty: f64,
    /// Lookahead depth when planning; 0 means a pure solver.
    pub planning_horizon: usize,
    /// Number of planned nodes executed before replanning. ≥ 1.
    pub replan_period: usize,
}

impl Agent {
    /// A quiet, penalty-free solver with the given ability. Handy as a
    /// template for tests and reference runs.
    pub fn solver(base_ability: f64) -> Self {
        Self {
            expertise_vector: Vec::new(),
            base_ability,
            surprisal_decay_kappa: 0.0,
            noise_sigma: 0.0,
            env_penalty: 0.0,
            planning_horizon: 0,
            replan_period: 1,
        }
    }

    pub fn check(&self) -> Result<(), AgentError> {
        if !(self.base_ability > 0.0) || !self.base_ability.is_finite() {
            return Err(AgentError::InvalidParameter {
                field: "base_ability",
                message: format!("{} must be positive and finite", self.base_ability),
            });
        }
        if !(self.surprisal_decay_kappa >= 0.0) {
            return Err(AgentError::InvalidParameter {
                field: "surprisal_decay_kappa",
                message: "must be non-negative".into(),
            });
        }
        if !(self.noise_sigma >= 0.0) || !self.noise_sigma.is_finite() {
            return Err(AgentError::InvalidParameter {
                field: "noise_sigma",
                message: "must be non-negative and finite".into(),
            });
        }
        if !(0.0..1.0).contains(&self.env_penalty) {
            return Err(AgentError::InvalidParameter {
                field: "env_penalty",
                message: format!("{} is outside [0, 1)", self.env_penalty),
            });
        }
        if self.replan_period == 0 {
            return Err(AgentError::InvalidParameter {
                field: "replan_period",
                message: "must be at least 1".into(),
            });
        }
        Ok(())
    }
}

/// An agent paired with the goal-class features it is being asked about.
#[derive(Debug, Clone, PartialEq)]
pub struct AbilityQuery<'a> {
    pub agent: &'a Agent,
    pub goal_features: &'a [f64],
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AgentError {
    #[error("feature vectors have different lengths ({expertise} vs {goal})")]
    DimensionMismatch { expertise: usize, goal: usize },
    #[error("invalid agent parameter `{field}`: {message}")]
    InvalidParameter { field: &'static str, message: String },
}

fn euclidean_distance(a: &[f64], b: &[f64]) -> Result<f64, AgentError> {
    if a.len() != b.len() {
        return Err(AgentError::DimensionMismatch {
            expertise: a.len(),
            goal: b.len(),
        });
    }
    Ok(a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt())
}

/// Expected ability of the agent on a goal class, in bits per subgoal:
/// `base_ability · exp(−kappa · distance(expertise, goal))`. Strictly
/// decreasing in the feature distance when kappa > 0.
pub fn expected_ability(query: &AbilityQuery) -> Result<f64, AgentError> {
    let distance = euclidean_distance(&query.agent.expertise_vector, query.goal_features)?;
    Ok(query.agent.base_ability * (-query.agent.surprisal_decay_kappa * distance).exp())
}

impl Agent {
    pub fn expected_ability(&self, goal_features: &[f64]) -> Result<f64, AgentError> {
        expected_ability(&AbilityQuery {
            agent: self,
            goal_features,
        })
    }
}

/// The noise-free part of the realized gain at a node for an agent with
/// effective ability `q`: `u_hat · q / (q + u_hat) · (1 − env_penalty)`.
/// Saturates toward `u_hat` as `q` grows. This is also what agents use when
/// predicting gains during planning.
pub fn predicted_gain(agent: &Agent, ability_q: f64, node: &SubgoalNode) -> f64 {
    if node.u_hat == 0.0 || ability_q <= 0.0 {
        return 0.0;
    }
    node.u_hat * (ability_q / (ability_q + node.u_hat)) * (1.0 - agent.env_penalty)
}

/// Realized information gain at a node, in bits. Equals the predicted gain
/// plus Gaussian noise, clamped from above by the node's potential; noise can
/// push it negative. Deterministic for a given generator state.
pub fn realized_gain(
    agent: &Agent,
    node: &SubgoalNode,
    goal_features: &[f64],
    rng: &mut impl Rng,
) -> Result<f64, AgentError> {
    let q = agent.expected_ability(goal_features)?;
    Ok(realized_gain_with_ability(agent, q, node, rng))
}

/// As [`realized_gain`], with the effective ability already computed.
pub fn realized_gain_with_ability(
    agent: &Agent,
    ability_q: f64,
    node: &SubgoalNode,
    rng: &mut impl Rng,
) -> f64 {
    let mut gain = predicted_gain(agent, ability_q, node);
    if agent.noise_sigma > 0.0 {
        let normal = Normal::new(0.0, agent.noise_sigma).expect("sigma checked non-negative");
        gain += normal.sample(rng);
    }
    gain.min(node.u_hat)
}

/// Abstract time spent resolving a node: potential information over
/// effective ability. More to resolve or less ability means more time.
pub fn elapsed_time(ability_q: f64, node: &SubgoalNode) -> f64 {
    node.u_hat / ability_q
}
