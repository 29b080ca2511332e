//! Experiment configuration: named sections with `key = value` lines (TOML),
//! versioned by `schema_version`, diffable, and round-trip stable.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use tis_core::agent::Agent;
use tis_core::network::GeneratorParams;
use tis_core::policy::PolicyKind;
use tis_core::proxy::ProxyModel;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("invalid config at `{path}`: {message}")]
    Invalid { path: String, message: String },
}

fn invalid(path: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        path: path.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: String,
    pub seed: u64,
    pub network: NetworkSection,
    pub agent: AgentSection,
    pub policy: PolicySection,
    pub metrics: MetricsSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proxy: Option<ProxySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evolution: Option<EvolutionSection>,
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSection {
    /// Load a `tis-net v1` file instead of generating (sizes/replicates are
    /// then ignored).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    /// Network sizes to sweep; one entry means a single-size experiment.
    pub node_counts: Vec<usize>,
    /// Networks sampled per size.
    pub replicates: usize,
    pub branching: usize,
    pub u_hat_min: f64,
    pub u_hat_max: f64,
    pub relevance_budget: f64,
    pub decoy_fraction: f64,
    #[serde(default)]
    pub feature: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold_fraction: Option<f64>,
}

impl NetworkSection {
    pub fn params_for(&self, node_count: usize) -> GeneratorParams {
        GeneratorParams {
            node_count,
            branching: self.branching,
            u_hat_min: self.u_hat_min,
            u_hat_max: self.u_hat_max,
            relevance_budget: self.relevance_budget,
            decoy_fraction: self.decoy_fraction,
            feature: self.feature.clone(),
            threshold_fraction: self.threshold_fraction,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentSection {
    pub expertise: Vec<f64>,
    pub base_ability: f64,
    pub surprisal_kappa: f64,
    pub noise_sigma: f64,
    pub env_penalty: f64,
    /// Optional labelled overrides; when empty the base agent runs alone.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub variants: Vec<AgentVariant>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentVariant {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_ability: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surprisal_kappa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub env_penalty: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expertise: Option<Vec<f64>>,
}

impl AgentSection {
    pub fn base_agent(&self) -> Agent {
        Agent {
            expertise_vector: self.expertise.clone(),
            base_ability: self.base_ability,
            surprisal_decay_kappa: self.surprisal_kappa,
            noise_sigma: self.noise_sigma,
            env_penalty: self.env_penalty,
            planning_horizon: 0,
            replan_period: 1,
        }
    }

    /// The labelled agents this experiment runs.
    pub fn effective_agents(&self) -> Vec<(String, Agent)> {
        if self.variants.is_empty() {
            return vec![("base".to_string(), self.base_agent())];
        }
        self.variants
            .iter()
            .map(|v| {
                let mut agent = self.base_agent();
                if let Some(a) = v.base_ability {
                    agent.base_ability = a;
                }
                if let Some(k) = v.surprisal_kappa {
                    agent.surprisal_decay_kappa = k;
                }
                if let Some(s) = v.noise_sigma {
                    agent.noise_sigma = s;
                }
                if let Some(e) = v.env_penalty {
                    agent.env_penalty = e;
                }
                if let Some(x) = &v.expertise {
                    agent.expertise_vector = x.clone();
                }
                (v.label.clone(), agent)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicySection {
    pub step_budget: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub variants: Vec<PolicyVariant>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyVariant {
    /// `random_walk`, `greedy_solver` (or `greedy`), `horizon_planner`
    /// (or `planner`), `oracle_follower`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replan: Option<usize>,
}

impl PolicyVariant {
    pub fn to_kind(&self) -> Result<PolicyKind, ConfigError> {
        match self.kind.as_str() {
            "random_walk" => Ok(PolicyKind::RandomWalk),
            "greedy_solver" | "greedy" => Ok(PolicyKind::GreedySolver),
            "horizon_planner" | "planner" => {
                let horizon = self.horizon.ok_or_else(|| {
                    invalid("policy.horizon", "horizon_planner requires a horizon ≥ 1")
                })?;
                if horizon == 0 {
                    return Err(invalid("policy.horizon", "must be at least 1"));
                }
                let replan_period = self.replan.unwrap_or(1);
                if replan_period == 0 {
                    return Err(invalid("policy.replan", "must be at least 1"));
                }
                Ok(PolicyKind::HorizonPlanner {
                    horizon,
                    replan_period,
                })
            }
            "oracle_follower" => Ok(PolicyKind::OracleFollower),
            other => Err(invalid(
                "policy.kind",
                format!(
                    "unknown policy `{other}` (valid: random_walk, greedy_solver, \
horizon_planner, oracle_follower)"
                ),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricsSection {
    pub alpha: f64,
    pub beta: f64,
    /// Stopping threshold in bits; overrides the generator's
    /// threshold_fraction when set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProxySection {
    pub strength_p: f64,
    pub h_coeff: f64,
    pub boost_gamma: f64,
    pub sweep_max: f64,
    pub sweep_steps: usize,
}

impl ProxySection {
    pub fn model(&self, strength_p: f64) -> ProxyModel {
        ProxyModel {
            strength_p,
            h_coeff: self.h_coeff,
            boost_gamma: self.boost_gamma,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolutionSection {
    pub population: usize,
    pub generations: usize,
    pub selection_p: f64,
    pub mutation_sigma: f64,
    pub init_trait: Vec<f64>,
    pub init_spread: f64,
    pub replicates: usize,
    pub map_planning_horizon: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub directory: String,
    /// Any of `csv`, `json`.
    pub formats: Vec<String>,
    /// Plot kinds to emit as SVG: `fig1b`, `fig4`, `fig5`, `proxy`,
    /// `evolution`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub plots: Vec<String>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(invalid(
                "schema_version",
                format!(
                    "unrecognized version `{}` (expected `{SCHEMA_VERSION}`)",
                    self.schema_version
                ),
            ));
        }
        if self.network.file.is_none() {
            if self.network.node_counts.is_empty() {
                return Err(invalid("network.node_counts", "needs at least one size"));
            }
            if self.network.replicates == 0 {
                return Err(invalid("network.replicates", "must be at least 1"));
            }
            for &size in &self.network.node_counts {
                self.network.params_for(size).validate().map_err(|e| match e {
                    tis_core::network::GeneratorError::InvalidParameter { field, message } => {
                        invalid(format!("network.{field}"), message)
                    }
                })?;
            }
        }
        for (label, agent) in self.agent.effective_agents() {
            agent.check().map_err(|e| match e {
                tis_core::agent::AgentError::InvalidParameter { field, message } => invalid(
                    format!("agent.{field}"),
                    format!("variant `{label}`: {message}"),
                ),
                other => invalid("agent", other.to_string()),
            })?;
        }
        {
            let mut labels: Vec<&str> = self
                .agent
                .variants
                .iter()
                .map(|v| v.label.as_str())
                .collect();
            labels.sort_unstable();
            labels.dedup();
            if labels.len() != self.agent.variants.len() {
                return Err(invalid("agent.variants", "labels must be unique"));
            }
            if self.agent.variants.iter().any(|v| v.label.is_empty()) {
                return Err(invalid("agent.variants", "labels must be non-empty"));
            }
        }
        if self.policy.step_budget == 0 {
            return Err(invalid("policy.step_budget", "must be at least 1"));
        }
        for variant in &self.policy.variants {
            variant.to_kind()?;
        }
        if self.policy.variants.is_empty() && self.evolution.is_none() && self.proxy.is_none() {
            return Err(invalid(
                "policy.variants",
                "at least one policy variant (or an evolution/proxy section) is required",
            ));
        }
        if self.proxy.is_some() && self.policy.variants.is_empty() {
            return Err(invalid(
                "policy.variants",
                "the proxy sweep needs one policy run to supply the raw intelligence index",
            ));
        }
        let m = &self.metrics;
        if m.alpha < 0.0 || m.beta < 0.0 || (m.alpha + m.beta - 1.0).abs() > 1e-12 {
            return Err(invalid(
                "metrics.alpha",
                format!(
                    "alpha and beta must be non-negative and sum to one (got {} + {})",
                    m.alpha, m.beta
                ),
            ));
        }
        if let Some(w) = m.w {
            if !(w >= 0.0) || !w.is_finite() {
                return Err(invalid("metrics.w", "must be non-negative and finite"));
            }
        }
        if let Some(proxy) = &self.proxy {
            proxy.model(proxy.strength_p).check().map_err(|e| match e {
                tis_core::proxy::ProxyError::InvalidParameter { field, message } => {
                    invalid(format!("proxy.{field}"), message)
                }
            })?;
            if proxy.sweep_steps < 2 {
                return Err(invalid("proxy.sweep_steps", "must be at least 2"));
            }
            if !(proxy.sweep_max > 0.0) {
                return Err(invalid("proxy.sweep_max", "must be positive"));
            }
        }
        if let Some(evo) = &self.evolution {
            if evo.population == 0 {
                return Err(invalid("evolution.population", "must be at least 1"));
            }
            if evo.generations == 0 {
                return Err(invalid("evolution.generations", "must be at least 1"));
            }
            if !(0.0..=1.0).contains(&evo.selection_p) {
                return Err(invalid("evolution.selection_p", "must lie in [0, 1]"));
            }
            if !(evo.mutation_sigma >= 0.0) {
                return Err(invalid("evolution.mutation_sigma", "must be non-negative"));
            }
            if evo.init_trait.is_empty() {
                return Err(invalid("evolution.init_trait", "needs at least one coordinate"));
            }
            if !(evo.init_spread >= 0.0) {
                return Err(invalid("evolution.init_spread", "must be non-negative"));
            }
            if evo.replicates == 0 {
                return Err(invalid("evolution.replicates", "must be at least 1"));
            }
        }
        if self.output.directory.is_empty() {
            return Err(invalid("output.directory", "must be non-empty"));
        }
        if self.output.formats.is_empty() {
            return Err(invalid("output.formats", "needs `csv`, `json`, or both"));
        }
        for format in &self.output.formats {
            if format != "csv" && format != "json" {
                return Err(invalid(
                    "output.formats",
                    format!("unknown format `{format}` (valid: csv, json)"),
                ));
            }
        }
        for plot in &self.output.plots {
            crate::svg::PlotKind::parse(plot)
                .map_err(|e| invalid("output.plots", e.to_string()))?;
        }
        Ok(())
    }
}
