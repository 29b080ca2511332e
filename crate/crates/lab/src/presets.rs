//! Ready-made experiment configurations.
//!
//! Each preset is a complete, validated config whose outputs reproduce one of
//! the qualitative pictures the lab is built around: per-step information
//! time courses, the achievement-versus-complexity sweep, solving/planning
//! trajectories, the proxy sweep, and a full evolution run.

use crate::config::{
    AgentSection, AgentVariant, EvolutionSection, ExperimentConfig, MetricsSection,
    NetworkSection, OutputSection, PolicySection, PolicyVariant, ProxySection, SCHEMA_VERSION,
};
use crate::error::LabError;

pub const PRESET_NAMES: [&str; 5] = [
    "fig1b-timecourses",
    "fig4-achievement-vs-complexity",
    "fig5-trajectories",
    "proxy-sweep",
    "evolution-run",
];

fn base_network() -> NetworkSection {
    NetworkSection {
        file: None,
        node_counts: vec![12],
        replicates: 1,
        branching: 3,
        u_hat_min: 1.0,
        u_hat_max: 8.0,
        relevance_budget: 1.0,
        decoy_fraction: 0.3,
        feature: Vec::new(),
        threshold_fraction: None,
    }
}

fn base_agent(ability: f64, noise: f64) -> AgentSection {
    AgentSection {
        expertise: Vec::new(),
        base_ability: ability,
        surprisal_kappa: 0.0,
        noise_sigma: noise,
        env_penalty: 0.0,
        variants: Vec::new(),
    }
}

fn policy(kind: &str, horizon: Option<usize>, replan: Option<usize>) -> PolicyVariant {
    PolicyVariant {
        kind: kind.to_string(),
        horizon,
        replan,
    }
}

fn base_metrics() -> MetricsSection {
    MetricsSection {
        alpha: 0.5,
        beta: 0.5,
        w: None,
    }
}

fn output(dir: &str, plots: &[&str]) -> OutputSection {
    OutputSection {
        directory: dir.to_string(),
        formats: vec!["csv".to_string(), "json".to_string()],
        plots: plots.iter().map(|p| p.to_string()).collect(),
    }
}

/// Per-step information time courses for three agent scenarios on one
/// branch-free goal: a steady solver, a noisy one showing transient
/// information loss before crossing the stopping threshold, and a
/// high-ability solver resolving quickly.
fn fig1b_timecourses() -> ExperimentConfig {
    ExperimentConfig {
        schema_version: SCHEMA_VERSION.to_string(),
        seed: 7,
        network: NetworkSection {
            node_counts: vec![10],
            branching: 1,
            u_hat_min: 2.0,
            u_hat_max: 6.0,
            decoy_fraction: 0.0,
            threshold_fraction: Some(0.45),
            ..base_network()
        },
        agent: AgentSection {
            variants: vec![
                AgentVariant {
                    label: "steady".into(),
                    base_ability: Some(6.0),
                    noise_sigma: Some(0.3),
                    surprisal_kappa: None,
                    env_penalty: None,
                    expertise: None,
                },
                AgentVariant {
                    label: "noisy".into(),
                    base_ability: Some(3.0),
                    noise_sigma: Some(2.2),
                    env_penalty: Some(0.1),
                    surprisal_kappa: None,
                    expertise: None,
                },
                AgentVariant {
                    label: "rapid".into(),
                    base_ability: Some(18.0),
                    noise_sigma: Some(0.2),
                    surprisal_kappa: None,
                    env_penalty: None,
                    expertise: None,
                },
            ],
            ..base_agent(6.0, 0.3)
        },
        policy: PolicySection {
            step_budget: 64,
            variants: vec![policy("greedy_solver", None, None)],
        },
        metrics: base_metrics(),
        proxy: None,
        evolution: None,
        output: output("out/fig1b", &["fig1b"]),
    }
}

/// Mean intelligence across a complexity sweep (network size 4 → 64 at decoy
/// fraction 0.4) for a greedy solver versus a three-step planner: the curves
/// coincide on the smallest goals and split as complexity grows.
fn fig4_achievement_vs_complexity() -> ExperimentConfig {
    ExperimentConfig {
        schema_version: SCHEMA_VERSION.to_string(),
        seed: 11,
        network: NetworkSection {
            node_counts: vec![4, 8, 16, 32, 64],
            replicates: 200,
            decoy_fraction: 0.4,
            ..base_network()
        },
        agent: base_agent(3.0, 0.25),
        policy: PolicySection {
            step_budget: 256,
            variants: vec![
                policy("greedy_solver", None, None),
                policy("horizon_planner", Some(3), Some(1)),
            ],
        },
        metrics: base_metrics(),
        proxy: None,
        evolution: None,
        output: output("out/fig4", &["fig4"]),
    }
}

/// Per-step (planning, solving) trajectories of four policies on one decoy
/// network.
fn fig5_trajectories() -> ExperimentConfig {
    ExperimentConfig {
        schema_version: SCHEMA_VERSION.to_string(),
        seed: 13,
        network: NetworkSection {
            node_counts: vec![14],
            u_hat_max: 9.0,
            decoy_fraction: 0.45,
            ..base_network()
        },
        agent: base_agent(3.0, 0.3),
        policy: PolicySection {
            step_budget: 64,
            variants: vec![
                policy("random_walk", None, None),
                policy("greedy_solver", None, None),
                policy("horizon_planner", Some(2), Some(1)),
                policy("oracle_follower", None, None),
            ],
        },
        metrics: base_metrics(),
        proxy: None,
        evolution: None,
        output: output("out/fig5", &["fig5"]),
    }
}

/// Sweeps proxy strength and records the adjusted intelligence index next to
/// the unadjusted one.
fn proxy_sweep() -> ExperimentConfig {
    ExperimentConfig {
        schema_version: SCHEMA_VERSION.to_string(),
        seed: 17,
        network: base_network(),
        agent: base_agent(4.0, 0.2),
        policy: PolicySection {
            step_budget: 64,
            variants: vec![policy("greedy_solver", None, None)],
        },
        metrics: base_metrics(),
        proxy: Some(ProxySection {
            strength_p: 2.0,
            h_coeff: 0.6,
            boost_gamma: 0.25,
            sweep_max: 5.0,
            sweep_steps: 51,
        }),
        evolution: None,
        output: output("out/proxy", &["proxy"]),
    }
}

/// Selection on a heritable ability trait with an evolving population
/// benchmark.
fn evolution_run() -> ExperimentConfig {
    ExperimentConfig {
        schema_version: SCHEMA_VERSION.to_string(),
        seed: 23,
        network: NetworkSection {
            node_counts: vec![10],
            u_hat_max: 6.0,
            ..base_network()
        },
        agent: base_agent(1.0, 0.2),
        policy: PolicySection {
            step_budget: 64,
            variants: Vec::new(),
        },
        metrics: base_metrics(),
        proxy: None,
        evolution: Some(EvolutionSection {
            population: 96,
            generations: 120,
            selection_p: 0.8,
            mutation_sigma: 0.03,
            init_trait: vec![1.0],
            init_spread: 0.3,
            replicates: 2,
            map_planning_horizon: false,
        }),
        output: output("out/evolution", &["evolution"]),
    }
}

/// A complete config by preset name; unknown names list the valid ones.
pub fn preset(name: &str) -> Result<ExperimentConfig, LabError> {
    match name {
        "fig1b-timecourses" => Ok(fig1b_timecourses()),
        "fig4-achievement-vs-complexity" => Ok(fig4_achievement_vs_complexity()),
        "fig5-trajectories" => Ok(fig5_trajectories()),
        "proxy-sweep" => Ok(proxy_sweep()),
        "evolution-run" => Ok(evolution_run()),
        other => Err(LabError::Validation(format!(
            "unknown preset `{other}` (valid: {})",
            PRESET_NAMES.join(", ")
        ))),
    }
}
