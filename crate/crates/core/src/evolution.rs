//! Selection on heritable intelligence traits across generations.
//!
//! Each member's trait vector maps onto an agent phenotype (first coordinate
//! = base ability; an optional second coordinate = planning horizon). Every
//! generation the members solve freshly sampled goal networks, are scored by
//! benchmark-relative intelligence, and reproduce in proportion to
//! `1 + p · Î / Ī`. The benchmark — the population's mean expected ability —
//! evolves with the population, so rising ability depresses the index it is
//! measured by.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::agent::Agent;
use crate::metrics::intelligence;
use crate::network::{generate_network, GeneratorParams};
use crate::oracle::{min_info_complete_path, optimal_planning_path};
use crate::policy::{run_policy, PolicyKind};
use crate::rng::{substream, substream_seed};

/// Minimum ability a trait can express; keeps mutated phenotypes valid.
const ABILITY_FLOOR: f64 = 1e-6;
/// Largest lookahead a trait can express.
const HORIZON_CEIL: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Member {
    pub trait_x: Vec<f64>,
    pub fitness: f64,
}

/// A population of heritable trait vectors plus its selection machinery.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Population {
    pub members: Vec<Member>,
    pub generation: usize,
    /// Population mean expected ability; updated at every evaluation.
    pub benchmark_q: f64,
    /// Contribution of the task to fitness, in `[0, 1]`. Zero means neutral
    /// drift.
    pub selection_weight_p: f64,
    /// Per-coordinate Gaussian mutation scale. ≥ 0.
    pub mutation_sigma: f64,
    pub rng_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub generation: usize,
    pub mean_trait: Vec<f64>,
    pub benchmark_q: f64,
    pub mean_i_hat: f64,
    pub trait_variance: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct EvolutionTrace {
    pub records: Vec<GenerationRecord>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvolutionError {
    #[error("generation {generation} is degenerate: mean benchmarked intelligence is not positive")]
    DegenerateGeneration { generation: usize },
    #[error("generation {generation} has zero total fitness")]
    ZeroTotalFitness { generation: usize },
    #[error("invalid evolution parameter `{field}`: {message}")]
    InvalidParameter { field: &'static str, message: String },
    #[error("generation {generation} evaluation failed: {message}")]
    Evaluation { generation: usize, message: String },
}

/// Selection rule: fitness `1 + p · Î / Ī`, floored at zero so reproduction
/// weights stay valid.
pub fn selection_fitness(p: f64, i_hat: f64, mean_i_hat: f64) -> f64 {
    (1.0 + p * i_hat / mean_i_hat).max(0.0)
}

/// The phenotype a trait vector expresses on the given template.
pub fn member_agent(template: &Agent, trait_x: &[f64], map_horizon: bool) -> Agent {
    let mut agent = template.clone();
    if let Some(&ability) = trait_x.first() {
        agent.base_ability = ability.max(ABILITY_FLOOR);
    }
    if map_horizon {
        if let Some(&h) = trait_x.get(1) {
            agent.planning_horizon = (h.round().max(0.0) as usize).min(HORIZON_CEIL);
        }
    }
    agent
}

/// Per-generation evaluation summary.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalOutcome {
    pub mean_i_hat: f64,
    pub member_i_hat: Vec<f64>,
}

/// Scores every member on `replicates` freshly sampled networks, updates the
/// population benchmark to the mean expected ability, and sets fitnesses.
/// Networks are shared across members within a replicate so comparisons are
/// paired.
pub fn evaluate_generation(
    pop: &mut Population,
    sampler: &GeneratorParams,
    template: &Agent,
    replicates: usize,
    alpha: f64,
    beta: f64,
    step_budget: usize,
    map_horizon: bool,
) -> Result<EvalOutcome, EvolutionError> {
    if replicates == 0 {
        return Err(EvolutionError::InvalidParameter {
            field: "replicates",
            message: "must be at least 1".into(),
        });
    }
    let generation = pop.generation;
    let fail = |message: String| EvolutionError::Evaluation {
        generation,
        message,
    };
    let gen_index = generation as u64;
    let mut substrates = Vec::with_capacity(replicates);
    for rep in 0..replicates {
        let seed = substream_seed(pop.rng_seed, &["evolution-net"], &[gen_index, rep as u64]);
        let net = generate_network(sampler, seed).map_err(|e| fail(e.to_string()))?;
        let optimal = optimal_planning_path(&net).map_err(|e| fail(e.to_string()))?;
        let complexity = min_info_complete_path(&net)
            .map_err(|e| fail(e.to_string()))?
            .total_info;
        substrates.push((net, optimal, complexity));
    }

    let abilities: Vec<f64> = pop
        .members
        .iter()
        .map(|m| {
            member_agent(template, &m.trait_x, map_horizon)
                .expected_ability(&sampler.feature)
                .map_err(|e| fail(e.to_string()))
        })
        .collect::<Result<_, _>>()?;
    pop.benchmark_q = abilities.iter().sum::<f64>() / abilities.len() as f64;
    let bench_sq = pop.benchmark_q * pop.benchmark_q;

    let member_i_hat: Vec<f64> = pop
        .members
        .par_iter()
        .enumerate()
        .map(|(m, member)| -> Result<f64, EvolutionError> {
            let agent = member_agent(template, &member.trait_x, map_horizon);
            let kind = if map_horizon {
                PolicyKind::from_agent(&agent)
            } else {
                PolicyKind::GreedySolver
            };
            let mut total = 0.0;
            for (rep, (net, optimal, complexity)) in substrates.iter().enumerate() {
                let seed = substream_seed(
                    pop.rng_seed,
                    &["evolution-traj"],
                    &[gen_index, rep as u64, m as u64],
                );
                let traj = run_policy(net, &agent, &kind, seed, step_budget)
                    .map_err(|e| fail(e.to_string()))?;
                let i = intelligence(&traj, optimal, alpha, beta)
                    .map_err(|e| fail(e.to_string()))?;
                total += complexity * i / bench_sq;
            }
            Ok(total / replicates as f64)
        })
        .collect::<Result<_, _>>()?;

    let mean_i_hat = member_i_hat.iter().sum::<f64>() / member_i_hat.len() as f64;
    if !(mean_i_hat > 0.0) {
        return Err(EvolutionError::DegenerateGeneration { generation });
    }
    for (member, &i_hat) in pop.members.iter_mut().zip(&member_i_hat) {
        member.fitness = selection_fitness(pop.selection_weight_p, i_hat, mean_i_hat);
    }
    Ok(EvalOutcome {
        mean_i_hat,
        member_i_hat,
    })
}

/// Draws the next generation fitness-proportionally with replacement using
/// stochastic universal sampling (one spin, evenly spaced pointers) and
/// mutates each offspring coordinate. Under exactly equal fitness every
/// parent leaves exactly one offspring, so a neutral, mutation-free
/// population reproduces itself identically. Also reports how many offspring
/// each parent left. Deterministic for a fixed population seed and
/// generation.
pub fn reproduce_with_counts(
    pop: &Population,
) -> Result<(Population, Vec<usize>), EvolutionError> {
    let total: f64 = pop.members.iter().map(|m| m.fitness).sum();
    if !(total > 0.0) {
        return Err(EvolutionError::ZeroTotalFitness {
            generation: pop.generation,
        });
    }
    let size = pop.members.len();
    let mut rng = substream(pop.rng_seed, &["reproduce"], &[pop.generation as u64]);
    let step = total / size as f64;
    let offset: f64 = rng.gen_range(0.0..step);
    let mut counts = vec![0usize; size];
    let mut cumulative = 0.0;
    let mut pointer = 0usize;
    let mut last_weighted = 0usize;
    for (parent, member) in pop.members.iter().enumerate() {
        if member.fitness > 0.0 {
            last_weighted = parent;
        }
        cumulative += member.fitness;
        while pointer < size && offset + pointer as f64 * step < cumulative {
            counts[parent] += 1;
            pointer += 1;
        }
    }
    // float rounding can strand the final pointer just past the last band
    counts[last_weighted] += size - pointer;

    let mut offspring = Vec::with_capacity(size);
    let mutation = (pop.mutation_sigma > 0.0)
        .then(|| Normal::new(0.0, pop.mutation_sigma).expect("sigma checked non-negative"));
    for (parent, &count) in counts.iter().enumerate() {
        for _ in 0..count {
            let mut trait_x = pop.members[parent].trait_x.clone();
            if let Some(noise) = &mutation {
                for coord in &mut trait_x {
                    *coord += noise.sample(&mut rng);
                }
            }
            offspring.push(Member {
                trait_x,
                fitness: 0.0,
            });
        }
    }
    Ok((
        Population {
            members: offspring,
            generation: pop.generation + 1,
            benchmark_q: pop.benchmark_q,
            selection_weight_p: pop.selection_weight_p,
            mutation_sigma: pop.mutation_sigma,
            rng_seed: pop.rng_seed,
        },
        counts,
    ))
}

pub fn reproduce(pop: &Population) -> Result<Population, EvolutionError> {
    reproduce_with_counts(pop).map(|(next, _)| next)
}

/// Full configuration of an evolution run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolutionConfig {
    pub population_size: usize,
    pub generations: usize,
    pub selection_weight_p: f64,
    pub mutation_sigma: f64,
    /// Mean founder trait vector.
    pub init_trait: Vec<f64>,
    /// Per-coordinate founder spread. ≥ 0.
    pub init_spread: f64,
    pub replicates: usize,
    /// When set, the second trait coordinate expresses a planning horizon.
    pub map_planning_horizon: bool,
    pub sampler: GeneratorParams,
    pub agent_template: Agent,
    pub step_budget: usize,
    pub alpha: f64,
    pub beta: f64,
    pub seed: u64,
}

impl EvolutionConfig {
    fn check(&self) -> Result<(), EvolutionError> {
        let err = |field: &'static str, message: &str| EvolutionError::InvalidParameter {
            field,
            message: message.into(),
        };
        if self.population_size == 0 {
            return Err(err("population_size", "must be at least 1"));
        }
        if self.generations == 0 {
            return Err(err("generations", "must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.selection_weight_p) {
            return Err(err("selection_weight_p", "must lie in [0, 1]"));
        }
        if !(self.mutation_sigma >= 0.0) {
            return Err(err("mutation_sigma", "must be non-negative"));
        }
        if self.init_trait.is_empty() {
            return Err(err("init_trait", "must have at least one coordinate"));
        }
        if !(self.init_spread >= 0.0) {
            return Err(err("init_spread", "must be non-negative"));
        }
        if self.replicates == 0 {
            return Err(err("replicates", "must be at least 1"));
        }
        if self.step_budget == 0 {
            return Err(err("step_budget", "must be at least 1"));
        }
        Ok(())
    }
}

/// Founder population around the configured trait mean.
pub fn init_population(config: &EvolutionConfig) -> Result<Population, EvolutionError> {
    config.check()?;
    let mut rng = substream(config.seed, &["evolution-init"], &[]);
    let spread = (config.init_spread > 0.0)
        .then(|| Normal::new(0.0, config.init_spread).expect("spread checked non-negative"));
    let members = (0..config.population_size)
        .map(|_| {
            let trait_x = config
                .init_trait
                .iter()
                .map(|&mean| mean + spread.as_ref().map_or(0.0, |d| d.sample(&mut rng)))
                .collect();
            Member {
                trait_x,
                fitness: 0.0,
            }
        })
        .collect();
    Ok(Population {
        members,
        generation: 0,
        benchmark_q: 1.0,
        selection_weight_p: config.selection_weight_p,
        mutation_sigma: config.mutation_sigma,
        rng_seed: config.seed,
    })
}

fn record(pop: &Population, mean_i_hat: f64) -> GenerationRecord {
    let dims = pop.members[0].trait_x.len();
    let n = pop.members.len() as f64;
    let mut mean_trait = vec![0.0; dims];
    for member in &pop.members {
        for (sum, &coord) in mean_trait.iter_mut().zip(&member.trait_x) {
            *sum += coord;
        }
    }
    for sum in &mut mean_trait {
        *sum /= n;
    }
    let mut trait_variance = vec![0.0; dims];
    for member in &pop.members {
        for ((var, &coord), &mean) in trait_variance.iter_mut().zip(&member.trait_x).zip(&mean_trait)
        {
            *var += (coord - mean) * (coord - mean);
        }
    }
    for var in &mut trait_variance {
        *var /= n;
    }
    GenerationRecord {
        generation: pop.generation,
        mean_trait,
        benchmark_q: pop.benchmark_q,
        mean_i_hat,
        trait_variance,
    }
}

/// Alternates evaluation and reproduction, recording one trace row per
/// generation.
pub fn run_evolution(config: &EvolutionConfig) -> Result<EvolutionTrace, EvolutionError> {
    let mut pop = init_population(config)?;
    let mut trace = EvolutionTrace::default();
    for step in 0..config.generations {
        let outcome = evaluate_generation(
            &mut pop,
            &config.sampler,
            &config.agent_template,
            config.replicates,
            config.alpha,
            config.beta,
            config.step_budget,
            config.map_planning_horizon,
        )?;
        trace.records.push(record(&pop, outcome.mean_i_hat));
        if step + 1 < config.generations {
            pop = reproduce(&pop)?;
        }
    }
    Ok(trace)
}
