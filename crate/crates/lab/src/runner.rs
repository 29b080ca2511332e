//! Experiment execution: builds networks, runs every (agent, policy) pair on
//! each, scores the trajectories, and writes CSV/JSON/SVG outputs.
//!
//! Determinism: one root seed governs the run. Every random decision draws
//! from a substream hashed from `(seed, component, indices)`, so adding
//! replicates, agents, or policies never perturbs existing draws, and the
//! greedy/planner comparison on one network replicate is noise-paired (the
//! trajectory stream depends on the replicate and agent, not the policy).
//! All file writes happen after computation, from one writer.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use tis_core::agent::Agent;
use tis_core::evolution::{run_evolution, EvolutionConfig, EvolutionTrace};
use tis_core::metrics::{compute_report, MetricsReport, ReportInputs};
use tis_core::network::{from_text, generate_network, to_text, GoalNetwork};
use tis_core::oracle::{
    max_info_path, max_info_walk_bounded, min_info_complete_path, optimal_planning_path,
    OracleResult,
};
use tis_core::policy::{run_policy, PolicyKind, Trajectory};
use tis_core::proxy::{proxy_intelligence, ProxyModel};
use tis_core::rng::substream_seed;

use crate::config::ExperimentConfig;
use crate::error::LabError;
use crate::svg::{emit_plot, PlotKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub version: String,
    pub unix_time: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkRecord {
    pub size: usize,
    pub replicate: usize,
    /// Relative path of the serialized network inside the output directory.
    pub file: String,
    pub node_count: usize,
    /// Intrinsic complexity: total information of the cheapest complete path.
    pub complexity_c: f64,
    pub max_info: OracleResult,
    pub optimal_planning: OracleResult,
    /// The network itself in `tis-net v1` text form.
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    pub node: usize,
    pub u_hat: f64,
    pub u_realized: f64,
    pub r: f64,
    pub t_elapsed: f64,
    pub time_cum: f64,
    /// Running realized complexity Σ r·u.
    pub x_cum: f64,
    /// Weighted solving index of the trajectory prefix.
    pub u_r_prefix: f64,
    /// One-shot planning index of the trajectory prefix (clamped).
    pub a_g_prefix: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub size: usize,
    pub replicate: usize,
    pub agent: String,
    pub policy: String,
    pub stop_reason: String,
    pub report: MetricsReport,
    pub steps: Vec<StepRecord>,
    pub trajectory: Trajectory,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProxyPoint {
    pub strength_p: f64,
    pub i_hat_plain: f64,
    pub i_hat_proxy: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProxyOutput {
    pub ability_q: f64,
    pub complexity_c: f64,
    pub i_raw: f64,
    pub points: Vec<ProxyPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolutionOutput {
    pub trace: EvolutionTrace,
}

/// Everything one experiment produced, traceable to its config snapshot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunBundle {
    pub schema_version: String,
    pub provenance: Provenance,
    pub config: ExperimentConfig,
    pub networks: Vec<NetworkRecord>,
    pub runs: Vec<RunRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proxy: Option<ProxyOutput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evolution: Option<EvolutionOutput>,
}

pub const RUNS_CSV_HEADER: &str = "size,replicate,agent,policy,stop_reason,steps,solving_u,\
solving_u_r,realized_complexity_x,planning_a_hier,planning_a_global,planning_a_global_raw,\
planning_a_global_clamped,planning_a_solve,intelligence_i,difficulty_d,intelligence_hat,\
intelligence_bench,alpha,beta,time_normalized_u";

pub const STEPS_CSV_HEADER: &str = "size,replicate,agent,policy,step,node,u_hat,u_realized,r,\
t_elapsed,time_cum,x_cum,u_r_prefix,a_g_prefix";

pub const PROXY_CSV_HEADER: &str = "strength_p,i_hat_plain,i_hat_proxy,delta";

fn step_records(traj: &Trajectory, optimal: &OracleResult) -> Vec<StepRecord> {
    let mut out = Vec::with_capacity(traj.visited.len());
    let mut time_cum = 0.0;
    let mut x_cum = 0.0;
    let mut ratio_sum = 0.0;
    let mut u_hat_sum = 0.0;
    for (i, visit) in traj.visited.iter().enumerate() {
        time_cum += visit.t_elapsed;
        x_cum += visit.r * visit.u_realized;
        ratio_sum += if visit.u_hat > 0.0 {
            visit.r * visit.u_realized / visit.u_hat
        } else {
            0.0
        };
        u_hat_sum += visit.u_hat;
        let len = (i + 1) as f64;
        let a_g_raw = (u_hat_sum / len) / optimal.normalized_info;
        out.push(StepRecord {
            step: i,
            node: visit.node.0,
            u_hat: visit.u_hat,
            u_realized: visit.u_realized,
            r: visit.r,
            t_elapsed: visit.t_elapsed,
            time_cum,
            x_cum,
            u_r_prefix: ratio_sum / len,
            a_g_prefix: a_g_raw.clamp(0.0, 1.0),
        });
    }
    out
}

struct Substrate {
    size_index: usize,
    size: usize,
    replicate: usize,
    net: GoalNetwork,
    complexity_c: f64,
    max_info: OracleResult,
    optimal_planning: OracleResult,
}

fn build_substrates(config: &ExperimentConfig) -> Result<Vec<Substrate>, LabError> {
    let mut shells: Vec<(usize, usize, usize, GoalNetwork)> = Vec::new();
    if let Some(file) = &config.network.file {
        let text = fs::read_to_string(file).map_err(LabError::io(file.clone()))?;
        let net = from_text(&text)
            .map_err(|e| LabError::Validation(format!("network file {file}: {e}")))?;
        let report = net.validate();
        if !report.is_ok() {
            return Err(LabError::Validation(format!(
                "network file {file} is invalid: {report}"
            )));
        }
        shells.push((0, net.node_count(), 0, net));
    } else {
        for (size_index, &size) in config.network.node_counts.iter().enumerate() {
            let params = config.network.params_for(size);
            for replicate in 0..config.network.replicates {
                let seed = substream_seed(
                    config.seed,
                    &["network"],
                    &[size_index as u64, replicate as u64],
                );
                let net = generate_network(&params, seed).map_err(LabError::runtime)?;
                shells.push((size_index, size, replicate, net));
            }
        }
    }
    shells
        .into_par_iter()
        .map(|(size_index, size, replicate, net)| {
            let net = match config.metrics.w {
                Some(w) => net.with_threshold(Some(w)),
                None => net,
            };
            let max_info = max_info_path(&net).map_err(LabError::runtime)?;
            let optimal_planning = optimal_planning_path(&net).map_err(LabError::runtime)?;
            let complexity_c = min_info_complete_path(&net)
                .map_err(LabError::runtime)?
                .total_info;
            Ok(Substrate {
                size_index,
                size,
                replicate,
                net,
                complexity_c,
                max_info,
                optimal_planning,
            })
        })
        .collect()
}

fn run_one(
    config: &ExperimentConfig,
    substrate: &Substrate,
    agent_index: usize,
    agent_label: &str,
    agent: &Agent,
    policy_label: &str,
    kind: &PolicyKind,
    reference: &Trajectory,
) -> Result<RunRecord, LabError> {
    let traj_seed = substream_seed(
        config.seed,
        &["trajectory"],
        &[
            substrate.size_index as u64,
            substrate.replicate as u64,
            agent_index as u64,
        ],
    );
    let traj = run_policy(
        &substrate.net,
        agent,
        kind,
        traj_seed,
        config.policy.step_budget,
    )
    .map_err(LabError::runtime)?;
    let segment_oracles: Vec<OracleResult> = traj
        .segment_spans()
        .iter()
        .map(|&(lo, hi)| {
            max_info_walk_bounded(&substrate.net, traj.visited[lo].node, hi - lo)
                .map_err(LabError::runtime)
        })
        .collect::<Result<_, _>>()?;
    let ability_q = agent
        .expected_ability(substrate.net.feature_vector())
        .map_err(LabError::runtime)?;
    let report = compute_report(&ReportInputs {
        trajectory: &traj,
        reference_trajectory: reference,
        segment_oracles: &segment_oracles,
        optimal_planning: &substrate.optimal_planning,
        complexity_c: substrate.complexity_c,
        ability_q,
        alpha: config.metrics.alpha,
        beta: config.metrics.beta,
        benchmark_q: None,
    })
    .map_err(LabError::runtime)?;
    let steps = step_records(&traj, &substrate.optimal_planning);
    Ok(RunRecord {
        size: substrate.size,
        replicate: substrate.replicate,
        agent: agent_label.to_string(),
        policy: policy_label.to_string(),
        stop_reason: traj.stop_reason.as_str().to_string(),
        report,
        steps,
        trajectory: traj,
    })
}

/// Executes the whole experiment described by a validated config.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunBundle, LabError> {
    config.validate()?;
    let substrates = build_substrates(config)?;
    let agents = config.agent.effective_agents();
    let policies: Vec<(String, PolicyKind)> = config
        .policy
        .variants
        .iter()
        .map(|v| v.to_kind().map(|k| (k.label(), k)))
        .collect::<Result<_, _>>()?;

    let runs: Vec<RunRecord> = substrates
        .par_iter()
        .map(|substrate| -> Result<Vec<RunRecord>, LabError> {
            let mut records = Vec::with_capacity(agents.len() * policies.len());
            for (agent_index, (agent_label, agent)) in agents.iter().enumerate() {
                // the solve-relative denominator runs the optimal path to its
                // end, so the reference ignores the stopping threshold
                let reference_seed = substream_seed(
                    config.seed,
                    &["reference"],
                    &[
                        substrate.size_index as u64,
                        substrate.replicate as u64,
                        agent_index as u64,
                    ],
                );
                let reference = run_policy(
                    &substrate.net.without_threshold(),
                    agent,
                    &PolicyKind::OracleFollower,
                    reference_seed,
                    substrate.net.node_count().max(1),
                )
                .map_err(LabError::runtime)?;
                for (policy_label, kind) in &policies {
                    records.push(run_one(
                        config,
                        substrate,
                        agent_index,
                        agent_label,
                        agent,
                        policy_label,
                        kind,
                        &reference,
                    )?);
                }
            }
            Ok(records)
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();

    let networks: Vec<NetworkRecord> = substrates
        .iter()
        .map(|s| NetworkRecord {
            size: s.size,
            replicate: s.replicate,
            file: format!("networks/net_s{}_r{}.tisnet", s.size, s.replicate),
            node_count: s.net.node_count(),
            complexity_c: s.complexity_c,
            max_info: s.max_info.clone(),
            optimal_planning: s.optimal_planning.clone(),
            text: to_text(&s.net),
        })
        .collect();

    let proxy = match (&config.proxy, runs.first(), substrates.first()) {
        (Some(section), Some(first_run), Some(substrate)) => {
            let ability_q = agents[0]
                .1
                .expected_ability(substrate.net.feature_vector())
                .map_err(LabError::runtime)?;
            let i_raw = first_run.report.intelligence_i;
            let complexity_c = substrate.complexity_c;
            let mut points = Vec::with_capacity(section.sweep_steps);
            for i in 0..section.sweep_steps {
                let strength =
                    section.sweep_max * i as f64 / (section.sweep_steps - 1) as f64;
                let inert = ProxyModel {
                    strength_p: strength,
                    h_coeff: 0.0,
                    boost_gamma: 0.0,
                };
                let i_hat_plain = proxy_intelligence(complexity_c, ability_q, i_raw, &inert)
                    .map_err(LabError::runtime)?;
                let i_hat_proxy =
                    proxy_intelligence(complexity_c, ability_q, i_raw, &section.model(strength))
                        .map_err(LabError::runtime)?;
                points.push(ProxyPoint {
                    strength_p: strength,
                    i_hat_plain,
                    i_hat_proxy,
                    delta: i_hat_proxy - i_hat_plain,
                });
            }
            Some(ProxyOutput {
                ability_q,
                complexity_c,
                i_raw,
                points,
            })
        }
        _ => None,
    };

    let evolution = match &config.evolution {
        Some(section) => {
            let size = config.network.node_counts.first().copied().unwrap_or(12);
            let evolution_config = EvolutionConfig {
                population_size: section.population,
                generations: section.generations,
                selection_weight_p: section.selection_p,
                mutation_sigma: section.mutation_sigma,
                init_trait: section.init_trait.clone(),
                init_spread: section.init_spread,
                replicates: section.replicates,
                map_planning_horizon: section.map_planning_horizon,
                sampler: config.network.params_for(size),
                agent_template: config.agent.base_agent(),
                step_budget: config.policy.step_budget,
                alpha: config.metrics.alpha,
                beta: config.metrics.beta,
                seed: substream_seed(config.seed, &["evolution"], &[]),
            };
            let trace = run_evolution(&evolution_config).map_err(LabError::runtime)?;
            Some(EvolutionOutput { trace })
        }
        None => None,
    };

    Ok(RunBundle {
        schema_version: config.schema_version.clone(),
        provenance: Provenance {
            seed: config.seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            unix_time: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        },
        config: config.clone(),
        networks,
        runs,
        proxy,
        evolution,
    })
}

fn opt_cell(value: &Option<f64>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

pub fn runs_csv(bundle: &RunBundle) -> String {
    let mut out = String::from(RUNS_CSV_HEADER);
    out.push('\n');
    for run in &bundle.runs {
        let r = &run.report;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            run.size,
            run.replicate,
            run.agent,
            run.policy,
            run.stop_reason,
            run.steps.len(),
            r.solving_u,
            r.solving_u_r,
            r.realized_complexity_x,
            r.planning_a_hier,
            r.planning_a_global,
            r.planning_a_global_raw,
            r.planning_a_global_clamped,
            r.planning_a_solve,
            r.intelligence_i,
            r.difficulty_d,
            r.intelligence_hat,
            opt_cell(&r.intelligence_bench),
            r.alpha,
            r.beta,
            opt_cell(&r.time_normalized_u),
        ));
    }
    out
}

pub fn steps_csv(bundle: &RunBundle) -> String {
    let mut out = String::from(STEPS_CSV_HEADER);
    out.push('\n');
    for run in &bundle.runs {
        for s in &run.steps {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                run.size,
                run.replicate,
                run.agent,
                run.policy,
                s.step,
                s.node,
                s.u_hat,
                s.u_realized,
                s.r,
                s.t_elapsed,
                s.time_cum,
                s.x_cum,
                s.u_r_prefix,
                s.a_g_prefix,
            ));
        }
    }
    out
}

pub fn proxy_csv(output: &ProxyOutput) -> String {
    let mut out = String::from(PROXY_CSV_HEADER);
    out.push('\n');
    for p in &output.points {
        out.push_str(&format!(
            "{},{},{},{}\n",
            p.strength_p, p.i_hat_plain, p.i_hat_proxy, p.delta
        ));
    }
    out
}

pub fn evolution_csv_header(trait_dims: usize) -> String {
    let mut columns = vec![
        "generation".to_string(),
        "benchmark_q".to_string(),
        "mean_i_hat".to_string(),
    ];
    for d in 0..trait_dims {
        columns.push(format!("mean_x_{d}"));
    }
    for d in 0..trait_dims {
        columns.push(format!("var_x_{d}"));
    }
    columns.join(",")
}

pub fn evolution_csv(trace: &EvolutionTrace) -> String {
    let dims = trace
        .records
        .first()
        .map(|r| r.mean_trait.len())
        .unwrap_or(0);
    let mut out = evolution_csv_header(dims);
    out.push('\n');
    for rec in &trace.records {
        let mut row = vec![
            rec.generation.to_string(),
            rec.benchmark_q.to_string(),
            rec.mean_i_hat.to_string(),
        ];
        row.extend(rec.mean_trait.iter().map(|v| v.to_string()));
        row.extend(rec.trait_variance.iter().map(|v| v.to_string()));
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn write(path: &Path, contents: &str) -> Result<(), LabError> {
    fs::write(path, contents).map_err(LabError::io(path.display().to_string()))
}

/// A single writer lays down every declared output after computation:
/// networks, CSV tables, the JSON bundle, trajectories, and SVG plots.
pub fn write_outputs(bundle: &RunBundle, out_dir: &Path) -> Result<Vec<PathBuf>, LabError> {
    let formats = &bundle.config.output.formats;
    let csv = formats.iter().any(|f| f == "csv");
    let json = formats.iter().any(|f| f == "json");
    fs::create_dir_all(out_dir).map_err(LabError::io(out_dir.display().to_string()))?;
    let mut written = Vec::new();
    if !bundle.networks.is_empty() {
        let net_dir = out_dir.join("networks");
        fs::create_dir_all(&net_dir).map_err(LabError::io(net_dir.display().to_string()))?;
        for record in &bundle.networks {
            let path = out_dir.join(&record.file);
            write(&path, &record.text)?;
            written.push(path);
        }
    }
    if csv && !bundle.runs.is_empty() {
        let path = out_dir.join("runs.csv");
        write(&path, &runs_csv(bundle))?;
        written.push(path);
        let path = out_dir.join("steps.csv");
        write(&path, &steps_csv(bundle))?;
        written.push(path);
    }
    if let (true, Some(proxy)) = (csv, bundle.proxy.as_ref()) {
        let path = out_dir.join("proxy_sweep.csv");
        write(&path, &proxy_csv(proxy))?;
        written.push(path);
    }
    if let (true, Some(evolution)) = (csv, bundle.evolution.as_ref()) {
        let path = out_dir.join("evolution.csv");
        write(&path, &evolution_csv(&evolution.trace))?;
        written.push(path);
    }
    if json {
        let path = out_dir.join("bundle.json");
        let text = serde_json::to_string_pretty(bundle)
            .map_err(|e| LabError::Runtime(format!("bundle serialization: {e}")))?;
        write(&path, &text)?;
        written.push(path);
        if !bundle.runs.is_empty() {
            let trajectories: Vec<serde_json::Value> = bundle
                .runs
                .iter()
                .map(|run| {
                    serde_json::json!({
                        "size": run.size,
                        "replicate": run.replicate,
                        "agent": run.agent,
                        "policy": run.policy,
                        "trajectory": run.trajectory,
                    })
                })
                .collect();
            let path = out_dir.join("trajectories.json");
            let text = serde_json::to_string_pretty(&trajectories)
                .map_err(|e| LabError::Runtime(format!("trajectory serialization: {e}")))?;
            write(&path, &text)?;
            written.push(path);
        }
    }
    for plot_name in &bundle.config.output.plots {
        let kind = PlotKind::parse(plot_name).map_err(LabError::Plot)?;
        let svg = emit_plot(bundle, kind)?;
        let path = out_dir.join(kind.file_name());
        write(&path, &svg)?;
        written.push(path);
    }
    Ok(written)
}
