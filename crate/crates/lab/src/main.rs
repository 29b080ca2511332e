//! `tis-lab` — goal-network simulation laboratory.
//!
//! Subcommands: `simulate` (run a config), `metrics` (score a stored
//! trajectory), `oracle` (optimal-path analysis of a network file), `evolve`
//! (evolution run only), `preset` (emit a ready-made config), `plot` (render
//! an SVG from a run bundle). Exit codes: 0 success, 1 validation, 2 runtime,
//! 3 I/O.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use tis_core::agent::Agent;
use tis_core::metrics::{compute_report, ReportInputs};
use tis_core::network::{from_text, GoalNetwork};
use tis_core::oracle::{
    max_info_path, max_info_walk_bounded, min_info_complete_path, optimal_planning_path,
    OracleResult,
};
use tis_core::policy::{run_policy, PolicyKind, Trajectory};

use tis_lab::config::{ExperimentConfig, PolicyVariant};
use tis_lab::error::LabError;
use tis_lab::presets::preset;
use tis_lab::runner::{run_experiment, write_outputs, RunBundle};
use tis_lab::svg::{emit_plot, PlotKind};

#[derive(Parser)]
#[command(
    name = "tis-lab",
    version,
    about = "Goal-network simulation laboratory: agents, policies, indices, evolution"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Override the config's root seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Restrict file outputs to one format (csv or json).
        #[arg(long)]
        format: Option<String>,
        /// Replace the config's policy list with a single policy
        /// (greedy, planner, random_walk, oracle_follower).
        #[arg(long)]
        policy: Option<String>,
        /// Planner lookahead depth (with --policy planner).
        #[arg(long)]
        horizon: Option<usize>,
        /// Planner replanning period (with --policy planner).
        #[arg(long)]
        replan: Option<usize>,
    },
    /// Score a stored trajectory against a network file.
    ///
    /// The solve-relative index needs a reference run along the optimal
    /// planning path; it is computed noise-free at the given --ability.
    Metrics {
        #[arg(long)]
        network: PathBuf,
        /// A trajectory JSON file: either one trajectory object or the
        /// `trajectories.json` a simulation wrote.
        #[arg(long)]
        trajectory: PathBuf,
        /// Which entry to score when the file holds several.
        #[arg(long, default_value_t = 0)]
        index: usize,
        /// Expected ability (bits per subgoal) used for difficulty and the
        /// noise-free reference run.
        #[arg(long)]
        ability: f64,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[arg(long, default_value_t = 0.5)]
        beta: f64,
        /// Population benchmark ability for the benchmark-relative index.
        #[arg(long)]
        q_bench: Option<f64>,
    },
    /// Print the three optimal-path analyses of a network file as JSON.
    Oracle {
        #[arg(long)]
        network: PathBuf,
    },
    /// Run only the evolution section of a config.
    Evolve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a ready-made experiment config.
    Preset {
        /// One of: fig1b-timecourses, fig4-achievement-vs-complexity,
        /// fig5-trajectories, proxy-sweep, evolution-run.
        name: String,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render one SVG plot from a stored run bundle.
    Plot {
        #[arg(long)]
        bundle: PathBuf,
        /// fig1b, fig4, fig5, proxy, or evolution.
        #[arg(long)]
        kind: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn read_file(path: &Path) -> Result<String, LabError> {
    fs::read_to_string(path).map_err(LabError::io(path.display().to_string()))
}

fn load_config(
    path: &Path,
    seed: Option<u64>,
    out: Option<&Path>,
) -> Result<ExperimentConfig, LabError> {
    let text = read_file(path)?;
    let mut config = ExperimentConfig::from_toml(&text).map_err(LabError::Config)?;
    if let Some(seed) = seed {
        config.seed = seed;
    }
    if let Some(out) = out {
        config.output.directory = out.display().to_string();
    }
    config.validate().map_err(LabError::Config)?;
    Ok(config)
}

fn load_network(path: &Path) -> Result<GoalNetwork, LabError> {
    let net = from_text(&read_file(path)?)
        .map_err(|e| LabError::Validation(format!("{}: {e}", path.display())))?;
    let report = net.validate();
    if !report.is_ok() {
        return Err(LabError::Validation(format!(
            "{} is invalid: {report}",
            path.display()
        )));
    }
    Ok(net)
}

fn simulate(
    config_path: &Path,
    seed: Option<u64>,
    out: Option<PathBuf>,
    format: Option<String>,
    policy: Option<String>,
    horizon: Option<usize>,
    replan: Option<usize>,
) -> Result<(), LabError> {
    let mut config = load_config(config_path, seed, out.as_deref())?;
    if let Some(format) = format {
        if format != "csv" && format != "json" {
            return Err(LabError::Validation(format!(
                "unknown --format `{format}` (valid: csv, json)"
            )));
        }
        config.output.formats = vec![format];
    }
    if let Some(kind) = policy {
        config.policy.variants = vec![PolicyVariant {
            kind,
            horizon,
            replan,
        }];
        config.validate().map_err(LabError::Config)?;
    }
    let bundle = run_experiment(&config)?;
    let out_dir = PathBuf::from(&config.output.directory);
    let written = write_outputs(&bundle, &out_dir)?;
    println!(
        "wrote {} file(s) under {} ({} runs)",
        written.len(),
        out_dir.display(),
        bundle.runs.len()
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn metrics(
    network: &Path,
    trajectory: &Path,
    index: usize,
    ability: f64,
    alpha: f64,
    beta: f64,
    q_bench: Option<f64>,
) -> Result<(), LabError> {
    if !(ability > 0.0) {
        return Err(LabError::Validation("--ability must be positive".into()));
    }
    let net = load_network(network)?;
    let text = read_file(trajectory)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| LabError::Validation(format!("{}: {e}", trajectory.display())))?;
    let traj: Trajectory = match &value {
        serde_json::Value::Array(items) => {
            let item = items.get(index).ok_or_else(|| {
                LabError::Validation(format!(
                    "--index {index} is out of range ({} entries)",
                    items.len()
                ))
            })?;
            let inner = item.get("trajectory").unwrap_or(item);
            serde_json::from_value(inner.clone())
                .map_err(|e| LabError::Validation(format!("trajectory entry {index}: {e}")))?
        }
        _ => serde_json::from_value(value.clone())
            .map_err(|e| LabError::Validation(format!("{}: {e}", trajectory.display())))?,
    };
    let optimal = optimal_planning_path(&net).map_err(LabError::runtime)?;
    let complexity_c = min_info_complete_path(&net)
        .map_err(LabError::runtime)?
        .total_info;
    let reference = run_policy(
        &net.without_threshold(),
        &Agent::solver(ability),
        &PolicyKind::OracleFollower,
        0,
        net.node_count().max(1),
    )
    .map_err(LabError::runtime)?;
    let segment_oracles: Vec<OracleResult> = traj
        .segment_spans()
        .iter()
        .map(|&(lo, hi)| {
            max_info_walk_bounded(&net, traj.visited[lo].node, hi - lo).map_err(LabError::runtime)
        })
        .collect::<Result<_, _>>()?;
    let report = compute_report(&ReportInputs {
        trajectory: &traj,
        reference_trajectory: &reference,
        segment_oracles: &segment_oracles,
        optimal_planning: &optimal,
        complexity_c,
        ability_q: ability,
        alpha,
        beta,
        benchmark_q: q_bench,
    })
    .map_err(LabError::runtime)?;
    let json = serde_json::to_string_pretty(&report)
        .map_err(|e| LabError::Runtime(format!("report serialization: {e}")))?;
    println!("{json}");
    Ok(())
}

fn oracle(network: &Path) -> Result<(), LabError> {
    let net = load_network(network)?;
    let max_info = max_info_path(&net).map_err(LabError::runtime)?;
    let min_complete = min_info_complete_path(&net).map_err(LabError::runtime)?;
    let optimal = optimal_planning_path(&net).map_err(LabError::runtime)?;
    let json = serde_json::json!({
        "max_info": max_info,
        "min_info_complete": min_complete,
        "optimal_planning": optimal,
    });
    println!(
        "{}",
        serde_json::to_string_pretty(&json)
            .map_err(|e| LabError::Runtime(format!("oracle serialization: {e}")))?
    );
    Ok(())
}

fn evolve(config_path: &Path, seed: Option<u64>, out: Option<PathBuf>) -> Result<(), LabError> {
    let mut config = load_config(config_path, seed, out.as_deref())?;
    if config.evolution.is_none() {
        return Err(LabError::Validation(
            "config has no [evolution] section".into(),
        ));
    }
    // evolution only: drop policy runs and the proxy sweep
    config.policy.variants.clear();
    config.proxy = None;
    config.output.plots.retain(|p| p == "evolution");
    let bundle = run_experiment(&config)?;
    let out_dir = PathBuf::from(&config.output.directory);
    let written = write_outputs(&bundle, &out_dir)?;
    let trace = &bundle.evolution.as_ref().expect("evolution ran").trace;
    let last = trace.records.last().expect("at least one generation");
    println!(
        "wrote {} file(s) under {}; {} generations, final mean trait {:.4}, benchmark {:.4}",
        written.len(),
        out_dir.display(),
        trace.records.len(),
        last.mean_trait[0],
        last.benchmark_q
    );
    Ok(())
}

fn emit_preset(name: &str, out: Option<PathBuf>) -> Result<(), LabError> {
    let config = preset(name)?;
    let text = config.to_toml();
    match out {
        Some(path) => {
            fs::write(&path, &text).map_err(LabError::io(path.display().to_string()))?;
            println!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn plot(bundle_path: &Path, kind: &str, out: &Path) -> Result<(), LabError> {
    let kind = PlotKind::parse(kind).map_err(LabError::Plot)?;
    let text = read_file(bundle_path)?;
    let bundle: RunBundle = serde_json::from_str(&text)
        .map_err(|e| LabError::Validation(format!("{}: {e}", bundle_path.display())))?;
    let svg = emit_plot(&bundle, kind)?;
    fs::write(out, svg).map_err(LabError::io(out.display().to_string()))?;
    println!("wrote {}", out.display());
    Ok(())
}

fn run(cli: Cli) -> Result<(), LabError> {
    match cli.command {
        Command::Simulate {
            config,
            seed,
            out,
            format,
            policy,
            horizon,
            replan,
        } => simulate(&config, seed, out, format, policy, horizon, replan),
        Command::Metrics {
            network,
            trajectory,
            index,
            ability,
            alpha,
            beta,
            q_bench,
        } => metrics(&network, &trajectory, index, ability, alpha, beta, q_bench),
        Command::Oracle { network } => oracle(&network),
        Command::Evolve { config, seed, out } => evolve(&config, seed, out),
        Command::Preset { name, out } => emit_preset(&name, out),
        Command::Plot { bundle, kind, out } => plot(&bundle, &kind, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
