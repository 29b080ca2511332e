//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Every tolerance and threshold is pinned here, in code. Run with
//! `cargo test -p tis-lab --test acceptance -- --nocapture` to see the lines.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::Rng;

use tis_core::agent::Agent;
use tis_core::metrics::{
    difficulty, intelligence, intelligence_benchmarked, intelligence_difficulty,
    planning_index_hier_terms, solving_index,
};
use tis_core::network::{
    generate_network, GeneratorParams, GoalNetwork, NodeId, PathSpec, SubgoalNode,
    COMPLETENESS_TOL,
};
use tis_core::oracle::{
    enumerate_all_paths, max_info_path, max_info_walk_bounded, min_info_complete_path,
    optimal_planning_path, OracleResult,
};
use tis_core::policy::{run_policy, PolicyKind, StopReason};
use tis_core::proxy::{break_even_strength, proxy_intelligence, BreakEven, ProxyModel};
use tis_core::rng::{substream, substream_seed};

use tis_lab::presets::preset;
use tis_lab::runner::{run_experiment, write_outputs};

const IDENTITY_TOL: f64 = 1e-12;

fn pass(criterion: &str, detail: String) {
    println!("acceptance {criterion}: PASS — {detail}");
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn sample_sd(values: &[f64]) -> f64 {
    let m = mean(values);
    (values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (values.len() - 1) as f64).sqrt()
}

/// Percentile bootstrap confidence interval for the mean.
fn bootstrap_ci(values: &[f64], resamples: usize, seed: u64, level: f64) -> (f64, f64) {
    let mut rng = substream(seed, &["bootstrap"], &[]);
    let mut means = Vec::with_capacity(resamples);
    for _ in 0..resamples {
        let total: f64 = (0..values.len())
            .map(|_| values[rng.gen_range(0..values.len())])
            .sum();
        means.push(total / values.len() as f64);
    }
    means.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let tail = (1.0 - level) / 2.0;
    let lo = ((resamples as f64) * tail) as usize;
    let hi = ((resamples as f64) * (1.0 - tail)) as usize;
    (means[lo], means[hi.min(resamples - 1)])
}

// ---------------------------------------------------------------------------
// 1. Reduction identities
// ---------------------------------------------------------------------------

#[test]
fn criterion_1_reduction_identities() {
    let start = Instant::now();

    // optimal-path reduction: full relevance and chosen = optimal path makes
    // the intelligence index equal the mean realized fraction of the optimal
    // sequence
    let mut worst_a = 0.0f64;
    for case in 0..1000u64 {
        let params = GeneratorParams {
            node_count: 4 + (case % 7) as usize,
            decoy_fraction: 0.3,
            relevance_budget: 1.0,
            ..GeneratorParams::default()
        };
        let net = generate_network(&params, case).unwrap();
        let optimal = optimal_planning_path(&net).unwrap();
        let mut agent = Agent::solver(1.0 + (case % 13) as f64 * 0.37);
        agent.noise_sigma = 0.5;
        let traj = run_policy(
            &net,
            &agent,
            &PolicyKind::OracleFollower,
            case,
            net.node_count(),
        )
        .unwrap();
        let alpha = (case % 11) as f64 / 10.0;
        let i = intelligence(&traj, &optimal, alpha, 1.0 - alpha).unwrap();
        let direct = solving_index(&traj).unwrap();
        worst_a = worst_a.max((i - direct).abs());
    }
    assert!(
        worst_a < IDENTITY_TOL,
        "optimal-path reduction off by {worst_a}"
    );

    // benchmark identity: the benchmark-relative index equals the
    // difficulty-scaled one when the benchmark is the agent's own ability
    let mut rng = substream(101, &["identities"], &[]);
    let mut worst_b = 0.0f64;
    let mut worst_c = 0.0f64;
    for _ in 0..1000 {
        let c = rng.gen_range(0.5..60.0);
        let q = rng.gen_range(0.4..12.0);
        let i = rng.gen_range(-1.0..1.5);
        let own = intelligence_difficulty(difficulty(c, q).unwrap(), i, q);
        let bench = intelligence_benchmarked(c, i, q);
        worst_b = worst_b.max((own - bench).abs());

        // inert-proxy identity: zero couplings reduce the adjusted index to
        // the difficulty-scaled one at any strength
        let proxy = ProxyModel {
            strength_p: rng.gen_range(0.0..8.0),
            h_coeff: 0.0,
            boost_gamma: 0.0,
        };
        let adjusted = proxy_intelligence(c, q, i, &proxy).unwrap();
        worst_c = worst_c.max((adjusted - own).abs());
    }
    assert!(worst_b < IDENTITY_TOL, "benchmark identity off by {worst_b}");
    assert!(worst_c < IDENTITY_TOL, "inert-proxy identity off by {worst_c}");

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    pass(
        "1 (reduction identities)",
        format!(
            "worst deviations {worst_a:.2e} / {worst_b:.2e} / {worst_c:.2e} over 1000 cases each, {elapsed:?}"
        ),
    );
}

// ---------------------------------------------------------------------------
// 2. Oracle equivalence
// ---------------------------------------------------------------------------

fn random_dag(seed: u64) -> GoalNetwork {
    let mut rng = substream(seed, &["acceptance-dag"], &[]);
    let n = rng.gen_range(2..=12usize);
    let edge_p = rng.gen_range(0.25..0.6);
    let nodes = (0..n)
        .map(|i| SubgoalNode {
            id: NodeId(i),
            u_hat: rng.gen_range(0.5..9.0),
            r: match rng.gen_range(0..4u8) {
                0 => 0.0,
                1 | 2 => 1.0,
                _ => rng.gen_range(0.0..1.5),
            },
        })
        .collect();
    let mut edges = Vec::new();
    for from in 0..n {
        for to in (from + 1)..n {
            if (to == from + 1 && rng.gen_bool(0.85)) || rng.gen_bool(edge_p) {
                edges.push((NodeId(from), NodeId(to)));
            }
        }
    }
    let mut terminals: BTreeSet<NodeId> = (0..n)
        .filter(|&v| edges.iter().all(|&(from, _)| from.0 != v))
        .map(NodeId)
        .collect();
    for v in 0..n {
        if rng.gen_bool(0.15) {
            terminals.insert(NodeId(v));
        }
    }
    GoalNetwork::new(nodes, edges, NodeId(0), terminals, None, Vec::new())
}

fn brute_best<'a, F>(paths: &'a [PathSpec], objective: F, minimize: bool) -> Option<&'a PathSpec>
where
    F: Fn(&PathSpec) -> f64,
{
    let mut best: Option<(&PathSpec, f64)> = None;
    for path in paths {
        let score = objective(path);
        let replace = match best {
            None => true,
            Some((bp, bs)) => {
                if score != bs {
                    if minimize {
                        score < bs
                    } else {
                        score > bs
                    }
                } else if path.nodes.len() != bp.nodes.len() {
                    path.nodes.len() < bp.nodes.len()
                } else {
                    path.nodes < bp.nodes
                }
            }
        };
        if replace {
            best = Some((path, score));
        }
    }
    best.map(|(p, _)| p)
}

#[test]
fn criterion_2_oracle_equivalence() {
    let start = Instant::now();
    let mut mismatches = 0usize;
    let mut complete_cases = 0usize;
    for seed in 0..1000u64 {
        // half structured generator output, half arbitrary DAGs
        let net = if seed % 2 == 0 {
            let params = GeneratorParams {
                node_count: 2 + (seed % 11) as usize,
                branching: 1 + (seed % 3) as usize,
                decoy_fraction: (seed % 7) as f64 / 10.0,
                relevance_budget: 0.4 + (seed % 4) as f64 * 0.2,
                ..GeneratorParams::default()
            };
            generate_network(&params, seed).unwrap()
        } else {
            random_dag(seed)
        };
        let paths = enumerate_all_paths(&net, 250_000).unwrap();
        let total = |p: &PathSpec| -> f64 { p.nodes.iter().map(|&id| net.node(id).u_hat).sum() };
        let complete = |p: &PathSpec| -> bool {
            let sum_r: f64 = p.nodes.iter().map(|&id| net.node(id).r).sum();
            (sum_r - p.nodes.len() as f64).abs()
                <= COMPLETENESS_TOL * (p.nodes.len() as f64).max(1.0)
        };

        let want_max = brute_best(&paths, total, false);
        match (max_info_path(&net), want_max) {
            (Ok(got), Some(want)) if got.path.nodes == want.nodes => {}
            (Err(_), None) => {}
            other => {
                mismatches += 1;
                eprintln!("seed {seed}: max_info mismatch {other:?}");
                continue;
            }
        }

        let complete_paths: Vec<PathSpec> = paths.iter().filter(|p| complete(p)).cloned().collect();
        if !complete_paths.is_empty() {
            complete_cases += 1;
        }
        let want_min = brute_best(&complete_paths, total, true);
        match (min_info_complete_path(&net), want_min) {
            (Ok(got), Some(want)) if got.path.nodes == want.nodes => {}
            (Err(_), None) => {}
            other => {
                mismatches += 1;
                eprintln!("seed {seed}: min_info_complete mismatch {other:?}");
                continue;
            }
        }

        let want_opt = brute_best(
            &complete_paths,
            |p| total(p) / p.nodes.len() as f64,
            true,
        );
        match (optimal_planning_path(&net), want_opt) {
            (Ok(got), Some(want)) if got.path.nodes == want.nodes => {}
            (Err(_), None) => {}
            other => {
                mismatches += 1;
                eprintln!("seed {seed}: optimal_planning mismatch {other:?}");
            }
        }
    }
    let elapsed = start.elapsed();
    assert_eq!(mismatches, 0);
    assert!(elapsed.as_secs() < 30, "took {elapsed:?}");
    pass(
        "2 (oracle equivalence)",
        format!(
            "1000 networks (≤ 12 nodes, {complete_cases} with complete paths), 0 mismatches, {elapsed:?}"
        ),
    );
}

// ---------------------------------------------------------------------------
// 3. Index bounds on fuzzed noise-free runs
// ---------------------------------------------------------------------------

#[test]
fn criterion_3_index_bounds() {
    let start = Instant::now();
    let runs = 10_000u64;
    let mut clamped = 0usize;
    let mut max_raw: f64 = 0.0;
    let mut max_term: f64 = 0.0;
    for case in 0..runs {
        let mut rng = substream(case, &["bounds"], &[]);
        let params = GeneratorParams {
            node_count: rng.gen_range(4..=24usize),
            branching: rng.gen_range(1..=4usize),
            u_hat_min: rng.gen_range(0.5..2.0),
            u_hat_max: rng.gen_range(2.5..9.0),
            relevance_budget: rng.gen_range(0.2..1.0),
            decoy_fraction: rng.gen_range(0.0..0.6),
            ..GeneratorParams::default()
        };
        let net = generate_network(&params, case).unwrap();
        let mut agent = Agent::solver(rng.gen_range(0.5..8.0));
        agent.env_penalty = rng.gen_range(0.0..0.5);
        agent.surprisal_decay_kappa = 0.0;
        let kind = match case % 3 {
            0 => PolicyKind::GreedySolver,
            1 => PolicyKind::RandomWalk,
            _ => PolicyKind::HorizonPlanner {
                horizon: rng.gen_range(1..=4usize),
                replan_period: rng.gen_range(1..=3usize),
            },
        };
        let traj = run_policy(&net, &agent, &kind, case, 128).unwrap();
        let optimal = optimal_planning_path(&net).unwrap();
        let complexity = min_info_complete_path(&net).unwrap().total_info;
        let q = agent.expected_ability(net.feature_vector()).unwrap();

        let u = solving_index(&traj).unwrap();
        assert!((0.0..=1.0).contains(&u), "case {case}: solving index {u}");

        let global = tis_core::metrics::planning_index_global(&traj, &optimal).unwrap();
        assert!((0.0..=1.0).contains(&global.value), "case {case}");
        max_raw = max_raw.max(global.raw);
        if global.clamped {
            clamped += 1;
        }

        let segment_oracles: Vec<OracleResult> = traj
            .segment_spans()
            .iter()
            .map(|&(lo, hi)| {
                max_info_walk_bounded(&net, traj.visited[lo].node, hi - lo).unwrap()
            })
            .collect();
        for term in planning_index_hier_terms(&traj, &segment_oracles).unwrap() {
            assert!(
                term <= 1.0 + 1e-12,
                "case {case}: segment term {term} above 1"
            );
            max_term = max_term.max(term);
        }

        let d = difficulty(complexity, q).unwrap();
        assert!(d > 0.0, "case {case}: difficulty {d}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");
    pass(
        "3 (index bounds)",
        format!(
            "{runs} noise-free runs: solving ∈ [0,1], segment terms ≤ 1 (max {max_term:.12}), \
difficulty > 0; one-shot planning clamp rate {:.2}% (max raw ratio {max_raw:.3}), {elapsed:?}",
            100.0 * clamped as f64 / runs as f64
        ),
    );
}

// ---------------------------------------------------------------------------
// 4. Complexity-sweep ordering
// ---------------------------------------------------------------------------

#[test]
fn criterion_4_complexity_sweep_ordering() {
    let start = Instant::now();
    let config = preset("fig4-achievement-vs-complexity").unwrap();
    let bundle = run_experiment(&config).unwrap();
    let sizes = &config.network.node_counts;
    let low = *sizes.first().unwrap();
    let high = *sizes.last().unwrap();
    let paired_diffs = |size: usize| -> Vec<f64> {
        (0..config.network.replicates)
            .map(|rep| {
                let find = |policy_prefix: &str| {
                    bundle
                        .runs
                        .iter()
                        .find(|r| {
                            r.size == size && r.replicate == rep && r.policy.starts_with(policy_prefix)
                        })
                        .unwrap()
                        .report
                        .intelligence_i
                };
                find("planner") - find("greedy")
            })
            .collect()
    };

    let top = paired_diffs(high);
    let (top_lo, top_hi) = bootstrap_ci(&top, 2000, 4, 0.95);
    assert!(
        top_lo > 0.0,
        "top tier (size {high}): planner margin CI [{top_lo:.4}, {top_hi:.4}] does not exclude 0"
    );

    let bottom = paired_diffs(low);
    let (bot_lo, bot_hi) = bootstrap_ci(&bottom, 2000, 5, 0.95);
    assert!(
        bot_lo <= 0.0 && bot_hi >= 0.0,
        "bottom tier (size {low}): CI [{bot_lo:.4}, {bot_hi:.4}] excludes 0"
    );

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 300, "took {elapsed:?}");
    pass(
        "4 (complexity-sweep ordering)",
        format!(
            "size {high}: planner−greedy mean {:.4}, 95% CI [{top_lo:.4}, {top_hi:.4}] > 0; \
size {low}: mean {:.4}, CI [{bot_lo:.4}, {bot_hi:.4}] ∋ 0; 200 seeds/tier, {elapsed:?}",
            mean(&top),
            mean(&bottom)
        ),
    );
}

// ---------------------------------------------------------------------------
// 5. Transient information loss before threshold resolution
// ---------------------------------------------------------------------------

#[test]
fn criterion_5_transient_loss_then_threshold() {
    let start = Instant::now();
    let params = GeneratorParams {
        node_count: 10,
        branching: 1,
        u_hat_min: 2.0,
        u_hat_max: 6.0,
        relevance_budget: 1.0,
        decoy_fraction: 0.0,
        threshold_fraction: Some(0.3),
        ..GeneratorParams::default()
    };
    let mut agent = Agent::solver(3.0);
    agent.noise_sigma = 2.2;
    agent.env_penalty = 0.1;
    let runs = 10_000u64;
    let mut qualifying = 0usize;
    for seed in 0..runs {
        let net = generate_network(&params, substream_seed(seed, &["loss-net"], &[])).unwrap();
        let traj = run_policy(&net, &agent, &PolicyKind::GreedySolver, seed, 64).unwrap();
        if traj.stop_reason != StopReason::ThresholdMet {
            continue;
        }
        // a loss step strictly before the resolving visit
        let loss_before_resolution = traj.visited[..traj.visited.len() - 1]
            .iter()
            .any(|v| v.u_realized < 0.0);
        if loss_before_resolution {
            qualifying += 1;
        }
    }
    let rate = qualifying as f64 / runs as f64;
    let elapsed = start.elapsed();
    assert!(
        rate >= 0.01,
        "only {:.2}% of trajectories lose information and still resolve",
        100.0 * rate
    );
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");
    pass(
        "5 (transient loss then threshold)",
        format!(
            "{:.1}% of {runs} noisy trajectories contain a negative gain step and still stop \
at the threshold (≥ 1% required), {elapsed:?}",
            100.0 * rate
        ),
    );
}

// ---------------------------------------------------------------------------
// 6. Proxy break-even
// ---------------------------------------------------------------------------

#[test]
fn criterion_6_proxy_break_even() {
    let start = Instant::now();
    let c = 12.0;
    let q = 4.0;
    let i_raw = 0.55;
    let plain = intelligence_difficulty(difficulty(c, q).unwrap(), i_raw, q);
    let sweep_step = 0.1;
    let delta_at = |p: f64, h: f64, gamma: f64| -> f64 {
        let adjusted = proxy_intelligence(
            c,
            q,
            i_raw,
            &ProxyModel {
                strength_p: p,
                h_coeff: h,
                boost_gamma: gamma,
            },
        )
        .unwrap();
        adjusted - plain
    };

    // boost dominates (gamma·q > h) and reduction dominates (gamma·q < h):
    // the sign is fixed over positive strength, so the numeric sign change
    // must land at the analytic crossing within one sweep step
    for (h, gamma) in [(0.6, 0.25), (1.4, 0.25)] {
        let crossing = match break_even_strength(q, h, gamma) {
            BreakEven::At(p) => p,
            BreakEven::Identical => panic!("couplings should not cancel"),
        };
        let mut previous_p = 0.0;
        let mut previous = delta_at(0.0, h, gamma);
        assert!(previous.abs() <= IDENTITY_TOL, "delta at zero strength");
        let mut bracket = None;
        let mut p = sweep_step;
        while p <= 5.0 + 1e-9 {
            let current = delta_at(p, h, gamma);
            if (previous <= 0.0 && current > 0.0) || (previous >= 0.0 && current < 0.0) {
                bracket = Some((previous_p, p));
                break;
            }
            previous_p = p;
            previous = current;
            p += sweep_step;
        }
        let (lo, hi) = bracket.expect("sign change somewhere in the sweep");
        assert!(
            crossing >= lo - 1e-12 && crossing <= hi + 1e-12,
            "analytic crossing {crossing} outside the numeric bracket [{lo}, {hi}]"
        );
        assert!(hi - crossing <= sweep_step + 1e-12);
    }

    // exact cancellation: identical indices along the whole sweep
    let gamma = 1.4 / q;
    assert_eq!(break_even_strength(q, 1.4, gamma), BreakEven::Identical);
    let mut p = 0.0;
    while p <= 5.0 + 1e-9 {
        assert!(delta_at(p, 1.4, gamma).abs() <= IDENTITY_TOL, "at P = {p}");
        p += sweep_step;
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    pass(
        "6 (proxy break-even)",
        format!(
            "sign change lands at the analytic crossing (strength 0) within one sweep step of \
{sweep_step}; cancelling couplings stay within {IDENTITY_TOL:.0e}; {elapsed:?}"
        ),
    );
}

// ---------------------------------------------------------------------------
// 7. Evolution: neutrality, response, diminishing returns
// ---------------------------------------------------------------------------

fn evolution_config(p: f64, seed: u64) -> tis_core::evolution::EvolutionConfig {
    tis_core::evolution::EvolutionConfig {
        population_size: 200,
        generations: 200,
        selection_weight_p: p,
        mutation_sigma: 0.02,
        init_trait: vec![0.8],
        init_spread: 0.2,
        replicates: 2,
        map_planning_horizon: false,
        sampler: GeneratorParams {
            node_count: 8,
            branching: 3,
            u_hat_min: 1.0,
            u_hat_max: 8.0,
            relevance_budget: 1.0,
            decoy_fraction: 0.25,
            ..GeneratorParams::default()
        },
        agent_template: {
            let mut a = Agent::solver(1.0);
            a.noise_sigma = 0.15;
            a
        },
        step_budget: 32,
        alpha: 0.5,
        beta: 0.5,
        seed,
    }
}

#[test]
fn criterion_7_evolution_neutrality_and_response() {
    let start = Instant::now();

    // neutrality: with selection off, founder-mean drift over 100 seeds is
    // statistically indistinguishable from zero (two-sided t, 1%)
    let drifts: Vec<f64> = (0..100u64)
        .map(|seed| {
            let mut config = evolution_config(0.0, seed);
            config.population_size = 32;
            config.generations = 60;
            config.replicates = 1;
            config.mutation_sigma = 0.05;
            config.sampler.node_count = 6;
            let trace = tis_core::evolution::run_evolution(&config).unwrap();
            trace.records.last().unwrap().mean_trait[0] - trace.records[0].mean_trait[0]
        })
        .collect();
    let t = mean(&drifts) / (sample_sd(&drifts) / (drifts.len() as f64).sqrt());
    assert!(drifts.iter().any(|d| *d != 0.0), "mutation should act");
    // two-sided 1% critical value for 99 degrees of freedom
    assert!(t.abs() < 2.626, "neutral drift t = {t:.3}");

    // response: with selection on, the mean trait rises generation over
    // generation until it plateaus, and the benchmarked index it is scored by
    // peaks and then sinks (the 1/Q̄² depression)
    let seeds = 20u64;
    let mut increasing_pairs = 0usize;
    let mut counted_pairs = 0usize;
    let mut rising_seeds = 0usize;
    let mut peak_quarter_total = 0.0;
    let mut final_quarter_total = 0.0;
    for seed in 0..seeds {
        let config = evolution_config(1.0, 1000 + seed);
        let trace = tis_core::evolution::run_evolution(&config).unwrap();
        let xs: Vec<f64> = trace.records.iter().map(|r| r.mean_trait[0]).collect();
        let is: Vec<f64> = trace.records.iter().map(|r| r.mean_i_hat).collect();
        let first = xs[0];
        let last = *xs.last().unwrap();
        if last > first {
            rising_seeds += 1;
        }
        // pre-plateau region: up to 80% of the total gain
        let cutoff_value = first + 0.8 * (last - first);
        let cutoff = xs
            .iter()
            .position(|&x| x >= cutoff_value)
            .unwrap_or(xs.len() - 1)
            .max(1);
        for pair in xs[..=cutoff].windows(2) {
            counted_pairs += 1;
            if pair[1] > pair[0] {
                increasing_pairs += 1;
            }
        }
        let quarter = is.len() / 4;
        let peak_quarter_start = {
            let peak = is
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .unwrap()
                .0;
            peak.min(is.len() - quarter)
        };
        peak_quarter_total += mean(&is[peak_quarter_start..peak_quarter_start + quarter]);
        final_quarter_total += mean(&is[is.len() - quarter..]);
    }
    assert_eq!(rising_seeds as u64, seeds, "mean trait must rise under selection");
    let strict_fraction = increasing_pairs as f64 / counted_pairs as f64;
    assert!(
        strict_fraction >= 0.95,
        "only {:.1}% of pre-plateau generation pairs strictly increase",
        100.0 * strict_fraction
    );
    let peak_i = peak_quarter_total / seeds as f64;
    let final_i = final_quarter_total / seeds as f64;
    assert!(
        final_i < peak_i,
        "benchmarked intelligence should sink after its peak (peak {peak_i:.3}, final {final_i:.3})"
    );

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 300, "took {elapsed:?}");
    pass(
        "7 (evolution neutrality and response)",
        format!(
            "neutral drift t = {t:.2} (|t| < 2.626, 100 seeds); {:.1}% strictly increasing \
pre-plateau pairs over {seeds} selection runs; benchmarked index sinks from {peak_i:.3} to \
{final_i:.3} while the trait rises; {elapsed:?}",
            100.0 * strict_fraction
        ),
    );
}

// ---------------------------------------------------------------------------
// 8. Determinism of preset outputs
// ---------------------------------------------------------------------------

#[test]
fn criterion_8_preset_determinism() {
    let start = Instant::now();
    let mut compared_files = 0usize;
    for name in tis_lab::presets::PRESET_NAMES {
        let config = preset(name).unwrap();
        let bundle_a = run_experiment(&config).unwrap();
        let bundle_b = run_experiment(&config).unwrap();
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        let written_a = write_outputs(&bundle_a, dir_a.path()).unwrap();
        let written_b = write_outputs(&bundle_b, dir_b.path()).unwrap();
        assert_eq!(written_a.len(), written_b.len(), "{name}");
        for (a, b) in written_a.iter().zip(&written_b) {
            let name_a = a.strip_prefix(dir_a.path()).unwrap();
            let name_b = b.strip_prefix(dir_b.path()).unwrap();
            assert_eq!(name_a, name_b, "{name}");
            let ext = a.extension().and_then(|e| e.to_str()).unwrap_or("");
            // the JSON bundle carries a timestamp; the criterion pins CSV and SVG
            if ext == "csv" || ext == "svg" || ext == "tisnet" {
                let bytes_a = std::fs::read(a).unwrap();
                let bytes_b = std::fs::read(b).unwrap();
                assert_eq!(bytes_a, bytes_b, "{name}: {} differs", name_a.display());
                compared_files += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    pass(
        "8 (preset determinism)",
        format!(
            "all 5 presets re-run byte-identically across {compared_files} CSV/SVG/tisnet files, {elapsed:?}"
        ),
    );
}
