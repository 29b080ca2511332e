//! The achievement indices computed from a trajectory.
//!
//! Everything here is a pure function of visited-node value sequences and
//! oracle references. The solving index is the mean fraction of potential
//! information actually realized; its relevance-weighted variant also demands
//! that the visited nodes matter for goal completion. Planning indices
//! compare the information content of the chosen walk against optimal
//! references, difficulty scales intrinsic complexity by ability, and the
//! intelligence indices combine them.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::network::{NodeId, RELEVANCE_TOL, COMPLETENESS_TOL};
use crate::oracle::OracleResult;
use crate::policy::{Trajectory, Visit};

/// Absolute tolerance for the exact arithmetic identities between indices.
pub const IDENTITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("trajectory has no visited nodes")]
    EmptyTrajectory,
    #[error("visited node {node} has u_hat = 0, the solving ratio is undefined")]
    ZeroPotential { node: NodeId },
    #[error("relevance condition violated: Σ r / N = {mean} exceeds 1")]
    RelevanceCondition { mean: f64 },
    #[error("weights must satisfy alpha + beta = 1 with both ≥ 0 (alpha = {alpha}, beta = {beta})")]
    WeightSum { alpha: f64, beta: f64 },
    #[error("visited node {node} has non-positive elapsed time")]
    NonPositiveTime { node: NodeId },
    #[error("reference solving index is zero, the solve-relative ratio is undefined")]
    ZeroReferenceSolving,
    #[error("expected {expected} segment oracles, got {got}")]
    SegmentOracleCount { expected: usize, got: usize },
    #[error("segment {segment} oracle carries no information")]
    ZeroSegmentInfo { segment: usize },
    #[error("optimal planning reference carries no information")]
    ZeroOptimalInfo,
    #[error("ability must be positive, got {q}")]
    NonPositiveAbility { q: f64 },
    #[error("reference trajectory is not a complete optimal-path run (Σ r / G = {mean})")]
    IncompleteReference { mean: f64 },
}

/// Relevance-weighted information actually gained: `Σ r·u` over visits.
pub fn visits_complexity(visits: &[Visit]) -> f64 {
    visits.iter().map(|v| v.r * v.u_realized).sum()
}

/// Realized goal complexity `Σ r·u` of the trajectory, in bits. Not
/// normalized; zero for an empty trajectory.
pub fn realized_complexity(traj: &Trajectory) -> f64 {
    visits_complexity(&traj.visited)
}

fn check_non_empty(traj: &Trajectory) -> Result<(), MetricsError> {
    if traj.visited.is_empty() {
        Err(MetricsError::EmptyTrajectory)
    } else {
        Ok(())
    }
}

/// Solving index: the mean realized fraction `u / u_hat` over visited nodes.
/// Approaches one as every visit fully resolves its node; negative realized
/// gains pull it below zero.
pub fn solving_index(traj: &Trajectory) -> Result<f64, MetricsError> {
    check_non_empty(traj)?;
    let mut sum = 0.0;
    for visit in &traj.visited {
        if visit.u_hat == 0.0 {
            return Err(MetricsError::ZeroPotential { node: visit.node });
        }
        sum += visit.u_realized / visit.u_hat;
    }
    Ok(sum / traj.visited.len() as f64)
}

/// Relevance-weighted solving index: the mean `r·u / u_hat`. Reaches one only
/// when every node is fully resolved and the walk carries a full relevance
/// budget.
pub fn solving_index_weighted(traj: &Trajectory) -> Result<f64, MetricsError> {
    check_non_empty(traj)?;
    let n = traj.visited.len() as f64;
    let mean_r = traj.visited.iter().map(|v| v.r).sum::<f64>() / n;
    if mean_r > 1.0 + RELEVANCE_TOL {
        return Err(MetricsError::RelevanceCondition { mean: mean_r });
    }
    let mut sum = 0.0;
    for visit in &traj.visited {
        if visit.u_hat == 0.0 {
            return Err(MetricsError::ZeroPotential { node: visit.node });
        }
        sum += visit.r * visit.u_realized / visit.u_hat;
    }
    Ok(sum / n)
}

/// Per-segment terms of the hierarchical planning index: the potential
/// information of each executed plan segment over the best same-length walk
/// from the segment's first node. Each term is at most one up to float
/// rounding.
pub fn planning_index_hier_terms(
    traj: &Trajectory,
    segment_oracles: &[OracleResult],
) -> Result<Vec<f64>, MetricsError> {
    check_non_empty(traj)?;
    let spans = traj.segment_spans();
    if spans.is_empty() {
        return Err(MetricsError::SegmentOracleCount {
            expected: 1,
            got: 0,
        });
    }
    if spans.len() != segment_oracles.len() {
        return Err(MetricsError::SegmentOracleCount {
            expected: spans.len(),
            got: segment_oracles.len(),
        });
    }
    let mut terms = Vec::with_capacity(spans.len());
    for (h, ((lo, hi), oracle)) in spans.iter().zip(segment_oracles).enumerate() {
        let numerator: f64 = traj.visited[*lo..*hi].iter().map(|v| v.u_hat).sum();
        if oracle.total_info > 0.0 {
            terms.push(numerator / oracle.total_info);
        } else if numerator == 0.0 {
            terms.push(0.0);
        } else {
            return Err(MetricsError::ZeroSegmentInfo { segment: h });
        }
    }
    Ok(terms)
}

/// Hierarchical planning index: the sum of the per-segment terms, one per
/// planning event.
pub fn planning_index_hier(
    traj: &Trajectory,
    segment_oracles: &[OracleResult],
) -> Result<f64, MetricsError> {
    Ok(planning_index_hier_terms(traj, segment_oracles)?
        .iter()
        .sum())
}

/// One-shot planning index with its clamp diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GlobalPlanning {
    /// The reported index, clamped into `[0, 1]`.
    pub value: f64,
    /// The raw ratio of normalized chosen information to the optimal
    /// reference. Minimizing the reference does not force this below one, so
    /// ratios above one are possible and recorded.
    pub raw: f64,
    pub clamped: bool,
}

/// One-shot planning index: mean potential information per chosen node over
/// the optimal planning path's mean. Clamped to `[0, 1]` with a diagnostic
/// flag when the raw ratio exceeds one.
pub fn planning_index_global(
    traj: &Trajectory,
    optimal: &OracleResult,
) -> Result<GlobalPlanning, MetricsError> {
    check_non_empty(traj)?;
    if !(optimal.normalized_info > 0.0) {
        return Err(MetricsError::ZeroOptimalInfo);
    }
    let chosen: f64 =
        traj.visited.iter().map(|v| v.u_hat).sum::<f64>() / traj.visited.len() as f64;
    let raw = chosen / optimal.normalized_info;
    let value = raw.clamp(0.0, 1.0);
    Ok(GlobalPlanning {
        value,
        raw,
        clamped: raw > 1.0,
    })
}

/// Solve-relative planning index: the trajectory's weighted solving index
/// over the solving index realized along the optimal planning path. The
/// reference run must cover a complete path.
pub fn planning_index_solve(
    traj: &Trajectory,
    reference: &Trajectory,
) -> Result<f64, MetricsError> {
    check_non_empty(reference)?;
    let g = reference.visited.len() as f64;
    let mean_r = reference.visited.iter().map(|v| v.r).sum::<f64>() / g;
    if (mean_r - 1.0).abs() > COMPLETENESS_TOL {
        return Err(MetricsError::IncompleteReference { mean: mean_r });
    }
    let reference_solving = solving_index(reference)?;
    if reference_solving == 0.0 {
        return Err(MetricsError::ZeroReferenceSolving);
    }
    Ok(solving_index_weighted(traj)? / reference_solving)
}

fn check_weights(alpha: f64, beta: f64) -> Result<(), MetricsError> {
    if alpha < 0.0 || beta < 0.0 || (alpha + beta - 1.0).abs() > IDENTITY_TOL {
        return Err(MetricsError::WeightSum { alpha, beta });
    }
    Ok(())
}

/// Intelligence index: weighted solving scaled by the planning quality of the
/// route, `U_R · (alpha + beta · A_G)`. With `beta = 0` it collapses to the
/// solving-only regime; on the optimal path with full relevance it reduces to
/// the mean realized fraction of the optimal sequence.
pub fn intelligence(
    traj: &Trajectory,
    optimal: &OracleResult,
    alpha: f64,
    beta: f64,
) -> Result<f64, MetricsError> {
    check_weights(alpha, beta)?;
    let u_r = solving_index_weighted(traj)?;
    let a_g = planning_index_global(traj, optimal)?.value;
    Ok(u_r * (alpha + beta * a_g))
}

/// Goal difficulty: intrinsic complexity over expected ability. Above one the
/// goal outruns the agent, below one it is increasingly simple.
pub fn difficulty(complexity_c: f64, ability_q: f64) -> Result<f64, MetricsError> {
    if !(ability_q > 0.0) {
        return Err(MetricsError::NonPositiveAbility { q: ability_q });
    }
    Ok(complexity_c / ability_q)
}

/// Difficulty-scaled intelligence: achievement relative to how hard the goal
/// is for this agent, `D·I/Q` (equivalently `C·I/Q²`).
pub fn intelligence_difficulty(difficulty_d: f64, intelligence_i: f64, ability_q: f64) -> f64 {
    difficulty_d * intelligence_i / ability_q
}

/// Benchmark-relative intelligence: `C·I / Q̄²` against a population mean
/// ability. Coincides with the difficulty-scaled index when the benchmark
/// equals the agent's own ability.
pub fn intelligence_benchmarked(complexity_c: f64, intelligence_i: f64, benchmark_q: f64) -> f64 {
    complexity_c * intelligence_i / (benchmark_q * benchmark_q)
}

/// Time-normalized solving index: the mean `u / (t · u_hat)` over visits.
/// Equals the plain solving index when every visit takes unit time.
pub fn time_normalized_solving(traj: &Trajectory) -> Result<f64, MetricsError> {
    check_non_empty(traj)?;
    let mut sum = 0.0;
    for visit in &traj.visited {
        if !(visit.t_elapsed > 0.0) {
            return Err(MetricsError::NonPositiveTime { node: visit.node });
        }
        if visit.u_hat == 0.0 {
            return Err(MetricsError::ZeroPotential { node: visit.node });
        }
        sum += (visit.u_realized / visit.t_elapsed) / visit.u_hat;
    }
    Ok(sum / traj.visited.len() as f64)
}

/// Every index for one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub solving_u: f64,
    pub solving_u_r: f64,
    pub realized_complexity_x: f64,
    pub planning_a_hier: f64,
    pub planning_a_global: f64,
    pub planning_a_global_raw: f64,
    pub planning_a_global_clamped: bool,
    pub planning_a_solve: f64,
    pub intelligence_i: f64,
    pub difficulty_d: f64,
    pub intelligence_hat: f64,
    pub intelligence_bench: Option<f64>,
    pub alpha: f64,
    pub beta: f64,
    pub time_normalized_u: Option<f64>,
}

impl MetricsReport {
    pub const CSV_HEADER: &'static str = "solving_u,solving_u_r,realized_complexity_x,\
planning_a_hier,planning_a_global,planning_a_global_raw,planning_a_global_clamped,\
planning_a_solve,intelligence_i,difficulty_d,intelligence_hat,intelligence_bench,\
alpha,beta,time_normalized_u";

    pub fn csv_row(&self) -> String {
        let opt = |v: &Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.solving_u,
            self.solving_u_r,
            self.realized_complexity_x,
            self.planning_a_hier,
            self.planning_a_global,
            self.planning_a_global_raw,
            self.planning_a_global_clamped,
            self.planning_a_solve,
            self.intelligence_i,
            self.difficulty_d,
            self.intelligence_hat,
            opt(&self.intelligence_bench),
            self.alpha,
            self.beta,
            opt(&self.time_normalized_u),
        )
    }
}

/// Everything needed to assemble a full report for one trajectory.
#[derive(Debug, Clone)]
pub struct ReportInputs<'a> {
    pub trajectory: &'a Trajectory,
    /// A realized run along the optimal planning path.
    pub reference_trajectory: &'a Trajectory,
    /// One max-information reference per plan segment.
    pub segment_oracles: &'a [OracleResult],
    pub optimal_planning: &'a OracleResult,
    /// Intrinsic complexity of the goal, in bits.
    pub complexity_c: f64,
    pub ability_q: f64,
    pub alpha: f64,
    pub beta: f64,
    pub benchmark_q: Option<f64>,
}

/// Computes every index at once.
pub fn compute_report(inputs: &ReportInputs) -> Result<MetricsReport, MetricsError> {
    check_weights(inputs.alpha, inputs.beta)?;
    let traj = inputs.trajectory;
    let solving_u = solving_index(traj)?;
    let solving_u_r = solving_index_weighted(traj)?;
    let realized_complexity_x = realized_complexity(traj);
    let planning_a_hier = planning_index_hier(traj, inputs.segment_oracles)?;
    let global = planning_index_global(traj, inputs.optimal_planning)?;
    let planning_a_solve = planning_index_solve(traj, inputs.reference_trajectory)?;
    let intelligence_i = solving_u_r * (inputs.alpha + inputs.beta * global.value);
    let difficulty_d = difficulty(inputs.complexity_c, inputs.ability_q)?;
    let intelligence_hat = intelligence_difficulty(difficulty_d, intelligence_i, inputs.ability_q);
    let intelligence_bench = inputs
        .benchmark_q
        .map(|qb| intelligence_benchmarked(inputs.complexity_c, intelligence_i, qb));
    let time_normalized_u = if traj.visited.iter().all(|v| v.t_elapsed > 0.0) {
        Some(time_normalized_solving(traj)?)
    } else {
        None
    };
    Ok(MetricsReport {
        solving_u,
        solving_u_r,
        realized_complexity_x,
        planning_a_hier,
        planning_a_global: global.value,
        planning_a_global_raw: global.raw,
        planning_a_global_clamped: global.clamped,
        planning_a_solve,
        intelligence_i,
        difficulty_d,
        intelligence_hat,
        intelligence_bench,
        alpha: inputs.alpha,
        beta: inputs.beta,
        time_normalized_u,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policy::StopReason;

    fn traj(entries: &[(f64, f64, f64)]) -> Trajectory {
        // entries: (u_realized, u_hat, r)
        Trajectory {
            visited: entries
                .iter()
                .enumerate()
                .map(|(i, &(u, u_hat, r))| Visit {
                    node: NodeId(i),
                    u_realized: u,
                    u_hat,
                    r,
                    t_elapsed: 1.0,
                })
                .collect(),
            plan_segments: Vec::new(),
            stop_reason: StopReason::TerminalReached,
        }
    }

    fn oracle(path_len: usize, total: f64) -> OracleResult {
        OracleResult {
            path: crate::network::PathSpec::new((0..path_len).map(NodeId).collect()),
            total_info: total,
            normalized_info: total / path_len as f64,
            complete: true,
        }
    }

    #[test]
    fn solving_index_examples() {
        assert_eq!(solving_index(&traj(&[(4.0, 4.0, 1.0), (4.0, 4.0, 1.0)])).unwrap(), 1.0);
        assert_eq!(solving_index(&traj(&[(2.0, 4.0, 1.0), (4.0, 4.0, 1.0)])).unwrap(), 0.75);
        assert_eq!(
            solving_index(&traj(&[(-1.0, 4.0, 1.0), (2.0, 4.0, 1.0)])).unwrap(),
            0.125
        );
    }

    #[test]
    fn solving_index_rejects_zero_potential() {
        let err = solving_index(&traj(&[(0.0, 0.0, 1.0)])).unwrap_err();
        assert!(matches!(err, MetricsError::ZeroPotential { .. }));
    }

    #[test]
    fn weighted_solving_examples() {
        assert_eq!(
            solving_index_weighted(&traj(&[(4.0, 4.0, 1.0), (4.0, 4.0, 1.0)])).unwrap(),
            1.0
        );
        assert_eq!(
            solving_index_weighted(&traj(&[(4.0, 4.0, 0.0), (4.0, 4.0, 1.0)])).unwrap(),
            0.5
        );
        assert_eq!(
            solving_index_weighted(&traj(&[(4.0, 4.0, 2.0), (0.0, 4.0, 0.0)])).unwrap(),
            1.0
        );
    }

    #[test]
    fn weighted_solving_rejects_relevance_violation() {
        let err = solving_index_weighted(&traj(&[(4.0, 4.0, 2.0), (4.0, 4.0, 1.0)])).unwrap_err();
        assert!(matches!(err, MetricsError::RelevanceCondition { .. }));
    }

    #[test]
    fn realized_complexity_examples() {
        let empty = Trajectory {
            visited: Vec::new(),
            plan_segments: Vec::new(),
            stop_reason: StopReason::DeadEnd,
        };
        assert_eq!(realized_complexity(&empty), 0.0);
        assert_eq!(realized_complexity(&traj(&[(2.0, 4.0, 1.0), (3.0, 4.0, 1.0)])), 5.0);
    }

    #[test]
    fn hier_terms_sum_over_segments() {
        let mut t = traj(&[(2.0, 3.0, 1.0), (2.0, 5.0, 1.0)]);
        t.plan_segments = vec![
            crate::policy::PlanSegment {
                start_index: 0,
                planned: crate::network::PathSpec::new(vec![NodeId(0)]),
            },
            crate::policy::PlanSegment {
                start_index: 1,
                planned: crate::network::PathSpec::new(vec![NodeId(1)]),
            },
        ];
        let oracles = [oracle(1, 6.0), oracle(1, 20.0 / 3.0)];
        let terms = planning_index_hier_terms(&t, &oracles).unwrap();
        assert!((terms[0] - 0.5).abs() < 1e-12);
        assert!((terms[1] - 0.75).abs() < 1e-12);
        let total = planning_index_hier(&t, &oracles).unwrap();
        assert!((total - 1.25).abs() < 1e-12);
    }

    #[test]
    fn hier_identity_when_segment_is_the_reference() {
        let mut t = traj(&[(2.0, 3.0, 1.0), (2.0, 5.0, 1.0)]);
        t.plan_segments = vec![crate::policy::PlanSegment {
            start_index: 0,
            planned: t.path(),
        }];
        let oracles = [oracle(2, 8.0)];
        assert_eq!(planning_index_hier(&t, &oracles).unwrap(), 1.0);
    }

    #[test]
    fn hier_requires_one_oracle_per_segment() {
        let mut t = traj(&[(2.0, 3.0, 1.0)]);
        t.plan_segments = vec![crate::policy::PlanSegment {
            start_index: 0,
            planned: t.path(),
        }];
        let err = planning_index_hier(&t, &[]).unwrap_err();
        assert!(matches!(err, MetricsError::SegmentOracleCount { .. }));
    }

    #[test]
    fn global_planning_identity_and_ratio() {
        let t = traj(&[(1.0, 4.0, 1.0), (1.0, 4.0, 1.0)]);
        let ident = planning_index_global(&t, &oracle(2, 8.0)).unwrap();
        assert_eq!(ident.value, 1.0);
        assert!(!ident.clamped);
        let t2 = traj(&[(1.0, 3.0, 1.0), (1.0, 3.0, 1.0)]);
        let ratio = planning_index_global(&t2, &oracle(2, 8.0)).unwrap();
        assert!((ratio.value - 0.75).abs() < 1e-12);
    }

    #[test]
    fn global_planning_clamps_and_reports() {
        let t = traj(&[(1.0, 9.0, 1.0)]);
        let g = planning_index_global(&t, &oracle(2, 8.0)).unwrap();
        assert!(g.clamped);
        assert_eq!(g.value, 1.0);
        assert!((g.raw - 2.25).abs() < 1e-12);
    }

    #[test]
    fn solve_relative_identity_and_ratio() {
        let reference = traj(&[(2.0, 4.0, 1.0), (3.0, 4.0, 1.0)]);
        let same = planning_index_solve(&reference, &reference).unwrap();
        assert!((same - 1.0).abs() < 1e-12);
        // weighted solving 0.4 against a reference solving 0.8
        let chosen = traj(&[(1.6, 4.0, 1.0), (1.6, 4.0, 1.0)]);
        let reference = traj(&[(3.2, 4.0, 1.0), (3.2, 4.0, 1.0)]);
        let ratio = planning_index_solve(&chosen, &reference).unwrap();
        assert!((ratio - 0.5).abs() < 1e-12, "ratio {ratio}");
    }

    #[test]
    fn solve_relative_requires_complete_reference() {
        let reference = traj(&[(2.0, 4.0, 0.5), (3.0, 4.0, 0.5)]);
        let err = planning_index_solve(&reference, &reference).unwrap_err();
        assert!(matches!(err, MetricsError::IncompleteReference { .. }));
    }

    #[test]
    fn intelligence_examples() {
        // solving 0.8, planning 0.75, equal weights → 0.7
        let t = traj(&[(3.2, 4.0, 1.0), (3.2, 4.0, 1.0)]);
        let i = intelligence(&t, &oracle(2, 32.0 / 3.0), 0.5, 0.5).unwrap();
        assert!((i - 0.7).abs() < 1e-12, "i = {i}");
        // beta = 0 collapses to the weighted solving index
        let i0 = intelligence(&t, &oracle(2, 32.0 / 3.0), 1.0, 0.0).unwrap();
        assert!((i0 - 0.8).abs() < 1e-12);
    }

    #[test]
    fn intelligence_rejects_bad_weights() {
        let t = traj(&[(1.0, 4.0, 1.0)]);
        assert!(matches!(
            intelligence(&t, &oracle(1, 4.0), 0.7, 0.7),
            Err(MetricsError::WeightSum { .. })
        ));
    }

    #[test]
    fn optimal_path_reduction_identity() {
        // full relevance, chosen = optimal: intelligence equals the mean
        // realized fraction along the optimal sequence
        let t = traj(&[(1.5, 4.0, 1.0), (2.5, 5.0, 1.0), (0.5, 2.0, 1.0)]);
        let reference = oracle(3, 11.0);
        let i = intelligence(&t, &reference, 0.5, 0.5).unwrap();
        let direct = solving_index(&t).unwrap();
        assert!((i - direct).abs() < IDENTITY_TOL);
    }

    #[test]
    fn difficulty_examples() {
        assert_eq!(difficulty(10.0, 5.0).unwrap(), 2.0);
        assert_eq!(difficulty(5.0, 5.0).unwrap(), 1.0);
        let d1 = difficulty(10.0, 2.0).unwrap();
        let d2 = difficulty(10.0, 4.0).unwrap();
        assert!(d1 > d2);
        assert!(matches!(
            difficulty(10.0, 0.0),
            Err(MetricsError::NonPositiveAbility { .. })
        ));
    }

    #[test]
    fn difficulty_scaled_intelligence_examples() {
        assert!((intelligence_difficulty(2.0, 0.7, 5.0) - 0.28).abs() < 1e-12);
        // doubling ability at fixed complexity and intelligence quarters it
        let base = intelligence_difficulty(difficulty(10.0, 2.0).unwrap(), 0.5, 2.0);
        let doubled = intelligence_difficulty(difficulty(10.0, 4.0).unwrap(), 0.5, 4.0);
        assert!((base - 4.0 * doubled).abs() < 1e-12);
        assert_eq!(intelligence_difficulty(2.0, 0.0, 5.0), 0.0);
    }

    #[test]
    fn benchmark_identity_and_substitution() {
        let c = 10.0;
        let i = 0.5;
        let q = 2.0;
        let own = intelligence_difficulty(difficulty(c, q).unwrap(), i, q);
        let bench = intelligence_benchmarked(c, i, q);
        assert!((own - bench).abs() < IDENTITY_TOL);
        assert!((intelligence_benchmarked(10.0, 0.5, 2.0) - 1.25).abs() < 1e-12);
    }

    #[test]
    fn time_normalized_examples() {
        let unit = traj(&[(2.0, 4.0, 1.0), (3.0, 4.0, 1.0)]);
        assert!(
            (time_normalized_solving(&unit).unwrap() - solving_index(&unit).unwrap()).abs()
                < 1e-12
        );
        let mut halved = unit.clone();
        for v in &mut halved.visited {
            v.t_elapsed = 0.5;
        }
        assert!(
            (time_normalized_solving(&halved).unwrap()
                - 2.0 * time_normalized_solving(&unit).unwrap())
            .abs()
                < 1e-12
        );
        let mut single = traj(&[(4.0, 4.0, 1.0)]);
        single.visited[0].t_elapsed = 2.0;
        assert_eq!(time_normalized_solving(&single).unwrap(), 0.5);
        single.visited[0].t_elapsed = 0.0;
        assert!(matches!(
            time_normalized_solving(&single),
            Err(MetricsError::NonPositiveTime { .. })
        ));
    }

    #[test]
    fn indices_ignore_node_relabeling() {
        let a = traj(&[(1.0, 4.0, 1.0), (2.0, 5.0, 0.5), (0.5, 2.0, 1.0)]);
        let mut b = a.clone();
        for (visit, id) in b.visited.iter_mut().zip([7usize, 3, 11]) {
            visit.node = NodeId(id);
        }
        assert_eq!(solving_index(&a).unwrap(), solving_index(&b).unwrap());
        assert_eq!(
            solving_index_weighted(&a).unwrap(),
            solving_index_weighted(&b).unwrap()
        );
        assert_eq!(realized_complexity(&a), realized_complexity(&b));
    }

    #[test]
    fn csv_row_matches_header_arity() {
        let report = MetricsReport {
            solving_u: 0.5,
            solving_u_r: 0.4,
            realized_complexity_x: 3.0,
            planning_a_hier: 0.9,
            planning_a_global: 0.8,
            planning_a_global_raw: 0.8,
            planning_a_global_clamped: false,
            planning_a_solve: 0.7,
            intelligence_i: 0.36,
            difficulty_d: 2.0,
            intelligence_hat: 0.18,
            intelligence_bench: None,
            alpha: 0.5,
            beta: 0.5,
            time_normalized_u: Some(0.25),
        };
        let header_fields = MetricsReport::CSV_HEADER.split(',').count();
        let row_fields = report.csv_row().split(',').count();
        assert_eq!(header_fields, row_fields);
    }
}
