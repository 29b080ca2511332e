//! Simulation core for goal networks and the achievement indices measured on them.
//!
//! A goal is modelled as a directed acyclic network of subgoal nodes. Each node
//! carries a fixed amount of potential information (`u_hat`, in bits) and a
//! relevance weight (`r`) describing how much the node contributes to goal
//! completion. Agents traverse the network from a designated start node,
//! realizing noisy information gains at every node they visit.
//!
//! The crate is organised around that pipeline:
//!
//! * [`network`] — the goal-network data model, validation, a seeded random
//!   generator for experiment substrates, and a text serialization format.
//! * [`agent`] — agent parameters, expected ability under expertise/goal
//!   mismatch, and the realized-gain and elapsed-time models.
//! * [`policy`] — traversal strategies (random walk, greedy solving,
//!   horizon-limited planning, optimal-path following) producing trajectories.
//! * [`oracle`] — exact optimal-path queries over the DAG, plus an exhaustive
//!   enumerator used for verification.
//! * [`metrics`] — the solving/planning/intelligence/difficulty indices
//!   computed from a trajectory and oracle results.
//! * [`proxy`] — proxy-adjusted intelligence (difficulty reduction and
//!   performance boost).
//! * [`evolution`] — fitness-proportional selection on heritable agent traits
//!   with an evolving population benchmark.
//! * [`rng`] — deterministic, stably-hashed random substreams.

pub mod agent;
pub mod evolution;
pub mod metrics;
pub mod network;
pub mod oracle;
pub mod policy;
pub mod proxy;
pub mod rng;
