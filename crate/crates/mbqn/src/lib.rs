//! Simulator for entanglement distribution on graph-state networks.
//!
//! A network pre-shares a multipartite graph state; an entanglement task
//! asks for a Bell pair between two nodes and is served by measuring a
//! repeater path down to an isolated edge. The crate models the state as
//! its graph (Z measurements delete a vertex, Y measurements locally
//! complement first), certifies those rewrite rules against a small dense
//! statevector simulator, and builds three notions of when several tasks
//! can share one resource state:
//!
//! - [`compat::worst_case_compatible`]: joint witness paths, pairwise
//!   disjoint and non-adjacent, so no coordination is ever needed;
//! - [`compat::gk_compatible`]: the same after spending a budget of
//!   on-demand EPR pairs on swap chains or edge fission;
//! - [`race::partial_compatible`]: graceful degradation when instructions
//!   race through the network and nodes obey whoever reaches them first.
//!
//! [`sim`] runs the sequential-arrival capacity experiment over these
//! measures and [`report`] serializes the statistics.

pub mod compat;
pub mod error;
pub mod graph;
pub mod oracle;
pub mod race;
pub mod report;
pub mod sim;
pub mod state;
pub mod task;
pub mod topology;

pub use compat::{
    gk_compatible, interval_compatible_1d, minimal_k, worst_case_compatible, PathAssignment,
    Placement, PlacementRole, SupplementPlan, Verdict, Violation,
};
pub use error::{Error, Result};
pub use graph::{Graph, Node};
pub use race::{partial_compatible, run_race, NodeCommitment, RaceEntry, RaceOutcome};
pub use sim::{run_experiment, ExperimentConfig, Measure, StatsRecord, TrialOutcome};
pub use state::{PauliBasis, ResourceState};
pub use task::{parse_task_list, Task};
pub use topology::{TopologyFamily, TopologySpec};
