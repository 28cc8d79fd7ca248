//! Simulator and verification suite for electric-network quantum walk
//! search: classical electrical-network oracle, augmented-graph walk
//! operators, exact phase estimation, and the search/estimation algorithms
//! with walk-step cost accounting.

pub mod augment;
pub mod cli;
pub mod electric;
pub mod error;
pub mod exec;
pub mod families;
pub mod graph;
pub mod io;
pub mod ledger;
pub mod phasest;
pub mod search;
pub mod verify;
pub mod walk;

pub use augment::{augment, resistance_curve, AugmentedGraph};
pub use electric::{effective_resistance, hitting_time, solve, ElectricSolution};
pub use error::Error;
pub use graph::{bipartite_double, build_graph, Distribution, Graph};
pub use ledger::{CostLedger, Phase};
pub use phasest::{pe_zero_outcome, verify_lemma_pe_new, AmplitudeMode};
pub use search::{
    estimate_resistance, find_eta, find_marked, find_marked_simple, find_marked_unknown_w,
    SearchOutcome, SearchParams,
};
pub use walk::{build_walk_operator, electrical_flow_state, start_state, EdgeState, WalkOperator};
