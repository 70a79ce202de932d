//! Solvers, exhaustive oracles, generators and hardness gadgets for
//! Steiner Forest on pairwise dense instances.
//!
//! Node ids and terminal-set indices are 0-based throughout.

pub mod dsu;
pub mod error;
pub mod generators;
pub mod graph;
pub mod greedy;
pub mod half_dense;
pub mod harness;
pub mod instance;
pub mod oracle;
pub mod packing;
pub mod rational;
pub mod reductions;
pub mod structure;
pub mod tree_solver;

pub use error::{Error, Result};
pub use graph::{Edge, Graph, NodeId, NodeSet};
pub use instance::{
    measure_density, solution_value, trivial_sets, verify_solution, DensityReport, DensityTarget,
    DensityWitness, SolutionForest, SteinerForestInstance, Violation,
};
pub use oracle::OracleCaps;
pub use packing::{Packing, PackingBackend, PackingInstance};
pub use rational::{format_rational, parse_rational, Rational};
pub use reductions::{GroupSteinerInstance, SetCoverInstance};
pub use tree_solver::TreeSolverConfig;
