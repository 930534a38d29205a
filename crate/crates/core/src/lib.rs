//! Exact Matching and its relatives.
//!
//! * [`graph`]: colored and weighted simple graphs, matchings, the top-k weight.
//! * [`format`]: the `p em` / `p tkpm` text formats.
//! * [`enumerate`] and [`oracles`]: exhaustive perfect-matching search and the
//!   brute-force EM, TkPM, CPM and BCPM deciders built on it.
//! * [`em_solvers`]: the randomized algebraic EM decider for bipartite graphs and
//!   CPM/BCPM answered through EM queries.
//! * [`reduction`]: the gadget reduction from EM to Top-k Perfect Matching.
//! * [`harness`]: instance generation and differential campaigns.

pub mod em_solvers;
pub mod enumerate;
pub mod error;
pub mod format;
pub mod graph;
pub mod harness;
pub mod oracles;
pub mod reduction;

pub use enumerate::{collect_perfect_matchings, enumerate_perfect_matchings, EnumerationBudget, EnumerationStatus};
pub use error::{Error, Result};
pub use graph::{
    red_count, top_k_weight, Color, ColoredGraph, EmInstance, Graph, Matching, TkpmInstance, Violation,
    WeightedGraph,
};
