//! Dense and sparse spanning trees.
//!
//! Finds spanning trees that optimize degree-based objectives (the C⟨j⟩ degree
//! conditions, power sums S_p, the Wiener index, subtree counts) with a genetic
//! algorithm over edge-label chromosomes. Two encodings are supported: a direct
//! selection of `N - 1` labels, and a redundant label set decoded to a tree by
//! Kruskal's algorithm. An exhaustive solver over all spanning trees serves as
//! the exact baseline on small graphs.

pub mod cli;
pub mod error;
pub mod ga;
pub mod generate;
pub mod graph;
pub mod metrics;
pub mod peeling;
pub mod report;
pub mod spanning;
pub mod tree;
pub mod unionfind;
pub mod variants;

pub use error::{Error, Result};
pub use ga::{fitness, solve, solve_exact, GaConfig, Model, SolveResult};
pub use generate::{gen_random_graph, GenFlags};
pub use graph::{load_graph, Edge, EdgeSelection, Graph, GraphFormat};
pub use metrics::{ObjectiveKind, ObjectiveSpec, Sense};
pub use peeling::{peel_edges, peel_nodes, PeelMode, PeelingReport};
pub use report::Report;
pub use tree::{decode_tree, greedy_tree, majorizes, Decoded, DegreeSequence, TreeView};
pub use variants::{solve_variant, solve_variant_exact, VariantKind, VariantSpec};
