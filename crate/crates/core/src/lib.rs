//! One-to-many disjoint directed path covers in semicomplete digraphs.
//!
//! A path system joins a source `s` to sinks `t_1..t_k` by paths that share
//! only `s`; it is a DDPC when the paths cover every vertex. This crate has
//! the digraph model, Hamiltonian constructions for semicomplete digraphs,
//! the boundary sets used to reason about a maximal system, an augmentation
//! engine that grows systems by local rewiring, exact search oracles and
//! seeded instance generators.

pub mod boundary;
pub mod digraph;
pub mod engine;
pub mod format;
pub mod generators;
pub mod ham;
pub mod oracle;
pub mod path_system;

pub use boundary::{boundary_partition, lemma_report, BoundaryPartition, LemmaReport};
pub use digraph::{degree_threshold, DegreeReport, Digraph, GraphError, VertexSet};
pub use engine::{augment_to_cover, solve, solve_detailed, EngineConfig};
pub use path_system::{is_ddpc, validate_system, PathSystem};
