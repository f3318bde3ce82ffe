//! Ego-betweenness centrality toolkit.
//!
//! The ego-betweenness of a vertex `p` is its betweenness restricted to its
//! ego network (the subgraph induced by `p` and its neighbors): the sum over
//! neighbor pairs of the probability that a random shortest path between
//! them passes through `p`. Because every such shortest path has length at
//! most two, the score reduces to a sum of reciprocals of connector counts,
//! which this crate computes by triangle enumeration instead of path search.
//!
//! What's here:
//!
//! - [`graph`]: edge-list ingestion, the degree total order, orientation.
//! - [`egoscore`]: connector-count maps, exact scoring, static and dynamic
//!   upper bounds.
//! - [`topk`]: top-k search with bound pruning ([`topk::base_search`] sweeps
//!   the total order, [`topk::opt_search`] tightens bounds on the fly).
//! - [`dynamic`]: exact score maintenance and lazy top-k maintenance under
//!   edge insertions and deletions.
//! - [`parallel`]: vertex- and edge-parallel whole-graph scoring.
//! - [`reference`]: brute-force and Brandes oracles for verification.
//! - [`verify`]: the seeded property suite behind `egobw verify`.
//!
//! See the `examples/` directory for one runnable example per capability.

pub mod dynamic;
pub mod egoscore;
pub mod gen;
pub mod graph;
pub mod parallel;
pub mod reference;
pub mod topk;
pub mod util;
pub mod verify;

pub use graph::{orient, DegreeOrder, Graph, OrderedGraph, Vertex};

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("invalid vertex {0}")]
    InvalidVertex(Vertex),
    #[error("unknown vertex id {0}")]
    UnknownVertex(u64),
    #[error("edge ({0}, {1}) already present")]
    EdgeExists(Vertex, Vertex),
    #[error("edge ({0}, {1}) not present")]
    EdgeMissing(Vertex, Vertex),
    #[error("{0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
