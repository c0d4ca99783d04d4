//! Spectral hypergraph coarsening with strongly-local flow-based refinement.
//!
//! The pipeline reduces the vertex count of a hypergraph by a target
//! reduction ratio while preserving its spectral and cut structure:
//!
//! 1. embed the star-expanded bipartite graph with a few Gauss–Seidel
//!    smoothing sweeps over random vectors ([`embed::smooth_embed`]),
//! 2. carve seed clusters inside each hyperedge by k-means on the
//!    embedding ([`embed::initial_clusters`]),
//! 3. refine each seed cluster with a strongly-local max-flow / min-cut
//!    solver that minimizes local conductance ([`flow::flow_refine`]),
//! 4. contract the resulting clusters into supernodes
//!    ([`coarsen::coarsen`]) and evaluate quality ([`eval`]).

// Validation uses `!(x > 0.0)` throughout: unlike `x <= 0.0` it also
// rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod coarsen;
pub mod embed;
pub mod error;
pub mod eval;
pub mod flow;
pub mod hypergraph;
pub mod kmeans;
pub mod report;
pub(crate) mod rng;

pub use error::{Error, Result};
pub use hypergraph::{Hypergraph, VertexSet};

// Compile the guide's code samples as doc-tests so the book can never
// drift from the API.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/hypergraphs.md")]
    mod hypergraphs {}
    #[doc = include_str!("../../../book/src/embedding.md")]
    mod embedding {}
    #[doc = include_str!("../../../book/src/flow.md")]
    mod flow {}
    #[doc = include_str!("../../../book/src/coarsening.md")]
    mod coarsening {}
    #[doc = include_str!("../../../book/src/evaluation.md")]
    mod evaluation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
