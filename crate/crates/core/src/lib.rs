//! Infinitesimal rigidity of bar-joint frameworks in which a set `T` of
//! vertices is placed at a single point.
//!
//! Two independent routes are provided and cross-checked:
//!
//! * [`linalg`]: exact rigidity-matrix rank at sampled `T`-coincident
//!   realizations;
//! * [`sparsity`] and [`matroid`]: the counting conditions (strong
//!   `T`-sparsity, cover minima) and the matroid they define.
//!
//! [`constructions`] holds the graph moves used to grow and reduce
//! instances, and [`checks`] ties everything together into decision
//! procedures and randomized harnesses.

pub mod checks;
pub mod constructions;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod linalg;
pub mod matroid;
pub mod seed;
pub mod sparsity;

pub use error::{Error, Result};
pub use graph::{parse_graph, Edge, Graph, VertexId, VertexSet};
