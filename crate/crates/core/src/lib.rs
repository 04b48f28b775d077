//! Constructive tools around odd minors and clustered colouring.
//!
//! The crate covers odd `H`-model search with parity witnesses, exact
//! (connected) tree-depth, tree-decompositions, a constructive
//! packing-or-hitting-set dichotomy over a tree-decomposition, and a layered
//! colouring procedure for bounded-treewidth graphs that either stays within
//! `3 * 2^(h-1) - 2` colours and clustering `d*w + d - w`, or returns a
//! verifiable non-trivial odd `U(h, d)`-model.

pub mod colouring;
pub mod decomposition;
pub mod eposa;
pub mod error;
pub mod generate;
pub mod graph;
pub mod model;
pub mod oracle;
pub mod tree;

pub use error::{Error, Result};
pub use graph::{Graph, VertexSet};
