//! Boolean-width toolkit.
//!
//! The pieces fit together like this: [`graph`] holds simple undirected
//! graphs over dense vertex ids backed by [`bitset::VertexSet`]; [`cut`]
//! computes the functions of a single vertex bipartition (crossing edges,
//! the union-closed cross-neighborhood family and its log-size, VC
//! dimension, greedy lower bounds); [`tree`] builds and evaluates
//! decomposition trees whose every edge induces such a cut; and
//! [`sigma_rho`] runs the neighbor-equivalence dynamic program over a
//! rooted decomposition tree to solve vertex-subset optimization problems
//! exactly.
//!
//! Everything randomized is driven by explicit 64-bit seeds through a
//! fixed, named generator (ChaCha8), so all outputs are reproducible.

pub mod bitset;
pub mod cut;
pub mod gen;
pub mod graph;
pub mod io;
pub mod sigma_rho;
pub mod tree;

pub use bitset::VertexSet;
pub use graph::Graph;
