//! DAG covers of weighted digraphs.
//!
//! A cover is a small set of dominating DAGs (optionally with Steiner
//! vertices) such that, for every reachable pair, some DAG approximates the
//! graph distance within a stretch factor. This crate builds covers for
//! bounded-treewidth and planar digraphs and certifies any cover against an
//! all-pairs shortest-path oracle.

pub mod config;
pub mod cover;
pub mod decomposition;
pub mod error;
pub mod gadget;
pub mod generate;
pub mod graph;
pub mod io;
pub mod par;
pub mod planar;
pub mod star;
pub mod tw_nonsteiner;
pub mod tw_steiner;

pub use cover::{certify, certify_with, CoverCertificate, DagCover, SteinerDag, VertexRef};
pub use decomposition::{PathDecomposition, TreeDecomposition};
pub use error::{Error, Result};
pub use graph::{DistanceMatrix, Permutation, WeightedDigraph};
pub use par::Exec;
