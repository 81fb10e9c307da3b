//! Node embeddings from discrete-time coined quantum walks.
//!
//! The walk lives on the arcs of an undirected graph. For every source node a
//! weighted Grover coin is built from breadth-first distances to that source,
//! the walker starts in a weighted superposition over all arcs, and the
//! per-node probabilities after each step become one feature column. Summing
//! the per-source trajectories gives the final `N x t` feature matrix.
//!
//! Alongside the quantum pipeline the crate carries DeepWalk and node2vec
//! baselines (random walks plus a skip-gram trainer) and a node
//! classification harness (repeated splits, one-vs-rest logistic regression,
//! micro/macro F1).

pub mod baselines;
pub mod embed;
pub mod error;
pub mod eval;
pub mod graph;
pub mod qwalk;
pub mod rng;

pub use embed::{qwalkvec, FeatureKind, FeatureMatrix};
pub use error::{Error, Result};
pub use graph::{bfs_distances, load_edge_list, load_labels, DistanceVector, Graph, LabelMap};
pub use qwalk::{ArcSpace, QuantumState, WalkParams, WeightVector};
