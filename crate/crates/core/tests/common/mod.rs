#![allow(dead_code)]

use std::path::PathBuf;

use qwalkvec::{load_edge_list, load_labels, Graph, LabelMap};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn karate() -> (Graph, LabelMap) {
    let dir = data_dir();
    let edges = std::fs::read_to_string(dir.join("karate.edges")).unwrap();
    let labels = std::fs::read_to_string(dir.join("karate.labels")).unwrap();
    let graph = load_edge_list(&edges).unwrap();
    let labels = load_labels(&labels, &graph).unwrap();
    (graph, labels)
}

/// Random simple graph: a random spanning tree plus extra edges, so it is
/// connected, optionally followed by isolated nodes.
pub fn random_connected_graph(seed: u64, nodes: usize, extra_edges: usize, isolated: usize) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for v in 1..nodes {
        edges.push((rng.gen_range(0..v), v));
    }
    for _ in 0..extra_edges {
        let a = rng.gen_range(0..nodes);
        let b = rng.gen_range(0..nodes);
        edges.push((a, b));
    }
    Graph::from_edges(nodes + isolated, edges).unwrap()
}
