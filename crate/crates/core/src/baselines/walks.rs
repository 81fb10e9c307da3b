use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::{stream_rng, StreamRng};

/// node2vec return (`p`) and in-out (`q`) parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasParams {
    p: f64,
    q: f64,
}

impl BiasParams {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        for (name, v) in [("p", p), ("q", q)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }
}

/// Node sequences, `walks_per_node` per source, laid out round by round
/// (round 0 for every source, then round 1, ...).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkCorpus {
    walks: Vec<Vec<usize>>,
    walks_per_node: usize,
    walk_length: usize,
}

impl WalkCorpus {
    pub fn walks(&self) -> &[Vec<usize>] {
        &self.walks
    }

    pub fn walks_per_node(&self) -> usize {
        self.walks_per_node
    }

    pub fn walk_length(&self) -> usize {
        self.walk_length
    }

    pub fn token_count(&self) -> usize {
        self.walks.iter().map(Vec::len).sum()
    }

    /// One walk per line, space-separated original node ids.
    pub fn to_text(&self, graph: &Graph) -> String {
        let mut out = String::new();
        for walk in &self.walks {
            for (k, &v) in walk.iter().enumerate() {
                if k > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "{}", graph.original_id(v));
            }
            out.push('\n');
        }
        out
    }
}

fn check_walk_args(walks_per_node: usize, walk_length: usize) -> Result<()> {
    if walks_per_node == 0 {
        return Err(Error::InvalidParameter("walks per node must be at least 1".into()));
    }
    if walk_length < 2 {
        return Err(Error::InvalidParameter("walk length must be at least 2".into()));
    }
    Ok(())
}

fn uniform_neighbor(graph: &Graph, node: usize, rng: &mut StreamRng) -> Option<usize> {
    let nbrs = graph.neighbors(node);
    (!nbrs.is_empty()).then(|| nbrs[rng.gen_range(0..nbrs.len())])
}

fn collect_rounds<F>(graph: &Graph, walks_per_node: usize, walk_length: usize, seed: u64, walker: F) -> WalkCorpus
where
    F: Fn(usize, &mut StreamRng) -> Vec<usize> + Sync,
{
    let n = graph.node_count();
    let per_source: Vec<Vec<Vec<usize>>> = (0..n)
        .into_par_iter()
        .map(|source| {
            let mut rng = stream_rng(seed, source as u64);
            (0..walks_per_node).map(|_| walker(source, &mut rng)).collect()
        })
        .collect();
    let mut walks = Vec::with_capacity(n * walks_per_node);
    for round in 0..walks_per_node {
        for source_walks in &per_source {
            walks.push(source_walks[round].clone());
        }
    }
    WalkCorpus {
        walks,
        walks_per_node,
        walk_length,
    }
}

/// DeepWalk walks: each step moves to a uniformly chosen neighbor. A walk
/// stops early at a node without neighbors.
pub fn uniform_walks(graph: &Graph, walks_per_node: usize, walk_length: usize, seed: u64) -> Result<WalkCorpus> {
    check_walk_args(walks_per_node, walk_length)?;
    Ok(collect_rounds(graph, walks_per_node, walk_length, seed, |source, rng| {
        let mut walk = Vec::with_capacity(walk_length);
        walk.push(source);
        while walk.len() < walk_length {
            match uniform_neighbor(graph, walk[walk.len() - 1], rng) {
                Some(next) => walk.push(next),
                None => break,
            }
        }
        walk
    }))
}

fn transition_weights(graph: &Graph, prev: usize, cur: usize, bias: &BiasParams, out: &mut Vec<f64>) {
    out.clear();
    out.extend(graph.neighbors(cur).iter().map(|&x| {
        if x == prev {
            1.0 / bias.p
        } else if graph.has_edge(x, prev) {
            1.0
        } else {
            1.0 / bias.q
        }
    }));
}

/// Second-order transition probabilities over `graph.neighbors(cur)` given
/// the walk arrived from `prev`.
pub fn node2vec_transition(graph: &Graph, prev: usize, cur: usize, bias: &BiasParams) -> Result<Vec<f64>> {
    for node in [prev, cur] {
        if node >= graph.node_count() {
            return Err(Error::NodeOutOfRange(node));
        }
    }
    if !graph.has_edge(prev, cur) {
        return Err(Error::InvalidParameter(format!("{prev} is not adjacent to {cur}")));
    }
    let mut weights = Vec::new();
    transition_weights(graph, prev, cur, bias, &mut weights);
    let total: f64 = weights.iter().sum();
    Ok(weights.into_iter().map(|w| w / total).collect())
}

/// node2vec walks: first step uniform, later steps follow
/// [`node2vec_transition`].
pub fn biased_walks(
    graph: &Graph,
    walks_per_node: usize,
    walk_length: usize,
    bias: &BiasParams,
    seed: u64,
) -> Result<WalkCorpus> {
    check_walk_args(walks_per_node, walk_length)?;
    Ok(collect_rounds(graph, walks_per_node, walk_length, seed, |source, rng| {
        let mut walk = Vec::with_capacity(walk_length);
        let mut weights = Vec::new();
        walk.push(source);
        let Some(first) = uniform_neighbor(graph, source, rng) else {
            return walk;
        };
        walk.push(first);
        while walk.len() < walk_length {
            let prev = walk[walk.len() - 2];
            let cur = walk[walk.len() - 1];
            transition_weights(graph, prev, cur, bias, &mut weights);
            let total: f64 = weights.iter().sum();
            let mut target = rng.gen::<f64>() * total;
            let nbrs = graph.neighbors(cur);
            let mut next = nbrs[nbrs.len() - 1];
            for (&x, &w) in nbrs.iter().zip(&weights) {
                if target < w {
                    next = x;
                    break;
                }
                target -= w;
            }
            walk.push(next);
        }
        walk
    }))
}
