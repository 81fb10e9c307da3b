//! Discrete-time coined quantum walk on the arcs of a graph.
//!
//! The state assigns one complex amplitude to every directed arc `i -> j`.
//! One step applies a weighted Grover reflection at every node (mixing the
//! amplitudes of that node's outgoing arcs) followed by the flip-flop shift
//! that moves amplitude from `i -> j` to `j -> i`.

use std::ops::Range;

use num_complex::Complex64;

use crate::embed::{FeatureKind, FeatureMatrix};
use crate::error::{Error, Result};
use crate::graph::{bfs_distances, DistanceVector, Graph};

pub mod dense;

pub use dense::{dense_oracle, DenseOperators, DENSE_ARC_LIMIT};

/// Return parameter, in-out parameter and walk length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkParams {
    wp: f64,
    wq: f64,
    steps: usize,
}

impl WalkParams {
    pub fn new(wp: f64, wq: f64, steps: usize) -> Result<Self> {
        if !(wp.is_finite() && wp > 0.0) {
            return Err(Error::InvalidParameter(format!("w_p must be positive, got {wp}")));
        }
        if !(wq.is_finite() && wq > 0.0) {
            return Err(Error::InvalidParameter(format!("w_q must be positive, got {wq}")));
        }
        if steps == 0 {
            return Err(Error::InvalidParameter("walk length must be at least 1".into()));
        }
        Ok(Self { wp, wq, steps })
    }

    pub fn wp(&self) -> f64 {
        self.wp
    }

    pub fn wq(&self) -> f64 {
        self.wq
    }

    pub fn steps(&self) -> usize {
        self.steps
    }
}

/// Basis of the walk: every directed arc, grouped by tail node.
///
/// Arcs of node `i` occupy a contiguous index range with heads ascending, and
/// nodes are laid out in ascending order. Degree-0 nodes own an empty range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcSpace {
    offsets: Vec<usize>,
    tail: Vec<usize>,
    head: Vec<usize>,
    reverse: Vec<usize>,
}

impl ArcSpace {
    pub fn new(graph: &Graph) -> Self {
        let n = graph.node_count();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut tail = Vec::new();
        let mut head = Vec::new();
        offsets.push(0);
        for i in 0..n {
            for &j in graph.neighbors(i) {
                tail.push(i);
                head.push(j);
            }
            offsets.push(tail.len());
        }
        // neighbor lists are sorted, so j -> i sits at the position of i in j's list
        let reverse = tail
            .iter()
            .zip(&head)
            .map(|(&i, &j)| {
                let pos = graph
                    .neighbors(j)
                    .binary_search(&i)
                    .expect("adjacency is symmetric");
                offsets[j] + pos
            })
            .collect();
        Self {
            offsets,
            tail,
            head,
            reverse,
        }
    }

    pub fn arc_count(&self) -> usize {
        self.tail.len()
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn tail(&self, arc: usize) -> usize {
        self.tail[arc]
    }

    pub fn head(&self, arc: usize) -> usize {
        self.head[arc]
    }

    pub fn reverse(&self, arc: usize) -> usize {
        self.reverse[arc]
    }

    pub fn reverse_table(&self) -> &[usize] {
        &self.reverse
    }

    /// Outgoing arcs of `node`.
    pub fn node_arcs(&self, node: usize) -> Range<usize> {
        self.offsets[node]..self.offsets[node + 1]
    }

    /// Nodes that own at least one arc.
    pub fn active_node_count(&self) -> usize {
        self.offsets.windows(2).filter(|w| w[1] > w[0]).count()
    }
}

/// Per-arc coin weights for one source node.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    source: usize,
    weights: Vec<f64>,
}

impl WeightVector {
    pub fn uniform(arcs: &ArcSpace, source: usize) -> Self {
        Self {
            source,
            weights: vec![1.0; arcs.arc_count()],
        }
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }
}

/// Source-relative coin weights for every arc `i -> j`.
///
/// Arcs leaving the source get 1. Otherwise an arc stepping back toward the
/// source gets `1/w_p` and every other arc (same layer, farther layer, or a
/// component the source cannot reach) gets `1/w_q`.
pub fn coin_weights(arcs: &ArcSpace, dist: &DistanceVector, params: &WalkParams) -> WeightVector {
    let back = 1.0 / params.wp;
    let other = 1.0 / params.wq;
    let weights = (0..arcs.arc_count())
        .map(|a| match (dist.get(arcs.tail(a)), dist.get(arcs.head(a))) {
            (Some(0), _) => 1.0,
            (Some(di), Some(dj)) if di > dj => back,
            _ => other,
        })
        .collect();
    WeightVector {
        source: dist.source(),
        weights,
    }
}

/// Complex amplitude per arc.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    amplitudes: Vec<Complex64>,
}

impl QuantumState {
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Self {
        Self { amplitudes }
    }

    /// Equal superposition over the outgoing arcs of a single node.
    pub fn localized(arcs: &ArcSpace, node: usize) -> Result<Self> {
        if node >= arcs.node_count() {
            return Err(Error::NodeOutOfRange(node));
        }
        let range = arcs.node_arcs(node);
        if range.is_empty() {
            return Err(Error::InvalidParameter(format!("node {node} has no arcs")));
        }
        let amp = Complex64::new(1.0 / (range.len() as f64).sqrt(), 0.0);
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); arcs.arc_count()];
        amplitudes[range].fill(amp);
        Ok(Self { amplitudes })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }
}

/// Weighted superposition over all arcs.
///
/// Each active node carries mass `1/N_eff` (`N_eff` counts nodes with at least
/// one arc), split over its arcs in proportion to their weights.
pub fn initial_state(arcs: &ArcSpace, weights: &WeightVector) -> Result<QuantumState> {
    let active = arcs.active_node_count();
    if active == 0 {
        return Err(Error::NoArcs);
    }
    let w = weights.as_slice();
    let prefactor = 1.0 / (active as f64).sqrt();
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); arcs.arc_count()];
    for node in 0..arcs.node_count() {
        let range = arcs.node_arcs(node);
        let total: f64 = w[range.clone()].iter().sum();
        for a in range {
            amplitudes[a] = Complex64::new(prefactor * (w[a] / total).sqrt(), 0.0);
        }
    }
    Ok(QuantumState { amplitudes })
}

/// Weighted Grover coin `2|s_i><s_i| - I` at every node, stored as the unit
/// vectors `s_i` laid out over the arc space.
#[derive(Debug, Clone, PartialEq)]
pub struct GroverCoin {
    direction: Vec<f64>,
}

impl GroverCoin {
    pub fn new(arcs: &ArcSpace, weights: &WeightVector) -> Self {
        let w = weights.as_slice();
        let mut direction = vec![0.0; arcs.arc_count()];
        for node in 0..arcs.node_count() {
            let range = arcs.node_arcs(node);
            let total: f64 = w[range.clone()].iter().sum();
            for a in range {
                direction[a] = (w[a] / total).sqrt();
            }
        }
        Self { direction }
    }

    pub fn direction(&self) -> &[f64] {
        &self.direction
    }

    /// Reflects each node's block about its coin direction, in place.
    pub fn apply(&self, state: &mut QuantumState, arcs: &ArcSpace) {
        let amps = &mut state.amplitudes;
        for node in 0..arcs.node_count() {
            let range = arcs.node_arcs(node);
            let s = &self.direction[range.clone()];
            let block = &mut amps[range];
            let overlap: Complex64 = s.iter().zip(block.iter()).map(|(&si, &z)| z * si).sum();
            let twice = overlap * 2.0;
            for (z, &si) in block.iter_mut().zip(s) {
                *z = twice * si - *z;
            }
        }
    }
}

pub fn apply_coin(state: &mut QuantumState, arcs: &ArcSpace, weights: &WeightVector) {
    GroverCoin::new(arcs, weights).apply(state, arcs);
}

/// Flip-flop shift: amplitude on `i -> j` moves to `j -> i`.
pub fn apply_shift(state: &mut QuantumState, arcs: &ArcSpace) {
    for (a, &r) in arcs.reverse_table().iter().enumerate() {
        if a < r {
            state.amplitudes.swap(a, r);
        }
    }
}

/// One application of shift after coin.
pub fn step(state: &mut QuantumState, arcs: &ArcSpace, coin: &GroverCoin) {
    coin.apply(state, arcs);
    apply_shift(state, arcs);
}

/// Probability of finding the walker at each node.
pub fn node_probabilities(state: &QuantumState, arcs: &ArcSpace) -> Vec<f64> {
    let mut probs = vec![0.0; arcs.node_count()];
    node_probabilities_into(state, arcs, &mut probs);
    probs
}

fn node_probabilities_into(state: &QuantumState, arcs: &ArcSpace, out: &mut [f64]) {
    for (node, p) in out.iter_mut().enumerate() {
        *p = state.amplitudes[arcs.node_arcs(node)]
            .iter()
            .map(|z| z.norm_sqr())
            .sum();
    }
}

/// Largest deviation of the squared norm from its starting value seen
/// during an evolution.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NormDrift {
    pub max_abs: f64,
}

/// Runs the walk for one source and records node probabilities after each
/// of the `t` steps (column `k` holds the state after `k + 1` steps).
pub fn evolve_collect(
    graph: &Graph,
    arcs: &ArcSpace,
    source: usize,
    params: &WalkParams,
) -> Result<FeatureMatrix> {
    evolve_collect_traced(graph, arcs, source, params).map(|(m, _)| m)
}

pub fn evolve_collect_traced(
    graph: &Graph,
    arcs: &ArcSpace,
    source: usize,
    params: &WalkParams,
) -> Result<(FeatureMatrix, NormDrift)> {
    let dist = bfs_distances(graph, source)?;
    let weights = coin_weights(arcs, &dist, params);
    let coin = GroverCoin::new(arcs, &weights);
    let mut state = initial_state(arcs, &weights)?;
    let start = state.norm_sqr();

    let n = graph.node_count();
    let steps = params.steps();
    let mut features = FeatureMatrix::zeros(
        graph.original_ids().to_vec(),
        steps,
        FeatureKind::Source(source),
        Some(*params),
    );
    let mut column = vec![0.0; n];
    let mut drift = NormDrift::default();
    for col in 0..steps {
        step(&mut state, arcs, &coin);
        node_probabilities_into(&state, arcs, &mut column);
        let mass: f64 = column.iter().sum();
        drift.max_abs = drift.max_abs.max((mass - start).abs());
        for (row, &p) in column.iter().enumerate() {
            features.set(row, col, p);
        }
    }
    Ok((features, drift))
}
