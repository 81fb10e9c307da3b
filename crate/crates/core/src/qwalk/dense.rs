//! Reference evolution with explicit `A x A` coin and shift matrices.
//!
//! Everything here is rebuilt from the graph alone (arc enumeration,
//! distances, weights, operators) so it can check the sparse kernel without
//! sharing its code paths.

use std::collections::{HashMap, VecDeque};

use crate::embed::{FeatureKind, FeatureMatrix};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::qwalk::WalkParams;

pub const DENSE_ARC_LIMIT: usize = 2000;

/// Row-major square operators over the arc basis.
#[derive(Debug, Clone)]
pub struct DenseOperators {
    dim: usize,
    coin: Vec<f64>,
    shift: Vec<f64>,
    initial: Vec<f64>,
    tails: Vec<usize>,
}

impl DenseOperators {
    pub fn build(graph: &Graph, source: usize, params: &WalkParams) -> Result<Self> {
        let n = graph.node_count();
        if source >= n {
            return Err(Error::NodeOutOfRange(source));
        }
        let arcs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| graph.neighbors(i).iter().map(move |&j| (i, j)))
            .collect();
        let dim = arcs.len();
        if dim > DENSE_ARC_LIMIT {
            return Err(Error::OracleTooLarge {
                arcs: dim,
                limit: DENSE_ARC_LIMIT,
            });
        }
        if dim == 0 {
            return Err(Error::NoArcs);
        }
        let position: HashMap<(usize, usize), usize> =
            arcs.iter().enumerate().map(|(a, &pair)| (pair, a)).collect();

        let mut hops: Vec<i64> = vec![-1; n];
        hops[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &v in graph.neighbors(u) {
                if hops[v] < 0 {
                    hops[v] = hops[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        let weight = |i: usize, j: usize| -> f64 {
            let (li, lj) = (hops[i], hops[j]);
            if li == 0 {
                1.0
            } else if li > 0 && lj >= 0 && li > lj {
                1.0 / params.wp()
            } else {
                1.0 / params.wq()
            }
        };

        let active = (0..n).filter(|&i| graph.degree(i) > 0).count() as f64;
        let mut coin = vec![0.0; dim * dim];
        let mut initial = vec![0.0; dim];
        for i in 0..n {
            let block: Vec<usize> = graph.neighbors(i).iter().map(|&j| position[&(i, j)]).collect();
            if block.is_empty() {
                continue;
            }
            let w: Vec<f64> = graph.neighbors(i).iter().map(|&j| weight(i, j)).collect();
            let total: f64 = w.iter().sum();
            let s: Vec<f64> = w.iter().map(|x| (x / total).sqrt()).collect();
            for (r, &row) in block.iter().enumerate() {
                for (c, &col) in block.iter().enumerate() {
                    let delta = if r == c { 1.0 } else { 0.0 };
                    coin[row * dim + col] = 2.0 * s[r] * s[c] - delta;
                }
                initial[row] = s[r] / active.sqrt();
            }
        }

        let mut shift = vec![0.0; dim * dim];
        for (a, &(i, j)) in arcs.iter().enumerate() {
            let target = position[&(j, i)];
            shift[target * dim + a] = 1.0;
        }

        Ok(Self {
            dim,
            coin,
            shift,
            initial,
            tails: arcs.iter().map(|&(i, _)| i).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coin(&self) -> &[f64] {
        &self.coin
    }

    pub fn shift(&self) -> &[f64] {
        &self.shift
    }

    pub fn initial_state(&self) -> &[f64] {
        &self.initial
    }

    pub fn matmul(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        let d = self.dim;
        let mut out = vec![0.0; d * d];
        for i in 0..d {
            for k in 0..d {
                let aik = a[i * d + k];
                if aik == 0.0 {
                    continue;
                }
                for j in 0..d {
                    out[i * d + j] += aik * b[k * d + j];
                }
            }
        }
        out
    }

    pub fn transpose(&self, a: &[f64]) -> Vec<f64> {
        let d = self.dim;
        let mut out = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                out[j * d + i] = a[i * d + j];
            }
        }
        out
    }

    /// Largest entry of `|m - I|`.
    pub fn distance_from_identity(&self, m: &[f64]) -> f64 {
        let d = self.dim;
        m.iter()
            .enumerate()
            .map(|(idx, &x)| {
                let delta = if idx / d == idx % d { 1.0 } else { 0.0 };
                (x - delta).abs()
            })
            .fold(0.0, f64::max)
    }

    fn apply(&self, m: &[f64], v: &[f64]) -> Vec<f64> {
        let d = self.dim;
        (0..d)
            .map(|i| m[i * d..(i + 1) * d].iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Per-source feature matrix computed with dense operators.
pub fn dense_oracle(graph: &Graph, source: usize, params: &WalkParams) -> Result<FeatureMatrix> {
    let ops = DenseOperators::build(graph, source, params)?;
    let mut features = FeatureMatrix::zeros(
        graph.original_ids().to_vec(),
        params.steps(),
        FeatureKind::Source(source),
        Some(*params),
    );
    let mut psi = ops.initial.clone();
    for col in 0..params.steps() {
        psi = ops.apply(&ops.shift, &ops.apply(&ops.coin, &psi));
        let mut probs = vec![0.0; graph.node_count()];
        for (a, amp) in psi.iter().enumerate() {
            probs[ops.tails[a]] += amp * amp;
        }
        for (row, p) in probs.into_iter().enumerate() {
            features.set(row, col, p);
        }
    }
    Ok(features)
}
