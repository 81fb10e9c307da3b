use crate::baselines::{biased_walks, train_skipgram, uniform_walks, BiasParams, SkipGramConfig};
use crate::embed::{qwalkvec, FeatureMatrix};
use crate::error::{Error, Result};
use crate::eval::protocol::{evaluate_protocol, RatioScores, SplitSpec};
use crate::graph::{Graph, LabelMap};
use crate::qwalk::WalkParams;

pub const DEFAULT_GRID: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 4.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkSettings {
    pub walks_per_node: usize,
    pub walk_length: usize,
    pub skipgram: SkipGramConfig,
}

/// How node features are produced. The two grid coordinates are
/// `(w_p, w_q)` for the quantum walk and `(p, q)` for node2vec; DeepWalk has
/// no tunable pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EmbeddingMethod {
    QWalkVec { steps: usize },
    DeepWalk(WalkSettings),
    Node2vec(WalkSettings),
}

impl EmbeddingMethod {
    pub fn name(&self) -> &'static str {
        match self {
            Self::QWalkVec { .. } => "qwalkvec",
            Self::DeepWalk(_) => "deepwalk",
            Self::Node2vec(_) => "node2vec",
        }
    }

    pub fn has_grid(&self) -> bool {
        !matches!(self, Self::DeepWalk(_))
    }

    pub fn param_string(&self, a: f64, b: f64) -> String {
        match self {
            Self::QWalkVec { steps } => format!("wp={a};wq={b};t={steps}"),
            Self::DeepWalk(s) => format!(
                "gamma={};walk_length={};window={};dim={}",
                s.walks_per_node, s.walk_length, s.skipgram.window, s.skipgram.dim
            ),
            Self::Node2vec(s) => format!(
                "p={a};q={b};gamma={};walk_length={};window={};dim={}",
                s.walks_per_node, s.walk_length, s.skipgram.window, s.skipgram.dim
            ),
        }
    }

    /// Builds the feature matrix for one parameter pair. Walk corpora and
    /// skip-gram initialization draw from `skipgram.seed`.
    pub fn embed(&self, graph: &Graph, a: f64, b: f64) -> Result<FeatureMatrix> {
        match self {
            Self::QWalkVec { steps } => qwalkvec(graph, &WalkParams::new(a, b, *steps)?),
            Self::DeepWalk(s) => {
                let corpus = uniform_walks(graph, s.walks_per_node, s.walk_length, s.skipgram.seed)?;
                train_skipgram(&corpus, graph.node_count(), &s.skipgram)?
                    .into_feature_matrix(graph.original_ids().to_vec())
            }
            Self::Node2vec(s) => {
                let bias = BiasParams::new(a, b)?;
                let corpus = biased_walks(graph, s.walks_per_node, s.walk_length, &bias, s.skipgram.seed)?;
                train_skipgram(&corpus, graph.node_count(), &s.skipgram)?
                    .into_feature_matrix(graph.original_ids().to_vec())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridRow {
    pub a: f64,
    pub b: f64,
    pub params: String,
    pub scores: RatioScores,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridResult {
    pub rows: Vec<GridRow>,
    pub best: usize,
}

impl GridResult {
    pub fn best_row(&self) -> &GridRow {
        &self.rows[self.best]
    }
}

/// Evaluates every `(a, b)` cell of `grid x grid` and picks the highest mean
/// micro F1; ties go to the lexicographically smallest `(a, b)`.
///
/// Every cell sees the same train/test partitions.
pub fn grid_search(
    graph: &Graph,
    labels: &LabelMap,
    method: &EmbeddingMethod,
    grid: &[f64],
    spec: &SplitSpec,
) -> Result<GridResult> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("empty parameter grid".into()));
    }
    let cells: Vec<(f64, f64)> = if method.has_grid() {
        grid.iter().flat_map(|&a| grid.iter().map(move |&b| (a, b))).collect()
    } else {
        vec![(1.0, 1.0)]
    };
    let mut rows = Vec::with_capacity(cells.len());
    for (a, b) in cells {
        let features = method.embed(graph, a, b)?;
        let scores = evaluate_protocol(&features, labels, spec)?;
        log::info!(
            "{} {}: micro {:.4} macro {:.4}",
            method.name(),
            method.param_string(a, b),
            scores.micro_mean(),
            scores.macro_mean()
        );
        rows.push(GridRow {
            a,
            b,
            params: method.param_string(a, b),
            scores,
        });
    }
    let mut best = 0;
    for (i, row) in rows.iter().enumerate().skip(1) {
        let current = &rows[best];
        let (score, best_score) = (row.scores.micro_mean(), current.scores.micro_mean());
        let smaller = (row.a, row.b) < (current.a, current.b);
        if score > best_score || (score == best_score && smaller) {
            best = i;
        }
    }
    Ok(GridResult { rows, best })
}
