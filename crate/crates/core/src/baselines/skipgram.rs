//! Skip-gram with negative sampling, trained by plain SGD.

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

use crate::baselines::WalkCorpus;
use crate::embed::{FeatureKind, FeatureMatrix};
use crate::error::{Error, Result};
use crate::rng::stream_rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkipGramConfig {
    pub dim: usize,
    pub window: usize,
    pub negatives: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub seed: u64,
}

impl Default for SkipGramConfig {
    fn default() -> Self {
        Self {
            dim: 128,
            window: 10,
            negatives: 5,
            epochs: 5,
            learning_rate: 0.025,
            seed: 42,
        }
    }
}

/// Input-side vectors, one row of `dim` values per node.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseEmbedding {
    dim: usize,
    values: Vec<f64>,
}

impl DenseEmbedding {
    pub fn node_count(&self) -> usize {
        self.values.len() / self.dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vector(&self, node: usize) -> &[f64] {
        &self.values[node * self.dim..(node + 1) * self.dim]
    }

    pub fn into_feature_matrix(self, node_ids: Vec<u64>) -> Result<FeatureMatrix> {
        FeatureMatrix::from_rows(node_ids, self.dim, self.values, FeatureKind::Baseline, None)
    }
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// `-log(sigmoid(x))`, stable for large `|x|`.
fn neg_log_sigmoid(x: f64) -> f64 {
    if x > 0.0 {
        (-x).exp().ln_1p()
    } else {
        -x + x.exp().ln_1p()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Negative-sampling loss of one (center, context, negatives) triple:
/// `-log s(u_o . v_c) - sum_k log s(-u_k . v_c)`.
pub fn sgns_loss(center: &[f64], context: &[f64], negatives: &[&[f64]]) -> f64 {
    neg_log_sigmoid(dot(context, center))
        + negatives
            .iter()
            .map(|u| neg_log_sigmoid(-dot(u, center)))
            .sum::<f64>()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SgnsGradients {
    pub center: Vec<f64>,
    pub context: Vec<f64>,
    pub negatives: Vec<Vec<f64>>,
}

/// Analytic gradient of [`sgns_loss`] with respect to every vector involved.
pub fn sgns_gradients(center: &[f64], context: &[f64], negatives: &[&[f64]]) -> SgnsGradients {
    let g_pos = sigmoid(dot(context, center)) - 1.0;
    let mut grad_center: Vec<f64> = context.iter().map(|u| g_pos * u).collect();
    let grad_context = center.iter().map(|v| g_pos * v).collect();
    let mut grad_negatives = Vec::with_capacity(negatives.len());
    for u in negatives {
        let g = sigmoid(dot(u, center));
        for (gc, &uk) in grad_center.iter_mut().zip(u.iter()) {
            *gc += g * uk;
        }
        grad_negatives.push(center.iter().map(|v| g * v).collect());
    }
    SgnsGradients {
        center: grad_center,
        context: grad_context,
        negatives: grad_negatives,
    }
}

pub fn train_skipgram(corpus: &WalkCorpus, node_count: usize, config: &SkipGramConfig) -> Result<DenseEmbedding> {
    train_skipgram_with_history(corpus, node_count, config).map(|(e, _)| e)
}

/// Trains and also returns the mean per-pair loss of every epoch.
///
/// Each position uses a reduced window drawn uniformly from `1..=window`;
/// the learning rate decays linearly to 1e-4 of its start value over all
/// epochs. Negatives are drawn from the unigram distribution raised to 0.75.
pub fn train_skipgram_with_history(
    corpus: &WalkCorpus,
    node_count: usize,
    config: &SkipGramConfig,
) -> Result<(DenseEmbedding, Vec<f64>)> {
    let total_tokens = corpus.token_count();
    if total_tokens == 0 || corpus.walks().iter().all(|w| w.len() < 2) {
        return Err(Error::InvalidParameter("corpus has no context pairs".into()));
    }
    if config.dim < 2 {
        return Err(Error::InvalidParameter("embedding dimension must be at least 2".into()));
    }
    if config.window == 0 {
        return Err(Error::InvalidParameter("window must be at least 1".into()));
    }
    if let Some(&bad) = corpus.walks().iter().flatten().find(|&&v| v >= node_count) {
        return Err(Error::NodeOutOfRange(bad));
    }

    let dim = config.dim;
    let mut counts = vec![0usize; node_count];
    for &v in corpus.walks().iter().flatten() {
        counts[v] += 1;
    }
    let noise = WeightedIndex::new(counts.iter().map(|&c| (c as f64).powf(0.75)))
        .map_err(|e| Error::InvalidParameter(format!("noise distribution: {e}")))?;

    let mut rng = stream_rng(config.seed, u64::MAX);
    let mut input: Vec<f64> = (0..node_count * dim)
        .map(|_| (rng.gen::<f64>() - 0.5) / dim as f64)
        .collect();
    let mut output = vec![0.0; node_count * dim];

    let schedule = (config.epochs * total_tokens).max(1) as f64;
    let mut processed = 0usize;
    let mut history = Vec::with_capacity(config.epochs);
    let mut grad_center = vec![0.0; dim];
    let mut targets = Vec::with_capacity(config.negatives + 1);

    for _ in 0..config.epochs {
        let mut epoch_loss = 0.0;
        let mut pairs = 0usize;
        for walk in corpus.walks() {
            for (pos, &center) in walk.iter().enumerate() {
                let lr = config.learning_rate * (1.0 - processed as f64 / schedule).max(1e-4);
                processed += 1;
                let reach = rng.gen_range(1..=config.window);
                let lo = pos.saturating_sub(reach);
                let hi = (pos + reach).min(walk.len() - 1);
                for ctx_pos in lo..=hi {
                    if ctx_pos == pos {
                        continue;
                    }
                    let context = walk[ctx_pos];
                    targets.clear();
                    targets.push((context, 1.0));
                    for _ in 0..config.negatives {
                        let neg = noise.sample(&mut rng);
                        if neg != context {
                            targets.push((neg, 0.0));
                        }
                    }

                    grad_center.fill(0.0);
                    let v = &input[center * dim..(center + 1) * dim];
                    for &(target, label) in &targets {
                        let u = &mut output[target * dim..(target + 1) * dim];
                        let score = dot(u, v);
                        epoch_loss += if label > 0.0 {
                            neg_log_sigmoid(score)
                        } else {
                            neg_log_sigmoid(-score)
                        };
                        let g = (sigmoid(score) - label) * lr;
                        for ((gc, uk), &vk) in grad_center.iter_mut().zip(u.iter_mut()).zip(v) {
                            *gc += g * *uk;
                            *uk -= g * vk;
                        }
                    }
                    for (vk, gc) in input[center * dim..(center + 1) * dim].iter_mut().zip(&grad_center) {
                        *vk -= gc;
                    }
                    pairs += 1;
                }
            }
        }
        history.push(epoch_loss / pairs.max(1) as f64);
    }

    Ok((DenseEmbedding { dim, values: input }, history))
}
