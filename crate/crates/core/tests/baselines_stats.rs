mod common;

use qwalkvec::baselines::{
    biased_walks, node2vec_transition, sgns_gradients, sgns_loss, train_skipgram, train_skipgram_with_history,
    uniform_walks, BiasParams, SkipGramConfig,
};
use qwalkvec::Graph;
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Asymptotic two-sample Kolmogorov-Smirnov p-value.
pub fn ks_p_value(a: &[usize], b: &[usize]) -> f64 {
    let max = a.iter().chain(b).copied().max().unwrap_or(0);
    let cdf = |xs: &[usize]| {
        let mut counts = vec![0.0; max + 1];
        for &x in xs {
            counts[x] += 1.0;
        }
        let mut acc = 0.0;
        counts
            .into_iter()
            .map(|c| {
                acc += c / xs.len() as f64;
                acc
            })
            .collect::<Vec<_>>()
    };
    let d = cdf(a)
        .iter()
        .zip(cdf(b))
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let ne = (a.len() * b.len()) as f64 / (a.len() + b.len()) as f64;
    let lambda = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d;
    let q: f64 = (1..=100)
        .map(|k| {
            let k = k as f64;
            2.0 * (-1f64).powf(k - 1.0) * (-2.0 * k * k * lambda * lambda).exp()
        })
        .sum();
    q.clamp(0.0, 1.0)
}

#[test]
fn degree_three_transitions_follow_bias() {
    // node 1 has neighbors 0 (prev), 2 (adjacent to 0) and 3 (two hops away)
    let g = Graph::from_edges(5, [(0, 1), (0, 2), (1, 2), (1, 3), (3, 4)]).unwrap();
    let bias = BiasParams::new(0.5, 2.0).unwrap();
    let expected = node2vec_transition(&g, 0, 1, &bias).unwrap();
    let total_w = 2.0 + 1.0 + 0.5;
    for (p, w) in expected.iter().zip([2.0, 1.0, 0.5]) {
        assert!((p - w / total_w).abs() < 1e-12);
    }

    let corpus = biased_walks(&g, 2000, 20, &bias, 7).unwrap();
    let mut observed = [0.0f64; 3];
    for walk in corpus.walks() {
        for w in walk.windows(3) {
            if w[0] == 0 && w[1] == 1 {
                let slot = g.neighbors(1).iter().position(|&x| x == w[2]).unwrap();
                observed[slot] += 1.0;
            }
        }
    }
    let n: f64 = observed.iter().sum();
    assert!(n > 1000.0);
    let chi2: f64 = observed
        .iter()
        .zip(&expected)
        .map(|(o, p)| (o - n * p).powi(2) / (n * p))
        .sum();
    let p_value = 1.0 - ChiSquared::new(2.0).unwrap().cdf(chi2);
    assert!(p_value > 0.001, "chi2 {chi2}, p {p_value}");
}

#[test]
fn unbiased_node2vec_matches_deepwalk() {
    let (g, _) = common::karate();
    let rounds = 10_000 / g.node_count() + 1;
    let unit = BiasParams::new(1.0, 1.0).unwrap();
    let a = uniform_walks(&g, rounds, 10, 1).unwrap();
    let b = biased_walks(&g, rounds, 10, &unit, 2).unwrap();
    let ends = |c: &qwalkvec::baselines::WalkCorpus| c.walks().iter().map(|w| *w.last().unwrap()).collect::<Vec<_>>();
    let p = ks_p_value(&ends(&a), &ends(&b));
    assert!(p > 0.01, "KS p-value {p}");

    // a strongly biased walk should be told apart
    let skewed = biased_walks(&g, rounds, 10, &BiasParams::new(0.25, 4.0).unwrap(), 2).unwrap();
    let visits = |c: &qwalkvec::baselines::WalkCorpus| c.walks().iter().map(|w| w[2]).collect::<Vec<_>>();
    assert!(ks_p_value(&visits(&a), &visits(&skewed)) < 0.01);
}

#[test]
fn sgns_gradient_matches_finite_differences() {
    let center = [0.3, -0.2, 0.5, 0.1];
    let context = [-0.4, 0.25, 0.3, 0.6];
    let n1 = [0.2, 0.2, -0.7, 0.05];
    let n2 = [-0.1, 0.9, 0.3, -0.3];
    let analytic = sgns_gradients(&center, &context, &[&n1, &n2]);
    let h = 1e-6;
    let rel = |num: f64, ana: f64| (num - ana).abs() / ana.abs().max(1e-8);
    let mut worst: f64 = 0.0;
    for slot in 0..4 {
        for k in 0..4 {
            let mut vecs = [center, context, n1, n2];
            vecs[slot][k] += h;
            let up = sgns_loss(&vecs[0], &vecs[1], &[&vecs[2], &vecs[3]]);
            vecs[slot][k] -= 2.0 * h;
            let down = sgns_loss(&vecs[0], &vecs[1], &[&vecs[2], &vecs[3]]);
            let num = (up - down) / (2.0 * h);
            let ana = match slot {
                0 => analytic.center[k],
                1 => analytic.context[k],
                s => analytic.negatives[s - 2][k],
            };
            worst = worst.max(rel(num, ana));
        }
    }
    assert!(worst < 1e-4, "relative error {worst}");
}

#[test]
fn karate_loss_decreases() {
    let (g, _) = common::karate();
    let corpus = uniform_walks(&g, 10, 40, 3).unwrap();
    let config = SkipGramConfig {
        dim: 32,
        window: 5,
        epochs: 3,
        // small steps keep all three epochs in the descent phase
        learning_rate: 0.005,
        ..SkipGramConfig::default()
    };
    let (_, history) = train_skipgram_with_history(&corpus, g.node_count(), &config).unwrap();
    assert_eq!(history.len(), 3);
    assert!(history[0] > history[1] && history[1] > history[2], "{history:?}");
}

fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot / (na * nb)
}

#[test]
fn disjoint_cliques_separate() {
    let edges = [0usize, 5]
        .into_iter()
        .flat_map(|base| (0..5).flat_map(move |i| ((i + 1)..5).map(move |j| (base + i, base + j))));
    let g = Graph::from_edges(10, edges).unwrap();
    let corpus = uniform_walks(&g, 20, 20, 11).unwrap();
    let config = SkipGramConfig {
        dim: 16,
        window: 4,
        ..SkipGramConfig::default()
    };
    let emb = train_skipgram(&corpus, 10, &config).unwrap();
    let (mut within, mut across) = (Vec::new(), Vec::new());
    for i in 0..10 {
        for j in (i + 1)..10 {
            let c = cosine(emb.vector(i), emb.vector(j));
            if (i < 5) == (j < 5) {
                within.push(c);
            } else {
                across.push(c);
            }
        }
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    assert!(mean(&within) > mean(&across) + 0.5, "{} vs {}", mean(&within), mean(&across));
}
