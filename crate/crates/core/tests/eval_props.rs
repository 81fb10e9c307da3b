mod common;

use proptest::prelude::*;
use qwalkvec::eval::{
    evaluate_protocol, grid_search, macro_f1, micro_f1, split, spread_variance, train_ovr_logreg, EmbeddingMethod,
    LogisticObjective, SplitSpec,
};
use qwalkvec::{FeatureKind, FeatureMatrix, LabelMap};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_problem(seed: u64, n: usize, dim: usize) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<f64> = (0..n * dim).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let targets = rows
        .chunks(dim)
        .map(|x| f64::from(u8::from(x[0] - 0.5 * x[dim - 1] + rng.gen_range(-1.0..1.0) > 0.0)))
        .collect();
    (rows, targets)
}

#[test]
fn logistic_gradient_matches_finite_differences() {
    let (rows, targets) = random_problem(5, 30, 4);
    let objective = LogisticObjective::new(rows, targets, 4, 1.0).unwrap();
    let theta = [0.4, -0.7, 0.2, 1.1, -0.3];
    let grad = objective.gradient(&theta);
    let h = 1e-5;
    for k in 0..theta.len() {
        let mut up = theta;
        let mut down = theta;
        up[k] += h;
        down[k] -= h;
        let num = (objective.loss(&up) - objective.loss(&down)) / (2.0 * h);
        let rel = (num - grad[k]).abs() / grad[k].abs().max(1e-8);
        assert!(rel < 1e-6, "component {k}: {num} vs {}", grad[k]);
    }
}

#[test]
fn logistic_loss_is_monotone_and_converges() {
    for seed in 0..5 {
        let (rows, targets) = random_problem(seed, 40, 3);
        let objective = LogisticObjective::new(rows, targets, 3, 1.0).unwrap();
        let (theta, history) = objective.minimize();
        assert!(history.windows(2).all(|w| w[1] <= w[0]));
        let g = objective.gradient(&theta);
        assert!(g.iter().map(|x| x * x).sum::<f64>().sqrt() < 1e-6);
    }
}

#[test]
fn separable_blobs_are_classified() {
    let n = 30;
    let labels = LabelMap::new((0..n).map(|i| i % 3).collect()).unwrap();
    let values = (0..n)
        .flat_map(|i| {
            let c = (i % 3) as f64;
            [c * 4.0 + (i as f64 * 0.37).sin() * 0.3, -c * 3.0 + (i as f64 * 0.91).cos() * 0.3]
        })
        .collect();
    let x = FeatureMatrix::from_rows((0..n as u64).collect(), 2, values, FeatureKind::Baseline, None).unwrap();
    let spec = SplitSpec::new(0.5, 5, 3).unwrap();
    let scores = evaluate_protocol(&x, &labels, &spec).unwrap();
    assert_eq!(scores.micro_mean(), 1.0);
    assert_eq!(scores.macro_mean(), 1.0);
    let model = train_ovr_logreg(&x, labels.labels(), 3, &(0..n).collect::<Vec<_>>(), 1.0).unwrap();
    assert_eq!(model.dim(), 2);
}

#[test]
fn evaluation_ignores_thread_count() {
    let (g, labels) = common::karate();
    let x = qwalkvec::qwalkvec(&g, &qwalkvec::WalkParams::new(0.5, 2.0, 30).unwrap()).unwrap();
    let spec = SplitSpec::new(0.6, 8, 42).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| evaluate_protocol(&x, &labels, &spec).unwrap())
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn grid_is_deterministic_and_shares_splits() {
    let (g, labels) = common::karate();
    let spec = SplitSpec::new(0.5, 3, 42).unwrap();
    let method = EmbeddingMethod::QWalkVec { steps: 20 };
    let a = grid_search(&g, &labels, &method, &[0.5, 2.0], &spec).unwrap();
    let b = grid_search(&g, &labels, &method, &[0.5, 2.0], &spec).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.rows.len(), 4);
    // splits depend only on (seed, repeat)
    for r in 0..3 {
        assert_eq!(split(&labels, &spec, r).unwrap(), split(&labels, &spec, r).unwrap());
    }
}

#[test]
fn spread_row_count() {
    let curves = spread_variance(201, 80).unwrap();
    assert_eq!(curves.quantum.len(), 81);
    for t in 1..=80 {
        assert!((curves.quantum[t] - (t * t) as f64).abs() < 1e-6 * (t * t) as f64);
    }
    assert!(spread_variance(200, 80).is_err());
    assert!(spread_variance(151, 80).is_err());
}

proptest! {
    #[test]
    fn micro_is_accuracy_and_macro_ignores_relabeling(
        pairs in prop::collection::vec((0usize..4, 0usize..4), 1..80),
        shift in 1usize..4,
    ) {
        let pred: Vec<usize> = pairs.iter().map(|p| p.0).collect();
        let truth: Vec<usize> = pairs.iter().map(|p| p.1).collect();
        let hits = pairs.iter().filter(|p| p.0 == p.1).count() as f64;
        prop_assert!((micro_f1(&pred, &truth).unwrap() - hits / pairs.len() as f64).abs() < 1e-15);
        let m = macro_f1(&pred, &truth, 4).unwrap();
        let rp: Vec<usize> = pred.iter().map(|c| (c + shift) % 4).collect();
        let rt: Vec<usize> = truth.iter().map(|c| (c + shift) % 4).collect();
        prop_assert!((macro_f1(&rp, &rt, 4).unwrap() - m).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&m));
    }
}
