mod common;

use std::collections::BTreeMap;

use num_complex::Complex64;
use proptest::prelude::*;
use qwalkvec::qwalk::{
    apply_shift, coin_weights, dense_oracle, evolve_collect, evolve_collect_traced, initial_state, step,
    DenseOperators, GroverCoin,
};
use qwalkvec::{bfs_distances, qwalkvec, ArcSpace, Graph, QuantumState, WalkParams};

const GRID: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 4.0];

/// Plain Grover walk written against a map of arcs: coin `2/d J - I`,
/// flip-flop shift, start in the uniform superposition over active nodes.
struct PlainGrover {
    amps: BTreeMap<(usize, usize), Complex64>,
    graph: Graph,
}

impl PlainGrover {
    fn new(graph: &Graph) -> Self {
        let active = (0..graph.node_count()).filter(|&i| graph.degree(i) > 0).count() as f64;
        let mut amps = BTreeMap::new();
        for i in 0..graph.node_count() {
            let d = graph.degree(i) as f64;
            for &j in graph.neighbors(i) {
                amps.insert((i, j), Complex64::new(1.0 / (active * d).sqrt(), 0.0));
            }
        }
        Self {
            amps,
            graph: graph.clone(),
        }
    }

    fn step(&mut self) {
        let mut coined = BTreeMap::new();
        for i in 0..self.graph.node_count() {
            let nb = self.graph.neighbors(i);
            if nb.is_empty() {
                continue;
            }
            let mean: Complex64 = nb.iter().map(|&j| self.amps[&(i, j)]).sum::<Complex64>() / nb.len() as f64;
            for &j in nb {
                coined.insert((i, j), mean * 2.0 - self.amps[&(i, j)]);
            }
        }
        self.amps = coined.into_iter().map(|((i, j), z)| ((j, i), z)).collect();
    }
}

fn assert_reduction(graph: &Graph, steps: usize) {
    let arcs = ArcSpace::new(graph);
    let params = WalkParams::new(1.0, 1.0, steps).unwrap();
    for source in [0, graph.node_count() / 2] {
        let weights = coin_weights(&arcs, &bfs_distances(graph, source).unwrap(), &params);
        let coin = GroverCoin::new(&arcs, &weights);
        let mut state = initial_state(&arcs, &weights).unwrap();
        let mut plain = PlainGrover::new(graph);
        for _ in 0..steps {
            step(&mut state, &arcs, &coin);
            plain.step();
            for (a, z) in state.amplitudes().iter().enumerate() {
                let expected = plain.amps[&(arcs.tail(a), arcs.head(a))];
                assert!((z - expected).norm() < 1e-12, "arc {a}: {z} vs {expected}");
            }
        }
    }
}

#[test]
fn unit_weights_reduce_to_plain_grover() {
    let path = Graph::from_edges(7, (0..6).map(|i| (i, i + 1))).unwrap();
    let cycle = Graph::from_edges(9, (0..9).map(|i| (i, (i + 1) % 9))).unwrap();
    let star = Graph::from_edges(6, (1..6).map(|i| (0, i))).unwrap();
    let (karate, _) = common::karate();
    for g in [&path, &cycle, &star, &karate] {
        assert_reduction(g, 60);
    }
}

#[test]
fn path_matches_dense_oracle() {
    let g = Graph::from_edges(5, (0..4).map(|i| (i, i + 1))).unwrap();
    let params = WalkParams::new(2.0, 4.0, 5).unwrap();
    let arcs = ArcSpace::new(&g);
    for source in 0..5 {
        let sparse = evolve_collect(&g, &arcs, source, &params).unwrap();
        let dense = dense_oracle(&g, source, &params).unwrap();
        for (x, y) in sparse.values().iter().zip(dense.values()) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}

#[test]
fn karate_matches_dense_oracle() {
    let (g, _) = common::karate();
    let arcs = ArcSpace::new(&g);
    for (k, source) in [0usize, 5, 16, 33].into_iter().enumerate() {
        let params = WalkParams::new(GRID[k], GRID[4 - k], 50).unwrap();
        let sparse = evolve_collect(&g, &arcs, source, &params).unwrap();
        let dense = dense_oracle(&g, source, &params).unwrap();
        let diff = sparse
            .values()
            .iter()
            .zip(dense.values())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        assert!(diff < 1e-9, "source {source}: {diff}");
    }
}

fn random_state(len: usize, seed: u64) -> QuantumState {
    let mut x = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
    let mut next = move || {
        x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (x >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    QuantumState::from_amplitudes((0..len).map(|_| Complex64::new(next(), next())).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn kernel_properties(
        seed in 0u64..10_000,
        n in 2usize..40,
        extra in 0usize..30,
        iso in 0usize..2,
        wp in prop::sample::select(GRID.to_vec()),
        wq in prop::sample::select(GRID.to_vec()),
    ) {
        let g = common::random_connected_graph(seed, n, extra, iso);
        let arcs = ArcSpace::new(&g);
        let source = seed as usize % n;
        let params = WalkParams::new(wp, wq, 400).unwrap();

        let (phi, drift) = evolve_collect_traced(&g, &arcs, source, &params).unwrap();
        prop_assert!(drift.max_abs < 1e-8);
        for s in phi.column_sums() {
            prop_assert!((s - 1.0).abs() < 1e-9);
        }

        // coin and shift are involutions
        let weights = coin_weights(&arcs, &bfs_distances(&g, source).unwrap(), &params);
        let coin = GroverCoin::new(&arcs, &weights);
        let start = random_state(arcs.arc_count(), seed);
        let mut twice = start.clone();
        coin.apply(&mut twice, &arcs);
        coin.apply(&mut twice, &arcs);
        let mut swapped = start.clone();
        apply_shift(&mut swapped, &arcs);
        apply_shift(&mut swapped, &arcs);
        for ((a, b), c) in start.amplitudes().iter().zip(twice.amplitudes()).zip(swapped.amplitudes()) {
            prop_assert!((a - b).norm() < 1e-12);
            prop_assert_eq!(a, c);
        }

        let ops = DenseOperators::build(&g, source, &params).unwrap();
        prop_assert!(ops.distance_from_identity(&ops.matmul(ops.coin(), ops.coin())) < 1e-12);
        prop_assert!(ops.distance_from_identity(&ops.matmul(ops.shift(), ops.shift())) < 1e-12);

        let short = WalkParams::new(wp, wq, 60).unwrap();
        let sparse = evolve_collect(&g, &arcs, source, &short).unwrap();
        let dense = dense_oracle(&g, source, &short).unwrap();
        for (x, y) in sparse.values().iter().zip(dense.values()) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn relabeling_permutes_rows(seed in 0u64..10_000, n in 3usize..16, extra in 0usize..12) {
        let g = common::random_connected_graph(seed, n, extra, 0);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.rotate_left(seed as usize % n);
        perm.reverse();
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| g.neighbors(i).iter().filter(move |&&j| i < j).map(move |&j| (i, j)))
            .map(|(i, j)| (perm[i], perm[j]))
            .collect();
        let h = Graph::from_edges(n, edges).unwrap();
        let params = WalkParams::new(0.5, 2.0, 20).unwrap();
        let a = qwalkvec(&g, &params).unwrap();
        let b = qwalkvec(&h, &params).unwrap();
        for i in 0..n {
            for (x, y) in a.row(i).iter().zip(b.row(perm[i])) {
                prop_assert!((x - y).abs() < 1e-9);
            }
        }
    }
}
