//! Positional spreading of quantum versus classical walks on a cycle.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::qwalk::{apply_shift, node_probabilities, ArcSpace, GroverCoin, QuantumState, WeightVector};

#[derive(Debug, Clone, PartialEq)]
pub struct SpreadCurves {
    /// Positional variance for `t = 0..=t_max`.
    pub quantum: Vec<f64>,
    pub classical: Vec<f64>,
    /// Inclusive step range used for the power-law fits.
    pub fit_range: (usize, usize),
    /// Fitted exponent `a` of `variance ~ t^a`.
    pub quantum_exponent: f64,
    pub classical_exponent: f64,
}

/// Least-squares slope of `log y` against `log t` over `t in lo..=hi`.
pub fn fit_power_law(curve: &[f64], lo: usize, hi: usize) -> Result<f64> {
    if lo == 0 || hi <= lo || hi >= curve.len() {
        return Err(Error::InvalidParameter(format!("bad fit range {lo}..={hi}")));
    }
    let points: Vec<(f64, f64)> = (lo..=hi).map(|t| ((t as f64).ln(), curve[t].ln())).collect();
    if points.iter().any(|(_, y)| !y.is_finite()) {
        return Err(Error::NonFinite("variance curve".into()));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = points.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}

fn variance(probs: &[f64], offsets: &[f64]) -> f64 {
    let m: f64 = probs.iter().zip(offsets).map(|(p, x)| p * x).sum();
    let m2: f64 = probs.iter().zip(offsets).map(|(p, x)| p * x * x).sum();
    m2 - m * m
}

/// Variance curves of a Grover walk started in the equal coin superposition
/// at node 0 and of the simple random walk from node 0, on a cycle of
/// `cycle_size` nodes. The cycle must be odd and hold `2 t_max + 1` nodes so
/// neither walk wraps around. Exponents are fitted over `t in 10..=min(80,
/// t_max)` when `t_max >= 20`, else over `1..=t_max`.
pub fn spread_variance(cycle_size: usize, t_max: usize) -> Result<SpreadCurves> {
    if t_max < 2 {
        return Err(Error::InvalidParameter("t_max must be at least 2".into()));
    }
    if cycle_size.is_multiple_of(2) || cycle_size < 2 * t_max + 1 {
        return Err(Error::InvalidParameter(format!(
            "cycle size must be odd and at least {}, got {cycle_size}",
            2 * t_max + 1
        )));
    }
    let n = cycle_size;
    let graph = Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))?;
    let half = n / 2;
    let offsets: Vec<f64> = (0..n)
        .map(|i| if i <= half { i as f64 } else { i as f64 - n as f64 })
        .collect();

    let arcs = ArcSpace::new(&graph);
    let coin = GroverCoin::new(&arcs, &WeightVector::uniform(&arcs, 0));
    let mut state = QuantumState::localized(&arcs, 0)?;
    let mut quantum = Vec::with_capacity(t_max + 1);
    quantum.push(variance(&node_probabilities(&state, &arcs), &offsets));

    let mut dist = vec![0.0; n];
    dist[0] = 1.0;
    let mut classical = Vec::with_capacity(t_max + 1);
    classical.push(variance(&dist, &offsets));

    for _ in 0..t_max {
        coin.apply(&mut state, &arcs);
        apply_shift(&mut state, &arcs);
        quantum.push(variance(&node_probabilities(&state, &arcs), &offsets));

        let mut next = vec![0.0; n];
        for (i, &p) in dist.iter().enumerate() {
            let share = p / graph.degree(i) as f64;
            for &j in graph.neighbors(i) {
                next[j] += share;
            }
        }
        dist = next;
        classical.push(variance(&dist, &offsets));
    }

    let fit_range = if t_max >= 20 { (10, t_max.min(80)) } else { (1, t_max) };
    let quantum_exponent = fit_power_law(&quantum, fit_range.0, fit_range.1)?;
    let classical_exponent = fit_power_law(&classical, fit_range.0, fit_range.1)?;
    Ok(SpreadCurves {
        quantum,
        classical,
        fit_range,
        quantum_exponent,
        classical_exponent,
    })
}
