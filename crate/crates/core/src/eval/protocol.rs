use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::embed::FeatureMatrix;
use crate::error::{Error, Result};
use crate::eval::logreg::{predict, train_ovr_logreg, DEFAULT_REG_STRENGTH};
use crate::eval::metrics::{macro_f1, micro_f1};
use crate::graph::LabelMap;
use crate::rng::stream_rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSpec {
    train_ratio: f64,
    repeats: usize,
    seed: u64,
}

impl SplitSpec {
    pub fn new(train_ratio: f64, repeats: usize, seed: u64) -> Result<Self> {
        if !(train_ratio > 0.0 && train_ratio < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "training ratio must lie in (0, 1), got {train_ratio}"
            )));
        }
        if repeats == 0 {
            return Err(Error::InvalidParameter("repeats must be at least 1".into()));
        }
        Ok(Self {
            train_ratio,
            repeats,
            seed,
        })
    }

    pub fn train_ratio(&self) -> f64 {
        self.train_ratio
    }

    pub fn repeats(&self) -> usize {
        self.repeats
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Random train/test partition of all labeled nodes; the training side has
/// `round(T_R * N)` nodes. Both sides are returned sorted.
pub fn split(labels: &LabelMap, spec: &SplitSpec, repeat: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    let n = labels.len();
    let train_size = (spec.train_ratio * n as f64).round() as usize;
    if train_size == 0 || train_size >= n {
        return Err(Error::DegenerateSplit(format!(
            "ratio {} on {n} nodes leaves an empty side",
            spec.train_ratio
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut stream_rng(spec.seed, repeat as u64));
    let (train, test) = order.split_at(train_size);
    let mut train = train.to_vec();
    let mut test = test.to_vec();
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

/// Scores for one training ratio, with the per-repeat values kept.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioScores {
    pub train_ratio: f64,
    pub micro: Vec<f64>,
    pub macro_: Vec<f64>,
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample standard deviation; zero for a single value.
fn std_dev(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    let ss: f64 = values.iter().map(|v| (v - m) * (v - m)).sum();
    (ss / (values.len() - 1) as f64).sqrt()
}

impl RatioScores {
    pub fn repeats(&self) -> usize {
        self.micro.len()
    }

    pub fn micro_mean(&self) -> f64 {
        mean(&self.micro)
    }

    pub fn micro_std(&self) -> f64 {
        std_dev(&self.micro)
    }

    pub fn macro_mean(&self) -> f64 {
        mean(&self.macro_)
    }

    pub fn macro_std(&self) -> f64 {
        std_dev(&self.macro_)
    }
}

/// Split, train, predict and score `spec.repeats()` times.
pub fn evaluate_protocol(features: &FeatureMatrix, labels: &LabelMap, spec: &SplitSpec) -> Result<RatioScores> {
    if features.rows() != labels.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} feature rows for {} labels",
            features.rows(),
            labels.len()
        )));
    }
    let results: Vec<(f64, f64)> = (0..spec.repeats)
        .into_par_iter()
        .map(|repeat| {
            let (train, test) = split(labels, spec, repeat)?;
            let model = train_ovr_logreg(
                features,
                labels.labels(),
                labels.label_count(),
                &train,
                DEFAULT_REG_STRENGTH,
            )?;
            let pred = predict(&model, features, &test)?;
            let truth: Vec<usize> = test.iter().map(|&i| labels.label(i)).collect();
            Ok((micro_f1(&pred, &truth)?, macro_f1(&pred, &truth, labels.label_count())?))
        })
        .collect::<Result<_>>()?;
    Ok(RatioScores {
        train_ratio: spec.train_ratio,
        micro: results.iter().map(|r| r.0).collect(),
        macro_: results.iter().map(|r| r.1).collect(),
    })
}

pub const REPORT_HEADER: &str = "method,dataset,T_R,repeat_count,micro_mean,micro_std,macro_mean,macro_std,params,seed";

/// Mean and spread of the scores for each training ratio of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub method: String,
    pub dataset: String,
    pub params: String,
    pub seed: u64,
    pub rows: Vec<RatioScores>,
}

impl EvalReport {
    pub fn csv_row(&self, scores: &RatioScores) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.method,
            self.dataset,
            scores.train_ratio,
            scores.repeats(),
            scores.micro_mean(),
            scores.micro_std(),
            scores.macro_mean(),
            scores.macro_std(),
            self.params,
            self.seed
        )
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{REPORT_HEADER}");
        for row in &self.rows {
            let _ = writeln!(out, "{}", self.csv_row(row));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::FeatureKind;

    fn labels(n: usize) -> LabelMap {
        LabelMap::new((0..n).map(|i| i % 2).collect()).unwrap()
    }

    #[test]
    fn split_sizes_and_partition() {
        let l = labels(34);
        let spec = SplitSpec::new(0.5, 20, 42).unwrap();
        let (train, test) = split(&l, &spec, 3).unwrap();
        assert_eq!(train.len(), 17);
        let mut all: Vec<usize> = train.iter().chain(&test).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..34).collect::<Vec<_>>());
        assert_eq!(split(&l, &spec, 3).unwrap(), (train.clone(), test));
        assert_ne!(split(&l, &spec, 4).unwrap().0, train);
    }

    #[test]
    fn degenerate_splits() {
        assert!(SplitSpec::new(1.5, 1, 0).is_err());
        assert!(SplitSpec::new(0.0, 1, 0).is_err());
        assert!(SplitSpec::new(0.5, 0, 0).is_err());
        let spec = SplitSpec::new(0.1, 1, 0).unwrap();
        assert!(matches!(split(&labels(4), &spec, 0), Err(Error::DegenerateSplit(_))));
        let spec = SplitSpec::new(0.9, 1, 0).unwrap();
        assert!(matches!(split(&labels(4), &spec, 0), Err(Error::DegenerateSplit(_))));
    }

    #[test]
    fn single_repeat_has_zero_spread() {
        let n = 12;
        let l = labels(n);
        let values = (0..n)
            .flat_map(|i| [(i % 2) as f64 * 3.0 + (i as f64 * 0.1).sin(), 1.0])
            .collect();
        let x = FeatureMatrix::from_rows((0..n as u64).collect(), 2, values, FeatureKind::Baseline, None).unwrap();
        let scores = evaluate_protocol(&x, &l, &SplitSpec::new(0.5, 1, 9).unwrap()).unwrap();
        assert_eq!(scores.micro_std(), 0.0);
        assert_eq!(scores.macro_std(), 0.0);
        assert_eq!(scores.micro_mean(), 1.0);

        let report = EvalReport {
            method: "toy".into(),
            dataset: "alt".into(),
            params: "none".into(),
            seed: 9,
            rows: vec![scores],
        };
        let csv = report.to_csv();
        assert_eq!(csv.lines().next().unwrap(), REPORT_HEADER);
        assert_eq!(csv.lines().nth(1).unwrap(), "toy,alt,0.5,1,1,0,1,0,none,9");
    }
}
