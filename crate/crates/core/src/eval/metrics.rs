use crate::error::{Error, Result};

fn check(pred: &[usize], truth: &[usize]) -> Result<()> {
    if pred.is_empty() {
        return Err(Error::InvalidParameter("no predictions to score".into()));
    }
    if pred.len() != truth.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} predictions for {} labels",
            pred.len(),
            truth.len()
        )));
    }
    Ok(())
}

/// F1 from pooled counts. With exactly one predicted and one true label per
/// sample this is the accuracy.
pub fn micro_f1(pred: &[usize], truth: &[usize]) -> Result<f64> {
    check(pred, truth)?;
    let hits = pred.iter().zip(truth).filter(|(p, t)| p == t).count();
    // pooled tp = hits and fp = fn = misses, so 2tp / (2tp + fp + fn) = hits / n
    Ok(hits as f64 / pred.len() as f64)
}

/// Unweighted mean of per-class F1 over classes `0..label_count`. A class
/// with no true and no predicted samples scores 0.
pub fn macro_f1(pred: &[usize], truth: &[usize], label_count: usize) -> Result<f64> {
    check(pred, truth)?;
    if let Some(&bad) = pred.iter().chain(truth).find(|&&l| l >= label_count) {
        return Err(Error::InvalidParameter(format!("label {bad} outside 0..{label_count}")));
    }
    let mut tp = vec![0usize; label_count];
    let mut fp = vec![0usize; label_count];
    let mut fn_ = vec![0usize; label_count];
    for (&p, &t) in pred.iter().zip(truth) {
        if p == t {
            tp[p] += 1;
        } else {
            fp[p] += 1;
            fn_[t] += 1;
        }
    }
    let total: f64 = (0..label_count)
        .map(|c| {
            let denom = 2 * tp[c] + fp[c] + fn_[c];
            if denom == 0 {
                0.0
            } else {
                2.0 * tp[c] as f64 / denom as f64
            }
        })
        .sum();
    Ok(total / label_count as f64)
}
