//! Classification metrics: per-class precision/recall/F1, support-weighted
//! F1 and the confusion matrix.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::LearnError;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics<S> {
    pub label: String,
    pub precision: S,
    pub recall: S,
    pub f1: S,
    /// Occurrences of the label in the truth.
    pub support: usize,
}

/// Per-class precision/recall/F1 over the sorted union of truth and
/// predicted labels. A zero denominator yields 0, never NaN.
pub fn per_class_prf<S: Scalar>(
    truth: &[String],
    pred: &[String],
) -> Result<Vec<ClassMetrics<S>>, LearnError> {
    if truth.len() != pred.len() {
        return Err(LearnError::LengthMismatch(truth.len(), pred.len()));
    }
    if truth.is_empty() {
        return Err(LearnError::LengthMismatch(0, 0));
    }

    let mut classes: Vec<&str> = truth.iter().chain(pred).map(String::as_str).collect();
    classes.sort_unstable();
    classes.dedup();

    let mut out = Vec::with_capacity(classes.len());
    for class in classes {
        let tp = truth
            .iter()
            .zip(pred)
            .filter(|(t, p)| t.as_str() == class && p.as_str() == class)
            .count();
        let pred_count = pred.iter().filter(|p| p.as_str() == class).count();
        let support = truth.iter().filter(|t| t.as_str() == class).count();

        let ratio = |num: usize, den: usize| {
            if den == 0 {
                S::zero()
            } else {
                S::from_usize_lossy(num) / S::from_usize_lossy(den)
            }
        };
        let precision = ratio(tp, pred_count);
        let recall = ratio(tp, support);
        let f1 = if precision + recall > S::zero() {
            S::two() * precision * recall / (precision + recall)
        } else {
            S::zero()
        };
        out.push(ClassMetrics {
            label: class.to_string(),
            precision,
            recall,
            f1,
            support,
        });
    }
    Ok(out)
}

/// Support-weighted mean of per-class F1 scores. A predicted class absent
/// from the truth has zero support and contributes nothing.
pub fn weighted_f1<S: Scalar>(truth: &[String], pred: &[String]) -> Result<S, LearnError> {
    let metrics = per_class_prf::<S>(truth, pred)?;
    let total: usize = metrics.iter().map(|m| m.support).sum();
    let weighted = metrics
        .iter()
        .map(|m| m.f1 * S::from_usize_lossy(m.support))
        .sum::<S>()
        / S::from_usize_lossy(total);
    Ok(weighted)
}

/// Confusion matrix over the sorted union of labels; rows are truth,
/// columns are predictions.
pub fn confusion_matrix(
    truth: &[String],
    pred: &[String],
) -> Result<(Vec<String>, Vec<Vec<usize>>), LearnError> {
    if truth.len() != pred.len() {
        return Err(LearnError::LengthMismatch(truth.len(), pred.len()));
    }
    let mut classes: Vec<&str> = truth.iter().chain(pred).map(String::as_str).collect();
    classes.sort_unstable();
    classes.dedup();
    let index: BTreeMap<&str, usize> = classes.iter().enumerate().map(|(i, &c)| (c, i)).collect();

    let mut matrix = vec![vec![0usize; classes.len()]; classes.len()];
    for (t, p) in truth.iter().zip(pred) {
        matrix[index[t.as_str()]][index[p.as_str()]] += 1;
    }
    Ok((classes.into_iter().map(str::to_string).collect(), matrix))
}
