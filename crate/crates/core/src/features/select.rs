//! Feature scoring: chi-square and information gain over binary presence,
//! and one-way ANOVA F-value ranking over numeric columns.

use std::collections::HashMap;

use super::{FeatureError, FeatureMatrix};
use crate::scalar::Scalar;

/// Map labels to dense class ids in first-occurrence order.
pub(crate) fn class_ids(labels: &[String]) -> (Vec<usize>, usize) {
    let mut map: HashMap<&str, usize> = HashMap::new();
    let mut ids = Vec::with_capacity(labels.len());
    for l in labels {
        let next = map.len();
        let id = *map.entry(l.as_str()).or_insert(next);
        ids.push(id);
    }
    (ids, map.len())
}

/// Chi-square statistic between a binary presence column and class labels.
/// Cells with zero expected count are skipped.
pub fn chi_square_score(presence: &[bool], class_ids: &[usize], n_classes: usize) -> f64 {
    debug_assert_eq!(presence.len(), class_ids.len());
    let n = presence.len() as f64;
    let mut observed = vec![[0.0f64; 2]; n_classes];
    for (&p, &c) in presence.iter().zip(class_ids) {
        observed[c][usize::from(p)] += 1.0;
    }
    let col_sums = [
        observed.iter().map(|r| r[0]).sum::<f64>(),
        observed.iter().map(|r| r[1]).sum::<f64>(),
    ];
    let mut chi2 = 0.0;
    for row in &observed {
        let row_sum = row[0] + row[1];
        for v in 0..2 {
            let expected = row_sum * col_sums[v] / n;
            if expected > 0.0 {
                let d = row[v] - expected;
                chi2 += d * d / expected;
            }
        }
    }
    chi2
}

fn entropy(counts: &[f64], total: f64) -> f64 {
    if total == 0.0 {
        return 0.0;
    }
    counts
        .iter()
        .filter(|&&c| c > 0.0)
        .map(|&c| {
            let p = c / total;
            -p * p.ln()
        })
        .sum()
}

/// Information gain of a binary presence column for the class variable:
/// IG = H(class) - H(class | presence), in nats.
pub fn information_gain(presence: &[bool], class_ids: &[usize], n_classes: usize) -> f64 {
    debug_assert_eq!(presence.len(), class_ids.len());
    let n = presence.len() as f64;
    let mut class_counts = vec![0.0f64; n_classes];
    let mut split = vec![[0.0f64; 2]; n_classes];
    for (&p, &c) in presence.iter().zip(class_ids) {
        class_counts[c] += 1.0;
        split[c][usize::from(p)] += 1.0;
    }
    let h_class = entropy(&class_counts, n);

    let mut h_cond = 0.0;
    for v in 0..2 {
        let branch: Vec<f64> = split.iter().map(|r| r[v]).collect();
        let branch_total: f64 = branch.iter().sum();
        if branch_total > 0.0 {
            h_cond += branch_total / n * entropy(&branch, branch_total);
        }
    }
    h_class - h_cond
}

/// One feature with its ANOVA F value, +infinity acting as the
/// "perfectly separating" sentinel.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedFeature<S> {
    pub index: usize,
    pub name: String,
    pub f_value: S,
}

/// One-way ANOVA F per column, returned in descending-F order (infinite
/// sentinels first, ties by ascending column index).
///
/// F = (between-group SS / (k-1)) / (within-group SS / (n-k)); a column with
/// zero within-group variance but positive between-group variance gets the
/// +infinity sentinel, and a fully constant column gets 0.
pub fn anova_f_rank<S: Scalar>(
    x: &FeatureMatrix<S>,
    labels: &[String],
) -> Result<Vec<RankedFeature<S>>, FeatureError> {
    if labels.len() != x.n_rows() {
        return Err(FeatureError::LabelLengthMismatch(labels.len(), x.n_rows()));
    }
    let (ids, k) = class_ids(labels);
    if k < 2 {
        return Err(FeatureError::SingleClass);
    }
    let n = x.n_rows();

    let mut ranked = Vec::with_capacity(x.n_features());
    for j in 0..x.n_features() {
        let mut group_sums = vec![S::zero(); k];
        let mut group_counts = vec![0usize; k];
        let mut grand_sum = S::zero();
        for i in 0..n {
            let v = x.values[(i, j)];
            group_sums[ids[i]] += v;
            group_counts[ids[i]] += 1;
            grand_sum += v;
        }
        let grand_mean = grand_sum / S::from_usize_lossy(n);
        let mut ss_between = S::zero();
        for c in 0..k {
            let gm = group_sums[c] / S::from_usize_lossy(group_counts[c]);
            let d = gm - grand_mean;
            ss_between += S::from_usize_lossy(group_counts[c]) * d * d;
        }
        let mut ss_within = S::zero();
        for i in 0..n {
            let gm = group_sums[ids[i]] / S::from_usize_lossy(group_counts[ids[i]]);
            let d = x.values[(i, j)] - gm;
            ss_within += d * d;
        }

        let f_value = if ss_within == S::zero() {
            if ss_between > S::zero() {
                S::infinity()
            } else {
                S::zero()
            }
        } else if n == k {
            // no within degrees of freedom but within-SS > 0 cannot happen
            S::zero()
        } else {
            let df1 = S::from_usize_lossy(k - 1);
            let df2 = S::from_usize_lossy(n - k);
            (ss_between / df1) / (ss_within / df2)
        };
        ranked.push(RankedFeature {
            index: j,
            name: x.layout.names[j].clone(),
            f_value,
        });
    }

    ranked.sort_by(|a, b| {
        b.f_value
            .partial_cmp(&a.f_value)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.index.cmp(&b.index))
    });
    Ok(ranked)
}
