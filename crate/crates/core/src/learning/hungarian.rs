//! Hungarian (Kuhn-Munkres) assignment and cluster-to-label alignment.

use std::collections::BTreeMap;

use super::LearnError;

/// Minimum-cost assignment on a square integer cost matrix; returns the
/// column assigned to each row. O(n^3) potentials formulation.
pub fn hungarian_min_cost(cost: &[Vec<i64>]) -> Vec<usize> {
    let n = cost.len();
    if n == 0 {
        return Vec::new();
    }
    debug_assert!(cost.iter().all(|row| row.len() == n));
    const INF: i64 = i64::MAX / 4;

    // 1-based potentials over rows (u) and columns (v); p[j] = row matched to
    // column j, with column 0 as the virtual staging slot.
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![INF; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = INF;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![0usize; n];
    for j in 1..=n {
        if p[j] > 0 {
            assignment[p[j] - 1] = j - 1;
        }
    }
    assignment
}

/// Result of aligning predicted clusters with true labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Alignment {
    /// Cluster id -> assigned label.
    pub mapping: BTreeMap<usize, String>,
    /// Predictions relabeled through the mapping.
    pub relabeled: Vec<String>,
    /// Samples whose relabeled prediction matches the truth.
    pub agreement: usize,
}

/// Find the cluster-to-label mapping that maximizes total agreement
/// (Hungarian algorithm on the negated contingency matrix, padded square
/// with zero rows/columns when cluster and label counts differ). A cluster
/// matched to a padding column falls back to its majority true label.
pub fn hungarian_align(
    pred_clusters: &[usize],
    true_labels: &[String],
) -> Result<Alignment, LearnError> {
    if pred_clusters.len() != true_labels.len() {
        return Err(LearnError::LengthMismatch(
            pred_clusters.len(),
            true_labels.len(),
        ));
    }
    let mut labels: Vec<&str> = true_labels.iter().map(String::as_str).collect();
    labels.sort_unstable();
    labels.dedup();
    let n_clusters = pred_clusters.iter().copied().max().map_or(0, |m| m + 1);
    let side = n_clusters.max(labels.len()).max(1);

    let mut contingency = vec![vec![0i64; side]; side];
    let label_col: BTreeMap<&str, usize> = labels.iter().enumerate().map(|(j, &l)| (l, j)).collect();
    for (&c, l) in pred_clusters.iter().zip(true_labels) {
        contingency[c][label_col[l.as_str()]] += 1;
    }

    let max_count = contingency
        .iter()
        .flatten()
        .copied()
        .max()
        .unwrap_or(0);
    let cost: Vec<Vec<i64>> = contingency
        .iter()
        .map(|row| row.iter().map(|&c| max_count - c).collect())
        .collect();
    let assignment = hungarian_min_cost(&cost);

    let mut mapping = BTreeMap::new();
    for cluster in 0..n_clusters {
        let col = assignment[cluster];
        let label = if col < labels.len() {
            labels[col].to_string()
        } else {
            // padded column: fall back to the cluster's majority label
            let mut best = labels[0];
            let mut best_count = -1i64;
            for (j, &l) in labels.iter().enumerate() {
                if contingency[cluster][j] > best_count {
                    best_count = contingency[cluster][j];
                    best = l;
                }
            }
            best.to_string()
        };
        mapping.insert(cluster, label);
    }

    let relabeled: Vec<String> = pred_clusters.iter().map(|c| mapping[c].clone()).collect();
    let agreement = relabeled
        .iter()
        .zip(true_labels)
        .filter(|(a, b)| a == b)
        .count();
    Ok(Alignment {
        mapping,
        relabeled,
        agreement,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(raw: &[&str]) -> Vec<String> {
        raw.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn permutation_recovery() {
        let pred = [0usize, 0, 1, 1];
        let truth = labels(&["B", "B", "A", "A"]);
        let a = hungarian_align(&pred, &truth).unwrap();
        assert_eq!(a.mapping[&0], "B");
        assert_eq!(a.mapping[&1], "A");
        assert_eq!(a.agreement, 4);
        assert_eq!(a.relabeled, truth);
    }

    #[test]
    fn contingency_fixture() {
        // contingency [[3,1],[2,4]] -> 0->col0, 1->col1, agreement 7
        let mut pred = Vec::new();
        let mut truth = Vec::new();
        for (cluster, label, count) in
            [(0, "A", 3), (0, "B", 1), (1, "A", 2), (1, "B", 4)]
        {
            for _ in 0..count {
                pred.push(cluster);
                truth.push(label.to_string());
            }
        }
        let a = hungarian_align(&pred, &truth).unwrap();
        assert_eq!(a.mapping[&0], "A");
        assert_eq!(a.mapping[&1], "B");
        assert_eq!(a.agreement, 7);
    }

    /// Exhaustive oracle: maximum agreement over all label permutations.
    fn brute_force_agreement(pred: &[usize], truth: &[String], k: usize) -> usize {
        let mut labels: Vec<&String> = truth.iter().collect();
        labels.sort();
        labels.dedup();
        let mut best = 0;
        let mut perm: Vec<usize> = (0..k.max(labels.len())).collect();
        permute(&mut perm, 0, &mut |p| {
            let agree = pred
                .iter()
                .zip(truth)
                .filter(|&(&c, t)| p[c] < labels.len() && labels[p[c]] == t)
                .count();
            best = best.max(agree);
        });
        best
    }

    fn permute(arr: &mut Vec<usize>, start: usize, visit: &mut impl FnMut(&[usize])) {
        if start == arr.len() {
            visit(arr);
            return;
        }
        for i in start..arr.len() {
            arr.swap(start, i);
            permute(arr, start + 1, visit);
            arr.swap(start, i);
        }
    }

    #[test]
    fn agreement_matches_exhaustive_permutations() {
        // deterministic pseudo-random square cases (every cluster id and
        // label present) with k up to 5
        let mut state = 0x12345678u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for case in 0..30 {
            let k = 2 + (next() % 4) as usize; // 2..=5
            let n = k + 10 + (next() % 20) as usize;
            let mut pred: Vec<usize> = (0..n).map(|_| (next() % k as u64) as usize).collect();
            let mut truth: Vec<String> = (0..n)
                .map(|_| format!("L{}", next() % k as u64))
                .collect();
            for c in 0..k {
                pred[c] = c; // force all ids and labels to appear
                truth[n - 1 - c] = format!("L{c}");
            }
            let a = hungarian_align(&pred, &truth).unwrap();
            let best = brute_force_agreement(&pred, &truth, k);
            assert_eq!(a.agreement, best, "case {case} k={k} n={n}");
        }
    }

    #[test]
    fn more_clusters_than_labels_pads_and_still_labels_everything() {
        let pred = [0usize, 1, 2, 2];
        let truth = labels(&["A", "B", "B", "B"]);
        let a = hungarian_align(&pred, &truth).unwrap();
        assert_eq!(a.relabeled.len(), 4);
        // cluster 2 carries the B majority; clusters 0 and 1 split A/B
        assert_eq!(a.agreement, 4);
    }

    #[test]
    fn length_mismatch_is_rejected() {
        assert!(matches!(
            hungarian_align(&[0, 1], &labels(&["A"])),
            Err(LearnError::LengthMismatch(2, 1))
        ));
    }
}
