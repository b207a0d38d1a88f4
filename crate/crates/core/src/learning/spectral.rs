//! Jaccard-similarity spectral clustering over graph-word sets, and the
//! dual-clustering combiner that feeds both clusterings to a linear SVM.

use std::collections::BTreeSet;

use ndarray::Array2;

use super::kmeans::{kmeans, KMeansConfig};
use super::split::stratified_split_indices;
use super::svm::{predict, train_linear_svm, SvmConfig};
use super::{ClusterResult, LearnError, SplitSpec};
use crate::scalar::Scalar;

/// Jaccard similarity coefficient |A n B| / |A u B|; 1 for two empty sets.
pub fn jaccard<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> f64 {
    let inter = a.intersection(b).count();
    let union = a.len() + b.len() - inter;
    if union == 0 {
        1.0
    } else {
        inter as f64 / union as f64
    }
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Returns
/// (eigenvalues, eigenvectors-as-columns) sorted by ascending eigenvalue;
/// each eigenvector's largest-magnitude component is made positive.
fn jacobi_eigh<S: Scalar>(mut a: Array2<S>) -> (Vec<S>, Array2<S>) {
    let n = a.nrows();
    let mut v = Array2::<S>::default((n, n));
    for i in 0..n {
        v[(i, i)] = S::one();
    }
    let frobenius = a.iter().map(|&x| x * x).sum::<S>().sqrt();
    let eps = (frobenius + S::one()) * S::epsilon();

    for _sweep in 0..100 {
        let mut off = S::zero();
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)] * a[(p, q)];
            }
        }
        if off.sqrt() < eps {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == S::zero() {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (S::two() * apq);
                let t = {
                    let sign = if theta >= S::zero() { S::one() } else { -S::one() };
                    sign / (theta.abs() + (theta * theta + S::one()).sqrt())
                };
                let c = S::one() / (t * t + S::one()).sqrt();
                let s = t * c;

                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = c * aip - s * aiq;
                    a[(i, q)] = s * aip + c * aiq;
                }
                for i in 0..n {
                    let api = a[(p, i)];
                    let aqi = a[(q, i)];
                    a[(p, i)] = c * api - s * aqi;
                    a[(q, i)] = s * api + c * aqi;
                }
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = c * vip - s * viq;
                    v[(i, q)] = s * vip + c * viq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| {
        a[(x, x)]
            .partial_cmp(&a[(y, y)])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(x.cmp(&y))
    });
    let eigenvalues: Vec<S> = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = Array2::<S>::default((n, n));
    for (col, &src) in order.iter().enumerate() {
        // canonical sign: largest-magnitude component positive
        let mut pivot = 0usize;
        for i in 1..n {
            if v[(i, src)].abs() > v[(pivot, src)].abs() {
                pivot = i;
            }
        }
        let flip = v[(pivot, src)] < S::zero();
        for i in 0..n {
            vectors[(i, col)] = if flip { -v[(i, src)] } else { v[(i, src)] };
        }
    }
    (eigenvalues, vectors)
}

/// Spectral clustering on the Jaccard similarity of per-document word sets:
/// build S, form the symmetric normalized Laplacian I - D^{-1/2} S D^{-1/2},
/// embed each document as its row in the k bottom eigenvectors (row
/// normalized) and cluster those rows with seeded k-means.
pub fn jaccard_spectral_cluster<S: Scalar>(
    word_sets: &[BTreeSet<String>],
    k: usize,
    seed: u64,
) -> Result<ClusterResult<S>, LearnError> {
    let n = word_sets.len();
    if k == 0 || k > n {
        return Err(LearnError::TooFewSamples { k, n });
    }
    for (i, set) in word_sets.iter().enumerate() {
        if set.is_empty() {
            return Err(LearnError::EmptyWordSet(i));
        }
    }

    let mut sim = Array2::<S>::default((n, n));
    for i in 0..n {
        for j in i..n {
            let s = S::from_f64_lossy(jaccard(&word_sets[i], &word_sets[j]));
            sim[(i, j)] = s;
            sim[(j, i)] = s;
        }
    }

    let degrees: Vec<S> = (0..n)
        .map(|i| (0..n).map(|j| sim[(i, j)]).sum::<S>())
        .collect();
    let mut laplacian = Array2::<S>::default((n, n));
    for i in 0..n {
        for j in 0..n {
            let norm = (degrees[i] * degrees[j]).sqrt();
            let v = if norm > S::zero() {
                sim[(i, j)] / norm
            } else {
                S::zero()
            };
            laplacian[(i, j)] = if i == j { S::one() - v } else { -v };
        }
    }

    let (_eigenvalues, vectors) = jacobi_eigh(laplacian);
    let mut embedding = Array2::<S>::default((n, k));
    for i in 0..n {
        let mut norm = S::zero();
        for j in 0..k {
            norm += vectors[(i, j)] * vectors[(i, j)];
        }
        let norm = norm.sqrt();
        for j in 0..k {
            embedding[(i, j)] = if norm > S::zero() {
                vectors[(i, j)] / norm
            } else {
                vectors[(i, j)]
            };
        }
    }

    let config = KMeansConfig {
        seed,
        ..KMeansConfig::default()
    };
    let mut result = kmeans(&embedding, k, &config)?;
    result.inertia = None; // inertia of the embedding space is not meaningful here
    Ok(result)
}

/// Predictions produced by the dual-clustering SVM combiner.
#[derive(Debug, Clone, PartialEq)]
pub struct DualClustering {
    pub train_indices: Vec<usize>,
    pub test_indices: Vec<usize>,
    pub predictions: Vec<String>,
}

/// Combine the numeric-feature clustering and the word-set clustering: the
/// two cluster-id columns are one-hot expanded (integer ids would impose a
/// false ordering), a linear SVM is trained on the train split and evaluated
/// on the test split.
pub fn combine_dual_clustering<S: Scalar>(
    numeric: &ClusterResult<S>,
    wordset: &ClusterResult<S>,
    labels: &[String],
    split: &SplitSpec,
) -> Result<DualClustering, LearnError> {
    let n = labels.len();
    if numeric.assignments.len() != n {
        return Err(LearnError::InputMismatch(numeric.assignments.len(), n));
    }
    if wordset.assignments.len() != n {
        return Err(LearnError::InputMismatch(wordset.assignments.len(), n));
    }

    let width = numeric.k + wordset.k;
    let mut x = Array2::<S>::default((n, width));
    for i in 0..n {
        x[(i, numeric.assignments[i])] = S::one();
        x[(i, numeric.k + wordset.assignments[i])] = S::one();
    }

    let (train, test) = stratified_split_indices(labels, split)?;
    let mut x_train = Array2::<S>::default((train.len(), width));
    let mut y_train = Vec::with_capacity(train.len());
    for (row, &i) in train.iter().enumerate() {
        for j in 0..width {
            x_train[(row, j)] = x[(i, j)];
        }
        y_train.push(labels[i].clone());
    }
    let mut x_test = Array2::<S>::default((test.len(), width));
    for (row, &i) in test.iter().enumerate() {
        for j in 0..width {
            x_test[(row, j)] = x[(i, j)];
        }
    }

    let svm_config = SvmConfig {
        seed: split.seed,
        ..SvmConfig::default()
    };
    let model = train_linear_svm(&x_train, &y_train, &svm_config)?;
    let predictions = predict(&model, &x_test)?;
    Ok(DualClustering {
        train_indices: train,
        test_indices: test,
        predictions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learning::metrics::weighted_f1;

    fn set(words: &[&str]) -> BTreeSet<String> {
        words.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn jaccard_hand_values() {
        assert!((jaccard(&set(&["a", "b"]), &set(&["b", "c"])) - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(jaccard(&set(&["a", "b"]), &set(&["a", "b"])), 1.0);
        assert_eq!(jaccard(&set(&["a"]), &set(&["z"])), 0.0);
    }

    #[test]
    fn disjoint_families_split_perfectly() {
        let mut sets = Vec::new();
        for i in 0..5 {
            sets.push(set(&["red", "warm", &format!("r{i}")]));
        }
        for i in 0..5 {
            sets.push(set(&["blue", "cold", &format!("b{i}")]));
        }
        let r: ClusterResult<f64> = jaccard_spectral_cluster(&sets, 2, 7).unwrap();
        let first = r.assignments[0];
        assert!(r.assignments[..5].iter().all(|&a| a == first));
        assert!(r.assignments[5..].iter().all(|&a| a != first));
    }

    #[test]
    fn block_diagonal_similarity_recovers_blocks_up_to_50_docs() {
        for &(per_block, k) in &[(10usize, 3usize), (16, 3), (25, 2)] {
            let mut sets = Vec::new();
            for b in 0..k {
                for i in 0..per_block {
                    sets.push(set(&[
                        &format!("family{b}"),
                        &format!("shared{b}"),
                        &format!("doc{b}_{i}"),
                    ]));
                }
            }
            let r: ClusterResult<f64> = jaccard_spectral_cluster(&sets, k, 13).unwrap();
            for b in 0..k {
                let block = &r.assignments[b * per_block..(b + 1) * per_block];
                assert!(
                    block.iter().all(|&a| a == block[0]),
                    "block {b} not uniform for n={}",
                    per_block * k
                );
            }
            let distinct: BTreeSet<usize> = r.assignments.iter().copied().collect();
            assert_eq!(distinct.len(), k);
        }
    }

    #[test]
    fn empty_set_is_rejected() {
        let sets = vec![set(&["a"]), BTreeSet::new(), set(&["b"])];
        assert!(matches!(
            jaccard_spectral_cluster::<f64>(&sets, 2, 0),
            Err(LearnError::EmptyWordSet(1))
        ));
    }

    fn labels(raw: &[&str]) -> Vec<String> {
        raw.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn perfectly_informative_clusterings_score_one() {
        let y = labels(&["a", "a", "a", "a", "a", "b", "b", "b", "b", "b"]);
        let assignments = vec![0, 0, 0, 0, 0, 1, 1, 1, 1, 1];
        let c1 = ClusterResult::<f64> {
            assignments: assignments.clone(),
            k: 2,
            inertia: None,
        };
        let c2 = ClusterResult::<f64> {
            assignments,
            k: 2,
            inertia: None,
        };
        let out = combine_dual_clustering(&c1, &c2, &y, &SplitSpec::default()).unwrap();
        let truth: Vec<String> = out.test_indices.iter().map(|&i| y[i].clone()).collect();
        let f1: f64 = weighted_f1(&truth, &out.predictions).unwrap();
        assert_eq!(f1, 1.0);
    }

    #[test]
    fn constant_clusterings_fall_back_to_majority() {
        // 6 of class a, 4 of class b; constant inputs make every test row
        // identical, so predictions match the majority predictor's F1.
        let y = labels(&["a", "a", "a", "a", "a", "a", "b", "b", "b", "b"]);
        let c = ClusterResult::<f64> {
            assignments: vec![0; 10],
            k: 1,
            inertia: None,
        };
        let out = combine_dual_clustering(&c, &c, &y, &SplitSpec::default()).unwrap();
        let truth: Vec<String> = out.test_indices.iter().map(|&i| y[i].clone()).collect();
        let got: f64 = weighted_f1(&truth, &out.predictions).unwrap();

        let majority: Vec<String> = vec!["a".to_string(); truth.len()];
        let expect: f64 = weighted_f1(&truth, &majority).unwrap();
        assert!((got - expect).abs() < 1e-12);
    }

    #[test]
    fn mismatched_document_counts_error() {
        let y = labels(&["a", "b"]);
        let short = ClusterResult::<f64> {
            assignments: vec![0],
            k: 1,
            inertia: None,
        };
        let ok = ClusterResult::<f64> {
            assignments: vec![0, 0],
            k: 1,
            inertia: None,
        };
        assert!(matches!(
            combine_dual_clustering(&short, &ok, &y, &SplitSpec::default()),
            Err(LearnError::InputMismatch(1, 2))
        ));
    }

    #[test]
    fn jacobi_recovers_known_spectrum() {
        // [[2,1],[1,2]] has eigenvalues 1 and 3
        let mut m = Array2::<f64>::zeros((2, 2));
        m[(0, 0)] = 2.0;
        m[(0, 1)] = 1.0;
        m[(1, 0)] = 1.0;
        m[(1, 1)] = 2.0;
        let (vals, vecs) = jacobi_eigh(m);
        assert!((vals[0] - 1.0).abs() < 1e-12);
        assert!((vals[1] - 3.0).abs() < 1e-12);
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        assert!((vecs[(0, 1)] - inv_sqrt2).abs() < 1e-12);
        assert!((vecs[(1, 1)] - inv_sqrt2).abs() < 1e-12);
    }
}
