//! One-vs-rest linear SVM trained by seeded stochastic subgradient descent
//! on the hinge loss (Pegasos-style schedule, lambda = 1/(C * n)).

use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::LearnError;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvmConfig {
    pub c: f64,
    pub epochs: usize,
    pub seed: u64,
}

impl Default for SvmConfig {
    fn default() -> Self {
        SvmConfig {
            c: 1.0,
            epochs: 100,
            seed: 0,
        }
    }
}

/// Trained model: per-class weight vector and bias over standardized
/// features, plus the training-set scaling parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SvmModel<S> {
    /// Lexicographically sorted class labels; prediction ties resolve to the
    /// earliest entry.
    pub classes: Vec<String>,
    pub weights: Vec<Vec<S>>,
    pub biases: Vec<S>,
    pub means: Vec<S>,
    pub stds: Vec<S>,
}

impl<S: Scalar> SvmModel<S> {
    pub fn n_features(&self) -> usize {
        self.means.len()
    }

    /// Standardize one raw row; constant training columns map to 0.
    fn scale_row(&self, row: &[S]) -> Vec<S> {
        row.iter()
            .enumerate()
            .map(|(j, &v)| {
                if self.stds[j] > S::zero() {
                    (v - self.means[j]) / self.stds[j]
                } else {
                    S::zero()
                }
            })
            .collect()
    }

    /// Per-class decision margins for one raw row.
    pub fn margins(&self, row: &[S]) -> Vec<S> {
        let x = self.scale_row(row);
        self.weights
            .iter()
            .zip(&self.biases)
            .map(|(w, &b)| {
                let mut z = b;
                for (wi, xi) in w.iter().zip(&x) {
                    z += *wi * *xi;
                }
                z
            })
            .collect()
    }
}

fn derive_seed(seed: u64, idx: u64) -> u64 {
    seed.wrapping_add(idx.wrapping_mul(0x9e3779b97f4a7c15))
}

/// Train the one-vs-rest model. Features are standardized by training-set
/// mean/stdev (a zero-stdev feature is zeroed out).
pub fn train_linear_svm<S: Scalar>(
    x_train: &Array2<S>,
    y_train: &[String],
    config: &SvmConfig,
) -> Result<SvmModel<S>, LearnError> {
    let n = x_train.nrows();
    let f = x_train.ncols();
    if y_train.len() != n {
        return Err(LearnError::InputMismatch(n, y_train.len()));
    }
    let mut classes: Vec<String> = y_train.to_vec();
    classes.sort();
    classes.dedup();
    if classes.len() < 2 {
        return Err(LearnError::SingleClass);
    }
    debug_assert!(x_train.iter().all(|v| v.is_finite()));

    // Scaling parameters from the training rows (population stdev).
    let n_s = S::from_usize_lossy(n);
    let mut means = vec![S::zero(); f];
    for row in x_train.rows() {
        for (j, &v) in row.iter().enumerate() {
            means[j] += v;
        }
    }
    for m in &mut means {
        *m /= n_s;
    }
    let mut stds = vec![S::zero(); f];
    for row in x_train.rows() {
        for (j, &v) in row.iter().enumerate() {
            let d = v - means[j];
            stds[j] += d * d;
        }
    }
    for s in &mut stds {
        *s = (*s / n_s).sqrt();
    }

    let scaled: Vec<Vec<S>> = (0..n)
        .map(|i| {
            (0..f)
                .map(|j| {
                    if stds[j] > S::zero() {
                        (x_train[(i, j)] - means[j]) / stds[j]
                    } else {
                        S::zero()
                    }
                })
                .collect()
        })
        .collect();

    let lambda = S::from_f64_lossy(1.0 / (config.c * n as f64));
    let mut weights = Vec::with_capacity(classes.len());
    let mut biases = Vec::with_capacity(classes.len());

    for (class_idx, class) in classes.iter().enumerate() {
        let targets: Vec<S> = y_train
            .iter()
            .map(|l| if l == class { S::one() } else { -S::one() })
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, class_idx as u64));
        let mut w = vec![S::zero(); f];
        let mut b = S::zero();
        let mut order: Vec<usize> = (0..n).collect();
        let mut t = 0u64;
        for _epoch in 0..config.epochs {
            order.shuffle(&mut rng);
            for &i in &order {
                t += 1;
                let eta = S::one() / (lambda * S::from_f64_lossy(t as f64));
                let xi = &scaled[i];
                let yi = targets[i];
                let mut margin = b;
                for (wj, xj) in w.iter().zip(xi) {
                    margin += *wj * *xj;
                }
                let decay = S::one() - eta * lambda;
                for wj in &mut w {
                    *wj *= decay;
                }
                if yi * margin < S::one() {
                    let step = eta * yi;
                    for (wj, xj) in w.iter_mut().zip(xi) {
                        *wj += step * *xj;
                    }
                    b += step;
                }
            }
        }
        weights.push(w);
        biases.push(b);
    }

    Ok(SvmModel {
        classes,
        weights,
        biases,
        means,
        stds,
    })
}

/// Predict labels: argmax class margin, ties to the lexicographically
/// smallest label.
pub fn predict<S: Scalar>(
    model: &SvmModel<S>,
    x: &Array2<S>,
) -> Result<Vec<String>, LearnError> {
    if x.ncols() != model.n_features() {
        return Err(LearnError::DimensionMismatch {
            expected: model.n_features(),
            got: x.ncols(),
        });
    }
    let mut out = Vec::with_capacity(x.nrows());
    for row in x.rows() {
        let margins = model.margins(row.as_slice().expect("contiguous row"));
        let mut best = 0usize;
        for (c, &m) in margins.iter().enumerate().skip(1) {
            if m > margins[best] {
                best = c;
            }
        }
        out.push(model.classes[best].clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::arr2;

    /// Two blobs around (0,0) and (6,6); separation far exceeds the spread.
    fn blobs() -> (Array2<f64>, Vec<String>) {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..10 {
            let jitter = (i as f64) * 0.1;
            rows.push([jitter, 0.5 - jitter]);
            labels.push("neg".to_string());
            rows.push([6.0 + jitter, 6.5 - jitter]);
            labels.push("pos".to_string());
        }
        let x = Array2::from_shape_vec(
            (rows.len(), 2),
            rows.iter().flat_map(|r| r.to_vec()).collect(),
        )
        .unwrap();
        (x, labels)
    }

    /// Oracle: verify linear separability with margin before asserting the
    /// SVM separates the data.
    fn assert_separable(x: &Array2<f64>, y: &[String]) {
        // direction (1,1) separates the blobs by construction
        let scores: Vec<f64> = x.rows().into_iter().map(|r| r[0] + r[1]).collect();
        let max_neg = scores
            .iter()
            .zip(y)
            .filter(|(_, l)| l.as_str() == "neg")
            .map(|(s, _)| *s)
            .fold(f64::NEG_INFINITY, f64::max);
        let min_pos = scores
            .iter()
            .zip(y)
            .filter(|(_, l)| l.as_str() == "pos")
            .map(|(s, _)| *s)
            .fold(f64::INFINITY, f64::min);
        assert!(min_pos - max_neg >= 1.0, "blobs must be separable with margin");
    }

    #[test]
    fn separable_blobs_reach_full_training_accuracy() {
        let (x, y) = blobs();
        assert_separable(&x, &y);
        let model = train_linear_svm(&x, &y, &SvmConfig::default()).unwrap();
        let pred = predict(&model, &x).unwrap();
        assert_eq!(pred, y);
    }

    #[test]
    fn identical_config_and_seed_give_identical_predictions() {
        let (x, y) = blobs();
        let cfg = SvmConfig {
            c: 1.0,
            epochs: 50,
            seed: 11,
        };
        let a = predict(&train_linear_svm(&x, &y, &cfg).unwrap(), &x).unwrap();
        let b = predict(&train_linear_svm(&x, &y, &cfg).unwrap(), &x).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn wrong_column_count_is_rejected() {
        let (x, y) = blobs();
        let model = train_linear_svm(&x, &y, &SvmConfig::default()).unwrap();
        let bad = arr2(&[[1.0, 2.0, 3.0]]);
        assert!(matches!(
            predict(&model, &bad),
            Err(LearnError::DimensionMismatch {
                expected: 2,
                got: 3
            })
        ));
    }

    #[test]
    fn single_class_is_rejected() {
        let x = arr2(&[[0.0, 1.0], [1.0, 0.0]]);
        let y = vec!["same".to_string(), "same".to_string()];
        assert!(matches!(
            train_linear_svm(&x, &y, &SvmConfig::default()),
            Err(LearnError::SingleClass)
        ));
    }

    #[test]
    fn multiclass_separation() {
        // three clusters on a line
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..6 {
            let j = i as f64 * 0.05;
            rows.push([j, 0.0]);
            labels.push("a".to_string());
            rows.push([5.0 + j, 0.1]);
            labels.push("b".to_string());
            rows.push([10.0 + j, -0.1]);
            labels.push("c".to_string());
        }
        let x = Array2::from_shape_vec(
            (rows.len(), 2),
            rows.iter().flat_map(|r| r.to_vec()).collect(),
        )
        .unwrap();
        let model = train_linear_svm(&x, &labels, &SvmConfig::default()).unwrap();
        let pred = predict(&model, &x).unwrap();
        assert_eq!(pred, labels);
    }

    #[test]
    fn decision_invariant_under_affine_feature_rescaling() {
        // Power-of-two scale and shift keep the standardized values exact.
        let (x, y) = blobs();
        let cfg = SvmConfig::default();
        let base = predict(&train_linear_svm(&x, &y, &cfg).unwrap(), &x).unwrap();

        let mut rescaled = x.clone();
        for mut row in rescaled.rows_mut() {
            row[0] = row[0] * 4.0 + 8.0;
            row[1] = row[1] * 0.5 - 16.0;
        }
        let re = predict(&train_linear_svm(&rescaled, &y, &cfg).unwrap(), &rescaled).unwrap();
        assert_eq!(base, re);
    }

    #[test]
    fn constant_feature_is_zeroed_not_nan() {
        let x = arr2(&[[1.0f64, 7.0], [2.0, 7.0], [3.0, 7.0], [4.0, 7.0]]);
        let y: Vec<String> = ["a", "a", "b", "b"].iter().map(|s| s.to_string()).collect();
        let model = train_linear_svm(&x, &y, &SvmConfig::default()).unwrap();
        let pred = predict(&model, &x).unwrap();
        assert_eq!(pred, y);
        assert!(model.weights.iter().flatten().all(|w| w.is_finite()));
    }
}
