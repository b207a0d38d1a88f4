//! Learners and evaluation: stratified splitting, linear SVM, k-means,
//! Jaccard spectral clustering, Hungarian cluster-label alignment and the
//! weighted F1 metric. Everything is seeded and deterministic.

mod hungarian;
mod kmeans;
mod metrics;
mod spectral;
mod split;
mod svm;

pub use hungarian::{hungarian_align, hungarian_min_cost, Alignment};
pub use kmeans::{kmeans, KMeansConfig};
pub use metrics::{confusion_matrix, per_class_prf, weighted_f1, ClassMetrics};
pub use spectral::{combine_dual_clustering, jaccard, jaccard_spectral_cluster, DualClustering};
pub use split::{stratified_split, stratified_split_indices};
pub use svm::{predict, train_linear_svm, SvmConfig, SvmModel};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LearnError {
    #[error("class {0:?} has fewer than 2 samples; stratified split impossible")]
    ClassTooSmall(String),
    #[error("need at least 2 distinct classes")]
    SingleClass,
    #[error("expected {expected} features, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("k={k} exceeds sample count {n}")]
    TooFewSamples { k: usize, n: usize },
    #[error("document {0} has an empty graph-word set")]
    EmptyWordSet(usize),
    #[error("inputs cover different document counts: {0} vs {1}")]
    InputMismatch(usize, usize),
    #[error("truth and prediction lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
}

/// Train/test split definition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_ratio: f64,
    pub seed: u64,
    pub stratified: bool,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            train_ratio: 0.7,
            seed: 0,
            stratified: true,
        }
    }
}

/// Clustering output: one cluster id in `0..k` per document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterResult<S> {
    pub assignments: Vec<usize>,
    pub k: usize,
    /// Sum of squared distances to the assigned centroid (k-means only).
    pub inertia: Option<S>,
}
