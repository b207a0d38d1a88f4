//! Word2vec-graph stylometry: represent each document as a typed graph of its
//! top-frequency words and their embedding-nearest neighbors, extract fixed
//! structural feature vectors (plus TF-IDF, character n-gram and stylometry
//! baselines), and evaluate author-attribution / genre-detection with a
//! linear SVM and k-means / spectral clustering.
//!
//! The numeric core is generic over [`scalar::Scalar`] (`f32` or `f64`); the
//! aliases below fix the default double-precision pipeline used by the CLI
//! and by all file formats.

pub mod corpus;
pub mod embedding;
pub mod experiment;
pub mod features;
pub mod graph;
pub mod learning;
pub mod scalar;

pub use scalar::Scalar;

use serde::{Deserialize, Serialize};

/// Whether stopwords are kept in the tokenized documents. The variant also
/// fixes the core-word count N (20 with stopwords, 15 without) and therefore
/// the graph feature-vector length (95 / 85).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    WithStopwords,
    WithoutStopwords,
}

impl Variant {
    pub fn default_core_count(self) -> usize {
        match self {
            Variant::WithStopwords => 20,
            Variant::WithoutStopwords => 15,
        }
    }

    pub fn feature_len(self) -> usize {
        match self {
            Variant::WithStopwords => 95,
            Variant::WithoutStopwords => 85,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::WithStopwords => "with_stopwords",
            Variant::WithoutStopwords => "without_stopwords",
        }
    }
}

/// Default scalar for the end-to-end pipeline and all on-disk artifacts.
pub type DefaultScalar = f64;

pub type TermStats = corpus::TermStats<DefaultScalar>;
pub type EmbeddingModel = embedding::EmbeddingModel<DefaultScalar>;
pub type W2VGraph = graph::W2VGraph<DefaultScalar>;
pub type FeatureMatrix = features::FeatureMatrix<DefaultScalar>;
pub type SvmModel = learning::SvmModel<DefaultScalar>;
pub type ClusterResult = learning::ClusterResult<DefaultScalar>;

/// FNV-1a 64-bit hash; used to derive per-document seeds and cache keys
/// deterministically across runs and platforms.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

/// Deterministic per-document seed derived from a global seed and a doc id.
pub fn doc_seed(global_seed: u64, doc_id: &str) -> u64 {
    // splitmix64 finalizer over the combined value
    let mut z = global_seed ^ fnv1a64(doc_id.as_bytes());
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}
