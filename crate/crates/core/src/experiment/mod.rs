//! Experiment configuration, orchestration and reporting: one JSON config
//! drives ingest -> embed -> graph -> features -> learn -> report.

mod pipeline;

pub use pipeline::{
    build_features, build_graphs, embed_documents, export_features, export_graphs,
    ingest_summary, prepare_corpus, rank_features, run_experiment, CorpusSummary, DocSummary,
    PreparedCorpus, RankingEntry, RankingReport,
};

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::CorpusError;
use crate::embedding::EmbeddingError;
use crate::features::{FeatureError, GraphWordCaps};
use crate::graph::GraphError;
use crate::learning::{ClassMetrics, LearnError};
use crate::Variant;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid config: {0}")]
    ConfigInvalid(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("document {doc_id}: {source}")]
    Embedding {
        doc_id: String,
        source: EmbeddingError,
    },
    #[error("document {doc_id}: {source}")]
    Graph { doc_id: String, source: GraphError },
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    Learn(#[from] LearnError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureSet {
    W2v,
    W2vPlus,
    Tfidf,
    TfidfTop100,
    CharNgram,
    Stylometry,
}

impl FeatureSet {
    pub fn as_str(self) -> &'static str {
        match self {
            FeatureSet::W2v => "w2v",
            FeatureSet::W2vPlus => "w2v_plus",
            FeatureSet::Tfidf => "tfidf",
            FeatureSet::TfidfTop100 => "tfidf_top100",
            FeatureSet::CharNgram => "char_ngram",
            FeatureSet::Stylometry => "stylometry",
        }
    }

    pub fn uses_graphs(self) -> bool {
        matches!(self, FeatureSet::W2v | FeatureSet::W2vPlus)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Classify,
    Cluster,
}

/// Which document label the experiment predicts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Author,
    Genre,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GraphSettings {
    /// Core-word count; defaults to the variant's value (20/15) when omitted.
    pub n: Option<usize>,
    pub k: usize,
}

impl Default for GraphSettings {
    fn default() -> Self {
        GraphSettings { n: None, k: 10 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EmbeddingSettings {
    pub dimension: usize,
    pub window: usize,
    pub negatives: usize,
    /// Defaults to max(5, ceil(100000 / doc tokens)) when omitted.
    pub epochs: Option<usize>,
    pub initial_learning_rate: f64,
    pub min_count: usize,
}

impl Default for EmbeddingSettings {
    fn default() -> Self {
        EmbeddingSettings {
            dimension: 100,
            window: 5,
            negatives: 5,
            epochs: None,
            initial_learning_rate: 0.025,
            min_count: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SvmSettings {
    pub c: f64,
    pub epochs: usize,
}

impl Default for SvmSettings {
    fn default() -> Self {
        SvmSettings { c: 1.0, epochs: 100 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct KMeansSettings {
    pub restarts: usize,
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for KMeansSettings {
    fn default() -> Self {
        KMeansSettings {
            restarts: 10,
            max_iter: 300,
            tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SplitSettings {
    pub train_ratio: f64,
    pub stratified: bool,
}

impl Default for SplitSettings {
    fn default() -> Self {
        SplitSettings {
            train_ratio: 0.7,
            stratified: true,
        }
    }
}

/// One experiment: corpus, variant, feature set, task and every knob, loaded
/// from a single JSON file (CLI flags override individual fields).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub corpus: PathBuf,
    pub stopwords: Option<PathBuf>,
    pub variant: Variant,
    pub feature_set: FeatureSet,
    pub task: Task,
    pub target: Target,
    pub lowercase: bool,
    pub graph: GraphSettings,
    pub embedding: EmbeddingSettings,
    pub svm: SvmSettings,
    pub kmeans: KMeansSettings,
    pub split: SplitSettings,
    pub graph_words: GraphWordCaps,
    /// Rank threshold for the "index under threshold" graph features.
    pub index_threshold: usize,
    pub ngram_max: usize,
    pub ngram_top: usize,
    pub tfidf_top: usize,
    /// Cluster count override; defaults to the number of distinct labels.
    pub cluster_k: Option<usize>,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub workers: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            corpus: PathBuf::from("corpus.jsonl"),
            stopwords: None,
            variant: Variant::WithStopwords,
            feature_set: FeatureSet::W2v,
            task: Task::Classify,
            target: Target::Author,
            lowercase: true,
            graph: GraphSettings::default(),
            embedding: EmbeddingSettings::default(),
            svm: SvmSettings::default(),
            kmeans: KMeansSettings::default(),
            split: SplitSettings::default(),
            graph_words: GraphWordCaps::default(),
            index_threshold: 100,
            ngram_max: 4,
            ngram_top: 30_000,
            tfidf_top: 100,
            cluster_k: None,
            out_dir: PathBuf::from("out"),
            seed: 0,
            workers: None,
        }
    }
}

impl ExperimentConfig {
    /// Effective core-word count.
    pub fn core_count(&self) -> usize {
        self.graph.n.unwrap_or(self.variant.default_core_count())
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.variant == Variant::WithoutStopwords && self.stopwords.is_none() {
            return Err(ExperimentError::ConfigInvalid(
                "variant=without_stopwords requires a stopword file".into(),
            ));
        }
        if !(0.0..1.0).contains(&self.split.train_ratio) || self.split.train_ratio <= 0.0 {
            return Err(ExperimentError::ConfigInvalid(
                "split.train_ratio must be in (0, 1)".into(),
            ));
        }
        if self.graph.k == 0 || self.core_count() == 0 {
            return Err(ExperimentError::ConfigInvalid("graph N and K must be >= 1".into()));
        }
        if self.embedding.dimension < 2 {
            return Err(ExperimentError::ConfigInvalid(
                "embedding.dimension must be >= 2".into(),
            ));
        }
        Ok(())
    }

    /// Stable hash of the resolved config; versions the output directory.
    pub fn config_hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let canonical = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        let mut hex = String::with_capacity(16);
        for byte in digest.iter().take(8) {
            hex.push_str(&format!("{byte:02x}"));
        }
        hex
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitSummary {
    pub ratio: f64,
    pub seed: u64,
    pub stratified: bool,
    pub train_size: usize,
    pub test_size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfusionSummary {
    pub classes: Vec<String>,
    /// rows = truth, columns = prediction
    pub matrix: Vec<Vec<usize>>,
}

/// Everything one experiment produced, serialized as `report.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub feature_set: FeatureSet,
    pub variant: Variant,
    pub task: Task,
    pub target: Target,
    pub learner: String,
    pub config_hash: String,
    pub doc_count: usize,
    pub feature_count: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub split: Option<SplitSummary>,
    pub per_class: Vec<ClassMetrics<f64>>,
    pub weighted_f1: f64,
    pub confusion: ConfusionSummary,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cluster_mapping: Option<BTreeMap<usize, String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub feature_ranking: Option<Vec<RankingEntry>>,
}
