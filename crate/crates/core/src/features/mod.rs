//! Fixed-layout numeric feature vectors per document: the Word2vec-graph
//! vector (95 with stopwords / 85 without), its graph-words extension, and
//! the TF-IDF, character n-gram and stylometry baselines.

mod graph_vec;
mod ngram;
mod select;
mod stylometry;
mod tfidf;

pub use graph_vec::{
    graph_feature_matrix, graph_feature_vector, graph_word_vector, w2v_plus_matrix, GraphWordCaps,
    GraphWords,
};
pub use ngram::char_ngram_features;
pub use select::{anova_f_rank, chi_square_score, information_gain, RankedFeature};
pub use stylometry::{stylometry_features, stylometry_layout, stylometry_matrix};
pub use tfidf::tfidf_features;

use ndarray::Array2;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;
use crate::Variant;

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("graph built with N={got} but layout expects N={expected}")]
    VariantMismatch { expected: usize, got: usize },
    #[error("feature selection requires class labels")]
    LabelsRequired,
    #[error("word {0:?} not in corpus vocabulary")]
    WordNotInVocabulary(String),
    #[error("ANOVA needs at least 2 classes")]
    SingleClass,
    #[error("labels length {0} does not match row count {1}")]
    LabelLengthMismatch(usize, usize),
}

/// Ordered, versioned feature naming. The layout is the single source of
/// truth for vector length and column meaning.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureLayout {
    /// Which extractor produced this layout (w2v_graph, w2v_plus, tfidf, ...).
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub variant: Option<Variant>,
    /// Core-word slot count for graph layouts.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub core_slots: Option<usize>,
    /// Rank threshold for the "index under threshold" features.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub index_threshold: Option<usize>,
    pub names: Vec<String>,
}

impl FeatureLayout {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Graph-feature layout for one of the paper variants: N=20 giving 95
    /// features with stopwords, N=15 giving 85 without.
    pub fn graph(variant: Variant) -> Self {
        Self::graph_with_core_count(variant.default_core_count(), Some(variant), 100)
    }

    /// Graph-feature layout for an arbitrary core-word count (55 + 2N names).
    pub fn graph_with_core_count(
        n: usize,
        variant: Option<Variant>,
        index_threshold: usize,
    ) -> Self {
        let mut names = Vec::with_capacity(55 + 2 * n);
        for kind in ["node", "edge"] {
            for t in ["core", "multi", "boundary"] {
                names.push(format!("{t}_{kind}_count"));
            }
        }
        for group in ["node_weight", "edge_weight"] {
            for t in ["core", "multi", "boundary"] {
                for stat in ["min", "max", "avg"] {
                    names.push(format!("{t}_{group}_{stat}"));
                }
            }
        }
        for t in ["core", "multi", "boundary"] {
            for stat in ["min", "max", "avg"] {
                names.push(format!("core_degree_{t}_edges_{stat}"));
            }
        }
        names.push("core_degree_total".to_string());
        for i in 1..=n {
            names.push(format!("core{i}_core_degree"));
        }
        for i in 1..=n {
            names.push(format!("core{i}_multi_degree"));
        }
        for t in ["multi", "boundary"] {
            for stat in ["min", "max", "avg", "std"] {
                names.push(format!("{t}_index_{stat}"));
            }
        }
        names.push("multi_index_under_threshold_count".to_string());
        names.push("boundary_index_under_threshold_count".to_string());
        for d in 0..=5 {
            names.push(format!("core_multi_degree_eq_{d}_count"));
        }
        for which in ["eq_min", "eq_max", "gt_avg", "lt_avg"] {
            names.push(format!("core_total_degree_{which}_count"));
        }
        names.push("node_count_total".to_string());

        FeatureLayout {
            kind: "w2v_graph".to_string(),
            variant,
            core_slots: Some(n),
            index_threshold: Some(index_threshold),
            names,
        }
    }

    pub fn named(kind: &str, names: Vec<String>) -> Self {
        FeatureLayout {
            kind: kind.to_string(),
            variant: None,
            core_slots: None,
            index_threshold: None,
            names,
        }
    }
}

/// An M x F matrix of per-document features, row order = corpus order.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix<S> {
    pub row_ids: Vec<String>,
    pub layout: FeatureLayout,
    pub values: Array2<S>,
}

impl<S: Scalar> FeatureMatrix<S> {
    pub fn from_rows(
        row_ids: Vec<String>,
        layout: FeatureLayout,
        rows: Vec<Vec<S>>,
    ) -> FeatureMatrix<S> {
        let f = layout.len();
        assert_eq!(rows.len(), row_ids.len());
        let mut values = Array2::default((rows.len(), f));
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), f, "row {i} length mismatch vs layout");
            for (j, v) in row.into_iter().enumerate() {
                values[(i, j)] = v;
            }
        }
        FeatureMatrix {
            row_ids,
            layout,
            values,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.values.nrows()
    }

    pub fn n_features(&self) -> usize {
        self.values.ncols()
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Concatenate columns of two matrices over the same documents.
    pub fn hstack(&self, other: &FeatureMatrix<S>, kind: &str) -> FeatureMatrix<S> {
        assert_eq!(self.row_ids, other.row_ids, "matrices cover different documents");
        let mut names = self.layout.names.clone();
        names.extend(other.layout.names.iter().cloned());
        let mut layout = FeatureLayout::named(kind, names);
        layout.variant = self.layout.variant;
        layout.core_slots = self.layout.core_slots;
        layout.index_threshold = self.layout.index_threshold;
        let mut values = Array2::default((self.n_rows(), self.n_features() + other.n_features()));
        for i in 0..self.n_rows() {
            for j in 0..self.n_features() {
                values[(i, j)] = self.values[(i, j)];
            }
            for j in 0..other.n_features() {
                values[(i, self.n_features() + j)] = other.values[(i, j)];
            }
        }
        FeatureMatrix {
            row_ids: self.row_ids.clone(),
            layout,
            values,
        }
    }

    /// CSV export: `doc_id` first, then the layout-ordered named columns.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("doc_id");
        for name in &self.layout.names {
            out.push(',');
            out.push_str(&csv_field(name));
        }
        out.push('\n');
        for (i, id) in self.row_ids.iter().enumerate() {
            out.push_str(&csv_field(id));
            for j in 0..self.n_features() {
                out.push(',');
                out.push_str(&format!("{}", self.values[(i, j)]));
            }
            out.push('\n');
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
