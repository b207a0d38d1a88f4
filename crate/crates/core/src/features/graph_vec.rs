//! Structural features of a Word2vec graph, and the graph-words extension
//! that appends vocabulary indices of the graph's word sets.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{FeatureError, FeatureLayout, FeatureMatrix};
use crate::corpus::Vocabulary;
use crate::graph::{EdgeType, NodeType, W2VGraph};
use crate::scalar::{max_or_zero, mean, min_or_zero, std_dev, Scalar};

/// Per-word degree triple, indexed by edge type.
#[derive(Default, Clone, Copy)]
struct Degrees {
    core: usize,
    multi: usize,
    boundary: usize,
}

impl Degrees {
    fn of(&self, t: EdgeType) -> usize {
        match t {
            EdgeType::Core => self.core,
            EdgeType::Multi => self.multi,
            EdgeType::Boundary => self.boundary,
        }
    }

    fn total(&self) -> usize {
        self.core + self.multi + self.boundary
    }
}

/// The fixed-order graph feature vector. Length is 55 + 2N where N is the
/// layout's core-slot count (95 for N=20, 85 for N=15). Statistics over empty
/// node/edge sets are 0, never NaN.
pub fn graph_feature_vector<S: Scalar>(
    graph: &W2VGraph<S>,
    layout: &FeatureLayout,
) -> Result<Vec<S>, FeatureError> {
    let n_slots = layout
        .core_slots
        .expect("graph feature layout carries core_slots");
    if graph.params.n != n_slots {
        return Err(FeatureError::VariantMismatch {
            expected: n_slots,
            got: graph.params.n,
        });
    }
    let threshold = layout.index_threshold.unwrap_or(100);

    let mut degrees: HashMap<&str, Degrees> = HashMap::new();
    for edge in &graph.edges {
        for word in [edge.a.as_str(), edge.b.as_str()] {
            let d = degrees.entry(word).or_default();
            match edge.edge_type {
                EdgeType::Core => d.core += 1,
                EdgeType::Multi => d.multi += 1,
                EdgeType::Boundary => d.boundary += 1,
            }
        }
    }
    let deg = |word: &str| degrees.get(word).copied().unwrap_or_default();

    let node_types = [NodeType::Core, NodeType::Multi, NodeType::Boundary];
    let edge_types = [EdgeType::Core, EdgeType::Multi, EdgeType::Boundary];
    let core_nodes = graph.core_nodes();

    let mut out: Vec<S> = Vec::with_capacity(layout.len());

    // (1) node and edge counts per type
    for t in node_types {
        out.push(S::from_usize_lossy(graph.nodes_of_type(t).count()));
    }
    for t in edge_types {
        out.push(S::from_usize_lossy(graph.edges_of_type(t).count()));
    }

    // (2) min/max/avg of node weights then edge weights, per type
    for t in node_types {
        let weights: Vec<S> = graph.nodes_of_type(t).map(|n| n.weight).collect();
        out.push(min_or_zero(&weights));
        out.push(max_or_zero(&weights));
        out.push(mean(&weights));
    }
    for t in edge_types {
        let weights: Vec<S> = graph.edges_of_type(t).map(|e| e.weight).collect();
        out.push(min_or_zero(&weights));
        out.push(max_or_zero(&weights));
        out.push(mean(&weights));
    }

    // (3) core-node degree statistics per edge type, plus the total degree count
    for t in edge_types {
        let ds: Vec<S> = core_nodes
            .iter()
            .map(|n| S::from_usize_lossy(deg(&n.word).of(t)))
            .collect();
        out.push(min_or_zero(&ds));
        out.push(max_or_zero(&ds));
        out.push(mean(&ds));
    }
    let total_core_degree: usize = core_nodes.iter().map(|n| deg(&n.word).total()).sum();
    out.push(S::from_usize_lossy(total_core_degree));

    // (4) per-core-node degree histogram: core-edge degrees for rank slots
    // 1..N, then multi-edge degrees; absent slots stay 0
    for t in [EdgeType::Core, EdgeType::Multi] {
        for slot in 0..n_slots {
            let v = core_nodes
                .get(slot)
                .map(|n| S::from_usize_lossy(deg(&n.word).of(t)))
                .unwrap_or_else(S::zero);
            out.push(v);
        }
    }

    // (5) index statistics of multi and boundary nodes
    for t in [NodeType::Multi, NodeType::Boundary] {
        let idxs: Vec<S> = graph
            .nodes_of_type(t)
            .map(|n| S::from_usize_lossy(n.index))
            .collect();
        out.push(min_or_zero(&idxs));
        out.push(max_or_zero(&idxs));
        out.push(mean(&idxs));
        out.push(std_dev(&idxs));
    }

    // (6) nodes with index under the rank threshold
    for t in [NodeType::Multi, NodeType::Boundary] {
        let count = graph.nodes_of_type(t).filter(|n| n.index < threshold).count();
        out.push(S::from_usize_lossy(count));
    }

    // (7) core nodes with multi-edge degree exactly 0..5
    for d in 0..=5usize {
        let count = core_nodes
            .iter()
            .filter(|n| deg(&n.word).multi == d)
            .count();
        out.push(S::from_usize_lossy(count));
    }

    // (8) core nodes with total degree at min / at max / above avg / below avg
    let totals: Vec<usize> = core_nodes.iter().map(|n| deg(&n.word).total()).collect();
    let min_d = totals.iter().copied().min().unwrap_or(0);
    let max_d = totals.iter().copied().max().unwrap_or(0);
    let avg_d = if totals.is_empty() {
        0.0
    } else {
        totals.iter().sum::<usize>() as f64 / totals.len() as f64
    };
    out.push(S::from_usize_lossy(
        totals.iter().filter(|&&d| d == min_d).count(),
    ));
    out.push(S::from_usize_lossy(
        totals.iter().filter(|&&d| d == max_d).count(),
    ));
    out.push(S::from_usize_lossy(
        totals.iter().filter(|&&d| (d as f64) > avg_d).count(),
    ));
    out.push(S::from_usize_lossy(
        totals.iter().filter(|&&d| (d as f64) < avg_d).count(),
    ));

    // (9) total node count (reconciliation feature)
    out.push(S::from_usize_lossy(graph.nodes.len()));

    debug_assert_eq!(out.len(), layout.len());
    Ok(out)
}

/// Assemble the graph feature matrix for a corpus of graphs.
pub fn graph_feature_matrix<S: Scalar>(
    graphs: &[W2VGraph<S>],
    layout: &FeatureLayout,
) -> Result<FeatureMatrix<S>, FeatureError> {
    let mut rows = Vec::with_capacity(graphs.len());
    let mut ids = Vec::with_capacity(graphs.len());
    for g in graphs {
        rows.push(graph_feature_vector(g, layout)?);
        ids.push(g.doc_id.clone());
    }
    Ok(FeatureMatrix::from_rows(ids, layout.clone(), rows))
}

/// Width caps for the multi and boundary word lists of the graph-words vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphWordCaps {
    pub max_multi: usize,
    pub max_boundary: usize,
}

impl Default for GraphWordCaps {
    fn default() -> Self {
        GraphWordCaps {
            max_multi: 40,
            max_boundary: 60,
        }
    }
}

impl GraphWordCaps {
    /// Combined vector width for a graph with N core slots.
    pub fn width(&self, n: usize) -> usize {
        n + self.max_multi + self.max_boundary
    }
}

/// The graph's word sets and their fixed-width corpus-vocabulary encoding
/// (1-based indices, 0 = padding).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphWords {
    pub core_words: Vec<String>,
    pub multi_words: Vec<String>,
    pub boundary_words: Vec<String>,
    pub indices: Vec<usize>,
}

impl GraphWords {
    /// All retained graph words, for set-similarity comparisons.
    pub fn word_set(&self) -> std::collections::BTreeSet<&str> {
        self.core_words
            .iter()
            .chain(&self.multi_words)
            .chain(&self.boundary_words)
            .map(String::as_str)
            .collect()
    }
}

/// Extract graph words: core words in rank order padded to N; multi and
/// boundary words ordered by descending node weight (ties by ascending rank),
/// truncated or padded to the caps.
pub fn graph_word_vector<S: Scalar>(
    graph: &W2VGraph<S>,
    vocab: &Vocabulary,
    caps: GraphWordCaps,
) -> Result<GraphWords, FeatureError> {
    let lookup = |word: &str| {
        vocab
            .index_of(word)
            .ok_or_else(|| FeatureError::WordNotInVocabulary(word.to_string()))
    };

    let core_words: Vec<String> = graph
        .core_nodes()
        .iter()
        .map(|n| n.word.clone())
        .collect();

    let ordered_words = |t: NodeType, cap: usize| -> Vec<String> {
        let mut nodes: Vec<_> = graph.nodes_of_type(t).collect();
        nodes.sort_by(|a, b| {
            b.weight
                .partial_cmp(&a.weight)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.index.cmp(&b.index))
        });
        nodes.truncate(cap);
        nodes.into_iter().map(|n| n.word.clone()).collect()
    };
    let multi_words = ordered_words(NodeType::Multi, caps.max_multi);
    let boundary_words = ordered_words(NodeType::Boundary, caps.max_boundary);

    let n = graph.params.n;
    let mut indices = Vec::with_capacity(caps.width(n));
    for slot in 0..n {
        indices.push(match core_words.get(slot) {
            Some(w) => lookup(w)?,
            None => 0,
        });
    }
    for slot in 0..caps.max_multi {
        indices.push(match multi_words.get(slot) {
            Some(w) => lookup(w)?,
            None => 0,
        });
    }
    for slot in 0..caps.max_boundary {
        indices.push(match boundary_words.get(slot) {
            Some(w) => lookup(w)?,
            None => 0,
        });
    }

    Ok(GraphWords {
        core_words,
        multi_words,
        boundary_words,
        indices,
    })
}

/// w2v+ feature matrix: graph features concatenated with the graph-word
/// vocabulary indices (M x (F + W)).
pub fn w2v_plus_matrix<S: Scalar>(
    graphs: &[W2VGraph<S>],
    layout: &FeatureLayout,
    vocab: &Vocabulary,
    caps: GraphWordCaps,
) -> Result<(FeatureMatrix<S>, Vec<GraphWords>), FeatureError> {
    let base = graph_feature_matrix(graphs, layout)?;
    let n = layout.core_slots.expect("graph layout");

    let mut word_rows = Vec::with_capacity(graphs.len());
    let mut all_words = Vec::with_capacity(graphs.len());
    for g in graphs {
        let words = graph_word_vector(g, vocab, caps)?;
        word_rows.push(
            words
                .indices
                .iter()
                .map(|&i| S::from_usize_lossy(i))
                .collect::<Vec<S>>(),
        );
        all_words.push(words);
    }

    let mut names = Vec::with_capacity(caps.width(n));
    for i in 1..=n {
        names.push(format!("core_word_idx_{i}"));
    }
    for i in 1..=caps.max_multi {
        names.push(format!("multi_word_idx_{i}"));
    }
    for i in 1..=caps.max_boundary {
        names.push(format!("boundary_word_idx_{i}"));
    }
    let words_layout = FeatureLayout::named("graph_words", names);
    let words_matrix = FeatureMatrix::from_rows(base.row_ids.clone(), words_layout, word_rows);

    let mut combined = base.hstack(&words_matrix, "w2v_plus");
    combined.layout.variant = layout.variant;
    Ok((combined, all_words))
}
