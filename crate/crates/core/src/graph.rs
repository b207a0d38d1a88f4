//! The Word2vec graph of a document: top-frequency core words linked to
//! their embedding-nearest neighbors.
//!
//! Node taxonomy: `core` nodes are the top-N most frequent words; a non-core
//! word selected as a neighbor is `multi` when it connects to two or more
//! core nodes and `boundary` when it connects to exactly one. Edges take the
//! type of their non-core endpoint, or `core` when both endpoints are core.
//! Node weight is the word's relative frequency, edge weight the cosine
//! similarity of the two word vectors, node index the 1-based frequency rank.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::TermStats;
use crate::embedding::{top_k_similar, EmbeddingModel};
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("word {0:?} present in term statistics but missing from the embedding model")]
    ModelStatsMismatch(String),
    #[error("word {0:?} selected as neighbor but missing from term statistics")]
    NeighborNotInStats(String),
    #[error("graph JSON: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphParams {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
}

impl GraphParams {
    pub fn new(n: usize, k: usize) -> Self {
        assert!(n >= 1 && k >= 1);
        GraphParams { n, k }
    }
}

impl Default for GraphParams {
    fn default() -> Self {
        GraphParams { n: 20, k: 10 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeType {
    Core,
    Multi,
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeType {
    Core,
    Multi,
    Boundary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphNode<S> {
    pub word: String,
    #[serde(rename = "type")]
    pub node_type: NodeType,
    /// Relative frequency of the word in the document.
    pub weight: S,
    /// 1-based frequency rank of the word in the document.
    pub index: usize,
}

/// Undirected edge; endpoints are stored with the lower-index word first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphEdge<S> {
    pub a: String,
    pub b: String,
    #[serde(rename = "type")]
    pub edge_type: EdgeType,
    /// Cosine similarity of the two word vectors.
    pub weight: S,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct W2VGraph<S> {
    pub doc_id: String,
    pub params: GraphParams,
    /// Sorted by index (frequency rank).
    pub nodes: Vec<GraphNode<S>>,
    /// Sorted by (index of a, index of b).
    pub edges: Vec<GraphEdge<S>>,
}

impl<S: Scalar> W2VGraph<S> {
    pub fn node(&self, word: &str) -> Option<&GraphNode<S>> {
        self.nodes.iter().find(|n| n.word == word)
    }

    pub fn nodes_of_type(&self, t: NodeType) -> impl Iterator<Item = &GraphNode<S>> {
        self.nodes.iter().filter(move |n| n.node_type == t)
    }

    pub fn edges_of_type(&self, t: EdgeType) -> impl Iterator<Item = &GraphEdge<S>> {
        self.edges.iter().filter(move |e| e.edge_type == t)
    }

    /// Core nodes in rank order.
    pub fn core_nodes(&self) -> Vec<&GraphNode<S>> {
        self.nodes_of_type(NodeType::Core).collect()
    }

    /// Degree of `word` counting only edges of type `t`.
    pub fn degree(&self, word: &str, t: EdgeType) -> usize {
        self.edges
            .iter()
            .filter(|e| e.edge_type == t && (e.a == word || e.b == word))
            .count()
    }

    /// Degree of `word` over all edge types.
    pub fn total_degree(&self, word: &str) -> usize {
        self.edges
            .iter()
            .filter(|e| e.a == word || e.b == word)
            .count()
    }
}

/// Build the Word2vec graph of one document.
///
/// `stats` and `model` must come from the same token sequence; every top-N
/// word must exist in the model vocabulary. Core words with a zero vector
/// (possible only with injected models) contribute no edges. Similarity
/// candidates are the model's whole vocabulary minus the core word itself.
pub fn build_graph<S: Scalar>(
    doc_id: &str,
    stats: &TermStats<S>,
    model: &EmbeddingModel<S>,
    params: GraphParams,
) -> Result<W2VGraph<S>, GraphError> {
    let core_count = params.n.min(stats.vocab_size());
    let ranked = stats.ranked();

    let mut core_ranks: HashMap<&str, usize> = HashMap::with_capacity(core_count);
    for term in &ranked[..core_count] {
        if !model.contains(&term.word) {
            return Err(GraphError::ModelStatsMismatch(term.word.clone()));
        }
        core_ranks.insert(term.word.as_str(), stats.rank(&term.word).unwrap());
    }

    let candidates: BTreeSet<String> = model.words().iter().cloned().collect();

    // Unordered rank pairs already recorded, for core-core dedup.
    let mut seen_core_pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    struct PendingEdge<S> {
        rank_a: usize,
        rank_b: usize,
        word_a: String,
        word_b: String,
        weight: S,
        core_to_core: bool,
    }
    let mut pending: Vec<PendingEdge<S>> = Vec::new();
    // Non-core neighbor -> set of distinct core ranks it connects to.
    let mut neighbor_cores: BTreeMap<String, BTreeSet<usize>> = BTreeMap::new();

    for term in &ranked[..core_count] {
        let word = term.word.as_str();
        let rank = core_ranks[word];
        let vector = model.vector(word).expect("core word checked above");
        if vector.iter().all(|&x| x == S::zero()) {
            continue; // zero vector: similarity undefined, no edges
        }
        let neighbors =
            top_k_similar(model, word, params.k, &candidates).expect("query word in vocab");
        for (neighbor, sim) in neighbors {
            if let Some(&other_rank) = core_ranks.get(neighbor.as_str()) {
                let key = (rank.min(other_rank), rank.max(other_rank));
                if seen_core_pairs.insert(key) {
                    let (wa, wb) = if rank < other_rank {
                        (word.to_string(), neighbor.clone())
                    } else {
                        (neighbor.clone(), word.to_string())
                    };
                    pending.push(PendingEdge {
                        rank_a: key.0,
                        rank_b: key.1,
                        word_a: wa,
                        word_b: wb,
                        weight: sim,
                        core_to_core: true,
                    });
                }
            } else {
                let n_rank = stats
                    .rank(&neighbor)
                    .ok_or_else(|| GraphError::NeighborNotInStats(neighbor.clone()))?;
                neighbor_cores
                    .entry(neighbor.clone())
                    .or_default()
                    .insert(rank);
                let (key, wa, wb) = if rank < n_rank {
                    ((rank, n_rank), word.to_string(), neighbor.clone())
                } else {
                    ((n_rank, rank), neighbor.clone(), word.to_string())
                };
                pending.push(PendingEdge {
                    rank_a: key.0,
                    rank_b: key.1,
                    word_a: wa,
                    word_b: wb,
                    weight: sim,
                    core_to_core: false,
                });
            }
        }
    }

    let mut nodes: Vec<GraphNode<S>> = Vec::new();
    for term in &ranked[..core_count] {
        nodes.push(GraphNode {
            word: term.word.clone(),
            node_type: NodeType::Core,
            weight: term.rel_freq,
            index: stats.rank(&term.word).unwrap(),
        });
    }
    for (neighbor, cores) in &neighbor_cores {
        let node_type = if cores.len() >= 2 {
            NodeType::Multi
        } else {
            NodeType::Boundary
        };
        nodes.push(GraphNode {
            word: neighbor.clone(),
            node_type,
            weight: stats.rel_freq(neighbor).unwrap(),
            index: stats.rank(neighbor).unwrap(),
        });
    }
    nodes.sort_by_key(|n| n.index);

    let mut edges: Vec<GraphEdge<S>> = pending
        .into_iter()
        .map(|e| {
            let edge_type = if e.core_to_core {
                EdgeType::Core
            } else {
                // The non-core endpoint decides the type.
                let non_core = if core_ranks.contains_key(e.word_a.as_str()) {
                    &e.word_b
                } else {
                    &e.word_a
                };
                if neighbor_cores[non_core].len() >= 2 {
                    EdgeType::Multi
                } else {
                    EdgeType::Boundary
                }
            };
            ((e.rank_a, e.rank_b), GraphEdge {
                a: e.word_a,
                b: e.word_b,
                edge_type,
                weight: e.weight,
            })
        })
        .collect::<BTreeMap<_, _>>()
        .into_values()
        .collect();
    edges.shrink_to_fit();

    Ok(W2VGraph {
        doc_id: doc_id.to_string(),
        params,
        nodes,
        edges,
    })
}

fn dot_color(t: NodeType) -> &'static str {
    match t {
        NodeType::Core => "red",
        NodeType::Multi => "green",
        NodeType::Boundary => "black",
    }
}

fn dot_edge_color(t: EdgeType) -> &'static str {
    match t {
        EdgeType::Core => "red",
        EdgeType::Multi => "green",
        EdgeType::Boundary => "black",
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering: core red, multi green, boundary black; edge labels
/// carry the weight rounded to 4 decimals.
pub fn to_dot<S: Scalar>(graph: &W2VGraph<S>) -> String {
    let mut out = String::new();
    writeln!(out, "graph \"{}\" {{", dot_escape(&graph.doc_id)).unwrap();
    for node in &graph.nodes {
        writeln!(
            out,
            "  \"{}\" [color={}, label=\"{}\"];",
            dot_escape(&node.word),
            dot_color(node.node_type),
            dot_escape(&node.word),
        )
        .unwrap();
    }
    for edge in &graph.edges {
        writeln!(
            out,
            "  \"{}\" -- \"{}\" [color={}, label=\"{:.4}\"];",
            dot_escape(&edge.a),
            dot_escape(&edge.b),
            dot_edge_color(edge.edge_type),
            edge.weight.to_f64().unwrap_or(f64::NAN),
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

/// Lossless JSON export (round-trips to an identical graph).
pub fn to_json<S: Scalar>(graph: &W2VGraph<S>) -> Result<String, GraphError> {
    Ok(serde_json::to_string_pretty(graph)?)
}

pub fn from_json<S: Scalar>(text: &str) -> Result<W2VGraph<S>, GraphError> {
    Ok(serde_json::from_str(text)?)
}
