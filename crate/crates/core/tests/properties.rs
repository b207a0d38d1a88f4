//! Property tests for the spec-level invariants.

use std::collections::BTreeSet;

use proptest::prelude::*;

use stylograph::corpus::{knee_point, term_stats, tokenize, TokenSeq};
use stylograph::embedding::{cosine, top_k_similar, EmbeddingHyperparams, EmbeddingModel};
use stylograph::features::{graph_feature_vector, FeatureLayout};
use stylograph::graph::{build_graph, EdgeType, GraphParams, NodeType};
use stylograph::learning::weighted_f1;

fn token_seq(words: Vec<String>) -> TokenSeq {
    TokenSeq {
        tokens: words,
        stopwords_removed: false,
    }
}

fn small_words() -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec(prop::sample::select(vec!["a", "b", "c", "d", "e", "f"]), 1..60)
        .prop_map(|v| v.into_iter().map(str::to_string).collect())
}

proptest! {
    #[test]
    fn rel_freq_sums_to_one_and_counts_to_total(words in small_words()) {
        let stats = term_stats::<f64>(&token_seq(words.clone()));
        let rel: f64 = stats.ranked().iter().map(|t| t.rel_freq).sum();
        prop_assert!((rel - 1.0).abs() < 1e-9);
        let counted: usize = stats.ranked().iter().map(|t| t.count).sum();
        prop_assert_eq!(counted, words.len());
    }

    #[test]
    fn term_stats_is_deterministic(words in small_words()) {
        let a = term_stats::<f64>(&token_seq(words.clone()));
        let b = term_stats::<f64>(&token_seq(words));
        for term in a.ranked() {
            prop_assert_eq!(a.rank(&term.word), b.rank(&term.word));
        }
    }

    #[test]
    fn tokenize_with_empty_stopword_set_is_identity(text in "[a-z ]{1,40}a[a-z ]{0,10}") {
        let empty = BTreeSet::new();
        let with = tokenize(&text, Some(&empty), true).unwrap();
        let without = tokenize(&text, None, true).unwrap();
        prop_assert_eq!(with, without);
    }

    #[test]
    fn knee_is_scale_invariant(
        curve in prop::collection::vec(1usize..500, 3..40),
        scale in 1usize..50,
    ) {
        let mut sorted = curve;
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let scaled: Vec<usize> = sorted.iter().map(|c| c * scale).collect();
        prop_assert_eq!(
            knee_point::<f64>(&sorted).unwrap(),
            knee_point::<f64>(&scaled).unwrap()
        );
    }

    #[test]
    fn cosine_self_symmetry_and_positive_scaling(
        u in prop::collection::vec(-10.0f64..10.0, 2..6),
        v_seed in prop::collection::vec(-10.0f64..10.0, 2..6),
        alpha in 0.01f64..50.0,
    ) {
        let dim = u.len().min(v_seed.len());
        let u = &u[..dim];
        let v = &v_seed[..dim];
        prop_assume!(u.iter().any(|&x| x != 0.0));
        prop_assume!(v.iter().any(|&x| x != 0.0));

        prop_assert!((cosine::<f64>(u, u).unwrap() - 1.0).abs() < 1e-9);
        let uv = cosine::<f64>(u, v).unwrap();
        let vu = cosine::<f64>(v, u).unwrap();
        prop_assert!((uv - vu).abs() < 1e-12);
        let scaled: Vec<f64> = u.iter().map(|&x| x * alpha).collect();
        prop_assert!((cosine::<f64>(&scaled, v).unwrap() - uv).abs() < 1e-9);
        prop_assert!(uv >= -1.0 - 1e-12 && uv <= 1.0 + 1e-12);
    }
}

/// Random small model with injected vectors; counts descending so word order
/// equals rank order.
fn injected_model(vectors: &[Vec<f64>]) -> EmbeddingModel<f64> {
    let entries: Vec<(String, usize, Vec<f64>)> = vectors
        .iter()
        .enumerate()
        .map(|(i, v)| (format!("w{i}"), vectors.len() - i, v.clone()))
        .collect();
    EmbeddingModel::from_vectors(
        entries,
        EmbeddingHyperparams {
            dimension: vectors[0].len(),
            window: 5,
            negatives: 5,
            epochs: 1,
            initial_learning_rate: 0.025,
            min_count: 1,
            seed: 0,
        },
    )
}

fn injected_tokens(n: usize) -> TokenSeq {
    // word w{i} occurs n-i times, emitted in index order
    let mut words = Vec::new();
    for i in 0..n {
        for _ in 0..(n - i) {
            words.push(format!("w{i}"));
        }
    }
    token_seq(words)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn top_k_is_sorted_and_never_returns_query(
        vectors in prop::collection::vec(
            prop::collection::vec(-5.0f64..5.0, 3),
            3..12,
        ),
        k in 1usize..6,
    ) {
        prop_assume!(vectors.iter().all(|v| v.iter().any(|&x| x != 0.0)));
        let model = injected_model(&vectors);
        let candidates: BTreeSet<String> = model.words().iter().cloned().collect();
        let got = top_k_similar(&model, "w0", k, &candidates).unwrap();
        prop_assert!(got.len() <= k);
        prop_assert!(got.iter().all(|(w, _)| w != "w0"));
        for pair in got.windows(2) {
            prop_assert!(pair[0].1 >= pair[1].1);
        }
    }

    #[test]
    fn graph_invariants_hold_for_random_instances(
        vectors in prop::collection::vec(
            prop::collection::vec(-5.0f64..5.0, 3),
            2..16,
        ),
        n in 1usize..6,
        k in 1usize..5,
    ) {
        prop_assume!(vectors.iter().all(|v| v.iter().any(|&x| x != 0.0)));
        let model = injected_model(&vectors);
        let tokens = injected_tokens(vectors.len());
        let stats = term_stats::<f64>(&tokens);
        let graph = build_graph("p", &stats, &model, GraphParams::new(n, k)).unwrap();

        // |core| = min(N, unique words); core indices are exactly 1..|core|
        let core: Vec<_> = graph.nodes_of_type(NodeType::Core).collect();
        prop_assert_eq!(core.len(), n.min(vectors.len()));
        let mut core_indices: Vec<usize> = core.iter().map(|c| c.index).collect();
        core_indices.sort_unstable();
        prop_assert_eq!(core_indices, (1..=core.len()).collect::<Vec<_>>());

        // node-type partition covers all nodes
        let multi = graph.nodes_of_type(NodeType::Multi).count();
        let boundary = graph.nodes_of_type(NodeType::Boundary).count();
        prop_assert_eq!(core.len() + multi + boundary, graph.nodes.len());

        // multi nodes touch >= 2 distinct cores; boundary exactly 1
        for node in graph.nodes_of_type(NodeType::Multi) {
            prop_assert!(graph.total_degree(&node.word) >= 2);
        }
        for node in graph.nodes_of_type(NodeType::Boundary) {
            prop_assert_eq!(graph.total_degree(&node.word), 1);
        }

        // every edge touches >= 1 core node; no self loops; edge bound
        let core_words: BTreeSet<&str> = core.iter().map(|c| c.word.as_str()).collect();
        for edge in &graph.edges {
            prop_assert!(edge.a != edge.b);
            prop_assert!(
                core_words.contains(edge.a.as_str()) || core_words.contains(edge.b.as_str())
            );
        }
        prop_assert!(graph.edges.len() <= core.len() * k);

        // deterministic rebuild
        let again = build_graph("p", &stats, &model, GraphParams::new(n, k)).unwrap();
        prop_assert_eq!(&graph, &again);

        // feature vector has layout length, no NaN, and the degree histogram
        // block sums match the edge-type counts
        let layout = FeatureLayout::graph_with_core_count(n, None, 100);
        let features = graph_feature_vector(&graph, &layout).unwrap();
        prop_assert_eq!(features.len(), layout.len());
        prop_assert!(features.iter().all(|v| v.is_finite()));

        let name_pos = |name: &str| layout.names.iter().position(|x| x == name).unwrap();
        let hist_core: f64 = (1..=n)
            .map(|i| features[name_pos(&format!("core{i}_core_degree"))])
            .sum();
        prop_assert_eq!(hist_core as usize, 2 * graph.edges_of_type(EdgeType::Core).count());
        let hist_multi: f64 = (1..=n)
            .map(|i| features[name_pos(&format!("core{i}_multi_degree"))])
            .sum();
        prop_assert_eq!(hist_multi as usize, graph.edges_of_type(EdgeType::Multi).count());
        let block7: f64 = (0..=5)
            .map(|d| features[name_pos(&format!("core_multi_degree_eq_{d}_count"))])
            .sum();
        prop_assert_eq!(block7 as usize, core.len());
    }

    #[test]
    fn weighted_f1_bounded_and_order_invariant(
        pairs in prop::collection::vec((0usize..4, 0usize..4), 1..40),
        rotation in 0usize..40,
    ) {
        let truth: Vec<String> = pairs.iter().map(|(t, _)| format!("c{t}")).collect();
        let pred: Vec<String> = pairs.iter().map(|(_, p)| format!("c{p}")).collect();
        let f1: f64 = weighted_f1(&truth, &pred).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&f1));

        let r = rotation % pairs.len();
        let rot = |v: &[String]| -> Vec<String> {
            v[r..].iter().chain(&v[..r]).cloned().collect()
        };
        let f1_rot: f64 = weighted_f1(&rot(&truth), &rot(&pred)).unwrap();
        prop_assert!((f1 - f1_rot).abs() < 1e-12);
    }
}
