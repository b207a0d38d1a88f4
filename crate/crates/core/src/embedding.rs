//! Per-document skip-gram negative-sampling embeddings.
//!
//! One model is trained per document over that document's own vocabulary.
//! Training is single-threaded and fully seeded, so the same tokens and
//! hyperparameters always produce bitwise-identical vectors; parallelism
//! belongs at the document level.

use std::collections::{BTreeSet, HashMap};

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::TokenSeq;
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum EmbeddingError {
    #[error("no word reaches min_count {0}")]
    VocabularyEmpty(usize),
    #[error("word {0:?} not in model vocabulary")]
    UnknownWord(String),
    #[error("vector lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("cosine similarity undefined for a zero vector")]
    ZeroVector,
}

/// Training knobs. The embedding dimension is the only one the experiments
/// pin down (100); the rest default to the conventional skip-gram values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingHyperparams {
    pub dimension: usize,
    pub window: usize,
    pub negatives: usize,
    pub epochs: usize,
    pub initial_learning_rate: f64,
    pub min_count: usize,
    pub seed: u64,
}

impl EmbeddingHyperparams {
    /// Defaults with the epoch count scaled so short documents still get
    /// roughly 100k update positions: epochs = max(5, ceil(100000 / tokens)).
    pub fn defaults_for(total_tokens: usize, seed: u64) -> Self {
        EmbeddingHyperparams {
            dimension: 100,
            window: 5,
            negatives: 5,
            epochs: Self::default_epochs(total_tokens),
            initial_learning_rate: 0.025,
            min_count: 1,
            seed,
        }
    }

    pub fn default_epochs(total_tokens: usize) -> usize {
        5usize.max(100_000usize.div_ceil(total_tokens.max(1)))
    }
}

/// An immutable trained model: vocabulary in frequency-rank order plus one
/// dense vector per word.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmbeddingModel<S> {
    words: Vec<String>,
    counts: Vec<usize>,
    vectors: Vec<Vec<S>>,
    hyperparams: EmbeddingHyperparams,
    #[serde(skip)]
    index: HashMap<String, usize>,
}

impl<S: Scalar> EmbeddingModel<S> {
    pub fn dimension(&self) -> usize {
        self.hyperparams.dimension
    }

    pub fn hyperparams(&self) -> &EmbeddingHyperparams {
        &self.hyperparams
    }

    pub fn vocab_len(&self) -> usize {
        self.words.len()
    }

    /// Words in frequency-rank order (most frequent first).
    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn contains(&self, word: &str) -> bool {
        self.index.contains_key(word)
    }

    pub fn vector(&self, word: &str) -> Option<&[S]> {
        self.index.get(word).map(|&i| self.vectors[i].as_slice())
    }

    /// 1-based frequency rank within the model vocabulary.
    pub fn rank(&self, word: &str) -> Option<usize> {
        self.index.get(word).map(|&i| i + 1)
    }

    pub fn count(&self, word: &str) -> Option<usize> {
        self.index.get(word).map(|&i| self.counts[i])
    }

    /// Restore the word lookup table (after deserialization).
    pub fn rebuild_index(&mut self) {
        self.index = self
            .words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
    }

    /// Assemble a model from explicit vectors, in the given word order (used
    /// by tests that inject hand-crafted geometry). Word order defines rank.
    pub fn from_vectors(
        entries: Vec<(String, usize, Vec<S>)>,
        hyperparams: EmbeddingHyperparams,
    ) -> Self {
        let mut words = Vec::with_capacity(entries.len());
        let mut counts = Vec::with_capacity(entries.len());
        let mut vectors = Vec::with_capacity(entries.len());
        for (word, count, vector) in entries {
            words.push(word);
            counts.push(count);
            vectors.push(vector);
        }
        let mut model = EmbeddingModel {
            words,
            counts,
            vectors,
            hyperparams,
            index: HashMap::new(),
        };
        model.rebuild_index();
        model
    }
}

/// Cosine similarity, in [-1, 1].
pub fn cosine<S: Scalar>(u: &[S], v: &[S]) -> Result<S, EmbeddingError> {
    if u.len() != v.len() {
        return Err(EmbeddingError::LengthMismatch(u.len(), v.len()));
    }
    let mut dot = S::zero();
    let mut nu = S::zero();
    let mut nv = S::zero();
    for (&a, &b) in u.iter().zip(v) {
        dot += a * b;
        nu += a * a;
        nv += b * b;
    }
    if nu == S::zero() || nv == S::zero() {
        return Err(EmbeddingError::ZeroVector);
    }
    Ok(dot / (nu.sqrt() * nv.sqrt()))
}

fn is_zero<S: Scalar>(v: &[S]) -> bool {
    v.iter().all(|&x| x == S::zero())
}

/// The `k` candidates most cosine-similar to `word`, descending. The query
/// word itself is never returned; similarity ties break by ascending
/// frequency rank of the candidate. Candidates missing from the vocabulary
/// or carrying a zero vector are skipped.
pub fn top_k_similar<S: Scalar>(
    model: &EmbeddingModel<S>,
    word: &str,
    k: usize,
    candidates: &BTreeSet<String>,
) -> Result<Vec<(String, S)>, EmbeddingError> {
    let query = model
        .vector(word)
        .ok_or_else(|| EmbeddingError::UnknownWord(word.to_string()))?;
    if is_zero(query) {
        return Err(EmbeddingError::ZeroVector);
    }

    // Walk the vocabulary in rank order so equal similarities keep rank order.
    let mut scored: Vec<(usize, S)> = Vec::new();
    for (i, w) in model.words.iter().enumerate() {
        if w == word || !candidates.contains(w) {
            continue;
        }
        let v = &model.vectors[i];
        if is_zero(v) {
            continue;
        }
        let sim = cosine(query, v)?;
        scored.push((i, sim));
    }
    scored.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.0.cmp(&b.0))
    });
    scored.truncate(k);
    Ok(scored
        .into_iter()
        .map(|(i, sim)| (model.words[i].clone(), sim))
        .collect())
}

/// Train a skip-gram negative-sampling model on one document's tokens.
///
/// Center vectors are the embedding; context vectors are discarded after
/// training. The learning rate decays linearly from the configured initial
/// value to 1e-4 over all scheduled update positions. Negatives are drawn
/// from the unigram distribution raised to 0.75.
pub fn train_embedding<S: Scalar>(
    tokens: &TokenSeq,
    hp: &EmbeddingHyperparams,
) -> Result<EmbeddingModel<S>, EmbeddingError> {
    assert!(hp.dimension >= 2, "embedding dimension must be >= 2");
    assert!(hp.window >= 1 && hp.epochs >= 1);

    // Vocabulary in count-descending order, ties by first occurrence.
    let mut counts: HashMap<&str, (usize, usize)> = HashMap::new();
    for (pos, tok) in tokens.tokens.iter().enumerate() {
        let e = counts.entry(tok.as_str()).or_insert((0, pos));
        e.0 += 1;
    }
    let mut order: Vec<(&str, usize, usize)> = counts
        .into_iter()
        .filter(|&(_, (c, _))| c >= hp.min_count)
        .map(|(w, (c, first))| (w, c, first))
        .collect();
    if order.is_empty() {
        return Err(EmbeddingError::VocabularyEmpty(hp.min_count));
    }
    order.sort_by(|a, b| b.1.cmp(&a.1).then(a.2.cmp(&b.2)));

    let vocab_len = order.len();
    let dim = hp.dimension;
    let mut word_ids: HashMap<&str, usize> = HashMap::with_capacity(vocab_len);
    let mut words = Vec::with_capacity(vocab_len);
    let mut word_counts = Vec::with_capacity(vocab_len);
    for (i, &(w, c, _)) in order.iter().enumerate() {
        word_ids.insert(w, i);
        words.push(w.to_string());
        word_counts.push(c);
    }

    // Token stream with sub-min_count words dropped.
    let stream: Vec<usize> = tokens
        .tokens
        .iter()
        .filter_map(|t| word_ids.get(t.as_str()).copied())
        .collect();

    // Cumulative unigram^0.75 distribution for negative sampling.
    let mut cumulative = Vec::with_capacity(vocab_len);
    let mut acc = 0.0f64;
    for &c in &word_counts {
        acc += (c as f64).powf(0.75);
        cumulative.push(acc);
    }
    let cum_total = acc;

    let mut rng = ChaCha8Rng::seed_from_u64(hp.seed);

    // Center vectors: small random init. Context vectors: zero init.
    let mut center: Vec<S> = (0..vocab_len * dim)
        .map(|_| S::from_f64_lossy((rng.gen::<f64>() - 0.5) / dim as f64))
        .collect();
    let mut context: Vec<S> = vec![S::zero(); vocab_len * dim];

    let total_positions = (hp.epochs * stream.len()).max(1) as f64;
    let final_lr = 1e-4f64;
    let mut position_counter = 0usize;
    let mut grad = vec![S::zero(); dim];

    for _epoch in 0..hp.epochs {
        for pos in 0..stream.len() {
            let progress = position_counter as f64 / total_positions;
            let lr = S::from_f64_lossy(
                hp.initial_learning_rate + (final_lr - hp.initial_learning_rate) * progress,
            );
            position_counter += 1;

            let center_id = stream[pos];
            let reach = rng.gen_range(1..=hp.window);
            let start = pos.saturating_sub(reach);
            let stop = (pos + reach + 1).min(stream.len());
            for (ctx_pos, &positive) in stream[start..stop].iter().enumerate() {
                if ctx_pos + start == pos {
                    continue;
                }
                let c_off = center_id * dim;
                grad.fill(S::zero());

                for sample in 0..=hp.negatives {
                    let (target, label) = if sample == 0 {
                        (positive, S::one())
                    } else {
                        let draw = rng.gen::<f64>() * cum_total;
                        let idx = cumulative.partition_point(|&c| c <= draw).min(vocab_len - 1);
                        if idx == positive {
                            continue;
                        }
                        (idx, S::zero())
                    };
                    let t_off = target * dim;
                    let mut dot = S::zero();
                    for d in 0..dim {
                        dot += center[c_off + d] * context[t_off + d];
                    }
                    let pred = S::one() / (S::one() + (-dot).exp());
                    let g = (label - pred) * lr;
                    for d in 0..dim {
                        grad[d] += g * context[t_off + d];
                        context[t_off + d] += g * center[c_off + d];
                    }
                }
                for d in 0..dim {
                    center[c_off + d] += grad[d];
                }
            }
        }
    }

    let vectors: Vec<Vec<S>> = (0..vocab_len)
        .map(|i| center[i * dim..(i + 1) * dim].to_vec())
        .collect();
    debug_assert!(vectors.iter().flatten().all(|v| v.is_finite()));

    let mut model = EmbeddingModel {
        words,
        counts: word_counts,
        vectors,
        hyperparams: hp.clone(),
        index: HashMap::new(),
    };
    model.rebuild_index();
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(words: &[&str]) -> TokenSeq {
        TokenSeq {
            tokens: words.iter().map(|s| s.to_string()).collect(),
            stopwords_removed: false,
        }
    }

    fn hp(dim: usize, seed: u64) -> EmbeddingHyperparams {
        EmbeddingHyperparams {
            dimension: dim,
            window: 3,
            negatives: 5,
            epochs: 10,
            initial_learning_rate: 0.025,
            min_count: 1,
            seed,
        }
    }

    #[test]
    fn cosine_identity_orthogonal_and_diagonal() {
        assert!((cosine::<f64>(&[3.0, 4.0], &[3.0, 4.0]).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(cosine(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
        let c = cosine(&[1.0, 0.0], &[1.0, 1.0]).unwrap();
        assert!((c - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn cosine_error_paths() {
        assert!(matches!(
            cosine(&[1.0, 2.0], &[1.0]),
            Err(EmbeddingError::LengthMismatch(2, 1))
        ));
        assert!(matches!(
            cosine(&[0.0, 0.0], &[1.0, 1.0]),
            Err(EmbeddingError::ZeroVector)
        ));
    }

    #[test]
    fn cosine_scale_invariant_and_symmetric() {
        let u = [0.3, -1.2, 4.0];
        let v = [2.0, 0.5, -0.7];
        let scaled: Vec<f64> = u.iter().map(|x| x * 7.5).collect();
        assert!((cosine(&u, &v).unwrap() - cosine(&scaled, &v).unwrap()).abs() < 1e-12);
        assert!((cosine(&u, &v).unwrap() - cosine(&v, &u).unwrap()).abs() < 1e-12);
    }

    fn alternating(n: usize) -> TokenSeq {
        toks(
            &(0..n)
                .map(|i| if i % 2 == 0 { "a" } else { "b" })
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn trained_model_shape() {
        let model: EmbeddingModel<f64> = train_embedding(&alternating(100), &hp(16, 7)).unwrap();
        assert_eq!(model.vocab_len(), 2);
        for w in model.words() {
            assert_eq!(model.vector(w).unwrap().len(), 16);
        }
    }

    #[test]
    fn training_is_deterministic() {
        let tokens = toks(&["x", "y", "z", "x", "y", "w", "x", "q", "y", "z"]);
        let a: EmbeddingModel<f64> = train_embedding(&tokens, &hp(8, 42)).unwrap();
        let b: EmbeddingModel<f64> = train_embedding(&tokens, &hp(8, 42)).unwrap();
        assert_eq!(a.words, b.words);
        for (va, vb) in a.vectors.iter().zip(&b.vectors) {
            assert_eq!(va, vb, "vectors must be bitwise identical");
        }
    }

    #[test]
    fn trained_vectors_are_finite() {
        let tokens = alternating(200);
        let model: EmbeddingModel<f64> = train_embedding(&tokens, &hp(8, 3)).unwrap();
        for w in model.words() {
            assert!(model.vector(w).unwrap().iter().all(|v| v.is_finite()));
        }
    }

    #[test]
    fn min_count_filters_vocabulary() {
        let mut hp = hp(8, 1);
        hp.min_count = 2;
        let tokens = toks(&["a", "a", "b", "a", "b", "c"]);
        let model: EmbeddingModel<f64> = train_embedding(&tokens, &hp).unwrap();
        assert!(model.contains("a") && model.contains("b"));
        assert!(!model.contains("c"));

        hp.min_count = 10;
        assert!(matches!(
            train_embedding::<f64>(&tokens, &hp),
            Err(EmbeddingError::VocabularyEmpty(10))
        ));
    }

    #[test]
    fn default_epochs_scale_for_short_documents() {
        assert_eq!(EmbeddingHyperparams::default_epochs(100_000), 5);
        assert_eq!(EmbeddingHyperparams::default_epochs(1_000), 100);
        assert_eq!(EmbeddingHyperparams::default_epochs(30_000), 5);
        assert_eq!(EmbeddingHyperparams::default_epochs(9_999), 11);
    }

    fn model_from(pairs: &[(&str, usize, &[f64])]) -> EmbeddingModel<f64> {
        EmbeddingModel::from_vectors(
            pairs
                .iter()
                .map(|(w, c, v)| (w.to_string(), *c, v.to_vec()))
                .collect(),
            hp(2, 0),
        )
    }

    #[test]
    fn top_k_orders_by_similarity() {
        let model = model_from(&[
            ("a", 5, &[1.0, 0.0]),
            ("b", 4, &[0.9, 0.1]),
            ("c", 3, &[0.0, 1.0]),
            ("d", 2, &[0.8, 0.2]),
            ("e", 1, &[0.1, 0.9]),
        ]);
        let candidates: BTreeSet<String> =
            ["b", "c", "d", "e"].iter().map(|s| s.to_string()).collect();
        let got = top_k_similar(&model, "a", 2, &candidates).unwrap();
        assert_eq!(got.len(), 2);
        assert_eq!(got[0].0, "b");
        assert!((got[0].1 - 0.9939).abs() < 1e-4);
        assert_eq!(got[1].0, "d");
        assert!((got[1].1 - 0.9701).abs() < 1e-4);
    }

    #[test]
    fn top_k_truncates_to_available_candidates() {
        let model = model_from(&[
            ("a", 3, &[1.0, 0.0]),
            ("b", 2, &[0.5, 0.5]),
            ("c", 1, &[0.0, 1.0]),
        ]);
        let candidates: BTreeSet<String> = ["b", "c"].iter().map(|s| s.to_string()).collect();
        let got = top_k_similar(&model, "a", 10, &candidates).unwrap();
        assert_eq!(got.len(), 2);
        assert!(got.iter().all(|(w, _)| w != "a"));
    }

    #[test]
    fn top_k_unknown_query_errors() {
        let model = model_from(&[("a", 1, &[1.0, 0.0])]);
        let candidates: BTreeSet<String> = ["a".to_string()].into();
        assert!(matches!(
            top_k_similar(&model, "q", 1, &candidates),
            Err(EmbeddingError::UnknownWord(_))
        ));
    }

    #[test]
    fn top_k_breaks_similarity_ties_by_rank() {
        // b and c have identical vectors; b has the better (lower) rank.
        let model = model_from(&[
            ("a", 5, &[1.0, 0.0]),
            ("c", 2, &[1.0, 1.0]),
            ("b", 2, &[1.0, 1.0]),
        ]);
        let candidates: BTreeSet<String> = ["b", "c"].iter().map(|s| s.to_string()).collect();
        let got = top_k_similar(&model, "a", 2, &candidates).unwrap();
        assert_eq!(got[0].0, "c"); // c precedes b in the injected order
        assert_eq!(got[1].0, "b");
    }

    /// Statistical oracle: a pair forced to co-occur within the window must
    /// beat a pair that never co-occurs, across almost all seeds.
    #[test]
    fn forced_cooccurrence_beats_separation() {
        // x and y always adjacent; z lives in a distant filler block.
        let mut words: Vec<&str> = Vec::new();
        for _ in 0..30 {
            words.extend_from_slice(&["x", "y"]);
        }
        for i in 0..60 {
            words.push(["f1", "f2", "f3", "f4", "f5", "f6"][i % 6]);
            if i % 6 == 3 {
                words.push("z");
            }
        }
        let tokens = toks(&words);

        let mut wins = 0;
        for seed in 0..20u64 {
            let mut h = hp(16, seed);
            h.window = 2;
            h.epochs = 30;
            let model: EmbeddingModel<f64> = train_embedding(&tokens, &h).unwrap();
            let x = model.vector("x").unwrap();
            let y = model.vector("y").unwrap();
            let z = model.vector("z").unwrap();
            if cosine(x, y).unwrap() > cosine(x, z).unwrap() {
                wins += 1;
            }
        }
        assert!(wins >= 19, "only {wins}/20 seeds preferred the co-occurring pair");
    }
}
