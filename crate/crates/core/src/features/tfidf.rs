//! Bag-of-words TF-IDF features with optional chi-square column selection.

use std::collections::HashMap;

use super::select::{chi_square_score, class_ids};
use super::{FeatureError, FeatureLayout, FeatureMatrix};
use crate::corpus::Corpus;
use crate::scalar::Scalar;

/// TF-IDF matrix over the corpus vocabulary:
/// `tfidf(w, d) = tf(w, d) * ln(|D| / (df(w) + 1))` with
/// `tf = count of w in d / tokens in d` and `df = documents containing w`.
///
/// With `top = Some(t)`, columns are reduced to the `min(t, |V|)` words whose
/// binarized presence scores highest on the chi-square test against `labels`
/// (score descending, ties by ascending vocabulary index). Note the +1 in the
/// denominator makes the idf of a word present in every document negative.
pub fn tfidf_features<S: Scalar>(
    corpus: &Corpus,
    labels: Option<&[String]>,
    top: Option<usize>,
) -> Result<FeatureMatrix<S>, FeatureError> {
    let vocab = corpus.vocabulary();
    let n_docs = corpus.doc_count();
    let n_words = vocab.len();

    // Per-document counts and document frequencies, in vocabulary index order.
    let mut doc_counts: Vec<HashMap<usize, usize>> = Vec::with_capacity(n_docs);
    let mut df = vec![0usize; n_words];
    for seq in corpus.tokens() {
        let mut counts: HashMap<usize, usize> = HashMap::new();
        for tok in &seq.tokens {
            let idx = vocab.index_of(tok).expect("corpus vocabulary covers tokens") - 1;
            *counts.entry(idx).or_insert(0) += 1;
        }
        for &idx in counts.keys() {
            df[idx] += 1;
        }
        doc_counts.push(counts);
    }

    let idf: Vec<S> = df
        .iter()
        .map(|&d| S::from_f64_lossy((n_docs as f64 / (d as f64 + 1.0)).ln()))
        .collect();

    let columns: Vec<usize> = match top {
        None => (0..n_words).collect(),
        Some(t) => {
            let labels = labels.ok_or(FeatureError::LabelsRequired)?;
            if labels.len() != n_docs {
                return Err(FeatureError::LabelLengthMismatch(labels.len(), n_docs));
            }
            let (ids, k) = class_ids(labels);
            let mut scored: Vec<(usize, f64)> = (0..n_words)
                .map(|j| {
                    let presence: Vec<bool> =
                        doc_counts.iter().map(|c| c.contains_key(&j)).collect();
                    (j, chi_square_score(&presence, &ids, k))
                })
                .collect();
            scored.sort_by(|a, b| {
                b.1.partial_cmp(&a.1)
                    .unwrap_or(std::cmp::Ordering::Equal)
                    .then(a.0.cmp(&b.0))
            });
            scored.truncate(t.min(n_words));
            scored.into_iter().map(|(j, _)| j).collect()
        }
    };

    let names: Vec<String> = columns
        .iter()
        .map(|&j| vocab.word_at(j + 1).unwrap().to_string())
        .collect();
    let kind = if top.is_some() { "tfidf_top" } else { "tfidf" };
    let layout = FeatureLayout::named(kind, names);

    let mut rows = Vec::with_capacity(n_docs);
    for (doc_idx, counts) in doc_counts.iter().enumerate() {
        let len = S::from_usize_lossy(corpus.tokens()[doc_idx].len());
        let row: Vec<S> = columns
            .iter()
            .map(|&j| match counts.get(&j) {
                Some(&c) => S::from_usize_lossy(c) / len * idf[j],
                None => S::zero(),
            })
            .collect();
        rows.push(row);
    }

    Ok(FeatureMatrix::from_rows(corpus.doc_ids(), layout, rows))
}
