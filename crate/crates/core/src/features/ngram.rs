//! Character n-gram counts with information-gain column selection.

use std::collections::HashMap;

use super::select::{class_ids, information_gain};
use super::{FeatureError, FeatureLayout, FeatureMatrix};
use crate::corpus::Corpus;
use crate::scalar::Scalar;

/// Count all character n-grams for n in 1..=max_n over the document's tokens
/// joined by single spaces (so grams may span a token boundary).
fn gram_counts(tokens: &[String], max_n: usize) -> HashMap<String, usize> {
    let joined = tokens.join(" ");
    let chars: Vec<char> = joined.chars().collect();
    let mut counts = HashMap::new();
    for n in 1..=max_n {
        if chars.len() < n {
            break;
        }
        for window in chars.windows(n) {
            *counts.entry(window.iter().collect::<String>()).or_insert(0) += 1;
        }
    }
    counts
}

/// Character n-gram count matrix (n up to `max_n`), reduced to the `top`
/// grams by information gain of gram presence against `labels` (gain
/// descending, ties by lexicographic gram).
pub fn char_ngram_features<S: Scalar>(
    corpus: &Corpus,
    max_n: usize,
    labels: &[String],
    top: usize,
) -> Result<FeatureMatrix<S>, FeatureError> {
    if labels.len() != corpus.doc_count() {
        return Err(FeatureError::LabelLengthMismatch(
            labels.len(),
            corpus.doc_count(),
        ));
    }
    let per_doc: Vec<HashMap<String, usize>> = corpus
        .tokens()
        .iter()
        .map(|seq| gram_counts(&seq.tokens, max_n))
        .collect();

    // Deterministic global gram list.
    let mut grams: Vec<&str> = {
        let mut set: Vec<&str> = per_doc
            .iter()
            .flat_map(|c| c.keys().map(String::as_str))
            .collect();
        set.sort_unstable();
        set.dedup();
        set
    };

    let (ids, k) = class_ids(labels);
    let mut scored: Vec<(usize, f64)> = grams
        .iter()
        .enumerate()
        .map(|(gi, gram)| {
            let presence: Vec<bool> = per_doc.iter().map(|c| c.contains_key(*gram)).collect();
            (gi, information_gain(&presence, &ids, k))
        })
        .collect();
    scored.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(grams[a.0].cmp(grams[b.0]))
    });
    scored.truncate(top.min(grams.len()));
    let selected: Vec<String> = scored.iter().map(|&(gi, _)| grams[gi].to_string()).collect();
    grams.clear();

    let rows: Vec<Vec<S>> = per_doc
        .iter()
        .map(|counts| {
            selected
                .iter()
                .map(|g| S::from_usize_lossy(counts.get(g).copied().unwrap_or(0)))
                .collect()
        })
        .collect();

    let layout = FeatureLayout::named("char_ngram", selected);
    Ok(FeatureMatrix::from_rows(corpus.doc_ids(), layout, rows))
}
