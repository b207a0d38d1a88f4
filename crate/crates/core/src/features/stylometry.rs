//! Lexical / character stylometry baseline: word and sentence lengths,
//! vocabulary richness, character-class frequencies and function-word usage.

use std::collections::{BTreeSet, HashMap};

use super::{FeatureLayout, FeatureMatrix};
use crate::corpus::{Corpus, Document, TokenSeq};
use crate::scalar::{mean, std_dev, Scalar};

/// Number of function-word frequency slots in the layout.
pub const FUNCTION_WORD_SLOTS: usize = 30;

const PUNCT_MARKS: [(&str, &[char]); 12] = [
    ("period", &['.']),
    ("comma", &[',']),
    ("semicolon", &[';']),
    ("colon", &[':']),
    ("exclaim", &['!']),
    ("question", &['?']),
    ("hyphen", &['-']),
    ("double_quote", &['"', '\u{201c}', '\u{201d}']),
    ("single_quote", &['\'', '\u{2018}', '\u{2019}']),
    ("paren_open", &['(']),
    ("paren_close", &[')']),
    ("danda", &['\u{0964}']),
];

/// Sentence terminators: period, question, exclamation and the danda.
const SENTENCE_BREAKS: [char; 4] = ['.', '?', '!', '\u{0964}'];

pub fn stylometry_layout() -> FeatureLayout {
    let mut names = vec![
        "avg_word_len".to_string(),
        "std_word_len".to_string(),
        "avg_sentence_len_tokens".to_string(),
        "std_sentence_len_tokens".to_string(),
        "avg_sentence_len_chars".to_string(),
        "type_token_ratio".to_string(),
        "hapax_legomena_ratio".to_string(),
        "dis_legomena_ratio".to_string(),
        "short_word_ratio".to_string(),
        "long_word_ratio".to_string(),
        "total_tokens".to_string(),
        "total_sentences".to_string(),
        "total_chars".to_string(),
        "letter_freq".to_string(),
        "digit_freq".to_string(),
        "whitespace_freq".to_string(),
        "uppercase_freq".to_string(),
    ];
    for (name, _) in PUNCT_MARKS {
        names.push(format!("punct_{name}_freq"));
    }
    for i in 1..=FUNCTION_WORD_SLOTS {
        names.push(format!("function_word_top_{i}"));
    }
    FeatureLayout::named("stylometry", names)
}

/// Sentences of `raw_text`: segments between terminators that contain at
/// least one token, with their token and character counts.
fn sentence_stats(raw_text: &str) -> Vec<(usize, usize)> {
    raw_text
        .split(SENTENCE_BREAKS)
        .filter_map(|segment| {
            let token_count = segment
                .split(|c: char| !c.is_alphanumeric())
                .filter(|t| !t.is_empty())
                .count();
            if token_count == 0 {
                None
            } else {
                Some((token_count, segment.trim().chars().count()))
            }
        })
        .collect()
}

/// Fixed-layout stylometry vector for one document. Word-level statistics use
/// the supplied tokens; sentence and character statistics use the raw text.
/// Function-word slots hold the `FUNCTION_WORD_SLOTS` highest relative
/// frequencies among the stopword-list words, descending, zero-padded (all
/// zero when no list is supplied).
pub fn stylometry_features<S: Scalar>(
    doc: &Document,
    tokens: &TokenSeq,
    function_words: Option<&BTreeSet<String>>,
) -> Vec<S> {
    assert!(!tokens.is_empty(), "stylometry requires a non-empty token list");
    let layout_len = stylometry_layout().len();
    let mut out: Vec<S> = Vec::with_capacity(layout_len);

    let word_lens: Vec<S> = tokens
        .tokens
        .iter()
        .map(|t| S::from_usize_lossy(t.chars().count()))
        .collect();
    out.push(mean(&word_lens));
    out.push(std_dev(&word_lens));

    let sentences = sentence_stats(&doc.raw_text);
    let sent_tokens: Vec<S> = sentences
        .iter()
        .map(|&(t, _)| S::from_usize_lossy(t))
        .collect();
    let sent_chars: Vec<S> = sentences
        .iter()
        .map(|&(_, c)| S::from_usize_lossy(c))
        .collect();
    out.push(mean(&sent_tokens));
    out.push(std_dev(&sent_tokens));
    out.push(mean(&sent_chars));

    let total_tokens = tokens.len();
    let mut type_counts: HashMap<&str, usize> = HashMap::new();
    for t in &tokens.tokens {
        *type_counts.entry(t.as_str()).or_insert(0) += 1;
    }
    let n_types = type_counts.len();
    let hapax = type_counts.values().filter(|&&c| c == 1).count();
    let dis = type_counts.values().filter(|&&c| c == 2).count();
    let tokens_s = S::from_usize_lossy(total_tokens);
    let types_s = S::from_usize_lossy(n_types);
    out.push(types_s / tokens_s);
    out.push(S::from_usize_lossy(hapax) / types_s);
    out.push(S::from_usize_lossy(dis) / types_s);

    let short = tokens.tokens.iter().filter(|t| t.chars().count() <= 3).count();
    let long = tokens.tokens.iter().filter(|t| t.chars().count() >= 7).count();
    out.push(S::from_usize_lossy(short) / tokens_s);
    out.push(S::from_usize_lossy(long) / tokens_s);

    let total_chars = doc.raw_text.chars().count();
    out.push(tokens_s);
    out.push(S::from_usize_lossy(sentences.len()));
    out.push(S::from_usize_lossy(total_chars));

    let chars_s = S::from_usize_lossy(total_chars.max(1));
    let char_freq = |pred: &dyn Fn(char) -> bool| -> S {
        S::from_usize_lossy(doc.raw_text.chars().filter(|&c| pred(c)).count()) / chars_s
    };
    out.push(char_freq(&|c| c.is_alphabetic()));
    out.push(char_freq(&|c| c.is_numeric()));
    out.push(char_freq(&|c| c.is_whitespace()));
    out.push(char_freq(&|c| c.is_uppercase()));
    for (_, marks) in PUNCT_MARKS {
        out.push(char_freq(&|c| marks.contains(&c)));
    }

    let mut slots = vec![S::zero(); FUNCTION_WORD_SLOTS];
    if let Some(words) = function_words {
        let mut freqs: Vec<S> = words
            .iter()
            .filter_map(|w| type_counts.get(w.as_str()))
            .map(|&c| S::from_usize_lossy(c) / tokens_s)
            .collect();
        freqs.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        for (slot, f) in slots.iter_mut().zip(freqs) {
            *slot = f;
        }
    }
    out.extend(slots);

    debug_assert_eq!(out.len(), layout_len);
    out
}

/// Stylometry matrix for a whole corpus.
pub fn stylometry_matrix<S: Scalar>(
    corpus: &Corpus,
    function_words: Option<&BTreeSet<String>>,
) -> FeatureMatrix<S> {
    let layout = stylometry_layout();
    let rows: Vec<Vec<S>> = corpus
        .documents()
        .iter()
        .zip(corpus.tokens())
        .map(|(doc, tokens)| stylometry_features(doc, tokens, function_words))
        .collect();
    FeatureMatrix::from_rows(corpus.doc_ids(), layout, rows)
}
