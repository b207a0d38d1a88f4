//! Labeled document collections: manifest loading, tokenization, per-document
//! term statistics and the knee point of the frequency curve.
//!
//! A corpus manifest is JSON Lines, one object per document:
//! `{"doc_id": "...", "path": "rel/to/manifest.txt", "author": "...",
//!   "genre": "...", "language": "bn"}`.
//!
//! Tokens are maximal runs of Unicode letters/digits; every other codepoint is
//! a separator. This works unchanged for Bengali and Latin scripts. No
//! stemming or lemmatization is performed.

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("manifest {0} contains no document rows")]
    EmptyManifest(PathBuf),
    #[error("duplicate doc_id {0:?} in manifest")]
    DuplicateDocId(String),
    #[error("referenced file not found: {0}")]
    MissingFile(PathBuf),
    #[error("file {0} is not valid UTF-8")]
    InvalidEncoding(PathBuf),
    #[error("document {0:?} has no tokens")]
    EmptyDocument(String),
    #[error("frequency curve needs at least 3 points, got {0}")]
    CurveTooShort(usize),
    #[error("manifest line {line}: {source}")]
    ManifestParse {
        line: usize,
        source: serde_json::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One labeled text in a corpus.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Document {
    pub doc_id: String,
    pub raw_text: String,
    pub author: String,
    pub genre: String,
    pub language_tag: String,
}

/// Tokenized form of a document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenSeq {
    pub tokens: Vec<String>,
    pub stopwords_removed: bool,
}

impl TokenSeq {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Tokenizer configuration shared by a whole corpus.
#[derive(Debug, Clone, Default)]
pub struct TokenizeOptions {
    /// Remove these tokens after case folding. `None` keeps everything.
    pub stopwords: Option<BTreeSet<String>>,
    /// Case-fold tokens. Scripts without case (e.g. Bengali) are unaffected.
    pub lowercase: bool,
}

impl TokenizeOptions {
    pub fn new() -> Self {
        TokenizeOptions {
            stopwords: None,
            lowercase: true,
        }
    }

    pub fn with_stopwords(mut self, stopwords: BTreeSet<String>) -> Self {
        self.stopwords = Some(stopwords);
        self
    }
}

/// Split `raw_text` into maximal Unicode letter/digit runs.
///
/// Tokens are case-folded first, then filtered against the stopword list, so
/// stopword files should contain the folded form when `lowercase` is true.
/// Returns [`CorpusError::EmptyDocument`] when no token survives.
pub fn tokenize(
    raw_text: &str,
    stopwords: Option<&BTreeSet<String>>,
    lowercase: bool,
) -> Result<TokenSeq, CorpusError> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    for ch in raw_text.chars() {
        if ch.is_alphanumeric() {
            current.push(ch);
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }

    if lowercase {
        for t in &mut tokens {
            if t.chars().any(char::is_uppercase) {
                *t = t.to_lowercase();
            }
        }
    }

    let stopwords_removed = match stopwords {
        Some(set) if !set.is_empty() => {
            tokens.retain(|t| !set.contains(t));
            true
        }
        Some(_) => false,
        None => false,
    };

    if tokens.is_empty() {
        return Err(CorpusError::EmptyDocument(String::new()));
    }
    Ok(TokenSeq {
        tokens,
        stopwords_removed,
    })
}

/// A word with its count, relative frequency and 1-based frequency rank.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankedTerm<S> {
    pub word: String,
    pub count: usize,
    pub rel_freq: S,
}

/// Per-document term statistics. Rank 1 is the most frequent word; count ties
/// break by first occurrence position (earlier occurrence gets the lower
/// rank), so the ordering is deterministic.
#[derive(Debug, Clone)]
pub struct TermStats<S> {
    ranked: Vec<RankedTerm<S>>,
    positions: HashMap<String, usize>,
    total_tokens: usize,
}

impl<S: Scalar> TermStats<S> {
    pub fn total_tokens(&self) -> usize {
        self.total_tokens
    }

    pub fn vocab_size(&self) -> usize {
        self.ranked.len()
    }

    /// Terms in rank order (index i holds rank i + 1).
    pub fn ranked(&self) -> &[RankedTerm<S>] {
        &self.ranked
    }

    pub fn count(&self, word: &str) -> Option<usize> {
        self.positions.get(word).map(|&i| self.ranked[i].count)
    }

    pub fn rel_freq(&self, word: &str) -> Option<S> {
        self.positions.get(word).map(|&i| self.ranked[i].rel_freq)
    }

    /// 1-based frequency rank.
    pub fn rank(&self, word: &str) -> Option<usize> {
        self.positions.get(word).map(|&i| i + 1)
    }

    /// Descending occurrence counts, one entry per distinct word.
    pub fn freq_curve(&self) -> Vec<usize> {
        self.ranked.iter().map(|t| t.count).collect()
    }
}

/// Count tokens and assign relative frequencies and ranks.
pub fn term_stats<S: Scalar>(tokens: &TokenSeq) -> TermStats<S> {
    assert!(!tokens.is_empty(), "term_stats requires a non-empty token list");
    let total = tokens.len();
    let mut counts: HashMap<&str, (usize, usize)> = HashMap::new(); // word -> (count, first position)
    for (pos, tok) in tokens.tokens.iter().enumerate() {
        let entry = counts.entry(tok.as_str()).or_insert((0, pos));
        entry.0 += 1;
    }

    let mut order: Vec<(&str, usize, usize)> = counts
        .into_iter()
        .map(|(w, (c, first))| (w, c, first))
        .collect();
    order.sort_by(|a, b| b.1.cmp(&a.1).then(a.2.cmp(&b.2)));

    let total_s = S::from_usize_lossy(total);
    let mut ranked = Vec::with_capacity(order.len());
    let mut positions = HashMap::with_capacity(order.len());
    for (i, (word, count, _)) in order.into_iter().enumerate() {
        positions.insert(word.to_string(), i);
        ranked.push(RankedTerm {
            word: word.to_string(),
            count,
            rel_freq: S::from_usize_lossy(count) / total_s,
        });
    }
    TermStats {
        ranked,
        positions,
        total_tokens: total,
    }
}

/// 1-based index of the knee of a descending frequency curve: the interior
/// point with maximal perpendicular distance to the chord joining the first
/// and last points, after both axes are normalized to [0, 1] (unit-free, so
/// the result is invariant under uniform scaling of counts). Ties resolve to
/// the smallest index.
pub fn knee_point<S: Scalar>(freq_curve: &[usize]) -> Result<usize, CorpusError> {
    let n = freq_curve.len();
    if n < 3 {
        return Err(CorpusError::CurveTooShort(n));
    }
    let first = freq_curve[0] as f64;
    let last = freq_curve[n - 1] as f64;
    let y_span = first - last;

    let norm_x = |i: usize| S::from_f64_lossy(i as f64 / (n - 1) as f64);
    let norm_y = |c: usize| {
        if y_span == 0.0 {
            S::zero()
        } else {
            S::from_f64_lossy((c as f64 - last) / y_span)
        }
    };

    let (ax, ay) = (norm_x(0), norm_y(freq_curve[0]));
    let (bx, by) = (norm_x(n - 1), norm_y(freq_curve[n - 1]));
    let dx = bx - ax;
    let dy = by - ay;
    let denom = (dx * dx + dy * dy).sqrt();

    let mut best = 1usize;
    let mut best_dist = S::neg_infinity();
    for (i, &count) in freq_curve.iter().enumerate().take(n - 1).skip(1) {
        let px = norm_x(i);
        let py = norm_y(count);
        let dist = if denom > S::zero() {
            (dy * px - dx * py + bx * ay - by * ax).abs() / denom
        } else {
            S::zero()
        };
        if dist > best_dist {
            best_dist = dist;
            best = i;
        }
    }
    Ok(best + 1)
}

/// Corpus-level vocabulary: word -> 1-based index, assigned in first-occurrence
/// order over documents in manifest order.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Vocabulary {
    words: Vec<String>,
    #[serde(skip)]
    index: HashMap<String, usize>,
}

impl Vocabulary {
    pub fn from_token_seqs<'a>(seqs: impl IntoIterator<Item = &'a TokenSeq>) -> Self {
        let mut vocab = Vocabulary::default();
        for seq in seqs {
            for tok in &seq.tokens {
                vocab.insert(tok);
            }
        }
        vocab
    }

    fn insert(&mut self, word: &str) {
        if !self.index.contains_key(word) {
            self.words.push(word.to_string());
            self.index.insert(word.to_string(), self.words.len());
        }
    }

    /// 1-based index of `word`, if present.
    pub fn index_of(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }

    /// Word at a 1-based index.
    pub fn word_at(&self, index: usize) -> Option<&str> {
        self.words.get(index.checked_sub(1)?).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    /// Rebuild the lookup table after deserialization.
    pub fn rebuild_index(&mut self) {
        self.index = self
            .words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i + 1))
            .collect();
    }
}

/// A loaded, tokenized document collection.
#[derive(Debug, Clone)]
pub struct Corpus {
    documents: Vec<Document>,
    tokens: Vec<TokenSeq>,
    vocabulary: Vocabulary,
}

impl Corpus {
    /// Assemble a corpus from already-loaded documents (used by tests and by
    /// callers that do not go through a manifest file).
    pub fn from_documents(
        documents: Vec<Document>,
        options: &TokenizeOptions,
    ) -> Result<Corpus, CorpusError> {
        let mut ids = BTreeSet::new();
        for doc in &documents {
            if !ids.insert(doc.doc_id.as_str()) {
                return Err(CorpusError::DuplicateDocId(doc.doc_id.clone()));
            }
        }
        let mut tokens = Vec::with_capacity(documents.len());
        for doc in &documents {
            let seq = tokenize(&doc.raw_text, options.stopwords.as_ref(), options.lowercase)
                .map_err(|e| match e {
                    CorpusError::EmptyDocument(_) => {
                        CorpusError::EmptyDocument(doc.doc_id.clone())
                    }
                    other => other,
                })?;
            tokens.push(seq);
        }
        let vocabulary = Vocabulary::from_token_seqs(&tokens);
        Ok(Corpus {
            documents,
            tokens,
            vocabulary,
        })
    }

    pub fn doc_count(&self) -> usize {
        self.documents.len()
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn tokens(&self) -> &[TokenSeq] {
        &self.tokens
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn doc_ids(&self) -> Vec<String> {
        self.documents.iter().map(|d| d.doc_id.clone()).collect()
    }

    pub fn authors(&self) -> Vec<String> {
        self.documents.iter().map(|d| d.author.clone()).collect()
    }

    pub fn genres(&self) -> Vec<String> {
        self.documents.iter().map(|d| d.genre.clone()).collect()
    }
}

#[derive(Debug, Deserialize)]
struct ManifestRow {
    doc_id: String,
    path: String,
    author: String,
    genre: String,
    #[serde(default)]
    language: String,
}

/// Load a corpus from a JSON Lines manifest. Text paths are resolved relative
/// to the manifest's directory. Documents appear in manifest order.
pub fn load_corpus(
    manifest_path: &Path,
    options: &TokenizeOptions,
) -> Result<Corpus, CorpusError> {
    let bytes = fs::read(manifest_path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            CorpusError::MissingFile(manifest_path.to_path_buf())
        } else {
            CorpusError::Io(e)
        }
    })?;
    let text = String::from_utf8(bytes)
        .map_err(|_| CorpusError::InvalidEncoding(manifest_path.to_path_buf()))?;
    let base = manifest_path.parent().unwrap_or_else(|| Path::new("."));

    let mut documents = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: ManifestRow = serde_json::from_str(line).map_err(|source| {
            CorpusError::ManifestParse {
                line: lineno + 1,
                source,
            }
        })?;
        let path = base.join(&row.path);
        let raw = fs::read(&path).map_err(|e| {
            if e.kind() == std::io::ErrorKind::NotFound {
                CorpusError::MissingFile(path.clone())
            } else {
                CorpusError::Io(e)
            }
        })?;
        let raw_text =
            String::from_utf8(raw).map_err(|_| CorpusError::InvalidEncoding(path.clone()))?;
        if raw_text.trim().is_empty() {
            return Err(CorpusError::EmptyDocument(row.doc_id.clone()));
        }
        documents.push(Document {
            doc_id: row.doc_id,
            raw_text,
            author: row.author,
            genre: row.genre,
            language_tag: row.language,
        });
    }
    if documents.is_empty() {
        return Err(CorpusError::EmptyManifest(manifest_path.to_path_buf()));
    }
    Corpus::from_documents(documents, options)
}

/// Load a stopword file: UTF-8, one token per line, `#` comment lines ignored.
pub fn load_stopwords(path: &Path) -> Result<BTreeSet<String>, CorpusError> {
    let bytes = fs::read(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            CorpusError::MissingFile(path.to_path_buf())
        } else {
            CorpusError::Io(e)
        }
    })?;
    let text =
        String::from_utf8(bytes).map_err(|_| CorpusError::InvalidEncoding(path.to_path_buf()))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .collect())
}
