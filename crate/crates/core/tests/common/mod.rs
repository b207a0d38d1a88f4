//! Shared test fixtures: a synthetic two-author corpus written to disk.
//!
//! Both authors draw from 500-word vocabularies sharing 150 words (30%),
//! but differ in Zipf exponent and in how strongly words attract a fixed
//! partner word, so their frequency curves and co-occurrence structure
//! (and therefore their Word2vec graphs) separate.

use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct AuthorSpec {
    pub name: &'static str,
    pub prefix: &'static str,
    pub zipf_exponent: f64,
    pub pair_prob: f64,
    pub partner_mul: usize,
}

pub const AUTHOR_A: AuthorSpec = AuthorSpec {
    name: "author_a",
    prefix: "aa",
    zipf_exponent: 1.05,
    pair_prob: 0.45,
    partner_mul: 31,
};

pub const AUTHOR_B: AuthorSpec = AuthorSpec {
    name: "author_b",
    prefix: "bb",
    zipf_exponent: 1.4,
    pair_prob: 0.05,
    partner_mul: 17,
};

const SHARED_WORDS: usize = 150;
const OWN_WORDS: usize = 350;

fn vocabulary(author: &AuthorSpec) -> Vec<String> {
    let mut vocab: Vec<String> = (0..SHARED_WORDS).map(|i| format!("sh{i}")).collect();
    vocab.extend((0..OWN_WORDS).map(|i| format!("{}{i}", author.prefix)));
    vocab
}

fn zipf_cumulative(n: usize, s: f64) -> Vec<f64> {
    let mut acc = 0.0;
    (1..=n)
        .map(|r| {
            acc += 1.0 / (r as f64).powf(s);
            acc
        })
        .collect()
}

fn sample(cum: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let target = rng.gen::<f64>() * cum[cum.len() - 1];
    cum.partition_point(|&c| c <= target).min(cum.len() - 1)
}

/// One synthetic document as raw text with sentence breaks.
pub fn generate_doc(author: &AuthorSpec, tokens: usize, seed: u64) -> String {
    let vocab = vocabulary(author);
    let cum = zipf_cumulative(vocab.len(), author.zipf_exponent);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut words: Vec<&str> = Vec::with_capacity(tokens + 1);
    while words.len() < tokens {
        let i = sample(&cum, &mut rng);
        words.push(&vocab[i]);
        if rng.gen::<f64>() < author.pair_prob {
            let partner = (i * author.partner_mul + 7) % vocab.len();
            words.push(&vocab[partner]);
        }
    }
    words.truncate(tokens);

    let mut text = String::new();
    let mut since_break = 0usize;
    let mut sentence_len = rng.gen_range(6..14);
    for w in words {
        if !text.is_empty() {
            text.push(' ');
        }
        text.push_str(w);
        since_break += 1;
        if since_break >= sentence_len {
            text.push('.');
            since_break = 0;
            sentence_len = rng.gen_range(6..14);
        }
    }
    text.push('.');
    text
}

/// Write a labeled corpus (manifest + text files) under `dir`; returns the
/// manifest path. Genres alternate so both label fields are usable.
pub fn write_corpus(
    dir: &Path,
    docs_per_author: usize,
    tokens_per_doc: usize,
    seed: u64,
) -> PathBuf {
    let docs_dir = dir.join("docs");
    fs::create_dir_all(&docs_dir).unwrap();
    let mut manifest = String::new();
    for author in [&AUTHOR_A, &AUTHOR_B] {
        for i in 0..docs_per_author {
            let doc_id = format!("{}-{i:03}", author.name);
            let doc_seed = seed
                .wrapping_mul(1_000_003)
                .wrapping_add(i as u64)
                .wrapping_add(if author.name == "author_a" { 0 } else { 1 << 32 });
            let text = generate_doc(author, tokens_per_doc, doc_seed);
            let rel = format!("docs/{doc_id}.txt");
            fs::write(dir.join(&rel), text).unwrap();
            let genre = if i % 2 == 0 { "longform" } else { "shortform" };
            manifest.push_str(&format!(
                "{{\"doc_id\": \"{doc_id}\", \"path\": \"{rel}\", \"author\": \"{}\", \"genre\": \"{genre}\", \"language\": \"en\"}}\n",
                author.name
            ));
        }
    }
    let manifest_path = dir.join("manifest.jsonl");
    fs::write(&manifest_path, manifest).unwrap();
    manifest_path
}

/// Stopword file containing the most frequent shared words.
pub fn write_stopwords(dir: &Path, count: usize) -> PathBuf {
    let mut text = String::from("# shared high-frequency words\n");
    for i in 0..count {
        text.push_str(&format!("sh{i}\n"));
    }
    let path = dir.join("stopwords.txt");
    fs::write(&path, text).unwrap();
    path
}
