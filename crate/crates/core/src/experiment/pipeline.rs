//! The end-to-end pipeline behind `run` and the single-stage commands.
//!
//! Per-document stages (term stats, embedding training, graph construction)
//! fan out over a rayon pool; every reduction over the corpus happens
//! afterwards on one thread, so worker count never changes any output byte.
//! All artifacts are written to a staging directory and renamed into
//! `out_dir/<config-hash>/` only on success.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use ndarray::Array2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    ConfusionSummary, ExperimentConfig, ExperimentError, ExperimentReport, FeatureSet,
    SplitSummary, Task, Target,
};
use crate::corpus::{knee_point, load_corpus, load_stopwords, term_stats, Corpus, TokenizeOptions};
use crate::embedding::{train_embedding, EmbeddingHyperparams, EmbeddingModel};
use crate::features::{
    anova_f_rank, char_ngram_features, chi_square_score, graph_feature_matrix, stylometry_matrix,
    tfidf_features, w2v_plus_matrix, FeatureLayout, FeatureMatrix, GraphWords,
};
use crate::graph::{build_graph, to_dot, to_json, GraphParams, W2VGraph};
use crate::learning::{
    combine_dual_clustering, confusion_matrix, hungarian_align, jaccard_spectral_cluster, kmeans,
    per_class_prf, predict, stratified_split_indices, train_linear_svm, weighted_f1, KMeansConfig,
    SplitSpec, SvmConfig,
};
use crate::{doc_seed, fnv1a64, DefaultScalar, Variant};

type S = DefaultScalar;

/// A loaded corpus with the labels the experiment predicts.
pub struct PreparedCorpus {
    pub corpus: Corpus,
    pub labels: Vec<String>,
    pub stopwords: Option<BTreeSet<String>>,
}

pub fn prepare_corpus(config: &ExperimentConfig) -> Result<PreparedCorpus, ExperimentError> {
    config.validate()?;
    let stopwords = match &config.stopwords {
        Some(path) => Some(load_stopwords(path)?),
        None => None,
    };
    let mut options = TokenizeOptions {
        stopwords: None,
        lowercase: config.lowercase,
    };
    if config.variant == Variant::WithoutStopwords {
        options.stopwords = stopwords.clone();
    }
    let corpus = load_corpus(&config.corpus, &options)?;
    let labels = match config.target {
        Target::Author => corpus.authors(),
        Target::Genre => corpus.genres(),
    };
    Ok(PreparedCorpus {
        corpus,
        labels,
        stopwords,
    })
}

fn require_labels(labels: &[String]) -> Result<(), ExperimentError> {
    if labels.iter().any(|l| l.trim().is_empty()) {
        return Err(ExperimentError::ConfigInvalid(
            "this experiment needs labels, but some documents have an empty target label".into(),
        ));
    }
    Ok(())
}

fn run_in_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match workers {
        Some(w) if w > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .expect("worker pool")
            .install(f),
        _ => f(),
    }
}

fn resolve_hp(config: &ExperimentConfig, total_tokens: usize, seed: u64) -> EmbeddingHyperparams {
    EmbeddingHyperparams {
        dimension: config.embedding.dimension,
        window: config.embedding.window,
        negatives: config.embedding.negatives,
        epochs: config
            .embedding
            .epochs
            .unwrap_or_else(|| EmbeddingHyperparams::default_epochs(total_tokens)),
        initial_learning_rate: config.embedding.initial_learning_rate,
        min_count: config.embedding.min_count,
        seed,
    }
}

/// Filesystem-safe artifact name for a doc id.
fn artifact_name(doc_id: &str) -> String {
    let safe: String = doc_id
        .chars()
        .map(|c| if c.is_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect();
    format!("{safe}-{:08x}", fnv1a64(doc_id.as_bytes()) as u32)
}

#[derive(Serialize, Deserialize)]
struct CachedModel {
    key: String,
    model: EmbeddingModel<S>,
}

fn cache_key(hp: &EmbeddingHyperparams, tokens: &[String]) -> String {
    let hp_bytes = serde_json::to_vec(hp).expect("hyperparams serialize");
    let mut token_hash = 0xcbf29ce484222325u64;
    for t in tokens {
        token_hash ^= fnv1a64(t.as_bytes());
        token_hash = token_hash.wrapping_mul(0x100000001b3);
    }
    format!("{:016x}{:016x}", fnv1a64(&hp_bytes), token_hash)
}

fn cache_path(cache_dir: &Path, doc_id: &str) -> PathBuf {
    cache_dir.join(format!("{}.json", artifact_name(doc_id)))
}

fn read_cached_model(cache_dir: &Path, doc_id: &str, key: &str) -> Option<EmbeddingModel<S>> {
    let text = fs::read_to_string(cache_path(cache_dir, doc_id)).ok()?;
    let cached: CachedModel = serde_json::from_str(&text).ok()?;
    if cached.key != key {
        return None; // hyperparameters or tokens changed: invalidate
    }
    let mut model = cached.model;
    model.rebuild_index();
    Some(model)
}

fn write_cached_model(cache_dir: &Path, doc_id: &str, key: &str, model: &EmbeddingModel<S>) {
    let cached = CachedModel {
        key: key.to_string(),
        model: model.clone(),
    };
    if let Ok(text) = serde_json::to_string(&cached) {
        let _ = fs::write(cache_path(cache_dir, doc_id), text);
    }
}

/// Train (or load from cache) one embedding per document and build all
/// Word2vec graphs. Returns graphs in corpus order.
pub fn build_graphs(
    config: &ExperimentConfig,
    prepared: &PreparedCorpus,
) -> Result<Vec<W2VGraph<S>>, ExperimentError> {
    let params = GraphParams::new(config.core_count(), config.graph.k);
    let cache_dir = config.out_dir.join("cache").join("embeddings");
    fs::create_dir_all(&cache_dir)?;

    let corpus = &prepared.corpus;
    let results: Vec<Result<W2VGraph<S>, ExperimentError>> =
        run_in_pool(config.workers, || {
            corpus
                .documents()
                .par_iter()
                .zip(corpus.tokens().par_iter())
                .map(|(doc, tokens)| {
                    let stats = term_stats::<S>(tokens);
                    let hp = resolve_hp(config, tokens.len(), doc_seed(config.seed, &doc.doc_id));
                    let key = cache_key(&hp, &tokens.tokens);
                    let model = match read_cached_model(&cache_dir, &doc.doc_id, &key) {
                        Some(m) => m,
                        None => {
                            let m = train_embedding::<S>(tokens, &hp).map_err(|source| {
                                ExperimentError::Embedding {
                                    doc_id: doc.doc_id.clone(),
                                    source,
                                }
                            })?;
                            write_cached_model(&cache_dir, &doc.doc_id, &key, &m);
                            m
                        }
                    };
                    build_graph(&doc.doc_id, &stats, &model, params).map_err(|source| {
                        ExperimentError::Graph {
                            doc_id: doc.doc_id.clone(),
                            source,
                        }
                    })
                })
                .collect()
        });

    // Surface errors in corpus order so failures are scheduling-independent.
    let mut graphs = Vec::with_capacity(results.len());
    for r in results {
        graphs.push(r?);
    }
    Ok(graphs)
}

fn graph_layout(config: &ExperimentConfig) -> FeatureLayout {
    FeatureLayout::graph_with_core_count(
        config.core_count(),
        Some(config.variant),
        config.index_threshold,
    )
}

/// Assemble the configured feature matrix (plus graph words for w2v_plus).
pub fn build_features(
    config: &ExperimentConfig,
    prepared: &PreparedCorpus,
    graphs: Option<&[W2VGraph<S>]>,
) -> Result<(FeatureMatrix<S>, Option<Vec<GraphWords>>), ExperimentError> {
    let corpus = &prepared.corpus;
    match config.feature_set {
        FeatureSet::W2v => {
            let graphs = graphs.expect("graphs built for w2v feature set");
            let m = graph_feature_matrix(graphs, &graph_layout(config))?;
            Ok((m, None))
        }
        FeatureSet::W2vPlus => {
            let graphs = graphs.expect("graphs built for w2v_plus feature set");
            let (m, words) = w2v_plus_matrix(
                graphs,
                &graph_layout(config),
                corpus.vocabulary(),
                config.graph_words,
            )?;
            Ok((m, Some(words)))
        }
        FeatureSet::Tfidf => Ok((tfidf_features(corpus, None, None)?, None)),
        FeatureSet::TfidfTop100 => {
            require_labels(&prepared.labels)?;
            let m = tfidf_features(corpus, Some(&prepared.labels), Some(config.tfidf_top))?;
            Ok((m, None))
        }
        FeatureSet::CharNgram => {
            require_labels(&prepared.labels)?;
            let m = char_ngram_features(
                corpus,
                config.ngram_max,
                &prepared.labels,
                config.ngram_top,
            )?;
            Ok((m, None))
        }
        FeatureSet::Stylometry => {
            Ok((stylometry_matrix(corpus, prepared.stopwords.as_ref()), None))
        }
    }
}

/// Z-score columns by their own mean/stdev; constant columns become zero.
fn standardize(x: &Array2<S>) -> Array2<S> {
    let (n, f) = x.dim();
    let mut out = Array2::zeros((n, f));
    for j in 0..f {
        let mut mean = 0.0;
        for i in 0..n {
            mean += x[(i, j)];
        }
        mean /= n as f64;
        let mut var = 0.0;
        for i in 0..n {
            let d = x[(i, j)] - mean;
            var += d * d;
        }
        let std = (var / n as f64).sqrt();
        if std > 0.0 {
            for i in 0..n {
                out[(i, j)] = (x[(i, j)] - mean) / std;
            }
        }
    }
    out
}

fn select_rows(x: &Array2<S>, rows: &[usize]) -> Array2<S> {
    let mut out = Array2::zeros((rows.len(), x.ncols()));
    for (r, &i) in rows.iter().enumerate() {
        for j in 0..x.ncols() {
            out[(r, j)] = x[(i, j)];
        }
    }
    out
}

fn with_staging<T>(
    out_dir: &Path,
    hash: &str,
    f: impl FnOnce(&Path) -> Result<T, ExperimentError>,
) -> Result<(T, PathBuf), ExperimentError> {
    let staging = out_dir.join(format!(".staging-{hash}"));
    if staging.exists() {
        fs::remove_dir_all(&staging)?;
    }
    fs::create_dir_all(&staging)?;
    match f(&staging) {
        Ok(value) => {
            let final_dir = out_dir.join(hash);
            if final_dir.exists() {
                fs::remove_dir_all(&final_dir)?;
            }
            fs::rename(&staging, &final_dir)?;
            Ok((value, final_dir))
        }
        Err(e) => {
            let _ = fs::remove_dir_all(&staging);
            Err(e)
        }
    }
}

fn write_graph_artifacts(dir: &Path, graphs: &[W2VGraph<S>]) -> Result<(), ExperimentError> {
    let graph_dir = dir.join("graphs");
    fs::create_dir_all(&graph_dir)?;
    for g in graphs {
        let name = artifact_name(&g.doc_id);
        fs::write(
            graph_dir.join(format!("{name}.json")),
            to_json(g).map_err(|source| ExperimentError::Graph {
                doc_id: g.doc_id.clone(),
                source,
            })?,
        )?;
        fs::write(graph_dir.join(format!("{name}.dot")), to_dot(g))?;
    }
    Ok(())
}

fn write_feature_artifacts(dir: &Path, matrix: &FeatureMatrix<S>) -> Result<(), ExperimentError> {
    fs::write(dir.join("features.csv"), matrix.to_csv())?;
    fs::write(
        dir.join("layout.json"),
        serde_json::to_string_pretty(&matrix.layout)?,
    )?;
    Ok(())
}

/// Run the configured experiment end to end; returns the report and the
/// directory the artifacts landed in (`out_dir/<config-hash>/`).
pub fn run_experiment(
    config: &ExperimentConfig,
) -> Result<(ExperimentReport, PathBuf), ExperimentError> {
    let prepared = prepare_corpus(config)?;
    require_labels(&prepared.labels)?;
    let hash = config.config_hash();

    let graphs = if config.feature_set.uses_graphs() {
        Some(build_graphs(config, &prepared)?)
    } else {
        None
    };
    let (matrix, graph_words) = build_features(config, &prepared, graphs.as_deref())?;
    debug_assert!(matrix.all_finite());

    let labels = &prepared.labels;
    let n_classes = {
        let mut distinct: Vec<&str> = labels.iter().map(String::as_str).collect();
        distinct.sort_unstable();
        distinct.dedup();
        distinct.len()
    };

    let (report, final_dir) = with_staging(&config.out_dir, &hash, |staging| {
        if let Some(graphs) = &graphs {
            write_graph_artifacts(staging, graphs)?;
        }
        write_feature_artifacts(staging, &matrix)?;

        let report = match config.task {
            Task::Classify => {
                let spec = SplitSpec {
                    train_ratio: config.split.train_ratio,
                    seed: config.seed,
                    stratified: config.split.stratified,
                };
                let (train_idx, test_idx) = stratified_split_indices(labels, &spec)?;
                let x_train = select_rows(&matrix.values, &train_idx);
                let x_test = select_rows(&matrix.values, &test_idx);
                let y_train: Vec<String> =
                    train_idx.iter().map(|&i| labels[i].clone()).collect();
                let y_test: Vec<String> = test_idx.iter().map(|&i| labels[i].clone()).collect();
                let svm_config = SvmConfig {
                    c: config.svm.c,
                    epochs: config.svm.epochs,
                    seed: config.seed,
                };
                let model = train_linear_svm(&x_train, &y_train, &svm_config)?;
                let predictions = predict(&model, &x_test)?;
                let (classes, cm) = confusion_matrix(&y_test, &predictions)?;
                ExperimentReport {
                    feature_set: config.feature_set,
                    variant: config.variant,
                    task: config.task,
                    target: config.target,
                    learner: "linear_svm".into(),
                    config_hash: hash.clone(),
                    doc_count: prepared.corpus.doc_count(),
                    feature_count: matrix.n_features(),
                    split: Some(SplitSummary {
                        ratio: spec.train_ratio,
                        seed: spec.seed,
                        stratified: spec.stratified,
                        train_size: train_idx.len(),
                        test_size: test_idx.len(),
                    }),
                    per_class: per_class_prf(&y_test, &predictions)?,
                    weighted_f1: weighted_f1(&y_test, &predictions)?,
                    confusion: ConfusionSummary {
                        classes,
                        matrix: cm,
                    },
                    cluster_mapping: None,
                    feature_ranking: None,
                }
            }
            Task::Cluster => {
                let k = config.cluster_k.unwrap_or(n_classes);
                if config.feature_set == FeatureSet::W2vPlus {
                    // dual path: k-means on the structural features, spectral
                    // clustering on the graph-word sets, SVM on both
                    let graphs = graphs.as_deref().expect("graphs for w2v_plus");
                    let numeric_matrix = graph_feature_matrix(graphs, &graph_layout(config))?;
                    let numeric = kmeans(
                        &standardize(&numeric_matrix.values),
                        k,
                        &KMeansConfig {
                            restarts: config.kmeans.restarts,
                            max_iter: config.kmeans.max_iter,
                            tol: config.kmeans.tol,
                            seed: config.seed,
                        },
                    )?;
                    let sets: Vec<BTreeSet<String>> = graph_words
                        .as_ref()
                        .expect("graph words for w2v_plus")
                        .iter()
                        .map(|w| w.word_set().into_iter().map(str::to_string).collect())
                        .collect();
                    let wordset = jaccard_spectral_cluster::<S>(&sets, k, config.seed)?;
                    let spec = SplitSpec {
                        train_ratio: config.split.train_ratio,
                        seed: config.seed,
                        stratified: config.split.stratified,
                    };
                    let dual = combine_dual_clustering(&numeric, &wordset, labels, &spec)?;
                    let truth: Vec<String> = dual
                        .test_indices
                        .iter()
                        .map(|&i| labels[i].clone())
                        .collect();
                    let (classes, cm) = confusion_matrix(&truth, &dual.predictions)?;
                    ExperimentReport {
                        feature_set: config.feature_set,
                        variant: config.variant,
                        task: config.task,
                        target: config.target,
                        learner: "dual_clustering_svm".into(),
                        config_hash: hash.clone(),
                        doc_count: prepared.corpus.doc_count(),
                        feature_count: matrix.n_features(),
                        split: Some(SplitSummary {
                            ratio: spec.train_ratio,
                            seed: spec.seed,
                            stratified: spec.stratified,
                            train_size: dual.train_indices.len(),
                            test_size: dual.test_indices.len(),
                        }),
                        per_class: per_class_prf(&truth, &dual.predictions)?,
                        weighted_f1: weighted_f1(&truth, &dual.predictions)?,
                        confusion: ConfusionSummary {
                            classes,
                            matrix: cm,
                        },
                        cluster_mapping: None,
                        feature_ranking: None,
                    }
                } else {
                    let result = kmeans(
                        &standardize(&matrix.values),
                        k,
                        &KMeansConfig {
                            restarts: config.kmeans.restarts,
                            max_iter: config.kmeans.max_iter,
                            tol: config.kmeans.tol,
                            seed: config.seed,
                        },
                    )?;
                    let alignment = hungarian_align(&result.assignments, labels)?;
                    let (classes, cm) = confusion_matrix(labels, &alignment.relabeled)?;
                    ExperimentReport {
                        feature_set: config.feature_set,
                        variant: config.variant,
                        task: config.task,
                        target: config.target,
                        learner: "kmeans_hungarian".into(),
                        config_hash: hash.clone(),
                        doc_count: prepared.corpus.doc_count(),
                        feature_count: matrix.n_features(),
                        split: None,
                        per_class: per_class_prf(labels, &alignment.relabeled)?,
                        weighted_f1: weighted_f1(labels, &alignment.relabeled)?,
                        confusion: ConfusionSummary {
                            classes,
                            matrix: cm,
                        },
                        cluster_mapping: Some(alignment.mapping),
                        feature_ranking: None,
                    }
                }
            }
        };

        fs::write(
            staging.join("report.json"),
            serde_json::to_string_pretty(&report)?,
        )?;
        Ok(report)
    })?;

    Ok((report, final_dir))
}

// ---------------------------------------------------------------------------
// Single-stage commands
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocSummary {
    pub doc_id: String,
    pub author: String,
    pub genre: String,
    pub tokens: usize,
    pub unique_words: usize,
    /// 1-based knee of the word-frequency curve (absent for tiny vocabularies).
    pub knee_point: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub doc_count: usize,
    pub vocabulary_size: usize,
    pub variant: Variant,
    pub avg_knee_point: f64,
    /// Rounded average knee; the frequency-curve justification for N.
    pub suggested_core_count: usize,
    pub docs: Vec<DocSummary>,
}

/// `ingest`: load, tokenize and summarize the corpus, including the average
/// knee point of the per-document frequency curves.
pub fn ingest_summary(config: &ExperimentConfig) -> Result<CorpusSummary, ExperimentError> {
    let prepared = prepare_corpus(config)?;
    let corpus = &prepared.corpus;
    let mut docs = Vec::with_capacity(corpus.doc_count());
    let mut knee_sum = 0usize;
    let mut knee_count = 0usize;
    for (doc, tokens) in corpus.documents().iter().zip(corpus.tokens()) {
        let stats = term_stats::<S>(tokens);
        let knee = knee_point::<S>(&stats.freq_curve()).ok();
        if let Some(k) = knee {
            knee_sum += k;
            knee_count += 1;
        }
        docs.push(DocSummary {
            doc_id: doc.doc_id.clone(),
            author: doc.author.clone(),
            genre: doc.genre.clone(),
            tokens: tokens.len(),
            unique_words: stats.vocab_size(),
            knee_point: knee,
        });
    }
    let avg = if knee_count > 0 {
        knee_sum as f64 / knee_count as f64
    } else {
        0.0
    };
    Ok(CorpusSummary {
        doc_count: corpus.doc_count(),
        vocabulary_size: corpus.vocabulary().len(),
        variant: config.variant,
        avg_knee_point: avg,
        suggested_core_count: avg.round() as usize,
        docs,
    })
}

/// `embed`: train and cache every per-document embedding; returns the number
/// of models now cached under `out_dir/cache/embeddings/`.
pub fn embed_documents(config: &ExperimentConfig) -> Result<usize, ExperimentError> {
    let prepared = prepare_corpus(config)?;
    let n = prepared.corpus.doc_count();
    build_graphs(config, &prepared)?;
    Ok(n)
}

/// `graph`: build every document graph and write only the graph JSON/DOT
/// artifacts; returns the artifact directory.
pub fn export_graphs(config: &ExperimentConfig) -> Result<PathBuf, ExperimentError> {
    let prepared = prepare_corpus(config)?;
    let graphs = build_graphs(config, &prepared)?;
    let hash = config.config_hash();
    let ((), dir) = with_staging(&config.out_dir, &format!("{hash}-graphs"), |staging| {
        write_graph_artifacts(staging, &graphs)
    })?;
    Ok(dir)
}

/// `features`: write feature and graph artifacts without training a
/// learner; returns the artifact directory.
pub fn export_features(config: &ExperimentConfig) -> Result<PathBuf, ExperimentError> {
    let prepared = prepare_corpus(config)?;
    let hash = config.config_hash();
    let graphs = if config.feature_set.uses_graphs() {
        Some(build_graphs(config, &prepared)?)
    } else {
        None
    };
    let (matrix, _) = build_features(config, &prepared, graphs.as_deref())?;
    let ((), dir) = with_staging(&config.out_dir, &hash, |staging| {
        if let Some(graphs) = &graphs {
            write_graph_artifacts(staging, graphs)?;
        }
        write_feature_artifacts(staging, &matrix)?;
        Ok(())
    })?;
    Ok(dir)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingEntry {
    pub rank: usize,
    pub index: usize,
    pub feature: String,
    /// Absent when the F statistic is the +infinity sentinel.
    pub f_value: Option<f64>,
    pub infinite_f: bool,
    /// Chi-square cross-check on binarized (non-zero) feature presence.
    pub chi_square: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingReport {
    pub feature_set: FeatureSet,
    pub target: Target,
    pub config_hash: String,
    pub ranking: Vec<RankingEntry>,
}

/// `rank-features`: ANOVA F ranking of the configured feature set, with a
/// chi-square cross-check, written as `ranking.json`.
pub fn rank_features(
    config: &ExperimentConfig,
) -> Result<(RankingReport, PathBuf), ExperimentError> {
    let prepared = prepare_corpus(config)?;
    require_labels(&prepared.labels)?;
    let hash = config.config_hash();
    let graphs = if config.feature_set.uses_graphs() {
        Some(build_graphs(config, &prepared)?)
    } else {
        None
    };
    let (matrix, _) = build_features(config, &prepared, graphs.as_deref())?;

    let ranked = anova_f_rank(&matrix, &prepared.labels)?;
    let (ids, n_classes) = {
        let mut distinct: Vec<&str> = prepared.labels.iter().map(String::as_str).collect();
        distinct.sort_unstable();
        distinct.dedup();
        let idx: std::collections::HashMap<&str, usize> =
            distinct.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        (
            prepared
                .labels
                .iter()
                .map(|l| idx[l.as_str()])
                .collect::<Vec<_>>(),
            distinct.len(),
        )
    };

    let ranking: Vec<RankingEntry> = ranked
        .iter()
        .enumerate()
        .map(|(pos, rf)| {
            let presence: Vec<bool> = (0..matrix.n_rows())
                .map(|i| matrix.values[(i, rf.index)] != 0.0)
                .collect();
            RankingEntry {
                rank: pos + 1,
                index: rf.index,
                feature: rf.name.clone(),
                f_value: rf.f_value.is_finite().then_some(rf.f_value),
                infinite_f: rf.f_value.is_infinite(),
                chi_square: chi_square_score(&presence, &ids, n_classes),
            }
        })
        .collect();

    let report = RankingReport {
        feature_set: config.feature_set,
        target: config.target,
        config_hash: hash.clone(),
        ranking,
    };
    let ((), dir) = with_staging(&config.out_dir, &format!("{hash}-ranking"), |staging| {
        fs::write(
            staging.join("ranking.json"),
            serde_json::to_string_pretty(&report)?,
        )?;
        Ok(())
    })?;
    Ok((report, dir))
}
