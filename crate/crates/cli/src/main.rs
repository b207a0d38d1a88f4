//! `stylograph`: run Word2vec-graph stylometry experiments from the shell.
//!
//! Every subcommand takes the same flags; `--config` points at a JSON
//! experiment file and each flag overrides the matching config field. The
//! `STYLOGRAPH_SEED` environment variable supplies the seed when neither the
//! flag nor the config file does.

use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use stylograph::experiment::{
    embed_documents, export_features, export_graphs, ingest_summary, rank_features,
    run_experiment, ExperimentConfig, ExperimentReport, FeatureSet, Target, Task,
};
use stylograph::graph::{from_json, to_dot, to_json};
use stylograph::Variant;

#[derive(Parser)]
#[command(
    name = "stylograph",
    version,
    about = "Word2vec-graph stylometry: author attribution and genre detection"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load and tokenize the corpus; print a summary with knee points
    Ingest(ConfigArgs),
    /// Train and cache one embedding model per document
    Embed(ConfigArgs),
    /// Build Word2vec graphs and write JSON + DOT files
    Graph(ConfigArgs),
    /// Extract the configured feature matrix to CSV
    Features(ConfigArgs),
    /// Train a linear SVM on a 70/30 split and report weighted F1
    Classify(ConfigArgs),
    /// Cluster documents and score against labels via Hungarian alignment
    Cluster(ConfigArgs),
    /// Rank features by ANOVA F value with a chi-square cross-check
    RankFeatures(ConfigArgs),
    /// Convert a stored graph JSON artifact to DOT (or echo JSON)
    ExportGraph(ExportGraphArgs),
    /// Full pipeline: ingest, embed, graph, features, learn, report
    Run(ConfigArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    With,
    Without,
}

#[derive(Clone, Copy, ValueEnum)]
enum TaskArg {
    Classify,
    Cluster,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Author,
    Genre,
}

#[derive(Clone, Copy, ValueEnum)]
enum FeatureArg {
    W2v,
    W2vPlus,
    Tfidf,
    Tfidf100,
    CharNgram,
    Stylometry,
}

#[derive(Args)]
struct ConfigArgs {
    /// Experiment config JSON; flags below override its fields
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Corpus manifest (JSON Lines)
    #[arg(long, value_name = "PATH")]
    corpus: Option<PathBuf>,
    /// Stopword file, one token per line
    #[arg(long, value_name = "PATH")]
    stopwords: Option<PathBuf>,
    /// with: keep stopwords (N=20); without: remove them (N=15)
    #[arg(long, value_enum)]
    variant: Option<VariantArg>,
    /// Feature set to extract
    #[arg(long = "features", value_enum)]
    feature_set: Option<FeatureArg>,
    #[arg(long, value_enum)]
    task: Option<TaskArg>,
    /// Label to predict (author or genre)
    #[arg(long, value_enum)]
    target: Option<TargetArg>,
    /// Core-word count N
    #[arg(long)]
    n: Option<usize>,
    /// Neighbors per core word K
    #[arg(long)]
    k: Option<usize>,
    /// Embedding dimension
    #[arg(long)]
    dim: Option<usize>,
    /// Global seed (falls back to $STYLOGRAPH_SEED, then 0)
    #[arg(long)]
    seed: Option<u64>,
    /// Train fraction of the train/test split
    #[arg(long = "split-ratio")]
    split_ratio: Option<f64>,
    /// Output directory
    #[arg(long = "out", value_name = "DIR")]
    out: Option<PathBuf>,
    /// Worker threads for per-document stages
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct ExportGraphArgs {
    /// A graph .json artifact produced by `graph` or `run`
    #[arg(long = "graph-json", value_name = "PATH")]
    graph_json: PathBuf,
    /// dot or json
    #[arg(long, default_value = "dot")]
    format: String,
    /// Write here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<ExperimentConfig> {
        let (mut config, file_has_seed) = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading config {}", path.display()))?;
                let value: serde_json::Value = serde_json::from_str(&text)
                    .with_context(|| format!("parsing config {}", path.display()))?;
                let has_seed = value.get("seed").is_some();
                let config: ExperimentConfig = serde_json::from_value(value)
                    .with_context(|| format!("interpreting config {}", path.display()))?;
                (config, has_seed)
            }
            None => (ExperimentConfig::default(), false),
        };

        if let Some(corpus) = &self.corpus {
            config.corpus = corpus.clone();
        }
        if let Some(stopwords) = &self.stopwords {
            config.stopwords = Some(stopwords.clone());
        }
        if let Some(variant) = self.variant {
            config.variant = match variant {
                VariantArg::With => Variant::WithStopwords,
                VariantArg::Without => Variant::WithoutStopwords,
            };
        }
        if let Some(fs_arg) = self.feature_set {
            config.feature_set = match fs_arg {
                FeatureArg::W2v => FeatureSet::W2v,
                FeatureArg::W2vPlus => FeatureSet::W2vPlus,
                FeatureArg::Tfidf => FeatureSet::Tfidf,
                FeatureArg::Tfidf100 => FeatureSet::TfidfTop100,
                FeatureArg::CharNgram => FeatureSet::CharNgram,
                FeatureArg::Stylometry => FeatureSet::Stylometry,
            };
        }
        if let Some(task) = self.task {
            config.task = match task {
                TaskArg::Classify => Task::Classify,
                TaskArg::Cluster => Task::Cluster,
            };
        }
        if let Some(target) = self.target {
            config.target = match target {
                TargetArg::Author => Target::Author,
                TargetArg::Genre => Target::Genre,
            };
        }
        if let Some(n) = self.n {
            config.graph.n = Some(n);
        }
        if let Some(k) = self.k {
            config.graph.k = k;
        }
        if let Some(dim) = self.dim {
            config.embedding.dimension = dim;
        }
        if let Some(ratio) = self.split_ratio {
            config.split.train_ratio = ratio;
        }
        if let Some(out) = &self.out {
            config.out_dir = out.clone();
        }
        if let Some(workers) = self.workers {
            config.workers = Some(workers);
        }

        // seed precedence: flag, then config file, then env, then 0
        if let Some(seed) = self.seed {
            config.seed = seed;
        } else if !file_has_seed {
            if let Ok(raw) = std::env::var("STYLOGRAPH_SEED") {
                config.seed = raw
                    .parse()
                    .with_context(|| format!("STYLOGRAPH_SEED={raw} is not an integer"))?;
            }
        }
        Ok(config)
    }
}

fn print_report(report: &ExperimentReport, dir: &std::path::Path) {
    println!(
        "{} / {} / {} on {} docs ({} features)",
        report.feature_set.as_str(),
        report.learner,
        report.variant.as_str(),
        report.doc_count,
        report.feature_count,
    );
    for m in &report.per_class {
        println!(
            "  {:<20} precision {:.4}  recall {:.4}  f1 {:.4}  support {}",
            m.label, m.precision, m.recall, m.f1, m.support
        );
    }
    println!("weighted F1: {:.4}", report.weighted_f1);
    println!("artifacts: {}", dir.display());
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = dispatch(cli) {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ingest(args) => {
            let config = args.resolve()?;
            let summary = ingest_summary(&config)?;
            println!("{}", serde_json::to_string_pretty(&summary)?);
        }
        Command::Embed(args) => {
            let config = args.resolve()?;
            let count = embed_documents(&config)?;
            println!(
                "cached {count} embedding models under {}",
                config.out_dir.join("cache").join("embeddings").display()
            );
        }
        Command::Graph(args) => {
            let config = args.resolve()?;
            let dir = export_graphs(&config)?;
            println!("graphs written to {}", dir.display());
        }
        Command::Features(args) => {
            let config = args.resolve()?;
            let dir = export_features(&config)?;
            println!("features written to {}", dir.display());
        }
        Command::Classify(args) => {
            let mut config = args.resolve()?;
            config.task = Task::Classify;
            let (report, dir) = run_experiment(&config)?;
            print_report(&report, &dir);
        }
        Command::Cluster(args) => {
            let mut config = args.resolve()?;
            config.task = Task::Cluster;
            let (report, dir) = run_experiment(&config)?;
            print_report(&report, &dir);
        }
        Command::RankFeatures(args) => {
            let config = args.resolve()?;
            let (report, dir) = rank_features(&config)?;
            for entry in report.ranking.iter().take(20) {
                let f = if entry.infinite_f {
                    "inf".to_string()
                } else {
                    format!("{:.4}", entry.f_value.unwrap_or(0.0))
                };
                println!(
                    "{:>3}. {:<40} F={:<12} chi2={:.4}",
                    entry.rank, entry.feature, f, entry.chi_square
                );
            }
            println!("full ranking: {}", dir.join("ranking.json").display());
        }
        Command::ExportGraph(args) => {
            let text = fs::read_to_string(&args.graph_json)
                .with_context(|| format!("reading {}", args.graph_json.display()))?;
            let graph: stylograph::W2VGraph = from_json(&text)?;
            let rendered = match args.format.as_str() {
                "dot" => to_dot(&graph),
                "json" => to_json(&graph)?,
                other => anyhow::bail!("unknown format {other:?}; use dot or json"),
            };
            match &args.out {
                Some(path) => fs::write(path, rendered)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => print!("{rendered}"),
            }
        }
        Command::Run(args) => {
            let config = args.resolve()?;
            let (report, dir) = run_experiment(&config)?;
            print_report(&report, &dir);
        }
    }
    Ok(())
}
