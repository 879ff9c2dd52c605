//! Stage implementations shared by the subcommands and `pipeline`.
//!
//! Progress goes to stderr as `key=value` lines; artifacts are written
//! atomically.

use std::path::{Path, PathBuf};

use topikrank_core::centrality::{pagerank_with_progress, ScoresFile};
use topikrank_core::corpus::{ingest_directory, text_store_path, texts_to_bytes};
use topikrank_core::features::FeatureMatrix;
use topikrank_core::index::{build_navigator_index, IndexInputs, MetricArtifacts};
use topikrank_core::layout::{layout_cloud, LayoutConfig};
use topikrank_core::lda::{train_with_progress, LdaConfig, LdaModel};
use topikrank_core::network::{build_network, TopicNetwork};
use topikrank_core::{io, stoplist, Corpus, LabelSet, PagerankConfig, SimilarityMetric};

use crate::{
    BuildIndexArgs, CliError, CliResult, ExportCloudArgs, IngestArgs, LayoutArgs, NetworkArgs, RankArgs, ServeArgs,
    TrainArgs, DATA_DIR_ENV,
};

/// Resolves a relative path against `TOPIKRANK_DATA_DIR` when it is set.
pub fn resolve(path: &Path) -> PathBuf {
    match std::env::var_os(DATA_DIR_ENV) {
        Some(dir) if path.is_relative() && !dir.is_empty() => PathBuf::from(dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn resolve_opt(path: &Option<PathBuf>) -> Option<PathBuf> {
    path.as_deref().map(resolve)
}

pub fn write_corpus(dir: &Path, output: &Path, stop: Option<&Path>) -> CliResult<String> {
    let stoplist = match stop {
        Some(p) => stoplist::load(p)?,
        None => stoplist::english(),
    };
    let ingested = ingest_directory(dir, &stoplist)?;
    let c = &ingested.corpus;
    let text = c.to_text();
    let hash = io::fingerprint(text.as_bytes());
    io::write_atomic(&text_store_path(output), &texts_to_bytes(&ingested.texts))?;
    io::write_atomic(output, text.as_bytes())?;
    eprintln!(
        "stage=ingest documents={} vocabulary={} tokens={} corpus={hash}",
        c.num_documents(),
        c.vocab_size(),
        c.num_tokens()
    );
    Ok(hash)
}

pub fn ingest(a: &IngestArgs) -> CliResult<()> {
    write_corpus(&resolve(&a.input), &resolve(&a.output), resolve_opt(&a.stoplist).as_deref()).map(|_| ())
}

pub fn write_model(
    corpus_path: &Path,
    config: &LdaConfig,
    output: &Path,
    doc_topics: Option<&Path>,
) -> CliResult<LdaModel<f64>> {
    let corpus = Corpus::load(corpus_path)?;
    let every = (config.iterations / 20).max(1);
    let model: LdaModel<f64> = train_with_progress(&corpus, config, |sweep, _| {
        if sweep % every == 0 || sweep == config.iterations {
            eprintln!("stage=train sweep={sweep} total={}", config.iterations);
        }
    })?;
    io::write_atomic(output, model.to_text().as_bytes())?;
    if let Some(p) = doc_topics {
        io::write_atomic(p, FeatureMatrix::from_model(&model).to_doc_topics_tsv().as_bytes())?;
    }
    Ok(model)
}

pub fn train(a: &TrainArgs) -> CliResult<()> {
    let mut config = LdaConfig::with_topics(a.topics);
    config.iterations = a.iterations;
    config.seed = a.seed;
    config.beta = a.beta;
    if let Some(alpha) = a.alpha {
        config.alpha = alpha;
    }
    config.validate()?;
    let corpus_path = resolve(&a.corpus);
    let model = write_model(&corpus_path, &config, &resolve(&a.output), resolve_opt(&a.doc_topics).as_deref())?;
    if let Some(n) = a.top_words {
        let corpus = Corpus::load(&corpus_path)?;
        for t in 0..model.topics() {
            let words: Vec<String> = model
                .top_words_named(&corpus.vocabulary, t, n)?
                .into_iter()
                .map(|(w, _)| w)
                .collect();
            println!("{t}\t{}", words.join(" "));
        }
    }
    Ok(())
}

pub fn load_labels(path: Option<&Path>, topics: usize) -> CliResult<LabelSet> {
    Ok(match path {
        Some(p) => LabelSet::load(p, topics)?,
        None => LabelSet::new(),
    })
}

pub fn write_network(
    features: &FeatureMatrix<f64>,
    metric: SimilarityMetric,
    output: &Path,
    graphml: Option<&Path>,
    labels: &LabelSet,
) -> CliResult<TopicNetwork<f64>> {
    let net = build_network(features, metric)?;
    io::write_atomic(output, net.to_tsv().as_bytes())?;
    if let Some(g) = graphml {
        io::write_atomic(g, net.to_graphml(Some(&|i| labels.label(i))).as_bytes())?;
    }
    eprintln!("stage=network metric={metric} nodes={} edges={}", net.node_count(), net.edges().len());
    Ok(net)
}

pub fn network(a: &NetworkArgs) -> CliResult<()> {
    let features = match (&a.model, &a.doc_topics) {
        (Some(m), _) => FeatureMatrix::from_model(&LdaModel::<f64>::load(&resolve(m))?),
        (None, Some(d)) => FeatureMatrix::load_doc_topics(&resolve(d))?,
        (None, None) => return Err(CliError::Validation("one of --model or --doc-topics is required".into())),
    };
    let labels = load_labels(resolve_opt(&a.labels).as_deref(), features.topics())?;
    write_network(&features, a.metric, &resolve(&a.output), resolve_opt(&a.graphml).as_deref(), &labels)?;
    Ok(())
}

pub fn write_scores(network_path: &Path, config: &PagerankConfig, output: &Path) -> CliResult<ScoresFile<f64>> {
    let net = TopicNetwork::<f64>::load(network_path)?;
    let mut last = (0, f64::NAN);
    let scores = pagerank_with_progress(&net, config, |n, r| last = (n, r))?;
    eprintln!("stage=rank metric={} iterations={} residual={:e}", net.metric(), last.0, last.1);
    let file = ScoresFile::new(&net, &scores);
    io::write_atomic(output, file.to_tsv().as_bytes())?;
    Ok(file)
}

pub fn rank(a: &RankArgs) -> CliResult<()> {
    let config = PagerankConfig { damping: a.damping, tolerance: a.tolerance, max_iterations: a.max_iterations };
    config.validate()?;
    write_scores(&resolve(&a.network), &config, &resolve(&a.output)).map(|_| ())
}

pub fn layout_config(a: &LayoutArgs) -> LayoutConfig {
    LayoutConfig {
        seed: a.layout_seed,
        min_font: a.min_font,
        max_font: a.max_font,
        ..LayoutConfig::default()
    }
}

pub fn write_cloud(
    network_path: &Path,
    scores_path: &Path,
    labels_path: Option<&Path>,
    layout: &LayoutConfig,
    output: &Path,
) -> CliResult<()> {
    let net = TopicNetwork::<f64>::load(network_path)?;
    let scores = ScoresFile::<f64>::load(scores_path)?;
    if scores.metric.is_some_and(|m| m != net.metric()) || scores.corpus_hash != net.corpus_hash {
        return Err(CliError::Validation(format!(
            "{} and {} come from different runs",
            network_path.display(),
            scores_path.display()
        )));
    }
    let labels = load_labels(labels_path, net.node_count())?;
    let cloud = layout_cloud(&net, &scores.scores(), &labels, layout)?;
    io::write_atomic(output, cloud.to_svg().as_bytes())?;
    Ok(())
}

pub fn export_cloud(a: &ExportCloudArgs) -> CliResult<()> {
    write_cloud(
        &resolve(&a.network),
        &resolve(&a.scores),
        resolve_opt(&a.labels).as_deref(),
        &layout_config(&a.layout),
        &resolve(&a.output),
    )
}

pub fn write_index(
    corpus_path: &Path,
    model_path: &Path,
    networks: &[PathBuf],
    scores: &[PathBuf],
    labels_path: Option<&Path>,
    layout: &LayoutConfig,
    output: &Path,
) -> CliResult<String> {
    let corpus = Corpus::load(corpus_path)?;
    let text_store = io::read_bytes(&text_store_path(corpus_path))?;
    let model = LdaModel::<f64>::load(model_path)?;
    let nets = networks
        .iter()
        .map(|p| TopicNetwork::<f64>::load(p))
        .collect::<Result<Vec<_>, _>>()?;
    let score_files = scores
        .iter()
        .map(|p| ScoresFile::<f64>::load(p))
        .collect::<Result<Vec<_>, _>>()?;
    if nets.len() != score_files.len() {
        return Err(CliError::Validation(format!(
            "{} networks but {} score files",
            nets.len(),
            score_files.len()
        )));
    }
    let mut metrics = Vec::new();
    for net in &nets {
        let s = score_files
            .iter()
            .find(|s| s.metric == Some(net.metric()))
            .ok_or_else(|| CliError::Validation(format!("no score file for metric {}", net.metric())))?;
        metrics.push(MetricArtifacts { network: net, scores: s });
    }
    let labels = load_labels(labels_path, model.topics())?;
    let mut inputs = IndexInputs::new(&corpus, &text_store, &model, metrics, &labels);
    inputs.layout = *layout;
    let index = build_navigator_index(&inputs)?;
    let bytes = index.to_bytes();
    io::write_atomic(output, &bytes)?;
    eprintln!(
        "stage=build-index topics={} documents={} metrics={}",
        index.topics,
        index.num_documents(),
        index.metrics.len()
    );
    Ok(io::fingerprint(&bytes))
}

pub fn build_index(a: &BuildIndexArgs) -> CliResult<()> {
    let networks: Vec<PathBuf> = a.network.iter().map(|p| resolve(p)).collect();
    let scores: Vec<PathBuf> = a.scores.iter().map(|p| resolve(p)).collect();
    write_index(
        &resolve(&a.corpus),
        &resolve(&a.model),
        &networks,
        &scores,
        resolve_opt(&a.labels).as_deref(),
        &layout_config(&a.layout),
        &resolve(&a.output),
    )
    .map(|_| ())
}

pub fn serve(a: &ServeArgs) -> CliResult<()> {
    let config = topikrank_server::ServiceConfig {
        index_path: resolve(&a.index),
        corpus_path: resolve(&a.corpus),
        bind: std::net::SocketAddr::new(a.host, a.port),
        static_dir: resolve_opt(&a.static_dir),
    };
    let runtime = tokio::runtime::Runtime::new().map_err(|e| CliError::Io(e.to_string()))?;
    runtime.block_on(topikrank_server::serve(config))?;
    Ok(())
}
