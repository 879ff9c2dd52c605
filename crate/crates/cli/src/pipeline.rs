//! `pipeline`: every stage in order, driven by a TOML manifest.
//!
//! ```toml
//! input = "mini-corpus"      # directory of blog XML files
//! output_dir = "out"         # optional; defaults to $TOPIKRANK_DATA_DIR or ./out
//! labels = "labels.tsv"      # optional
//! stoplist = "stop.txt"      # optional
//! topics = 100
//! iterations = 1000
//! seed = 42
//! damping = 0.85
//! ```
//!
//! Relative paths are taken from the manifest's directory. A
//! `pipeline.lock.toml` recording every artifact, its fingerprint and the
//! effective configuration is written to the output directory last.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use topikrank_core::centrality::ScoresFile;
use topikrank_core::corpus::text_store_path;
use topikrank_core::layout::LayoutConfig;
use topikrank_core::lda::{LdaConfig, LdaModel};
use topikrank_core::network::TopicNetwork;
use topikrank_core::{io, FeatureMatrix, NavigatorIndex, PagerankConfig, SimilarityMetric};

use crate::stages::{self, load_labels};
use crate::{CliError, CliResult, DATA_DIR_ENV};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestFile {
    pub input: PathBuf,
    pub output_dir: Option<PathBuf>,
    pub stoplist: Option<PathBuf>,
    pub labels: Option<PathBuf>,
    #[serde(default = "default_topics")]
    pub topics: usize,
    #[serde(default = "default_iterations")]
    pub iterations: usize,
    #[serde(default)]
    pub seed: u64,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    #[serde(default = "default_damping")]
    pub damping: f64,
    #[serde(default = "default_layout_seed")]
    pub layout_seed: u64,
}

fn default_topics() -> usize {
    100
}
fn default_iterations() -> usize {
    1000
}
fn default_damping() -> f64 {
    0.85
}
fn default_layout_seed() -> u64 {
    42
}

/// Effective configuration echoed into the lock file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub topics: usize,
    pub alpha: f64,
    pub beta: f64,
    pub iterations: usize,
    pub seed: u64,
    pub damping: f64,
    pub tolerance: f64,
    pub layout_seed: u64,
}

/// Everything one pipeline run produced. Paths are relative to the output
/// directory so the lock file is identical across checkouts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineManifest {
    pub corpus: PathBuf,
    pub text_store: PathBuf,
    pub model: PathBuf,
    pub doc_topics: PathBuf,
    pub networks: BTreeMap<String, PathBuf>,
    pub scores: BTreeMap<String, PathBuf>,
    pub labels: Option<PathBuf>,
    pub index: PathBuf,
    pub corpus_hash: String,
    pub config: ConfigEcho,
}

pub const LOCK_FILE: &str = "pipeline.lock.toml";

impl PipelineManifest {
    /// Checks every referenced file exists and carries `corpus_hash`.
    pub fn validate(&self, root: &Path) -> CliResult<()> {
        let p = |rel: &Path| root.join(rel);
        let mismatch = |what: &str, got: Option<&str>| {
            CliError::Validation(format!(
                "{what} fingerprint {:?} does not match corpus {}",
                got,
                self.corpus_hash
            ))
        };
        let corpus_hash = io::fingerprint(&io::read_bytes(&p(&self.corpus))?);
        if corpus_hash != self.corpus_hash {
            return Err(mismatch("corpus", Some(&corpus_hash)));
        }
        io::read_bytes(&p(&self.text_store))?;
        let model = LdaModel::<f64>::load(&p(&self.model))?;
        if model.corpus_hash != self.corpus_hash {
            return Err(mismatch("model", Some(&model.corpus_hash)));
        }
        let dt = FeatureMatrix::load_doc_topics(&p(&self.doc_topics))?;
        if dt.corpus_hash.as_deref() != Some(&self.corpus_hash) {
            return Err(mismatch("doc-topics", dt.corpus_hash.as_deref()));
        }
        for path in self.networks.values() {
            let n = TopicNetwork::<f64>::load(&p(path))?;
            if n.corpus_hash.as_deref() != Some(&self.corpus_hash) {
                return Err(mismatch("network", n.corpus_hash.as_deref()));
            }
        }
        for path in self.scores.values() {
            let s = ScoresFile::<f64>::load(&p(path))?;
            if s.corpus_hash.as_deref() != Some(&self.corpus_hash) {
                return Err(mismatch("scores", s.corpus_hash.as_deref()));
            }
        }
        if let Some(l) = &self.labels {
            io::read_bytes(&p(l))?;
        }
        let index = NavigatorIndex::load(&p(&self.index))?;
        if index.corpus_hash != self.corpus_hash {
            return Err(mismatch("index", Some(&index.corpus_hash)));
        }
        Ok(())
    }
}

pub fn load_manifest(path: &Path) -> CliResult<ManifestFile> {
    let text = io::read_to_string(path)?;
    toml::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

pub fn run_manifest(manifest_path: &Path) -> CliResult<()> {
    let m = load_manifest(manifest_path)?;
    let base = manifest_path.parent().unwrap_or(Path::new(".")).to_path_buf();
    let rel = |p: &Path| if p.is_absolute() { p.to_path_buf() } else { base.join(p) };
    let out = match (&m.output_dir, std::env::var_os(DATA_DIR_ENV)) {
        (Some(d), _) => rel(d),
        (None, Some(env)) if !env.is_empty() => PathBuf::from(env),
        (None, _) => base.join("out"),
    };
    fs::create_dir_all(&out).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;

    let mut lda = LdaConfig::with_topics(m.topics);
    lda.iterations = m.iterations;
    lda.seed = m.seed;
    if let Some(a) = m.alpha {
        lda.alpha = a;
    }
    if let Some(b) = m.beta {
        lda.beta = b;
    }
    lda.validate()?;
    let pr = PagerankConfig { damping: m.damping, ..PagerankConfig::default() };
    pr.validate()?;
    let layout = LayoutConfig { seed: m.layout_seed, ..LayoutConfig::default() };

    let corpus = PathBuf::from("corpus.txt");
    let model = PathBuf::from("model.txt");
    let doc_topics = PathBuf::from("doc_topics.tsv");
    let index = PathBuf::from("index.json");
    let at = |p: &Path| out.join(p);

    let corpus_hash = stages::write_corpus(&rel(&m.input), &at(&corpus), m.stoplist.as_deref().map(rel).as_deref())?;
    let trained = stages::write_model(&at(&corpus), &lda, &at(&model), Some(&at(&doc_topics)))?;
    let features = FeatureMatrix::from_model(&trained);
    let labels_path = m.labels.as_deref().map(rel);
    let labels = load_labels(labels_path.as_deref(), trained.topics())?;

    let mut networks = BTreeMap::new();
    let mut scores = BTreeMap::new();
    for metric in SimilarityMetric::ALL {
        let net = PathBuf::from(format!("{metric}.tsv"));
        let graphml = at(Path::new(&format!("{metric}.graphml")));
        stages::write_network(&features, metric, &at(&net), Some(&graphml), &labels)?;
        let rank = PathBuf::from(format!("{metric}_rank.tsv"));
        stages::write_scores(&at(&net), &pr, &at(&rank))?;
        let svg = at(Path::new(&format!("{metric}_cloud.svg")));
        stages::write_cloud(&at(&net), &at(&rank), labels_path.as_deref(), &layout, &svg)?;
        networks.insert(metric.to_string(), net);
        scores.insert(metric.to_string(), rank);
    }

    let net_paths: Vec<PathBuf> = networks.values().map(|p| at(p)).collect();
    let score_paths: Vec<PathBuf> = scores.values().map(|p| at(p)).collect();
    stages::write_index(
        &at(&corpus),
        &at(&model),
        &net_paths,
        &score_paths,
        labels_path.as_deref(),
        &layout,
        &at(&index),
    )?;

    // Copy labels next to the other artifacts so the lock is self-contained.
    let labels_rel = match &labels_path {
        Some(src) => {
            let dst = PathBuf::from("labels.tsv");
            io::write_atomic(&at(&dst), &io::read_bytes(src)?)?;
            Some(dst)
        }
        None => None,
    };
    let lock = PipelineManifest {
        text_store: text_store_path(&corpus),
        corpus,
        model,
        doc_topics,
        networks,
        scores,
        labels: labels_rel,
        index,
        corpus_hash,
        config: ConfigEcho {
            topics: lda.topics,
            alpha: lda.alpha,
            beta: lda.beta,
            iterations: lda.iterations,
            seed: lda.seed,
            damping: pr.damping,
            tolerance: pr.tolerance,
            layout_seed: layout.seed,
        },
    };
    lock.validate(&out)?;
    let text = toml::to_string(&lock).map_err(|e| CliError::Validation(e.to_string()))?;
    io::write_atomic(&at(Path::new(LOCK_FILE)), text.as_bytes())?;
    eprintln!("stage=pipeline output={} corpus={}", out.display(), lock.corpus_hash);
    Ok(())
}
