//! The navigator index: every precomputed view the topic navigator serves,
//! bundled into one JSON file.
//!
//! All inputs must carry the same corpus fingerprint; mixing artifacts from
//! different runs is rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::centrality::ScoresFile;
use crate::corpus::{parse_text_spans, Corpus, TextSpan};
use crate::error::{Error, Result};
use crate::features::FeatureMatrix;
use crate::io;
use crate::layout::{layout_cloud, LayoutConfig, TopicCloudLayout};
use crate::lda::{LdaModel, DEFAULT_TOP_WORDS};
use crate::network::TopicNetwork;
use crate::ranking::{document_ranking, LabelSet, RankedTopic, TopWord, DEFAULT_DOCUMENT_LIMIT};
use crate::similarity::SimilarityMetric;

pub const INDEX_FORMAT: &str = "topikrank-index/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocumentEntry {
    pub doc_id: usize,
    pub author_id: String,
    /// Location of the aggregated text in the corpus text store.
    pub text: TextSpan,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankedDocument {
    pub doc_id: usize,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricIndex {
    pub metric: SimilarityMetric,
    /// Rank order.
    pub topics: Vec<RankedTopic>,
    pub cloud: TopicCloudLayout,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NavigatorIndex {
    pub format: String,
    pub corpus_hash: String,
    pub text_hash: String,
    pub topics: usize,
    pub documents: Vec<DocumentEntry>,
    /// Per topic id; depends only on theta, so it is shared by all metrics.
    pub topic_documents: Vec<Vec<RankedDocument>>,
    /// Sorted by metric.
    pub metrics: Vec<MetricIndex>,
}

pub struct MetricArtifacts<'a> {
    pub network: &'a TopicNetwork<f64>,
    pub scores: &'a ScoresFile<f64>,
}

pub struct IndexInputs<'a> {
    pub corpus: &'a Corpus,
    /// Raw bytes of the corpus text store.
    pub text_store: &'a [u8],
    pub model: &'a LdaModel<f64>,
    pub metrics: Vec<MetricArtifacts<'a>>,
    pub labels: &'a LabelSet,
    pub top_words: usize,
    pub document_limit: usize,
    pub layout: LayoutConfig,
}

impl<'a> IndexInputs<'a> {
    pub fn new(
        corpus: &'a Corpus,
        text_store: &'a [u8],
        model: &'a LdaModel<f64>,
        metrics: Vec<MetricArtifacts<'a>>,
        labels: &'a LabelSet,
    ) -> Self {
        Self {
            corpus,
            text_store,
            model,
            metrics,
            labels,
            top_words: DEFAULT_TOP_WORDS,
            document_limit: DEFAULT_DOCUMENT_LIMIT,
            layout: LayoutConfig::default(),
        }
    }
}

fn check_hash(what: &str, got: Option<&str>, want: &str) -> Result<()> {
    match got {
        Some(h) if h == want => Ok(()),
        Some(h) => Err(Error::ArtifactMismatch(format!("{what} was built from corpus {h}, expected {want}"))),
        None => Err(Error::ArtifactMismatch(format!("{what} carries no corpus fingerprint"))),
    }
}

pub fn build_navigator_index(inputs: &IndexInputs<'_>) -> Result<NavigatorIndex> {
    let corpus_hash = inputs.corpus.fingerprint();
    let model = inputs.model;
    check_hash("model", Some(&model.corpus_hash), &corpus_hash)?;
    let k = model.topics();
    let d = inputs.corpus.num_documents();
    if model.num_documents() != d || model.vocab_size() != inputs.corpus.vocab_size() {
        return Err(Error::ArtifactMismatch(format!(
            "model is {}x{} (docs x vocab), corpus is {d}x{}",
            model.num_documents(),
            model.vocab_size(),
            inputs.corpus.vocab_size()
        )));
    }
    let spans = parse_text_spans(inputs.text_store)?;
    if spans.len() != d {
        return Err(Error::ArtifactMismatch(format!("text store has {} documents, corpus {d}", spans.len())));
    }
    if inputs.metrics.is_empty() {
        return Err(Error::invalid("index inputs", "at least one metric is required"));
    }

    let mut metrics = Vec::new();
    for art in &inputs.metrics {
        let metric = art.network.metric();
        check_hash(&format!("{metric} network"), art.network.corpus_hash.as_deref(), &corpus_hash)?;
        check_hash(&format!("{metric} scores"), art.scores.corpus_hash.as_deref(), &corpus_hash)?;
        if art.scores.metric != Some(metric) {
            return Err(Error::ArtifactMismatch(format!(
                "scores metric {:?} does not match network metric {metric}",
                art.scores.metric.map(|m| m.name())
            )));
        }
        if art.network.node_count() != k || art.scores.topics() != k {
            return Err(Error::ArtifactMismatch(format!("{metric} artifacts disagree with model K={k}")));
        }
        if metrics.iter().any(|m: &MetricIndex| m.metric == metric) {
            return Err(Error::invalid("index inputs", format!("metric {metric} given twice")));
        }
        let topics = art
            .scores
            .ranking
            .iter()
            .enumerate()
            .map(|(pos, &(topic_id, score))| {
                let top_words = model
                    .top_words_named(&inputs.corpus.vocabulary, topic_id, inputs.top_words)?
                    .into_iter()
                    .map(|(word, probability)| TopWord { word, probability })
                    .collect();
                Ok(RankedTopic {
                    topic_id,
                    rank: pos + 1,
                    score,
                    label: inputs.labels.label(topic_id),
                    top_words,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let cloud = layout_cloud(art.network, &art.scores.scores(), inputs.labels, &inputs.layout)?;
        metrics.push(MetricIndex { metric, topics, cloud });
    }
    metrics.sort_by_key(|m| m.metric);

    let features = FeatureMatrix::from_model(model);
    let topic_documents = (0..k)
        .map(|t| {
            Ok(document_ranking(&features, t, inputs.document_limit)?
                .into_iter()
                .map(|(doc_id, probability)| RankedDocument { doc_id, probability })
                .collect())
        })
        .collect::<Result<Vec<_>>>()?;

    let documents = inputs
        .corpus
        .documents
        .iter()
        .zip(spans)
        .map(|(doc, text)| DocumentEntry { doc_id: doc.doc_id, author_id: doc.author_id.clone(), text })
        .collect();

    Ok(NavigatorIndex {
        format: INDEX_FORMAT.to_string(),
        corpus_hash,
        text_hash: io::fingerprint(inputs.text_store),
        topics: k,
        documents,
        topic_documents,
        metrics,
    })
}

impl NavigatorIndex {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec(self).expect("index serializes");
        out.push(b'\n');
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let idx: NavigatorIndex = serde_json::from_slice(bytes).map_err(|e| Error::parse("index", e.line(), e.to_string()))?;
        if idx.format != INDEX_FORMAT {
            return Err(Error::invalid("index", format!("unsupported format {:?}", idx.format)));
        }
        Ok(idx)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_bytes(&io::read_bytes(path)?)
    }

    pub fn metric(&self, metric: SimilarityMetric) -> Option<&MetricIndex> {
        self.metrics.iter().find(|m| m.metric == metric)
    }

    pub fn num_documents(&self) -> usize {
        self.documents.len()
    }
}
