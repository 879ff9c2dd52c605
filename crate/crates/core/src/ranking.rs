//! Topic labels and per-topic document rankings.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::FeatureMatrix;
use crate::io;
use crate::lda::top_indices;
use crate::scalar::Real;

pub const DEFAULT_DOCUMENT_LIMIT: usize = 100;

/// Human-assigned topic names; unlabeled topics fall back to `Topic-<id>`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelSet {
    labels: BTreeMap<usize, String>,
}

impl LabelSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses `topic_id<TAB>label` lines. Blank lines are skipped.
    pub fn parse(text: &str, topics: usize) -> Result<Self> {
        const CTX: &str = "labels";
        let mut labels = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let n = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            let (id, label) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(CTX, n, "expected `topic_id<TAB>label`"))?;
            let id: usize = id.trim().parse().map_err(|_| Error::parse(CTX, n, format!("bad topic id {id:?}")))?;
            if id >= topics {
                return Err(Error::parse(CTX, n, format!("topic id {id} >= K={topics}")));
            }
            if labels.insert(id, label.trim().to_string()).is_some() {
                return Err(Error::parse(CTX, n, format!("duplicate topic id {id}")));
            }
        }
        Ok(Self { labels })
    }

    pub fn load(path: &Path, topics: usize) -> Result<Self> {
        Self::parse(&io::read_to_string(path)?, topics)
    }

    pub fn insert(&mut self, topic: usize, label: impl Into<String>) {
        self.labels.insert(topic, label.into());
    }

    pub fn get(&self, topic: usize) -> Option<&str> {
        self.labels.get(&topic).map(String::as_str)
    }

    pub fn label(&self, topic: usize) -> String {
        self.get(topic).map_or_else(|| format!("Topic-{topic}"), String::from)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

pub fn load_labels(path: &Path, topics: usize) -> Result<LabelSet> {
    LabelSet::load(path, topics)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopWord {
    pub word: String,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedTopic {
    pub topic_id: usize,
    /// 1-based.
    pub rank: usize,
    pub score: f64,
    pub label: String,
    pub top_words: Vec<TopWord>,
}

/// Documents most associated with `topic`, by descending probability with ties
/// on ascending doc id, truncated to `limit`.
pub fn document_ranking<T: Real>(features: &FeatureMatrix<T>, topic: usize, limit: usize) -> Result<Vec<(usize, T)>> {
    if topic >= features.topics() {
        return Err(Error::OutOfRange { what: "topic", index: topic, size: features.topics() });
    }
    if limit == 0 {
        return Err(Error::invalid("document limit", "must be >= 1"));
    }
    Ok(top_indices(features.row(topic).iter().copied(), limit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn labels_parse() {
        let l = LabelSet::parse("0\tGood times\n\n2\tMixed\n", 100).unwrap();
        assert_eq!(l.get(0), Some("Good times"));
        assert_eq!(l.label(2), "Mixed");
        assert_eq!(l.label(1), "Topic-1");
        assert!(LabelSet::parse("", 100).unwrap().is_empty());
    }

    #[test]
    fn labels_errors() {
        let err = LabelSet::parse("150\tx\n", 100).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = LabelSet::parse("1\ta\n1\tb\n", 100).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(LabelSet::parse("no tab here\n", 100).is_err());
    }

    fn f(row: Vec<f64>) -> FeatureMatrix<f64> {
        let n = row.len();
        FeatureMatrix::new(ndarray::Array2::from_shape_vec((1, n), row).unwrap()).unwrap()
    }

    #[test]
    fn ranking_sorts_and_truncates() {
        assert_eq!(document_ranking(&f(vec![0.1, 0.9, 0.5]), 0, 2).unwrap(), vec![(1, 0.9), (2, 0.5)]);
        assert_eq!(document_ranking(&f(vec![0.1, 0.9, 0.5]), 0, 10).unwrap().len(), 3);
        assert_eq!(document_ranking(&f(vec![0.5, 0.5]), 0, 2).unwrap(), vec![(0, 0.5), (1, 0.5)]);
    }

    #[test]
    fn ranking_errors() {
        let m = FeatureMatrix::new(array![[0.5, 0.5], [0.5, 0.5]]).unwrap();
        assert!(matches!(document_ranking(&m, 2, 5), Err(Error::OutOfRange { .. })));
        assert!(document_ranking(&m, 0, 0).is_err());
    }
}
