//! Weighted PageRank over undirected topic networks.
//!
//! Each undirected edge is two directed transitions; a node hands its mass
//! to neighbours in proportion to edge weight over its strength. Isolated
//! nodes are dangling and spread their mass uniformly.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::io;
use crate::network::TopicNetwork;
use crate::scalar::{fmt_real, CompensatedSum, Real};
use crate::similarity::SimilarityMetric;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PagerankConfig {
    pub damping: f64,
    /// L1 change between iterates below which iteration stops.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for PagerankConfig {
    fn default() -> Self {
        Self { damping: 0.85, tolerance: 1e-10, max_iterations: 10_000 }
    }
}

impl PagerankConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.damping > 0.0 && self.damping < 1.0) {
            return Err(Error::invalid("pagerank config", format!("damping must be in (0, 1), got {}", self.damping)));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::invalid("pagerank config", "tolerance must be > 0"));
        }
        if self.max_iterations == 0 {
            return Err(Error::invalid("pagerank config", "max_iterations must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CentralityScores<T> {
    pub scores: Vec<T>,
}

pub fn pagerank<T: Real>(network: &TopicNetwork<T>, config: &PagerankConfig) -> Result<CentralityScores<T>> {
    pagerank_with_progress(network, config, |_, _| {})
}

/// Power iteration; `on_iteration(n, l1_residual)` is called after each step.
pub fn pagerank_with_progress<T: Real>(
    network: &TopicNetwork<T>,
    config: &PagerankConfig,
    mut on_iteration: impl FnMut(usize, f64),
) -> Result<CentralityScores<T>> {
    config.validate()?;
    let k = network.node_count();
    if k == 0 {
        return Err(Error::invalid("network", "no nodes"));
    }
    let n = T::from_count(k as u64);
    let d = T::lit(config.damping);
    let teleport = (T::one() - d) / n;
    let strength = network.strengths();
    let adjacency = network.adjacency();
    // Transition weights w_ij / s_j, laid out per receiving node i.
    let incoming: Vec<Vec<(usize, T)>> = adjacency
        .iter()
        .map(|nbrs| nbrs.iter().map(|&(j, w)| (j, w / strength[j])).collect())
        .collect();
    let dangling: Vec<usize> = (0..k).filter(|&j| strength[j] == T::zero()).collect();

    let mut x = vec![T::one() / n; k];
    let mut next = vec![T::zero(); k];
    let mut residual = f64::INFINITY;
    for iter in 1..=config.max_iterations {
        let dangling_mass: T = dangling.iter().map(|&j| x[j]).sum();
        let base = teleport + d * dangling_mass / n;
        for (i, slot) in next.iter_mut().enumerate() {
            let flow: T = incoming[i].iter().map(|&(j, p)| p * x[j]).sum();
            *slot = base + d * flow;
        }
        residual = x.iter().zip(&next).map(|(a, b)| (*a - *b).abs().as_f64()).sum();
        std::mem::swap(&mut x, &mut next);
        on_iteration(iter, residual);
        if residual < config.tolerance {
            let total = x.iter().copied().collect::<CompensatedSum<T>>().value();
            return Ok(CentralityScores { scores: x.into_iter().map(|v| v / total).collect() });
        }
    }
    Err(Error::NonConvergence { iterations: config.max_iterations, residual })
}

/// `(topic_id, score)` descending by score, ties by ascending id.
pub fn rank_topics<T: Real>(scores: &CentralityScores<T>) -> Vec<(usize, T)> {
    crate::lda::top_indices(scores.scores.iter().copied(), scores.scores.len())
}

/// Ranked scores as stored on disk.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoresFile<T> {
    pub metric: Option<SimilarityMetric>,
    pub corpus_hash: Option<String>,
    /// `(topic_id, score)` in rank order; rank is position + 1.
    pub ranking: Vec<(usize, T)>,
}

impl<T: Real> ScoresFile<T> {
    pub fn new(network: &TopicNetwork<T>, scores: &CentralityScores<T>) -> Self {
        Self {
            metric: Some(network.metric()),
            corpus_hash: network.corpus_hash.clone(),
            ranking: rank_topics(scores),
        }
    }

    pub fn topics(&self) -> usize {
        self.ranking.len()
    }

    /// Scores indexed by topic id.
    pub fn scores(&self) -> CentralityScores<T> {
        let mut s = vec![T::zero(); self.ranking.len()];
        for &(t, v) in &self.ranking {
            s[t] = v;
        }
        CentralityScores { scores: s }
    }

    /// `# metric=… K=… corpus=…` header, then `topic_id<TAB>score<TAB>rank`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("#");
        if let Some(m) = self.metric {
            let _ = write!(out, " metric={m}");
        }
        let _ = write!(out, " K={}", self.ranking.len());
        if let Some(h) = &self.corpus_hash {
            let _ = write!(out, " corpus={h}");
        }
        out.push('\n');
        for (r, &(t, s)) in self.ranking.iter().enumerate() {
            let _ = writeln!(out, "{t}\t{}\t{}", fmt_real(s), r + 1);
        }
        out
    }

    pub fn parse_tsv(text: &str) -> Result<Self> {
        const CTX: &str = "scores";
        let mut header = io::Header::default();
        let mut ranking = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let n = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            if line.starts_with('#') {
                if n == 1 {
                    header = io::Header::parse(line).ok_or_else(|| Error::parse(CTX, n, "malformed header"))?;
                }
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 {
                return Err(Error::parse(CTX, n, "expected `topic_id<TAB>score<TAB>rank`"));
            }
            let t: usize = cols[0].parse().map_err(|_| Error::parse(CTX, n, "bad topic id"))?;
            let s: T = cols[1].parse().map_err(|_| Error::parse(CTX, n, "bad score"))?;
            let r: usize = cols[2].parse().map_err(|_| Error::parse(CTX, n, "bad rank"))?;
            if r != ranking.len() + 1 {
                return Err(Error::parse(CTX, n, format!("expected rank {}, got {r}", ranking.len() + 1)));
            }
            if !(s > T::zero() && s.is_finite()) {
                return Err(Error::parse(CTX, n, "score must be positive"));
            }
            ranking.push((n, t, s));
        }
        let k = ranking.len();
        let mut seen = vec![false; k];
        for &(n, t, _) in &ranking {
            if t >= k || seen[t] {
                return Err(Error::parse(CTX, n, format!("topic id {t} duplicate or outside 0..{k}")));
            }
            seen[t] = true;
        }
        if let Some(hk) = header.get("K") {
            if hk.parse::<usize>().ok() != Some(k) {
                return Err(Error::parse(CTX, 1, format!("header K={hk} but {k} rows")));
            }
        }
        let metric = header
            .get("metric")
            .map(|m| m.parse().map_err(|e: crate::similarity::UnknownMetric| Error::parse(CTX, 1, e.to_string())))
            .transpose()?;
        Ok(Self {
            metric,
            corpus_hash: header.get("corpus").map(String::from),
            ranking: ranking.into_iter().map(|(_, t, s)| (t, s)).collect(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse_tsv(&io::read_to_string(path)?)
    }
}
