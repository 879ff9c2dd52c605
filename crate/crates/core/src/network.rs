//! Weighted undirected topic networks.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::features::FeatureMatrix;
use crate::io;
use crate::scalar::{fmt_real, Real};
use crate::similarity::SimilarityMetric;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge<T> {
    pub source: usize,
    pub target: usize,
    pub weight: T,
}

/// Undirected graph over `node_count` topics. Edges are stored once with
/// `source < target`, sorted, and every weight is strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct TopicNetwork<T> {
    node_count: usize,
    edges: Vec<Edge<T>>,
    metric: SimilarityMetric,
    pub corpus_hash: Option<String>,
}

impl<T: Real> TopicNetwork<T> {
    /// Validates and normalizes an edge list: endpoints are reordered so
    /// `source < target` and edges are sorted.
    pub fn from_edges(
        node_count: usize,
        metric: SimilarityMetric,
        edges: impl IntoIterator<Item = (usize, usize, T)>,
    ) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for (a, b, w) in edges {
            let (source, target) = (a.min(b), a.max(b));
            if source == target {
                return Err(Error::invalid("network", format!("self-loop on node {a}")));
            }
            if target >= node_count {
                return Err(Error::OutOfRange { what: "node", index: target, size: node_count });
            }
            if !(w > T::zero() && w.is_finite()) {
                return Err(Error::invalid("network", format!("edge ({source}, {target}) has weight {w}")));
            }
            if !seen.insert((source, target)) {
                return Err(Error::invalid("network", format!("duplicate edge ({source}, {target})")));
            }
            out.push(Edge { source, target, weight: w });
        }
        out.sort_by_key(|e| (e.source, e.target));
        Ok(Self { node_count, edges: out, metric, corpus_hash: None })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> &[Edge<T>] {
        &self.edges
    }

    pub fn metric(&self) -> SimilarityMetric {
        self.metric
    }

    pub fn weight(&self, a: usize, b: usize) -> Option<T> {
        let key = (a.min(b), a.max(b));
        self.edges
            .binary_search_by_key(&key, |e| (e.source, e.target))
            .ok()
            .map(|i| self.edges[i].weight)
    }

    /// Per-node `(neighbor, weight)` lists.
    pub fn adjacency(&self) -> Vec<Vec<(usize, T)>> {
        let mut adj = vec![Vec::new(); self.node_count];
        for e in &self.edges {
            adj[e.source].push((e.target, e.weight));
            adj[e.target].push((e.source, e.weight));
        }
        adj
    }

    /// Sum of incident edge weights for every node.
    pub fn strengths(&self) -> Vec<T> {
        let mut s = vec![T::zero(); self.node_count];
        for e in &self.edges {
            s[e.source] = s[e.source] + e.weight;
            s[e.target] = s[e.target] + e.weight;
        }
        s
    }

    /// Edge-list TSV: `# metric=<m> K=<K> [corpus=<hash>]`, then
    /// `i<TAB>j<TAB>weight` per edge.
    pub fn to_tsv(&self) -> String {
        let mut out = format!("# metric={} K={}", self.metric, self.node_count);
        if let Some(h) = &self.corpus_hash {
            let _ = write!(out, " corpus={h}");
        }
        out.push('\n');
        for e in &self.edges {
            let _ = writeln!(out, "{}\t{}\t{}", e.source, e.target, fmt_real(e.weight));
        }
        out
    }

    pub fn parse_tsv(text: &str) -> Result<Self> {
        const CTX: &str = "edge list";
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let header = lines
            .next()
            .and_then(|(_, l)| io::Header::parse(l))
            .ok_or_else(|| Error::parse(CTX, 1, "missing `# metric=<m> K=<K>` header"))?;
        let metric: SimilarityMetric = header
            .get("metric")
            .ok_or_else(|| Error::parse(CTX, 1, "header lacks metric"))?
            .parse()
            .map_err(|e: crate::similarity::UnknownMetric| Error::parse(CTX, 1, e.to_string()))?;
        let k: usize = header
            .get("K")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::parse(CTX, 1, "header lacks K"))?;
        let mut edges = Vec::new();
        let mut seen = BTreeSet::new();
        for (n, line) in lines {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 {
                return Err(Error::parse(CTX, n, "expected `i<TAB>j<TAB>weight`"));
            }
            let i: usize = cols[0].parse().map_err(|_| Error::parse(CTX, n, "bad node id"))?;
            let j: usize = cols[1].parse().map_err(|_| Error::parse(CTX, n, "bad node id"))?;
            let w: T = cols[2].parse().map_err(|_| Error::parse(CTX, n, "bad weight"))?;
            if i >= j || j >= k {
                return Err(Error::parse(CTX, n, format!("need i < j < {k}, got ({i}, {j})")));
            }
            if !(w > T::zero() && w.is_finite()) {
                return Err(Error::parse(CTX, n, format!("weight {} must be positive", cols[2])));
            }
            if !seen.insert((i, j)) {
                return Err(Error::parse(CTX, n, format!("duplicate edge ({i}, {j})")));
            }
            edges.push((i, j, w));
        }
        let mut net = Self::from_edges(k, metric, edges)?;
        net.corpus_hash = header.get("corpus").map(String::from);
        Ok(net)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse_tsv(&io::read_to_string(path)?)
    }

    /// GraphML document with one `weight` edge attribute and optional node
    /// labels.
    pub fn to_graphml(&self, labels: Option<&dyn Fn(usize) -> String>) -> String {
        let mut out = String::new();
        out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        out.push_str("<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n");
        out.push_str("  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n");
        out.push_str("  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n");
        let _ = writeln!(out, "  <graph id=\"{}\" edgedefault=\"undirected\">", self.metric);
        for i in 0..self.node_count {
            let label = labels.map_or_else(|| format!("Topic-{i}"), |f| f(i));
            let _ = writeln!(
                out,
                "    <node id=\"n{i}\"><data key=\"label\">{}</data></node>",
                xml_escape(&label)
            );
        }
        for (n, e) in self.edges.iter().enumerate() {
            let _ = writeln!(
                out,
                "    <edge id=\"e{n}\" source=\"n{}\" target=\"n{}\"><data key=\"weight\">{}</data></edge>",
                e.source,
                e.target,
                fmt_real(e.weight)
            );
        }
        out.push_str("  </graph>\n</graphml>\n");
        out
    }
}

pub(crate) fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Scores every topic pair under `metric` and keeps the strictly positive
/// ones. Undefined Pearson pairs produce no edge.
pub fn build_network<T: Real>(features: &FeatureMatrix<T>, metric: SimilarityMetric) -> Result<TopicNetwork<T>> {
    let k = features.topics();
    if k < 2 || features.num_documents() < 2 {
        return Err(Error::invalid(
            "feature matrix",
            format!("need at least 2 topics and 2 documents, got {k} x {}", features.num_documents()),
        ));
    }
    let rows: Vec<Vec<T>> = features.values.rows().into_iter().map(|r| r.to_vec()).collect();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    let scored: Vec<Option<(usize, usize, T)>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            metric
                .similarity(&rows[i], &rows[j])
                .map(|s| s.filter(|&w| w > T::zero()).map(|w| (i, j, w)))
        })
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::invalid("feature matrix", e.to_string()))?;
    let mut net = TopicNetwork::from_edges(k, metric, scored.into_iter().flatten())?;
    net.corpus_hash = features.corpus_hash.clone();
    Ok(net)
}
