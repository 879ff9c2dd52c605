//! Topic feature vectors: row `i` holds P(topic i | document j) for every
//! document `j`.

use std::fmt::Write as _;
use std::path::Path;

use ndarray::{Array2, ArrayView1};

use crate::error::{Error, Result};
use crate::io;
use crate::lda::LdaModel;
use crate::scalar::{fmt_real, Real};

/// Column sums further than this from 1 are renormalized on import.
pub const RENORMALIZE_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix<T> {
    /// K x D.
    pub values: Array2<T>,
    pub corpus_hash: Option<String>,
}

impl<T: Real> FeatureMatrix<T> {
    pub fn new(values: Array2<T>) -> Result<Self> {
        if let Some(x) = values.iter().find(|x| !(x.is_finite() && **x >= T::zero())) {
            return Err(Error::invalid("feature matrix", format!("entry {x} is negative or non-finite")));
        }
        Ok(Self { values, corpus_hash: None })
    }

    pub fn topics(&self) -> usize {
        self.values.nrows()
    }

    pub fn num_documents(&self) -> usize {
        self.values.ncols()
    }

    pub fn row(&self, topic: usize) -> ArrayView1<'_, T> {
        self.values.row(topic)
    }

    /// Transposes the document-topic matrix of a trained model.
    pub fn from_model(model: &LdaModel<T>) -> Self {
        Self {
            values: model.theta.t().as_standard_layout().into_owned(),
            corpus_hash: Some(model.corpus_hash.clone()),
        }
    }

    /// `doc_id<TAB>p_0<TAB>…<TAB>p_{K-1}` per document, preceded by a
    /// `# corpus=<hash>` line when the source corpus is known.
    pub fn to_doc_topics_tsv(&self) -> String {
        let mut out = String::new();
        if let Some(h) = &self.corpus_hash {
            let _ = writeln!(out, "# corpus={h}");
        }
        for (j, col) in self.values.columns().into_iter().enumerate() {
            let _ = write!(out, "{j}");
            for &p in col {
                out.push('\t');
                out.push_str(&fmt_real(p));
            }
            out.push('\n');
        }
        out
    }

    /// Reads a doc-topics TSV; doc ids must cover `0..D` exactly once.
    /// Columns whose sum is off by more than [`RENORMALIZE_THRESHOLD`] are
    /// rescaled to sum to one.
    pub fn parse_doc_topics(text: &str) -> Result<Self> {
        const CTX: &str = "doc-topics";
        let mut corpus_hash = None;
        let mut rows: Vec<(usize, usize, Vec<T>)> = Vec::new();
        let mut width = None;
        for (i, line) in text.lines().enumerate() {
            let n = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            if line.starts_with('#') {
                if let Some(h) = io::Header::parse(line).and_then(|h| h.get("corpus").map(String::from)) {
                    corpus_hash = Some(h);
                }
                continue;
            }
            let mut cols = line.split('\t');
            let id: usize = cols
                .next()
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::parse(CTX, n, "bad doc_id"))?;
            let probs = cols
                .map(|s| {
                    let x: T = s
                        .trim()
                        .parse()
                        .map_err(|_| Error::parse(CTX, n, format!("non-numeric value {s:?}")))?;
                    if !x.is_finite() || x < T::zero() {
                        return Err(Error::parse(CTX, n, format!("negative or non-finite probability {s}")));
                    }
                    Ok(x)
                })
                .collect::<Result<Vec<T>>>()?;
            match width {
                None => width = Some(probs.len()),
                Some(w) if w != probs.len() => {
                    return Err(Error::parse(CTX, n, format!("expected {w} topics, got {}", probs.len())))
                }
                _ => {}
            }
            rows.push((n, id, probs));
        }
        let k = width.ok_or_else(|| Error::parse(CTX, 0, "no documents"))?;
        if k == 0 {
            return Err(Error::parse(CTX, rows[0].0, "no topic columns"));
        }
        let d = rows.len();
        let mut values = Array2::from_elem((k, d), T::zero());
        let mut seen = vec![false; d];
        for (n, id, probs) in rows {
            if id >= d || seen[id] {
                return Err(Error::parse(CTX, n, format!("doc_id {id} duplicate or outside 0..{d}")));
            }
            seen[id] = true;
            let sum: T = probs.iter().copied().sum();
            let off = (sum - T::one()).abs() > T::lit(RENORMALIZE_THRESHOLD);
            if off && sum <= T::zero() {
                return Err(Error::parse(CTX, n, "probabilities sum to zero"));
            }
            for (t, p) in probs.into_iter().enumerate() {
                values[[t, id]] = if off { p / sum } else { p };
            }
        }
        Ok(Self { values, corpus_hash })
    }

    pub fn load_doc_topics(path: &Path) -> Result<Self> {
        Self::parse_doc_topics(&io::read_to_string(path)?)
    }
}

/// Alias for [`FeatureMatrix::from_model`].
pub fn export_doc_topics<T: Real>(model: &LdaModel<T>) -> FeatureMatrix<T> {
    FeatureMatrix::from_model(model)
}

pub fn import_doc_topics<T: Real>(path: &Path) -> Result<FeatureMatrix<T>> {
    FeatureMatrix::load_doc_topics(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lda::LdaConfig;
    use ndarray::array;

    fn model(theta: Array2<f64>) -> LdaModel<f64> {
        LdaModel {
            phi: Array2::from_elem((theta.ncols(), 1), 1.0),
            theta,
            config: LdaConfig::with_topics(2),
            corpus_hash: "h".into(),
        }
    }

    #[test]
    fn export_transposes_theta() {
        let f = export_doc_topics(&model(array![[0.7, 0.3], [0.2, 0.8]]));
        assert_eq!(f.values, array![[0.7, 0.2], [0.3, 0.8]]);
        for col in f.values.columns() {
            assert!((col.sum() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn export_single_topic() {
        let f = export_doc_topics(&model(array![[1.0], [1.0], [1.0]]));
        assert_eq!(f.values, array![[1.0, 1.0, 1.0]]);
    }

    #[test]
    fn import_reads_and_transposes() {
        let f = FeatureMatrix::<f64>::parse_doc_topics("0\t0.7\t0.3\n1\t0.2\t0.8\n").unwrap();
        assert_eq!(f.values, array![[0.7, 0.2], [0.3, 0.8]]);
        assert_eq!(f.corpus_hash, None);
    }

    #[test]
    fn import_renormalizes() {
        let f = FeatureMatrix::<f64>::parse_doc_topics("0\t0.35\t0.15\n1\t0.5\t0.5\n").unwrap();
        assert!((f.values[[0, 0]] - 0.7).abs() < 1e-15);
        assert!((f.values[[1, 0]] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn import_errors() {
        for (text, line) in [
            ("0\t0.5\t0.5\n1\t-0.1\t1.1\n", 2),
            ("0\t0.5\t0.5\n1\t1.0\n", 2),
            ("0\tabc\t0.5\n", 1),
            ("0\t0.5\t0.5\n0\t0.5\t0.5\n", 2),
        ] {
            match FeatureMatrix::<f64>::parse_doc_topics(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn tsv_round_trip_keeps_hash() {
        let f = export_doc_topics(&model(array![[0.7, 0.3], [0.2, 0.8], [0.5, 0.5]]));
        let back = FeatureMatrix::<f64>::parse_doc_topics(&f.to_doc_topics_tsv()).unwrap();
        assert_eq!(back, f);
    }
}
