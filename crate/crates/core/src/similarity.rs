//! Cosine similarity and Pearson correlation between topic feature vectors.
//!
//! Both accumulate with compensated summation; feature vectors run to tens
//! of thousands of entries.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{CompensatedSum, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimilarityMetric {
    Cosine,
    Pearson,
}

impl SimilarityMetric {
    pub const ALL: [SimilarityMetric; 2] = [SimilarityMetric::Cosine, SimilarityMetric::Pearson];

    pub fn name(self) -> &'static str {
        match self {
            SimilarityMetric::Cosine => "cosine",
            SimilarityMetric::Pearson => "pearson",
        }
    }

    /// Similarity of two vectors; `None` means undefined and yields no edge.
    pub fn similarity<T: Real>(self, u: &[T], v: &[T]) -> Result<Option<T>, SimilarityError> {
        match self {
            SimilarityMetric::Cosine => cosine(u, v).map(Some),
            SimilarityMetric::Pearson => pearson(u, v),
        }
    }
}

impl fmt::Display for SimilarityMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown metric {0:?}; valid metrics: cosine, pearson")]
pub struct UnknownMetric(pub String);

impl FromStr for SimilarityMetric {
    type Err = UnknownMetric;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cosine" => Ok(SimilarityMetric::Cosine),
            "pearson" => Ok(SimilarityMetric::Pearson),
            other => Err(UnknownMetric(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimilarityError {
    #[error("vector lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("cosine similarity of a zero vector is undefined")]
    ZeroVector,
    #[error("pearson correlation needs at least two entries")]
    TooShort,
}

fn clamp_unit<T: Real>(x: T) -> T {
    x.max(-T::one()).min(T::one())
}

/// `u·v / (‖u‖‖v‖)`, clamped to `[-1, 1]`.
pub fn cosine<T: Real>(u: &[T], v: &[T]) -> Result<T, SimilarityError> {
    if u.len() != v.len() {
        return Err(SimilarityError::LengthMismatch(u.len(), v.len()));
    }
    let mut dot = CompensatedSum::new();
    let mut uu = CompensatedSum::new();
    let mut vv = CompensatedSum::new();
    for (&a, &b) in u.iter().zip(v) {
        dot.add(a * b);
        uu.add(a * a);
        vv.add(b * b);
    }
    let (uu, vv) = (uu.value(), vv.value());
    if uu == T::zero() || vv == T::zero() {
        return Err(SimilarityError::ZeroVector);
    }
    Ok(clamp_unit(dot.value() / (uu.sqrt() * vv.sqrt())))
}

/// Pearson correlation, clamped to `[-1, 1]`; `Ok(None)` when either vector
/// is constant.
pub fn pearson<T: Real>(u: &[T], v: &[T]) -> Result<Option<T>, SimilarityError> {
    if u.len() != v.len() {
        return Err(SimilarityError::LengthMismatch(u.len(), v.len()));
    }
    if u.len() < 2 {
        return Err(SimilarityError::TooShort);
    }
    let constant = |x: &[T]| x.iter().all(|&a| a == x[0]);
    if constant(u) || constant(v) {
        return Ok(None);
    }
    let n = T::from_count(u.len() as u64);
    let mean_u = u.iter().copied().collect::<CompensatedSum<T>>().value() / n;
    let mean_v = v.iter().copied().collect::<CompensatedSum<T>>().value() / n;
    let mut cov = CompensatedSum::new();
    let mut su = CompensatedSum::new();
    let mut sv = CompensatedSum::new();
    for (&a, &b) in u.iter().zip(v) {
        let (da, db) = (a - mean_u, b - mean_v);
        cov.add(da * db);
        su.add(da * da);
        sv.add(db * db);
    }
    let (su, sv) = (su.value(), sv.value());
    if su == T::zero() || sv == T::zero() {
        return Ok(None);
    }
    Ok(Some(clamp_unit(cov.value() / (su.sqrt() * sv.sqrt()))))
}
