//! Latent Dirichlet allocation trained by collapsed Gibbs sampling.
//!
//! # Random number generation
//!
//! The sampler draws from ChaCha20 (`rand_chacha::ChaCha20Rng`) keyed with
//! `SeedableRng::seed_from_u64(seed)`. Only two derived draws are used, so a
//! port only needs the raw `next_u64` stream:
//!
//! * uniform index in `[0, n)`: `(next_u64() as u128 * n as u128) >> 64`
//! * uniform real in `[0, 1)`: `(next_u64() >> 11) as f64 * 2^-53`
//!
//! Initialization draws one uniform index per token in (document, position)
//! order; each site resample draws one uniform real.

use std::fmt::Write as _;
use std::path::Path;

use ndarray::Array2;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::corpus::{Corpus, Vocabulary};
use crate::error::{Error, Result};
use crate::io;
use crate::scalar::{fmt_real, Real};

pub const DEFAULT_TOPICS: usize = 100;
pub const DEFAULT_TOP_WORDS: usize = 19;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LdaConfig {
    pub topics: usize,
    /// Symmetric document-topic smoothing.
    pub alpha: f64,
    /// Symmetric topic-word smoothing.
    pub beta: f64,
    pub iterations: usize,
    pub seed: u64,
}

impl LdaConfig {
    /// `alpha = 50 / topics`, `beta = 0.01`, 1000 sweeps, seed 0.
    pub fn with_topics(topics: usize) -> Self {
        Self {
            topics,
            alpha: 50.0 / topics as f64,
            beta: 0.01,
            iterations: 1000,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.topics < 2 {
            return Err(Error::invalid("lda config", format!("topics must be >= 2, got {}", self.topics)));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::invalid("lda config", format!("alpha must be > 0, got {}", self.alpha)));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::invalid("lda config", format!("beta must be > 0, got {}", self.beta)));
        }
        if self.iterations < 1 {
            return Err(Error::invalid("lda config", "iterations must be >= 1"));
        }
        Ok(())
    }
}

impl Default for LdaConfig {
    fn default() -> Self {
        Self::with_topics(DEFAULT_TOPICS)
    }
}

pub fn uniform_index(rng: &mut impl RngCore, n: usize) -> usize {
    ((rng.next_u64() as u128 * n as u128) >> 64) as usize
}

pub fn uniform_unit(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Unnormalized collapsed conditional `(n_dk + a)(n_kw + b) / (n_k + V b)`
/// over topics, from counts that already exclude the site being resampled.
pub fn conditional_weights(
    doc_topic: &[u32],
    word_topic: &[u32],
    topic_totals: &[u64],
    alpha: f64,
    beta: f64,
    vocab_size: usize,
) -> Vec<f64> {
    let mut out = vec![0.0; doc_topic.len()];
    fill_conditional(&mut out, doc_topic, word_topic, topic_totals, alpha, beta, vocab_size);
    out
}

fn fill_conditional(
    out: &mut [f64],
    doc_topic: &[u32],
    word_topic: &[u32],
    topic_totals: &[u64],
    alpha: f64,
    beta: f64,
    vocab_size: usize,
) {
    let vbeta = vocab_size as f64 * beta;
    for (k, slot) in out.iter_mut().enumerate() {
        *slot = (doc_topic[k] as f64 + alpha) * (word_topic[k] as f64 + beta)
            / (topic_totals[k] as f64 + vbeta);
    }
}

/// Draws an index with probability proportional to `weights`.
fn draw(weights: &[f64], u: f64) -> usize {
    let total: f64 = weights.iter().sum();
    let target = u * total;
    let mut acc = 0.0;
    for (k, &w) in weights.iter().enumerate() {
        acc += w;
        if target < acc {
            return k;
        }
    }
    // Rounding left `target` past the last boundary.
    weights.iter().rposition(|&w| w > 0.0).unwrap_or(0)
}

/// Per-token assignments and the count tables derived from them.
#[derive(Debug, Clone)]
pub struct GibbsState {
    topics: usize,
    vocab_size: usize,
    assignments: Vec<Vec<u32>>,
    /// D x K, row-major by document.
    doc_topic: Vec<u32>,
    /// V x K, row-major by word.
    word_topic: Vec<u32>,
    topic_totals: Vec<u64>,
    rng: ChaCha20Rng,
    scratch: Vec<f64>,
}

/// Assigns every token a uniformly random topic.
///
/// # Panics
/// If `config.topics` is zero.
pub fn init_state(corpus: &Corpus, config: &LdaConfig) -> GibbsState {
    let k = config.topics;
    assert!(k >= 1, "at least one topic required");
    let v = corpus.vocab_size();
    let mut rng = ChaCha20Rng::seed_from_u64(config.seed);
    let mut state = GibbsState {
        topics: k,
        vocab_size: v,
        assignments: Vec::with_capacity(corpus.num_documents()),
        doc_topic: vec![0; corpus.num_documents() * k],
        word_topic: vec![0; v * k],
        topic_totals: vec![0; k],
        rng: rng.clone(),
        scratch: vec![0.0; k],
    };
    for (d, doc) in corpus.documents.iter().enumerate() {
        let z: Vec<u32> = doc
            .tokens
            .iter()
            .map(|&w| {
                let t = uniform_index(&mut rng, k);
                state.doc_topic[d * k + t] += 1;
                state.word_topic[w as usize * k + t] += 1;
                state.topic_totals[t] += 1;
                t as u32
            })
            .collect();
        state.assignments.push(z);
    }
    state.rng = rng;
    state
}

impl GibbsState {
    pub fn topics(&self) -> usize {
        self.topics
    }

    pub fn num_documents(&self) -> usize {
        self.assignments.len()
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    pub fn assignments(&self) -> &[Vec<u32>] {
        &self.assignments
    }

    pub fn doc_topic_counts(&self, doc: usize) -> &[u32] {
        &self.doc_topic[doc * self.topics..(doc + 1) * self.topics]
    }

    pub fn word_topic_counts(&self, word: usize) -> &[u32] {
        &self.word_topic[word * self.topics..(word + 1) * self.topics]
    }

    pub fn topic_word_count(&self, topic: usize, word: usize) -> u32 {
        self.word_topic[word * self.topics + topic]
    }

    pub fn topic_totals(&self) -> &[u64] {
        &self.topic_totals
    }

    /// Conditional weights for one site with its own assignment removed.
    pub fn site_conditional(&self, corpus: &Corpus, config: &LdaConfig, doc: usize, pos: usize) -> Vec<f64> {
        let k = self.topics;
        let w = corpus.documents[doc].tokens[pos] as usize;
        let old = self.assignments[doc][pos] as usize;
        let mut dt = self.doc_topic_counts(doc).to_vec();
        let mut wt = self.word_topic_counts(w).to_vec();
        let mut tt = self.topic_totals.clone();
        dt[old] -= 1;
        wt[old] -= 1;
        tt[old] -= 1;
        debug_assert_eq!(dt.len(), k);
        conditional_weights(&dt, &wt, &tt, config.alpha, config.beta, self.vocab_size)
    }

    /// Resamples the topic of one token and returns the new topic.
    pub fn resample_site(&mut self, corpus: &Corpus, config: &LdaConfig, doc: usize, pos: usize) -> usize {
        let k = self.topics;
        let w = corpus.documents[doc].tokens[pos] as usize;
        let old = self.assignments[doc][pos] as usize;
        let dt = doc * k;
        let wt = w * k;
        self.doc_topic[dt + old] -= 1;
        self.word_topic[wt + old] -= 1;
        self.topic_totals[old] -= 1;

        fill_conditional(
            &mut self.scratch,
            &self.doc_topic[dt..dt + k],
            &self.word_topic[wt..wt + k],
            &self.topic_totals,
            config.alpha,
            config.beta,
            self.vocab_size,
        );
        let new = draw(&self.scratch, uniform_unit(&mut self.rng));

        self.doc_topic[dt + new] += 1;
        self.word_topic[wt + new] += 1;
        self.topic_totals[new] += 1;
        self.assignments[doc][pos] = new as u32;
        new
    }

    /// One pass over every token in (document, position) order.
    pub fn sweep(&mut self, corpus: &Corpus, config: &LdaConfig) {
        for doc in 0..corpus.num_documents() {
            for pos in 0..corpus.documents[doc].tokens.len() {
                self.resample_site(corpus, config, doc, pos);
            }
        }
    }

    /// Rebuilds the three count tables from the assignments alone.
    pub fn recount(&self, corpus: &Corpus) -> (Vec<u32>, Vec<u32>, Vec<u64>) {
        let k = self.topics;
        let mut doc_topic = vec![0u32; self.num_documents() * k];
        let mut word_topic = vec![0u32; self.vocab_size * k];
        let mut totals = vec![0u64; k];
        for (d, z) in self.assignments.iter().enumerate() {
            for (&t, &w) in z.iter().zip(&corpus.documents[d].tokens) {
                doc_topic[d * k + t as usize] += 1;
                word_topic[w as usize * k + t as usize] += 1;
                totals[t as usize] += 1;
            }
        }
        (doc_topic, word_topic, totals)
    }

    pub fn tables_match_assignments(&self, corpus: &Corpus) -> bool {
        let (dt, wt, tt) = self.recount(corpus);
        dt == self.doc_topic && wt == self.word_topic && tt == self.topic_totals
    }

    /// Checks the conservation identities; returns a description of the
    /// first violation found.
    pub fn check_conservation(&self, corpus: &Corpus) -> std::result::Result<(), String> {
        for (d, doc) in corpus.documents.iter().enumerate() {
            let s: u64 = self.doc_topic_counts(d).iter().map(|&c| c as u64).sum();
            if s != doc.tokens.len() as u64 {
                return Err(format!("doc {d}: sum_k n_dk = {s}, length {}", doc.tokens.len()));
            }
        }
        let mut per_topic = vec![0u64; self.topics];
        for w in 0..self.vocab_size {
            for (k, &c) in self.word_topic_counts(w).iter().enumerate() {
                per_topic[k] += c as u64;
            }
        }
        if let Some(k) = (0..self.topics).find(|&k| per_topic[k] != self.topic_totals[k]) {
            return Err(format!("topic {k}: sum_w n_kw = {}, n_k = {}", per_topic[k], self.topic_totals[k]));
        }
        let total: u64 = self.topic_totals.iter().sum();
        if total != corpus.num_tokens() as u64 {
            return Err(format!("sum_k n_k = {total}, corpus tokens {}", corpus.num_tokens()));
        }
        Ok(())
    }
}

/// `theta[d][k] = (n_dk + alpha) / (N_d + K alpha)`.
pub fn estimate_theta<T: Real>(state: &GibbsState, alpha: f64) -> Array2<T> {
    let k = state.topics;
    let alpha_t = T::lit(alpha);
    Array2::from_shape_fn((state.num_documents(), k), |(d, t)| {
        let n_d: u64 = state.doc_topic_counts(d).iter().map(|&c| c as u64).sum();
        (T::from_count(state.doc_topic_counts(d)[t] as u64) + alpha_t)
            / (T::from_count(n_d) + T::from_count(k as u64) * alpha_t)
    })
}

/// `phi[k][w] = (n_kw + beta) / (n_k + V beta)`.
pub fn estimate_phi<T: Real>(state: &GibbsState, beta: f64) -> Array2<T> {
    let v = state.vocab_size;
    let beta_t = T::lit(beta);
    Array2::from_shape_fn((state.topics, v), |(t, w)| {
        (T::from_count(state.topic_word_count(t, w) as u64) + beta_t)
            / (T::from_count(state.topic_totals[t]) + T::from_count(v as u64) * beta_t)
    })
}

/// Trained point estimate of the document-topic and topic-word distributions.
#[derive(Debug, Clone, PartialEq)]
pub struct LdaModel<T> {
    /// D x K, rows are P(topic | document).
    pub theta: Array2<T>,
    /// K x V, rows are P(word | topic).
    pub phi: Array2<T>,
    pub config: LdaConfig,
    pub corpus_hash: String,
}

pub fn train<T: Real>(corpus: &Corpus, config: &LdaConfig) -> Result<LdaModel<T>> {
    train_with_progress(corpus, config, |_, _| {})
}

/// Like [`train`], calling `on_sweep(sweep_number, state)` after every sweep.
pub fn train_with_progress<T: Real>(
    corpus: &Corpus,
    config: &LdaConfig,
    mut on_sweep: impl FnMut(usize, &GibbsState),
) -> Result<LdaModel<T>> {
    config.validate()?;
    if corpus.num_documents() == 0 {
        return Err(Error::EmptyCorpus("cannot train on an empty corpus".into()));
    }
    let mut state = init_state(corpus, config);
    for sweep in 1..=config.iterations {
        state.sweep(corpus, config);
        on_sweep(sweep, &state);
    }
    Ok(LdaModel::from_state(&state, config, corpus.fingerprint()))
}

impl<T: Real> LdaModel<T> {
    pub fn from_state(state: &GibbsState, config: &LdaConfig, corpus_hash: String) -> Self {
        LdaModel {
            theta: estimate_theta(state, config.alpha),
            phi: estimate_phi(state, config.beta),
            config: *config,
            corpus_hash,
        }
    }

    pub fn topics(&self) -> usize {
        self.phi.nrows()
    }

    pub fn vocab_size(&self) -> usize {
        self.phi.ncols()
    }

    pub fn num_documents(&self) -> usize {
        self.theta.nrows()
    }

    /// The `n` most probable word indices of `topic`, descending, ties by
    /// ascending index. `n` is capped at the vocabulary size.
    pub fn top_words(&self, topic: usize, n: usize) -> Result<Vec<(usize, T)>> {
        if topic >= self.topics() {
            return Err(Error::OutOfRange { what: "topic", index: topic, size: self.topics() });
        }
        Ok(top_indices(self.phi.row(topic).iter().copied(), n))
    }

    pub fn top_words_named(&self, vocabulary: &Vocabulary, topic: usize, n: usize) -> Result<Vec<(String, T)>> {
        self.top_words(topic, n)?
            .into_iter()
            .map(|(w, p)| {
                vocabulary
                    .word(w)
                    .map(|s| (s.to_string(), p))
                    .ok_or(Error::OutOfRange { what: "word", index: w, size: vocabulary.len() })
            })
            .collect()
    }

    /// Header `K V D alpha beta iterations seed` preceded by `# corpus=<hash>`,
    /// then K phi rows, then D theta rows.
    pub fn to_text(&self) -> String {
        let c = &self.config;
        let mut out = String::new();
        let _ = writeln!(out, "# corpus={}", self.corpus_hash);
        let _ = writeln!(
            out,
            "{} {} {} {} {} {} {}",
            self.topics(),
            self.vocab_size(),
            self.num_documents(),
            c.alpha,
            c.beta,
            c.iterations,
            c.seed
        );
        for m in [&self.phi, &self.theta] {
            for row in m.rows() {
                let line: Vec<String> = row.iter().map(|&x| fmt_real(x)).collect();
                out.push_str(&line.join(" "));
                out.push('\n');
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        const CTX: &str = "model";
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).peekable();
        let mut corpus_hash = String::new();
        if let Some((_, l)) = lines.peek() {
            if let Some(h) = io::Header::parse(l) {
                corpus_hash = h.get("corpus").unwrap_or_default().to_string();
                lines.next();
            }
        }
        let (hn, header) = lines.next().ok_or_else(|| Error::parse(CTX, 1, "missing header"))?;
        let f: Vec<&str> = header.split_whitespace().collect();
        if f.len() != 7 {
            return Err(Error::parse(CTX, hn, "header needs `K V D alpha beta iterations seed`"));
        }
        let bad = |what: &str| Error::parse(CTX, hn, format!("bad {what}"));
        let k: usize = f[0].parse().map_err(|_| bad("K"))?;
        let v: usize = f[1].parse().map_err(|_| bad("V"))?;
        let d: usize = f[2].parse().map_err(|_| bad("D"))?;
        let config = LdaConfig {
            topics: k,
            alpha: f[3].parse().map_err(|_| bad("alpha"))?,
            beta: f[4].parse().map_err(|_| bad("beta"))?,
            iterations: f[5].parse().map_err(|_| bad("iterations"))?,
            seed: f[6].parse().map_err(|_| bad("seed"))?,
        };
        let mut read_matrix = |rows: usize, cols: usize| -> Result<Array2<T>> {
            let mut data = Vec::with_capacity(rows * cols);
            for _ in 0..rows {
                let (n, line) = lines.next().ok_or_else(|| Error::parse(CTX, 0, "truncated matrix"))?;
                let before = data.len();
                for tok in line.split_whitespace() {
                    let x: T = tok
                        .parse()
                        .map_err(|_| Error::parse(CTX, n, format!("non-numeric value {tok:?}")))?;
                    if !(x > T::zero() && x.is_finite()) {
                        return Err(Error::parse(CTX, n, format!("probability {tok} not positive")));
                    }
                    data.push(x);
                }
                if data.len() - before != cols {
                    return Err(Error::parse(CTX, n, format!("expected {cols} values, got {}", data.len() - before)));
                }
            }
            Ok(Array2::from_shape_vec((rows, cols), data).expect("shape checked"))
        };
        let phi = read_matrix(k, v)?;
        let theta = read_matrix(d, k)?;
        Ok(LdaModel { theta, phi, config, corpus_hash })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&io::read_to_string(path)?)
    }
}

/// Indices of the `n` largest values, descending, ties by ascending index.
pub(crate) fn top_indices<T: Real>(values: impl Iterator<Item = T>, n: usize) -> Vec<(usize, T)> {
    let mut v: Vec<(usize, T)> = values.enumerate().collect();
    v.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.0.cmp(&b.0))
    });
    v.truncate(n);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_corpus() -> Corpus {
        Corpus::from_token_lists(vec![
            ("a".to_string(), vec!["x", "y", "x", "z", "x"]),
            ("b".to_string(), vec!["y", "y", "z", "w", "x"]),
        ])
    }

    fn cfg(topics: usize, seed: u64) -> LdaConfig {
        LdaConfig { topics, alpha: 0.5, beta: 0.01, iterations: 10, seed }
    }

    #[test]
    fn defaults() {
        let c = LdaConfig::default();
        assert_eq!(c.topics, 100);
        assert_eq!(c.alpha, 0.5);
        assert_eq!(c.beta, 0.01);
        assert_eq!(c.iterations, 1000);
    }

    #[test]
    fn config_validation() {
        assert!(cfg(1, 0).validate().is_err());
        assert!(LdaConfig { alpha: 0.0, ..cfg(2, 0) }.validate().is_err());
        assert!(LdaConfig { beta: -1.0, ..cfg(2, 0) }.validate().is_err());
        assert!(LdaConfig { iterations: 0, ..cfg(2, 0) }.validate().is_err());
        assert!(cfg(2, 0).validate().is_ok());
    }

    #[test]
    fn init_conserves_tokens() {
        let c = toy_corpus();
        let s = init_state(&c, &cfg(2, 7));
        assert_eq!(s.topic_totals().iter().sum::<u64>(), 10);
        assert!(s.check_conservation(&c).is_ok());
        assert!(s.tables_match_assignments(&c));
    }

    #[test]
    fn init_is_deterministic() {
        let c = toy_corpus();
        assert_eq!(init_state(&c, &cfg(3, 9)).assignments(), init_state(&c, &cfg(3, 9)).assignments());
    }

    #[test]
    fn single_topic_init() {
        let c = toy_corpus();
        let s = init_state(&c, &cfg(1, 1));
        assert!(s.assignments().iter().flatten().all(|&z| z == 0));
        assert_eq!(s.topic_totals(), &[10]);
    }

    #[test]
    fn conditional_matches_hand_evaluation() {
        let w = conditional_weights(&[3, 1], &[2, 0], &[10, 5], 0.5, 0.01, 4);
        assert!((w[0] - 3.5 * 2.01 / 10.04).abs() < 1e-15);
        assert!((w[1] - 1.5 * 0.01 / 5.04).abs() < 1e-15);
        assert!((w[0] - 0.700697).abs() < 1e-6);
        assert!((w[1] - 0.0029762).abs() < 1e-7);
    }

    #[test]
    fn sweep_preserves_document_lengths_and_is_deterministic() {
        let c = toy_corpus();
        let config = cfg(3, 11);
        let mut a = init_state(&c, &config);
        let mut b = init_state(&c, &config);
        for _ in 0..5 {
            a.sweep(&c, &config);
            b.sweep(&c, &config);
            assert!(a.check_conservation(&c).is_ok());
        }
        assert_eq!(a.assignments(), b.assignments());
    }

    #[test]
    fn theta_hand_example() {
        let c = Corpus::from_token_lists(vec![("a".to_string(), vec!["x", "x", "y", "y"])]);
        let mut s = init_state(&c, &cfg(2, 0));
        // Force every token into topic 0.
        for pos in 0..4 {
            while s.assignments()[0][pos] != 0 {
                s.resample_site(&c, &cfg(2, 0), 0, pos);
            }
        }
        let theta: Array2<f64> = estimate_theta(&s, 0.5);
        assert!((theta[[0, 0]] - 0.9).abs() < 1e-15);
        assert!((theta[[0, 1]] - 0.1).abs() < 1e-15);
    }

    #[test]
    fn phi_hand_example() {
        let c = Corpus::from_token_lists(vec![("a".to_string(), vec!["x", "x", "y"])]);
        let config = cfg(2, 0);
        let mut s = init_state(&c, &config);
        // Topic 0 gets both `x` tokens; `y` goes to topic 1.
        for (pos, want) in [(0, 0), (1, 0), (2, 1)] {
            while s.assignments()[0][pos] != want {
                s.resample_site(&c, &config, 0, pos);
            }
        }
        let phi: Array2<f64> = estimate_phi(&s, 0.01);
        assert!((phi[[0, 0]] - 2.01 / 2.02).abs() < 1e-15);
        assert!((phi[[0, 1]] - 0.01 / 2.02).abs() < 1e-15);
    }

    #[test]
    fn uniform_counts_give_uniform_estimates() {
        let c = Corpus::from_token_lists(vec![("a".to_string(), vec!["x", "y"])]);
        let config = cfg(2, 0);
        let mut s = init_state(&c, &config);
        for (pos, want) in [(0, 0), (1, 1)] {
            while s.assignments()[0][pos] != want {
                s.resample_site(&c, &config, 0, pos);
            }
        }
        let theta: Array2<f64> = estimate_theta(&s, 0.5);
        assert_eq!(theta[[0, 0]], theta[[0, 1]]);
        let phi: Array2<f64> = estimate_phi(&s, 0.01);
        // Each topic holds one distinct word; rows are mirror images.
        assert_eq!(phi[[0, 0]], phi[[1, 1]]);
    }

    fn model_with_phi(row: &[f64]) -> LdaModel<f64> {
        LdaModel {
            theta: Array2::from_elem((1, 1), 1.0),
            phi: Array2::from_shape_vec((1, row.len()), row.to_vec()).unwrap(),
            config: cfg(2, 0),
            corpus_hash: String::new(),
        }
    }

    #[test]
    fn top_words_order_and_ties() {
        let m = model_with_phi(&[0.5, 0.3, 0.2]);
        let idx: Vec<usize> = m.top_words(0, 2).unwrap().into_iter().map(|p| p.0).collect();
        assert_eq!(idx, [0, 1]);
        let m = model_with_phi(&[0.4, 0.4, 0.2]);
        assert_eq!(m.top_words(0, 1).unwrap()[0].0, 0);
        let mut all: Vec<usize> = m.top_words(0, 3).unwrap().into_iter().map(|p| p.0).collect();
        all.sort();
        assert_eq!(all, [0, 1, 2]);
        assert!(matches!(m.top_words(1, 1), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn trained_model_is_normalized_and_round_trips() {
        let c = toy_corpus();
        let m: LdaModel<f64> = train(&c, &cfg(2, 3)).unwrap();
        for row in m.theta.rows().into_iter().chain(m.phi.rows()) {
            assert!((row.sum() - 1.0).abs() < 1e-9);
            assert!(row.iter().all(|&x| x > 0.0));
        }
        let text = m.to_text();
        let back = LdaModel::<f64>::parse(&text).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.to_text(), text);
        let again: LdaModel<f64> = train(&c, &cfg(2, 3)).unwrap();
        assert_eq!(again.to_text(), text);
    }

    #[test]
    fn model_parse_errors_carry_line_numbers() {
        let err = LdaModel::<f64>::parse("2 1 1 0.5 0.01 1 0\n1.0\n-1\n0.5 0.5\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn f32_training_works() {
        let m: LdaModel<f32> = train(&toy_corpus(), &cfg(2, 3)).unwrap();
        assert!((m.theta.row(0).sum() - 1.0).abs() < 1e-5);
    }
}
