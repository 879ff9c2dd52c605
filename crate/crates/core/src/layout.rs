//! Topic cloud layout: a seeded Fruchterman-Reingold embedding of the topic
//! network, with label size and shade driven by centrality.

use std::fmt::Write as _;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::centrality::CentralityScores;
use crate::error::{Error, Result};
use crate::lda::uniform_unit;
use crate::network::{xml_escape, TopicNetwork};
use crate::ranking::LabelSet;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayoutConfig {
    pub iterations: usize,
    pub seed: u64,
    pub min_font: f64,
    pub max_font: f64,
    /// Pull toward the centre; keeps isolated topics inside the frame.
    pub gravity: f64,
    /// Initial step cap, cooled linearly to zero.
    pub initial_temperature: f64,
}

impl Default for LayoutConfig {
    fn default() -> Self {
        Self {
            iterations: 500,
            seed: 42,
            min_font: 10.0,
            max_font: 48.0,
            gravity: 1.0,
            initial_temperature: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CloudEntry {
    pub topic_id: usize,
    pub label: String,
    pub x: f64,
    pub y: f64,
    pub font_size: f64,
    pub color_intensity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicCloudLayout {
    pub min_font: f64,
    pub max_font: f64,
    /// One entry per topic, by topic id.
    pub entries: Vec<CloudEntry>,
}

/// Node positions in the unit square.
pub fn force_layout<T: Real>(network: &TopicNetwork<T>, config: &LayoutConfig) -> Vec<[f64; 2]> {
    let n = network.node_count();
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![[0.5, 0.5]];
    }
    let mut rng = ChaCha20Rng::seed_from_u64(config.seed);
    let mut pos: Vec<[f64; 2]> = (0..n).map(|_| [uniform_unit(&mut rng), uniform_unit(&mut rng)]).collect();
    let k = (1.0 / n as f64).sqrt();
    let max_w = network
        .edges()
        .iter()
        .map(|e| e.weight.as_f64())
        .fold(0.0, f64::max);
    let edges: Vec<(usize, usize, f64)> = network
        .edges()
        .iter()
        .map(|e| (e.source, e.target, e.weight.as_f64() / max_w))
        .collect();
    const EPS: f64 = 1e-9;

    let mut disp = vec![[0.0f64; 2]; n];
    for iter in 0..config.iterations {
        let temperature = config.initial_temperature * (1.0 - iter as f64 / config.iterations as f64);
        disp.iter_mut().for_each(|d| *d = [0.0, 0.0]);
        for i in 0..n {
            for j in i + 1..n {
                let (mut dx, mut dy) = (pos[i][0] - pos[j][0], pos[i][1] - pos[j][1]);
                let mut dist = (dx * dx + dy * dy).sqrt();
                if dist < EPS {
                    // Coincident nodes: separate along a fixed direction.
                    let a = (i * 31 + j) as f64;
                    (dx, dy, dist) = (a.cos() * EPS, a.sin() * EPS, EPS);
                }
                let f = k * k / dist;
                let (fx, fy) = (dx / dist * f, dy / dist * f);
                disp[i][0] += fx;
                disp[i][1] += fy;
                disp[j][0] -= fx;
                disp[j][1] -= fy;
            }
        }
        for &(i, j, w) in &edges {
            let (dx, dy) = (pos[i][0] - pos[j][0], pos[i][1] - pos[j][1]);
            let dist = (dx * dx + dy * dy).sqrt().max(EPS);
            let f = w * dist * dist / k;
            let (fx, fy) = (dx / dist * f, dy / dist * f);
            disp[i][0] -= fx;
            disp[i][1] -= fy;
            disp[j][0] += fx;
            disp[j][1] += fy;
        }
        for (p, d) in pos.iter_mut().zip(&mut disp) {
            d[0] -= config.gravity * (p[0] - 0.5);
            d[1] -= config.gravity * (p[1] - 0.5);
            let len = (d[0] * d[0] + d[1] * d[1]).sqrt();
            if len > 0.0 {
                let step = len.min(temperature) / len;
                p[0] += d[0] * step;
                p[1] += d[1] * step;
            }
        }
    }
    fit_unit_square(&mut pos);
    pos
}

/// Uniform scale and translation into `[0, 1]^2`, centred.
fn fit_unit_square(pos: &mut [[f64; 2]]) {
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in pos.iter() {
        for a in 0..2 {
            lo[a] = lo[a].min(p[a]);
            hi[a] = hi[a].max(p[a]);
        }
    }
    let range = [hi[0] - lo[0], hi[1] - lo[1]];
    let scale = range[0].max(range[1]);
    for p in pos.iter_mut() {
        for a in 0..2 {
            p[a] = if scale > 0.0 {
                (p[a] - lo[a]) / scale + (1.0 - range[a] / scale) / 2.0
            } else {
                0.5
            };
        }
    }
}

/// Min-max normalization of scores; all values map to 0.5 when they are equal.
fn normalized<T: Real>(scores: &[T]) -> Vec<f64> {
    let s: Vec<f64> = scores.iter().map(|x| x.as_f64()).collect();
    let lo = s.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi > lo {
        s.iter().map(|&x| (x - lo) / (hi - lo)).collect()
    } else {
        vec![0.5; s.len()]
    }
}

pub fn layout_cloud<T: Real>(
    network: &TopicNetwork<T>,
    scores: &CentralityScores<T>,
    labels: &LabelSet,
    config: &LayoutConfig,
) -> Result<TopicCloudLayout> {
    let k = network.node_count();
    if scores.scores.len() != k {
        return Err(Error::ArtifactMismatch(format!(
            "network has {k} topics but scores have {}",
            scores.scores.len()
        )));
    }
    if !(config.min_font > 0.0 && config.min_font <= config.max_font) {
        return Err(Error::invalid("layout config", "need 0 < min_font <= max_font"));
    }
    let pos = force_layout(network, config);
    let norm = normalized(&scores.scores);
    let entries = (0..k)
        .map(|t| CloudEntry {
            topic_id: t,
            label: labels.label(t),
            x: pos[t][0],
            y: pos[t][1],
            font_size: config.min_font + (config.max_font - config.min_font) * norm[t],
            color_intensity: norm[t],
        })
        .collect();
    Ok(TopicCloudLayout { min_font: config.min_font, max_font: config.max_font, entries })
}

impl TopicCloudLayout {
    /// Positioned labels; larger and darker means more central.
    pub fn to_svg(&self) -> String {
        const SIZE: f64 = 1000.0;
        const MARGIN: f64 = 80.0;
        let span = SIZE - 2.0 * MARGIN;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">"
        );
        out.push_str("  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
        // Draw the least central first so important labels end up on top.
        let mut order: Vec<&CloudEntry> = self.entries.iter().collect();
        order.sort_by(|a, b| a.color_intensity.total_cmp(&b.color_intensity).then(a.topic_id.cmp(&b.topic_id)));
        for e in order {
            let grey = (200.0 * (1.0 - e.color_intensity)).round() as u8;
            let _ = writeln!(
                out,
                "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"{:.2}\" fill=\"rgb({grey},{grey},{grey})\" text-anchor=\"middle\" font-family=\"sans-serif\" data-topic=\"{}\">{}</text>",
                MARGIN + e.x * span,
                MARGIN + e.y * span,
                e.font_size,
                e.topic_id,
                xml_escape(&e.label)
            );
        }
        out.push_str("</svg>\n");
        out
    }
}
