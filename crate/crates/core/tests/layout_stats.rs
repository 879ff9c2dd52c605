use topikrank_core::layout::{force_layout, LayoutConfig};
use topikrank_core::network::TopicNetwork;
use topikrank_core::SimilarityMetric;

/// Ten nodes on a weighted ring with chords; (3, 8) is the heaviest edge.
fn test_graph() -> TopicNetwork<f64> {
    let mut edges: Vec<(usize, usize, f64)> = (0..10).map(|i| (i, (i + 1) % 10, 0.2 + 0.03 * i as f64)).collect();
    edges.extend([(0, 5, 0.3), (2, 6, 0.25), (1, 7, 0.35), (3, 8, 1.0)]);
    TopicNetwork::from_edges(10, SimilarityMetric::Cosine, edges).unwrap()
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 { v[n / 2] } else { (v[n / 2 - 1] + v[n / 2]) / 2.0 }
}

#[test]
fn heaviest_edge_endpoints_land_close() {
    let net = test_graph();
    let mut close = 0;
    for seed in 0..20 {
        let pos = force_layout(&net, &LayoutConfig { seed, ..Default::default() });
        let dist = |a: usize, b: usize| ((pos[a][0] - pos[b][0]).powi(2) + (pos[a][1] - pos[b][1]).powi(2)).sqrt();
        let all: Vec<f64> = (0..10).flat_map(|i| (i + 1..10).map(move |j| (i, j))).map(|(i, j)| dist(i, j)).collect();
        if dist(3, 8) < median(all) {
            close += 1;
        }
    }
    assert!(close >= 18, "only {close}/20 runs placed the heaviest edge below the median distance");
}
