#![allow(dead_code)]

use porttour_core::{gen_random_connected, Graph, PortMap};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const CASES: u32 = 1000;

pub fn config() -> ProptestConfig {
    ProptestConfig {
        cases: CASES,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

/// Edge count for `n` nodes from a raw choice: between a tree and `3n`
/// (capped by the complete graph).
pub fn edge_count(n: usize, raw: usize) -> usize {
    let max = (3 * n).min(n * (n - 1) / 2).max(n - 1);
    n - 1 + raw % (max - (n - 1) + 1)
}

/// Seeded random connected graph with `min_n..=max_n` nodes.
pub fn arb_graph(min_n: usize, max_n: usize) -> impl Strategy<Value = Graph> {
    (min_n..=max_n, any::<usize>(), any::<u64>())
        .prop_map(|(n, raw, seed)| gen_random_connected(n, edge_count(n, raw), seed).unwrap())
}

/// Uniformly shuffled port numbering.
pub fn shuffled_ports(g: &Graph, seed: u64) -> PortMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order = (0..g.n())
        .map(|v| {
            let mut row = g.neighbors(v).to_vec();
            row.shuffle(&mut rng);
            row
        })
        .collect();
    PortMap::new(g, order).unwrap()
}

pub fn arb_labeled(min_n: usize, max_n: usize) -> impl Strategy<Value = (Graph, PortMap)> {
    (arb_graph(min_n, max_n), any::<u64>()).prop_map(|(g, s)| {
        let pm = shuffled_ports(&g, s);
        (g, pm)
    })
}

/// Every connected graph on `n` labelled nodes.
pub fn all_connected(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0u64..1 << pairs.len())
        .filter_map(|mask| {
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            Graph::from_edges(n, &edges).ok()
        })
        .collect()
}
