#![allow(dead_code)]

use berge_core::{Hypergraph, VertexId};
use proptest::prelude::*;
use rand::seq::index;
use rand::Rng;

/// r in 2..=4, r <= n <= max_n, up to max_m edges (repeats allowed).
pub fn hypergraph(max_n: usize, max_m: usize) -> impl Strategy<Value = Hypergraph> {
    (2usize..=4)
        .prop_flat_map(move |r| (Just(r), r..=max_n))
        .prop_flat_map(move |(r, n)| {
            let all: Vec<VertexId> = (0..n as VertexId).collect();
            let edge = proptest::sample::subsequence(all, r);
            (Just(r), Just(n), proptest::collection::vec(edge, 0..=max_m))
        })
        .prop_map(|(r, n, edges)| Hypergraph::new(r, n, edges).expect("valid by construction"))
}

pub fn uniform_hypergraph(
    r: usize,
    max_n: usize,
    max_m: usize,
) -> impl Strategy<Value = Hypergraph> {
    (r..=max_n)
        .prop_flat_map(move |n| {
            let all: Vec<VertexId> = (0..n as VertexId).collect();
            let edge = proptest::sample::subsequence(all, r);
            (Just(n), proptest::collection::vec(edge, 0..=max_m))
        })
        .prop_map(move |(n, edges)| Hypergraph::new(r, n, edges).expect("valid by construction"))
}

/// `m` uniformly random r-subsets of `0..n`.
pub fn random_hypergraph<R: Rng>(rng: &mut R, r: usize, n: usize, m: usize) -> Hypergraph {
    let edges = (0..m)
        .map(|_| {
            index::sample(rng, n, r)
                .into_iter()
                .map(|v| v as VertexId)
                .collect()
        })
        .collect();
    Hypergraph::new(r, n, edges).expect("valid by construction")
}

pub fn with_edge(h: &Hypergraph, edge: Vec<VertexId>) -> Hypergraph {
    let mut edges = h.edges().to_vec();
    edges.push(edge);
    Hypergraph::new(h.uniformity(), h.vertex_count(), edges).expect("same shape")
}
