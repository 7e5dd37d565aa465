//! Pooled path-count moments of the construction for q = 3, 5, 7.
//!
//! cargo run --release -p berge-core --example moments -- seeds

use berge_core::construction::{
    build_graph, estimate_moment, ConstructionParams, MomentEstimate, PairSelection,
    DEFAULT_TUPLE_BUDGET,
};
use berge_core::SearchLimits;

fn main() {
    let seeds: u64 = std::env::args()
        .nth(1)
        .map_or(5, |s| s.parse().expect("integer"));
    for q in [3, 5, 7] {
        let graphs: Vec<_> = (0..seeds)
            .map(|seed| {
                build_graph(
                    &ConstructionParams::new(2, 3, q, seed),
                    DEFAULT_TUPLE_BUDGET,
                )
                .expect("build")
                .hypergraph
            })
            .collect();
        print!("q={q}");
        for m in 1..=5 {
            let parts: Vec<MomentEstimate> = graphs
                .iter()
                .map(|h| {
                    estimate_moment(h, 2, m, PairSelection::All, 10_000, SearchLimits::default())
                        .expect("moment")
                })
                .collect();
            let pooled = MomentEstimate::pooled(&parts).expect("same order");
            print!(" m={m}: {:.3}", pooled.to_f64());
        }
        println!();
    }
}
