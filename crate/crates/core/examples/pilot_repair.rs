//! Fraction of edges removed by repair at several thresholds.
//!
//! cargo run --release -p berge-core --example pilot_repair -- q seeds first_seed t..

use berge_core::construction::{build_graph, repair, ConstructionParams, DEFAULT_TUPLE_BUDGET};
use berge_core::SearchLimits;

fn main() {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("integer"))
        .collect();
    let q = args.first().copied().unwrap_or(7);
    let seeds = args.get(1).copied().unwrap_or(10);
    let first = args.get(2).copied().unwrap_or(0);
    let thresholds = if args.len() > 3 {
        args[3..].to_vec()
    } else {
        vec![8, 10, 12]
    };
    for t in thresholds {
        let mut fractions = Vec::new();
        for seed in first..first + seeds {
            let g = build_graph(
                &ConstructionParams::new(2, 3, q, seed),
                DEFAULT_TUPLE_BUDGET,
            )
            .expect("build");
            let out = repair(&g.hypergraph, 2, t, SearchLimits::default()).expect("repair");
            fractions.push(out.log.len() as f64 / g.hypergraph.edge_count() as f64);
        }
        let worst = fractions.iter().cloned().fold(0.0, f64::max);
        let mean = fractions.iter().sum::<f64>() / fractions.len() as f64;
        println!(
            "q={q} threshold={t} mean removed {:.4} worst {:.4}",
            mean, worst
        );
    }
}
