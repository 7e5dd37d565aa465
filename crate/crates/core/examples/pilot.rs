//! Path-count census of the polynomial construction over several seeds.
//!
//! cargo run --release -p berge-core --example pilot -- k r seeds first_seed q..

use std::collections::BTreeMap;

use berge_core::construction::ConstructionParams;
use berge_core::construction::{build_graph, census, PairSelection, DEFAULT_TUPLE_BUDGET};
use berge_core::SearchLimits;

fn main() {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("integer"))
        .collect();
    let k = args.first().copied().unwrap_or(2) as usize;
    let r = args.get(1).copied().unwrap_or(3) as usize;
    let seeds = args.get(2).copied().unwrap_or(10);
    let first = args.get(3).copied().unwrap_or(0);
    let qs = if args.len() > 4 {
        args[4..].to_vec()
    } else {
        vec![3, 5, 7]
    };
    for q in qs {
        let mut hist: BTreeMap<u64, u64> = BTreeMap::new();
        let mut maxes = Vec::new();
        let mut edges = Vec::new();
        for seed in first..first + seeds {
            let p = ConstructionParams::new(k, r, q, seed);
            let g = build_graph(&p, DEFAULT_TUPLE_BUDGET).expect("build");
            let c = census(
                &g.hypergraph,
                k,
                1000,
                PairSelection::All,
                SearchLimits::default(),
            )
            .expect("census");
            for (&v, &n) in &c.summary.histogram {
                *hist.entry(v).or_insert(0) += n;
            }
            maxes.push(c.summary.max);
            edges.push(g.hypergraph.edge_count());
        }
        println!("q={q} edges={edges:?}");
        println!("  max per seed {maxes:?}");
        println!("  pooled histogram {hist:?}");
        for t in 1..=12u64 {
            let above: u64 = hist.range(t + 1..).map(|(_, &n)| n).sum();
            print!(" >{t}:{:.2}", above as f64 / seeds as f64);
        }
        println!();
    }
}
