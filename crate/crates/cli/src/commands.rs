use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::time::Instant;

use berge_core::construction::{
    self, bad_pairs, build_graph, pilot_threshold, smallest_free_t, ConstructionError,
    ConstructionParams, Deletion, PairSelection, DEFAULT_TUPLE_BUDGET,
};
use berge_core::io::{parse_hypergraph, write_hypergraph, write_poly, write_reduced};
use berge_core::oracle::{oracle_has_theta, OracleError};
use berge_core::search::find_theta;
use berge_core::{
    multiplicity_bound, reduce as reduce_graph, Hypergraph, ReductionParams, SearchError,
    SearchLimits, ThetaSearch, TieBreak, VertexId,
};
use serde::Serialize;

use crate::{CensusArgs, DetectArgs, GenerateArgs, ReduceArgs, RepairArgs, TieBreakArg};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse(String),
    Budget(String),
    Mismatch(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            Self::Usage(_) => 1,
            Self::Parse(_) => 2,
            Self::Budget(_) => 3,
            Self::Mismatch(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Usage(m) | Self::Parse(m) | Self::Budget(m) => f.write_str(m),
            Self::Mismatch(m) => write!(f, "cross-check mismatch (this is a bug): {m}"),
        }
    }
}

impl From<ConstructionError> for CliError {
    fn from(e: ConstructionError) -> Self {
        match e {
            ConstructionError::BudgetExceeded { .. }
            | ConstructionError::Search(SearchError::BudgetExceeded { .. }) => {
                Self::Budget(e.to_string())
            }
            _ => Self::Usage(e.to_string()),
        }
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        ConstructionError::from(e).into()
    }
}

pub struct Context {
    pub seed: u64,
    pub node_budget: Option<u64>,
}

impl Context {
    fn limits(&self) -> SearchLimits {
        self.node_budget
            .map(SearchLimits::with_budget)
            .unwrap_or_default()
    }
}

fn read_graph(path: &Path) -> Result<Hypergraph, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    parse_hypergraph(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn threshold_for(given: Option<u64>, k: usize, r: usize) -> Option<u64> {
    given.or_else(|| pilot_threshold(k, r))
}

#[derive(Serialize)]
struct ParamsOut {
    k: usize,
    r: usize,
    q: u64,
    d: u32,
    s: usize,
}

#[derive(Serialize)]
struct CensusOut {
    k: usize,
    cap: u64,
    selection: PairSelection,
    pairs_examined: usize,
    max: u64,
    histogram: BTreeMap<u64, u64>,
    capped: u64,
    inconclusive: u64,
}

#[derive(Serialize)]
struct RepairOut {
    deleted: usize,
    fraction_deleted: f64,
    initial_excess: u64,
    edge_count_after: usize,
    remaining_bad: usize,
    /// Smallest t with the repaired graph certified theta-free, if found
    /// within the search budget.
    certified_free_t: Option<usize>,
    log: Vec<Deletion>,
}

#[derive(Serialize)]
struct Timings {
    build_ms: u128,
    census_ms: u128,
    repair_ms: u128,
}

#[derive(Serialize)]
struct GenerateStats {
    params: ParamsOut,
    seed: u64,
    vertex_count: usize,
    edge_count: usize,
    expected_edges: u64,
    edge_probability: f64,
    census: CensusOut,
    threshold: Option<u64>,
    bad_pairs: Vec<(VertexId, VertexId)>,
    repair: Option<RepairOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timings: Option<Timings>,
}

pub fn generate(ctx: &Context, a: GenerateArgs) -> Result<(), CliError> {
    let mut params = ConstructionParams::new(a.k, a.r, a.q, ctx.seed);
    if let Some(d) = a.d {
        params = params.with_degree(d);
    }
    params.validate()?;
    let budget = a.tuple_budget.unwrap_or(DEFAULT_TUPLE_BUDGET);
    let limits = ctx.limits();

    let clock = Instant::now();
    let built = build_graph(&params, budget)?;
    let build_ms = clock.elapsed().as_millis();
    let h = &built.hypergraph;
    write_file(&a.out, &write_hypergraph(h))?;
    if let Some(path) = &a.polys {
        let dump: String = built.polys.iter().map(write_poly).collect();
        write_file(path, &dump)?;
    }

    let threshold = threshold_for(a.threshold, a.k, a.r);
    let cap = threshold.map_or(1000, |t| (t + 1).max(1000));
    let selection = PairSelection::auto(h.vertex_count(), a.sample, ctx.seed);
    let clock = Instant::now();
    let c = construction::census(h, a.k, cap, selection, limits)?;
    let census_ms = clock.elapsed().as_millis();
    let bad = match threshold {
        Some(t) => bad_pairs(&c, t)?,
        None => Vec::new(),
    };

    let clock = Instant::now();
    let repair = match threshold {
        Some(t) => {
            let out = construction::repair(h, a.k, t, limits)?;
            if let Some(path) = &a.repaired {
                write_file(path, &write_hypergraph(&out.hypergraph))?;
            }
            let after =
                construction::census(&out.hypergraph, a.k, t + 1, PairSelection::All, limits)?;
            let certified_free_t =
                smallest_free_t(&out.hypergraph, a.k, t as usize + 1, limits).unwrap_or(None);
            Some(RepairOut {
                deleted: out.log.len(),
                fraction_deleted: if h.edge_count() == 0 {
                    0.0
                } else {
                    out.log.len() as f64 / h.edge_count() as f64
                },
                initial_excess: out.initial_excess,
                edge_count_after: out.hypergraph.edge_count(),
                remaining_bad: bad_pairs(&after, t)?.len(),
                certified_free_t,
                log: out.log,
            })
        }
        None => None,
    };
    let repair_ms = clock.elapsed().as_millis();

    let stats = GenerateStats {
        params: ParamsOut {
            k: params.k,
            r: params.r,
            q: params.q,
            d: params.d,
            s: params.num_polys(),
        },
        seed: params.seed,
        vertex_count: h.vertex_count(),
        edge_count: h.edge_count(),
        expected_edges: params.expected_edges() as u64,
        edge_probability: params.edge_probability(),
        census: CensusOut {
            k: c.k,
            cap: c.cap,
            selection: c.selection,
            pairs_examined: c.pairs_examined(),
            max: c.summary.max,
            histogram: c.summary.histogram.clone(),
            capped: c.summary.capped,
            inconclusive: c.summary.inconclusive,
        },
        threshold,
        bad_pairs: bad,
        repair,
        timings: (!a.no_timings).then_some(Timings {
            build_ms,
            census_ms,
            repair_ms,
        }),
    };
    println!(
        "{} vertices, {} edges (expected {})",
        stats.vertex_count, stats.edge_count, stats.expected_edges
    );
    if let Some(r) = &stats.repair {
        println!(
            "{} bad pairs; repair deleted {} edges, {} bad pairs remaining",
            stats.bad_pairs.len(),
            r.deleted,
            r.remaining_bad
        );
    }
    if let Some(path) = &a.stats {
        write_file(path, &to_json(&stats))?;
    }
    Ok(())
}

pub fn detect(ctx: &Context, a: DetectArgs) -> Result<(), CliError> {
    let h = read_graph(&a.input)?;
    let result = find_theta(&h, a.k, a.t, ctx.limits())?;
    let expected = if a.oracle {
        Some(oracle_has_theta(&h, a.k, a.t).map_err(|e| match e {
            OracleError::TooLarge { .. } => CliError::Budget(e.to_string()),
            OracleError::InvalidQuery(_) => CliError::Usage(e.to_string()),
        })?)
    } else {
        None
    };
    match &result {
        ThetaSearch::Found(w) => {
            if !h.validate_theta(w) {
                return Err(CliError::Mismatch(
                    "search returned an invalid witness".into(),
                ));
            }
            println!("present x={} y={}", w.x, w.y);
            for p in &w.paths {
                let core: Vec<String> = p.core.iter().map(|v| v.to_string()).collect();
                let edges: Vec<String> = p.edges.iter().map(|e| e.to_string()).collect();
                println!("path {} edges {}", core.join(" "), edges.join(" "));
            }
        }
        ThetaSearch::Absent => println!("absent"),
        ThetaSearch::Inconclusive { nodes } => {
            println!("inconclusive");
            return Err(CliError::Budget(format!(
                "search stopped after {nodes} nodes without an answer"
            )));
        }
    }
    if let Some(expected) = expected {
        let found = matches!(result, ThetaSearch::Found(_));
        if found != expected {
            return Err(CliError::Mismatch(format!(
                "search says {}, oracle says {}",
                if found { "present" } else { "absent" },
                if expected { "present" } else { "absent" }
            )));
        }
        println!("oracle agrees");
    }
    Ok(())
}

pub fn reduce(ctx: &Context, a: ReduceArgs) -> Result<(), CliError> {
    let h = read_graph(&a.input)?;
    let tie_break = match a.tie_break {
        TieBreakArg::Lex => TieBreak::Lexicographic,
        TieBreakArg::Random => TieBreak::Random { seed: ctx.seed },
    };
    let g = reduce_graph(&h, &ReductionParams::new(a.m).with_tie_break(tie_break))
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let text = write_reduced(&g);
    match &a.out {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    let report = format!("max multiplicity {}", g.max_multiplicity());
    let bound = match (a.k, a.t) {
        (Some(k), Some(t)) => Some(
            multiplicity_bound::<u128>(k, t, h.uniformity(), a.m)
                .map_err(|e| CliError::Usage(e.to_string()))?,
        ),
        (None, None) => None,
        _ => return Err(CliError::Usage("-k and -t must be given together".into())),
    };
    // Keep stdout clean for the graph when it is written there.
    let line = match bound {
        Some(b) => format!("{report}, bound {b}"),
        None => report,
    };
    if a.out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
    Ok(())
}

pub fn census(ctx: &Context, a: CensusArgs) -> Result<(), CliError> {
    let h = read_graph(&a.input)?;
    let selection = match (a.sample, a.cross_part) {
        (Some(count), _) => PairSelection::Sampled {
            count,
            seed: ctx.seed,
        },
        (None, true) => PairSelection::CrossPart,
        (None, false) => PairSelection::All,
    };
    let c = construction::census(&h, a.k, a.cap, selection, ctx.limits())?;
    let json = to_json(&c);
    match &a.out {
        Some(path) => {
            write_file(path, &json)?;
            println!(
                "{} pairs, max {} paths, {} inconclusive",
                c.pairs_examined(),
                c.summary.max,
                c.summary.inconclusive
            );
        }
        None => print!("{json}"),
    }
    if c.summary.inconclusive > 0 {
        return Err(CliError::Budget(format!(
            "{} pairs ran out of search budget",
            c.summary.inconclusive
        )));
    }
    Ok(())
}

pub fn repair(ctx: &Context, a: RepairArgs) -> Result<(), CliError> {
    let h = read_graph(&a.input)?;
    let threshold = threshold_for(a.threshold, a.k, h.uniformity()).ok_or_else(|| {
        CliError::Usage(format!(
            "no pilot threshold for k = {}, r = {}; pass --threshold",
            a.k,
            h.uniformity()
        ))
    })?;
    let out = construction::repair(&h, a.k, threshold, ctx.limits())?;
    write_file(&a.out, &write_hypergraph(&out.hypergraph))?;
    if let Some(path) = &a.log {
        write_file(path, &to_json(&out.log))?;
    }
    let after = construction::census(
        &out.hypergraph,
        a.k,
        threshold + 1,
        PairSelection::All,
        ctx.limits(),
    )?;
    let remaining = bad_pairs(&after, threshold)?.len();
    println!(
        "deleted {} of {} edges; {remaining} bad pairs remaining",
        out.log.len(),
        h.edge_count()
    );
    Ok(())
}
