//! Random polynomial hypergraphs and their path statistics.
//!
//! Vertices are `r` copies of `F_q^k`. Vertex `(part, c_0, .., c_(k-1))` has
//! id `part * q^k + sum_i c_i q^i`. A tuple `(v_1, .., v_r)` with one vertex
//! per part is an edge when each of `s = k(r-1) - 1` random polynomials in
//! `kr` variables vanishes at the concatenated coordinates, part 0 first.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::seq::index;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{is_prime, FieldWord, PrimeField};
use crate::hypergraph::{EdgeIdx, Hypergraph, HypergraphError, VertexId};
use crate::poly::{seeded_stream, GridPlan, MonomialBasis, MultiPoly, PolyError};
use crate::search::{
    count_paths_limited, enumerate_paths, find_theta, PathQuery, SearchError, SearchLimits,
    ThetaSearch,
};

/// Default cap on `q^(kr)`, the number of candidate tuples scanned.
pub const DEFAULT_TUPLE_BUDGET: u64 = 20_000_000;
/// Bad-pair threshold for `k = 2, r = 3`: the smallest value at which repair
/// removed at most 5% of edges at `q = 7` on every one of 20 pilot seeds.
pub const PILOT_THRESHOLD_K2_R3: u64 = 10;
/// Above this many vertices a census samples pairs instead of taking all.
pub const FULL_CENSUS_MAX_VERTICES: usize = 2000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("{required} candidate tuples exceed the budget of {budget}")]
    BudgetExceeded { required: u128, budget: u64 },
    #[error("cap {cap} does not exceed threshold {threshold}; bad pairs cannot be certified")]
    CapTooSmall { cap: u64, threshold: u64 },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionParams {
    pub k: usize,
    pub r: usize,
    pub q: u64,
    pub d: u32,
    pub seed: u64,
}

impl ConstructionParams {
    /// Parameters with the default degree `k(2k + 1)`.
    pub fn new(k: usize, r: usize, q: u64, seed: u64) -> Self {
        Self {
            k,
            r,
            q,
            d: (k * (2 * k + 1)) as u32,
            seed,
        }
    }

    pub fn with_degree(mut self, d: u32) -> Self {
        self.d = d;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), ConstructionError> {
        let bad = |m: &str| Err(ConstructionError::InvalidParams(m.to_string()));
        if self.k < 2 {
            return bad("k must be at least 2");
        }
        if self.r < 2 {
            return bad("r must be at least 2");
        }
        if self.k * (self.r - 1) < 2 {
            return bad("k(r-1) - 1 must be at least 1");
        }
        if self.d == 0 {
            return bad("d must be at least 1");
        }
        if !is_prime(self.q) || self.q > u32::MAX as u64 {
            return Err(ConstructionError::InvalidParams(format!(
                "q = {} is not a prime below 2^32",
                self.q
            )));
        }
        if (self.q as u128).pow(self.k as u32) * self.r as u128 > VertexId::MAX as u128 {
            return bad("too many vertices for 32-bit ids");
        }
        Ok(())
    }

    pub fn num_polys(&self) -> usize {
        self.k * (self.r - 1) - 1
    }

    pub fn nvars(&self) -> usize {
        self.k * self.r
    }

    /// `N = q^k`, the size of one part.
    pub fn part_size(&self) -> u64 {
        self.q.pow(self.k as u32)
    }

    pub fn vertex_count(&self) -> usize {
        self.r * self.part_size() as usize
    }

    pub fn candidate_tuples(&self) -> u128 {
        (self.q as u128).pow(self.nvars() as u32)
    }

    /// `q^(k+1)`, the expected number of edges.
    pub fn expected_edges(&self) -> u128 {
        (self.q as u128).pow(self.k as u32 + 1)
    }

    /// `q^(1 - k(r-1))`, the chance that a fixed tuple is an edge.
    pub fn edge_probability(&self) -> f64 {
        (self.q as f64).powi(1 - (self.k * (self.r - 1)) as i32)
    }

    pub fn coder(&self) -> VertexCoder {
        VertexCoder {
            k: self.k,
            q: self.q,
        }
    }
}

/// Pilot-derived default bad-pair threshold, where one exists.
pub fn pilot_threshold(k: usize, r: usize) -> Option<u64> {
    match (k, r) {
        (2, 3) => Some(PILOT_THRESHOLD_K2_R3),
        _ => None,
    }
}

/// The id bijection `(part, coords) <-> part * q^k + sum_i coords[i] q^i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VertexCoder {
    k: usize,
    q: u64,
}

impl VertexCoder {
    pub fn encode(&self, part: usize, coords: &[u64]) -> VertexId {
        debug_assert_eq!(coords.len(), self.k);
        let local = coords.iter().rev().fold(0u64, |acc, &c| acc * self.q + c);
        (part as u64 * self.q.pow(self.k as u32) + local) as VertexId
    }

    pub fn decode(&self, id: VertexId) -> (usize, Vec<u64>) {
        let n = self.q.pow(self.k as u32);
        let (part, mut local) = ((id as u64 / n) as usize, id as u64 % n);
        let coords = (0..self.k)
            .map(|_| {
                let c = local % self.q;
                local /= self.q;
                c
            })
            .collect();
        (part, coords)
    }
}

/// A built graph with the polynomials that define it.
#[derive(Debug, Clone)]
pub struct Construction<W = u32> {
    pub params: ConstructionParams,
    pub hypergraph: Hypergraph,
    pub polys: Vec<MultiPoly<W>>,
}

/// The `s` polynomials for `params`; polynomial `i` is drawn from stream `i`
/// of the seed.
pub fn sample_polys<W: FieldWord>(
    params: &ConstructionParams,
) -> Result<Vec<MultiPoly<W>>, ConstructionError> {
    params.validate()?;
    let field = PrimeField::<W>::new(params.q).map_err(PolyError::from)?;
    let basis = Arc::new(MonomialBasis::new(params.nvars(), params.d)?);
    (0..params.num_polys())
        .map(|i| {
            let mut rng = seeded_stream(params.seed, i as u64);
            MultiPoly::sample_uniform(field, basis.clone(), &mut rng)
        })
        .collect::<Result<_, _>>()
        .map_err(ConstructionError::from)
}

pub fn build_graph(
    params: &ConstructionParams,
    tuple_budget: u64,
) -> Result<Construction<u32>, ConstructionError> {
    check_budget(params, tuple_budget)?;
    let polys = sample_polys::<u32>(params)?;
    let hypergraph = build_graph_with_polys(params, &polys, tuple_budget)?;
    Ok(Construction {
        params: *params,
        hypergraph,
        polys,
    })
}

fn check_budget(params: &ConstructionParams, tuple_budget: u64) -> Result<(), ConstructionError> {
    params.validate()?;
    let required = params.candidate_tuples();
    if required > tuple_budget as u128 {
        return Err(ConstructionError::BudgetExceeded {
            required,
            budget: tuple_budget,
        });
    }
    Ok(())
}

/// Build from given polynomials (all over `F_q` in `kr` variables sharing
/// one basis). Edges come out in order of the concatenated tuple, read as a
/// base-`q` number with part 0's first coordinate most significant.
pub fn build_graph_with_polys<W: FieldWord>(
    params: &ConstructionParams,
    polys: &[MultiPoly<W>],
    tuple_budget: u64,
) -> Result<Hypergraph, ConstructionError> {
    check_budget(params, tuple_budget)?;
    let nvars = params.nvars();
    if let Some(f) = polys
        .iter()
        .find(|f| f.nvars() != nvars || f.field().order() != params.q)
    {
        return Err(ConstructionError::InvalidParams(format!(
            "polynomial over F_{} in {} variables, expected F_{} in {nvars}",
            f.field().order(),
            f.nvars(),
            params.q
        )));
    }
    let total = params.candidate_tuples() as usize;
    let mut alive = vec![true; total];
    let mut plans: HashMap<(usize, u32), GridPlan> = HashMap::new();
    for f in polys {
        let key = (f.nvars(), f.degree());
        if let std::collections::hash_map::Entry::Vacant(e) = plans.entry(key) {
            e.insert(GridPlan::new(f.basis().clone())?);
        }
        let values = plans[&key].evaluate(f, tuple_budget)?;
        alive
            .par_iter_mut()
            .zip(values.par_iter())
            .for_each(|(a, v)| *a &= v.is_zero());
    }
    let coder = params.coder();
    let (k, q) = (params.k, params.q);
    let edges: Vec<Vec<VertexId>> = alive
        .par_iter()
        .enumerate()
        .filter(|(_, &a)| a)
        .map(|(idx, _)| {
            let mut digits = vec![0u64; nvars];
            let mut rest = idx as u64;
            for slot in digits.iter_mut().rev() {
                *slot = rest % q;
                rest /= q;
            }
            digits
                .chunks(k)
                .enumerate()
                .map(|(part, coords)| coder.encode(part, coords))
                .collect()
        })
        .collect();
    let parts = (0..params.vertex_count())
        .map(|v| (v as u64 / params.part_size()) as u32)
        .collect();
    Ok(Hypergraph::new(params.r, params.vertex_count(), edges)?.with_parts(parts)?)
}

/// Which endpoint pairs a census looks at. Pairs are always `x < y` in
/// lexicographic order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum PairSelection {
    All,
    /// Only pairs in different parts of the layout.
    CrossPart,
    /// A uniform sample of `count` distinct pairs.
    Sampled {
        count: usize,
        seed: u64,
    },
}

impl PairSelection {
    /// All pairs up to [`FULL_CENSUS_MAX_VERTICES`] vertices, else a sample.
    pub fn auto(n: usize, sample: usize, seed: u64) -> Self {
        if n <= FULL_CENSUS_MAX_VERTICES {
            Self::All
        } else {
            Self::Sampled {
                count: sample,
                seed,
            }
        }
    }

    pub fn pairs(&self, h: &Hypergraph) -> Vec<(VertexId, VertexId)> {
        let n = h.vertex_count();
        match *self {
            Self::All => all_pairs(n).collect(),
            Self::CrossPart => match h.parts() {
                Some(parts) => all_pairs(n)
                    .filter(|&(x, y)| parts[x as usize] != parts[y as usize])
                    .collect(),
                None => all_pairs(n).collect(),
            },
            Self::Sampled { count, seed } => {
                let total = n * n.saturating_sub(1) / 2;
                let mut rng = seeded_stream(seed, u64::MAX);
                let mut picks = index::sample(&mut rng, total, count.min(total)).into_vec();
                picks.sort_unstable();
                picks.into_iter().map(|i| unrank_pair(n, i)).collect()
            }
        }
    }
}

fn all_pairs(n: usize) -> impl Iterator<Item = (VertexId, VertexId)> {
    let n = n as VertexId;
    (0..n).flat_map(move |x| (x + 1..n).map(move |y| (x, y)))
}

fn unrank_pair(n: usize, mut i: usize) -> (VertexId, VertexId) {
    for x in 0..n {
        let row = n - 1 - x;
        if i < row {
            return (x as VertexId, (x + 1 + i) as VertexId);
        }
        i -= row;
    }
    unreachable!("pair rank out of range")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCount {
    pub x: VertexId,
    pub y: VertexId,
    /// Exact when neither flag is set, otherwise a lower bound.
    pub count: u64,
    pub capped: bool,
    pub inconclusive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusSummary {
    pub max: u64,
    /// count -> number of pairs.
    pub histogram: BTreeMap<u64, u64>,
    /// `above[c]` is the number of pairs with count greater than `c`.
    pub above: Vec<u64>,
    pub capped: u64,
    pub inconclusive: u64,
}

impl CensusSummary {
    fn from_entries(entries: &[PairCount]) -> Self {
        let mut histogram = BTreeMap::new();
        for e in entries {
            *histogram.entry(e.count).or_insert(0) += 1;
        }
        let max = entries.iter().map(|e| e.count).max().unwrap_or(0);
        let above = (0..max)
            .map(|c| histogram.range(c + 1..).map(|(_, &n)| n).sum())
            .collect();
        Self {
            max,
            histogram,
            above,
            capped: entries.iter().filter(|e| e.capped).count() as u64,
            inconclusive: entries.iter().filter(|e| e.inconclusive).count() as u64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathCensus {
    pub k: usize,
    pub cap: u64,
    pub selection: PairSelection,
    pub entries: Vec<PairCount>,
    pub summary: CensusSummary,
}

impl PathCensus {
    pub fn pairs_examined(&self) -> usize {
        self.entries.len()
    }
}

/// Capped path counts for the selected pairs, in pair order. A pair whose
/// search runs out of `limits` is kept with its partial count and flagged.
pub fn census(
    h: &Hypergraph,
    k: usize,
    cap: u64,
    selection: PairSelection,
    limits: SearchLimits,
) -> Result<PathCensus, ConstructionError> {
    if k == 0 || cap == 0 {
        return Err(ConstructionError::InvalidParams(
            "census needs k >= 1 and cap >= 1".into(),
        ));
    }
    let pairs = selection.pairs(h);
    let entries = pairs
        .par_iter()
        .map(|&(x, y)| {
            let q = PathQuery::new(x, y, k).with_cap(cap);
            match count_paths_limited(h, &q, limits) {
                Ok(c) => Ok(PairCount {
                    x,
                    y,
                    count: c.count,
                    capped: c.capped,
                    inconclusive: false,
                }),
                Err(SearchError::BudgetExceeded { .. }) => Ok(PairCount {
                    x,
                    y,
                    count: 0,
                    capped: false,
                    inconclusive: true,
                }),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let summary = CensusSummary::from_entries(&entries);
    Ok(PathCensus {
        k,
        cap,
        selection,
        entries,
        summary,
    })
}

/// Pairs whose count exceeds `threshold`. Inconclusive pairs are not
/// reported; check `summary.inconclusive`.
pub fn bad_pairs(
    c: &PathCensus,
    threshold: u64,
) -> Result<Vec<(VertexId, VertexId)>, ConstructionError> {
    if threshold == 0 {
        return Err(ConstructionError::InvalidParams(
            "threshold must be at least 1".into(),
        ));
    }
    if c.cap <= threshold {
        return Err(ConstructionError::CapTooSmall {
            cap: c.cap,
            threshold,
        });
    }
    Ok(c.entries
        .iter()
        .filter(|e| e.count > threshold)
        .map(|e| (e.x, e.y))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Deletion {
    /// Index of the edge in the input hypergraph.
    pub edge: EdgeIdx,
    pub vertices: Vec<VertexId>,
    /// The bad pair being repaired, and its path count before the deletion.
    pub pair: (VertexId, VertexId),
    pub paths_before: u64,
}

#[derive(Debug, Clone)]
pub struct RepairOutcome {
    pub hypergraph: Hypergraph,
    pub log: Vec<Deletion>,
    /// Pairs above the threshold in the input.
    pub initial_bad: Vec<(VertexId, VertexId)>,
    /// Sum over those pairs of `count - threshold`.
    pub initial_excess: u64,
}

/// Delete edges until no pair has more than `threshold` paths of length `k`.
///
/// Bad pairs are handled in order. While a pair is still bad, the edge lying
/// on most of its current paths is removed (lowest index on ties). Deletions
/// never create paths, so pairs that start good stay good.
pub fn repair(
    h: &Hypergraph,
    k: usize,
    threshold: u64,
    limits: SearchLimits,
) -> Result<RepairOutcome, ConstructionError> {
    let initial = census(
        h,
        k,
        threshold.saturating_add(1),
        PairSelection::All,
        limits,
    )?;
    if initial.summary.inconclusive > 0 {
        return Err(SearchError::BudgetExceeded {
            budget: limits.node_budget,
        }
        .into());
    }
    let initial_bad = bad_pairs(&initial, threshold)?;
    let mut current = h.clone();
    let mut origin: Vec<EdgeIdx> = (0..h.edge_count()).collect();
    let mut log = Vec::new();
    let mut initial_excess = 0;
    for &(x, y) in &initial_bad {
        let exact = count_paths_limited(h, &PathQuery::new(x, y, k), limits)?.count;
        initial_excess += exact - threshold;
    }
    for &(x, y) in &initial_bad {
        loop {
            let paths = enumerate_paths(&current, &PathQuery::new(x, y, k))?;
            let count = paths.len() as u64;
            if count <= threshold {
                break;
            }
            let mut uses: BTreeMap<EdgeIdx, u64> = BTreeMap::new();
            for p in &paths {
                for &e in &p.edges {
                    *uses.entry(e).or_insert(0) += 1;
                }
            }
            let (&e, _) = uses
                .iter()
                .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
                .expect("a bad pair has paths");
            log.push(Deletion {
                edge: origin[e],
                vertices: current.edges()[e].clone(),
                pair: (x, y),
                paths_before: count,
            });
            let mut mask = vec![false; current.edge_count()];
            mask[e] = true;
            current = current.without_edges(&mask);
            origin.remove(e);
        }
    }
    Ok(RepairOutcome {
        hypergraph: current,
        log,
        initial_bad,
        initial_excess,
    })
}

/// Smallest `t <= t_max` for which the search certifies the graph free of
/// thetas with `t` paths of length `k`.
pub fn smallest_free_t(
    h: &Hypergraph,
    k: usize,
    t_max: usize,
    limits: SearchLimits,
) -> Result<Option<usize>, ConstructionError> {
    for t in 1..=t_max {
        match find_theta(h, k, t, limits)? {
            ThetaSearch::Absent => return Ok(Some(t)),
            ThetaSearch::Found(_) => {}
            ThetaSearch::Inconclusive { .. } => {
                return Err(SearchError::BudgetExceeded {
                    budget: limits.node_budget,
                }
                .into())
            }
        }
    }
    Ok(None)
}

/// Empirical `m`-th moment of the path count over a set of pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentEstimate {
    pub order: u32,
    /// Sum of `count^m` over the pairs.
    pub sum: BigUint,
    pub pairs: u64,
    /// Set when some pair was capped or inconclusive.
    pub lower_bound_only: bool,
}

impl MomentEstimate {
    pub fn value(&self) -> BigRational {
        if self.pairs == 0 {
            return BigRational::zero();
        }
        BigRational::new(self.sum.clone().into(), BigUint::from(self.pairs).into())
    }

    pub fn to_f64(&self) -> f64 {
        self.value().to_f64().unwrap_or(f64::NAN)
    }

    /// Combine estimates of the same order (e.g. over seeds), weighting by
    /// the number of pairs.
    pub fn pooled(estimates: &[MomentEstimate]) -> Option<MomentEstimate> {
        let order = estimates.first()?.order;
        if estimates.iter().any(|e| e.order != order) {
            return None;
        }
        Some(MomentEstimate {
            order,
            sum: estimates.iter().map(|e| &e.sum).sum(),
            pairs: estimates.iter().map(|e| e.pairs).sum(),
            lower_bound_only: estimates.iter().any(|e| e.lower_bound_only),
        })
    }
}

pub fn moment_from_census(c: &PathCensus, m: u32) -> MomentEstimate {
    MomentEstimate {
        order: m,
        sum: c
            .entries
            .iter()
            .map(|e| BigUint::from(e.count).pow(m))
            .sum(),
        pairs: c.entries.len() as u64,
        lower_bound_only: c.entries.iter().any(|e| e.capped || e.inconclusive),
    }
}

/// Average of `count^m` over the selected pairs. Requires `1 <= m <= 2k + 1`.
pub fn estimate_moment(
    h: &Hypergraph,
    k: usize,
    m: u32,
    selection: PairSelection,
    cap: u64,
    limits: SearchLimits,
) -> Result<MomentEstimate, ConstructionError> {
    if m == 0 || m as usize > 2 * k + 1 {
        return Err(ConstructionError::InvalidParams(format!(
            "moment order {m} outside 1..={}",
            2 * k + 1
        )));
    }
    Ok(moment_from_census(
        &census(h, k, cap, selection, limits)?,
        m,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::oracle_count_paths;

    fn small() -> ConstructionParams {
        ConstructionParams::new(2, 3, 3, 7).with_degree(4)
    }

    #[test]
    fn derived_sizes() {
        let p = ConstructionParams::new(2, 3, 5, 0);
        assert_eq!((p.d, p.num_polys(), p.nvars()), (10, 3, 6));
        assert_eq!((p.part_size(), p.vertex_count()), (25, 75));
        assert_eq!(p.expected_edges(), 125);
        assert!((p.edge_probability() - 1.0 / 125.0).abs() < 1e-15);
        assert!(ConstructionParams::new(1, 3, 5, 0).validate().is_err());
        assert!(ConstructionParams::new(2, 3, 6, 0).validate().is_err());
        assert!(ConstructionParams::new(2, 3, 5, 0)
            .with_degree(0)
            .validate()
            .is_err());
    }

    #[test]
    fn coder_is_a_bijection() {
        let p = ConstructionParams::new(2, 3, 5, 0);
        let c = p.coder();
        assert_eq!(c.encode(1, &[2, 3]), 25 + 2 + 15);
        for id in 0..p.vertex_count() as VertexId {
            let (part, coords) = c.decode(id);
            assert_eq!(c.encode(part, &coords), id);
        }
    }

    #[test]
    fn zero_polys_give_complete_partite_graph() {
        let p = small();
        let field = PrimeField::<u32>::new(3).unwrap();
        let basis = Arc::new(MonomialBasis::new(6, 4).unwrap());
        let zeros = vec![MultiPoly::zero(field, basis).unwrap(); p.num_polys()];
        let h = build_graph_with_polys(&p, &zeros, DEFAULT_TUPLE_BUDGET).unwrap();
        assert_eq!(h.edge_count(), 729);
        assert_eq!(h.edges()[0], vec![0, 9, 18]);
        assert_eq!(h.edges()[1], vec![0, 9, 18 + 3]);
    }

    #[test]
    fn edges_match_pointwise_evaluation() {
        let p = small();
        let built = build_graph(&p, DEFAULT_TUPLE_BUDGET).unwrap();
        let coder = p.coder();
        let field = PrimeField::<u32>::new(3).unwrap();
        let mut expected = Vec::new();
        for idx in 0..729u64 {
            let mut digits = [0u64; 6];
            let mut rest = idx;
            for d in digits.iter_mut().rev() {
                *d = rest % 3;
                rest /= 3;
            }
            let point: Vec<_> = digits.iter().map(|&d| field.element(d)).collect();
            if built
                .polys
                .iter()
                .all(|f| f.evaluate(&point).unwrap().is_zero())
            {
                expected.push(vec![
                    coder.encode(0, &digits[0..2]),
                    coder.encode(1, &digits[2..4]),
                    coder.encode(2, &digits[4..6]),
                ]);
            }
        }
        assert_eq!(built.hypergraph.edges(), &expected[..]);
        let parts = built.hypergraph.parts().unwrap();
        for e in built.hypergraph.edges() {
            let mut ps: Vec<u32> = e.iter().map(|&v| parts[v as usize]).collect();
            ps.sort_unstable();
            assert_eq!(ps, vec![0, 1, 2]);
        }
    }

    #[test]
    fn construction_is_deterministic() {
        let a = build_graph(&small(), DEFAULT_TUPLE_BUDGET).unwrap();
        let b = build_graph(&small(), DEFAULT_TUPLE_BUDGET).unwrap();
        assert_eq!(a.hypergraph, b.hypergraph);
        let c = build_graph(&small().with_seed(8), DEFAULT_TUPLE_BUDGET).unwrap();
        assert_ne!(a.polys, c.polys);
    }

    #[test]
    fn budget_refusal_states_requirement() {
        let p = ConstructionParams::new(2, 3, 7, 0);
        assert_eq!(
            build_graph(&p, 1000).unwrap_err(),
            ConstructionError::BudgetExceeded {
                required: 117_649,
                budget: 1000
            }
        );
    }

    #[test]
    fn census_on_trivial_graphs() {
        let empty = Hypergraph::empty(3, 5).unwrap();
        let c = census(&empty, 2, 10, PairSelection::All, SearchLimits::default()).unwrap();
        assert_eq!(c.pairs_examined(), 10);
        assert_eq!(c.summary.max, 0);
        assert_eq!(c.summary.histogram, BTreeMap::from([(0, 10)]));
        assert!(bad_pairs(&c, 1).unwrap().is_empty());

        let single = Hypergraph::new(3, 3, vec![vec![0, 1, 2]]).unwrap();
        let c = census(&single, 1, 10, PairSelection::All, SearchLimits::default()).unwrap();
        assert!(c.entries.iter().all(|e| e.count == 1));
        let est = estimate_moment(
            &single,
            1,
            1,
            PairSelection::All,
            10,
            SearchLimits::default(),
        )
        .unwrap();
        assert_eq!(est.value(), BigRational::from_integer(1.into()));
    }

    #[test]
    fn census_matches_oracle() {
        let h = Hypergraph::new(
            3,
            6,
            vec![
                vec![0, 1, 2],
                vec![2, 3, 4],
                vec![1, 3, 5],
                vec![0, 4, 5],
                vec![1, 2, 3],
            ],
        )
        .unwrap();
        let c = census(&h, 2, 1000, PairSelection::All, SearchLimits::default()).unwrap();
        for e in &c.entries {
            assert_eq!(e.count, oracle_count_paths(&h, e.x, e.y, 2).unwrap());
        }
        assert_eq!(c.summary.histogram.values().sum::<u64>(), 15);
    }

    #[test]
    fn bad_pair_rules() {
        let h =
            Hypergraph::new(2, 4, vec![vec![0, 1], vec![1, 3], vec![0, 2], vec![2, 3]]).unwrap();
        let c = census(&h, 2, 3, PairSelection::All, SearchLimits::default()).unwrap();
        assert_eq!(bad_pairs(&c, 1).unwrap(), vec![(0, 3), (1, 2)]);
        assert!(matches!(
            bad_pairs(&c, 3),
            Err(ConstructionError::CapTooSmall {
                cap: 3,
                threshold: 3
            })
        ));
    }

    #[test]
    fn repair_bundle() {
        // Three length-2 paths 0 - v - 4 through v = 1, 2, 3.
        let edges = (1..=3).flat_map(|v| [vec![0, v], vec![v, 4]]).collect();
        let h = Hypergraph::new(2, 5, edges).unwrap();
        let out = repair(&h, 2, 2, SearchLimits::default()).unwrap();
        assert_eq!(out.initial_bad, vec![(0, 4)]);
        assert_eq!(out.log.len(), 1);
        assert_eq!(out.log[0].edge, 0);
        assert!(out.log.len() as u64 <= out.initial_excess);
        let after = census(
            &out.hypergraph,
            2,
            3,
            PairSelection::All,
            SearchLimits::default(),
        )
        .unwrap();
        assert!(bad_pairs(&after, 2).unwrap().is_empty());

        let good = repair(&out.hypergraph, 2, 2, SearchLimits::default()).unwrap();
        assert!(good.log.is_empty());
        assert_eq!(good.hypergraph, out.hypergraph);
    }

    #[test]
    fn sampled_pairs_are_sorted_and_distinct() {
        let h = Hypergraph::empty(2, 30).unwrap();
        let sel = PairSelection::Sampled { count: 50, seed: 3 };
        let pairs = sel.pairs(&h);
        assert_eq!(pairs.len(), 50);
        assert!(pairs.windows(2).all(|w| w[0] < w[1]));
        assert!(pairs.iter().all(|&(x, y)| x < y && y < 30));
        assert_eq!(pairs, sel.pairs(&h));
        assert_eq!(unrank_pair(30, 434), (28, 29));
    }

    #[test]
    fn moment_order_limit() {
        let h = Hypergraph::empty(3, 4).unwrap();
        assert!(estimate_moment(&h, 2, 6, PairSelection::All, 5, SearchLimits::default()).is_err());
        let e = estimate_moment(&h, 2, 5, PairSelection::All, 5, SearchLimits::default()).unwrap();
        assert!(e.value().is_zero());
    }
}
