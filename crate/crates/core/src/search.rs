//! Berge path counting/enumeration between vertex pairs and the search for
//! Berge theta subgraphs.
//!
//! Paths are generated in a fixed order: by core vertex sequence, then by
//! edge sequence. Core sequences are grown from `x` through the neighbor
//! lists; once a full core sequence reaches `y`, the edge sequences are the
//! systems of distinct representatives of the per-step pair lists.

use std::cell::Cell;
use std::collections::HashMap;
use std::ops::ControlFlow;

use thiserror::Error;

use crate::hypergraph::{BergePathWitness, EdgeIdx, Hypergraph, ThetaWitness, VertexId};

/// Default number of search nodes a single query may expand.
pub const DEFAULT_NODE_BUDGET: u64 = 500_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("path endpoints must differ (x = y = {0})")]
    SameEndpoints(VertexId),
    #[error("path length must be at least 1")]
    ZeroLength,
    #[error("theta graphs need at least one path")]
    ZeroPaths,
    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("search budget of {budget} nodes exhausted; result inconclusive")]
    BudgetExceeded { budget: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathQuery {
    pub x: VertexId,
    pub y: VertexId,
    pub k: usize,
    pub cap: Option<u64>,
}

impl PathQuery {
    pub fn new(x: VertexId, y: VertexId, k: usize) -> Self {
        Self { x, y, k, cap: None }
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = Some(cap);
        self
    }

    fn check(&self, h: &Hypergraph) -> Result<(), SearchError> {
        if self.k == 0 {
            return Err(SearchError::ZeroLength);
        }
        if self.x == self.y {
            return Err(SearchError::SameEndpoints(self.x));
        }
        let n = h.vertex_count();
        for v in [self.x, self.y] {
            if v as usize >= n {
                return Err(SearchError::VertexOutOfRange { vertex: v, n });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    pub node_budget: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        Self {
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

impl SearchLimits {
    pub fn unlimited() -> Self {
        Self {
            node_budget: u64::MAX,
        }
    }

    pub fn with_budget(node_budget: u64) -> Self {
        Self { node_budget }
    }
}

/// Capped path count. `capped` is set when the search stopped at the cap,
/// in which case `count == cap` and the true count may be larger.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathCount {
    pub count: u64,
    pub capped: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ThetaSearch {
    Found(ThetaWitness),
    Absent,
    /// The node budget ran out before the search space was exhausted.
    Inconclusive {
        nodes: u64,
    },
}

impl ThetaSearch {
    pub fn witness(&self) -> Option<&ThetaWitness> {
        match self {
            ThetaSearch::Found(w) => Some(w),
            _ => None,
        }
    }
}

#[derive(Debug)]
struct Exhausted;

struct Budget {
    limit: u64,
    used: Cell<u64>,
}

impl Budget {
    fn new(limits: SearchLimits) -> Self {
        Self {
            limit: limits.node_budget,
            used: Cell::new(0),
        }
    }

    #[inline]
    fn tick(&self) -> Result<(), Exhausted> {
        let used = self.used.get() + 1;
        if used > self.limit {
            return Err(Exhausted);
        }
        self.used.set(used);
        Ok(())
    }
}

/// Constraints for one path generation pass.
struct PathSpec<'a> {
    x: VertexId,
    y: VertexId,
    k: usize,
    banned_vertices: &'a [VertexId],
    /// First internal core vertex must be strictly greater than this.
    first_after: Option<VertexId>,
    /// Visit each core sequence once with no edges assigned.
    cores_only: bool,
}

type Visit<'v> = dyn FnMut(&[VertexId], &[EdgeIdx]) -> ControlFlow<()> + 'v;

struct Walker<'a, 'v> {
    h: &'a Hypergraph,
    spec: &'a PathSpec<'a>,
    budget: &'a Budget,
    core: Vec<VertexId>,
    edges: Vec<EdgeIdx>,
    visit: &'a mut Visit<'v>,
}

impl Walker<'_, '_> {
    fn grow(&mut self) -> Result<ControlFlow<()>, Exhausted> {
        self.budget.tick()?;
        let last = *self.core.last().expect("core starts with x");
        if self.core.len() == self.spec.k {
            if self.h.pair_edges(last, self.spec.y).is_empty() {
                return Ok(ControlFlow::Continue(()));
            }
            self.core.push(self.spec.y);
            let flow = if self.spec.cores_only {
                Ok((self.visit)(&self.core, &[]))
            } else {
                self.assign(0)
            };
            self.core.pop();
            return flow;
        }
        let h = self.h;
        for &u in h.neighbors(last) {
            if u == self.spec.y || self.core.contains(&u) || self.spec.banned_vertices.contains(&u)
            {
                continue;
            }
            if self.core.len() == 1 && self.spec.first_after.is_some_and(|f| u <= f) {
                continue;
            }
            self.core.push(u);
            let flow = self.grow();
            self.core.pop();
            if flow?.is_break() {
                return Ok(ControlFlow::Break(()));
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    fn assign(&mut self, step: usize) -> Result<ControlFlow<()>, Exhausted> {
        self.budget.tick()?;
        if step == self.spec.k {
            return Ok((self.visit)(&self.core, &self.edges));
        }
        let h = self.h;
        for &e in h.pair_edges(self.core[step], self.core[step + 1]) {
            if self.edges.contains(&e) {
                continue;
            }
            self.edges.push(e);
            let flow = self.assign(step + 1);
            self.edges.pop();
            if flow?.is_break() {
                return Ok(ControlFlow::Break(()));
            }
        }
        Ok(ControlFlow::Continue(()))
    }
}

fn walk_paths(
    h: &Hypergraph,
    spec: &PathSpec<'_>,
    budget: &Budget,
    visit: &mut Visit<'_>,
) -> Result<ControlFlow<()>, Exhausted> {
    let mut walker = Walker {
        h,
        spec,
        budget,
        core: Vec::with_capacity(spec.k + 1),
        edges: Vec::with_capacity(spec.k),
        visit,
    };
    walker.core.push(spec.x);
    walker.grow()
}

fn plain_spec(q: &PathQuery) -> PathSpec<'static> {
    PathSpec {
        x: q.x,
        y: q.y,
        k: q.k,
        banned_vertices: &[],
        first_after: None,
        cores_only: false,
    }
}

/// Number of length-`k` Berge paths from `x` to `y`, stopping at the cap.
pub fn count_paths(h: &Hypergraph, q: &PathQuery) -> Result<PathCount, SearchError> {
    count_paths_limited(h, q, SearchLimits::unlimited())
}

pub fn count_paths_limited(
    h: &Hypergraph,
    q: &PathQuery,
    limits: SearchLimits,
) -> Result<PathCount, SearchError> {
    q.check(h)?;
    let cap = q.cap.unwrap_or(u64::MAX);
    if cap == 0 {
        return Ok(PathCount {
            count: 0,
            capped: true,
        });
    }
    let budget = Budget::new(limits);
    let mut count = 0u64;
    let flow = walk_paths(h, &plain_spec(q), &budget, &mut |_, _| {
        count += 1;
        if count >= cap {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })
    .map_err(|_| SearchError::BudgetExceeded {
        budget: limits.node_budget,
    })?;
    Ok(PathCount {
        count,
        capped: flow.is_break(),
    })
}

/// The paths counted by [`count_paths`], in generation order, up to the cap.
pub fn enumerate_paths(
    h: &Hypergraph,
    q: &PathQuery,
) -> Result<Vec<BergePathWitness>, SearchError> {
    q.check(h)?;
    let cap = q.cap.unwrap_or(u64::MAX);
    let mut out = Vec::new();
    if cap == 0 {
        return Ok(out);
    }
    let budget = Budget::new(SearchLimits::unlimited());
    let _ = walk_paths(h, &plain_spec(q), &budget, &mut |core, edges| {
        out.push(BergePathWitness::new(core.to_vec(), edges.to_vec()));
        if out.len() as u64 >= cap {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })
    .expect("unlimited budget");
    Ok(out)
}

struct Packer<'a> {
    h: &'a Hypergraph,
    x: VertexId,
    y: VertexId,
    k: usize,
    t: usize,
    budget: &'a Budget,
}

impl Packer<'_> {
    /// Extend `chosen` to `t` core sequences with disjoint internals whose
    /// steps can all be given distinct edges. Each new core starts after the
    /// previous one, so the first success is least by core sequences.
    fn pack(&self, chosen: &mut Vec<Vec<VertexId>>) -> Result<bool, Exhausted> {
        if chosen.len() == self.t {
            return Ok(true);
        }
        let banned_vertices: Vec<VertexId> = chosen
            .iter()
            .flat_map(|c| c[1..self.k].iter().copied())
            .collect();
        let spec = PathSpec {
            x: self.x,
            y: self.y,
            k: self.k,
            banned_vertices: &banned_vertices,
            first_after: chosen.last().map(|c| c[1]),
            cores_only: true,
        };
        let mut outcome = Ok(false);
        let _ = walk_paths(self.h, &spec, self.budget, &mut |core, _| {
            chosen.push(core.to_vec());
            let step = self
                .budget
                .tick()
                .map(|()| self.assignment(chosen, &[]).is_some())
                .and_then(|ok| if ok { self.pack(chosen) } else { Ok(false) });
            match step {
                Ok(true) => {
                    outcome = Ok(true);
                    ControlFlow::Break(())
                }
                Ok(false) => {
                    chosen.pop();
                    ControlFlow::Continue(())
                }
                Err(e) => {
                    outcome = Err(e);
                    ControlFlow::Break(())
                }
            }
        })?;
        outcome
    }

    /// Distinct edges for every step of `cores`, with the first steps forced
    /// to `fixed`, by augmenting paths.
    fn assignment(&self, cores: &[Vec<VertexId>], fixed: &[EdgeIdx]) -> Option<Vec<EdgeIdx>> {
        let steps: Vec<&[EdgeIdx]> = cores
            .iter()
            .flat_map(|c| c.windows(2).map(|w| self.h.pair_edges(w[0], w[1])))
            .collect();
        let mut owner: HashMap<EdgeIdx, usize> = HashMap::new();
        for (i, &e) in fixed.iter().enumerate() {
            if owner.insert(e, i).is_some() || !steps[i].contains(&e) {
                return None;
            }
        }
        fn augment(
            i: usize,
            steps: &[&[EdgeIdx]],
            owner: &mut HashMap<EdgeIdx, usize>,
            seen: &mut Vec<EdgeIdx>,
            frozen: usize,
        ) -> bool {
            for &e in steps[i] {
                if seen.contains(&e) {
                    continue;
                }
                seen.push(e);
                match owner.get(&e).copied() {
                    None => {
                        owner.insert(e, i);
                        return true;
                    }
                    Some(j) if j >= frozen && augment(j, steps, owner, seen, frozen) => {
                        owner.insert(e, i);
                        return true;
                    }
                    _ => {}
                }
            }
            false
        }
        for i in fixed.len()..steps.len() {
            if !augment(i, &steps, &mut owner, &mut Vec::new(), fixed.len()) {
                return None;
            }
        }
        let mut edges = vec![0; steps.len()];
        for (e, i) in owner {
            edges[i] = e;
        }
        Some(edges)
    }

    /// The least edge sequence, step by step, that still completes.
    fn least_assignment(&self, cores: &[Vec<VertexId>]) -> Vec<EdgeIdx> {
        let total = cores.len() * self.k;
        let mut fixed = Vec::with_capacity(total);
        while fixed.len() < total {
            let (c, s) = (fixed.len() / self.k, fixed.len() % self.k);
            let options = self.h.pair_edges(cores[c][s], cores[c][s + 1]);
            let pick = options
                .iter()
                .copied()
                .find(|&e| {
                    fixed.push(e);
                    let ok = self.assignment(cores, &fixed).is_some();
                    fixed.pop();
                    ok
                })
                .expect("a feasible assignment exists");
            fixed.push(pick);
        }
        fixed
    }
}

fn theta_at_pair(
    h: &Hypergraph,
    x: VertexId,
    y: VertexId,
    k: usize,
    t: usize,
    budget: &Budget,
) -> Result<Option<ThetaWitness>, Exhausted> {
    budget.tick()?;
    if k == 1 {
        let edges = h.pair_edges(x, y);
        if edges.len() < t {
            return Ok(None);
        }
        let paths = edges[..t]
            .iter()
            .map(|&e| BergePathWitness::new(vec![x, y], vec![e]))
            .collect();
        return Ok(Some(ThetaWitness { x, y, paths }));
    }
    if h.neighbors(x).len() < t || h.neighbors(y).len() < t {
        return Ok(None);
    }
    let packer = Packer {
        h,
        x,
        y,
        k,
        t,
        budget,
    };
    let mut chosen = Vec::with_capacity(t);
    if !packer.pack(&mut chosen)? {
        return Ok(None);
    }
    let edges = packer.least_assignment(&chosen);
    let paths = chosen
        .into_iter()
        .zip(edges.chunks(k))
        .map(|(core, e)| BergePathWitness::new(core, e.to_vec()))
        .collect();
    Ok(Some(ThetaWitness { x, y, paths }))
}

fn check_theta_params(k: usize, t: usize) -> Result<(), SearchError> {
    if k == 0 {
        return Err(SearchError::ZeroLength);
    }
    if t == 0 {
        return Err(SearchError::ZeroPaths);
    }
    Ok(())
}

/// Search for a Berge theta with `t` paths of length `k`.
///
/// Returns the least witness by `(x, y, path core sequences)`, always with
/// `x < y` and paths sorted; edges are the least feasible choice, step by
/// step. For `k = 1` a theta is `t` distinct edges
/// containing a common pair; this case is an extension of the usual `k >= 2`
/// setting.
pub fn find_theta(
    h: &Hypergraph,
    k: usize,
    t: usize,
    limits: SearchLimits,
) -> Result<ThetaSearch, SearchError> {
    check_theta_params(k, t)?;
    let budget = Budget::new(limits);
    let n = h.vertex_count() as VertexId;
    for x in 0..n {
        if h.incident_edges(x).len() < t {
            continue;
        }
        for y in x + 1..n {
            if h.incident_edges(y).len() < t {
                continue;
            }
            match theta_at_pair(h, x, y, k, t, &budget) {
                Ok(Some(w)) => return Ok(ThetaSearch::Found(w)),
                Ok(None) => {}
                Err(Exhausted) => {
                    return Ok(ThetaSearch::Inconclusive {
                        nodes: budget.used.get(),
                    })
                }
            }
        }
    }
    Ok(ThetaSearch::Absent)
}

/// Theta search restricted to one endpoint pair (in either order).
pub fn find_theta_between(
    h: &Hypergraph,
    x: VertexId,
    y: VertexId,
    k: usize,
    t: usize,
    limits: SearchLimits,
) -> Result<ThetaSearch, SearchError> {
    check_theta_params(k, t)?;
    PathQuery::new(x, y, k).check(h)?;
    let budget = Budget::new(limits);
    let (x, y) = (x.min(y), x.max(y));
    Ok(match theta_at_pair(h, x, y, k, t, &budget) {
        Ok(Some(w)) => ThetaSearch::Found(w),
        Ok(None) => ThetaSearch::Absent,
        Err(Exhausted) => ThetaSearch::Inconclusive {
            nodes: budget.used.get(),
        },
    })
}

/// `Ok(true)` when no theta exists; an exhausted budget is an error, never
/// a silent `true`.
pub fn is_theta_free(
    h: &Hypergraph,
    k: usize,
    t: usize,
    limits: SearchLimits,
) -> Result<bool, SearchError> {
    match find_theta(h, k, t, limits)? {
        ThetaSearch::Found(_) => Ok(false),
        ThetaSearch::Absent => Ok(true),
        ThetaSearch::Inconclusive { .. } => Err(SearchError::BudgetExceeded {
            budget: limits.node_budget,
        }),
    }
}
