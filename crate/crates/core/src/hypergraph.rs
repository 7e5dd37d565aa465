//! Uniform (multi)hypergraphs with a pair-adjacency index, plus Berge path
//! and theta witnesses and their validators.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexId = u32;
pub type EdgeIdx = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypergraphError {
    #[error("uniformity must be at least 1")]
    ZeroUniformity,
    #[error("edge {edge}: expected {expected} vertices, found {found}")]
    WrongArity {
        edge: usize,
        expected: usize,
        found: usize,
    },
    #[error("edge {edge}: duplicate vertex {vertex}")]
    DuplicateVertex { edge: usize, vertex: VertexId },
    #[error("edge {edge}: vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange {
        edge: usize,
        vertex: VertexId,
        n: usize,
    },
    #[error("partite layout has {found} entries, expected {expected}")]
    LayoutLength { expected: usize, found: usize },
    #[error("vertex {vertex} assigned to part {part}, but there are only {parts} parts")]
    PartOutOfRange {
        vertex: VertexId,
        part: u32,
        parts: usize,
    },
    #[error("edge {edge} does not have exactly one vertex in every part")]
    NotPartite { edge: usize },
}

/// An r-uniform hypergraph on vertices `0..n`.
///
/// Edges are kept in input order; that order is the canonical edge order used
/// by the greedy reduction. Vertices inside an edge are stored ascending.
/// Repeated edges are allowed and get distinct indices.
#[derive(Debug, Clone)]
pub struct Hypergraph {
    r: usize,
    n: usize,
    edges: Vec<Vec<VertexId>>,
    parts: Option<Vec<u32>>,
    incidence: Vec<Vec<EdgeIdx>>,
    neighbors: Vec<Vec<VertexId>>,
    pairs: HashMap<(VertexId, VertexId), Vec<EdgeIdx>>,
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.r == other.r
            && self.n == other.n
            && self.edges == other.edges
            && self.parts == other.parts
    }
}

impl Eq for Hypergraph {}

#[inline]
fn key(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl Hypergraph {
    pub fn new(r: usize, n: usize, edges: Vec<Vec<VertexId>>) -> Result<Self, HypergraphError> {
        if r == 0 {
            return Err(HypergraphError::ZeroUniformity);
        }
        let mut edges = edges;
        for (i, e) in edges.iter_mut().enumerate() {
            if e.len() != r {
                return Err(HypergraphError::WrongArity {
                    edge: i,
                    expected: r,
                    found: e.len(),
                });
            }
            e.sort_unstable();
            if let Some(&v) = e.iter().find(|&&v| v as usize >= n) {
                return Err(HypergraphError::VertexOutOfRange {
                    edge: i,
                    vertex: v,
                    n,
                });
            }
            if let Some(w) = e.windows(2).find(|w| w[0] == w[1]) {
                return Err(HypergraphError::DuplicateVertex {
                    edge: i,
                    vertex: w[0],
                });
            }
        }

        let mut incidence = vec![Vec::new(); n];
        let mut pairs: HashMap<(VertexId, VertexId), Vec<EdgeIdx>> = HashMap::new();
        for (i, e) in edges.iter().enumerate() {
            for (a, &u) in e.iter().enumerate() {
                incidence[u as usize].push(i);
                for &v in &e[a + 1..] {
                    pairs.entry((u, v)).or_default().push(i);
                }
            }
        }
        let mut neighbors = vec![Vec::new(); n];
        for &(u, v) in pairs.keys() {
            neighbors[u as usize].push(v);
            neighbors[v as usize].push(u);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }

        Ok(Self {
            r,
            n,
            edges,
            parts: None,
            incidence,
            neighbors,
            pairs,
        })
    }

    /// Attach an r-partite layout; every edge must meet every part once.
    pub fn with_parts(mut self, parts: Vec<u32>) -> Result<Self, HypergraphError> {
        if parts.len() != self.n {
            return Err(HypergraphError::LayoutLength {
                expected: self.n,
                found: parts.len(),
            });
        }
        if let Some((v, &p)) = parts
            .iter()
            .enumerate()
            .find(|(_, &p)| p as usize >= self.r)
        {
            return Err(HypergraphError::PartOutOfRange {
                vertex: v as VertexId,
                part: p,
                parts: self.r,
            });
        }
        let mut seen = vec![false; self.r];
        for (i, e) in self.edges.iter().enumerate() {
            seen.iter_mut().for_each(|s| *s = false);
            for &v in e {
                let p = parts[v as usize] as usize;
                if seen[p] {
                    return Err(HypergraphError::NotPartite { edge: i });
                }
                seen[p] = true;
            }
        }
        self.parts = Some(parts);
        Ok(self)
    }

    pub fn empty(r: usize, n: usize) -> Result<Self, HypergraphError> {
        Self::new(r, n, Vec::new())
    }

    pub fn uniformity(&self) -> usize {
        self.r
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<VertexId>] {
        &self.edges
    }

    pub fn edge(&self, i: EdgeIdx) -> Option<&[VertexId]> {
        self.edges.get(i).map(Vec::as_slice)
    }

    pub fn parts(&self) -> Option<&[u32]> {
        self.parts.as_deref()
    }

    /// Edge indices containing both `u` and `v`, ascending.
    pub fn pair_edges(&self, u: VertexId, v: VertexId) -> &[EdgeIdx] {
        self.pairs.get(&key(u, v)).map_or(&[], Vec::as_slice)
    }

    /// Edge indices containing `v`, ascending.
    pub fn incident_edges(&self, v: VertexId) -> &[EdgeIdx] {
        self.incidence.get(v as usize).map_or(&[], Vec::as_slice)
    }

    /// Vertices sharing at least one edge with `v`, ascending.
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        self.neighbors.get(v as usize).map_or(&[], Vec::as_slice)
    }

    pub fn edge_contains(&self, i: EdgeIdx, v: VertexId) -> bool {
        self.edges
            .get(i)
            .is_some_and(|e| e.binary_search(&v).is_ok())
    }

    /// True when some vertex set occurs as two or more edges.
    pub fn has_duplicate_edges(&self) -> bool {
        let mut seen = HashSet::with_capacity(self.edges.len());
        !self.edges.iter().all(|e| seen.insert(e.as_slice()))
    }

    /// Copy without the edges flagged in `removed`, keeping relative order
    /// and the partite layout.
    pub fn without_edges(&self, removed: &[bool]) -> Hypergraph {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| !removed.get(*i).copied().unwrap_or(false))
            .map(|(_, e)| e.clone())
            .collect();
        let mut h = Hypergraph::new(self.r, self.n, edges).expect("subset of a valid edge list");
        h.parts = self.parts.clone();
        h
    }

    pub fn validate_path(&self, w: &BergePathWitness) -> bool {
        validate_path(self, w)
    }

    pub fn validate_theta(&self, w: &ThetaWitness) -> bool {
        validate_theta(self, w)
    }
}

/// A Berge path: core vertices `v_0..v_k` and edges `h_1..h_k` with
/// `{v_(i-1), v_i}` inside `h_i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BergePathWitness {
    pub core: Vec<VertexId>,
    pub edges: Vec<EdgeIdx>,
}

impl BergePathWitness {
    pub fn new(core: Vec<VertexId>, edges: Vec<EdgeIdx>) -> Self {
        Self { core, edges }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn start(&self) -> Option<VertexId> {
        self.core.first().copied()
    }

    pub fn end(&self) -> Option<VertexId> {
        self.core.last().copied()
    }

    /// Core vertices strictly between the endpoints.
    pub fn internal(&self) -> &[VertexId] {
        if self.core.len() < 2 {
            &[]
        } else {
            &self.core[1..self.core.len() - 1]
        }
    }
}

/// `t` Berge paths of common length `k` between `x` and `y` with pairwise
/// disjoint internal core vertices and `k*t` distinct edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ThetaWitness {
    pub x: VertexId,
    pub y: VertexId,
    pub paths: Vec<BergePathWitness>,
}

fn all_distinct<T: Eq + std::hash::Hash>(items: impl IntoIterator<Item = T>) -> bool {
    let mut seen = HashSet::new();
    items.into_iter().all(|i| seen.insert(i))
}

pub fn validate_path(h: &Hypergraph, w: &BergePathWitness) -> bool {
    let k = w.edges.len();
    if k == 0 || w.core.len() != k + 1 {
        return false;
    }
    if w.core.iter().any(|&v| v as usize >= h.vertex_count()) {
        return false;
    }
    if !all_distinct(w.core.iter()) || !all_distinct(w.edges.iter()) {
        return false;
    }
    w.edges
        .iter()
        .enumerate()
        .all(|(i, &e)| h.edge_contains(e, w.core[i]) && h.edge_contains(e, w.core[i + 1]))
}

pub fn validate_theta(h: &Hypergraph, w: &ThetaWitness) -> bool {
    if w.x == w.y || w.paths.is_empty() {
        return false;
    }
    let k = w.paths[0].len();
    let shape_ok = w.paths.iter().all(|p| {
        p.len() == k && p.start() == Some(w.x) && p.end() == Some(w.y) && validate_path(h, p)
    });
    if !shape_ok {
        return false;
    }
    all_distinct(w.paths.iter().flat_map(|p| p.internal().iter()))
        && all_distinct(w.paths.iter().flat_map(|p| p.edges.iter()))
}
