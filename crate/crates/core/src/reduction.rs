//! Greedy reduction of an r-uniform hypergraph to an m-uniform multigraph.
//!
//! Hyperedges are visited in their stored order. Each contributes one of its
//! m-subsets: the one chosen the fewest times so far. If the source has no
//! Berge theta with `t` paths of length `k`, every m-set ends up with
//! multiplicity at most [`multiplicity_bound`]`(k, t, r, m)`, and the reduced
//! multigraph has no such theta either, since any theta in it lifts back to
//! the source through the chosen hyperedges.

use std::collections::{BTreeMap, HashMap};

use num_traits::PrimInt;
use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::binom::binomial;
use crate::hypergraph::{BergePathWitness, EdgeIdx, Hypergraph, ThetaWitness, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("target uniformity m = {m} must satisfy 2 <= m < r = {r}")]
    InvalidUniformity { m: usize, r: usize },
    #[error("invalid bound parameters: {0}")]
    InvalidBoundParams(&'static str),
    #[error("multiplicity bound overflows the requested integer type")]
    Overflow,
    #[error("witness is not a valid theta in the reduced multigraph")]
    InvalidWitness,
    #[error("reduced graph is inconsistent: {0}")]
    Inconsistent(String),
}

/// Rule for choosing among m-subsets that share the minimum multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum TieBreak {
    /// Lexicographically least m-set.
    #[default]
    Lexicographic,
    /// Uniform choice among the tied m-sets, from a seeded ChaCha8 stream.
    Random { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReductionParams {
    pub m: usize,
    pub tie_break: TieBreak,
}

impl ReductionParams {
    pub fn new(m: usize) -> Self {
        Self {
            m,
            tie_break: TieBreak::Lexicographic,
        }
    }

    pub fn with_tie_break(mut self, tie_break: TieBreak) -> Self {
        self.tie_break = tie_break;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub m_set: Vec<VertexId>,
    pub source_edge: EdgeIdx,
}

/// The m-uniform multigraph: one instance per source hyperedge, in source
/// order, each a subset of its source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedGraph {
    m: usize,
    n: usize,
    instances: Vec<Instance>,
    multiplicity: BTreeMap<Vec<VertexId>, u64>,
}

impl ReducedGraph {
    /// Rebuild from stored parts (e.g. a parsed file), checking consistency.
    pub fn from_instances(
        m: usize,
        n: usize,
        instances: Vec<Instance>,
    ) -> Result<Self, ReductionError> {
        let mut multiplicity = BTreeMap::new();
        for (i, inst) in instances.iter().enumerate() {
            if inst.m_set.len() != m
                || inst.m_set.windows(2).any(|w| w[0] >= w[1])
                || inst.m_set.iter().any(|&v| v as usize >= n)
            {
                return Err(ReductionError::Inconsistent(format!(
                    "instance {i} is not a sorted {m}-set of vertices below {n}"
                )));
            }
            *multiplicity.entry(inst.m_set.clone()).or_insert(0) += 1;
        }
        Ok(Self {
            m,
            n,
            instances,
            multiplicity,
        })
    }

    pub fn uniformity(&self) -> usize {
        self.m
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    pub fn multiplicity(&self, m_set: &[VertexId]) -> u64 {
        self.multiplicity.get(m_set).copied().unwrap_or(0)
    }

    /// Every distinct m-set with its number of instances.
    pub fn multiplicities(&self) -> &BTreeMap<Vec<VertexId>, u64> {
        &self.multiplicity
    }

    pub fn max_multiplicity(&self) -> u64 {
        self.multiplicity.values().copied().max().unwrap_or(0)
    }

    /// The instances as an m-uniform multihypergraph; edge `i` is instance `i`.
    pub fn to_hypergraph(&self) -> Hypergraph {
        let edges = self.instances.iter().map(|i| i.m_set.clone()).collect();
        Hypergraph::new(self.m, self.n, edges).expect("instances are valid m-sets")
    }
}

/// All `m`-subsets of a sorted slice, in lexicographic order.
pub fn m_subsets(items: &[VertexId], m: usize) -> Vec<Vec<VertexId>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..m).collect();
    let len = items.len();
    if m > len {
        return out;
    }
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let Some(pos) = (0..m).rev().find(|&i| idx[i] != i + len - m) else {
            break;
        };
        idx[pos] += 1;
        for j in pos + 1..m {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out
}

pub fn reduce(h: &Hypergraph, params: &ReductionParams) -> Result<ReducedGraph, ReductionError> {
    let (m, r) = (params.m, h.uniformity());
    if m < 2 || m >= r {
        return Err(ReductionError::InvalidUniformity { m, r });
    }
    let mut rng = match params.tie_break {
        TieBreak::Random { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
        TieBreak::Lexicographic => None,
    };
    let mut counts: HashMap<Vec<VertexId>, u64> = HashMap::new();
    let mut instances = Vec::with_capacity(h.edge_count());
    for (i, edge) in h.edges().iter().enumerate() {
        let candidates = m_subsets(edge, m);
        let least = candidates
            .iter()
            .map(|c| counts.get(c).copied().unwrap_or(0))
            .min()
            .expect("an r-set has at least one m-subset");
        let tied: Vec<&Vec<VertexId>> = candidates
            .iter()
            .filter(|c| counts.get(*c).copied().unwrap_or(0) == least)
            .collect();
        let pick = match rng.as_mut() {
            Some(rng) => *tied.choose(rng).expect("nonempty"),
            None => tied[0],
        };
        *counts.entry(pick.clone()).or_insert(0) += 1;
        instances.push(Instance {
            m_set: pick.clone(),
            source_edge: i,
        });
    }
    Ok(ReducedGraph {
        m,
        n: h.vertex_count(),
        instances,
        multiplicity: counts.into_iter().collect(),
    })
}

/// `sum_{j=1}^{k+1} C(m k (t-1) + j m - m, r - m) + k + 1`, computed exactly
/// in `T` with `C(a, b) = 0` for `a < b`.
pub fn multiplicity_bound<T: PrimInt>(
    k: usize,
    t: usize,
    r: usize,
    m: usize,
) -> Result<T, ReductionError> {
    if k < 2 {
        return Err(ReductionError::InvalidBoundParams("k must be at least 2"));
    }
    if t < 1 {
        return Err(ReductionError::InvalidBoundParams("t must be at least 1"));
    }
    if m < 2 || m >= r {
        return Err(ReductionError::InvalidUniformity { m, r });
    }
    let (k, t, r, m) = (k as u64, t as u64, r as u64, m as u64);
    let base = m
        .checked_mul(k)
        .and_then(|v| v.checked_mul(t - 1))
        .ok_or(ReductionError::Overflow)?;
    let mut total = T::from(k + 1).ok_or(ReductionError::Overflow)?;
    for j in 1..=k + 1 {
        let top = base
            .checked_add((j - 1) * m)
            .ok_or(ReductionError::Overflow)?;
        let term: T = binomial(top, r - m).ok_or(ReductionError::Overflow)?;
        total = total.checked_add(&term).ok_or(ReductionError::Overflow)?;
    }
    Ok(total)
}

/// Replace every instance in a theta over `g` by its source hyperedge.
pub fn lift_theta(g: &ReducedGraph, w: &ThetaWitness) -> Result<ThetaWitness, ReductionError> {
    if !g.to_hypergraph().validate_theta(w) {
        return Err(ReductionError::InvalidWitness);
    }
    let paths = w
        .paths
        .iter()
        .map(|p| {
            BergePathWitness::new(
                p.core.clone(),
                p.edges
                    .iter()
                    .map(|&e| g.instances[e].source_edge)
                    .collect(),
            )
        })
        .collect();
    Ok(ThetaWitness {
        x: w.x,
        y: w.y,
        paths,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_in_lex_order() {
        assert_eq!(
            m_subsets(&[0, 1, 2], 2),
            vec![vec![0, 1], vec![0, 2], vec![1, 2]]
        );
        assert_eq!(m_subsets(&[3, 5, 7, 9], 3).len(), 4);
        assert!(m_subsets(&[1], 2).is_empty());
    }

    #[test]
    fn first_choice_is_lex_least() {
        let h = Hypergraph::new(3, 3, vec![vec![0, 1, 2]]).unwrap();
        let g = reduce(&h, &ReductionParams::new(2)).unwrap();
        assert_eq!(
            g.instances(),
            &[Instance {
                m_set: vec![0, 1],
                source_edge: 0
            }]
        );
    }

    #[test]
    fn repeated_edge_avoids_used_pair() {
        let h = Hypergraph::new(3, 3, vec![vec![0, 1, 2], vec![0, 1, 2]]).unwrap();
        let g = reduce(&h, &ReductionParams::new(2)).unwrap();
        assert_eq!(g.instances()[1].m_set, vec![0, 2]);
        assert_eq!(g.instances()[1].source_edge, 1);
    }

    #[test]
    fn twenty_copies_balance() {
        let h = Hypergraph::new(3, 3, vec![vec![0, 1, 2]; 20]).unwrap();
        let g = reduce(&h, &ReductionParams::new(2)).unwrap();
        // Round-robin over three pairs: 7, 7, 6.
        assert_eq!(g.multiplicity(&[0, 1]), 7);
        assert_eq!(g.multiplicity(&[0, 2]), 7);
        assert_eq!(g.multiplicity(&[1, 2]), 6);
        let g = reduce(
            &h,
            &ReductionParams::new(2).with_tie_break(TieBreak::Random { seed: 9 }),
        )
        .unwrap();
        for c in g.multiplicities().values() {
            assert!((6..=7).contains(c));
        }
    }

    #[test]
    fn invalid_m() {
        let h = Hypergraph::new(3, 3, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(
            reduce(&h, &ReductionParams::new(3)),
            Err(ReductionError::InvalidUniformity { m: 3, r: 3 })
        );
        assert!(reduce(&h, &ReductionParams::new(1)).is_err());
    }

    #[test]
    fn bound_values() {
        assert_eq!(multiplicity_bound::<u64>(2, 1, 3, 2), Ok(9));
        assert_eq!(multiplicity_bound::<u64>(2, 2, 3, 2), Ok(21));
        assert_eq!(multiplicity_bound::<u32>(2, 2, 4, 2), Ok(52));
        assert_eq!(
            multiplicity_bound::<u8>(40, 40, 12, 2),
            Err(ReductionError::Overflow)
        );
        assert!(multiplicity_bound::<u64>(1, 2, 3, 2).is_err());
        assert!(multiplicity_bound::<u64>(2, 0, 3, 2).is_err());
        assert!(multiplicity_bound::<u64>(2, 2, 3, 3).is_err());
    }

    #[test]
    fn lift_c4() {
        // Four triangles whose reduced pairs form the 4-cycle 0-1-2-3.
        let h = Hypergraph::new(
            3,
            8,
            vec![vec![0, 1, 4], vec![1, 2, 5], vec![2, 3, 6], vec![0, 3, 7]],
        )
        .unwrap();
        let g = reduce(&h, &ReductionParams::new(2)).unwrap();
        let pairs: Vec<_> = g.instances().iter().map(|i| i.m_set.clone()).collect();
        assert_eq!(pairs, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]]);
        let w = ThetaWitness {
            x: 0,
            y: 2,
            paths: vec![
                BergePathWitness::new(vec![0, 1, 2], vec![0, 1]),
                BergePathWitness::new(vec![0, 3, 2], vec![3, 2]),
            ],
        };
        let lifted = lift_theta(&g, &w).unwrap();
        assert!(h.validate_theta(&lifted));
        assert_eq!(lifted.paths[1].edges, vec![3, 2]);

        let reuse = ThetaWitness {
            x: 0,
            y: 2,
            paths: vec![
                BergePathWitness::new(vec![0, 1, 2], vec![0, 1]),
                BergePathWitness::new(vec![0, 3, 2], vec![0, 2]),
            ],
        };
        assert_eq!(lift_theta(&g, &reuse), Err(ReductionError::InvalidWitness));
    }
}
