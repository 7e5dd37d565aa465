//! Brute-force reference counts for small hypergraphs.
//!
//! Nothing here shares code with [`crate::search`]: paths are found by
//! running over every sequence of distinct edge indices and then every
//! choice of core vertices compatible with it, and thetas by checking
//! pairwise compatibility over the full path list of each endpoint pair.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::hypergraph::{Hypergraph, VertexId};

pub const MAX_VERTICES: usize = 10;
pub const MAX_EDGES: usize = 14;
/// Upper limit on the number of ordered edge sequences visited per call.
pub const MAX_EDGE_SEQUENCES: u64 = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(
        "instance too large for the brute-force oracle (n = {n}, m = {m}, k = {k}; \
         limits n <= {MAX_VERTICES}, m <= {MAX_EDGES})"
    )]
    TooLarge { n: usize, m: usize, k: usize },
    #[error("invalid oracle query: {0}")]
    InvalidQuery(&'static str),
}

/// A path as (core vertices, edge indices).
pub type RawPath = (Vec<VertexId>, Vec<usize>);

fn falling_factorial(m: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(m.saturating_sub(i)))
}

fn check_size(h: &Hypergraph, k: usize) -> Result<(), OracleError> {
    let (n, m) = (h.vertex_count(), h.edge_count());
    if n > MAX_VERTICES
        || m > MAX_EDGES
        || falling_factorial(m as u64, k as u64) > MAX_EDGE_SEQUENCES
    {
        return Err(OracleError::TooLarge { n, m, k });
    }
    Ok(())
}

fn member(edge: &[VertexId], v: VertexId) -> bool {
    edge.contains(&v)
}

/// Every Berge path of length `k` in `h` (all endpoint pairs, both
/// directions), passed to `emit`.
fn all_paths(h: &Hypergraph, k: usize, emit: &mut dyn FnMut(&[VertexId], &[usize])) {
    let m = h.edge_count();
    let mut seq: Vec<usize> = Vec::with_capacity(k);
    let mut used = vec![false; m];
    edge_sequences(h, k, &mut seq, &mut used, emit);
}

fn edge_sequences(
    h: &Hypergraph,
    k: usize,
    seq: &mut Vec<usize>,
    used: &mut [bool],
    emit: &mut dyn FnMut(&[VertexId], &[usize]),
) {
    if seq.len() == k {
        let mut core = Vec::with_capacity(k + 1);
        vertex_choices(h, seq, &mut core, emit);
        return;
    }
    for e in 0..used.len() {
        if used[e] {
            continue;
        }
        used[e] = true;
        seq.push(e);
        edge_sequences(h, k, seq, used, emit);
        seq.pop();
        used[e] = false;
    }
}

/// Choose `v_0..v_k` over all `n` vertices, keeping only choices with
/// `v_i` in both neighboring edges and all vertices distinct.
fn vertex_choices(
    h: &Hypergraph,
    seq: &[usize],
    core: &mut Vec<VertexId>,
    emit: &mut dyn FnMut(&[VertexId], &[usize]),
) {
    let i = core.len();
    let k = seq.len();
    if i == k + 1 {
        emit(core, seq);
        return;
    }
    for v in 0..h.vertex_count() as VertexId {
        if core.contains(&v) {
            continue;
        }
        let in_prev = i == 0 || member(&h.edges()[seq[i - 1]], v);
        let in_next = i == k || member(&h.edges()[seq[i]], v);
        if in_prev && in_next {
            core.push(v);
            vertex_choices(h, seq, core, emit);
            core.pop();
        }
    }
}

/// Path counts for every ordered pair `(x, y)` with at least one path.
pub fn oracle_path_table(
    h: &Hypergraph,
    k: usize,
) -> Result<BTreeMap<(VertexId, VertexId), u64>, OracleError> {
    if k == 0 {
        return Err(OracleError::InvalidQuery("k must be at least 1"));
    }
    check_size(h, k)?;
    let mut table = BTreeMap::new();
    all_paths(h, k, &mut |core, _| {
        *table.entry((core[0], core[k])).or_insert(0) += 1;
    });
    Ok(table)
}

pub fn oracle_count_paths(
    h: &Hypergraph,
    x: VertexId,
    y: VertexId,
    k: usize,
) -> Result<u64, OracleError> {
    if x == y {
        return Err(OracleError::InvalidQuery("endpoints must differ"));
    }
    Ok(oracle_path_table(h, k)?.get(&(x, y)).copied().unwrap_or(0))
}

/// All paths from `x` to `y`, sorted.
pub fn oracle_paths(
    h: &Hypergraph,
    x: VertexId,
    y: VertexId,
    k: usize,
) -> Result<Vec<RawPath>, OracleError> {
    if k == 0 {
        return Err(OracleError::InvalidQuery("k must be at least 1"));
    }
    check_size(h, k)?;
    let mut out = Vec::new();
    all_paths(h, k, &mut |core, edges| {
        if core[0] == x && core[k] == y {
            out.push((core.to_vec(), edges.to_vec()));
        }
    });
    out.sort();
    Ok(out)
}

fn compatible(a: &RawPath, b: &RawPath) -> bool {
    let k = a.1.len();
    let a_int = &a.0[1..k];
    let b_int = &b.0[1..k];
    a_int.iter().all(|v| !b_int.contains(v)) && a.1.iter().all(|e| !b.1.contains(e))
}

fn has_clique(compat: &[Vec<bool>], size: usize, start: usize, chosen: &mut Vec<usize>) -> bool {
    if chosen.len() == size {
        return true;
    }
    for i in start..compat.len() {
        if chosen.iter().all(|&j| compat[i][j]) {
            chosen.push(i);
            if has_clique(compat, size, i + 1, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// Whether some pair has `t` length-`k` paths with disjoint internal core
/// vertices and pairwise distinct edges.
pub fn oracle_has_theta(h: &Hypergraph, k: usize, t: usize) -> Result<bool, OracleError> {
    if k == 0 || t == 0 {
        return Err(OracleError::InvalidQuery("k and t must be at least 1"));
    }
    check_size(h, k)?;
    // The t paths need t(k - 1) distinct internal vertices besides x and y.
    if t * (k - 1) + 2 > h.vertex_count() {
        return Ok(false);
    }
    let mut by_pair: BTreeMap<(VertexId, VertexId), Vec<RawPath>> = BTreeMap::new();
    all_paths(h, k, &mut |core, edges| {
        if core[0] < core[k] {
            by_pair
                .entry((core[0], core[k]))
                .or_default()
                .push((core.to_vec(), edges.to_vec()));
        }
    });
    for paths in by_pair.values() {
        if paths.len() < t {
            continue;
        }
        let compat: Vec<Vec<bool>> = paths
            .iter()
            .map(|a| paths.iter().map(|b| compatible(a, b)).collect())
            .collect();
        if has_clique(&compat, t, 0, &mut Vec::with_capacity(t)) {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(len: u32) -> Hypergraph {
        let edges = (0..len).map(|i| vec![i, (i + 1) % len]).collect();
        Hypergraph::new(2, len as usize, edges).unwrap()
    }

    #[test]
    fn reference_counts() {
        let h = Hypergraph::new(3, 3, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(oracle_count_paths(&h, 0, 1, 1).unwrap(), 1);
        assert_eq!(oracle_count_paths(&cycle(4), 0, 2, 2).unwrap(), 2);
        assert_eq!(oracle_count_paths(&cycle(4), 0, 1, 2).unwrap(), 0);
    }

    #[test]
    fn reference_thetas() {
        assert!(oracle_has_theta(&cycle(4), 2, 2).unwrap());
        assert!(!oracle_has_theta(&cycle(4), 2, 3).unwrap());
        assert!(oracle_has_theta(&cycle(6), 3, 2).unwrap());
        let single = Hypergraph::new(3, 3, vec![vec![0, 1, 2]]).unwrap();
        for k in 2..=3 {
            for t in 2..=3 {
                assert!(!oracle_has_theta(&single, k, t).unwrap());
            }
        }
    }

    #[test]
    fn refuses_large_instances() {
        let h = Hypergraph::empty(2, 11).unwrap();
        assert!(matches!(
            oracle_has_theta(&h, 2, 2),
            Err(OracleError::TooLarge { n: 11, .. })
        ));
    }

    #[test]
    fn theta_implies_enough_paths() {
        let h = cycle(6);
        let table = oracle_path_table(&h, 3).unwrap();
        assert!(table.values().any(|&c| c >= 2));
    }
}
