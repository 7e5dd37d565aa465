//! Berge paths and Berge theta graphs in uniform hypergraphs.
//!
//! * [`hypergraph`]: r-uniform multihypergraphs, Berge path/theta witnesses.
//! * [`search`]: path counting and theta search; [`oracle`] is an independent
//!   brute-force reference for small instances.
//! * [`reduction`]: greedy reduction to an m-uniform multigraph with the
//!   multiplicity bound and witness lifting.
//! * [`field`], [`poly`]: prime fields and dense bounded-degree polynomials,
//!   generic over the residue word type.
//! * [`construction`]: random polynomial hypergraphs, path censuses, bad
//!   pairs and repair.
//! * [`io`]: text formats for hypergraphs, reduced graphs and polynomials.

pub mod binom;
pub mod construction;
pub mod field;
pub mod hypergraph;
pub mod io;
pub mod oracle;
pub mod poly;
pub mod reduction;
pub mod search;

pub use field::{FieldElement, FieldError, FieldWord, PrimeField};
pub use hypergraph::{
    BergePathWitness, EdgeIdx, Hypergraph, HypergraphError, ThetaWitness, VertexId,
};
pub use poly::{GridPlan, MonomialBasis, MultiPoly, PolyError};
pub use reduction::{multiplicity_bound, reduce, ReducedGraph, ReductionParams, TieBreak};
pub use search::{
    count_paths, enumerate_paths, find_theta, is_theta_free, PathCount, PathQuery, SearchError,
    SearchLimits, ThetaSearch,
};

/// Residues stored in 32-bit words; used by the constructions.
pub type Fp32 = FieldElement<u32>;
pub type Fp64 = FieldElement<u64>;
pub type Field32 = PrimeField<u32>;
pub type Field64 = PrimeField<u64>;
pub type Poly32 = MultiPoly<u32>;
pub type Poly64 = MultiPoly<u64>;
