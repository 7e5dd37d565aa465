//! Dense multivariate polynomials of bounded total degree over `F_p`.
//!
//! Coefficients are stored one per monomial in graded-lexicographic order:
//! monomials are sorted by total degree, and within one degree by exponent
//! vector in descending lexicographic order, so `x_1` ranks above `x_2`.
//! For two variables and degree 2 the order is
//! `1, x1, x2, x1^2, x1 x2, x2^2`.

use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::binom::binomial;
use crate::field::{FieldElement, FieldError, FieldWord, PrimeField};

/// Largest basis the crate will materialize.
pub const MAX_MONOMIALS: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("expected a point with {expected} coordinates, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("expected {expected} coefficients, got {found}")]
    CoefficientCount { expected: usize, found: usize },
    #[error("coefficient {value} at position {index} is not reduced mod {p}")]
    CoefficientOutOfRange { index: usize, value: u64, p: u64 },
    #[error("monomial {0:?} is not in the basis")]
    MonomialOutOfBasis(Vec<u16>),
    #[error("a polynomial needs at least one variable")]
    NoVariables,
    #[error("monomial basis too large ({nvars} variables, degree {degree})")]
    BasisTooLarge { nvars: usize, degree: u32 },
    #[error("grid of {required} points exceeds the budget of {budget}")]
    GridTooLarge { required: u128, budget: u64 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// `C(nvars + d, d)`, the dimension of the space of polynomials in `nvars`
/// variables with total degree at most `d`.
pub fn monomial_count(nvars: usize, d: u32) -> Option<u64> {
    binomial(nvars as u64 + d as u64, d as u64)
}

/// Exponent vectors of all monomials of degree `<= d` in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialBasis {
    nvars: usize,
    degree: u32,
    exps: Vec<u16>,
}

fn push_compositions(nvars: usize, total: u32, prefix: &mut Vec<u16>, out: &mut Vec<u16>) {
    if nvars == 0 {
        if total == 0 {
            out.extend_from_slice(prefix);
        }
        return;
    }
    if nvars == 1 {
        prefix.push(total as u16);
        out.extend_from_slice(prefix);
        prefix.pop();
        return;
    }
    for e in (0..=total).rev() {
        prefix.push(e as u16);
        push_compositions(nvars - 1, total - e, prefix, out);
        prefix.pop();
    }
}

impl MonomialBasis {
    pub fn new(nvars: usize, degree: u32) -> Result<Self, PolyError> {
        let count = monomial_count(nvars, degree)
            .filter(|&c| c <= MAX_MONOMIALS && degree <= u16::MAX as u32)
            .ok_or(PolyError::BasisTooLarge { nvars, degree })?;
        let mut exps = Vec::with_capacity(count as usize * nvars);
        let mut prefix = Vec::with_capacity(nvars);
        for total in 0..=degree {
            push_compositions(nvars, total, &mut prefix, &mut exps);
        }
        Ok(Self {
            nvars,
            degree,
            exps,
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.exps.len().checked_div(self.nvars).unwrap_or(1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn exponents(&self, i: usize) -> &[u16] {
        &self.exps[i * self.nvars..(i + 1) * self.nvars]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u16]> + '_ {
        (0..self.len()).map(move |i| self.exponents(i))
    }

    /// Position of an exponent vector in canonical order.
    pub fn index_map(&self) -> HashMap<Vec<u16>, usize> {
        self.iter()
            .enumerate()
            .map(|(i, e)| (e.to_vec(), i))
            .collect()
    }
}

/// Generator used for all polynomial sampling: ChaCha8 keyed by
/// `seed_from_u64(seed)` and switched to the given stream.
pub fn seeded_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly<W> {
    field: PrimeField<W>,
    basis: Arc<MonomialBasis>,
    coeffs: Vec<W>,
}

impl<W: FieldWord> MultiPoly<W> {
    pub fn zero(field: PrimeField<W>, basis: Arc<MonomialBasis>) -> Result<Self, PolyError> {
        if basis.nvars() == 0 {
            return Err(PolyError::NoVariables);
        }
        let coeffs = vec![W::zero(); basis.len()];
        Ok(Self {
            field,
            basis,
            coeffs,
        })
    }

    /// Coefficients listed in canonical order; each must already be `< p`.
    pub fn from_coefficients(
        field: PrimeField<W>,
        basis: Arc<MonomialBasis>,
        coeffs: &[u64],
    ) -> Result<Self, PolyError> {
        let mut poly = Self::zero(field, basis)?;
        if coeffs.len() != poly.coeffs.len() {
            return Err(PolyError::CoefficientCount {
                expected: poly.coeffs.len(),
                found: coeffs.len(),
            });
        }
        let p = field.order();
        for (i, (&c, slot)) in coeffs.iter().zip(poly.coeffs.iter_mut()).enumerate() {
            if c >= p {
                return Err(PolyError::CoefficientOutOfRange {
                    index: i,
                    value: c,
                    p,
                });
            }
            *slot = W::from(c).expect("reduced coefficient fits");
        }
        Ok(poly)
    }

    /// Builds from `(exponents, coefficient)` terms; coefficients are reduced
    /// mod `p` and repeated monomials accumulate.
    pub fn from_terms(
        field: PrimeField<W>,
        basis: Arc<MonomialBasis>,
        terms: &[(Vec<u16>, u64)],
    ) -> Result<Self, PolyError> {
        let mut poly = Self::zero(field, basis)?;
        let index = poly.basis.index_map();
        for (exps, c) in terms {
            if exps.len() != poly.nvars() {
                return Err(PolyError::DimensionMismatch {
                    expected: poly.nvars(),
                    found: exps.len(),
                });
            }
            let i = *index
                .get(exps)
                .ok_or_else(|| PolyError::MonomialOutOfBasis(exps.clone()))?;
            let c = field.element(*c).value();
            poly.coeffs[i] = poly.coeffs[i].add_mod(c, field.modulus());
        }
        Ok(poly)
    }

    /// Every coefficient independent and uniform on `F_p`, drawn in
    /// canonical monomial order.
    pub fn sample_uniform<R: Rng + ?Sized>(
        field: PrimeField<W>,
        basis: Arc<MonomialBasis>,
        rng: &mut R,
    ) -> Result<Self, PolyError> {
        let mut poly = Self::zero(field, basis)?;
        let p = field.order();
        for c in poly.coeffs.iter_mut() {
            *c = W::from(rng.gen_range(0..p)).expect("residue fits");
        }
        Ok(poly)
    }

    pub fn field(&self) -> PrimeField<W> {
        self.field
    }

    pub fn basis(&self) -> &Arc<MonomialBasis> {
        &self.basis
    }

    pub fn nvars(&self) -> usize {
        self.basis.nvars()
    }

    pub fn degree(&self) -> u32 {
        self.basis.degree()
    }

    pub fn coefficients(&self) -> &[W] {
        &self.coeffs
    }

    fn check_point(&self, point: &[FieldElement<W>]) -> Result<(), PolyError> {
        if point.len() != self.nvars() {
            return Err(PolyError::DimensionMismatch {
                expected: self.nvars(),
                found: point.len(),
            });
        }
        let p = self.field.modulus();
        if let Some(bad) = point.iter().find(|x| x.modulus() != p) {
            return Err(FieldError::ModulusMismatch {
                left: p.to_u64_lossless(),
                right: bad.modulus().to_u64_lossless(),
            }
            .into());
        }
        Ok(())
    }

    /// Term-by-term evaluation.
    pub fn evaluate(&self, point: &[FieldElement<W>]) -> Result<FieldElement<W>, PolyError> {
        self.check_point(point)?;
        let mut acc = self.field.zero();
        for (c, exps) in self.coeffs.iter().zip(self.basis.iter()) {
            let mut term = self.field.element(c.to_u64_lossless());
            for (x, &e) in point.iter().zip(exps) {
                term = term * x.pow(e as u64);
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    fn evaluate_with_table(&self, table: &[W]) -> W {
        let p = self.field.modulus();
        let stride = self.degree() as usize + 1;
        let mut acc = W::zero();
        for (&c, exps) in self.coeffs.iter().zip(self.basis.iter()) {
            if c.is_zero() {
                continue;
            }
            let mut term = c;
            for (j, &e) in exps.iter().enumerate() {
                if e != 0 {
                    term = term.mul_mod(table[j * stride + e as usize], p);
                }
            }
            acc = acc.add_mod(term, p);
        }
        acc
    }

    fn power_table(&self, point: &[FieldElement<W>], table: &mut Vec<W>) {
        let p = self.field.modulus();
        let d = self.degree() as usize;
        table.clear();
        for x in point {
            let mut pw = W::one();
            for _ in 0..=d {
                table.push(pw);
                pw = pw.mul_mod(x.value(), p);
            }
        }
    }

    /// Evaluate at many points in parallel. Each point gets a table of
    /// `x_j^0..x_j^d`, so a monomial costs at most `nvars` multiplications.
    pub fn evaluate_batch<P>(&self, points: &[P]) -> Result<Vec<FieldElement<W>>, PolyError>
    where
        P: AsRef<[FieldElement<W>]> + Sync,
    {
        for pt in points {
            self.check_point(pt.as_ref())?;
        }
        Ok(points
            .par_iter()
            .map_init(Vec::new, |table, pt| {
                self.power_table(pt.as_ref(), table);
                self.field
                    .element(self.evaluate_with_table(table).to_u64_lossless())
            })
            .collect())
    }

    /// Values at every point of `F_p^nvars`; see [`GridPlan`].
    pub fn evaluate_grid(&self, budget: u64) -> Result<Vec<W>, PolyError> {
        GridPlan::new(self.basis.clone())?.evaluate(self, budget)
    }
}

/// Precomputed substitution maps for evaluating polynomials on the full grid
/// `F_p^nvars`.
///
/// Variables are fixed one at a time: substituting `x_1 = a` into a
/// polynomial in `n` variables of degree `<= d` yields one in `n - 1`
/// variables of degree `<= d`, and each monomial's contribution goes to a
/// precomputed slot. The total work is `sum_l p^l * C(n - l + d, d)` rather
/// than `p^n * C(n + d, d)`.
///
/// Output index of the point `(x_1, .., x_n)` is `sum_j x_j p^(n - j)`, so
/// `x_1` is the most significant digit.
#[derive(Debug, Clone)]
pub struct GridPlan {
    basis: Arc<MonomialBasis>,
    /// Per level: exponent of the variable being fixed, and the rank of the
    /// remaining exponent vector in the next level's basis.
    levels: Vec<(Vec<u16>, Vec<u32>)>,
    sizes: Vec<usize>,
}

impl GridPlan {
    pub fn new(basis: Arc<MonomialBasis>) -> Result<Self, PolyError> {
        let n = basis.nvars();
        if n == 0 {
            return Err(PolyError::NoVariables);
        }
        let d = basis.degree();
        let mut bases = vec![(*basis).clone()];
        for l in 1..=n {
            bases.push(MonomialBasis::new(n - l, d)?);
        }
        let mut levels = Vec::with_capacity(n);
        for l in 0..n {
            let next = bases[l + 1].index_map();
            let (mut heads, mut tails) = (Vec::new(), Vec::new());
            for exps in bases[l].iter() {
                heads.push(exps[0]);
                tails.push(next[&exps[1..].to_vec()] as u32);
            }
            levels.push((heads, tails));
        }
        let sizes = bases.iter().map(MonomialBasis::len).collect();
        Ok(Self {
            basis,
            levels,
            sizes,
        })
    }

    pub fn basis(&self) -> &Arc<MonomialBasis> {
        &self.basis
    }

    fn substitute<W: FieldWord>(
        &self,
        level: usize,
        coeffs: &[W],
        powers: &[W],
        p: W,
        out: &mut [W],
    ) {
        let (heads, tails) = &self.levels[level];
        out.iter_mut().for_each(|o| *o = W::zero());
        for ((&c, &h), &t) in coeffs.iter().zip(heads).zip(tails) {
            if c.is_zero() {
                continue;
            }
            let slot = &mut out[t as usize];
            *slot = slot.add_mod(c.mul_mod(powers[h as usize], p), p);
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn descend<W: FieldWord>(
        &self,
        level: usize,
        coeffs: &[W],
        out: &mut [W],
        scratch: &mut [Vec<W>],
        powers: &[Vec<W>],
        p: W,
    ) {
        let n = self.basis.nvars();
        if level == n {
            out[0] = coeffs[0];
            return;
        }
        let stride = out.len() / powers.len();
        let (buf, rest) = scratch.split_first_mut().expect("one buffer per level");
        for (a, chunk) in out.chunks_mut(stride).enumerate() {
            self.substitute(level, coeffs, &powers[a], p, buf);
            self.descend(level + 1, buf, chunk, rest, powers, p);
        }
    }

    /// Values of `poly` on the whole grid, refusing when `p^nvars > budget`.
    pub fn evaluate<W: FieldWord>(
        &self,
        poly: &MultiPoly<W>,
        budget: u64,
    ) -> Result<Vec<W>, PolyError> {
        assert!(
            Arc::ptr_eq(&self.basis, poly.basis()) || *self.basis == **poly.basis(),
            "plan built for a different monomial basis"
        );
        let n = self.basis.nvars();
        let q = poly.field().order();
        let required = (q as u128).pow(n as u32);
        if required > budget as u128 {
            return Err(PolyError::GridTooLarge { required, budget });
        }
        let p = poly.field().modulus();
        let d = self.basis.degree() as u64;
        let powers: Vec<Vec<W>> = (0..q)
            .map(|a| {
                let a = W::from(a).expect("residue fits");
                (0..=d).map(|e| poly.field().pow_raw(a, e)).collect()
            })
            .collect();
        let mut out = vec![W::zero(); required as usize];
        let stride = out.len() / q as usize;
        out.par_chunks_mut(stride)
            .enumerate()
            .for_each(|(a, chunk)| {
                let mut scratch: Vec<Vec<W>> = self.sizes[1..]
                    .iter()
                    .map(|&s| vec![W::zero(); s])
                    .collect();
                let (first, rest) = scratch.split_first_mut().expect("n >= 1");
                self.substitute(0, poly.coefficients(), &powers[a], p, first);
                self.descend(1, first, chunk, rest, &powers, p);
            });
        Ok(out)
    }
}
