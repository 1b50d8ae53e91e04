//! Exact semigroup arithmetic: membership, factorizations, the semigroup
//! partial order, lattice membership and simpliciality validation.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SemigroupError {
    #[error("generators do not span a simplicial cone")]
    NotSimplicial,
    #[error("integer span of the generators has rank {found}, expected {expected}")]
    RankDeficient { found: usize, expected: usize },
    #[error("generator {index} is redundant")]
    RedundantGenerator { index: usize },
    #[error("element has dimension {found}, expected {expected}")]
    DimensionMismatch { found: usize, expected: usize },
    #[error("pos(B) differs from pos(A); the Apery set would be infinite")]
    ConeMismatch,
}

/// An element of `N^d`, with arbitrary-precision coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SElement(pub Vec<BigInt>);

impl SElement {
    pub fn from_i64(coords: &[i64]) -> Self {
        assert!(coords.iter().all(|&c| c >= 0), "coordinates must be non-negative");
        SElement(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        SElement(vec![BigInt::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn norm1(&self) -> BigInt {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &SElement) -> SElement {
        SElement(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference, `None` when any coordinate would go negative.
    pub fn checked_sub(&self, other: &SElement) -> Option<SElement> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            let diff = a - b;
            if diff.is_negative() {
                return None;
            }
            out.push(diff);
        }
        Some(SElement(out))
    }

    /// Signed difference as a plain integer vector.
    pub fn signed_sub(&self, other: &SElement) -> Vec<BigInt> {
        self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()
    }

    pub fn scale(&self, k: &BigInt) -> SElement {
        SElement(self.0.iter().map(|c| c * k).collect())
    }

    pub fn to_u32_coords(&self) -> Option<Vec<u32>> {
        self.0.iter().map(|c| c.to_u32()).collect()
    }

    pub fn from_u32_coords(coords: &[u32]) -> Self {
        SElement(coords.iter().map(|&c| BigInt::from(c)).collect())
    }
}

impl fmt::Display for SElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// An expression of an element as an `N`-combination of the generators.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Factorization(pub Vec<BigInt>);

impl Factorization {
    /// Recompute the target element `A u`.
    pub fn evaluate(&self, desc: &SemigroupDescriptor) -> SElement {
        let mut acc = SElement::zero(desc.ambient_dim);
        for (u, g) in self.0.iter().zip(&desc.generators) {
            if !u.is_zero() {
                acc = acc.add(&g.scale(u));
            }
        }
        acc
    }
}

/// A validated simplicial affine semigroup: minimal generators in fixed order
/// plus the detected set of extremal-ray representatives.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemigroupDescriptor {
    pub generators: Vec<SElement>,
    pub extremal_indices: Vec<usize>,
    pub ambient_dim: usize,
    pub num_gens: usize,
    /// Generator indices in descending 1-norm order; branch-and-bound order.
    bb_order: Vec<usize>,
}

impl SemigroupDescriptor {
    pub fn extremal_generators(&self) -> Vec<SElement> {
        self.extremal_indices.iter().map(|&i| self.generators[i].clone()).collect()
    }

    pub fn non_extremal_indices(&self) -> Vec<usize> {
        (0..self.num_gens).filter(|i| !self.extremal_indices.contains(i)).collect()
    }

    /// 1-norms of the generators; the natural grading weights.
    pub fn grading_weights(&self) -> Vec<BigInt> {
        self.generators.iter().map(|g| g.norm1()).collect()
    }

    pub fn check_dim(&self, b: &SElement) -> Result<(), SemigroupError> {
        if b.dim() != self.ambient_dim {
            return Err(SemigroupError::DimensionMismatch {
                found: b.dim(),
                expected: self.ambient_dim,
            });
        }
        Ok(())
    }
}

/// Validate a generating set and detect the extremal rays.
///
/// Every d-subset is tested for Q-linear independence together with
/// containment of all generators in its non-negative span; among valid
/// subsets the one whose members are component-wise smallest on their rays
/// is selected.
pub fn validate_simplicial(generators: &[SElement]) -> Result<SemigroupDescriptor, SemigroupError> {
    assert!(!generators.is_empty(), "at least one generator required");
    let d = generators[0].dim();
    let e = generators.len();
    for g in generators {
        if g.dim() != d {
            return Err(SemigroupError::DimensionMismatch { found: g.dim(), expected: d });
        }
        if g.is_zero() {
            return Err(SemigroupError::RedundantGenerator {
                index: generators.iter().position(|h| h.is_zero()).unwrap(),
            });
        }
    }
    for i in 0..e {
        for j in i + 1..e {
            if generators[i] == generators[j] {
                return Err(SemigroupError::RedundantGenerator { index: j });
            }
        }
    }
    let rows: Vec<Vec<BigInt>> = generators.iter().map(|g| g.0.clone()).collect();
    let rank = linalg::rank_bigint(rows);
    if rank != d {
        return Err(SemigroupError::RankDeficient { found: rank, expected: d });
    }

    let mut valid_subsets: Vec<Vec<usize>> = Vec::new();
    for subset in k_subsets(e, d) {
        if subset_spans_all(generators, &subset) {
            valid_subsets.push(subset);
        }
    }
    if valid_subsets.is_empty() {
        return Err(SemigroupError::NotSimplicial);
    }
    // Pick the subset whose members are component-wise smallest on their rays.
    let chosen = valid_subsets
        .iter()
        .find(|subset| {
            subset.iter().all(|&i| {
                generators.iter().enumerate().all(|(j, h)| {
                    j == i || !on_same_ray(&generators[i], h) || !is_componentwise_less(h, &generators[i])
                })
            })
        })
        .ok_or(SemigroupError::NotSimplicial)?
        .clone();

    let desc = SemigroupDescriptor {
        generators: generators.to_vec(),
        extremal_indices: chosen,
        ambient_dim: d,
        num_gens: e,
        bb_order: bb_order(generators),
    };
    // Minimality: no generator is an N-combination of the others.
    for i in 0..e {
        let others: Vec<SElement> =
            (0..e).filter(|&j| j != i).map(|j| generators[j].clone()).collect();
        if !others.is_empty() && member_of(&others, &generators[i]) {
            return Err(SemigroupError::RedundantGenerator { index: i });
        }
    }
    Ok(desc)
}

fn bb_order(generators: &[SElement]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..generators.len()).collect();
    order.sort_by(|&a, &b| {
        generators[b].norm1().cmp(&generators[a].norm1()).then(a.cmp(&b))
    });
    order
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn subset_spans_all(generators: &[SElement], subset: &[usize]) -> bool {
    let d = generators[0].dim();
    let a: Vec<Vec<BigRational>> = (0..d)
        .map(|r| {
            subset
                .iter()
                .map(|&c| BigRational::from_integer(generators[c].0[r].clone()))
                .collect()
        })
        .collect();
    for g in generators {
        let b: Vec<BigRational> =
            g.0.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        match linalg::solve_rational(&a, &b) {
            None => return false, // subset not linearly independent
            Some(x) => {
                if x.iter().any(|c| c.is_negative()) {
                    return false;
                }
            }
        }
    }
    true
}

fn on_same_ray(a: &SElement, b: &SElement) -> bool {
    // a, b nonzero; same ray iff cross-ratios agree: a_i * b_j == a_j * b_i.
    let d = a.dim();
    for i in 0..d {
        for j in i + 1..d {
            if &a.0[i] * &b.0[j] != &a.0[j] * &b.0[i] {
                return false;
            }
        }
    }
    true
}

fn is_componentwise_less(a: &SElement, b: &SElement) -> bool {
    a != b && a.0.iter().zip(&b.0).all(|(x, y)| x <= y)
}

/// Decide `b` in the monoid generated by `gens` by exhaustive branch-and-bound.
pub fn member_of(gens: &[SElement], b: &SElement) -> bool {
    let order = bb_order(gens);
    bb_search(gens, &order, 0, b.clone())
}

/// `b \in S`?
pub fn member(desc: &SemigroupDescriptor, b: &SElement) -> Result<bool, SemigroupError> {
    desc.check_dim(b)?;
    Ok(bb_search(&desc.generators, &desc.bb_order, 0, b.clone()))
}

/// All factorizations `{ u in N^e : A u = b }`, sorted.
pub fn factorizations(
    desc: &SemigroupDescriptor,
    b: &SElement,
) -> Result<Vec<Factorization>, SemigroupError> {
    desc.check_dim(b)?;
    let mut found: Vec<Vec<BigInt>> = Vec::new();
    let mut mults = vec![BigInt::zero(); desc.num_gens];
    collect_factorizations(desc, 0, b.clone(), &mut mults, &mut found);
    found.sort();
    Ok(found.into_iter().map(Factorization).collect())
}

fn collect_factorizations(
    desc: &SemigroupDescriptor,
    depth: usize,
    residual: SElement,
    mults: &mut Vec<BigInt>,
    found: &mut Vec<Vec<BigInt>>,
) {
    if depth == desc.bb_order.len() {
        if residual.is_zero() {
            found.push(mults.clone());
        }
        return;
    }
    if !coords_coverable(&desc.generators, &desc.bb_order[depth..], &residual) {
        return;
    }
    let gi = desc.bb_order[depth];
    let g = &desc.generators[gi];
    let maxt = max_multiplier(g, &residual);
    let mut t = BigInt::zero();
    while t <= maxt {
        if let Some(rest) = residual.checked_sub(&g.scale(&t)) {
            mults[gi] = t.clone();
            collect_factorizations(desc, depth + 1, rest, mults, found);
        }
        t += 1;
    }
    mults[gi] = BigInt::zero();
}

fn max_multiplier(g: &SElement, residual: &SElement) -> BigInt {
    let mut bound: Option<BigInt> = None;
    for (gk, rk) in g.0.iter().zip(&residual.0) {
        if gk.is_positive() {
            let q = rk / gk;
            bound = Some(match bound {
                None => q,
                Some(b) => b.min(q),
            });
        }
    }
    bound.expect("generator is nonzero")
}

fn coords_coverable(gens: &[SElement], remaining: &[usize], residual: &SElement) -> bool {
    'coord: for k in 0..residual.dim() {
        if residual.0[k].is_positive() {
            for &i in remaining {
                if gens[i].0[k].is_positive() {
                    continue 'coord;
                }
            }
            return false;
        }
    }
    true
}

fn bb_search(gens: &[SElement], order: &[usize], depth: usize, residual: SElement) -> bool {
    if residual.is_zero() {
        return true;
    }
    if depth >= order.len() {
        return false;
    }
    if !coords_coverable(gens, &order[depth..], &residual) {
        return false;
    }
    let g = &gens[order[depth]];
    let maxt = max_multiplier(g, &residual);
    // Larger multipliers first: reaches zero quickly on members.
    let mut t = maxt;
    loop {
        if let Some(rest) = residual.checked_sub(&g.scale(&t)) {
            if bb_search(gens, order, depth + 1, rest) {
                return true;
            }
        }
        if t.is_zero() {
            break;
        }
        t -= 1;
    }
    false
}

/// `a \preceq_S b`: every coordinate of `b - a` is non-negative and the
/// difference lies in the semigroup.
pub fn precedes(
    desc: &SemigroupDescriptor,
    a: &SElement,
    b: &SElement,
) -> Result<bool, SemigroupError> {
    desc.check_dim(a)?;
    desc.check_dim(b)?;
    match b.checked_sub(a) {
        None => Ok(false),
        Some(diff) => member(desc, &diff),
    }
}

/// Whether an integer vector lies in the integer span of `basis`.
pub fn in_lattice(v: &[BigInt], basis: &[SElement]) -> bool {
    let rows: Vec<Vec<BigInt>> = basis.iter().map(|g| g.0.clone()).collect();
    linalg::in_integer_span(v, &rows)
}
