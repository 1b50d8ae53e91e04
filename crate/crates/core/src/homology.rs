//! The simplicial complexes attached to semigroup degrees, exact reduced
//! homology, degree scans and graded Betti numbers.
//!
//! For `b` in `S` and a vertex pool `P` of generator indices, the complex
//! has a face `F` for every subset of `P` with `b - sum_F a_i` in `S`.
//! Over the full generator list this computes graded Betti numbers
//! (`beta_{i+1,b} = dim H~_i`), over the extremal generators it drives the
//! `D(j)` and `C_i` degree sets.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::apery::SemigroupRing;
use crate::linalg;
use crate::scan::NormOracle;
use crate::semigroup::{SElement, SemigroupDescriptor};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HomologyError {
    #[error("element does not belong to the semigroup")]
    NotInSemigroup,
    #[error("the void complex has no reduced homology")]
    VoidComplex,
    #[error("operation requires ambient dimension 4, found {0}")]
    DimensionNot4(usize),
}

/// Coefficient field for homology ranks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Rational,
    Prime(u64),
}

/// A finite simplicial complex over a pool of generator indices.  Faces are
/// stored sorted and include the empty face whenever the complex is nonvoid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    pub vertex_pool: Vec<usize>,
    pub faces: BTreeSet<Vec<usize>>,
}

impl SimplicialComplex {
    pub fn is_void(&self) -> bool {
        self.faces.is_empty()
    }

    /// Largest face cardinality minus one; the empty complex `{∅}` has
    /// dimension -1.
    pub fn dim(&self) -> i64 {
        self.faces.iter().map(|f| f.len() as i64 - 1).max().unwrap_or(-2)
    }

    pub fn faces_of_card(&self, k: usize) -> Vec<&Vec<usize>> {
        self.faces.iter().filter(|f| f.len() == k).collect()
    }

    /// Vertices present as singleton faces.
    pub fn vertices(&self) -> Vec<usize> {
        self.faces_of_card(1).iter().map(|f| f[0]).collect()
    }

    /// Closure under subsets is asserted in debug builds.
    pub fn assert_closed(&self) {
        for f in &self.faces {
            for k in 0..f.len() {
                let mut sub = f.clone();
                sub.remove(k);
                debug_assert!(self.faces.contains(&sub), "complex not closed under subsets");
            }
        }
    }

    /// Number of connected components of the vertex set (union-find).
    pub fn connected_components(&self) -> usize {
        let verts = self.vertices();
        let index: HashMap<usize, usize> =
            verts.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let mut parent: Vec<usize> = (0..verts.len()).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for f in self.faces_of_card(2) {
            let (a, b) = (index[&f[0]], index[&f[1]]);
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        }
        let mut roots = BTreeSet::new();
        for k in 0..verts.len() {
            roots.insert(find(&mut parent, k));
        }
        roots.len()
    }

    pub fn has_isolated_vertex(&self) -> bool {
        self.vertices().iter().any(|&v| {
            !self.faces_of_card(2).iter().any(|e| e.contains(&v))
        })
    }

    /// Bitmask over subsets of `vertex_pool` (pool order), for memoisation.
    pub fn face_mask(&self) -> u64 {
        assert!(self.vertex_pool.len() <= 6);
        let pos: HashMap<usize, usize> =
            self.vertex_pool.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let mut mask = 0u64;
        for f in &self.faces {
            let bits: usize = f.iter().map(|v| 1usize << pos[v]).sum();
            mask |= 1 << bits;
        }
        mask
    }
}

/// Build the complex over `pool` for degree `b`, testing membership through
/// `is_member`.
fn complex_over_pool(
    desc: &SemigroupDescriptor,
    pool: &[usize],
    b: &SElement,
    is_member: &mut dyn FnMut(&SElement) -> bool,
) -> Result<SimplicialComplex, HomologyError> {
    if !is_member(b) {
        return Err(HomologyError::NotInSemigroup);
    }
    let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
    faces.insert(Vec::new());
    // grow faces in pool order; a face can only appear if its prefix did
    let mut frontier: Vec<(Vec<usize>, SElement)> = vec![(Vec::new(), b.clone())];
    while let Some((face, residual)) = frontier.pop() {
        let start = face.last().map_or(0, |&v| v + 1);
        for (k, &v) in pool.iter().enumerate() {
            let _ = k;
            if v < start {
                continue;
            }
            if let Some(rest) = residual.checked_sub(&desc.generators[v]) {
                if is_member(&rest) {
                    let mut f = face.clone();
                    f.push(v);
                    faces.insert(f.clone());
                    frontier.push((f, rest));
                }
            }
        }
    }
    let c = SimplicialComplex { vertex_pool: pool.to_vec(), faces };
    c.assert_closed();
    Ok(c)
}

/// `Δ_b`: faces over all generators.
pub fn delta_complex(
    ring: &SemigroupRing,
    b: &SElement,
) -> Result<SimplicialComplex, HomologyError> {
    let pool: Vec<usize> = (0..ring.desc.num_gens).collect();
    complex_over_pool(&ring.desc, &pool, b, &mut |x| ring.member(x))
}

/// `T_b`: faces over the extremal generators.
pub fn t_complex(
    ring: &SemigroupRing,
    b: &SElement,
) -> Result<SimplicialComplex, HomologyError> {
    let pool = ring.desc.extremal_indices.clone();
    complex_over_pool(&ring.desc, &pool, b, &mut |x| ring.member(x))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyProfile {
    /// Nonzero reduced homology dimensions, keyed by degree `j >= -1`.
    pub dims: BTreeMap<i64, usize>,
    pub field: Field,
}

impl HomologyProfile {
    pub fn dim_at(&self, j: i64) -> usize {
        self.dims.get(&j).copied().unwrap_or(0)
    }

    pub fn is_acyclic(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn max_nonzero(&self) -> Option<i64> {
        self.dims.keys().next_back().copied()
    }
}

/// Exact reduced homology of a nonvoid complex.
pub fn reduced_homology(
    complex: &SimplicialComplex,
    field: Field,
) -> Result<HomologyProfile, HomologyError> {
    if complex.is_void() {
        return Err(HomologyError::VoidComplex);
    }
    let top = complex.dim();
    // chain group bases by face cardinality; cardinality k lives in degree k-1
    let mut bases: Vec<Vec<&Vec<usize>>> = Vec::new();
    for k in 0..=((top + 1).max(0) as usize) {
        bases.push(complex.faces_of_card(k));
    }
    // rank of each boundary map ∂_j : C_j -> C_{j-1}, j = 0..=top
    let mut ranks: Vec<usize> = vec![0; bases.len() + 1];
    for k in 1..bases.len() {
        ranks[k] = boundary_rank(&bases[k], &bases[k - 1], field);
    }
    let mut dims = BTreeMap::new();
    for j in -1..=top {
        let k = (j + 1) as usize; // faces of cardinality k span degree j
        let dim_c = bases[k].len();
        let rank_out = ranks[k];
        let rank_in = if k + 1 < bases.len() { ranks[k + 1] } else { 0 };
        let h = dim_c - rank_out - rank_in;
        if h > 0 {
            dims.insert(j, h);
        }
    }
    Ok(HomologyProfile { dims, field })
}

/// Rank of the simplicial boundary map between consecutive face lists.
fn boundary_rank(faces: &[&Vec<usize>], below: &[&Vec<usize>], field: Field) -> usize {
    if faces.is_empty() || below.is_empty() {
        return 0;
    }
    let index: HashMap<&Vec<usize>, usize> =
        below.iter().enumerate().map(|(k, f)| (*f, k)).collect();
    // rows = target basis, columns = source basis
    let mut entries: Vec<Vec<i64>> = vec![vec![0; faces.len()]; below.len()];
    for (col, f) in faces.iter().enumerate() {
        let mut sign = 1i64;
        for k in 0..f.len() {
            let mut sub = (*f).clone();
            sub.remove(k);
            let row = index[&sub];
            entries[row][col] = sign;
            sign = -sign;
        }
    }
    match field {
        Field::Rational => {
            let m: Vec<Vec<BigInt>> = entries
                .into_iter()
                .map(|r| r.into_iter().map(BigInt::from).collect())
                .collect();
            linalg::rank_bigint(m)
        }
        Field::Prime(p) => {
            let m: Vec<Vec<u64>> = entries
                .into_iter()
                .map(|r| {
                    r.into_iter()
                        .map(|x| if x >= 0 { x as u64 % p } else { p - ((-x) as u64 % p) })
                        .collect()
                })
                .collect();
            linalg::rank_mod_p(m, p)
        }
    }
}

/// `beta_{i,b}` as the reduced homology of `Δ_b` in degree `i - 1`.
pub fn betti_number(ring: &SemigroupRing, i: usize, b: &SElement) -> Result<usize, HomologyError> {
    assert!(i >= 1);
    let complex = delta_complex(ring, b)?;
    let profile = reduced_homology(&complex, Field::Rational)?;
    Ok(profile.dim_at(i as i64 - 1))
}

/// Degrees with `beta_{1,b} != 0`, certified complete: every minimal
/// generator degree of the toric ideal occurs among its reduced Groebner
/// basis degrees, and each candidate is tested by homology.
pub fn betti_elements(ring: &SemigroupRing) -> Vec<SElement> {
    let gb = ring.toric();
    let mut candidates: BTreeSet<SElement> = BTreeSet::new();
    for g in &gb.elements {
        candidates.insert(ring.degree_of(g.leading_exp()));
    }
    candidates
        .into_iter()
        .filter(|b| betti_number(ring, 1, b).unwrap_or(0) > 0)
        .collect()
}

/// All `b` in `S` of 1-norm at most `bound` with nonzero `H~_j(T_b)`,
/// grouped by `j`; the underlying queries share one membership table.
pub fn scan_d_all(ring: &SemigroupRing, bound: u32) -> BTreeMap<i64, Vec<SElement>> {
    let oracle = NormOracle::new(&ring.desc, bound);
    scan_d_all_with(ring, bound, &oracle)
}

fn scan_d_all_with(
    ring: &SemigroupRing,
    bound: u32,
    oracle: &NormOracle,
) -> BTreeMap<i64, Vec<SElement>> {
    let mut points: Vec<SElement> = Vec::new();
    let bound_u64 = bound as u64;
    oracle.for_each_element(&mut |c: &[u32]| {
        if c.iter().map(|&x| x as u64).sum::<u64>() <= bound_u64 {
            points.push(SElement::from_u32_coords(c));
        }
        false
    });
    let pool = ring.desc.extremal_indices.clone();
    let mut memo: HashMap<u64, BTreeMap<i64, usize>> = HashMap::new();
    let mut out: BTreeMap<i64, Vec<SElement>> = BTreeMap::new();
    let small_pool = pool.len() <= 6;
    for b in points {
        let complex = complex_over_pool(&ring.desc, &pool, &b, &mut |x| oracle.contains(x))
            .expect("enumerated points lie in S");
        let dims = if small_pool {
            memo.entry(complex.face_mask())
                .or_insert_with(|| reduced_homology(&complex, Field::Rational).unwrap().dims)
                .clone()
        } else {
            reduced_homology(&complex, Field::Rational).unwrap().dims
        };
        for (&j, &h) in dims.iter() {
            if h > 0 {
                out.entry(j).or_default().push(b.clone());
            }
        }
    }
    out
}

/// `D(j)` restricted to the scan box.
pub fn scan_d(ring: &SemigroupRing, j: i64, bound: u32) -> Vec<SElement> {
    scan_d_all(ring, bound).remove(&j).unwrap_or_default()
}

/// `C_i = { b' + sum_F a : b' in D(j), F ⊆ A\E, |F| = i - j }`.
pub fn build_c(
    ring: &SemigroupRing,
    i: i64,
    d_sets: &BTreeMap<i64, Vec<SElement>>,
) -> BTreeSet<SElement> {
    let non_ext = ring.desc.non_extremal_indices();
    let mut out = BTreeSet::new();
    for (&j, ds) in d_sets {
        let need = i - j;
        if need < 0 || need > non_ext.len() as i64 {
            continue;
        }
        for subset in k_subsets(&non_ext, need as usize) {
            let shift = subset
                .iter()
                .fold(SElement::zero(ring.desc.ambient_dim), |acc, &v| {
                    acc.add(&ring.desc.generators[v])
                });
            for b in ds {
                out.insert(b.add(&shift));
            }
        }
    }
    out
}

fn k_subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(items: &[usize], start: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for idx in start..items.len() {
            cur.push(items[idx]);
            rec(items, idx + 1, k, cur, out);
            cur.pop();
        }
    }
    rec(items, 0, k, &mut cur, &mut out);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Completeness {
    CertifiedBeta1,
    HeuristicScan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedBettiTable {
    /// `(i, b) -> beta_{i,b}`, nonzero entries only.
    pub entries: BTreeMap<(usize, SElement), usize>,
    pub scan_bound: u32,
    pub completeness: Completeness,
}

impl GradedBettiTable {
    pub fn total(&self, i: usize) -> usize {
        self.entries
            .iter()
            .filter(|((k, _), _)| *k == i)
            .map(|(_, &m)| m)
            .sum()
    }

    pub fn degrees_of(&self, i: usize) -> Vec<SElement> {
        self.entries
            .iter()
            .filter(|((k, _), _)| *k == i)
            .map(|((_, b), _)| b.clone())
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|((i, b), m)| {
                serde_json::json!({
                    "i": i,
                    "degree": b.0.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "mult": m,
                })
            })
            .collect();
        serde_json::json!({
            "betti": entries,
            "scan_bound": self.scan_bound,
            "certified": self.completeness == Completeness::CertifiedBeta1,
        })
    }
}

/// Default 1-norm bound for Betti scans: the largest witness norm among
/// maximal Apery elements over (d-1)-subsets of the extremal set, plus the
/// total 1-norm of all generators.  Falls back to twice the generator total
/// when no subset has a maximal element.
pub fn default_scan_bound(ring: &SemigroupRing) -> u32 {
    let gens_total: BigInt = ring
        .desc
        .generators
        .iter()
        .map(|g| g.norm1())
        .sum::<BigInt>();
    let ext = ring.desc.extremal_indices.clone();
    let mut max_witness = BigInt::zero();
    for subset in k_subsets(&ext, ext.len().saturating_sub(1)) {
        for (el, _) in crate::apery::maximal_apery_elements(ring, &subset) {
            let n = el.norm1();
            if n > max_witness {
                max_witness = n;
            }
        }
    }
    let total = if max_witness.is_zero() {
        &gens_total * 2
    } else {
        max_witness + gens_total
    };
    u32::try_from(&total).expect("scan bound fits u32")
}

/// Scan graded Betti numbers up to a 1-norm bound (default if `None`).
///
/// `beta_1` degrees come certified from the toric basis; higher rows are
/// restricted to the candidate set `∪_i C_i` built from the `D(j)` scans,
/// which is a necessary condition for a nonzero Betti number.
pub fn betti_scan(ring: &SemigroupRing, bound: Option<u32>) -> GradedBettiTable {
    let bound = bound.unwrap_or_else(|| default_scan_bound(ring));
    let mut entries: BTreeMap<(usize, SElement), usize> = BTreeMap::new();
    entries.insert((0, SElement::zero(ring.desc.ambient_dim)), 1);
    for b in betti_elements(ring) {
        let m = betti_number(ring, 1, &b).unwrap();
        entries.insert((1, b), m);
    }
    let oracle = NormOracle::new(&ring.desc, bound);
    let d_sets = scan_d_all_with(ring, bound, &oracle);
    let e = ring.desc.num_gens;
    let mut candidates: BTreeSet<SElement> = BTreeSet::new();
    for i in 1..e as i64 {
        candidates.extend(build_c(ring, i, &d_sets));
    }
    let norm_bound = BigInt::from(bound);
    let full_pool: Vec<usize> = (0..e).collect();
    let mut memo: HashMap<u64, BTreeMap<i64, usize>> = HashMap::new();
    for b in candidates {
        if b.norm1() > norm_bound || !ring.member(&b) {
            continue;
        }
        let complex =
            complex_over_pool(&ring.desc, &full_pool, &b, &mut |x| oracle.contains(x)).unwrap();
        let mask = if e <= 6 { Some(complex.face_mask()) } else { None };
        let dims = match mask {
            Some(m) => memo
                .entry(m)
                .or_insert_with(|| reduced_homology(&complex, Field::Rational).unwrap().dims)
                .clone(),
            None => reduced_homology(&complex, Field::Rational).unwrap().dims,
        };
        for (&j, &h) in &dims {
            if j >= 1 && h > 0 {
                entries.insert(((j + 1) as usize, b.clone()), h);
            }
        }
    }
    GradedBettiTable { entries, scan_bound: bound, completeness: Completeness::HeuristicScan }
}

/// Report for the necessary-condition check on a leftmost Betti degree.
#[derive(Debug, Clone, Serialize)]
pub struct LeftmostBettiReport {
    pub displacement_in_d: bool,
    pub pair: Option<(usize, usize)>,
    pub c: Option<SElement>,
    pub c_is_maximal: Option<bool>,
}

/// For `beta_{e-q,b} != 0`, verify `b - sum_{A\E} a ∈ D(d-q-1)` and, when
/// `q = d - 1`, produce the extremal pair `{i,j}` and displaced element `c`
/// with the stated Apery membership; whether `c` is maximal is reported but
/// never asserted.
pub fn leftmost_betti_check(
    ring: &SemigroupRing,
    q: usize,
    b: &SElement,
) -> LeftmostBettiReport {
    let d = ring.desc.ambient_dim;
    let shift = ring
        .desc
        .non_extremal_indices()
        .iter()
        .fold(SElement::zero(d), |acc, &v| acc.add(&ring.desc.generators[v]));
    let j_target = d as i64 - q as i64 - 1;
    let mut report = LeftmostBettiReport {
        displacement_in_d: false,
        pair: None,
        c: None,
        c_is_maximal: None,
    };
    let Some(displaced) = b.checked_sub(&shift) else {
        return report;
    };
    if !ring.member(&displaced) {
        return report;
    }
    if let Ok(t) = t_complex(ring, &displaced) {
        if let Ok(h) = reduced_homology(&t, Field::Rational) {
            report.displacement_in_d = h.dim_at(j_target) > 0;
        }
    }
    if q == d - 1 {
        // find a permutation {i,j,k} with c = displaced - a_k in both Apery
        // sets and displaced outside
        let ext = ring.desc.extremal_indices.clone();
        'outer: for &k in &ext {
            let Some(c) = displaced.checked_sub(&ring.desc.generators[k]) else {
                continue;
            };
            if !ring.member(&c) {
                continue;
            }
            let others: Vec<usize> = ext.iter().copied().filter(|&v| v != k).collect();
            if crate::apery::in_apery(ring, &c, &others)
                && !crate::apery::in_apery(ring, &displaced, &others)
            {
                report.pair = Some((others[0], others[1.min(others.len() - 1)]));
                let maximal = crate::apery::maximal_apery_elements(ring, &others)
                    .iter()
                    .any(|(m, _)| m == &c);
                report.c = Some(c);
                report.c_is_maximal = Some(maximal);
                break 'outer;
            }
        }
    }
    report
}

/// The five `T_c` configurations of the d=4 classification, the figure's
/// excluded shape, and a catch-all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TShape {
    HollowTriangle,
    HollowTrianglePlusEdge,
    HollowTetraTwoMissing,
    SquarePlusDiagonal,
    Square,
    TrianglePlusHollowTriangle,
    Other,
}

/// Classify `T_c` for a 4-dimensional semigroup against the known shapes,
/// up to relabeling of the four extremal vertices.
pub fn classify_t4(ring: &SemigroupRing, c: &SElement) -> Result<TShape, HomologyError> {
    if ring.desc.ambient_dim != 4 {
        return Err(HomologyError::DimensionNot4(ring.desc.ambient_dim));
    }
    let t = t_complex(ring, c)?;
    Ok(classify_t4_complex(&t))
}

/// Shape matching on an abstract complex with at most 4 vertices.
pub fn classify_t4_complex(t: &SimplicialComplex) -> TShape {
    assert_eq!(t.vertex_pool.len(), 4);
    // canonical face sets over vertices 0..3, by cardinality >= 1
    let pos: HashMap<usize, usize> =
        t.vertex_pool.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let actual: BTreeSet<Vec<usize>> = t
        .faces
        .iter()
        .filter(|f| !f.is_empty())
        .map(|f| {
            let mut g: Vec<usize> = f.iter().map(|v| pos[v]).collect();
            g.sort_unstable();
            g
        })
        .collect();
    let perms = permutations4();
    let shapes: [(TShape, Vec<Vec<usize>>); 6] = [
        // (a) hollow triangle on {i,k,l}: vertices + three edges, no 2-faces
        (TShape::HollowTriangle, shape_faces(&[vec![0], vec![2], vec![3]], &[vec![0, 2], vec![0, 3], vec![2, 3]], &[])),
        // (b) hollow triangle on {i,k,l} plus the edge {i,j}
        (
            TShape::HollowTrianglePlusEdge,
            shape_faces(
                &[vec![0], vec![1], vec![2], vec![3]],
                &[vec![0, 2], vec![0, 3], vec![2, 3], vec![0, 1]],
                &[],
            ),
        ),
        // (c) hollow tetrahedron missing (at least) faces {i,k,l},{j,k,l}:
        // canonical instance = full 1-skeleton plus 2-faces {i,j,k},{i,j,l}
        (
            TShape::HollowTetraTwoMissing,
            shape_faces(
                &[vec![0], vec![1], vec![2], vec![3]],
                &[vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]],
                &[vec![0, 1, 2], vec![0, 1, 3]],
            ),
        ),
        // (d) square i-j-k-l with diagonal {i,k}
        (
            TShape::SquarePlusDiagonal,
            shape_faces(
                &[vec![0], vec![1], vec![2], vec![3]],
                &[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3], vec![0, 2]],
                &[],
            ),
        ),
        // (e) hollow square i-j-k-l
        (
            TShape::Square,
            shape_faces(
                &[vec![0], vec![1], vec![2], vec![3]],
                &[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
                &[],
            ),
        ),
        // figure: filled triangle {i,j,k} plus hollow triangle {i,k,l}
        (
            TShape::TrianglePlusHollowTriangle,
            shape_faces(
                &[vec![0], vec![1], vec![2], vec![3]],
                &[vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 3], vec![2, 3]],
                &[vec![0, 1, 2]],
            ),
        ),
    ];
    // hollow-tetra case (c) allows extra missing faces: one or both of the
    // other two 2-faces may also be absent, but no 3-face and full 1-skeleton
    for perm in &perms {
        let image: BTreeSet<Vec<usize>> = actual
            .iter()
            .map(|f| {
                let mut g: Vec<usize> = f.iter().map(|&v| perm[v]).collect();
                g.sort_unstable();
                g
            })
            .collect();
        for (shape, faces) in &shapes {
            if *shape == TShape::HollowTetraTwoMissing {
                let skeleton: BTreeSet<Vec<usize>> =
                    faces.iter().filter(|f| f.len() <= 2).cloned().collect();
                let allowed_2: BTreeSet<Vec<usize>> =
                    faces.iter().filter(|f| f.len() == 3).cloned().collect();
                let image_2: BTreeSet<Vec<usize>> =
                    image.iter().filter(|f| f.len() == 3).cloned().collect();
                let image_le2: BTreeSet<Vec<usize>> =
                    image.iter().filter(|f| f.len() <= 2).cloned().collect();
                let no_3face = !image.iter().any(|f| f.len() == 4);
                if image_le2 == skeleton && no_3face && image_2.is_subset(&allowed_2) {
                    return *shape;
                }
            } else {
                let want: BTreeSet<Vec<usize>> = faces.iter().cloned().collect();
                if image == want {
                    return *shape;
                }
            }
        }
    }
    TShape::Other
}

fn shape_faces(
    vertices: &[Vec<usize>],
    edges: &[Vec<usize>],
    triangles: &[Vec<usize>],
) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    out.extend(vertices.iter().cloned());
    for e in edges {
        let mut e = e.clone();
        e.sort_unstable();
        out.push(e);
    }
    for t in triangles {
        let mut t = t.clone();
        t.sort_unstable();
        out.push(t);
    }
    out
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    let items = [0usize, 1, 2, 3];
    for &a in &items {
        for &b in &items {
            if b == a {
                continue;
            }
            for &c in &items {
                if c == a || c == b {
                    continue;
                }
                let d = 6 - a - b - c;
                out.push([a, b, c, d]);
            }
        }
    }
    out
}

/// Is `T_b` disconnected with at least one isolated vertex?
pub fn disconnected_with_isolated_vertex(ring: &SemigroupRing, b: &SElement) -> bool {
    disconnected_with_isolated_vertex_with(ring, b, &mut |x| ring.member(x))
}

/// As `disconnected_with_isolated_vertex`, with membership delegated to a
/// caller-supplied test (e.g. a precomputed scan oracle).
pub fn disconnected_with_isolated_vertex_with(
    ring: &SemigroupRing,
    b: &SElement,
    is_member: &mut dyn FnMut(&SElement) -> bool,
) -> bool {
    let pool = ring.desc.extremal_indices.clone();
    match complex_over_pool(&ring.desc, &pool, b, is_member) {
        Ok(t) => t.connected_components() >= 2 && t.has_isolated_vertex(),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::validate_simplicial;

    fn ring(cols: &[&[i64]]) -> SemigroupRing {
        SemigroupRing::new(
            validate_simplicial(
                &cols.iter().map(|c| SElement::from_i64(c)).collect::<Vec<_>>(),
            )
            .unwrap(),
        )
    }

    fn s(v: &[i64]) -> SElement {
        SElement::from_i64(v)
    }

    fn complex(pool: &[usize], faces: &[&[usize]]) -> SimplicialComplex {
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        all.insert(Vec::new());
        for f in faces {
            // take closure
            let n = f.len();
            for mask in 1..(1u32 << n) {
                let sub: Vec<usize> = (0..n).filter(|k| mask >> k & 1 == 1).map(|k| f[k]).collect();
                all.insert(sub);
            }
        }
        SimplicialComplex { vertex_pool: pool.to_vec(), faces: all }
    }

    #[test]
    fn hollow_triangle_h1() {
        let c = complex(&[0, 1, 2], &[&[0, 1], &[1, 2], &[0, 2]]);
        let h = reduced_homology(&c, Field::Rational).unwrap();
        assert_eq!(h.dims, BTreeMap::from([(1, 1)]));
    }

    #[test]
    fn two_points_h0() {
        let c = complex(&[0, 1], &[&[0], &[1]]);
        let h = reduced_homology(&c, Field::Rational).unwrap();
        assert_eq!(h.dims, BTreeMap::from([(0, 1)]));
        assert_eq!(c.connected_components(), 2);
        assert!(c.has_isolated_vertex());
    }

    #[test]
    fn hollow_tetrahedron_h2() {
        let c = complex(
            &[0, 1, 2, 3],
            &[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]],
        );
        let h = reduced_homology(&c, Field::Rational).unwrap();
        assert_eq!(h.dims, BTreeMap::from([(2, 1)]));
        // prime field agrees here
        let hp = reduced_homology(&c, Field::Prime(32003)).unwrap();
        assert_eq!(hp.dims, h.dims);
    }

    #[test]
    fn empty_complex_hminus1() {
        let c = complex(&[0, 1], &[]);
        let h = reduced_homology(&c, Field::Rational).unwrap();
        assert_eq!(h.dims, BTreeMap::from([(-1, 1)]));
        let void = SimplicialComplex { vertex_pool: vec![0], faces: BTreeSet::new() };
        assert_eq!(reduced_homology(&void, Field::Rational), Err(HomologyError::VoidComplex));
    }

    #[test]
    fn euler_characteristic_property() {
        let cases = vec![
            complex(&[0, 1, 2], &[&[0, 1], &[1, 2], &[0, 2]]),
            complex(&[0, 1, 2, 3], &[&[0, 1, 2], &[2, 3]]),
            complex(&[0, 1, 2, 3], &[&[0], &[1], &[2], &[3]]),
            complex(&[0, 1, 2, 3, 4], &[&[0, 1, 2, 3], &[3, 4], &[1, 4]]),
        ];
        for c in cases {
            let h = reduced_homology(&c, Field::Rational).unwrap();
            // reduced Euler characteristic: sum over faces (incl. empty) of
            // (-1)^(dim) equals alternating sum of homology dims
            let mut chi: i64 = 0;
            for f in &c.faces {
                let d = f.len() as i64 - 1;
                chi += if d % 2 == 0 { 1 } else { -1 };
            }
            let mut hsum: i64 = 0;
            for (&j, &dim) in &h.dims {
                hsum += if j.rem_euclid(2) == 0 { dim as i64 } else { -(dim as i64) };
            }
            assert_eq!(chi, hsum, "Euler characteristic mismatch");
        }
    }

    #[test]
    fn h0_matches_component_count() {
        let c = complex(&[0, 1, 2, 3, 4], &[&[0, 1], &[2, 3], &[4]]);
        let h = reduced_homology(&c, Field::Rational).unwrap();
        assert_eq!(h.dim_at(0) + 1, c.connected_components());
    }

    #[test]
    fn delta_complex_trivial_degrees() {
        let r = ring(&[&[2, 0], &[0, 2], &[1, 1]]);
        let zero = delta_complex(&r, &s(&[0, 0])).unwrap();
        assert_eq!(zero.faces.len(), 1); // just the empty face
        let a1 = delta_complex(&r, &s(&[2, 0])).unwrap();
        assert!(a1.faces.contains(&vec![0]));
        assert!(!a1.faces.contains(&vec![1]));
        assert_eq!(
            delta_complex(&r, &s(&[1, 0])),
            Err(HomologyError::NotInSemigroup)
        );
    }

    #[test]
    fn betti_elements_numerical() {
        let r = ring(&[&[2], &[3]]);
        assert_eq!(betti_elements(&r), vec![s(&[6])]);
        let free = ring(&[&[1, 0], &[0, 1]]);
        assert!(betti_elements(&free).is_empty());
    }

    #[test]
    fn t_complex_disconnected_in_example() {
        // (81,55,62) = c + a2 lies in D(0) for the (5,3,1)... example
        let r = ring(&[&[5, 3, 1], &[4, 1, 7], &[1, 5, 2], &[8, 5, 6], &[7, 4, 5], &[3, 4, 2]]);
        let t = t_complex(&r, &s(&[81, 55, 62])).unwrap();
        let h = reduced_homology(&t, Field::Rational).unwrap();
        assert!(h.dim_at(0) > 0);
    }

    #[test]
    fn classify_shapes_directly() {
        let tri = complex(&[0, 1, 2, 3], &[&[0, 2], &[0, 3], &[2, 3]]);
        assert_eq!(classify_t4_complex(&tri), TShape::HollowTriangle);
        let square_diag = complex(
            &[0, 1, 2, 3],
            &[&[0, 1], &[1, 2], &[2, 3], &[0, 3], &[0, 2]],
        );
        assert_eq!(classify_t4_complex(&square_diag), TShape::SquarePlusDiagonal);
        let fig = complex(
            &[0, 1, 2, 3],
            &[&[0, 1, 2], &[0, 3], &[2, 3]],
        );
        assert_eq!(classify_t4_complex(&fig), TShape::TrianglePlusHollowTriangle);
        let full = complex(&[0, 1, 2, 3], &[&[0, 1, 2, 3]]);
        assert_eq!(classify_t4_complex(&full), TShape::Other);
        let sq = complex(&[0, 1, 2, 3], &[&[0, 2], &[2, 1], &[1, 3], &[0, 3]]);
        assert_eq!(classify_t4_complex(&sq), TShape::Square);
    }

    #[test]
    fn build_c_includes_d_shift() {
        let r = ring(&[&[2, 0], &[0, 2], &[1, 1]]);
        let mut d_sets: BTreeMap<i64, Vec<SElement>> = BTreeMap::new();
        d_sets.insert(0, vec![s(&[2, 2])]);
        // i = 0: F empty, C_0 contains the D(0) element itself
        let c0 = build_c(&r, 0, &d_sets);
        assert!(c0.contains(&s(&[2, 2])));
        // i = 1: shifted by the single non-extremal generator (1,1)
        let c1 = build_c(&r, 1, &d_sets);
        assert_eq!(c1, BTreeSet::from([s(&[3, 3])]));
    }
}
