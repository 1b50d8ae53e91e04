//! Exact depth computation with certificates.
//!
//! Dimension three admits a trichotomy (depth one by socles, depth `d` by
//! the Cohen-Macaulay test, depth two otherwise, with a witness pair).
//! Dimension four adds a two-condition witness search for depth two and a
//! constructive regular-sequence route for depth three.  Higher dimensions
//! fall back to homology scans.

use serde::{Deserialize, Serialize};

use crate::apery::{
    has_maximal_element, in_apery, is_cohen_macaulay, maximal_apery_elements,
    regular_sequence_check, SemigroupRing, WitnessKind,
};
use crate::homology::{
    betti_scan, default_scan_bound, disconnected_with_isolated_vertex_with,
};
use crate::koszul::{koszul_homology_dim, max_nonzero_koszul_p};
use crate::poly::Polynomial;
use crate::scan::NormOracle;
use crate::semigroup::SElement;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DepthError {
    #[error("operation requires ambient dimension 3, found {0}")]
    DimensionNot3(usize),
    #[error("operation requires ambient dimension 4, found {0}")]
    DimensionNot4(usize),
    #[error("witness search exhausted the degree bound {0}")]
    BoundExhausted(u32),
    #[error("precondition failed: {0}")]
    Precondition(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DepthMethod {
    SocleDepth1,
    CmTest,
    D3Trichotomy,
    D4Theorem,
    RegularSequence,
    PairAbsence,
    KoszulScan,
}

/// Re-checkable evidence attached to a depth value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DepthWitness {
    /// A maximal element of `Ap(S, {a_i : i in subset})`.
    MaximalApery { subset: Vec<usize>, element: SElement },
    /// Roles `(i,j,k,l)` (extremal positions), a degree, and which of the
    /// two displacement conditions it satisfies.
    TheoremTuple { roles: [usize; 4], b: SElement, condition: u8 },
    /// `(x_i, x_j, x_r + sign * x_s)` over generator indices.
    RegularSequence { vars: [usize; 2], form: (usize, usize, i8) },
    /// Top nonvanishing Koszul homology `H_p` located at `degree`.
    HomologyDegree { p: usize, degree: SElement },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthCertificate {
    pub depth: usize,
    pub method: DepthMethod,
    pub witness: Option<DepthWitness>,
    pub scan_bound: Option<u32>,
}

/// Depth one holds exactly when `Ap(S, b)` has a maximal element for one
/// (equivalently every) `b` in `S`; tested on the first extremal generator.
pub fn depth1_test(ring: &SemigroupRing) -> (bool, Option<SElement>) {
    let i0 = ring.desc.extremal_indices[0];
    match maximal_apery_elements(ring, &[i0]).into_iter().next() {
        Some((el, _)) => (true, Some(el)),
        None => (false, None),
    }
}

fn cert_depth1(el: SElement, ring: &SemigroupRing) -> DepthCertificate {
    DepthCertificate {
        depth: 1,
        method: DepthMethod::SocleDepth1,
        witness: Some(DepthWitness::MaximalApery {
            subset: vec![ring.desc.extremal_indices[0]],
            element: el,
        }),
        scan_bound: None,
    }
}

fn cert_cm(ring: &SemigroupRing) -> DepthCertificate {
    DepthCertificate {
        depth: ring.desc.ambient_dim,
        method: DepthMethod::CmTest,
        witness: None,
        scan_bound: None,
    }
}

/// Exact depth for `d = 3`: depth one by the socle test, depth three by the
/// Cohen-Macaulay test, otherwise depth two with a guaranteed witness pair.
pub fn depth_exact_d3(ring: &SemigroupRing) -> Result<DepthCertificate, DepthError> {
    let d = ring.desc.ambient_dim;
    if d != 3 {
        return Err(DepthError::DimensionNot3(d));
    }
    if let (true, Some(el)) = depth1_test(ring) {
        return Ok(cert_depth1(el, ring));
    }
    if is_cohen_macaulay(ring).0 {
        return Ok(cert_cm(ring));
    }
    let ext = &ring.desc.extremal_indices;
    for p in 0..3 {
        for q in p + 1..3 {
            let pair = [ext[p], ext[q]];
            let w = has_maximal_element(ring, &pair);
            if w.kind == WitnessKind::Maximal {
                return Ok(DepthCertificate {
                    depth: 2,
                    method: DepthMethod::D3Trichotomy,
                    witness: Some(DepthWitness::MaximalApery {
                        subset: pair.to_vec(),
                        element: w.element.expect("maximal witness carries its element"),
                    }),
                    scan_bound: None,
                });
            }
        }
    }
    unreachable!("depth two in dimension three guarantees a witness pair")
}

/// Search for a depth-two witness in dimension four: roles `(i,j,k,l)` over
/// the extremal positions and `b` in `Ap(S,a_i) n Ap(S,a_j)` (scanned over
/// degrees of 1-norm at most `bound`) such that either
///
/// 1. `b + a_k - a_i` and `b + a_l - a_i` lie in `S`, or
/// 2. `b + a_k - a_i`, `b + a_l - a_j` and `b + a_k + a_l - a_i - a_j` do.
pub fn depth2_test_d4(
    ring: &SemigroupRing,
    bound: u32,
) -> Result<DepthWitness, DepthError> {
    let d = ring.desc.ambient_dim;
    if d != 4 {
        return Err(DepthError::DimensionNot4(d));
    }
    let ext = ring.desc.extremal_indices.clone();
    let egens: Vec<Vec<u32>> = ext
        .iter()
        .map(|&i| {
            ring.desc.generators[i]
                .to_u32_coords()
                .expect("generator coordinates fit u32")
        })
        .collect();
    // shifts add at most two extremal generators before the oracle query
    let slack = 2 * egens.iter().map(|g| g.iter().sum::<u32>()).max().unwrap_or(0);
    let oracle = NormOracle::new(&ring.desc, bound.saturating_add(slack));
    let shifted_member = |b: &[u32], plus: &[usize], minus: &[usize]| -> bool {
        let mut acc = b.to_vec();
        for &v in plus {
            for (x, g) in acc.iter_mut().zip(&egens[v]) {
                *x += g;
            }
        }
        for &v in minus {
            for (x, g) in acc.iter_mut().zip(&egens[v]) {
                match x.checked_sub(*g) {
                    Some(next) => *x = next,
                    None => return false,
                }
            }
        }
        oracle.contains_u32(&acc)
    };
    let bound_u64 = bound as u64;
    let mut found: Option<DepthWitness> = None;
    oracle.for_each_element(&mut |b: &[u32]| {
        if b.iter().map(|&c| c as u64).sum::<u64>() > bound_u64 {
            return false;
        }
        // membership in Ap(S, a_p): b - a_p is outside S
        let in_ap = |p: usize| !shifted_member(b, &[], &[p]);
        for p in 0..4usize {
            if !in_ap(p) {
                continue;
            }
            for q in p + 1..4 {
                if !in_ap(q) {
                    continue;
                }
                let others: Vec<usize> = (0..4).filter(|&v| v != p && v != q).collect();
                for (i, j) in [(p, q), (q, p)] {
                    for (k, l) in [(others[0], others[1]), (others[1], others[0])] {
                        let c1 =
                            shifted_member(b, &[k], &[i]) && shifted_member(b, &[l], &[i]);
                        let c2 = !c1
                            && shifted_member(b, &[k], &[i])
                            && shifted_member(b, &[l], &[j])
                            && shifted_member(b, &[k, l], &[i, j]);
                        if c1 || c2 {
                            found = Some(DepthWitness::TheoremTuple {
                                roles: [i, j, k, l],
                                b: SElement::from_u32_coords(b),
                                condition: if c1 { 1 } else { 2 },
                            });
                            return true;
                        }
                    }
                }
            }
        }
        false
    });
    match found {
        Some(w) => {
            if let DepthWitness::TheoremTuple { roles, b, .. } = &w {
                debug_assert!(in_apery(ring, b, &[ext[roles[0]], ext[roles[1]]]));
                // the theorem's final claim
                let m = has_maximal_element(ring, &[ext[roles[0]], ext[roles[1]]]);
                assert_eq!(
                    m.kind,
                    WitnessKind::Maximal,
                    "a depth-two witness forces a maximal Apery element"
                );
            }
            Ok(w)
        }
        None => Err(DepthError::BoundExhausted(bound)),
    }
}

/// Exact depth for `d = 4`.  Depth one and Cohen-Macaulay are decided
/// exactly; depth three is certified constructively by a regular sequence
/// `(x_i, x_j, x_r +- x_s)` over the extremal variables (tried first, since
/// it is cheap and conclusive once the Cohen-Macaulay test has failed);
/// depth two is then sought through `depth2_test_d4` with an iterative
/// deepening schedule; anything still unresolved falls back to the Koszul
/// homology scan.
pub fn depth_exact_d4(
    ring: &SemigroupRing,
    bound: u32,
) -> Result<DepthCertificate, DepthError> {
    let d = ring.desc.ambient_dim;
    if d != 4 {
        return Err(DepthError::DimensionNot4(d));
    }
    if let (true, Some(el)) = depth1_test(ring) {
        return Ok(cert_depth1(el, ring));
    }
    if is_cohen_macaulay(ring).0 {
        return Ok(cert_cm(ring));
    }
    let ext = &ring.desc.extremal_indices;
    let e = ring.desc.num_gens;
    let mono = |v: usize| {
        let mut exp = vec![0u32; e];
        exp[v] = 1;
        Polynomial::monomial(exp)
    };
    for i in 0..4usize {
        for j in 0..4 {
            if i == j {
                continue;
            }
            let others: Vec<usize> = (0..4).filter(|&v| v != i && v != j).collect();
            let (r, s) = (others[0], others[1]);
            for sign in [1i8, -1] {
                let form = if sign > 0 {
                    mono(ext[r]).add(&mono(ext[s]), &ring.order)
                } else {
                    mono(ext[r]).sub(&mono(ext[s]), &ring.order)
                };
                if regular_sequence_check(ring, &[mono(ext[i]), mono(ext[j]), form]) {
                    // a length-three regular sequence plus the failed
                    // Cohen-Macaulay test pins the depth at exactly three,
                    // so the costlier depth-two search can be skipped
                    return Ok(DepthCertificate {
                        depth: 3,
                        method: DepthMethod::RegularSequence,
                        witness: Some(DepthWitness::RegularSequence {
                            vars: [ext[i], ext[j]],
                            form: (ext[r], ext[s], sign),
                        }),
                        scan_bound: Some(bound),
                    });
                }
            }
        }
    }
    // at d = 4, depth two forces a maximal element in some pair-intersection
    // Apery set; when every pair lacks one, the depth is exactly three
    let ext = ring.desc.extremal_indices.clone();
    let mut any_pair_max = false;
    'pairs: for p in 0..4usize {
        for q in p + 1..4 {
            if has_maximal_element(ring, &[ext[p], ext[q]]).kind == WitnessKind::Maximal {
                any_pair_max = true;
                break 'pairs;
            }
        }
    }
    if !any_pair_max {
        return Ok(DepthCertificate {
            depth: 3,
            method: DepthMethod::PairAbsence,
            witness: None,
            scan_bound: None,
        });
    }
    // widen the user bound: theorem witnesses routinely sit well above the
    // generator norms, and the simplex-indexed oracle keeps this scan cheap
    let norm_bound = bound.max(200);
    match depth2_test_d4(ring, norm_bound) {
        Ok(witness) => {
            return Ok(DepthCertificate {
                depth: 2,
                method: DepthMethod::D4Theorem,
                witness: Some(witness),
                scan_bound: Some(norm_bound),
            })
        }
        Err(DepthError::BoundExhausted(_)) => {}
        Err(e) => return Err(e),
    }
    // inconclusive by exact routes; the ring is not Cohen-Macaulay here, so
    // some Koszul homology must appear — escalate the scan until it does
    let mut scan = norm_bound;
    loop {
        let (p, witness) = max_nonzero_koszul_p(ring, scan);
        if p >= 1 {
            return Ok(DepthCertificate {
                depth: d - p,
                method: DepthMethod::KoszulScan,
                witness: witness.map(|degree| DepthWitness::HomologyDegree { p, degree }),
                scan_bound: Some(scan),
            });
        }
        if scan >= 200 {
            return Err(DepthError::BoundExhausted(scan));
        }
        scan = 200;
    }
}

/// Scan-based depth: the Betti route `e - max{i : beta_i != 0}` and the
/// Koszul route `d - max{p : H_p != 0}` are both computed over degrees of
/// 1-norm at most `bound` (default: the Betti scan default) and must agree.
pub fn depth_via_scan(ring: &SemigroupRing, bound: Option<u32>) -> DepthCertificate {
    let bound = bound.unwrap_or_else(|| default_scan_bound(ring));
    let table = betti_scan(ring, Some(bound));
    let max_i = table
        .entries
        .iter()
        .filter(|(_, &v)| v > 0)
        .map(|((i, _), _)| *i)
        .max()
        .unwrap_or(0);
    let betti_depth = ring.desc.num_gens - max_i;
    let (p, witness) = max_nonzero_koszul_p(ring, bound);
    let koszul_depth = ring.desc.ambient_dim - p;
    assert_eq!(
        betti_depth, koszul_depth,
        "Betti and Koszul scan routes disagree at bound {bound}"
    );
    DepthCertificate {
        depth: koszul_depth,
        method: DepthMethod::KoszulScan,
        witness: witness.map(|degree| DepthWitness::HomologyDegree { p, degree }),
        scan_bound: Some(bound),
    }
}

/// Dispatcher: exact routes for `d <= 4`, scans beyond.
pub fn depth_certificate(
    ring: &SemigroupRing,
    bound: Option<u32>,
) -> Result<DepthCertificate, DepthError> {
    match ring.desc.ambient_dim {
        1 | 2 => {
            if let (true, Some(el)) = depth1_test(ring) {
                return Ok(cert_depth1(el, ring));
            }
            assert!(
                is_cohen_macaulay(ring).0,
                "dimension at most two forces depth one or Cohen-Macaulay"
            );
            Ok(cert_cm(ring))
        }
        3 => depth_exact_d3(ring),
        4 => depth_exact_d4(ring, bound.unwrap_or(32)),
        _ => Ok(depth_via_scan(ring, bound)),
    }
}

/// Both sides of the depth-three equivalence in dimension four: a maximal
/// element for some cardinality-three subset of the extremal set versus a
/// degree whose `T` complex is disconnected with an isolated vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Depth3Report {
    pub maximal_side: Option<(Vec<usize>, SElement)>,
    pub isolated_side: Option<SElement>,
    pub scan_bound: u32,
}

pub fn prop_depth3_equivalence(
    ring: &SemigroupRing,
    bound: u32,
) -> Result<Depth3Report, DepthError> {
    let d = ring.desc.ambient_dim;
    if d != 4 {
        return Err(DepthError::DimensionNot4(d));
    }
    let cert = depth_exact_d4(ring, 32)?;
    if cert.depth != 3 {
        return Err(DepthError::Precondition("the equivalence applies at depth three"));
    }
    let ext = &ring.desc.extremal_indices;
    let mut maximal_side = None;
    'subsets: for skip in 0..4usize {
        let subset: Vec<usize> =
            (0..4).filter(|&v| v != skip).map(|v| ext[v]).collect();
        let w = has_maximal_element(ring, &subset);
        if w.kind == WitnessKind::Maximal {
            maximal_side = Some((subset, w.element.expect("witness element")));
            break 'subsets;
        }
    }
    let oracle = NormOracle::new(&ring.desc, bound);
    let mut isolated_side = None;
    oracle.for_each_element(&mut |c: &[u32]| {
        let b = SElement::from_u32_coords(c);
        if disconnected_with_isolated_vertex_with(ring, &b, &mut |x| oracle.contains(x)) {
            isolated_side = Some(b);
            return true;
        }
        false
    });
    // the isolated-vertex direction is exact; a found degree forces the
    // maximal element (the converse scan is bounded, so only this direction
    // can be asserted)
    if isolated_side.is_some() {
        assert!(
            maximal_side.is_some(),
            "isolated-vertex witness must force a maximal Apery element"
        );
    }
    Ok(Depth3Report { maximal_side, isolated_side, scan_bound: bound })
}

/// One record of the depth-two conjecture check: at depth two, some
/// two-element subset of the extremal set should have a maximal Apery
/// element.  The subset search is exact (socle-based), so an empty witness
/// at depth two is a genuine counterexample candidate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureRecord {
    pub depth: usize,
    pub subsets_tried: Vec<Vec<usize>>,
    pub witness: Option<(Vec<usize>, SElement)>,
    pub counterexample_candidate: bool,
}

pub fn conjecture_check(ring: &SemigroupRing, depth: usize) -> ConjectureRecord {
    let ext = &ring.desc.extremal_indices;
    let d = ext.len();
    let mut subsets_tried = Vec::new();
    let mut witness = None;
    for p in 0..d {
        for q in p + 1..d {
            let pair = vec![ext[p], ext[q]];
            subsets_tried.push(pair.clone());
            if witness.is_none() {
                let w = has_maximal_element(ring, &pair);
                if w.kind == WitnessKind::Maximal {
                    witness = Some((pair, w.element.expect("witness element")));
                }
            }
        }
    }
    let counterexample_candidate = depth == 2 && witness.is_none();
    ConjectureRecord { depth, subsets_tried, witness, counterexample_candidate }
}

/// Re-validate a certificate using only membership-level arithmetic (plus
/// the colon tests for regular sequences).
pub fn verify_certificate(ring: &SemigroupRing, cert: &DepthCertificate) -> bool {
    let d = ring.desc.ambient_dim;
    if cert.depth < 1 || cert.depth > d {
        return false;
    }
    match (&cert.method, &cert.witness) {
        (DepthMethod::SocleDepth1, Some(DepthWitness::MaximalApery { subset, element })) => {
            cert.depth == 1
                && subset.len() == 1
                && in_apery(ring, element, subset)
                && locally_maximal(ring, element, subset)
        }
        (DepthMethod::CmTest, None) => cert.depth == d && is_cohen_macaulay(ring).0,
        (DepthMethod::D3Trichotomy, Some(DepthWitness::MaximalApery { subset, element })) => {
            cert.depth == 2
                && subset.len() == 2
                && !depth1_test(ring).0
                && in_apery(ring, element, subset)
                && locally_maximal(ring, element, subset)
        }
        (DepthMethod::D4Theorem, Some(DepthWitness::TheoremTuple { roles, b, condition })) => {
            if cert.depth != 2 || depth1_test(ring).0 {
                return false;
            }
            let ext = &ring.desc.extremal_indices;
            let [i, j, k, l] = *roles;
            let gi = ring.desc.generators[ext[i]].clone();
            let gj = ring.desc.generators[ext[j]].clone();
            let gk = ring.desc.generators[ext[k]].clone();
            let gl = ring.desc.generators[ext[l]].clone();
            if !in_apery(ring, b, &[ext[i], ext[j]]) {
                return false;
            }
            let shift_ok = |plus: &[&SElement], minus: &[&SElement]| -> bool {
                let mut acc = b.clone();
                for v in plus {
                    acc = acc.add(v);
                }
                for v in minus {
                    match acc.checked_sub(v) {
                        Some(next) => acc = next,
                        None => return false,
                    }
                }
                ring.member(&acc)
            };
            match condition {
                1 => shift_ok(&[&gk], &[&gi]) && shift_ok(&[&gl], &[&gi]),
                2 => {
                    shift_ok(&[&gk], &[&gi])
                        && shift_ok(&[&gl], &[&gj])
                        && shift_ok(&[&gk, &gl], &[&gi, &gj])
                }
                _ => false,
            }
        }
        (DepthMethod::RegularSequence, Some(DepthWitness::RegularSequence { vars, form })) => {
            let e = ring.desc.num_gens;
            let mono = |v: usize| {
                let mut exp = vec![0u32; e];
                exp[v] = 1;
                Polynomial::monomial(exp)
            };
            let (r, s, sign) = *form;
            let third = if sign > 0 {
                mono(r).add(&mono(s), &ring.order)
            } else {
                mono(r).sub(&mono(s), &ring.order)
            };
            cert.depth == 3
                && !is_cohen_macaulay(ring).0
                && regular_sequence_check(ring, &[mono(vars[0]), mono(vars[1]), third])
        }
        (DepthMethod::PairAbsence, None) => {
            if cert.depth != 3 || d != 4 || depth1_test(ring).0 || is_cohen_macaulay(ring).0 {
                return false;
            }
            // depth two forces a pair-intersection maximal element, so
            // absence across all pairs pins the depth at three
            let ext = &ring.desc.extremal_indices;
            (0..4usize).all(|p| {
                (p + 1..4).all(|q| {
                    has_maximal_element(ring, &[ext[p], ext[q]]).kind != WitnessKind::Maximal
                })
            })
        }
        (DepthMethod::KoszulScan, witness) => match witness {
            Some(DepthWitness::HomologyDegree { p, degree }) => {
                d - p == cert.depth && koszul_homology_dim(ring, *p, degree) > 0
            }
            None => cert.depth == d,
            _ => false,
        },
        _ => false,
    }
}

/// `element + a_i` leaves the Apery set for every generator: maximality,
/// since Apery sets are closed under semigroup predecessors.
fn locally_maximal(ring: &SemigroupRing, element: &SElement, subset: &[usize]) -> bool {
    (0..ring.desc.num_gens)
        .all(|g| !in_apery(ring, &element.add(&ring.desc.generators[g]), subset))
}
