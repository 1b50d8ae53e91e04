//! Acceptance gate: one test per criterion, each printing a single
//! `ACCEPTANCE <n> <name>: PASS|FAIL` line directly to stdout (bypassing
//! test capture) and panicking on failure.
//!
//! Criteria 7 and 8 share a seeded 500-instance random corpus that is
//! generated once per test-binary run.

use std::io::Write as _;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use sgdepth_cli::{
    descriptor_from_rows, example_by_id, example_rows, generate_random_simplicial,
    reproduce_case, DiffReport, EXAMPLES,
};
use sgdepth_core::apery::{
    apery_of_extremals, is_cohen_macaulay, maximal_apery_elements,
    regular_sequence_check, SemigroupRing,
};
use sgdepth_core::depth::{
    conjecture_check, depth2_test_d4, depth_certificate, depth_exact_d3,
    depth_via_scan, verify_certificate, DepthError, DepthMethod, DepthWitness,
};
use sgdepth_core::homology::{
    betti_scan, delta_complex, reduced_homology, t_complex, Field, SimplicialComplex,
};
use sgdepth_core::koszul::{
    construct_cycle_3i, construct_cycle_4i, koszul_homology_dim,
    verify_cycle_not_boundary,
};
use sgdepth_core::poly::Polynomial;
use sgdepth_core::scan::NormOracle;
use sgdepth_core::semigroup::SElement;

// ---------------------------------------------------------------------------
// gate plumbing

struct Checks {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Checks {
    fn check(&mut self, label: &str, ok: bool) {
        if !ok {
            self.failures.push(label.to_string());
        }
    }

    fn note(&mut self, text: String) {
        self.notes.push(text);
    }
}

fn emit(line: &str) {
    // write straight to the real stdout so the line survives test capture
    let mut out = std::io::stdout().lock();
    writeln!(out, "{line}").unwrap();
    out.flush().unwrap();
}

fn gate(n: usize, name: &str, budget: Option<Duration>, body: impl FnOnce(&mut Checks)) {
    let mut checks = Checks { failures: Vec::new(), notes: Vec::new() };
    let start = Instant::now();
    body(&mut checks);
    let elapsed = start.elapsed();
    if let Some(limit) = budget {
        checks.check(&format!("runtime {elapsed:.1?} within {limit:.0?}"), elapsed <= limit);
    }
    let notes = if checks.notes.is_empty() {
        String::new()
    } else {
        format!(" ({})", checks.notes.join("; "))
    };
    if checks.failures.is_empty() {
        emit(&format!("ACCEPTANCE {n} {name}: PASS{notes} [{elapsed:.1?}]"));
    } else {
        emit(&format!(
            "ACCEPTANCE {n} {name}: FAIL{notes} [{}]",
            checks.failures.join("; ")
        ));
        panic!("acceptance criterion {n} failed: {}", checks.failures.join("; "));
    }
}

fn ring_for(id: &str) -> SemigroupRing {
    let case = example_by_id(id).expect("known example id");
    SemigroupRing::new(descriptor_from_rows(&example_rows(case)).expect("example validates"))
}

fn push_report(checks: &mut Checks, report: &DiffReport) {
    for line in &report.lines {
        checks.check(
            &format!(
                "{}/{} expected {} got {}",
                line.example, line.check, line.expected, line.actual
            ),
            line.ok,
        );
    }
}

// ---------------------------------------------------------------------------
// shared random corpus for criteria 7 and 8

struct CorpusItem {
    seed: u64,
    ring: SemigroupRing,
    cert: sgdepth_core::depth::DepthCertificate,
}

static CORPUS: OnceLock<Vec<CorpusItem>> = OnceLock::new();

const CORPUS_SIZE: u64 = 500;
const CORPUS_PARAMS: [(usize, usize, i64); 3] = [(3, 6, 9), (4, 6, 5), (4, 7, 5)];

fn corpus() -> &'static [CorpusItem] {
    CORPUS.get_or_init(|| {
        (0..CORPUS_SIZE)
            .map(|seed| {
                let (d, e, m) = CORPUS_PARAMS[(seed % 3) as usize];
                let desc = generate_random_simplicial(d, e, m, seed)
                    .expect("generator succeeds on these parameters");
                let ring = SemigroupRing::new(desc);
                let cert = depth_certificate(&ring, Some(32)).expect("supported dimension");
                CorpusItem { seed, ring, cert }
            })
            .collect()
    })
}

// ---------------------------------------------------------------------------
// criteria 1-6: the six embedded examples

#[test]
fn criterion_1_first_three_dimensional_example() {
    gate(1, "d3e6-a depth, initial ideals, pair witnesses", Some(Duration::from_secs(10)), |c| {
        let ring = ring_for("d3e6-a");
        let exact = depth_exact_d3(&ring).expect("dimension three");
        let scan = depth_via_scan(&ring, None);
        c.check("exact route depth 2", exact.depth == 2);
        c.check("scan route agrees", scan.depth == 2);
        let mut report = DiffReport::default();
        reproduce_case(example_by_id("d3e6-a").unwrap(), &mut report);
        push_report(c, &report);
    });
}

#[test]
fn criterion_2_betti_six_example() {
    gate(2, "d3e6-b Betti table and descended maxima", Some(Duration::from_secs(300)), |c| {
        let mut report = DiffReport::default();
        reproduce_case(example_by_id("d3e6-b").unwrap(), &mut report);
        push_report(c, &report);
    });
}

#[test]
fn criterion_3_betti_two_example() {
    gate(3, "d3e6-c Betti degrees and intersection maxima", Some(Duration::from_secs(120)), |c| {
        let mut report = DiffReport::default();
        reproduce_case(example_by_id("d3e6-c").unwrap(), &mut report);
        push_report(c, &report);
    });
}

#[test]
fn criterion_4_seven_generator_example() {
    gate(4, "d4e7 depth three by regular sequence", Some(Duration::from_secs(120)), |c| {
        let ring = ring_for("d4e7");
        let mut report = DiffReport::default();
        reproduce_case(example_by_id("d4e7").unwrap(), &mut report);
        push_report(c, &report);
        for bound in [8u32, 16, 32] {
            c.check(
                &format!("no depth-2 witness at bound {bound}"),
                matches!(depth2_test_d4(&ring, bound), Err(DepthError::BoundExhausted(_))),
            );
        }
        let mono = |v: usize| {
            let mut exp = vec![0u32; 7];
            exp[v] = 1;
            Polynomial::monomial(exp)
        };
        let corrected = regular_sequence_check(
            &ring,
            &[mono(0), mono(1), mono(2).add(&mono(3), &ring.order)],
        );
        let quoted = regular_sequence_check(
            &ring,
            &[mono(2), mono(3), mono(0).add(&mono(1), &ring.order)],
        );
        c.check("(x1, x2, x3+x4) is a regular sequence", corrected);
        c.check("(x3, x4, x1+x2) fails its colon test", !quoted);
        c.note(
            "documented deviation: the externally quoted sequence (x3, x4, x1+x2) is not \
             regular (x4 is a zero-divisor mod x3); depth 3 is certified by (x1, x2, x3+x4)"
                .to_string(),
        );
    });
}

#[test]
fn criterion_5_six_generator_example() {
    gate(5, "d4e6 depth three with no triple witness", Some(Duration::from_secs(120)), |c| {
        let mut report = DiffReport::default();
        reproduce_case(example_by_id("d4e6").unwrap(), &mut report);
        push_report(c, &report);
    });
}

#[test]
fn criterion_6_eight_generator_example() {
    gate(6, "d4e8 depth three with triple witness", Some(Duration::from_secs(120)), |c| {
        let mut report = DiffReport::default();
        reproduce_case(example_by_id("d4e8").unwrap(), &mut report);
        push_report(c, &report);
    });
}

// ---------------------------------------------------------------------------
// criterion 7: invariant-based property suite

/// Reduced Euler characteristic identity: alternating face count equals the
/// alternating sum of reduced homology dimensions.
fn euler_identity_holds(complex: &SimplicialComplex) -> bool {
    let profile = match reduced_homology(complex, Field::Rational) {
        Ok(p) => p,
        Err(_) => return false,
    };
    let mut chi: i64 = 0;
    for face in &complex.faces {
        // a face of cardinality k spans chain degree k - 1
        if face.len() % 2 == 0 {
            chi -= 1;
        } else {
            chi += 1;
        }
    }
    let mut hom: i64 = 0;
    for (&j, &h) in &profile.dims {
        if j % 2 == 0 {
            hom += h as i64;
        } else {
            hom -= h as i64;
        }
    }
    chi == hom
}

fn norm_u32(el: &SElement) -> u32 {
    u32::try_from(&el.norm1()).expect("norms in this suite fit u32")
}

/// Verify the standard-monomial model of `Ap(S, E)` against the defining
/// membership conditions inside an exact scan box, and cross-check the two
/// membership routes (table oracle vs. direct arithmetic) on difference
/// vectors, which is the divisibility-versus-order comparison on `S`-degrees.
fn apery_model_checks(item: &CorpusItem, c: &mut Checks, order_pairs: &mut usize) -> Vec<SElement> {
    let ring = &item.ring;
    let model = apery_of_extremals(ring);
    let tag = format!("seed {}", item.seed);
    c.check(&format!("{tag}: model nonempty"), !model.is_empty());
    let distinct = model.windows(2).all(|w| w[0] != w[1]);
    c.check(&format!("{tag}: degree map injective"), distinct);
    let max_norm = model.iter().map(norm_u32).max().unwrap_or(0);
    let gen_max = ring.desc.generators.iter().map(norm_u32).max().unwrap_or(0);
    let oracle = NormOracle::new(&ring.desc, max_norm + 2 * gen_max);
    let extremals: Vec<SElement> = ring
        .desc
        .extremal_indices
        .iter()
        .map(|&i| ring.desc.generators[i].clone())
        .collect();
    let in_ap = |b: &SElement| -> bool {
        oracle.contains(b)
            && extremals.iter().all(|a| match b.checked_sub(a) {
                None => true,
                Some(diff) => !oracle.contains(&diff),
            })
    };
    c.check(&format!("{tag}: every model element satisfies the Apery conditions"), {
        model.iter().all(&in_ap)
    });
    // completeness within the scan box: no Apery element of norm at most the
    // model maximum is missing
    let mut complete = true;
    oracle.for_each_element(&mut |coords: &[u32]| {
        if coords.iter().map(|&x| x as u64).sum::<u64>() <= max_norm as u64 {
            let b = SElement::from_u32_coords(coords);
            if in_ap(&b) && model.binary_search(&b).is_err() {
                complete = false;
                return true;
            }
        }
        false
    });
    c.check(&format!("{tag}: model is complete within the scan box"), complete);
    // divisibility <-> order: t^a divides t^b in the semigroup ring exactly
    // when b - a lies in S; compare the table oracle against the direct
    // membership routine on a deterministic sample of ordered pairs
    let mut agree = true;
    let mut sampled = 0usize;
    'pairs: for (i, a) in model.iter().enumerate() {
        for b in model.iter().skip(i + 1) {
            if sampled >= 40 {
                break 'pairs;
            }
            if let Some(diff) = b.checked_sub(a) {
                sampled += 1;
                if oracle.contains(&diff) != ring.member(&diff) {
                    agree = false;
                    break 'pairs;
                }
            }
        }
    }
    *order_pairs += sampled;
    c.check(&format!("{tag}: divisibility and degree order agree"), agree);
    model
}

/// The two-sided maximality check: the socle-model answer, the one-step
/// local criterion, and the definitional order-maximality must coincide.
fn maximality_checks(item: &CorpusItem, model: &[SElement], c: &mut Checks) {
    let ring = &item.ring;
    let tag = format!("seed {}", item.seed);
    let ext = ring.desc.extremal_indices.clone();
    let reported: Vec<SElement> =
        maximal_apery_elements(ring, &ext).into_iter().map(|(el, _)| el).collect();
    let max_norm = model.iter().map(norm_u32).max().unwrap_or(0);
    let gen_max = ring.desc.generators.iter().map(norm_u32).max().unwrap_or(0);
    let oracle = NormOracle::new(&ring.desc, max_norm + 2 * gen_max);
    let extremals: Vec<SElement> =
        ext.iter().map(|&i| ring.desc.generators[i].clone()).collect();
    let in_ap = |b: &SElement| -> bool {
        oracle.contains(b)
            && extremals.iter().all(|a| match b.checked_sub(a) {
                None => true,
                Some(diff) => !oracle.contains(&diff),
            })
    };
    // one-step local criterion: b + a_g leaves the Apery set for every g
    let mut local: Vec<SElement> = model
        .iter()
        .filter(|b| ring.desc.generators.iter().all(|g| !in_ap(&b.add(g))))
        .cloned()
        .collect();
    local.sort();
    // definitional criterion: no other Apery element dominates in the order
    let mut definitional: Vec<SElement> = model
        .iter()
        .filter(|b| {
            model.iter().all(|other| {
                *other == **b
                    || match other.checked_sub(b) {
                        None => true,
                        Some(diff) => !oracle.contains(&diff),
                    }
            })
        })
        .cloned()
        .collect();
    definitional.sort();
    let mut sorted_reported = reported;
    sorted_reported.sort();
    c.check(&format!("{tag}: local criterion matches the socle model"), local == sorted_reported);
    c.check(&format!("{tag}: local criterion matches order maximality"), local == definitional);
}

#[test]
fn criterion_7_property_suite() {
    gate(7, "invariant property suite", Some(Duration::from_secs(1800)), |c| {
        let corpus = corpus();

        // (a) + (e): Apery model and maximality coherence on 200 instances
        let mut order_pairs = 0usize;
        for item in corpus.iter().take(200) {
            let model = apery_model_checks(item, c, &mut order_pairs);
            maximality_checks(item, &model, c);
        }
        c.note(format!("order/divisibility pairs compared: {order_pairs}"));

        // (b) + (c): Koszul graded slices against the extremal-subset
        // complexes, with the Euler identity on every complex built here
        let mut slices = 0usize;
        let mut complexes = 0usize;
        for item in corpus.iter().take(18) {
            let ring = &item.ring;
            let d = ring.desc.ambient_dim;
            let oracle = NormOracle::new(&ring.desc, 24);
            let mut points: Vec<SElement> = Vec::new();
            oracle.for_each_element(&mut |coords: &[u32]| {
                let norm: u64 = coords.iter().map(|&x| x as u64).sum();
                if (8..=24).contains(&norm) {
                    points.push(SElement::from_u32_coords(coords));
                }
                points.len() >= 4
            });
            for b in &points {
                let t = t_complex(ring, b).expect("b lies in S");
                let profile = reduced_homology(&t, Field::Rational).expect("nonvoid");
                for p in 1..=d {
                    let koszul = koszul_homology_dim(ring, p, b);
                    let bridge = profile.dim_at(p as i64 - 1);
                    slices += 1;
                    c.check(
                        &format!("seed {}: Koszul slice p={p} at {:?} matches", item.seed, b.0),
                        koszul == bridge,
                    );
                }
                c.check(
                    &format!("seed {}: Euler identity on T at {:?}", item.seed, b.0),
                    euler_identity_holds(&t),
                );
                let delta = delta_complex(ring, b).expect("b lies in S");
                c.check(
                    &format!("seed {}: Euler identity on Delta at {:?}", item.seed, b.0),
                    euler_identity_holds(&delta),
                );
                complexes += 2;
            }
        }
        c.check("at least 100 bridge slices compared", slices >= 100);
        c.note(format!("bridge slices: {slices}, complexes Euler-checked: {complexes}"));

        // (d) Auslander-Buchsbaum agreement on the six embedded examples
        for case in EXAMPLES {
            let ring = ring_for(case.id);
            let table = betti_scan(&ring, None);
            let e = ring.desc.num_gens;
            let max_i = (1..=e).rev().find(|&i| table.total(i) > 0);
            c.check(
                &format!("{}: depth equals e - max nonzero Betti index", case.id),
                max_i.map(|i| e - i) == Some(case.depth),
            );
        }

        // (f) every random depth-2 d=3 instance carries a pair witness
        let mut d3_depth2 = 0usize;
        for item in corpus {
            if item.ring.desc.ambient_dim == 3 && item.cert.depth == 2 {
                d3_depth2 += 1;
                let ok = matches!(
                    &item.cert.witness,
                    Some(DepthWitness::MaximalApery { subset, .. }) if subset.len() == 2
                ) && verify_certificate(&item.ring, &item.cert);
                c.check(&format!("seed {}: depth-2 d=3 pair witness", item.seed), ok);
            }
        }
        c.check("corpus contains depth-2 d=3 instances", d3_depth2 > 0);

        // (g) the depth-2 conjecture holds across the whole corpus
        let mut depth2 = 0usize;
        for item in corpus {
            if item.cert.depth != 2 {
                continue;
            }
            depth2 += 1;
            let record = conjecture_check(&item.ring, item.cert.depth);
            if record.counterexample_candidate {
                c.check(&format!("seed {}: conjecture counterexample candidate", item.seed), false);
            } else {
                c.check(
                    &format!("seed {}: cardinality-2 witness found", item.seed),
                    matches!(&record.witness, Some((pair, _)) if pair.len() == 2),
                );
            }
        }
        c.note(format!(
            "corpus: {} instances, {} at depth 2 ({} with d=3)",
            corpus.len(),
            depth2,
            d3_depth2
        ));
    });
}

// ---------------------------------------------------------------------------
// criterion 8: explicit Koszul cycles

#[test]
fn criterion_8_koszul_cycles() {
    gate(8, "Koszul cycle construction and precondition scan", None, |c| {
        let mut depth2_cycles = 0usize;
        let mut deep_scans = 0usize;
        for item in corpus() {
            let ring = &item.ring;
            if ring.desc.ambient_dim != 4 {
                continue;
            }
            if item.cert.depth == 2 {
                // recover a theorem tuple and realize it as an explicit cycle
                let tuple = match &item.cert.witness {
                    Some(DepthWitness::TheoremTuple { roles, b, condition })
                        if item.cert.method == DepthMethod::D4Theorem =>
                    {
                        Some((*roles, b.clone(), *condition))
                    }
                    _ => match depth2_test_d4(ring, 300) {
                        Ok(DepthWitness::TheoremTuple { roles, b, condition }) => {
                            Some((roles, b, condition))
                        }
                        _ => None,
                    },
                };
                let Some(([i, j, k, l], b, condition)) = tuple else {
                    c.check(&format!("seed {}: no theorem tuple recovered", item.seed), false);
                    continue;
                };
                let cycle = match condition {
                    1 => {
                        let mut triple = [i, k, l];
                        triple.sort_unstable();
                        construct_cycle_3i(ring, &triple, i, j, &b)
                    }
                    _ => construct_cycle_4i(ring, &[i, k, l, j], &b),
                };
                let ok = match cycle {
                    Ok(z) => verify_cycle_not_boundary(ring, &z) == Ok(true),
                    Err(_) => false,
                };
                c.check(
                    &format!("seed {}: constructed cycle is not a boundary", item.seed),
                    ok,
                );
                depth2_cycles += 1;
            } else {
                // depth >= 3: the constructor preconditions (the two witness
                // conditions of the depth-2 search) must be unsatisfiable for
                // every base degree of norm at most 16
                deep_scans += 1;
                c.check(
                    &format!("seed {}: no constructor precondition within 16", item.seed),
                    matches!(depth2_test_d4(ring, 16), Err(DepthError::BoundExhausted(16))),
                );
            }
        }
        c.check("corpus contains depth-2 d=4 instances", depth2_cycles > 0);
        c.check("corpus contains deeper d=4 instances", deep_scans > 0);
        c.note(format!("cycles built: {depth2_cycles}, precondition scans: {deep_scans}"));

        // the three embedded d=4 examples all have depth 3: a direct spot
        // check that the constructors themselves reject sampled inputs
        for id in ["d4e7", "d4e6", "d4e8"] {
            let ring = ring_for(id);
            let oracle = NormOracle::new(&ring.desc, 16);
            let mut points: Vec<SElement> = Vec::new();
            oracle.for_each_element(&mut |coords: &[u32]| {
                if coords.iter().map(|&x| x as u64).sum::<u64>() <= 16 {
                    points.push(SElement::from_u32_coords(coords));
                }
                points.len() >= 6
            });
            let mut all_rejected = true;
            for b in &points {
                for i in 0..4usize {
                    for jj in 0..4usize {
                        if jj == i {
                            continue;
                        }
                        let others: Vec<usize> =
                            (0..4).filter(|&v| v != i && v != jj).collect();
                        let mut triple = [i, others[0], others[1]];
                        triple.sort_unstable();
                        if construct_cycle_3i(&ring, &triple, i, jj, b).is_ok() {
                            all_rejected = false;
                        }
                        if construct_cycle_4i(&ring, &[i, others[0], others[1], jj], b).is_ok() {
                            all_rejected = false;
                        }
                    }
                }
            }
            c.check(&format!("{id}: constructors reject all sampled inputs"), all_rejected);
        }
    });
}

// ---------------------------------------------------------------------------
// cross-cut sanity shared by the gate: the certificate checker accepts
// every certificate the corpus produced

#[test]
fn corpus_certificates_verify() {
    let mut bad = Vec::new();
    for item in corpus() {
        // scan-bounded Koszul certificates are reported as inconclusive by
        // the CLI and are exempt from independent re-validation here
        if item.cert.method == DepthMethod::KoszulScan {
            continue;
        }
        if !verify_certificate(&item.ring, &item.cert) {
            bad.push(item.seed);
        }
    }
    assert!(bad.is_empty(), "certificates failed re-validation for seeds {bad:?}");
    // Cohen-Macaulay agreement: full depth exactly on CM instances
    for item in corpus() {
        if item.cert.method == DepthMethod::KoszulScan {
            continue;
        }
        let cm = is_cohen_macaulay(&item.ring).0;
        assert_eq!(
            cm,
            item.cert.depth == item.ring.desc.ambient_dim,
            "Cohen-Macaulay flag disagrees with certified depth for seed {}",
            item.seed
        );
    }
}
