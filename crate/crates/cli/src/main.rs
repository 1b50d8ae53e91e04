use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use sgdepth_cli::{
    analyze, descriptor_from_rows, example_by_id, example_rows, generate_random_simplicial,
    parse_matrix, reproduce, rows_of, InstanceRecord, EXAMPLES,
};
use sgdepth_core::apery::{
    has_maximal_element, is_cohen_macaulay, maximal_apery_elements, SemigroupRing, WitnessKind,
};
use sgdepth_core::depth::{
    depth2_test_d4, depth_certificate, depth_exact_d3, depth_exact_d4, prop_depth3_equivalence,
    verify_certificate, DepthMethod,
};
use sgdepth_core::homology::{
    betti_scan, classify_t4, delta_complex, reduced_homology, Field,
};
use sgdepth_core::koszul::max_nonzero_koszul_p;
use sgdepth_core::semigroup::SElement;

const EXIT_VERIFIED: u8 = 0;
const EXIT_MISMATCH: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

/// Depth invariants of simplicial affine semigroup rings, exactly.
#[derive(Parser)]
#[command(name = "sgdepth", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct InputArgs {
    /// Input file with the matrix (JSON {"matrix": [[..]]} or text rows);
    /// reads stdin when omitted unless --example is given.
    #[arg(long, short = 'i')]
    input: Option<PathBuf>,
    /// Use an embedded example instead of reading a matrix.
    #[arg(long, value_parser = EXAMPLES.iter().map(|c| c.id).collect::<Vec<_>>())]
    example: Option<String>,
}

impl InputArgs {
    fn ring(&self) -> Result<SemigroupRing> {
        let rows = if let Some(id) = &self.example {
            example_rows(example_by_id(id).expect("validated by clap"))
        } else {
            let text = match &self.input {
                Some(p) => fs::read_to_string(p)
                    .with_context(|| format!("reading {}", p.display()))?,
                None => {
                    let mut buf = String::new();
                    std::io::stdin().read_to_string(&mut buf)?;
                    buf
                }
            };
            parse_matrix(&text)?
        };
        Ok(SemigroupRing::new(descriptor_from_rows(&rows)?))
    }
}

fn parse_field(s: &str) -> Result<Field, String> {
    if s == "rational" {
        return Ok(Field::Rational);
    }
    if let Some(p) = s.strip_prefix("p:") {
        let p: u64 = p.parse().map_err(|_| format!("bad prime: {p}"))?;
        if p < 2 || (2..p).take_while(|q| q * q <= p).any(|q| p % q == 0) {
            return Err(format!("{p} is not prime"));
        }
        return Ok(Field::Prime(p));
    }
    Err("expected 'rational' or 'p:<prime>'".to_string())
}

#[derive(Subcommand)]
enum Command {
    /// Validate a matrix as a simplicial affine semigroup.
    Validate(InputArgs),
    /// Compute the depth with a certificate.
    Depth {
        #[command(flatten)]
        input: InputArgs,
        /// Degree 1-norm bound for witness searches and scans.
        #[arg(long)]
        bound: Option<u32>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Maximal elements of an Apery set over a subset of extremal generators.
    Apery {
        #[command(flatten)]
        input: InputArgs,
        /// Comma-separated 1-based generator indices (must be extremal).
        #[arg(long)]
        delta: String,
    },
    /// Graded Betti numbers by bounded scan.
    Betti {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        bound: Option<u32>,
        /// Coefficient field: 'rational' or 'p:<prime>'.
        #[arg(long, default_value = "rational", value_parser = parse_field)]
        field: Field,
    },
    /// Top nonvanishing Koszul homology index by bounded scan.
    Koszul {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 40)]
        bound: u32,
    },
    /// Classify the extremal-subset complex T_b of a degree (d = 4 only).
    ClassifyT {
        #[command(flatten)]
        input: InputArgs,
        /// Comma-separated coordinates of the degree.
        #[arg(long)]
        degree: String,
    },
    /// Check one of the characterization statements on an instance.
    Check {
        #[command(flatten)]
        input: InputArgs,
        /// One of: depth1, cm, th-depth2-d3, th-depth2-d4, prop-depth3.
        statement: String,
        #[arg(long, default_value_t = 32)]
        bound: u32,
    },
    /// Random search for depth-2 instances without a 2-subset witness.
    ConjectureSearch {
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value_t = 6)]
        e: usize,
        #[arg(long, default_value_t = 9)]
        coord_max: i64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// JSONL sink; existing lines are counted and the search resumes.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Generate one random instance and print its matrix.
    Generate {
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value_t = 6)]
        e: usize,
        #[arg(long, default_value_t = 9)]
        coord_max: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Re-run the embedded example corpus and diff against expected values.
    #[command(alias = "reproduce-paper")]
    Reproduce {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn parse_indices(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| {
            let v: usize = t.trim().parse().context("index")?;
            if v == 0 {
                bail!("indices are 1-based");
            }
            Ok(v - 1)
        })
        .collect()
}

fn parse_degree(s: &str, dim: usize) -> Result<SElement> {
    let coords: Vec<i64> = s
        .split(',')
        .map(|t| t.trim().parse().map_err(|e| anyhow!("bad coordinate: {e}")))
        .collect::<Result<_>>()?;
    if coords.len() != dim {
        bail!("degree has {} coordinates, expected {dim}", coords.len());
    }
    Ok(SElement::from_i64(&coords))
}

fn selem_json(el: &SElement) -> serde_json::Value {
    json!(el.0.iter().map(|x| x.to_string()).collect::<Vec<_>>())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Validate(input) => {
            let ring = input.ring()?;
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "ambient_dim": ring.desc.ambient_dim,
                    "num_gens": ring.desc.num_gens,
                    "generators": ring.desc.generators.iter().map(selem_json).collect::<Vec<_>>(),
                    "extremal_indices_1based":
                        ring.desc.extremal_indices.iter().map(|i| i + 1).collect::<Vec<_>>(),
                }))?
            );
            Ok(EXIT_VERIFIED)
        }
        Command::Depth { input, bound, format } => {
            let ring = input.ring()?;
            let cert = depth_certificate(&ring, bound)?;
            let verified = verify_certificate(&ring, &cert);
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "certificate": cert,
                        "verified": verified,
                    }))?
                ),
                Format::Text => println!(
                    "depth {} via {:?} (verified: {verified})",
                    cert.depth, cert.method
                ),
            }
            Ok(if !verified {
                EXIT_MISMATCH
            } else if cert.method == DepthMethod::KoszulScan {
                EXIT_INCONCLUSIVE
            } else {
                EXIT_VERIFIED
            })
        }
        Command::Apery { input, delta } => {
            let ring = input.ring()?;
            let delta = parse_indices(&delta)?;
            for &i in &delta {
                if !ring.desc.extremal_indices.contains(&i) {
                    bail!("generator {} is not extremal", i + 1);
                }
            }
            let maxima = maximal_apery_elements(&ring, &delta);
            let witness = maxima.first().map(|(el, f)| {
                json!({
                    "element": selem_json(el),
                    "factorization": f.0.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                })
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "apery": {
                        "delta": delta.iter().map(|i| i + 1).collect::<Vec<_>>(),
                        "maximal": !maxima.is_empty(),
                        "witness": witness,
                        "all_maximal": maxima
                            .iter()
                            .map(|(el, _)| selem_json(el))
                            .collect::<Vec<_>>(),
                    }
                }))?
            );
            Ok(EXIT_VERIFIED)
        }
        Command::Betti { input, bound, field } => {
            let ring = input.ring()?;
            let table = betti_scan(&ring, bound);
            let mut out = table.to_json();
            if let Field::Prime(p) = field {
                // recompute each nonzero entry over F_p for comparison
                let mut rows = Vec::new();
                for ((i, b), &m) in &table.entries {
                    if *i < 2 {
                        continue;
                    }
                    let complex = delta_complex(&ring, b)?;
                    let hp = reduced_homology(&complex, Field::Prime(p))?
                        .dim_at(*i as i64 - 1);
                    rows.push(json!({
                        "i": i,
                        "degree": selem_json(b),
                        "rational": m,
                        "fp": hp,
                    }));
                }
                out["field_comparison"] = json!({ "p": p, "entries": rows });
            }
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(EXIT_VERIFIED)
        }
        Command::Koszul { input, bound } => {
            let ring = input.ring()?;
            let (p, witness) = max_nonzero_koszul_p(&ring, bound);
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "max_nonzero_p": p,
                    "witness_degree": witness.as_ref().map(selem_json),
                    "depth_estimate": ring.desc.ambient_dim - p,
                    "scan_bound": bound,
                }))?
            );
            Ok(EXIT_INCONCLUSIVE)
        }
        Command::ClassifyT { input, degree } => {
            let ring = input.ring()?;
            let c = parse_degree(&degree, ring.desc.ambient_dim)?;
            let shape = classify_t4(&ring, &c)?;
            println!("{}", serde_json::to_string_pretty(&json!({"shape": format!("{shape:?}")}))?);
            Ok(EXIT_VERIFIED)
        }
        Command::Check { input, statement, bound } => {
            let ring = input.ring()?;
            check_statement(&ring, &statement, bound)
        }
        Command::ConjectureSearch { d, e, coord_max, count, seed, out, threads } => {
            conjecture_search(d, e, coord_max, count, seed, &out, threads.max(1))
        }
        Command::Generate { d, e, coord_max, seed } => {
            let desc = generate_random_simplicial(d, e, coord_max, seed)?;
            println!("{}", serde_json::to_string_pretty(&json!({"matrix": rows_of(&desc)}))?);
            Ok(EXIT_VERIFIED)
        }
        Command::Reproduce { format } => {
            let report = reproduce();
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&report)?),
                Format::Text => {
                    for line in &report.lines {
                        let status = if line.ok { "ok" } else { "MISMATCH" };
                        println!("{}: {} ... {status}", line.example, line.check);
                        if !line.ok {
                            println!("  expected: {}", line.expected);
                            println!("  actual:   {}", line.actual);
                        }
                    }
                }
            }
            Ok(if report.all_ok() { EXIT_VERIFIED } else { EXIT_MISMATCH })
        }
    }
}

fn check_statement(ring: &SemigroupRing, statement: &str, bound: u32) -> Result<u8> {
    let d = ring.desc.ambient_dim;
    let verdict = |name: &str, holds: bool, detail: serde_json::Value| -> Result<u8> {
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "check": name, "holds": holds, "detail": detail,
            }))?
        );
        Ok(if holds { EXIT_VERIFIED } else { EXIT_MISMATCH })
    };
    match statement {
        // depth = 1 iff Ap(S, a) has a maximal element, for every single a
        "depth1" => {
            let cert = depth_certificate(ring, Some(bound))?;
            let votes: Vec<bool> = ring
                .desc
                .extremal_indices
                .iter()
                .map(|&i| has_maximal_element(ring, &[i]).kind == WitnessKind::Maximal)
                .collect();
            let agree = votes.iter().all(|&v| v == (cert.depth == 1))
                && votes.iter().all(|&v| v == votes[0]);
            verdict("depth1", agree, json!({"depth": cert.depth, "votes": votes}))
        }
        "cm" => {
            let cert = depth_certificate(ring, Some(bound))?;
            let cm = is_cohen_macaulay(ring).0;
            verdict("cm", cm == (cert.depth == d), json!({"depth": cert.depth, "cm": cm}))
        }
        "th-depth2-d3" => {
            let cert = depth_exact_d3(ring)?;
            let mut pair_witness = false;
            for p in 0..3usize {
                for q in p + 1..3 {
                    let pair = [ring.desc.extremal_indices[p], ring.desc.extremal_indices[q]];
                    if has_maximal_element(ring, &pair).kind == WitnessKind::Maximal {
                        pair_witness = true;
                    }
                }
            }
            let holds = (cert.depth == 2) == (cert.depth != 1 && pair_witness)
                || cert.depth != 2;
            verdict(
                "th-depth2-d3",
                holds && (cert.depth != 2 || pair_witness),
                json!({"depth": cert.depth, "pair_witness": pair_witness}),
            )
        }
        "th-depth2-d4" => {
            let cert = depth_exact_d4(ring, bound)?;
            let witness = depth2_test_d4(ring, bound).ok();
            let holds = (cert.depth == 2) == witness.is_some();
            if cert.depth == 2 || witness.is_some() {
                verdict(
                    "th-depth2-d4",
                    holds,
                    json!({"depth": cert.depth, "witness": witness}),
                )
            } else {
                // no witness at this bound and depth != 2: consistent but
                // the witness search alone is inconclusive
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "check": "th-depth2-d4", "holds": true,
                        "detail": {"depth": cert.depth, "witness_bound_exhausted": bound},
                    }))?
                );
                Ok(EXIT_INCONCLUSIVE)
            }
        }
        "prop-depth3" => {
            let report = prop_depth3_equivalence(ring, bound)?;
            match (&report.maximal_side, &report.isolated_side) {
                (Some(_), Some(_)) | (None, None) => verdict(
                    "prop-depth3",
                    true,
                    serde_json::to_value(&report)?,
                ),
                (Some(_), None) => {
                    // bounded scan may simply not have reached the witness
                    println!("{}", serde_json::to_string_pretty(&report)?);
                    Ok(EXIT_INCONCLUSIVE)
                }
                (None, Some(_)) => verdict("prop-depth3", false, serde_json::to_value(&report)?),
            }
        }
        other => bail!("unknown statement '{other}'"),
    }
}

fn conjecture_search(
    d: usize,
    e: usize,
    coord_max: i64,
    count: usize,
    seed: u64,
    out: &PathBuf,
    threads: usize,
) -> Result<u8> {
    let done = match fs::read_to_string(out) {
        Ok(s) => s.lines().filter(|l| !l.trim().is_empty()).count(),
        Err(_) => 0,
    };
    if done >= count {
        eprintln!("already have {done} records, nothing to do");
        return Ok(EXIT_VERIFIED);
    }
    let indices: Vec<usize> = (done..count).collect();
    let mut records: Vec<Option<InstanceRecord>> = vec![None; indices.len()];
    let chunk = indices.len().div_ceil(threads);
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for (t, slot) in records.chunks_mut(chunk).enumerate() {
            let start = done + t * chunk;
            handles.push(scope.spawn(move || {
                for (k, cell) in slot.iter_mut().enumerate() {
                    let instance_seed = seed.wrapping_add((start + k) as u64);
                    let desc = generate_random_simplicial(d, e, coord_max, instance_seed)
                        .expect("sampler converges");
                    *cell = Some(analyze(desc, &format!("seed:{instance_seed}"), None));
                }
            }));
        }
        for h in handles {
            h.join().expect("worker");
        }
    });
    let mut file = fs::OpenOptions::new().create(true).append(true).open(out)?;
    let mut candidates = 0usize;
    for rec in records.into_iter().flatten() {
        if rec.conjecture.counterexample_candidate {
            candidates += 1;
            eprintln!("counterexample candidate: {:?}", rec.matrix);
        }
        writeln!(file, "{}", serde_json::to_string(&rec)?)?;
    }
    eprintln!(
        "wrote {} records to {} ({candidates} counterexample candidates)",
        count - done,
        out.display()
    );
    Ok(if candidates == 0 { EXIT_VERIFIED } else { EXIT_MISMATCH })
}
