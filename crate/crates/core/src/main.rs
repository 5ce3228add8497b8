//! Command-line front end: parse graph documents, run decisions and
//! queries, serialize verdicts and certificates, and drive the oracle.
//!
//! Exit codes: 0 = positive answer, 1 = negative answer, 2 = input error.

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use perigid::blocks;
use perigid::bruteforce;
use perigid::doc::GraphDocument;
use perigid::gaingraph::GainGraph;
use perigid::oracle::{self, FieldConfig, Placement};
use perigid::sparsity;
use perigid::verdict::{self, Certificate, Surface, Verdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "perigid", version, about = "Global rigidity of periodic frameworks in the plane")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum QuerySub {
    Rank,
    Independent,
    Mcomp,
    Blocks,
    Zerotwoblock,
    Rigid,
    Redundant,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide generic global rigidity and print a certificate.
    Decide {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Cross-run the exhaustive reference decision and the field-rank
        /// oracle; any disagreement is an error.
        #[arg(long)]
        paranoid: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = oracle::DEFAULT_PRIME)]
        prime: u64,
        #[arg(long, default_value_t = 3)]
        trials: u32,
        /// Expected periodicity rank; must match the document.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Run a single query against the graph.
    Query {
        #[arg(value_enum)]
        sub: QuerySub,
        path: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Compare the combinatorial rank with the randomized field rank.
    Oracle {
        path: PathBuf,
        #[arg(long, default_value_t = oracle::DEFAULT_PRIME)]
        prime: u64,
        #[arg(long, default_value_t = 3)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Materialize a finite patch of the covering framework.
    Expand {
        path: PathBuf,
        /// Inclusive bounds per lattice direction: "lo,hi" (k = 1) or
        /// "lo,hi,lo,hi" (k = 2); omit for k = 0.
        #[arg(long, default_value = "")]
        window: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Contract a degree-3 vertex and print the reduced document.
    Reduce {
        path: PathBuf,
        #[arg(long)]
        vertex: String,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &PathBuf) -> Result<(GraphDocument, GainGraph), String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let doc = GraphDocument::parse(&text).map_err(|e| e.to_string())?;
    let graph = doc.to_graph().map_err(|e| e.to_string())?;
    Ok((doc, graph))
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.cmd {
        Cmd::Decide {
            path,
            format,
            paranoid,
            seed,
            prime,
            trials,
            k,
        } => {
            let (doc, graph) = load(&path)?;
            if let Some(expected) = k {
                if expected != doc.k {
                    return Err(format!(
                        "--k {expected} does not match document k = {}",
                        doc.k
                    ));
                }
            }
            let surface = doc.surface().map_err(|e| e.to_string())?;
            let verdict = match surface {
                Some(s) => verdict::decide_surface(&graph, s),
                None => verdict::decide(&graph),
            }
            .map_err(|e| e.to_string())?;
            if paranoid {
                run_paranoid(&doc, &graph, &verdict, seed, prime, trials)?;
            }
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string(&verdict_json(&verdict, &doc.vertices)).unwrap()
                ),
                Format::Text => print!("{}", verdict_text(&verdict, &doc.vertices, surface)),
            }
            Ok(if verdict.globally_rigid { 0 } else { 1 })
        }
        Cmd::Query { sub, path, format } => {
            let (doc, graph) = load(&path)?;
            let (value, text) = run_query(sub, &doc, &graph)?;
            match format {
                Format::Json => println!("{}", serde_json::to_string(&value).unwrap()),
                Format::Text => println!("{text}"),
            }
            Ok(0)
        }
        Cmd::Oracle {
            path,
            prime,
            trials,
            seed,
            format,
        } => {
            let (doc, graph) = load(&path)?;
            let lat = doc.lattice().map_err(|e| e.to_string())?;
            let cfg = FieldConfig {
                prime,
                seed,
                trials,
            };
            let report = oracle::cross_check(&graph, &lat, &cfg).map_err(|e| e.to_string())?;
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string(&json!({
                        "combinatorial": report.combinatorial,
                        "numeric": report.numeric,
                        "agree": report.agree,
                    }))
                    .unwrap()
                ),
                Format::Text => println!(
                    "combinatorial rank {}, field rank {}: {}",
                    report.combinatorial,
                    report.numeric,
                    if report.agree { "agree" } else { "DISAGREE" }
                ),
            }
            Ok(if report.agree { 0 } else { 1 })
        }
        Cmd::Expand { path, window, seed } => {
            let (doc, graph) = load(&path)?;
            let lat = doc.lattice().map_err(|e| e.to_string())?;
            let window = parse_window(&window, graph.k())?;
            let placement = seeded_placement(&graph, seed);
            let patch = oracle::expand_patch(&graph, &lat, &placement, &window)
                .map_err(|e| e.to_string())?;
            let points: Vec<Value> = patch
                .points
                .iter()
                .map(|p| {
                    json!({
                        "vertex": doc.vertices[p.vertex],
                        "shift": p.shift.coords(),
                        "x": p.position[0].to_string(),
                        "y": p.position[1].to_string(),
                    })
                })
                .collect();
            let bars: Vec<Value> = patch
                .bars
                .iter()
                .map(|b| json!({"a": b.a, "b": b.b, "edge": b.edge}))
                .collect();
            println!(
                "{}",
                serde_json::to_string(&json!({"points": points, "bars": bars})).unwrap()
            );
            Ok(0)
        }
        Cmd::Reduce { path, vertex } => {
            let (doc, graph) = load(&path)?;
            let v = doc
                .vertices
                .iter()
                .position(|name| *name == vertex)
                .ok_or_else(|| format!("unknown vertex {vertex:?}"))?;
            let reduced = verdict::contract_degree3(&graph, v).map_err(|e| e.to_string())?;
            let names: Vec<String> = doc
                .vertices
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != v)
                .map(|(_, n)| n.clone())
                .collect();
            let out = GraphDocument::from_graph(&reduced, &names);
            println!("{}", serde_json::to_string(&out).unwrap());
            Ok(0)
        }
    }
}

fn run_paranoid(
    doc: &GraphDocument,
    graph: &GainGraph,
    verdict: &Verdict,
    seed: u64,
    prime: u64,
    trials: u32,
) -> Result<(), String> {
    if graph.edge_count() <= 16 {
        let reference = bruteforce::bf_decide(graph).map_err(|e| e.to_string())?;
        if reference.globally_rigid != verdict.globally_rigid {
            return Err("reference decision disagrees with the production engine".to_string());
        }
    }
    let lat = doc.lattice().map_err(|e| e.to_string())?;
    let cfg = FieldConfig {
        prime,
        seed,
        trials,
    };
    let report = oracle::cross_check(graph, &lat, &cfg).map_err(|e| e.to_string())?;
    if !report.agree {
        return Err(format!(
            "field rank {} disagrees with combinatorial rank {}",
            report.numeric, report.combinatorial
        ));
    }
    Ok(())
}

fn parse_window(text: &str, k: usize) -> Result<Vec<(i64, i64)>, String> {
    let parts: Vec<&str> = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    if parts.len() != 2 * k {
        return Err(format!(
            "--window needs {} comma-separated integers for k = {k}, got {}",
            2 * k,
            parts.len()
        ));
    }
    let mut out = Vec::new();
    for pair in parts.chunks(2) {
        let lo: i64 = pair[0].parse().map_err(|_| format!("bad bound {:?}", pair[0]))?;
        let hi: i64 = pair[1].parse().map_err(|_| format!("bad bound {:?}", pair[1]))?;
        if lo > hi {
            return Err(format!("empty window {lo}..{hi}"));
        }
        out.push((lo, hi));
    }
    Ok(out)
}

/// Deterministic pseudo-generic rational placement for patch export.
fn seeded_placement(g: &GainGraph, seed: u64) -> Placement<BigRational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coords = (0..g.vertex_count())
        .map(|_| {
            let mut coordinate = || {
                BigRational::new(BigInt::from(rng.gen_range(-10_000i64..10_000)), BigInt::from(100))
            };
            [coordinate(), coordinate()]
        })
        .collect();
    Placement { coords }
}

fn run_query(
    sub: QuerySub,
    doc: &GraphDocument,
    g: &GainGraph,
) -> Result<(Value, String), String> {
    let full = g.full_edge_set();
    let names = &doc.vertices;
    match sub {
        QuerySub::Rank => {
            let rank = sparsity::rank2(g, &full).map_err(|e| e.to_string())?;
            Ok((json!({ "rank": rank }), format!("rank {rank}")))
        }
        QuerySub::Independent => {
            let independent = sparsity::is_independent(g, &full).map_err(|e| e.to_string())?;
            Ok((
                json!({ "independent": independent }),
                format!(
                    "edge set is {}",
                    if independent { "independent" } else { "dependent" }
                ),
            ))
        }
        QuerySub::Mcomp => {
            let parts = sparsity::m_components(g).map_err(|e| e.to_string())?;
            let classes: Vec<Vec<usize>> = parts
                .classes
                .iter()
                .map(|c| c.iter().copied().collect())
                .collect();
            let text = format!("{} matroid component(s): {classes:?}", classes.len());
            Ok((json!({ "classes": classes }), text))
        }
        QuerySub::Blocks => {
            let d = blocks::block_decomposition(g);
            let cut: Vec<&String> = d.cut_vertices.iter().map(|&v| &names[v]).collect();
            let block_edges: Vec<Vec<usize>> =
                d.blocks.iter().map(|b| b.iter().copied().collect()).collect();
            let text = format!(
                "cut vertices {:?}; {} block(s): {:?}",
                cut,
                block_edges.len(),
                block_edges
            );
            Ok((
                json!({ "cut_vertices": cut, "blocks": block_edges }),
                text,
            ))
        }
        QuerySub::Zerotwoblock => match blocks::find_zero_two_block(g) {
            Some(block) => {
                let gain = blocks::cleaving_gain(g, &block);
                let (a, b) = block.boundary;
                let interior: Vec<&String> = block.interior.iter().map(|&v| &names[v]).collect();
                let edges: Vec<usize> = block.edges.iter().copied().collect();
                let text = format!(
                    "(0,2)-block with boundary [{}, {}], interior {:?}, cleaving gain {:?}",
                    names[a],
                    names[b],
                    interior,
                    gain.coords()
                );
                Ok((
                    json!({
                        "boundary": [names[a], names[b]],
                        "interior": interior,
                        "edges": edges,
                        "cleaving_gain": gain.coords(),
                    }),
                    text,
                ))
            }
            None => Ok((json!(null), "no (0,2)-block".to_string())),
        },
        QuerySub::Rigid => {
            let rigid = if g.k() == 0 {
                sparsity::is_rigid_finite(g)
            } else {
                sparsity::is_periodically_rigid(g)
            }
            .map_err(|e| e.to_string())?;
            Ok((
                json!({ "rigid": rigid }),
                format!("{}rigid", if rigid { "" } else { "not " }),
            ))
        }
        QuerySub::Redundant => {
            let (redundant, witness) =
                sparsity::is_redundantly_rigid(g).map_err(|e| e.to_string())?;
            let text = match (redundant, witness) {
                (true, _) => "redundantly rigid".to_string(),
                (false, Some(e)) => format!("not redundantly rigid: deleting edge {e} breaks rigidity"),
                (false, None) => "not rigid".to_string(),
            };
            Ok((
                json!({ "redundant": redundant, "witness": witness }),
                text,
            ))
        }
    }
}

fn verdict_json(v: &Verdict, names: &[String]) -> Value {
    json!({
        "globally_rigid": v.globally_rigid,
        "certificate": certificate_json(&v.certificate, names),
    })
}

fn certificate_json(c: &Certificate, names: &[String]) -> Value {
    match c {
        Certificate::SatisfiesMain0 => json!({"kind": "satisfies_main0"}),
        Certificate::SatisfiesMain1 { blocks } => json!({
            "kind": "satisfies_main1",
            "components": blocks
                .iter()
                .map(|b| b.iter().copied().collect::<Vec<usize>>())
                .collect::<Vec<_>>(),
        }),
        Certificate::SatisfiesJJ => json!({"kind": "satisfies_jj"}),
        Certificate::SmallCaseRigid { reason } => {
            json!({"kind": "small_case_rigid", "reason": reason})
        }
        Certificate::Disconnected { component } => json!({
            "kind": "disconnected",
            "component": component.iter().map(|&v| &names[v]).collect::<Vec<_>>(),
        }),
        Certificate::NotTwoConnected { cut_vertex } => json!({
            "kind": "not_two_connected",
            "cut_vertex": names[*cut_vertex],
        }),
        Certificate::NotThreeConnected { pair } => json!({
            "kind": "not_three_connected",
            "pair": [names[pair.0], names[pair.1]],
        }),
        Certificate::NotRedundantlyRigid { witness } => json!({
            "kind": "not_redundantly_rigid",
            "witness": witness,
        }),
        Certificate::ZeroTwoBlock { block, component } => json!({
            "kind": "zero_two_block",
            "boundary": [names[block.boundary.0], names[block.boundary.1]],
            "interior": block.interior.iter().map(|&v| &names[v]).collect::<Vec<_>>(),
            "edges": block.edges.iter().copied().collect::<Vec<usize>>(),
            "component": component.iter().copied().collect::<Vec<usize>>(),
        }),
        Certificate::RankDeficientComponent { edges, rank } => json!({
            "kind": "rank_deficient_component",
            "edges": edges.iter().copied().collect::<Vec<usize>>(),
            "rank": rank,
        }),
        Certificate::SmallCaseFlexible { reason } => {
            json!({"kind": "small_case_flexible", "reason": reason})
        }
        Certificate::NotCompleteSmall => json!({"kind": "not_complete_small"}),
    }
}

fn verdict_text(v: &Verdict, names: &[String], surface: Option<Surface>) -> String {
    let head = if v.globally_rigid {
        "globally rigid"
    } else {
        "not globally rigid"
    };
    let balanced_word = if surface.is_some() {
        "contractible"
    } else {
        "balanced"
    };
    let detail = match &v.certificate {
        Certificate::SatisfiesMain0 => {
            "2-connected, redundantly periodically rigid, and free of (0,2)-blocks".to_string()
        }
        Certificate::SatisfiesMain1 { blocks } => format!(
            "every 2-connected component ({} total) has rank two, is redundantly periodically rigid, and is free of (0,2)-blocks",
            blocks.len()
        ),
        Certificate::SatisfiesJJ => "3-connected and redundantly rigid".to_string(),
        Certificate::SmallCaseRigid { reason } => reason.clone(),
        Certificate::Disconnected { component } => format!(
            "disconnected; one component is {:?}",
            component.iter().map(|&v| &names[v]).collect::<Vec<_>>()
        ),
        Certificate::NotTwoConnected { cut_vertex } => {
            format!("vertex {} is a cut vertex", names[*cut_vertex])
        }
        Certificate::NotThreeConnected { pair } => format!(
            "vertices {{{}, {}}} form a separating pair",
            names[pair.0], names[pair.1]
        ),
        Certificate::NotRedundantlyRigid { witness: Some(e) } => {
            format!("deleting edge {e} breaks rigidity")
        }
        Certificate::NotRedundantlyRigid { witness: None } => "not rigid".to_string(),
        Certificate::ZeroTwoBlock { block, .. } => format!(
            "{balanced_word} subgraph with boundary {{{}, {}}} and nonempty interior {:?}",
            names[block.boundary.0],
            names[block.boundary.1],
            block.interior.iter().map(|&v| &names[v]).collect::<Vec<_>>()
        ),
        Certificate::RankDeficientComponent { rank, .. } => format!(
            "a component's gain subgroup has rank {rank}, below the periodicity rank"
        ),
        Certificate::SmallCaseFlexible { reason } => reason.clone(),
        Certificate::NotCompleteSmall => {
            "small graphs must be complete to be globally rigid".to_string()
        }
    };
    format!("{head}: {detail}\n")
}
