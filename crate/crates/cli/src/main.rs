use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ocalc::atlas::{atlas_bundle, stratification_report, Atlas};
use ocalc::graph::fixtures;
use ocalc::spaces::{build_a, build_op, build_opbar};
use ocalc::verify::{run_suite, Corpus, Suite, VerifyConfig};
use ocalc::Graph;

/// Enumerate stable graphs, export posets and run the verification suites.
#[derive(Parser)]
#[command(name = "ocalc", version)]
struct Cli {
    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one suite (or `all`) and emit a JSON report.
    Verify(VerifyArgs),
    /// Write JSON or DOT artifacts.
    Export {
        #[command(subcommand)]
        what: ExportKind,
    },
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum BChoice {
    #[value(name = "0")]
    Zero,
    #[value(name = "1")]
    One,
    Both,
}

impl BChoice {
    fn values(self) -> Vec<u8> {
        match self {
            BChoice::Zero => vec![0],
            BChoice::One => vec![1],
            BChoice::Both => vec![0, 1],
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 2)]
    genus: u32,
    #[arg(long, value_enum, default_value = "both")]
    b: BChoice,
    /// Per-suite time budget; sweeps that run out stop and say so.
    #[arg(long)]
    budget_secs: Option<u64>,
    /// Contractions examined above genus 2, drawn with --seed (0 = all of them).
    #[arg(long, default_value_t = 0)]
    sample: usize,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    /// Leave wall time out of the report so repeated runs are byte-identical.
    #[arg(long)]
    no_timing: bool,
    /// Report file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum PosetKind {
    /// `A^b_G`
    A,
    /// `OP^b_G`
    Op,
    /// `ŌP^b_G`
    Opbar,
    /// `S_g`
    Sg,
    /// `A^b_g`
    Ag,
    /// `OP^b_g`
    Opg,
    /// `[OP^b_g]`
    Cop,
}

#[derive(Args)]
struct OutArgs {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Output directory (default: $OCALC_OUT, else stdout).
    #[arg(long, env = "OCALC_OUT")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ExportKind {
    /// One file per stable graph of the genus.
    Graphs {
        #[arg(long, default_value_t = 2)]
        genus: u32,
        #[command(flatten)]
        out: OutArgs,
    },
    /// A Hasse diagram of one of the posets.
    Poset {
        #[arg(long, value_enum)]
        kind: PosetKind,
        /// THETA, DUMBBELL, a JSON graph, or a path to one (graph-level kinds).
        #[arg(long)]
        graph: Option<String>,
        #[arg(long, default_value_t = 2)]
        genus: u32,
        #[arg(long, default_value_t = 0)]
        b: u8,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Atlas bundle and stratification tables for a genus.
    Atlas {
        #[arg(long, default_value_t = 2)]
        genus: u32,
        #[arg(long, default_value_t = 0)]
        b: u8,
        #[arg(long, env = "OCALC_OUT")]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<ocalc::Error> for Failure {
    fn from(e: ocalc::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    }
    let res = match cli.command {
        Command::Verify(args) => verify(args),
        Command::Export { what } => export(what).map(|()| true),
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}

fn check_genus(genus: u32) -> Result<(), Failure> {
    if !(2..=4).contains(&genus) {
        return Err(Failure::Usage(format!("genus must be between 2 and 4, got {genus}")));
    }
    Ok(())
}

fn check_b(b: u8) -> Result<(), Failure> {
    if b > 1 {
        return Err(Failure::Usage(format!("b must be 0 or 1, got {b}")));
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> Result<bool, Failure> {
    let suites = Suite::parse(&args.suite).ok_or_else(|| Failure::Usage(format!("unknown suite '{}'", args.suite)))?;
    check_genus(args.genus)?;
    let cfg = VerifyConfig {
        genus: args.genus,
        bs: args.b.values(),
        budget: args.budget_secs.map(Duration::from_secs),
        seed: args.seed,
        sample: if args.sample == 0 { usize::MAX } else { args.sample },
    };
    let corpus = Corpus::new(&cfg)?;
    let mut reports = Vec::new();
    let mut ok = true;
    for s in suites {
        let r = run_suite(s, &corpus, &cfg)?;
        eprintln!(
            "{:<14} {:>9} instances {:>9} passed {:>4} failed {:>7} ms",
            r.suite,
            r.instances,
            r.passes,
            r.failures.len(),
            r.elapsed_ms
        );
        ok &= r.passed();
        reports.push(if args.no_timing { r.payload() } else { r.to_json() });
    }
    let body = if args.suite == "all" { Value::Array(reports) } else { reports.pop().unwrap() };
    let text = serde_json::to_string_pretty(&body).expect("serializable") + "\n";
    match &args.out {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(ok)
}

fn parse_graph(spec: &str) -> Result<(String, Graph), Failure> {
    match spec.to_ascii_uppercase().as_str() {
        "THETA" => return Ok(("theta".into(), fixtures::theta())),
        "DUMBBELL" => return Ok(("dumbbell".into(), fixtures::dumbbell())),
        _ => {}
    }
    let text = if spec.trim_start().starts_with('{') {
        spec.to_string()
    } else {
        fs::read_to_string(spec).map_err(|e| Failure::Usage(format!("cannot read graph '{spec}': {e}")))?
    };
    let g = Graph::from_json(&text).map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(("graph".into(), g))
}

/// Writes into `dir/name`, or to stdout without a directory.
fn emit(dir: Option<&Path>, name: &str, text: &str) -> Result<(), Failure> {
    match dir {
        Some(d) => {
            fs::create_dir_all(d)?;
            fs::write(d.join(name), text)?;
            eprintln!("wrote {}", d.join(name).display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn graph_dot(g: &Graph) -> String {
    let mut s = String::from("graph G {\n");
    for (v, w) in g.weights().iter().enumerate() {
        s += &format!("  v{v} [label=\"{w}\"];\n");
    }
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        s += &format!("  v{a} -- v{b} [label=\"e{e}\"];\n");
    }
    s + "}\n"
}

fn export(what: ExportKind) -> Result<(), Failure> {
    match what {
        ExportKind::Graphs { genus, out } => {
            check_genus(genus)?;
            let atlas = Atlas::new(genus)?;
            if out.out.is_none() && out.format == Format::Json {
                print!("{}", pretty(&json!(atlas.graphs)));
                return Ok(());
            }
            for (i, g) in atlas.graphs.iter().enumerate() {
                let (name, text) = match out.format {
                    Format::Json => (format!("g{genus}-{i:03}.json"), pretty(&json!(g))),
                    Format::Dot => (format!("g{genus}-{i:03}.dot"), graph_dot(g)),
                };
                emit(out.out.as_deref(), &name, &text)?;
            }
        }
        ExportKind::Poset { kind, graph, genus, b, out } => {
            check_b(b)?;
            let (stem, json_v, dot) = poset_artifact(kind, graph.as_deref(), genus, b)?;
            let (name, text) = match out.format {
                Format::Json => (format!("{stem}.json"), pretty(&json_v)),
                Format::Dot => (format!("{stem}.dot"), dot),
            };
            emit(out.out.as_deref(), &name, &text)?;
        }
        ExportKind::Atlas { genus, b, out } => {
            check_genus(genus)?;
            check_b(b)?;
            let atlas = Atlas::new(genus)?;
            let (bundle, sg_dot, cop_dot) = atlas_bundle(&atlas, b)?;
            let Some(dir) = out else {
                print!("{}", pretty(&bundle));
                return Ok(());
            };
            let (strata, strata_dot) = stratification_report(&atlas, b)?;
            emit(Some(&dir), &format!("atlas-g{genus}-b{b}.json"), &pretty(&bundle))?;
            emit(Some(&dir), &format!("sg-g{genus}.dot"), &sg_dot)?;
            emit(Some(&dir), &format!("cop-g{genus}-b{b}.dot"), &cop_dot)?;
            emit(Some(&dir), &format!("strata-g{genus}-b{b}.json"), &pretty(&strata))?;
            emit(Some(&dir), &format!("strata-g{genus}-b{b}.dot"), &strata_dot)?;
        }
    }
    Ok(())
}

fn poset_artifact(kind: PosetKind, graph: Option<&str>, genus: u32, b: u8) -> Result<(String, Value, String), Failure> {
    let local = |k: &str| -> Result<(String, Graph), Failure> {
        let spec = graph.ok_or_else(|| Failure::Usage(format!("poset kind {k} needs --graph")))?;
        let (name, g) = parse_graph(spec)?;
        Ok((format!("{k}-{name}-b{b}"), g))
    };
    let pair = |(i, k): &ocalc::atlas::GraphClass| json!({"graph": i, "removed": k.removed, "divisor": k.divisor});
    Ok(match kind {
        PosetKind::A => {
            let (stem, g) = local("A")?;
            let p = build_a(&g, b)?;
            (stem, p.to_json(|s| json!(s)), p.to_dot(|s| format!("{s:?}")))
        }
        PosetKind::Op => {
            let (stem, g) = local("OP")?;
            let p = build_op(&g, b)?;
            let label = |o: &ocalc::Orientation| format!("S={:?} {}", o.removed(), o.code());
            (stem, p.to_json(|o| json!({"removed": o.removed(), "states": o.code()})), p.to_dot(label))
        }
        PosetKind::Opbar => {
            let (stem, g) = local("OPbar")?;
            let (p, _, _) = build_opbar(&g, b)?;
            (stem, p.to_json(|k| json!({"removed": k.removed, "divisor": k.divisor})), p.to_dot(|k| k.label()))
        }
        kind => {
            check_genus(genus)?;
            let atlas = Atlas::new(genus)?;
            match kind {
                PosetKind::Sg => {
                    let p = atlas.build_sg()?;
                    let label = |&i: &usize| format!("G{i} {}", atlas.graphs[i].to_json());
                    (format!("Sg-g{genus}"), p.to_json(|&i| json!(atlas.graphs[i])), p.to_dot(label))
                }
                PosetKind::Ag => {
                    let p = atlas.build_ag(b)?;
                    let label = |(i, s): &(usize, ocalc::EdgeSet)| format!("G{i} {s:?}");
                    (format!("Ag-g{genus}-b{b}"), p.to_json(|(i, s)| json!({"graph": i, "removed": s})), p.to_dot(label))
                }
                PosetKind::Opg => {
                    let p = atlas.build_opg(b)?;
                    (format!("OPg-g{genus}-b{b}"), p.to_json(pair), p.to_dot(|(i, k)| format!("G{i} {}", k.label())))
                }
                _ => {
                    let fibers = atlas.class_posets(b)?;
                    let opg = atlas.build_opg_from(&fibers)?;
                    let (p, _) = atlas.conjugacy_quotient(&opg, &fibers)?;
                    (format!("cOP-g{genus}-b{b}"), p.to_json(pair), p.to_dot(|(i, k)| format!("G{i} {}", k.label())))
                }
            }
        }
    })
}
