use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use digraph_period::selfcheck::{self, SelfCheckConfig};
use digraph_period::{
    format_factored, is_almost_strongly_connected, is_strongly_connected, parse_dot, parse_edgelist, scc_decompose,
    Digraph, EngineRegistry, FamilyParams, FamilyRegistry,
};

/// Largest graph the oracle analyzes without `--force`.
const ORACLE_LIMIT: usize = 64;

#[derive(Parser)]
#[command(author, version, about = "Period, primitivity and index of convergence of digraphs")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Edgelist,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one digraph.
    Analyze {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "edgelist")]
        format: Format,
        #[arg(long, default_value = "lifted")]
        algorithm: String,
        /// Single-line JSON instead of text.
        #[arg(long)]
        json: bool,
        /// Run the oracle even above 64 vertices.
        #[arg(long)]
        force: bool,
    },
    /// Write generated instances as edge lists with a label header.
    Generate {
        /// cycle, wielandt, random, period-gadget, ord-gadget or exponent-gadget
        family: String,
        #[arg(long)]
        n: Option<usize>,
        /// Edge probability for random digraphs and random gadget bases.
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated path for ord-gadget, first vertex first.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<String>>,
        /// Name (ord-gadget) or vertex index (st gadgets with --input) of s.
        #[arg(long)]
        s: Option<String>,
        /// Name (ord-gadget) or vertex index (st gadgets with --input) of t.
        #[arg(long)]
        t: Option<String>,
        /// Edge-list reachability instance for period-gadget / exponent-gadget.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Number of instances; above 1, --out names a directory.
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the property suites.
    Selfcheck {
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Error with the process exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn input_error(error: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 2, error: error.into() }
}

#[derive(Serialize)]
struct InputInfo {
    file: String,
    format: &'static str,
    n: usize,
    edges: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    vertex_names: Option<Vec<String>>,
}

#[derive(Serialize)]
struct PeriodInfo {
    value: String,
    factored: String,
    factors: Vec<(u64, u32)>,
}

#[derive(Serialize)]
struct ComponentInfo {
    vertices: Vec<usize>,
    has_cycle: bool,
    is_sink: bool,
    period: Option<String>,
}

#[derive(Serialize)]
struct AnalysisReport {
    input: InputInfo,
    algorithm: &'static str,
    period: PeriodInfo,
    strongly_connected: bool,
    almost_strongly_connected: bool,
    primitive: bool,
    index: u64,
    exponent: Option<u64>,
    components: Vec<ComponentInfo>,
    conventions: &'static str,
}

const CONVENTIONS: &str = "A^0 = I takes part in the power sequence, so the index may be 0";

fn analyze(path: &Path, format: Format, algorithm: &str, force: bool) -> Result<AnalysisReport, Failure> {
    let registry = EngineRegistry::default();
    let engine = registry.get(algorithm).map_err(input_error)?;
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(input_error)?;
    let (graph, names, format_name) = match format {
        Format::Edgelist => (parse_edgelist(&text).map_err(input_error)?, None, "edgelist"),
        Format::Dot => {
            let dot = parse_dot(&text).map_err(input_error)?;
            (dot.graph, Some(dot.names), "dot")
        }
    };
    if engine.name() == "oracle" && graph.n() > ORACLE_LIMIT && !force {
        return Err(Failure {
            code: 3,
            error: anyhow::anyhow!(
                "oracle refused for n = {} > {ORACLE_LIMIT}; pass --force to run it anyway",
                graph.n()
            ),
        });
    }
    Ok(build_report(&graph, engine, path, format_name, names))
}

fn build_report(
    graph: &Digraph,
    engine: &dyn digraph_period::SignatureEngine,
    path: &Path,
    format: &'static str,
    names: Option<Vec<String>>,
) -> AnalysisReport {
    let sig = engine.signature(graph);
    let scc = scc_decompose(graph);
    let components = (0..scc.len())
        .map(|c| ComponentInfo {
            vertices: scc.components[c].clone(),
            has_cycle: scc.has_cycle[c],
            is_sink: scc.is_sink[c],
            period: scc.has_cycle[c].then(|| engine.period(&graph.induced(&scc.components[c])).to_string()),
        })
        .collect();
    let strongly_connected = is_strongly_connected(graph);
    let primitive = strongly_connected && sig.period.is_one() && scc.has_cycle[0];
    AnalysisReport {
        input: InputInfo {
            file: path.display().to_string(),
            format,
            n: graph.n(),
            edges: graph.edge_count(),
            vertex_names: names,
        },
        algorithm: engine.name(),
        period: PeriodInfo {
            value: sig.period.to_string(),
            factored: format_factored(&sig.period),
            factors: sig.period.factors().to_vec(),
        },
        strongly_connected,
        almost_strongly_connected: is_almost_strongly_connected(graph),
        primitive,
        index: sig.index,
        exponent: primitive.then_some(sig.index),
        components,
        conventions: CONVENTIONS,
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn print_text(r: &AnalysisReport) {
    println!("input: {} ({}), n = {}, edges = {}", r.input.file, r.input.format, r.input.n, r.input.edges);
    if let Some(names) = &r.input.vertex_names {
        let pairs: Vec<String> = names.iter().enumerate().map(|(i, n)| format!("{i}={n}")).collect();
        println!("vertices: {}", pairs.join(" "));
    }
    println!("algorithm: {}", r.algorithm);
    println!("period: {}", r.period.factored);
    println!("strongly connected: {}", yes_no(r.strongly_connected));
    println!("almost strongly connected: {}", yes_no(r.almost_strongly_connected));
    println!("primitive: {}", yes_no(r.primitive));
    println!("index of convergence: {}", r.index);
    match r.exponent {
        Some(e) => println!("exponent: {e}"),
        None => println!("exponent: -"),
    }
    println!("components:");
    for (i, c) in r.components.iter().enumerate() {
        let vertices: Vec<String> = c.vertices.iter().map(ToString::to_string).collect();
        let period = c.period.as_deref().map_or("acyclic".to_string(), |p| format!("period {p}"));
        let sink = if c.is_sink { ", sink" } else { "" };
        println!("  #{i} {{{}}} {period}{sink}", vertices.join(","));
    }
    println!("conventions: {}", r.conventions);
}

#[allow(clippy::too_many_arguments)]
fn generate(
    family: &str,
    n: Option<usize>,
    p: Option<f64>,
    seed: u64,
    order: Option<Vec<String>>,
    s: Option<String>,
    t: Option<String>,
    input: Option<PathBuf>,
    count: u64,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    let registry = FamilyRegistry::default();
    let fam = registry.get(family).map_err(input_error)?;
    let mut params = FamilyParams { n, edge_probability: p, seed, order, ..Default::default() };
    if let Some(path) = input {
        let text = fs::read_to_string(&path)
            .with_context(|| format!("cannot read {}", path.display()))
            .map_err(input_error)?;
        let base = parse_edgelist(&text).map_err(input_error)?;
        let index = |v: Option<String>, name: &str| -> Result<usize, Failure> {
            v.ok_or_else(|| input_error(anyhow::anyhow!("--input requires --{name}")))?
                .parse()
                .map_err(|_| input_error(anyhow::anyhow!("--{name} must be a vertex index with --input")))
        };
        params.base = Some((base, index(s, "s")?, index(t, "t")?));
    } else {
        params.s_name = s;
        params.t_name = t;
    }
    if count == 0 {
        return Err(input_error(anyhow::anyhow!("--count must be at least 1")));
    }
    for i in 0..count {
        let inst = fam.generate(&params, i).map_err(input_error)?;
        let text = inst.to_edgelist();
        match (&out, count) {
            (None, _) => print!("{text}"),
            (Some(path), 1) => write(path, &text)?,
            (Some(dir), _) => {
                fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display())).map_err(input_error)?;
                write(&dir.join(format!("{family}-{i:04}.txt")), &text)?;
            }
        }
    }
    Ok(())
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display())).map_err(input_error)
}

fn run_selfcheck(max_n: usize, samples: usize, seed: u64) -> Result<(), Failure> {
    let config = SelfCheckConfig { max_n, samples, seed, ..Default::default() };
    println!(
        "selfcheck: exhaustive n <= {}, {samples} samples, max n {max_n}, seed {seed}",
        max_n.min(selfcheck::EXHAUSTIVE_LIMIT)
    );
    let report = selfcheck::run(&config);
    for (name, outcome) in &report.properties {
        let status = if outcome.failed == 0 { "PASS" } else { "FAIL" };
        println!("{status} {name}: {} passed, {} failed", outcome.passed, outcome.failed);
    }
    for (name, outcome) in &report.properties {
        if let Some(cx) = &outcome.counterexample {
            println!("--- counterexample for {name}\n{cx}");
        }
    }
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure { code: 1, error: anyhow::anyhow!("self-check failed (seed {seed})") })
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = match args.command {
        Command::Analyze { path, format, algorithm, json, force } => {
            analyze(&path, format, &algorithm, force).map(|report| {
                if json {
                    println!("{}", serde_json::to_string(&report).expect("report serializes"));
                } else {
                    print_text(&report);
                }
            })
        }
        Command::Generate { family, n, p, seed, order, s, t, input, count, out } => {
            generate(&family, n, p, seed, order, s, t, input, count, out)
        }
        Command::Selfcheck { max_n, samples, seed } => run_selfcheck(max_n, samples, seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure { code, error }) => {
            eprintln!("error: {error:#}");
            ExitCode::from(code)
        }
    }
}
