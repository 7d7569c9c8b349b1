//! `fanrepair` command line: generate graphs, run the engines, verify
//! colorings and sweep benchmarks.

mod bench;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fanrepair::engines::{run, Algorithm, AssertLevel, EngineError, FreezeMode, RunConfig, StrategyKind};
use fanrepair::graph::{generate, Graph, GraphKind};
use fanrepair::palette::{find_conflicts, format_colors, format_dump, parse_dump, Slot};

/// Exit codes shared by all subcommands.
pub mod exit {
    pub const OK: u8 = 0;
    pub const FAILURE: u8 = 1;
    pub const FROZEN: u8 = 2;
    pub const USAGE: u8 = 64;
    pub const DATA: u8 = 65;
    pub const IO: u8 = 74;
}

#[derive(Debug, Parser)]
#[command(
    name = "fanrepair",
    version,
    about = "Edge coloring by fan repair with truncated alternating paths"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a generated graph as an edge list.
    Generate {
        /// Generator spec, e.g. gnp:50:0.1, regular:20:3, bipartite:10:12:0.3.
        #[arg(long = "gen")]
        spec: String,
        #[arg(long)]
        seed: Option<u64>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Color a graph and write the JSON run report.
    Run(RunArgs),
    /// Check that a coloring dump is a proper, complete edge coloring.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        coloring: PathBuf,
    },
    /// Run a grid of configurations and write one CSV row per cell.
    Bench(bench::BenchArgs),
}

#[derive(Debug, Clone, Args)]
pub struct EngineArgs {
    #[arg(long = "alg", default_value = "alg1")]
    algorithm: Algorithm,
    #[arg(long, default_value = "greedy")]
    strategy: StrategyKind,
    /// Truncation length: `paper` for the parameter formula or an integer.
    #[arg(long = "T", default_value = "paper", value_parser = parse_t)]
    t: TArg,
    #[arg(long, default_value_t = 2.0)]
    lambda: f64,
    #[arg(long = "assert", default_value = "standard")]
    assert_level: AssertLevel,
    /// Freeze random-empty placement when fewer than T/15 edges qualify.
    #[arg(long)]
    strict_freeze: bool,
}

impl EngineArgs {
    pub fn config(&self, seed: Option<u64>) -> RunConfig {
        RunConfig {
            algorithm: self.algorithm,
            strategy: self.strategy,
            t: self.t.0,
            lambda: self.lambda,
            seed,
            assert_level: self.assert_level,
            freeze: if self.strict_freeze {
                FreezeMode::Strict
            } else {
                FreezeMode::Permissive
            },
            ..RunConfig::default()
        }
    }
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Edge-list file.
    #[arg(long, conflicts_with = "spec", required_unless_present = "spec")]
    graph: Option<PathBuf>,
    /// Generator spec, used instead of --graph.
    #[arg(long = "gen")]
    spec: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    engine: EngineArgs,
    /// Report file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the final coloring dump here.
    #[arg(long)]
    colors: Option<PathBuf>,
}

/// `None` selects the parameter formula.
#[derive(Debug, Clone, Copy)]
pub struct TArg(Option<u64>);

fn parse_t(s: &str) -> Result<TArg, String> {
    if s == "paper" {
        return Ok(TArg(None));
    }
    match s.parse::<u64>() {
        Ok(0) | Err(_) => Err(format!("expected `paper` or a positive integer, got {s:?}")),
        Ok(t) => Ok(TArg(Some(t))),
    }
}

/// An error paired with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

type CmdResult = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(exit::IO, format!("{}: {e}", path.display())))
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::new(exit::IO, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    Graph::from_edge_list(&read(path)?).map_err(|e| Failure::new(exit::DATA, format!("{}: {e}", path.display())))
}

pub fn generate_graph(spec: &str, seed: Option<u64>) -> Result<Graph, Failure> {
    let kind = GraphKind::parse(spec).map_err(|e| Failure::new(exit::USAGE, e.to_string()))?;
    if kind.is_randomized() && seed.is_none() {
        return Err(Failure::new(exit::USAGE, format!("generator `{spec}` needs --seed")));
    }
    generate(&kind, seed.unwrap_or(0)).map_err(|e| Failure::new(exit::USAGE, e.to_string()))
}

pub fn engine_failure(e: EngineError) -> Failure {
    let code = match e {
        EngineError::MissingSeed(_) | EngineError::Parameter(_) => exit::USAGE,
        _ => exit::FAILURE,
    };
    Failure::new(code, e.to_string())
}

fn cmd_generate(spec: &str, seed: Option<u64>, out: Option<&Path>) -> CmdResult {
    let g = generate_graph(spec, seed)?;
    write_or_print(out, &g.to_edge_list())?;
    Ok(exit::OK)
}

fn cmd_run(args: &RunArgs) -> CmdResult {
    let g = match (&args.graph, &args.spec) {
        (Some(path), _) => load_graph(path)?,
        (None, Some(spec)) => generate_graph(spec, args.seed)?,
        (None, None) => return Err(Failure::new(exit::USAGE, "one of --graph or --gen is required")),
    };
    let cfg = args.engine.config(args.seed);
    let out = run(&g, &cfg).map_err(engine_failure)?;
    write_or_print(args.out.as_deref(), &(out.report.to_json() + "\n"))?;
    if let Some(path) = &args.colors {
        let dump = match &out.colors {
            Some(colors) => format_colors(colors),
            None => format_dump(out.coloring.slots()),
        };
        write_or_print(Some(path), &dump)?;
    }
    if out.report.failed {
        eprintln!("blocking-edge placement froze; the partial coloring is in the report");
        return Ok(exit::FROZEN);
    }
    let colors = out.colors.as_ref().expect("finished runs have final colors");
    let slots: Vec<Slot> = colors.iter().map(|&c| Slot::Real(c)).collect();
    let violations = find_conflicts(&g, &slots);
    if !violations.is_empty() {
        for v in &violations {
            eprintln!("violation: {v}");
        }
        return Ok(exit::FAILURE);
    }
    Ok(exit::OK)
}

fn cmd_verify(graph: &Path, coloring: &Path) -> CmdResult {
    let g = load_graph(graph)?;
    let slots = parse_dump(&read(coloring)?, g.edge_count())
        .map_err(|e| Failure::new(exit::DATA, format!("{}: {e}", coloring.display())))?;
    let mut code = exit::OK;
    for (i, s) in slots.iter().enumerate() {
        if *s != Slot::Uncolored && *s != Slot::Star {
            continue;
        }
        println!("edge {i} has no color ({s})");
        code = exit::FAILURE;
    }
    for v in find_conflicts(&g, &slots) {
        println!("violation: {v}");
        code = exit::FAILURE;
    }
    if code == exit::OK {
        println!("ok: {} edges, proper", g.edge_count());
    }
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Generate { spec, seed, out } => cmd_generate(spec, *seed, out.as_deref()),
        Command::Run(args) => cmd_run(args),
        Command::Verify { graph, coloring } => cmd_verify(graph, coloring),
        Command::Bench(args) => bench::cmd_bench(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
