//! Benchmark sweeps. Every cell of the grid generators × algorithms ×
//! strategies × λ × seeds is an independent run; cells run in parallel and
//! rows are written in grid order.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use fanrepair::engines::{run, Algorithm, StrategyKind};
use fanrepair::graph::Graph;
use rayon::prelude::*;
use serde::Serialize;

use crate::{engine_failure, exit, generate_graph, CmdResult, EngineArgs, Failure};

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Generator specs; repeat the flag for several graphs.
    #[arg(long = "gen", required = true)]
    specs: Vec<String>,
    #[arg(long = "algs", value_delimiter = ',', default_value = "alg1")]
    algorithms: Vec<Algorithm>,
    #[arg(long = "strategies", value_delimiter = ',', default_value = "greedy")]
    strategies: Vec<StrategyKind>,
    #[arg(long = "lambdas", value_delimiter = ',', default_value = "2")]
    lambdas: Vec<f64>,
    /// Seeds for both the generator and the run.
    #[arg(long, value_delimiter = ',', required = true)]
    seeds: Vec<u64>,
    #[command(flatten)]
    engine: EngineArgs,
    /// CSV file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Leave the wall-time column empty so reruns are byte-identical.
    #[arg(long)]
    no_timing: bool,
}

struct Cell<'a> {
    spec: &'a str,
    algorithm: Algorithm,
    strategy: StrategyKind,
    lambda: f64,
    seed: u64,
}

#[derive(Debug, Default, Serialize)]
struct Row {
    graph: String,
    algorithm: String,
    strategy: String,
    lambda: f64,
    seed: u64,
    n: Option<usize>,
    m: Option<usize>,
    delta: Option<usize>,
    #[serde(rename = "T")]
    big_t: Option<u64>,
    colors_used: Option<u32>,
    #[serde(rename = "ell_G")]
    ell_g: Option<u32>,
    iterations: Option<usize>,
    repair_executions: Option<u64>,
    ledger_total: Option<f64>,
    failed: bool,
    wall_ms: Option<f64>,
    error: String,
}

fn run_cell(cell: &Cell<'_>, args: &BenchArgs) -> Row {
    let mut row = Row {
        graph: cell.spec.to_string(),
        algorithm: cell.algorithm.to_string(),
        strategy: cell.strategy.to_string(),
        lambda: cell.lambda,
        seed: cell.seed,
        ..Row::default()
    };
    let g: Graph = match generate_graph(cell.spec, Some(cell.seed)) {
        Ok(g) => g,
        Err(f) => {
            row.failed = true;
            row.error = f.message;
            return row;
        }
    };
    row.n = Some(g.vertex_count());
    row.m = Some(g.edge_count());
    row.delta = Some(g.max_degree());
    let mut cfg = args.engine.config(Some(cell.seed));
    cfg.algorithm = cell.algorithm;
    cfg.strategy = cell.strategy;
    cfg.lambda = cell.lambda;
    let start = Instant::now();
    let result = run(&g, &cfg);
    if !args.no_timing {
        row.wall_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    match result {
        Ok(out) => {
            let r = out.report;
            row.big_t = Some(r.big_t);
            row.colors_used = Some(r.colors_used);
            row.ell_g = Some(r.ell_g);
            row.iterations = Some(r.iterations.len());
            row.repair_executions = Some(r.repair_executions);
            row.ledger_total = Some(r.ledger.total());
            row.failed = r.failed;
        }
        Err(e) => {
            row.failed = true;
            row.error = engine_failure(e).message;
        }
    }
    row
}

pub fn cmd_bench(args: &BenchArgs) -> CmdResult {
    let mut cells = Vec::new();
    for spec in &args.specs {
        for &algorithm in &args.algorithms {
            for &strategy in &args.strategies {
                for &lambda in &args.lambdas {
                    for &seed in &args.seeds {
                        cells.push(Cell {
                            spec,
                            algorithm,
                            strategy,
                            lambda,
                            seed,
                        });
                    }
                }
            }
        }
    }
    let rows: Vec<Row> = cells.par_iter().map(|c| run_cell(c, args)).collect();

    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in &rows {
        writer
            .serialize(row)
            .map_err(|e| Failure::new(exit::IO, e.to_string()))?;
    }
    let bytes = writer.into_inner().map_err(|e| Failure::new(exit::IO, e.to_string()))?;
    let text = String::from_utf8(bytes).expect("csv output is UTF-8");
    crate::write_or_print(args.out.as_deref(), &text)?;

    let failed = rows.iter().filter(|r| !r.error.is_empty()).count();
    if failed > 0 {
        eprintln!("{failed} of {} cells failed; see the error column", rows.len());
    }
    if args.lambdas.len() > 1 {
        let mut by_lambda: BTreeMap<String, (f64, usize)> = BTreeMap::new();
        for r in rows.iter().filter(|r| r.strategy == "greedy") {
            if let Some(ell) = r.ell_g {
                let entry = by_lambda.entry(format!("{:>8.3}", r.lambda)).or_default();
                entry.0 += f64::from(ell);
                entry.1 += 1;
            }
        }
        for (lambda, (sum, count)) in by_lambda {
            eprintln!(
                "greedy λ = {}: mean ℓ(G) = {:.3} over {count} cells",
                lambda.trim(),
                sum / count as f64
            );
        }
    }
    Ok(exit::OK)
}
