//! `lcqaoa`: evaluate QAOA expectations, run the classical baselines, check
//! against the statevector reference and reproduce the benchmark tables.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lightcone_qaoa::baselines::{self, BmParams, Classical, ThParams};
use lightcone_qaoa::generators::from_uri;
use lightcone_qaoa::golden::Instance;
use lightcone_qaoa::graph::Graph;
use lightcone_qaoa::io::{parse_edge_list, parse_polynomial, write_edge_list};
use lightcone_qaoa::local::p_local_treewidth;
use lightcone_qaoa::oracle::ORACLE_CAP;
use lightcone_qaoa::qaoa::{self, AngleSchedule, Decomposer, EvalOptions, PhaseConvention, Reduction};
use lightcone_qaoa::reduction::{b_constant, build_gprime, census, gprime_order};
use lightcone_qaoa::repro::{self, Column, TABLE_SEED};

mod report;

use report::{Format, Report};

#[derive(Parser)]
#[command(name = "lcqaoa", version, about = "Exact constant-round QAOA expectations on sparse graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format [default: json, csv for `tables`]
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Worker threads, a positive count or `auto`
    #[arg(long, global = true, default_value = "auto", value_parser = parse_threads)]
    threads: Threads,
}

/// Worker count; `None` lets the pool size itself.
#[derive(Debug, Clone, Copy)]
struct Threads(Option<usize>);

fn parse_threads(s: &str) -> Result<Threads, String> {
    match s {
        "auto" => Ok(Threads(None)),
        _ => match s.parse::<usize>() {
            Ok(n) if n > 0 => Ok(Threads(Some(n))),
            _ => Err(format!("expected a positive integer or `auto`, got `{s}`")),
        },
    }
}

#[derive(Subcommand)]
enum Command {
    /// Expected cut of a graph under given angles
    Eval(EvalArgs),
    /// Recompute the benchmark tables and flag each cell PASS or FAIL
    Tables(TablesArgs),
    /// Compare the dynamic program with dense simulation on random instances
    OracleCheck(OracleArgs),
    /// Classical local baselines
    Baseline(BaselineArgs),
    /// p-local treewidth of a graph
    Ltw(LtwArgs),
    /// Write a generated instance as an edge list
    Gen(GenArgs),
    /// Build the MAXCUT blow-up graph G'
    Reduce(ReduceArgs),
    /// Expectation of a pseudo-Boolean polynomial objective
    BucoEval(BucoArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Edge-list file
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Generator: `gp:<n>:<k>`, `tri2lift` or `c60`
    #[arg(long = "gen")]
    generator: Option<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Convention {
    /// exp(-i γ C) with C the cut value
    Cut,
    /// exp(-2i γ C), the normalisation of the published angle tables
    Ising,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DecomposerArg {
    Exact,
    Heuristic,
    Auto,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReductionArg {
    Lightcone,
    None,
}

#[derive(Args)]
struct Angles {
    /// Round count; must equal the angle list lengths when given
    #[arg(long)]
    p: Option<usize>,
    /// Phase angles in radians, comma separated
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
    gamma: Vec<f64>,
    /// Mixer angles in radians, comma separated
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
    beta: Vec<f64>,
    #[arg(long, value_enum, default_value_t = Convention::Cut)]
    convention: Convention,
}

#[derive(Args)]
struct Engine {
    #[arg(long, value_enum, default_value_t = DecomposerArg::Auto)]
    decomposer: DecomposerArg,
    #[arg(long, value_enum, default_value_t = ReductionArg::Lightcone)]
    reduction: ReductionArg,
    /// Report wall time (makes the output run-dependent)
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    angles: Angles,
    #[command(flatten)]
    engine: Engine,
    /// Include every edge contribution
    #[arg(long)]
    per_edge: bool,
}

#[derive(Args)]
struct TablesArgs {
    /// Columns to recompute
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [ColumnArg::Ltw, ColumnArg::Qaoa, ColumnArg::Bm, ColumnArg::Th])]
    columns: Vec<ColumnArg>,
    /// Seed of the Monte Carlo cells
    #[arg(long, default_value_t = TABLE_SEED)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ColumnArg {
    Ltw,
    Qaoa,
    Bm,
    Th,
}

impl From<ColumnArg> for Column {
    fn from(c: ColumnArg) -> Column {
        match c {
            ColumnArg::Ltw => Column::LocalTreewidth,
            ColumnArg::Qaoa => Column::Qaoa,
            ColumnArg::Bm => Column::Bm,
            ColumnArg::Th => Column::Th,
        }
    }
}

#[derive(Args)]
struct OracleArgs {
    /// Sweep random polynomials instead of graphs
    #[arg(long)]
    buco: bool,
    /// Instance count [default: 200, 100 with --buco]
    #[arg(long)]
    count: Option<usize>,
    /// Largest instance size, at most 22 [default: 12, 10 with --buco]
    #[arg(long)]
    n: Option<usize>,
    /// Largest round count [default: 3, 2 with --buco]
    #[arg(long)]
    p: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    /// BM-k exact evaluation with given weights
    Bm,
    /// BM-k weight search
    BmOpt,
    /// Th-s Monte Carlo with given thresholds
    Th,
    /// Exhaustive Th-s threshold search
    ThSearch,
    /// Better of the tuned BM-p and Th-s
    Best,
}

#[derive(Args)]
struct BaselineArgs {
    #[arg(value_enum)]
    method: Method,
    #[command(flatten)]
    source: Source,
    /// BM weights α_0..α_k with α_0 = 1 (bm)
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    alpha: Vec<f64>,
    /// BM radius (bm-opt)
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = baselines::DEFAULT_RESTARTS)]
    restarts: usize,
    /// Per-round thresholds in {1,2,3} (th)
    #[arg(long, value_delimiter = ',')]
    thresholds: Vec<u32>,
    #[arg(long, default_value_t = baselines::DEFAULT_SAMPLES)]
    samples: usize,
    /// Round budget (th-search, best)
    #[arg(long)]
    p: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct LtwArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    p: usize,
}

#[derive(Args)]
struct GenArgs {
    /// `gp:<n>:<k>`, `tri2lift` or `c60`
    uri: String,
    /// Output file [default: standard output]
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReduceArgs {
    #[command(flatten)]
    source: Source,
    /// Edge-list output for G'
    #[arg(long)]
    out: PathBuf,
    /// JSON sidecar path [default: <out>.json]
    #[arg(long)]
    sidecar: Option<PathBuf>,
}

#[derive(Args)]
struct BucoArgs {
    /// Polynomial file
    #[arg(long)]
    poly: PathBuf,
    #[command(flatten)]
    angles: Angles,
    #[command(flatten)]
    engine: Engine,
}

/// Why a command did not succeed, mapped onto the exit code.
enum Failure {
    /// Bad input or usage (2).
    Usage(String),
    /// Evaluation error (3).
    Eval(String),
    /// A golden or tolerance check failed (1); the report is still printed.
    Check(Report),
}

type Outcome = Result<Report, Failure>;

fn eval_err(e: lightcone_qaoa::Error) -> Failure {
    Failure::Eval(e.to_string())
}

fn usage_err(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load(source: &Source) -> Result<Graph, Failure> {
    match (&source.graph, &source.generator) {
        (Some(path), _) => parse_edge_list(&read(path)?).map_err(|e| usage_err(format!("{}: {e}", path.display()))),
        (None, Some(uri)) => from_uri(uri).map_err(usage_err),
        (None, None) => Err(Failure::Usage("one of --graph or --gen is required".into())),
    }
}

fn schedule(angles: &Angles) -> Result<AngleSchedule, Failure> {
    if let Some(p) = angles.p {
        if angles.gamma.len() != p || angles.beta.len() != p {
            return Err(Failure::Usage(format!(
                "--p {p} does not match {} gamma and {} beta values",
                angles.gamma.len(),
                angles.beta.len()
            )));
        }
    }
    let convention = match angles.convention {
        Convention::Cut => PhaseConvention::Cut,
        Convention::Ising => PhaseConvention::Ising,
    };
    Ok(AngleSchedule::new(angles.gamma.clone(), angles.beta.clone()).map_err(usage_err)?.with_convention(convention))
}

fn options(engine: &Engine, keep: bool) -> EvalOptions {
    EvalOptions {
        decomposer: match engine.decomposer {
            DecomposerArg::Exact => Decomposer::Exact,
            DecomposerArg::Heuristic => Decomposer::Heuristic,
            DecomposerArg::Auto => Decomposer::Auto,
        },
        reduction: match engine.reduction {
            ReductionArg::Lightcone => Reduction::Lightcone,
            ReductionArg::None => Reduction::None,
        },
        keep_contributions: keep,
    }
}

fn cmd_eval(args: &EvalArgs) -> Outcome {
    let g = load(&args.source)?;
    let sched = schedule(&args.angles)?;
    let start = Instant::now();
    let res = qaoa::expectation(&g, &sched, &options(&args.engine, args.per_edge)).map_err(eval_err)?;
    let elapsed = start.elapsed();
    let ltw = p_local_treewidth(&g, sched.p()).ok();
    let mut rec = record! {
        "expectation" => res.value,
        "cut_fraction" => res.cut_fraction(),
        "imag_residual" => res.imag_residual,
        "p_local_treewidth" => ltw,
        "decomposition_width" => res.max_width,
    };
    if let Some(per) = &res.per_contribution {
        let edges: Vec<Value> = per.iter().map(|(e, c)| json!({ "edge": e, "value": c.re })).collect();
        rec.insert("per_edge".into(), Value::Array(edges));
    }
    if args.engine.timing {
        rec.insert("wall_time_ms".into(), json!(elapsed.as_secs_f64() * 1e3));
    }
    Ok(Report::Record(rec))
}

fn table_number(column: Column, instance: Instance) -> u32 {
    match (column, instance) {
        (Column::LocalTreewidth, _) => 2,
        (_, Instance::Gp15_2) => 3,
        (_, Instance::Tri2Lift) => 4,
        (_, Instance::C60) => 5,
    }
}

fn cmd_tables(args: &TablesArgs) -> Outcome {
    let columns: Vec<Column> = args.columns.iter().map(|&c| c.into()).collect();
    let mut rows = Vec::new();
    let mut failed = false;
    for instance in Instance::ALL {
        for p in 1..=3 {
            for &column in &columns {
                eprintln!("computing {} p={p} {}", instance.name(), column.name());
                let cell = repro::cell(instance, p, column, args.seed).map_err(eval_err)?;
                failed |= !cell.pass();
                rows.push(record! {
                    "table" => table_number(column, instance),
                    "instance" => instance.name(),
                    "p" => p,
                    "column" => column.name(),
                    "computed" => cell.computed,
                    "reference" => cell.reference,
                    "tolerance" => column.tolerance(),
                    "deviation" => cell.deviation(),
                    "std_error" => cell.std_error,
                    "status" => if cell.pass() { "PASS" } else { "FAIL" },
                });
            }
        }
    }
    let report = Report::Table(rows);
    if failed {
        Err(Failure::Check(report))
    } else {
        Ok(report)
    }
}

fn cmd_oracle_check(args: &OracleArgs) -> Outcome {
    let (count, n, p) = if args.buco {
        (args.count.unwrap_or(100), args.n.unwrap_or(10), args.p.unwrap_or(2))
    } else {
        (args.count.unwrap_or(200), args.n.unwrap_or(12), args.p.unwrap_or(3))
    };
    if n > ORACLE_CAP {
        return Err(Failure::Usage(format!("--n {n} exceeds the statevector cap of {ORACLE_CAP}")));
    }
    if p == 0 || p > qaoa::MAX_ROUNDS {
        return Err(Failure::Usage(format!("--p must lie in 1..={}", qaoa::MAX_ROUNDS)));
    }
    let sweep = if args.buco { repro::buco_sweep(count, n, p, args.seed) } else { repro::graph_sweep(count, n, p, args.seed) };
    let sweep = sweep.map_err(eval_err)?;
    let pass = sweep.pass(args.tolerance);
    let report = Report::Record(record! {
        "mode" => if args.buco { "buco" } else { "graph" },
        "instances" => sweep.instances,
        "max_n" => n,
        "max_p" => p,
        "seed" => args.seed,
        "max_abs_delta" => sweep.max_abs_delta,
        "tolerance" => args.tolerance,
        "status" => if pass { "PASS" } else { "FAIL" },
    });
    if pass {
        Ok(report)
    } else {
        Err(Failure::Check(report))
    }
}

fn require<T: Copy>(v: Option<T>, flag: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("{flag} is required for this method")))
}

fn cmd_baseline(args: &BaselineArgs) -> Outcome {
    let g = load(&args.source)?;
    let rec = match args.method {
        Method::Bm => {
            let params = BmParams::new(args.alpha.clone()).map_err(usage_err)?;
            let f = baselines::bm_expected_cut(&g, &params).map_err(eval_err)?;
            record! { "method" => "bm", "k" => params.k(), "alpha" => params.alpha(), "cut_fraction" => f }
        }
        Method::BmOpt => {
            let k = require(args.k, "--k")?;
            let (params, f) = baselines::bm_optimize(&g, k, args.restarts, args.seed).map_err(eval_err)?;
            record! {
                "method" => "bm-opt", "k" => k, "restarts" => args.restarts, "seed" => args.seed,
                "alpha" => params.alpha(), "cut_fraction" => f,
            }
        }
        Method::Th => {
            let params = ThParams::new(args.thresholds.clone(), args.samples, args.seed).map_err(usage_err)?;
            let (mean, se) = baselines::th_simulate(&g, &params).map_err(eval_err)?;
            record! {
                "method" => "th", "thresholds" => params.thresholds(), "samples" => args.samples,
                "seed" => args.seed, "cut_fraction" => mean, "std_error" => se,
            }
        }
        Method::ThSearch => {
            let p = require(args.p, "--p")?;
            let (params, mean) = baselines::th_search(&g, p, args.samples, args.seed).map_err(eval_err)?;
            record! {
                "method" => "th-search", "p" => p, "samples" => args.samples, "seed" => args.seed,
                "thresholds" => params.thresholds(), "cut_fraction" => mean,
            }
        }
        Method::Best => {
            let p = require(args.p, "--p")?;
            let best = baselines::best_classical(&g, p, args.seed).map_err(eval_err)?;
            let (winner, params) = match &best.winner {
                Classical::Bm(b) => ("bm", json!({ "alpha": b.alpha() })),
                Classical::Th(t) => ("th", json!({ "thresholds": t.thresholds() })),
            };
            record! {
                "method" => "best", "p" => p, "seed" => args.seed, "winner" => winner, "params" => params,
                "cut_fraction" => best.fraction, "bm_fraction" => best.bm_fraction, "th_fraction" => best.th_fraction,
            }
        }
    };
    Ok(Report::Record(rec))
}

fn cmd_ltw(args: &LtwArgs) -> Outcome {
    let g = load(&args.source)?;
    let w = p_local_treewidth(&g, args.p).map_err(eval_err)?;
    Ok(Report::Record(record! { "n" => g.n(), "m" => g.m(), "p" => args.p, "p_local_treewidth" => w }))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Eval(format!("{}: {e}", path.display())))
}

/// Writes the edge list itself; the returned report is printed only when
/// the list went to a file.
fn cmd_gen(args: &GenArgs) -> Result<Option<Report>, Failure> {
    let g = from_uri(&args.uri).map_err(usage_err)?;
    let text = write_edge_list(&g);
    match &args.out {
        Some(path) => {
            write(path, &text)?;
            Ok(Some(Report::Record(record! { "uri" => args.uri, "n" => g.n(), "m" => g.m(), "out" => path.display().to_string() })))
        }
        None => {
            print!("{text}");
            Ok(None)
        }
    }
}

fn cmd_reduce(args: &ReduceArgs) -> Outcome {
    let g = load(&args.source)?;
    let inst = build_gprime(&g).map_err(usage_err)?;
    write(&args.out, &write_edge_list(&inst.gprime))?;
    let c = census(&inst);
    let b = u64::try_from(b_constant(g.n() as u64)).map_err(|_| Failure::Eval("b(n0) exceeds 64 bits".into()))?;
    let rec = record! {
        "n0" => inst.n0,
        "m0" => inst.m0,
        "b" => b,
        "specials" => json!({ "x0": inst.x0, "y0": inst.y0, "w": inst.w }),
        "vertices" => inst.gprime.n(),
        "expected_vertices" => gprime_order(inst.n0),
        "edges" => inst.gprime.m(),
        "census" => json!({
            "gadget": c.gadget, "synchronous": c.synchronous, "frame": c.frame,
            "spokes": c.spokes, "controller": c.controller,
        }),
    };
    let sidecar = args.sidecar.clone().unwrap_or_else(|| {
        let mut s = args.out.clone().into_os_string();
        s.push(".json");
        s.into()
    });
    let report = Report::Record(rec);
    write(&sidecar, &report.render(Format::Json))?;
    Ok(report)
}

fn cmd_buco_eval(args: &BucoArgs) -> Outcome {
    let poly = parse_polynomial(&read(&args.poly)?).map_err(|e| usage_err(format!("{}: {e}", args.poly.display())))?;
    let sched = schedule(&args.angles)?;
    let start = Instant::now();
    let res = qaoa::buco_expectation(&poly, &sched, &options(&args.engine, false)).map_err(eval_err)?;
    let mut rec = record! {
        "expectation" => res.value,
        "constant_shift" => res.constant_shift,
        "imag_residual" => res.imag_residual,
        "decomposition_width" => res.max_width,
    };
    if args.engine.timing {
        rec.insert("wall_time_ms".into(), json!(start.elapsed().as_secs_f64() * 1e3));
    }
    Ok(Report::Record(rec))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Threads(Some(n)) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    }
    let format = cli.format.unwrap_or(match cli.command {
        Command::Tables(_) => Format::Csv,
        _ => Format::Json,
    });
    let outcome = match &cli.command {
        Command::Eval(a) => cmd_eval(a),
        Command::Tables(a) => cmd_tables(a),
        Command::OracleCheck(a) => cmd_oracle_check(a),
        Command::Baseline(a) => cmd_baseline(a),
        Command::Ltw(a) => cmd_ltw(a),
        Command::Gen(a) => match cmd_gen(a) {
            Ok(Some(r)) => Ok(r),
            Ok(None) => return ExitCode::SUCCESS,
            Err(f) => Err(f),
        },
        Command::Reduce(a) => cmd_reduce(a),
        Command::BucoEval(a) => cmd_buco_eval(a),
    };
    match outcome {
        Ok(report) => {
            print!("{}", report.render(format));
            ExitCode::SUCCESS
        }
        Err(Failure::Check(report)) => {
            print!("{}", report.render(format));
            eprintln!("check failed");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Eval(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
