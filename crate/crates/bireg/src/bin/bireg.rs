//! Command-line front end: enumerate / codegree-classes / sample /
//! schedule / couple / verify / experiment.
//!
//! Exit codes: 0 success, 1 validation error, 2 infeasible-assumption
//! report (so scripts can branch on feasibility). Errors go to stderr as
//! single-line JSON `{"error": ..., "detail": ...}`. All randomness is
//! seeded; the default seed is fixed, not drawn from entropy, and the same
//! seed gives byte-identical output regardless of `--threads`.

use bireg::couple::{self, ProbOracle, RunOpts};
use bireg::enumerate::{self, Constraint};
use bireg::experiments::{self, ExperimentConfig};
use bireg::graph::{BipartiteGraph, Edge};
use bireg::params::{parse_ratio, BiregularParams};
use bireg::pseudo::{self, CheckMode, VertexSet};
use bireg::sample::{self, stream_rng, DEFAULT_SEED};
use bireg::schedule::{self, ScheduleConstants, ScheduleError};
use bireg::stats;
use bireg::Side;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "bireg", version, about = "Random biregular bipartite graphs at desk scale")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact count of biregular graphs under forced/forbidden edges
    Enumerate(EnumerateArgs),
    /// Exact co-degree class table for a fixed V1 pair, as CSV
    CodegreeClasses(CodegreeArgs),
    /// Draw graphs from one of the random models
    Sample(SampleArgs),
    /// Compute the full coupling schedule as JSON
    Schedule(ScheduleArgs),
    /// Run the sandwich coupling end to end
    Couple(CoupleArgs),
    /// Pseudorandomness verifiers
    Verify(VerifyArgs),
    /// Monte-Carlo / exact experiment harnesses
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct InstanceArgs {
    #[arg(long)]
    n1: u64,
    #[arg(long)]
    n2: u64,
    /// Edge density as an exact rational "a/b" (decimals are rejected)
    #[arg(long)]
    p: String,
}

impl InstanceArgs {
    fn params(&self) -> Result<BiregularParams, CliError> {
        let p = parse_ratio(&self.p).map_err(|e| CliError::validation("parse", e))?;
        BiregularParams::new(self.n1, self.n2, p)
            .map_err(|e| CliError::validation("params", e))
    }
}

#[derive(Args)]
struct EnumerateArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Forced edges "i,j;i,j"
    #[arg(long)]
    forced: Option<String>,
    /// Forbidden edges "i,j;i,j"
    #[arg(long)]
    forbidden: Option<String>,
    #[arg(long)]
    cap: Option<u128>,
    /// Include wall-clock timing in the JSON (off by default so identical
    /// invocations stay byte-identical)
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CodegreeArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, default_value_t = 0)]
    u: usize,
    #[arg(long, default_value_t = 1)]
    v: usize,
    #[arg(long)]
    cap: Option<u128>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    BiregularExact,
    BiregularMcmc,
    Gnm,
    Gnp,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long, value_enum)]
    model: Model,
    #[arg(long)]
    n1: u64,
    #[arg(long)]
    n2: u64,
    /// Density "a/b" (biregular models and gnp)
    #[arg(long)]
    p: Option<String>,
    /// Edge count (gnm)
    #[arg(long)]
    m: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    burn_in: u64,
    #[arg(long, default_value_t = 10)]
    thin: u64,
    #[arg(long)]
    cap: Option<u128>,
    /// Output path for the edge list (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScheduleArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long = "C", default_value_t = 1.0)]
    c: f64,
    #[arg(long = "Cstar", default_value_t = 1.0)]
    c_star: f64,
    /// JSON file of constant overrides
    #[arg(long)]
    override_constants: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CoupleArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long = "C", default_value_t = 1.0)]
    c: f64,
    #[arg(long = "Cstar", default_value_t = 1.0)]
    c_star: f64,
    /// Extraction size (default: the schedule's m)
    #[arg(long)]
    m: Option<u128>,
    /// Coupling horizon (default: the schedule's t0)
    #[arg(long)]
    t0: Option<u128>,
    #[arg(long, default_value_t = 1)]
    runs: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    override_constants: Option<PathBuf>,
    /// Per-step history records, one JSON object per line
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Run the complement (upper) embedding instead
    #[arg(long)]
    upper: bool,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    cap: Option<u128>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Check {
    Jumbled,
    Thomason,
    RbRegular,
    AltCycle,
    Lemma17,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    check: Check,
    /// Plain graph input (edge-list file) for jumbled/thomason
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Colored input: two edge-list files G and H with G ⊆ H
    #[arg(long, num_args = 2, value_names = ["G", "H"])]
    colored_from: Option<Vec<PathBuf>>,
    #[arg(long)]
    pi: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    nu: Option<f64>,
    /// Edge "i,j" for alt-cycle
    #[arg(long)]
    edge: Option<String>,
    #[arg(long, default_value_t = 64)]
    max_len: usize,
    /// V1 subset "0,1,2" for lemma17
    #[arg(long)]
    x: Option<String>,
    /// V2 subset "0,3" for lemma17
    #[arg(long)]
    y: Option<String>,
    /// Candidate count for sampled jumbledness (0 = exhaustive)
    #[arg(long, default_value_t = 0)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Codegree,
    DegreeProcess,
    CodegreeProcess,
    Typicality,
    Matching,
    MaxdegreeGnp,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Jsonl,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Comma-separated reveal times, e.g. "3,6,9"
    #[arg(long)]
    t_grid: Option<String>,
    #[arg(long)]
    lambda: Option<f64>,
    /// Typicality: prefix size t
    #[arg(long, default_value_t = 0)]
    t: u128,
    /// Typicality: comma-separated deviation thresholds
    #[arg(long, default_value = "0.25,0.5,1.0")]
    delta_grid: String,
    /// maxdegree-gnp: soft frequency floor
    #[arg(long, default_value_t = 0.5)]
    floor: f64,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    cap: Option<u128>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

struct CliError {
    kind: String,
    detail: String,
    code: i32,
}

impl CliError {
    fn validation(kind: &str, e: impl std::fmt::Display) -> Self {
        CliError { kind: kind.to_string(), detail: e.to_string(), code: 1 }
    }

    fn infeasible(e: impl std::fmt::Display) -> Self {
        CliError { kind: "InfeasibleAssumptions".to_string(), detail: e.to_string(), code: 2 }
    }
}

impl From<ScheduleError> for CliError {
    fn from(e: ScheduleError) -> Self {
        match e {
            ScheduleError::InfeasibleAssumptions(_) => CliError::infeasible(e),
            _ => CliError::validation("schedule", e),
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are not errors
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                std::process::exit(0);
            }
            eprintln!("{}", json!({"error": "usage", "detail": e.to_string()}));
            std::process::exit(1);
        }
    };
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("{}", json!({"error": e.kind, "detail": e.detail}));
            std::process::exit(e.code);
        }
    }
}

fn effective_cap(flag: Option<u128>) -> u128 {
    flag.or_else(|| std::env::var("BIREG_CAP").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(enumerate::DEFAULT_CAP)
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, content).map_err(|e| CliError::validation("io", e)),
        None => {
            print!("{content}");
            std::io::stdout().flush().map_err(|e| CliError::validation("io", e))
        }
    }
}

fn parse_edge_list_arg(s: &str) -> Result<Vec<Edge>, CliError> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(parse_edge)
        .collect()
}

fn parse_edge(s: &str) -> Result<Edge, CliError> {
    let (a, b) = s
        .trim()
        .split_once(',')
        .ok_or_else(|| CliError::validation("parse", format!("edge '{s}' is not 'i,j'")))?;
    let i = a.trim().parse().map_err(|e| CliError::validation("parse", e))?;
    let j = b.trim().parse().map_err(|e| CliError::validation("parse", e))?;
    Ok((i, j))
}

fn parse_index_list(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse().map_err(|e| CliError::validation("parse", e)))
        .collect()
}

fn load_graph(path: &PathBuf) -> Result<BipartiteGraph, CliError> {
    let file = fs::File::open(path).map_err(|e| CliError::validation("io", e))?;
    BipartiteGraph::read_edge_list(std::io::BufReader::new(file))
        .map_err(|e| CliError::validation("graph", e))
}

fn load_overrides(path: &Option<PathBuf>) -> Result<Option<ScheduleConstants>, CliError> {
    match path {
        None => Ok(None),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| CliError::validation("io", e))?;
            let consts: ScheduleConstants =
                serde_json::from_str(&text).map_err(|e| CliError::validation("overrides", e))?;
            Ok(Some(consts))
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Enumerate(args) => cmd_enumerate(args),
        Command::CodegreeClasses(args) => cmd_codegree(args),
        Command::Sample(args) => cmd_sample(args),
        Command::Schedule(args) => cmd_schedule(args),
        Command::Couple(args) => cmd_couple(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Experiment(args) => cmd_experiment(args),
    }
}

fn cmd_enumerate(args: EnumerateArgs) -> Result<(), CliError> {
    let params = args.instance.params()?;
    let mut constraint = Constraint::none();
    if let Some(f) = &args.forced {
        constraint.forced = parse_edge_list_arg(f)?;
    }
    if let Some(f) = &args.forbidden {
        constraint.forbidden = parse_edge_list_arg(f)?;
    }
    let cap = effective_cap(args.cap);
    let start = std::time::Instant::now();
    let count = enumerate::count_biregular_capped(&params, &constraint, cap)
        .map_err(|e| CliError::validation("enumerate", e))?;
    let mut doc = json!({
        "count": count.to_string(),
        "constraint": {
            "forced": constraint.forced,
            "forbidden": constraint.forbidden,
        },
        "params": params,
    });
    if args.timing {
        doc["elapsed_ms"] = json!(start.elapsed().as_millis() as u64);
    }
    emit(&args.out, &format!("{doc}\n"))
}

fn cmd_codegree(args: CodegreeArgs) -> Result<(), CliError> {
    let params = args.instance.params()?;
    let cap = effective_cap(args.cap);
    let table = enumerate::codegree_class_counts_capped(&params, args.u, args.v, cap)
        .map_err(|e| CliError::validation("codegree-classes", e))?;
    let mut csv = String::from("k,r_k\n");
    for (k, c) in table.counts.iter().enumerate() {
        csv.push_str(&format!("{},{}\n", k, c));
    }
    emit(&args.out, &csv)
}

fn cmd_sample(args: SampleArgs) -> Result<(), CliError> {
    let mut rng = stream_rng(args.seed, 0);
    let (n1u, n2u) = (args.n1 as usize, args.n2 as usize);
    let need_p = || -> Result<String, CliError> {
        args.p.clone().ok_or_else(|| CliError::validation("sample", "--p required for this model"))
    };
    let graph = match args.model {
        Model::BiregularExact => {
            let params =
                InstanceArgs { n1: args.n1, n2: args.n2, p: need_p()? }.params()?;
            sample::sample_biregular_exact_capped(&params, effective_cap(args.cap), &mut rng)
                .map_err(|e| CliError::validation("sample", e))?
        }
        Model::BiregularMcmc => {
            let params =
                InstanceArgs { n1: args.n1, n2: args.n2, p: need_p()? }.params()?;
            sample::sample_biregular_mcmc(&params, &mut rng, args.burn_in, args.thin)
                .map_err(|e| CliError::validation("sample", e))?
        }
        Model::Gnm => {
            let m = args
                .m
                .ok_or_else(|| CliError::validation("sample", "--m required for gnm"))?;
            sample::sample_gnm(n1u, n2u, m, &mut rng)
                .map_err(|e| CliError::validation("sample", e))?
        }
        Model::Gnp => {
            let p = parse_ratio(&need_p()?).map_err(|e| CliError::validation("parse", e))?;
            sample::sample_gnp(n1u, n2u, &p, &mut rng)
                .map_err(|e| CliError::validation("sample", e))?
        }
    };
    let mut buf = Vec::new();
    graph.write_edge_list(&mut buf).map_err(|e| CliError::validation("io", e))?;
    emit(&args.out, &String::from_utf8(buf).expect("utf8"))
}

fn cmd_schedule(args: ScheduleArgs) -> Result<(), CliError> {
    let params = args.instance.params()?;
    let overrides = load_overrides(&args.override_constants)?;
    let schedule = schedule::build_schedule(&params, args.c, args.c_star, overrides)?;
    emit(&args.out, &format!("{}\n", serde_json::to_string_pretty(&schedule.to_json()).unwrap()))
}

fn cmd_couple(args: CoupleArgs) -> Result<(), CliError> {
    let params = args.instance.params()?;
    let overrides = load_overrides(&args.override_constants)?;
    let cap = effective_cap(args.cap);
    let run_params = if args.upper { params.complement() } else { params.clone() };
    let schedule = schedule::build_schedule(&run_params, args.c, args.c_star, overrides)?;
    let oracle = ProbOracle::with_cap(&run_params, cap);
    let opts = RunOpts {
        m: if args.upper { None } else { args.m },
        t0: args.t0,
        record_history: args.trace.is_some(),
    };
    // in upper mode --m is interpreted as m_bar
    let m_bar = args.m.unwrap_or_else(|| {
        let gb = bireg::numeric::rational_from_f64(schedule.gamma)
            .unwrap_or_else(num_traits::Zero::zero);
        let (mb, _) = schedule::upper_from_gamma(&params, &gb);
        mb
    });
    let work = |run_idx: u64| -> Result<serde_json::Value, String> {
        let mut rng = stream_rng(args.seed, run_idx);
        if args.upper {
            let out = couple::run_upper_embedding(&schedule, &oracle, m_bar, &mut rng, &opts)
                .map_err(|e| e.to_string())?;
            Ok(json!({
                "run": run_idx,
                "success": out.success,
                "m_bar": out.m_bar.to_string(),
                "s_size": out.inner.s_size,
                "a_failures": out.inner.a_failures,
                "used_fallback": out.inner.used_fallback,
                "history": out.inner.history,
            }))
        } else {
            let out = couple::run_sandwich(&schedule, &oracle, &mut rng, &opts)
                .map_err(|e| e.to_string())?;
            Ok(json!({
                "run": run_idx,
                "success": out.success,
                "m": out.m.to_string(),
                "t0": out.t0.to_string(),
                "s_size": out.s_size,
                "a_failures": out.a_failures,
                "used_fallback": out.used_fallback,
                "history": out.history,
            }))
        }
    };
    let results: Vec<Result<serde_json::Value, String>> = match args.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("pool")
            .install(|| (0..args.runs).into_par_iter().map(work).collect()),
        None => (0..args.runs).map(work).collect(),
    };
    let mut successes = 0u64;
    let mut fallbacks = 0u64;
    let mut a_failures = 0u64;
    let mut trace_lines = Vec::new();
    for r in &results {
        let v = r.as_ref().map_err(|e| CliError::validation("couple", e))?;
        if v["success"].as_bool() == Some(true) {
            successes += 1;
        }
        if v["used_fallback"].as_bool() == Some(true) {
            fallbacks += 1;
        }
        a_failures += v["a_failures"].as_u64().unwrap_or(0);
        if args.trace.is_some() {
            if let Some(steps) = v["history"].as_array() {
                for s in steps {
                    let mut line = s.clone();
                    line["run"] = v["run"].clone();
                    trace_lines.push(line.to_string());
                }
            }
        }
    }
    if let Some(path) = &args.trace {
        fs::write(path, trace_lines.join("\n") + "\n")
            .map_err(|e| CliError::validation("io", e))?;
    }
    let freq = successes as f64 / args.runs as f64;
    let (wlo, whi) = stats::wilson_interval(successes, args.runs, 1.96);
    let doc = json!({
        "mode": if args.upper { "upper" } else { "lower" },
        "runs": args.runs,
        "successes": successes,
        "frequency": freq,
        "wilson_95": [wlo, whi],
        "fallback_runs": fallbacks,
        "total_a_failures": a_failures,
        "schedule": schedule.to_json(),
    });
    emit(&args.out, &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    let mode = if args.samples > 0 {
        CheckMode::Sampled { candidates: args.samples, seed: args.seed }
    } else {
        CheckMode::Exhaustive
    };
    let need = |name: &str, v: Option<f64>| {
        v.ok_or_else(|| CliError::validation("verify", format!("--{name} required")))
    };
    let colored = |paths: &Option<Vec<PathBuf>>| -> Result<(BipartiteGraph, BipartiteGraph), CliError> {
        let paths = paths
            .as_ref()
            .ok_or_else(|| CliError::validation("verify", "--colored-from G H required"))?;
        Ok((load_graph(&paths[0])?, load_graph(&paths[1])?))
    };
    let doc = match args.check {
        Check::Jumbled => {
            let g = load_graph(
                args.graph
                    .as_ref()
                    .ok_or_else(|| CliError::validation("verify", "--graph required"))?,
            )?;
            let cert = pseudo::jumbledness_check(
                &g,
                need("pi", args.pi)?,
                need("delta", args.delta)?,
                mode,
            )
            .map_err(|e| CliError::validation("verify", e))?;
            serde_json::to_value(&cert).unwrap()
        }
        Check::Thomason => {
            let g = load_graph(
                args.graph
                    .as_ref()
                    .ok_or_else(|| CliError::validation("verify", "--graph required"))?,
            )?;
            let rep = pseudo::thomason_check(&g, need("rho", args.rho)?, args.mu.unwrap_or(0.0))
                .map_err(|e| CliError::validation("verify", e))?;
            serde_json::to_value(&rep).unwrap()
        }
        Check::RbRegular => {
            let (g, h) = colored(&args.colored_from)?;
            let inst = bireg::ColoredInstance::new(g, h)
                .map_err(|e| CliError::validation("verify", e))?;
            let rep = pseudo::rb_regularity_check(
                &inst.blue_red(),
                need("r", args.r)?,
                need("b", args.b)?,
                need("delta", args.delta)?,
            )
            .map_err(|e| CliError::validation("verify", e))?;
            serde_json::to_value(&rep).unwrap()
        }
        Check::AltCycle => {
            let (g, h) = colored(&args.colored_from)?;
            let inst = bireg::ColoredInstance::new(g, h)
                .map_err(|e| CliError::validation("verify", e))?;
            let e = parse_edge(
                args.edge
                    .as_deref()
                    .ok_or_else(|| CliError::validation("verify", "--edge i,j required"))?,
            )?;
            let found = pseudo::find_alternating_cycle(&inst.blue_red(), e, args.max_len)
                .map_err(|e| CliError::validation("verify", e))?;
            match found {
                Some(walk) => json!({
                    "found": true,
                    "length": walk.len(),
                    "vertices": walk.vertices,
                    "colors": walk.colors,
                }),
                None => json!({"found": false, "max_len": args.max_len}),
            }
        }
        Check::Lemma17 => {
            let (g, h) = colored(&args.colored_from)?;
            let inst = bireg::ColoredInstance::new(g, h)
                .map_err(|e| CliError::validation("verify", e))?;
            let xs = parse_index_list(
                args.x
                    .as_deref()
                    .ok_or_else(|| CliError::validation("verify", "--x required"))?,
            )?;
            let ys = parse_index_list(
                args.y
                    .as_deref()
                    .ok_or_else(|| CliError::validation("verify", "--y required"))?,
            )?;
            let rep = pseudo::lemma17_check(
                &inst.blue_red(),
                VertexSet::new(Side::V1, &xs),
                VertexSet::new(Side::V2, &ys),
                need("r", args.r)?,
                need("b", args.b)?,
                need("delta", args.delta)?,
                need("nu", args.nu)?,
            )
            .map_err(|e| CliError::validation("verify", e))?;
            serde_json::to_value(&rep).unwrap()
        }
    };
    emit(&args.out, &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))
}

fn cmd_experiment(args: ExperimentArgs) -> Result<(), CliError> {
    let params = args.instance.params()?;
    let mut cfg = ExperimentConfig::new(args.trials, args.seed);
    cfg.threads = args.threads;
    cfg.lambda = args.lambda;
    cfg.cap = effective_cap(args.cap);
    if let Some(grid) = &args.t_grid {
        cfg.t_grid = grid
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| t.trim().parse().map_err(|e| CliError::validation("parse", e)))
            .collect::<Result<Vec<u128>, _>>()?;
    }
    let ver = |e: experiments::ExperimentError| CliError::validation("experiment", e);
    let (doc, rows): (serde_json::Value, Vec<experiments::CsvRow>) = match args.kind {
        Kind::Codegree => {
            let rep = experiments::exp_codegree(&params, &cfg).map_err(ver)?;
            (serde_json::to_value(&rep).unwrap(), rep.rows.clone())
        }
        Kind::DegreeProcess => {
            let rep = experiments::exp_degree_process(&params, &cfg).map_err(ver)?;
            (serde_json::to_value(&rep).unwrap(), rep.rows.clone())
        }
        Kind::CodegreeProcess => {
            let rep = experiments::exp_codegree_process(&params, &cfg).map_err(ver)?;
            (serde_json::to_value(&rep).unwrap(), rep.rows.clone())
        }
        Kind::Typicality => {
            let deltas = args
                .delta_grid
                .split(',')
                .map(|t| t.trim().parse::<f64>().map_err(|e| CliError::validation("parse", e)))
                .collect::<Result<Vec<f64>, _>>()?;
            let rep = experiments::exp_typicality(&params, args.t, &deltas, &cfg).map_err(ver)?;
            (serde_json::to_value(&rep).unwrap(), Vec::new())
        }
        Kind::Matching => {
            let rep = experiments::exp_matching(&params, &cfg).map_err(ver)?;
            (serde_json::to_value(&rep).unwrap(), rep.rows.clone())
        }
        Kind::MaxdegreeGnp => {
            let p_prime = parse_ratio(&args.instance.p)
                .map_err(|e| CliError::validation("parse", e))?;
            let p_f = num_traits::ToPrimitive::to_f64(&p_prime)
                .ok_or_else(|| CliError::validation("parse", "p' not representable"))?;
            let rep = experiments::exp_maxdegree_gnp(
                params.n1() as usize,
                params.n2() as usize,
                p_f,
                &cfg,
                args.floor,
            )
            .map_err(ver)?;
            (serde_json::to_value(&rep).unwrap(), rep.rows.clone())
        }
    };
    let content = match args.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()),
        Format::Csv => experiments::rows_to_csv(&rows),
        Format::Jsonl => {
            let mut s = String::new();
            for row in &rows {
                s.push_str(&serde_json::to_string(row).unwrap());
                s.push('\n');
            }
            s
        }
    };
    emit(&args.out, &content)
}
