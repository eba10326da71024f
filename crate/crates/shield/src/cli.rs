//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error (bad flags or values), 2 runtime
//! error (IO, malformed files, failed numerics). All randomness flows from
//! `--seed`/`--stream`; each command mixes in a fixed role so a pipeline
//! built from separate invocations never reuses a raw stream between the
//! sender and the attacker.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use graphshield_core::adversary::{attack_composite, AttackSpec};
use graphshield_core::analysis::{k_bound, k_line_search, select_k, RobustnessParams};
use graphshield_core::codec::{decode, encode, NoiseSpec};
use graphshield_core::empirics;
use graphshield_core::graph::{generate_ba, generate_er, vectorize, vertex_count_for};
use graphshield_core::{RngSeed, StreamRole};

use crate::error::Error;
use crate::formats;
use crate::harness::{self, ExperimentConfig, TrialRecord};

/// Repetition-coded graph transmission: generate, encode, attack, decode,
/// pick copy counts, and run channel simulations.
#[derive(Parser, Debug)]
#[command(name = "graphshield", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a random graph file.
    Gen(GenArgs),
    /// Vectorize a graph and transmit K noisy copies.
    Encode(EncodeArgs),
    /// Apply the composite attack to a transmission.
    Attack(AttackArgs),
    /// Majority-decode a transmission into a graph plus estimator report.
    Decode(DecodeArgs),
    /// Recommend a repetition count from the closed-form bound or the
    /// line search.
    Kselect(KselectArgs),
    /// Run a Monte Carlo experiment from a JSON config.
    Simulate(SimulateArgs),
    /// Rebuild KDE/ECDF summaries from an existing trials.csv.
    Report(ReportArgs),
}

#[derive(Args, Debug)]
pub struct SeedArgs {
    /// Base RNG seed; GRAPHSHIELD_SEED is the fallback.
    #[arg(long, env = "GRAPHSHIELD_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Stream id under the base seed.
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
}

impl SeedArgs {
    fn role_seed(&self, role: StreamRole) -> RngSeed {
        RngSeed::new(self.seed, self.stream).derive(0, 0, role)
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ModelArg {
    Er,
    Ba,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    /// Graph family: er (Erdős–Rényi) or ba (Barabási–Albert).
    #[arg(long, value_enum)]
    pub model: ModelArg,
    #[arg(long)]
    pub vertices: usize,
    /// Edge probability for --model er.
    #[arg(long)]
    pub edge_prob: Option<f64>,
    /// Edges attached per new vertex for --model ba.
    #[arg(long)]
    pub m: Option<usize>,
    #[command(flatten)]
    pub seed: SeedArgs,
    /// Output graph JSON path.
    #[arg(long, short)]
    pub output: PathBuf,
    /// Machine-parseable stdout.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct EncodeArgs {
    /// Input graph JSON.
    #[arg(long)]
    pub graph: PathBuf,
    /// Copy count (even, >= 2).
    #[arg(long)]
    pub k: usize,
    /// Sender flip probability in [0, 0.5).
    #[arg(long)]
    pub nu: f64,
    #[command(flatten)]
    pub seed: SeedArgs,
    /// Output transmission path.
    #[arg(long, short)]
    pub output: PathBuf,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct AttackArgs {
    /// Input transmission path.
    #[arg(long)]
    pub input: PathBuf,
    /// Random flip probability in [0, 0.5).
    #[arg(long, default_value_t = 0.0)]
    pub beta: f64,
    /// Disconnect each copy's most central vertex.
    #[arg(long)]
    pub targeted: bool,
    /// Run random flips before the targeted pass.
    #[arg(long)]
    pub random_first: bool,
    /// Vertex count; inferred from N when omitted.
    #[arg(long)]
    pub vertices: Option<usize>,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[arg(long, short)]
    pub output: PathBuf,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct DecodeArgs {
    /// Input transmission path.
    #[arg(long)]
    pub input: PathBuf,
    /// Vertex count; inferred from N when omitted.
    #[arg(long)]
    pub vertices: Option<usize>,
    /// Output decoded graph JSON.
    #[arg(long, short)]
    pub output: PathBuf,
    /// Optional estimator report JSON path (stdout otherwise).
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum KselectMode {
    /// Concentration bound from (ε_tol, η, N).
    Bound,
    /// Line search from the estimated flip probability.
    Line,
    /// Bound first, escalate through the line search if the tail misses.
    Auto,
}

#[derive(Args, Debug)]
pub struct KselectArgs {
    #[arg(long, value_enum)]
    pub mode: KselectMode,
    /// Estimator tolerance ε_tol in (0, ρ).
    #[arg(long)]
    pub eps_tol: f64,
    /// Failure probability η in (0, 1).
    #[arg(long, default_value_t = 0.01)]
    pub eta: f64,
    /// Reconstruction threshold ρ in (0, 1).
    #[arg(long, default_value_t = 0.05)]
    pub rho: f64,
    /// Block count N (modes: bound, auto).
    #[arg(long)]
    pub n: Option<usize>,
    /// Estimated flip probability μ̂ (modes: line, auto).
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Experiment config JSON.
    #[arg(long)]
    pub config: PathBuf,
    /// Run directory for trials.csv, KDE/ECDF CSVs, summary.json.
    #[arg(long, short)]
    pub output: PathBuf,
    /// Cap on rayon worker threads.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    /// Existing trials.csv.
    #[arg(long)]
    pub trials: PathBuf,
    /// Output directory for the regenerated CSVs.
    #[arg(long, short)]
    pub output: PathBuf,
    /// KDE bandwidth.
    #[arg(long, default_value_t = 0.005)]
    pub kde_h: f64,
    #[arg(long, default_value_t = 0.0)]
    pub grid_start: f64,
    #[arg(long, default_value_t = 0.2)]
    pub grid_end: f64,
    #[arg(long, default_value_t = 512)]
    pub grid_points: usize,
    #[arg(long)]
    pub json: bool,
}

/// CLI failure with its exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flag combination or value: exit 1.
    Usage(String),
    /// Everything else: exit 2.
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => write!(f, "{m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

type CliResult = Result<(), CliError>;

/// Map a core-level validation error onto the flag that carried the value.
fn usage<T>(flag: &str, result: graphshield_core::Result<T>) -> Result<T, CliError> {
    result.map_err(|e| CliError::Usage(format!("{flag}: {e}")))
}

pub fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Encode(args) => cmd_encode(args),
        Command::Attack(args) => cmd_attack(args),
        Command::Decode(args) => cmd_decode(args),
        Command::Kselect(args) => cmd_kselect(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Report(args) => cmd_report(args),
    }
}

fn cmd_gen(args: GenArgs) -> CliResult {
    let seed = args.seed.role_seed(StreamRole::Graph);
    let graph = match args.model {
        ModelArg::Er => {
            let p = args
                .edge_prob
                .ok_or_else(|| CliError::Usage("--edge-prob is required with --model er".into()))?;
            usage(
                "--edge-prob/--vertices",
                generate_er(args.vertices, p, seed),
            )?
        }
        ModelArg::Ba => {
            let m = args
                .m
                .ok_or_else(|| CliError::Usage("--m is required with --model ba".into()))?;
            usage("--m/--vertices", generate_ba(args.vertices, m, seed))?
        }
    };
    formats::write_graph(&args.output, &graph)?;
    emit(
        args.json,
        serde_json::json!({
            "command": "gen",
            "output": args.output,
            "num_vertices": graph.num_vertices(),
            "num_edges": graph.num_edges(),
        }),
        format!(
            "wrote {} ({} vertices, {} edges)",
            args.output.display(),
            graph.num_vertices(),
            graph.num_edges()
        ),
    );
    Ok(())
}

fn cmd_encode(args: EncodeArgs) -> CliResult {
    let noise = usage("--nu", NoiseSpec::new(args.nu))?;
    if args.k < 2 || !args.k.is_multiple_of(2) {
        return Err(CliError::Usage(format!(
            "--k: copy count {} must be even and >= 2",
            args.k
        )));
    }
    let graph = formats::read_graph(&args.graph)?;
    let source = vectorize(&graph);
    let sent = usage(
        "--k",
        encode(
            &source,
            args.k,
            &noise,
            args.seed.role_seed(StreamRole::Sender),
        ),
    )?;
    formats::write_transmission(&args.output, &sent)?;
    emit(
        args.json,
        serde_json::json!({
            "command": "encode",
            "output": args.output,
            "n_blocks": sent.num_blocks(),
            "k_copies": sent.num_copies(),
        }),
        format!(
            "wrote {} (N={}, K={})",
            args.output.display(),
            sent.num_blocks(),
            sent.num_copies()
        ),
    );
    Ok(())
}

// An explicit --vertices that mismatches the file is a usage error; a
// failed inference is a property of the input data.
fn infer_vertices(flag: Option<usize>, n_blocks: usize) -> Result<usize, CliError> {
    match flag {
        Some(v) => {
            if v < 2 || v * (v - 1) / 2 != n_blocks {
                return Err(CliError::Usage(format!(
                    "--vertices: {v} vertices give {} pairs, transmission has N={n_blocks}",
                    if v < 2 { 0 } else { v * (v - 1) / 2 }
                )));
            }
            Ok(v)
        }
        None => vertex_count_for(n_blocks).ok_or_else(|| {
            CliError::Runtime(format!(
                "block count {n_blocks} is not a pair count; pass --vertices"
            ))
        }),
    }
}

fn cmd_attack(args: AttackArgs) -> CliResult {
    let mut spec = usage("--beta", AttackSpec::new(args.beta, args.targeted))?;
    if args.random_first {
        spec = spec.with_random_first();
    }
    let input = formats::read_transmission(&args.input)?;
    let vertices = infer_vertices(args.vertices, input.num_blocks())?;
    let hit = attack_composite(
        &input,
        &spec,
        vertices,
        args.seed.role_seed(StreamRole::Attacker),
    )
    .map_err(Error::from)?;
    formats::write_transmission(&args.output, &hit)?;
    emit(
        args.json,
        serde_json::json!({
            "command": "attack",
            "output": args.output,
            "beta": args.beta,
            "targeted": args.targeted,
            "flipped_bits": input.bits().hamming(hit.bits()),
        }),
        format!(
            "wrote {} ({} bits changed)",
            args.output.display(),
            input.bits().hamming(hit.bits())
        ),
    );
    Ok(())
}

fn cmd_decode(args: DecodeArgs) -> CliResult {
    let input = formats::read_transmission(&args.input)?;
    let vertices = infer_vertices(args.vertices, input.num_blocks())?;
    let report = decode(&input);
    let decoded = report
        .decoded_edge_vector(vertices)
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    let graph = graphshield_core::graph::devectorize(&decoded);
    formats::write_graph(&args.output, &graph)?;

    let (n0, n1) = report.class_counts();
    let report_json = serde_json::json!({
        "n_blocks": report.num_blocks(),
        "k_copies": report.num_copies(),
        "p_hat": report.p_hat(),
        "mu_hat": report.mu_hat(),
        "n0_blocks": n0,
        "n1_blocks": n1,
        "decoded_edges": graph.num_edges(),
    });
    let mut pretty = serde_json::to_string_pretty(&report_json).expect("serializable");
    pretty.push('\n');
    match &args.report {
        Some(path) => {
            fs::write(path, &pretty).map_err(Error::from)?;
            emit(
                args.json,
                serde_json::json!({
                    "command": "decode",
                    "output": args.output,
                    "report": path,
                    "p_hat": report.p_hat(),
                    "mu_hat": report.mu_hat(),
                }),
                format!(
                    "wrote {} and {} (p_hat={:.6}, mu_hat={:.6})",
                    args.output.display(),
                    path.display(),
                    report.p_hat(),
                    report.mu_hat()
                ),
            );
        }
        None => {
            if args.json {
                println!("{report_json}");
            } else {
                print!("{pretty}");
            }
        }
    }
    Ok(())
}

fn cmd_kselect(args: KselectArgs) -> CliResult {
    let params = usage(
        "--rho/--eps-tol/--eta",
        RobustnessParams::new(args.rho, args.eps_tol, args.eta),
    )?;
    let need_n = || {
        args.n
            .ok_or_else(|| CliError::Usage("--n is required for this mode".into()))
    };
    let need_mu = || {
        args.mu
            .ok_or_else(|| CliError::Usage("--mu is required for this mode".into()))
    };
    let (k, detail) = match args.mode {
        KselectMode::Bound => {
            let k = usage("--n", k_bound(&params, need_n()?))?;
            (k, serde_json::json!({"mode": "bound", "k": k}))
        }
        KselectMode::Line => {
            let k = usage("--mu", k_line_search(need_mu()?, &params))?;
            (k, serde_json::json!({"mode": "line", "k": k}))
        }
        KselectMode::Auto => {
            let selection = usage("--mu/--n", select_k(&params, need_n()?, need_mu()?))?;
            (
                selection.k,
                serde_json::json!({
                    "mode": "auto",
                    "k": selection.k,
                    "bound_k": selection.bound_k,
                    "escalated": selection.escalated,
                }),
            )
        }
    };
    if args.json {
        println!("{detail}");
    } else {
        println!("{k}");
    }
    Ok(())
}

fn cmd_simulate(args: SimulateArgs) -> CliResult {
    let text = fs::read_to_string(&args.config).map_err(Error::from)?;
    let config = ExperimentConfig::from_json(&text)
        .map_err(|e| CliError::Runtime(format!("--config: {e}")))?;
    let result = match args.threads {
        Some(threads) => {
            if threads == 0 {
                return Err(CliError::Usage("--threads must be positive".into()));
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| CliError::Runtime(e.to_string()))?;
            pool.install(|| harness::run_experiment(&config))
        }
        None => harness::run_experiment(&config),
    }
    .map_err(CliError::from)?;
    harness::write_run_dir(&result, &args.output)?;

    let failures: usize = result.per_k.iter().map(|r| r.failures).sum();
    emit(
        args.json,
        serde_json::json!({
            "command": "simulate",
            "output": args.output,
            "k_values": config.k_values,
            "trials": config.trials,
            "failures": failures,
        }),
        format!(
            "wrote run directory {} ({} K values × {} trials, {} failures)",
            args.output.display(),
            config.k_values.len(),
            config.trials,
            failures
        ),
    );
    Ok(())
}

fn cmd_report(args: ReportArgs) -> CliResult {
    if args.kde_h <= 0.0 {
        return Err(CliError::Usage(format!(
            "--kde-h: bandwidth {} must be positive",
            args.kde_h
        )));
    }
    if args.grid_points == 0 {
        return Err(CliError::Usage("--grid-points must be positive".into()));
    }
    let text = fs::read_to_string(&args.trials).map_err(Error::from)?;
    let records = harness::parse_trials_csv(&text)?;
    if records.is_empty() {
        return Err(CliError::Runtime("trials.csv holds no records".into()));
    }
    let by_k = errors_by_k(&records);
    fs::create_dir_all(&args.output).map_err(Error::from)?;
    let grid = empirics::linear_grid(args.grid_start, args.grid_end, args.grid_points);
    let mut written = Vec::new();
    for (k, errors) in &by_k {
        let kde = empirics::kde(errors, args.kde_h, &grid).map_err(Error::from)?;
        let kde_path = args.output.join(format!("kde_K{k}.csv"));
        fs::write(&kde_path, curve_csv("density", &kde)).map_err(Error::from)?;
        let ecdf_points: Vec<(f64, f64)> = grid
            .iter()
            .map(|&rho| (rho, empirics::ecdf(errors, rho).expect("nonempty")))
            .collect();
        let ecdf_path = args.output.join(format!("ecdf_K{k}.csv"));
        fs::write(&ecdf_path, curve_csv("ecdf", &ecdf_points)).map_err(Error::from)?;
        written.push(*k);
    }
    emit(
        args.json,
        serde_json::json!({
            "command": "report",
            "output": args.output,
            "k_values": written,
            "records": records.len(),
        }),
        format!(
            "wrote KDE/ECDF files for K ∈ {:?} under {}",
            written,
            args.output.display()
        ),
    );
    Ok(())
}

fn curve_csv(value_name: &str, points: &[(f64, f64)]) -> String {
    let mut out = format!("rho,{value_name}\n");
    for &(rho, value) in points {
        let _ = writeln!(
            out,
            "{},{}",
            formats::format_sig(rho),
            formats::format_sig(value)
        );
    }
    out
}

fn emit(json: bool, payload: serde_json::Value, human: String) {
    if json {
        println!("{payload}");
    } else {
        println!("{human}");
    }
}

/// Used by tests to keep one grouping implementation.
pub fn errors_by_k(records: &[TrialRecord]) -> BTreeMap<usize, Vec<f64>> {
    let mut by_k: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for rec in records {
        by_k.entry(rec.k_copies).or_default().push(rec.error);
    }
    by_k
}
