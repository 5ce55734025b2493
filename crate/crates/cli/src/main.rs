//! Command-line front end: cluster incomplete heavy-tailed data, generate
//! ground-truth synthetic datasets, and evaluate label quality.

mod io;
mod report;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use bigclust::data::{estimate_nu, load_returns_named, synth, SynthSpec};
use bigclust::metrics::{accuracy, ari, chi, modularity, modularity_weighted, LabeledPartition};
use bigclust::metrics::purity;
use bigclust::solver::{run, InitMixing, SolverConfig};
use bigclust::Error as CoreError;
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::report::{ConfigEcho, EvalReport, MetricBlock, RunReport, TraceRow};

const EXIT_OK: i32 = 0;
const EXIT_BAD_ARGS: i32 = 1;
const EXIT_DATA: i32 = 2;
const EXIT_DEGENERATE: i32 = 3;

#[derive(Parser)]
#[command(
    name = "bigclust",
    version,
    about = "Clusters incomplete heavy-tailed data by learning a bipartite k-component graph"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Learn the graph from a CSV of prices or returns and emit a JSON report
    Cluster(Box<ClusterArgs>),
    /// Generate a synthetic dataset with known cluster structure
    Synth(SynthArgs),
    /// Score predicted labels against ground truth
    Eval(EvalArgs),
}

/// PGD step size: a positive number or "auto" for the safe inverse-Lipschitz
/// choice.
#[derive(Clone, Copy, Debug)]
struct StepArg(Option<f64>);

fn parse_step(s: &str) -> Result<StepArg, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(StepArg(None));
    }
    let v: f64 = s.parse().map_err(|_| format!("expected a number or 'auto', got {s:?}"))?;
    if !(v.is_finite() && v > 0.0) {
        return Err("step size must be positive".into());
    }
    Ok(StepArg(Some(v)))
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum InitKind {
    /// entries |N(0,1)| then unit column sums (absolute value keeps the
    /// averaging weights nonnegative)
    Normal,
    /// entries U[0,1] then unit column sums
    Uniform,
}

#[derive(Args)]
struct ClusterArgs {
    /// CSV input: header of asset names, one row per time point
    #[arg(long)]
    input: PathBuf,
    /// Treat the input as returns instead of prices
    #[arg(long, default_value_t = false)]
    returns: bool,
    /// Number of clusters (at least 2)
    #[arg(long)]
    k: usize,
    /// Student-t degrees of freedom; omit to fit from the data
    #[arg(long, conflicts_with = "fit_nu")]
    nu: Option<f64>,
    /// Fit the degrees of freedom from per-asset kurtosis (the default when
    /// --nu is not given)
    #[arg(long, default_value_t = false)]
    fit_nu: bool,
    /// ADMM penalty parameter
    #[arg(long, default_value_t = 1.0)]
    rho: f64,
    /// Membership PGD step size, or "auto" = 1/(rho (r+2))
    #[arg(long, default_value = "auto", value_parser = parse_step)]
    mu: StepArg,
    /// Averaging PGD step size, or "auto" = per-column inverse Lipschitz
    #[arg(long, default_value = "auto", value_parser = parse_step)]
    eta: StepArg,
    /// PGD iterations per subproblem
    #[arg(long, default_value_t = 50)]
    inner_iters: usize,
    /// Outer ADMM iteration cap
    #[arg(long, default_value_t = 1000)]
    max_iter: usize,
    /// Relative primal-residual threshold
    #[arg(long, default_value_t = 1e-5)]
    tol: f64,
    /// Initialization of the averaging matrix
    #[arg(long, value_enum, default_value_t = InitKind::Normal)]
    init: InitKind,
    /// RNG seed for the initialization
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Ground-truth labels CSV; enables accuracy, purity, and ARI
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Report path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// DOT edge-list output of the learned graph
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Minimum edge weight included in the DOT output
    #[arg(long, default_value_t = 1e-6)]
    threshold: f64,
}

#[derive(Args)]
struct SynthArgs {
    /// Member count
    #[arg(long)]
    r: usize,
    /// Cluster count
    #[arg(long)]
    k: usize,
    /// Sample count
    #[arg(long)]
    n: usize,
    /// Student-t degrees of freedom of the generator
    #[arg(long, default_value_t = 5.0)]
    nu: f64,
    /// In-cluster membership weight, in (1/k, 1]
    #[arg(long, default_value_t = 0.9)]
    sep: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Prefix for <prefix>_data.csv, <prefix>_labels.csv, <prefix>_btrue.json
    #[arg(long, default_value = "synth")]
    out_prefix: String,
}

#[derive(Args)]
struct EvalArgs {
    /// RunReport JSON holding the predicted labels
    #[arg(long, group = "pred", required = true)]
    report: Option<PathBuf>,
    /// Predicted labels CSV
    #[arg(long, group = "pred")]
    labels: Option<PathBuf>,
    /// Ground-truth labels CSV
    #[arg(long)]
    truth: PathBuf,
    /// Data CSV; enables the Calinski-Harabasz index
    #[arg(long)]
    input: Option<PathBuf>,
    /// Treat --input as returns instead of prices
    #[arg(long, default_value_t = false)]
    returns: bool,
    /// Membership-matrix JSON; enables modularity
    #[arg(long)]
    b: Option<PathBuf>,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_BAD_ARGS,
            };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Cluster(args) => cmd_cluster(*args),
        Command::Synth(args) => cmd_synth(args),
        Command::Eval(args) => cmd_eval(args),
    }
}

fn runtime_exit(e: &CoreError) -> i32 {
    match e {
        CoreError::DegenerateCluster(_) => EXIT_DEGENERATE,
        _ => EXIT_DATA,
    }
}

fn fail(code: i32, msg: impl std::fmt::Display) -> i32 {
    eprintln!("error: {msg}");
    code
}

fn cmd_cluster(args: ClusterArgs) -> i32 {
    if args.k < 2 {
        return fail(EXIT_BAD_ARGS, "--k must be at least 2");
    }
    if let Some(nu) = args.nu {
        if !(nu.is_finite() && nu > 2.0) {
            return fail(EXIT_BAD_ARGS, "--nu must exceed 2");
        }
    }
    if !(args.rho.is_finite() && args.rho > 0.0) {
        return fail(EXIT_BAD_ARGS, "--rho must be positive");
    }
    if !(args.tol.is_finite() && args.tol > 0.0) {
        return fail(EXIT_BAD_ARGS, "--tol must be positive");
    }
    if args.threshold < 0.0 {
        return fail(EXIT_BAD_ARGS, "--threshold cannot be negative");
    }
    if args.max_iter == 0 || args.inner_iters == 0 {
        return fail(EXIT_BAD_ARGS, "iteration counts must be at least 1");
    }

    let started = Instant::now();
    let (data, names) = match load_returns_named::<f64>(&args.input, args.returns) {
        Ok(loaded) => loaded,
        Err(e) => return fail(EXIT_DATA, e),
    };
    if args.k >= data.r() {
        return fail(EXIT_BAD_ARGS, format!("--k {} must be below the member count {}", args.k, data.r()));
    }

    let (nu, nu_source) = match args.nu {
        Some(v) => (v, "given"),
        None => match estimate_nu(&data) {
            Ok(v) => (v, "fitted"),
            Err(e) => return fail(EXIT_DATA, e),
        },
    };

    let mut cfg = SolverConfig::new(args.k, nu);
    cfg.rho = args.rho;
    cfg.mu = args.mu.0;
    cfg.eta = args.eta.0;
    cfg.inner_iters = args.inner_iters;
    cfg.max_outer = args.max_iter;
    cfg.tol_primal = args.tol;
    cfg.seed = args.seed;

    let init = match args.init {
        InitKind::Normal => InitMixing::RandomNormal,
        InitKind::Uniform => InitMixing::RandomUniform,
    };
    let result = match run(&data, &cfg, init) {
        Ok(r) => r,
        Err(e) => return fail(runtime_exit(&e), e),
    };

    let mut metrics = MetricBlock {
        modularity: modularity(&result.weights, &result.labels).ok(),
        chi: chi(&data, &result.labels).ok(),
        ..MetricBlock::default()
    };
    if let Some(truth_path) = &args.truth {
        let truth = match io::read_labels(truth_path) {
            Ok(t) => t,
            Err(e) => return fail(EXIT_DATA, e),
        };
        metrics.acc = match accuracy(&truth, &result.labels) {
            Ok(v) => Some(v),
            Err(e) => return fail(EXIT_DATA, e),
        };
        metrics.purity = purity(&truth, &result.labels).ok();
        metrics.ari = ari(&truth, &result.labels).ok();
    }

    let report = RunReport {
        labels: result.labels.labels().to_vec(),
        metrics,
        config: ConfigEcho {
            input: args.input.display().to_string(),
            returns: args.returns,
            k: args.k,
            nu,
            nu_source: nu_source.into(),
            rho: args.rho,
            mu: args.mu.0,
            eta: args.eta.0,
            inner_iters: args.inner_iters,
            max_iter: args.max_iter,
            tol_primal: args.tol,
            tol_change: cfg.tol_change,
            init: format!("{:?}", args.init).to_lowercase(),
            seed: args.seed,
            truth: args.truth.as_ref().map(|p| p.display().to_string()),
            dot: args.dot.as_ref().map(|p| p.display().to_string()),
            threshold: args.threshold,
        },
        iterations: result.iterations,
        converged: result.converged,
        trace: result
            .trace
            .iter()
            .map(|t| TraceRow {
                iter: t.iter,
                objective: t.objective,
                primal_residual: t.primal_residual,
            })
            .collect(),
        timing_ms: started.elapsed().as_millis() as u64,
    };

    if let Some(dot_path) = &args.dot {
        if let Err(e) = io::write_dot(dot_path, result.weights.matrix(), &names, args.threshold) {
            return fail(EXIT_DATA, e);
        }
    }
    emit_json(&report, args.out.as_deref())
}

fn cmd_synth(args: SynthArgs) -> i32 {
    let spec = SynthSpec {
        r: args.r,
        k: args.k,
        n: args.n,
        nu: args.nu,
        separation: args.sep,
        seed: args.seed,
    };
    if let Err(e) = spec.validate() {
        return fail(EXIT_BAD_ARGS, e);
    }
    let sample = match synth(&spec) {
        Ok(s) => s,
        Err(e) => return fail(runtime_exit(&e), e),
    };
    let prefix = &args.out_prefix;
    let data_path = PathBuf::from(format!("{prefix}_data.csv"));
    let labels_path = PathBuf::from(format!("{prefix}_labels.csv"));
    let weights_path = PathBuf::from(format!("{prefix}_btrue.json"));
    if let Err(e) = io::write_data_csv(&data_path, sample.data.matrix()) {
        return fail(EXIT_DATA, e);
    }
    if let Err(e) = io::write_labels(&labels_path, sample.labels.labels()) {
        return fail(EXIT_DATA, e);
    }
    if let Err(e) = io::write_weights(&weights_path, sample.b_true.matrix()) {
        return fail(EXIT_DATA, e);
    }
    println!(
        "wrote {} {} {}",
        data_path.display(),
        labels_path.display(),
        weights_path.display()
    );
    EXIT_OK
}

fn cmd_eval(args: EvalArgs) -> i32 {
    let pred = if let Some(report_path) = &args.report {
        let body = match std::fs::read_to_string(report_path) {
            Ok(b) => b,
            Err(e) => return fail(EXIT_DATA, format!("{}: {e}", report_path.display())),
        };
        let report: RunReport = match serde_json::from_str(&body) {
            Ok(r) => r,
            Err(e) => return fail(EXIT_DATA, format!("{}: {e}", report_path.display())),
        };
        LabeledPartition::from_labels(report.labels)
    } else if let Some(labels_path) = &args.labels {
        match io::read_labels(labels_path) {
            Ok(l) => l,
            Err(e) => return fail(EXIT_DATA, e),
        }
    } else {
        return fail(EXIT_BAD_ARGS, "one of --report or --labels is required");
    };
    let truth = match io::read_labels(&args.truth) {
        Ok(t) => t,
        Err(e) => return fail(EXIT_DATA, e),
    };
    if truth.len() != pred.len() {
        return fail(
            EXIT_DATA,
            format!("truth has {} labels, prediction has {}", truth.len(), pred.len()),
        );
    }

    let mut metrics = MetricBlock::default();
    let mut reasons: BTreeMap<String, String> = BTreeMap::new();
    let record = |name: &str,
                      slot: &mut Option<f64>,
                      outcome: Result<f64, String>,
                      reasons: &mut BTreeMap<String, String>| {
        match outcome {
            Ok(v) => *slot = Some(v),
            Err(reason) => {
                reasons.insert(name.into(), reason);
            }
        }
    };

    record(
        "acc",
        &mut metrics.acc,
        accuracy(&truth, &pred).map_err(|e| e.to_string()),
        &mut reasons,
    );
    record(
        "purity",
        &mut metrics.purity,
        purity(&truth, &pred).map_err(|e| e.to_string()),
        &mut reasons,
    );
    record("ari", &mut metrics.ari, ari(&truth, &pred).map_err(|e| e.to_string()), &mut reasons);

    let mod_outcome = match &args.b {
        Some(path) => io::read_weights(path).and_then(|w| {
            if w.nrows() != pred.len() {
                return Err(format!("membership matrix has {} rows for {} labels", w.nrows(), pred.len()));
            }
            modularity_weighted(&w, &pred).map_err(|e| e.to_string())
        }),
        None => Err("no graph provided".into()),
    };
    record("mod", &mut metrics.modularity, mod_outcome, &mut reasons);

    let chi_outcome = match &args.input {
        Some(path) => load_returns_named::<f64>(path, args.returns)
            .map_err(|e| e.to_string())
            .and_then(|(data, _)| chi(&data, &pred).map_err(|e| e.to_string())),
        None => Err("no data provided".into()),
    };
    record("chi", &mut metrics.chi, chi_outcome, &mut reasons);

    emit_json(&EvalReport { metrics, reasons }, args.out.as_deref())
}

fn emit_json<S: serde::Serialize>(value: &S, out: Option<&Path>) -> i32 {
    let mut body = serde_json::to_string_pretty(value).expect("serializable report");
    body.push('\n');
    match out {
        Some(path) => match std::fs::write(path, body) {
            Ok(()) => EXIT_OK,
            Err(e) => fail(EXIT_DATA, format!("{}: {e}", path.display())),
        },
        None => {
            print!("{body}");
            EXIT_OK
        }
    }
}
