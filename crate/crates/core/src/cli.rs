//! Command-line front end.
//!
//! Every report is a JSON object `{"config": …, "result": …}` (or CSV for
//! matrices) so a run can be replayed from its own output. Exit codes: 0 on
//! success, 1 on usage or input errors, 2 when the analysis itself fails.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::demo::demo_suite;
use crate::error::Error;
use crate::experiments::{self, ExperimentReport, Verdict};
use crate::funcdim::{
    batch_dim_with, eval_jacobian_fd, eval_jacobian_with, functional_dim_with, max_relative_error, upper_bound, Batch,
    DimOptions, Strategy,
};
use crate::linalg::{self, Matrix, DEFAULT_RANK_TOL};
use crate::network::{AnyNetwork, Architecture, Network, SmoothnessPolicy};
use crate::ntk::{batch_ntk, verify_rank_equality};
use crate::pwl_complex::{complex_1d, decisive_set_1d, is_generic_1d, is_transversal_1d};
use crate::scalar::{parse_rational, Scalar, ScalarMode};
use crate::symmetry::{self, apply_symmetry, Generator, SymmetryElement};

#[derive(Debug, Parser)]
#[command(name = "fundim", version, about = "Functional dimension of ReLU networks")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GlobalArgs {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Relative singular-value cutoff for numeric rank.
    #[arg(long, global = true, default_value_t = DEFAULT_RANK_TOL)]
    pub tol: f64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Rational,
    Float,
}

impl From<ModeArg> for ScalarMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Rational => ScalarMode::Rational,
            ModeArg::Float => ScalarMode::Float,
        }
    }
}

/// A network from a file, or inline from `--widths` and `--params`.
#[derive(Debug, Clone, Args)]
pub struct NetArgs {
    /// Network JSON file.
    #[arg(long, conflicts_with_all = ["widths", "params"])]
    pub net: Option<PathBuf>,
    /// Architecture, e.g. `1,2,1`.
    #[arg(long, value_delimiter = ',', requires = "params")]
    pub widths: Option<Vec<usize>>,
    /// Flat parameter vector, layer by layer, row-major with the bias last.
    #[arg(long, allow_hyphen_values = true, requires = "widths")]
    pub params: Option<String>,
    /// Scalar mode; must match the file when `--net` is given.
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
}

#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    /// Input point as comma-separated coordinates; repeat for a batch.
    #[arg(long = "x", allow_hyphen_values = true)]
    pub x: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Decisive,
    Saturation,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Network output at each point.
    Eval {
        #[command(flatten)]
        net: NetArgs,
        #[command(flatten)]
        points: PointArgs,
    },
    /// Ternary activation label at each point.
    Label {
        #[command(flatten)]
        net: NetArgs,
        #[command(flatten)]
        points: PointArgs,
    },
    /// Evaluation-map Jacobian `J E_Z(s)`.
    Jacobian {
        #[command(flatten)]
        net: NetArgs,
        #[command(flatten)]
        points: PointArgs,
        /// Also compare with central differences of this step (float mode).
        #[arg(long)]
        fd: Option<f64>,
        /// Accept points whose labels contain zeros.
        #[arg(long)]
        permissive: bool,
    },
    /// Functional dimension, or batch dimension when points are given.
    Dim {
        #[command(flatten)]
        net: NetArgs,
        #[command(flatten)]
        points: PointArgs,
        #[arg(long, value_enum, default_value_t = StrategyArg::Decisive)]
        strategy: StrategyArg,
        /// Only sample inputs in the open positive orthant.
        #[arg(long)]
        positive: bool,
        #[arg(long)]
        max_points: Option<usize>,
        #[arg(long)]
        patience: Option<usize>,
        #[arg(long)]
        permissive: bool,
    },
    /// Batch neural tangent kernel and the rank comparison with `J E_Z`.
    Ntk {
        #[command(flatten)]
        net: NetArgs,
        #[command(flatten)]
        points: PointArgs,
    },
    /// Canonical polyhedral complex of a network with scalar input.
    Complex {
        #[command(flatten)]
        net: NetArgs,
    },
    /// Decisive set of a network with scalar input.
    Decisive {
        #[command(flatten)]
        net: NetArgs,
        #[arg(long)]
        positive: bool,
    },
    /// Applies hidden symmetries and checks that the function is unchanged.
    Symmetry {
        #[command(flatten)]
        net: NetArgs,
        /// Generator, applied in order: `perm:LAYER,J,K` or `scale:LAYER,NEURON,C`.
        #[arg(long = "gen")]
        generators: Vec<String>,
        /// Grid points per input axis on [-10, 10].
        #[arg(long, default_value_t = symmetry::GRID_POINTS)]
        grid_points: usize,
    },
    /// Batch experiments.
    Experiment {
        #[command(subcommand)]
        which: ExperimentCmd,
    },
    /// Runs the worked examples and prints a pass/fail table.
    Demo,
}

#[derive(Debug, Subcommand)]
pub enum ExperimentCmd {
    /// Largest functional dimension for an all-ones architecture.
    OnesChain {
        #[arg(long)]
        len: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// Random search for a parameter attaining the upper bound.
    Tightness {
        #[arg(long, value_delimiter = ',')]
        arch: Vec<usize>,
        #[arg(long, default_value_t = 500)]
        trials: usize,
    },
    /// Checks the upper bound on random parameters.
    UpperBound {
        #[arg(long, value_delimiter = ',')]
        arch: Vec<usize>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Frequency of the stable-unactivation sign condition.
    Unactivated {
        #[arg(long, value_delimiter = ',')]
        arch: Vec<usize>,
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
    },
    /// Depth-one parameter of full functional dimension.
    Depth1 {
        #[arg(long)]
        n1: usize,
        #[arg(long)]
        n2: usize,
    },
    /// One-sided derivatives at a parameter with no smooth point.
    Nonordinary,
    /// Dimension of random perturbations at shrinking radii.
    Semicontinuity {
        #[arg(long, value_delimiter = ',')]
        arch: Vec<usize>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, value_delimiter = ',', default_values_t = vec![1e-1, 1e-2, 1e-3])]
        radii: Vec<f64>,
    },
}

/// Configuration embedded in every report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub argv: Vec<String>,
    pub input: Option<PathBuf>,
    pub seed: u64,
    pub scalar_mode: Option<ScalarMode>,
    pub tolerance: f64,
    pub output: Option<PathBuf>,
    pub format: Format,
}

enum Failure {
    Usage(String),
    Analysis(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Json(_) | Error::Schema(_) | Error::Io(_) | Error::ModeMismatch { .. } => Failure::Usage(e.to_string()),
            other => Failure::Analysis(other),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(Failure::Usage(msg.into()))
}

/// Parses `argv` (including the program name), runs the command and
/// returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    let argv: Vec<String> = argv.iter().map(|s| s.to_string_lossy().into_owned()).collect();
    match execute(&cli, argv) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(Failure::Analysis(e)) => {
            eprintln!("analysis error: {e}");
            2
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("FUNDIM_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            log::debug!("thread pool already configured: {e}");
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Eval { .. } => "eval",
        Command::Label { .. } => "label",
        Command::Jacobian { .. } => "jacobian",
        Command::Dim { .. } => "dim",
        Command::Ntk { .. } => "ntk",
        Command::Complex { .. } => "complex",
        Command::Decisive { .. } => "decisive",
        Command::Symmetry { .. } => "symmetry",
        Command::Experiment { .. } => "experiment",
        Command::Demo => "demo",
    }
}

fn net_args(c: &Command) -> Option<&NetArgs> {
    match c {
        Command::Eval { net, .. }
        | Command::Label { net, .. }
        | Command::Jacobian { net, .. }
        | Command::Dim { net, .. }
        | Command::Ntk { net, .. }
        | Command::Complex { net }
        | Command::Decisive { net, .. }
        | Command::Symmetry { net, .. } => Some(net),
        Command::Experiment { .. } | Command::Demo => None,
    }
}

/// Output of one command: a JSON result, or CSV text.
enum Output {
    Json(Value),
    Csv(String),
}

fn execute(cli: &Cli, argv: Vec<String>) -> CliResult<i32> {
    let g = &cli.global;
    if !(g.tol > 0.0) {
        return usage(format!("--tol must be positive, got {}", g.tol));
    }
    let loaded = net_args(&cli.command).map(load).transpose()?;
    let config = RunConfig {
        command: command_name(&cli.command).into(),
        argv,
        input: net_args(&cli.command).and_then(|n| n.net.clone()),
        seed: g.seed,
        scalar_mode: loaded.as_ref().map(AnyNetwork::mode),
        tolerance: g.tol,
        output: g.output.clone(),
        format: g.format,
    };
    let csv_capable = matches!(cli.command, Command::Jacobian { .. } | Command::Ntk { .. });
    if g.format == Format::Csv && !csv_capable {
        return usage(format!("--format csv is only available for jacobian and ntk, not {}", config.command));
    }
    let (output, code) = match (&cli.command, loaded) {
        (Command::Demo, _) => demo()?,
        (Command::Experiment { which }, _) => {
            let report = experiment(which, g.seed)?;
            let code = if report.verdict == Verdict::Failed { 2 } else { 0 };
            (Output::Json(serde_json::to_value(&report).expect("report serializes")), code)
        }
        (cmd, Some(AnyNetwork::Rational(n))) => (network_command(cmd, &n, g)?, 0),
        (cmd, Some(AnyNetwork::Float(n))) => (network_command(cmd, &n, g)?, 0),
        (_, None) => unreachable!("network commands always load a network"),
    };
    let text = match output {
        Output::Json(result) => {
            let backend = config.scalar_mode.map(ScalarMode::backend);
            let env = json!({ "config": config, "backend": backend, "result": result });
            serde_json::to_string_pretty(&env).expect("values serialize") + "\n"
        }
        Output::Csv(body) => {
            format!("# config: {}\n{body}", serde_json::to_string(&config).expect("config serializes"))
        }
    };
    match &g.output {
        Some(path) => std::fs::write(path, text).map_err(Error::from)?,
        None => print!("{text}"),
    }
    Ok(code)
}

fn load(args: &NetArgs) -> CliResult<AnyNetwork> {
    let wanted = args.mode.map(ScalarMode::from);
    let any = match (&args.net, &args.widths, &args.params) {
        (Some(path), _, _) => {
            let text = std::fs::read_to_string(path).map_err(Error::from)?;
            AnyNetwork::from_json_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
        }
        (None, Some(widths), Some(params)) => {
            let arch = Architecture::new(widths.clone()).map_err(|e| Failure::Usage(e.to_string()))?;
            let entries: Vec<&str> = params.split(',').collect();
            match wanted.unwrap_or(ScalarMode::Rational) {
                ScalarMode::Rational => AnyNetwork::Rational(inline(arch, &entries)?),
                ScalarMode::Float => AnyNetwork::Float(inline(arch, &entries)?),
            }
        }
        _ => return usage("give --net FILE or both --widths and --params"),
    };
    if let Some(m) = wanted {
        if m != any.mode() {
            return Err(Error::ModeMismatch { expected: m, found: any.mode() }.into());
        }
    }
    Ok(any)
}

fn inline<S: Scalar>(arch: Architecture, entries: &[&str]) -> CliResult<Network<S>> {
    let params = entries.iter().map(|s| parse_scalar(s)).collect::<CliResult<Vec<S>>>()?;
    Network::from_flat(arch, params).map_err(|e| Failure::Usage(e.to_string()))
}

fn parse_scalar<S: Scalar>(s: &str) -> CliResult<S> {
    let parsed = match S::MODE {
        ScalarMode::Rational => parse_rational(s).map(|r| S::from_json(&Value::String(r.to_string()))),
        ScalarMode::Float => match s.trim().parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Ok(S::from_f64(v))),
            _ => parse_rational(s).map(|r| Ok(S::from_f64(r.to_f64()))),
        },
    };
    match parsed {
        Ok(Ok(v)) => Ok(v),
        _ => usage(format!("cannot parse {s:?} as a number")),
    }
}

fn points<S: Scalar>(p: &PointArgs, n0: usize, required: bool) -> CliResult<Batch<S>> {
    if required && p.x.is_empty() {
        return usage("at least one --x point is required");
    }
    let pts = p
        .x
        .iter()
        .map(|s| s.split(',').map(parse_scalar).collect::<CliResult<Vec<S>>>())
        .collect::<CliResult<Vec<_>>>()?;
    if let Some(bad) = pts.iter().find(|z| z.len() != n0) {
        return usage(format!("point has {} coordinates, the network takes {n0}", bad.len()));
    }
    Batch::new(n0, pts).map_err(|e| Failure::Usage(e.to_string()))
}

fn vals<S: Scalar>(v: &[S]) -> Value {
    Value::Array(v.iter().map(Scalar::to_json).collect())
}

fn matrix_json<S: Scalar>(m: &Matrix<S>) -> Value {
    Value::Array(m.iter_rows().map(vals).collect())
}

/// Header `A{layer}[{row},{col}]` for every parameter.
fn param_names(arch: &Architecture) -> Vec<String> {
    (1..=arch.depth())
        .flat_map(|l| {
            let cols = arch.width(l - 1) + 1;
            (0..arch.width(l)).flat_map(move |r| (0..cols).map(move |c| format!("A{l}[{r},{c}]")))
        })
        .collect()
}

fn scalar_csv<S: Scalar>(v: &S) -> String {
    match S::MODE {
        ScalarMode::Rational => v.to_json().as_str().map(str::to_owned).unwrap_or_default(),
        ScalarMode::Float => format!("{}", v.to_f64()),
    }
}

fn policy(permissive: bool) -> SmoothnessPolicy {
    if permissive {
        SmoothnessPolicy::Permissive
    } else {
        SmoothnessPolicy::Strict
    }
}

fn network_command<S: Scalar>(cmd: &Command, net: &Network<S>, g: &GlobalArgs) -> CliResult<Output> {
    let n0 = net.arch().input_dim();
    let value = match cmd {
        Command::Eval { points: p, .. } => {
            let batch = points::<S>(p, n0, true)?;
            let outs = batch.points().iter().map(|z| net.output(z).map(|o| vals(&o))).collect::<Result<Vec<_>, _>>()?;
            json!({ "points": batch, "outputs": outs })
        }
        Command::Label { points: p, .. } => {
            let batch = points::<S>(p, n0, true)?;
            let mut labels = Vec::new();
            for z in batch.points() {
                let l = net.ternary_label(z)?;
                labels.push(json!({ "label": l, "display": l.to_string(), "smoothness": format!("{:?}", crate::network::smoothness_of_label(&l)) }));
            }
            json!({ "points": batch, "labels": labels })
        }
        Command::Jacobian { points: p, fd, permissive, .. } => {
            let batch = points::<S>(p, n0, true)?;
            let j = eval_jacobian_with(net, &batch, policy(*permissive))?;
            if g.format == Format::Csv {
                let nm = net.arch().output_dim();
                let mut out = format!("point,output,{}\n", param_names(net.arch()).join(","));
                for (r, row) in j.matrix.iter_rows().enumerate() {
                    let cells: Vec<String> = row.iter().map(scalar_csv).collect();
                    out += &format!("{},{},{}\n", r / nm, r % nm, cells.join(","));
                }
                return Ok(Output::Csv(out));
            }
            let mut v = json!({
                "points": batch,
                "columns": param_names(net.arch()),
                "matrix": matrix_json(&j.matrix),
                "rank": S::rank(&j.matrix, g.tol),
            });
            if let Some(h) = fd {
                if S::MODE != ScalarMode::Float {
                    return usage("--fd needs a float network");
                }
                let fnet = net.to_float();
                let fbatch = Batch::new(n0, batch.points().iter().map(|z| z.iter().map(Scalar::to_f64).collect()).collect())?;
                let numeric = eval_jacobian_fd(&fnet, &fbatch, *h)?;
                v["finite_difference"] = json!({
                    "step": h,
                    "max_relative_error": max_relative_error(&j.matrix.to_float(), &numeric.matrix),
                    "flagged": numeric.flagged,
                });
            }
            v
        }
        Command::Dim { points: p, strategy, positive, max_points, patience, permissive, .. } => {
            let opts = DimOptions { policy: policy(*permissive), rank_tol: g.tol };
            let report = if p.x.is_empty() {
                let strategy = match strategy {
                    StrategyArg::Decisive => Strategy::Decisive1d,
                    StrategyArg::Saturation => {
                        Strategy::RandomSaturation { seed: g.seed, max_points: *max_points, patience: *patience }
                    }
                };
                functional_dim_with(net, strategy, *positive, &opts)?
            } else {
                batch_dim_with(net, &points::<S>(p, n0, true)?, &opts)?
            };
            let mut v = serde_json::to_value(&report).expect("report serializes");
            v["upper_bound"] = json!(upper_bound(net.arch()));
            v["param_dim"] = json!(net.param_dim());
            v
        }
        Command::Ntk { points: p, .. } => {
            let batch = points::<S>(p, n0, true)?;
            let k = batch_ntk(net, &batch)?;
            if g.format == Format::Csv {
                let n = k.matrix.cols();
                let header: Vec<String> = (0..n).map(|c| format!("k{c}")).collect();
                let mut out = format!("row,{}\n", header.join(","));
                for (r, row) in k.matrix.iter_rows().enumerate() {
                    out += &format!("{r},{}\n", row.iter().map(scalar_csv).collect::<Vec<_>>().join(","));
                }
                return Ok(Output::Csv(out));
            }
            let ranks = verify_rank_equality(net, &batch, g.tol)?;
            let mut v = json!({ "points": batch, "kernel": matrix_json(&k.matrix), "ranks": ranks });
            if S::MODE == ScalarMode::Float {
                v["min_eigenvalue"] = json!(linalg::min_eigenvalue_symmetric(&k.matrix.to_float())?);
            }
            v
        }
        Command::Complex { .. } => {
            let c = complex_1d(net)?;
            let mut v = c.to_json();
            v["transversal"] = json!(is_transversal_1d(net)?);
            v["generic"] = json!(is_generic_1d(net)?);
            v
        }
        Command::Decisive { positive, .. } => {
            let c = complex_1d(net)?;
            let d = decisive_set_1d(net, &c, *positive, SmoothnessPolicy::Strict)?;
            json!({ "points": d.batch, "cell_of_point": d.cell_of_point, "skipped_cells": d.skipped })
        }
        Command::Symmetry { generators, grid_points, .. } => symmetry_command(net, generators, *grid_points, g)?,
        Command::Experiment { .. } | Command::Demo => unreachable!("handled without a network"),
    };
    Ok(Output::Json(value))
}

fn parse_generator<S: Scalar>(s: &str) -> CliResult<Generator<S>> {
    let bad = || Failure::Usage(format!("generator {s:?} is not perm:L,J,K or scale:L,N,C"));
    let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
    let parts: Vec<&str> = rest.split(',').collect();
    let idx = |i: usize| parts.get(i).and_then(|p| p.trim().parse::<usize>().ok()).ok_or_else(bad);
    let g = match (kind, parts.len()) {
        ("perm", 3) => Generator::permute(idx(0)?, idx(1)?, idx(2)?),
        ("scale", 3) => Generator::rescale(idx(0)?, idx(1)?, parse_scalar(parts[2])?),
        _ => return Err(bad()),
    };
    g.map_err(|e| Failure::Usage(e.to_string()))
}

fn symmetry_command<S: Scalar>(net: &Network<S>, gens: &[String], per_axis: usize, g: &GlobalArgs) -> CliResult<Value> {
    let element = SymmetryElement(gens.iter().map(|s| parse_generator(s)).collect::<CliResult<_>>()?);
    let moved = apply_symmetry(&element, net).map_err(|e| Failure::Usage(e.to_string()))?;
    let n0 = net.arch().input_dim();
    let grid = symmetry::grid(n0, &S::from_ratio(-symmetry::GRID_RADIUS, 1), &S::from_ratio(symmetry::GRID_RADIUS, 1), per_axis);
    let invariant = symmetry::verify_unmarked_invariance(net, &element, &grid, g.tol)?;
    let back = apply_symmetry(&element.inverse(), &moved)?;
    let inverse_ok = back.flatten().iter().zip(net.flatten()).all(|(a, b)| a.approx_eq(&b, g.tol));
    let mut shared = Batch::empty(n0);
    for z in grid.points() {
        if !net.ternary_label(z)?.has_zero() && !moved.ternary_label(z)?.has_zero() {
            shared.push(z.clone())?;
        }
    }
    let opts = DimOptions { rank_tol: g.tol, ..DimOptions::default() };
    let dims = if shared.is_empty() {
        Value::Null
    } else {
        json!([batch_dim_with(net, &shared, &opts)?.value, batch_dim_with(&moved, &shared, &opts)?.value])
    };
    Ok(json!({
        "generators": gens,
        "original": vals(&net.flatten()),
        "transformed": vals(&moved.flatten()),
        "invariant_on_grid": invariant,
        "grid_points": grid.len(),
        "inverse_restores": inverse_ok,
        "shared_smooth_points": shared.len(),
        "batch_dims": dims,
    }))
}

fn arch(widths: &[usize]) -> CliResult<Architecture> {
    Architecture::new(widths.to_vec()).map_err(|e| Failure::Usage(e.to_string()))
}

fn experiment(which: &ExperimentCmd, seed: u64) -> CliResult<ExperimentReport> {
    Ok(match which {
        ExperimentCmd::OnesChain { len, trials } => experiments::ones_chain_dim(*len, *trials, seed)?,
        ExperimentCmd::Tightness { arch: a, trials } => {
            let a = arch(a)?;
            if !a.is_narrowing() {
                return usage(format!("{a} is not strictly narrowing"));
            }
            experiments::tightness_search(&a, *trials, seed)?
        }
        ExperimentCmd::UpperBound { arch: a, trials } => experiments::upper_bound_sweep(&arch(a)?, *trials, seed)?,
        ExperimentCmd::Unactivated { arch: a, trials } => {
            experiments::stably_unactivated_frequency(&arch(a)?, *trials, seed)?
        }
        ExperimentCmd::Depth1 { n1, n2 } => experiments::depth1_witness(*n1, *n2, seed)?.1,
        ExperimentCmd::Nonordinary => experiments::nonordinary_demo()?,
        ExperimentCmd::Semicontinuity { arch: a, trials, radii } => {
            experiments::semicontinuity_probe(&arch(a)?, *trials, radii, seed)?
        }
    })
}

fn demo() -> CliResult<(Output, i32)> {
    let checks = demo_suite()?;
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    for c in &checks {
        eprintln!("{} {:width$}  {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.observed);
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    eprintln!("{} of {} checks passed", checks.len() - failed, checks.len());
    let code = if failed == 0 { 0 } else { 2 };
    Ok((Output::Json(json!({ "checks": checks, "failed": failed })), code))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_generators() {
        let g: Generator<crate::scalar::Rational> = parse_generator("scale:1,0,5/2").ok().unwrap();
        assert!(matches!(g, Generator::Rescale { layer: 1, neuron: 0, .. }));
        assert!(parse_generator::<f64>("perm:1,0").is_err());
        assert!(parse_generator::<f64>("scale:1,0,-1").is_err());
    }

    #[test]
    fn csv_header_names_parameters() {
        let a = Architecture::new(vec![1, 2, 1]).unwrap();
        let names = param_names(&a);
        assert_eq!(names.len(), 7);
        assert_eq!(names[0], "A1[0,0]");
        assert_eq!(names[6], "A2[0,2]");
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["fundim", "eval"]), 1);
        assert_eq!(run(["fundim", "nope"]), 1);
        assert_eq!(run(["fundim", "eval", "--widths", "1,1", "--params", "1,x", "--x", "1"]), 1);
    }
}
