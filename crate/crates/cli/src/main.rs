//! `qwalkvec` command-line runner.
//!
//! Exit codes: 0 on success, 1 for data errors, 2 for usage errors.

mod config;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use qwalkvec::baselines::SkipGramConfig;
use qwalkvec::embed::read_embedding;
use qwalkvec::eval::{
    evaluate_protocol, grid_search, spread_variance, EmbeddingMethod, EvalReport, SplitSpec, WalkSettings,
    REPORT_HEADER,
};
use qwalkvec::{load_edge_list, load_labels, FeatureKind, Graph, LabelMap};

use crate::config::{expand_config, Manifest};

#[derive(Parser, Debug)]
#[command(name = "qwalkvec", version, about = "Quantum walk node embeddings and classification experiments")]
struct Cli {
    /// key=value file whose entries act as flags; command-line flags win.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Worker threads (defaults to all cores). Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute node features and write them as CSV.
    #[command(args_override_self = true)]
    Embed(EmbedArgs),
    /// Score an embedding with repeated train/test splits.
    #[command(args_override_self = true)]
    Evaluate(EvaluateArgs),
    /// Evaluate every parameter pair of a grid.
    #[command(args_override_self = true)]
    Gridsearch(GridArgs),
    /// Positional variance of quantum and classical walks on a cycle.
    #[command(args_override_self = true)]
    Spread(SpreadArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Method {
    Qwalkvec,
    Deepwalk,
    Node2vec,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Self::Qwalkvec => "qwalkvec",
            Self::Deepwalk => "deepwalk",
            Self::Node2vec => "node2vec",
        }
    }
}

#[derive(Args, Debug)]
struct MethodArgs {
    #[arg(long, value_enum, default_value = "qwalkvec")]
    method: Method,
    /// Walk steps (quantum) or walk length (baselines); 400 / 80 by default.
    #[arg(long)]
    t: Option<usize>,
    /// Walks started per node (baselines).
    #[arg(long, default_value_t = 10)]
    gamma: usize,
    /// Skip-gram context window.
    #[arg(long, default_value_t = 10)]
    window: usize,
    /// Skip-gram embedding dimension.
    #[arg(long, default_value_t = 128)]
    dim: usize,
    #[arg(long, default_value_t = 5)]
    negatives: usize,
    #[arg(long, default_value_t = 5)]
    epochs: usize,
}

impl MethodArgs {
    fn steps(&self) -> usize {
        self.t.unwrap_or(match self.method {
            Method::Qwalkvec => 400,
            Method::Deepwalk | Method::Node2vec => 80,
        })
    }

    fn build(&self, seed: u64) -> EmbeddingMethod {
        let settings = WalkSettings {
            walks_per_node: self.gamma,
            walk_length: self.steps(),
            skipgram: SkipGramConfig {
                dim: self.dim,
                window: self.window,
                negatives: self.negatives,
                epochs: self.epochs,
                seed,
                ..SkipGramConfig::default()
            },
        };
        match self.method {
            Method::Qwalkvec => EmbeddingMethod::QWalkVec { steps: self.steps() },
            Method::Deepwalk => EmbeddingMethod::DeepWalk(settings),
            Method::Node2vec => EmbeddingMethod::Node2vec(settings),
        }
    }

    fn record(&self, m: &mut Manifest) {
        m.set("method", self.method.name()).set("t", self.steps());
        if self.method != Method::Qwalkvec {
            m.set("gamma", self.gamma)
                .set("window", self.window)
                .set("dim", self.dim)
                .set("negatives", self.negatives)
                .set("epochs", self.epochs);
        }
    }
}

#[derive(Args, Debug)]
struct EmbedArgs {
    #[arg(long)]
    edges: PathBuf,
    #[command(flatten)]
    method: MethodArgs,
    /// Return weight of the quantum walk.
    #[arg(long, default_value_t = 1.0)]
    wp: f64,
    /// In-out weight of the quantum walk.
    #[arg(long, default_value_t = 1.0)]
    wq: f64,
    /// node2vec return parameter.
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    /// node2vec in-out parameter.
    #[arg(long, default_value_t = 1.0)]
    q: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct EvaluateArgs {
    #[arg(long)]
    embedding: PathBuf,
    #[arg(long)]
    labels: PathBuf,
    /// Comma-separated training ratios, each in (0, 1).
    #[arg(long, value_delimiter = ',', value_parser = parse_ratio, default_value = "0.5,0.6,0.7,0.8")]
    tr: Vec<f64>,
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    repeats: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Dataset name for the report (defaults to the label file stem).
    #[arg(long)]
    dataset: Option<String>,
    /// Method name for the report (defaults to the embedding header).
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct GridArgs {
    #[arg(long)]
    edges: PathBuf,
    #[arg(long)]
    labels: PathBuf,
    #[command(flatten)]
    method: MethodArgs,
    /// Values tried for each of the two walk parameters.
    #[arg(long, value_delimiter = ',', value_parser = parse_positive, default_value = "0.25,0.5,1,2,4")]
    grid: Vec<f64>,
    #[arg(long, value_parser = parse_ratio, default_value_t = 0.5)]
    tr: f64,
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    repeats: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    dataset: Option<String>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct SpreadArgs {
    /// Odd cycle length, at least 2 * tmax + 1.
    #[arg(long, default_value_t = 201)]
    cycle: usize,
    #[arg(long, default_value_t = 80)]
    tmax: usize,
    #[arg(long)]
    out: PathBuf,
}

fn parse_ratio(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!("training ratio must lie in (0, 1), got {v}"))
    }
}

fn parse_positive(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("grid values must be positive, got {v}"))
    }
}

fn join(values: &[f64]) -> String {
    values.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

/// Bad flag values detected after parsing; reported with exit code 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(message: impl Into<String>) -> anyhow::Error {
    Usage(message.into()).into()
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Refuses to overwrite an input file.
fn check_out(out: &Path, inputs: &[&Path]) -> Result<()> {
    for input in inputs {
        if out == *input {
            return Err(usage(format!("--out {} would overwrite an input", out.display())));
        }
    }
    Ok(())
}

fn write_output(out: &Path, text: &str, manifest: &Manifest) -> Result<()> {
    fs::write(out, text).with_context(|| format!("writing {}", out.display()))?;
    manifest.write_beside(out)?;
    log::info!("wrote {}", out.display());
    Ok(())
}

fn load_graph(path: &Path) -> Result<Graph> {
    load_edge_list(&read(path)?).with_context(|| format!("loading {}", path.display()))
}

fn dataset_name(explicit: &Option<String>, labels: &Path) -> String {
    explicit.clone().unwrap_or_else(|| {
        labels
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "dataset".into())
    })
}

fn cmd_embed(args: &EmbedArgs) -> Result<()> {
    check_out(&args.out, &[&args.edges])?;
    let graph = load_graph(&args.edges)?;
    let method = args.method.build(args.seed);
    let (a, b) = match args.method.method {
        Method::Qwalkvec => (args.wp, args.wq),
        Method::Node2vec => (args.p, args.q),
        Method::Deepwalk => (1.0, 1.0),
    };
    let features = method.embed(&graph, a, b)?;

    let mut manifest = Manifest::new("embed");
    manifest.set("edges", args.edges.display());
    args.method.record(&mut manifest);
    match args.method.method {
        Method::Qwalkvec => {
            manifest.set("wp", args.wp).set("wq", args.wq);
        }
        Method::Node2vec => {
            manifest.set("p", args.p).set("q", args.q);
        }
        Method::Deepwalk => {}
    }
    manifest.set("seed", args.seed).set("out", args.out.display());
    write_output(&args.out, &features.to_csv_string(), &manifest)
}

fn cmd_evaluate(args: &EvaluateArgs) -> Result<()> {
    check_out(&args.out, &[&args.embedding, &args.labels])?;
    let features = read_embedding(&read(&args.embedding)?)
        .with_context(|| format!("loading {}", args.embedding.display()))?;
    let labels = LabelMap::parse_for_nodes(&read(&args.labels)?, features.node_ids())
        .with_context(|| format!("aligning {} with the embedding", args.labels.display()))?;

    let (default_method, params) = match (features.kind(), features.params()) {
        (FeatureKind::Baseline, _) => ("baseline", "none".to_owned()),
        (_, Some(p)) => ("qwalkvec", format!("wp={};wq={};t={}", p.wp(), p.wq(), p.steps())),
        (_, None) => ("qwalkvec", "none".to_owned()),
    };
    let mut rows = Vec::with_capacity(args.tr.len());
    for &ratio in &args.tr {
        let spec = SplitSpec::new(ratio, args.repeats as usize, args.seed)?;
        let scores = evaluate_protocol(&features, &labels, &spec)?;
        log::info!("T_R={ratio}: micro {:.4} macro {:.4}", scores.micro_mean(), scores.macro_mean());
        rows.push(scores);
    }
    let report = EvalReport {
        method: args.method.clone().unwrap_or_else(|| default_method.into()),
        dataset: dataset_name(&args.dataset, &args.labels),
        params,
        seed: args.seed,
        rows,
    };

    let mut manifest = Manifest::new("evaluate");
    manifest
        .set("embedding", args.embedding.display())
        .set("labels", args.labels.display())
        .set("tr", join(&args.tr))
        .set("repeats", args.repeats)
        .set("seed", args.seed)
        .set("dataset", &report.dataset)
        .set("method", &report.method)
        .set("out", args.out.display());
    write_output(&args.out, &report.to_csv(), &manifest)
}

fn cmd_gridsearch(args: &GridArgs) -> Result<()> {
    check_out(&args.out, &[&args.edges, &args.labels])?;
    let graph = load_graph(&args.edges)?;
    let labels = load_labels(&read(&args.labels)?, &graph)
        .with_context(|| format!("loading {}", args.labels.display()))?;
    let method = args.method.build(args.seed);
    let spec = SplitSpec::new(args.tr, args.repeats as usize, args.seed)?;
    let result = grid_search(&graph, &labels, &method, &args.grid, &spec)?;

    let dataset = dataset_name(&args.dataset, &args.labels);
    let mut text = String::new();
    let _ = writeln!(text, "{REPORT_HEADER}");
    for row in &result.rows {
        let report = EvalReport {
            method: method.name().into(),
            dataset: dataset.clone(),
            params: row.params.clone(),
            seed: args.seed,
            rows: Vec::new(),
        };
        let _ = writeln!(text, "{}", report.csv_row(&row.scores));
    }
    let best = result.best_row();
    let _ = writeln!(
        text,
        "# best params={} micro_mean={} macro_mean={}",
        best.params,
        best.scores.micro_mean(),
        best.scores.macro_mean()
    );

    let mut manifest = Manifest::new("gridsearch");
    manifest
        .set("edges", args.edges.display())
        .set("labels", args.labels.display());
    args.method.record(&mut manifest);
    manifest
        .set("grid", join(&args.grid))
        .set("tr", args.tr)
        .set("repeats", args.repeats)
        .set("seed", args.seed)
        .set("dataset", &dataset)
        .set("out", args.out.display());
    write_output(&args.out, &text, &manifest)
}

fn cmd_spread(args: &SpreadArgs) -> Result<()> {
    if args.tmax < 2 {
        return Err(usage("--tmax must be at least 2"));
    }
    if args.cycle.is_multiple_of(2) || args.cycle < 2 * args.tmax + 1 {
        return Err(usage(format!(
            "--cycle must be odd and at least 2 * tmax + 1 = {}, got {}",
            2 * args.tmax + 1,
            args.cycle
        )));
    }
    let curves = spread_variance(args.cycle, args.tmax)?;
    let mut text = String::from("t,sigma2_quantum,sigma2_classical\n");
    for (t, (q, c)) in curves.quantum.iter().zip(&curves.classical).enumerate() {
        let _ = writeln!(text, "{t},{q},{c}");
    }
    let _ = writeln!(
        text,
        "# fit t={}..{} quantum_exponent={} classical_exponent={}",
        curves.fit_range.0, curves.fit_range.1, curves.quantum_exponent, curves.classical_exponent
    );

    let mut manifest = Manifest::new("spread");
    manifest
        .set("cycle", args.cycle)
        .set("tmax", args.tmax)
        .set("out", args.out.display());
    write_output(&args.out, &text, &manifest)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let usage_error = err.chain().any(|cause| {
        cause.is::<Usage>() || matches!(cause.downcast_ref::<qwalkvec::Error>(), Some(qwalkvec::Error::InvalidParameter(_)))
    });
    if usage_error {
        2
    } else {
        1
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("configuring the thread pool")?;
    }
    match &cli.command {
        Command::Embed(args) => cmd_embed(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Gridsearch(args) => cmd_gridsearch(args),
        Command::Spread(args) => cmd_spread(args),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();

    let args = match expand_config(std::env::args_os().collect()) {
        Ok(args) => args,
        Err(err) => {
            let _ = Cli::command().print_help();
            eprintln!("\nerror: {err:#}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
