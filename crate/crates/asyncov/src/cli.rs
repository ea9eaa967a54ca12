use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use asyncov_core::lan::convergence_table;
use asyncov_core::simulation::estimate_all;
use asyncov_core::{run_experiment, EstimatorKind, SimConfig, TuningPolicy};
use clap::{Args, Parser, Subcommand};

use crate::error::{AppError, AppResult};
use crate::ingest::{ingest_ticks, HeaderMode, IngestOptions};
use crate::parallel::run_experiment_parallel;
use crate::report::{write_estimates, write_lan_table, write_replications, write_summary, Format};

#[derive(Debug, Parser)]
#[command(name = "asyncov", version, about = "Integrated covariance from asynchronous noisy tick data")]
#[command(args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate the integrated covariance of two tick files.
    Estimate(EstimateArgs),
    /// Monte Carlo experiment on simulated data.
    Simulate(SimulateArgs),
    /// Fisher information convergence table.
    Lan(LanArgs),
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[arg(long)]
    pub x: PathBuf,
    #[arg(long)]
    pub y: PathBuf,
    /// Comma-separated list of hy, sub, multi.
    #[arg(long, default_value = "hy,sub,multi")]
    pub estimators: String,
    /// oracle, plugin, K=<int>, M=<int> or K=<int>,M=<int>.
    #[arg(long, default_value = "plugin")]
    pub tuning: String,
    /// Noise variance of x for oracle tuning.
    #[arg(long)]
    pub eta2_x: Option<f64>,
    /// Noise variance of y for oracle tuning.
    #[arg(long)]
    pub eta2_y: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    pub format: String,
    /// Keep the last of several rows with the same timestamp.
    #[arg(long)]
    pub dedup: bool,
    #[arg(long, default_value_t = ',')]
    pub delimiter: char,
    /// auto, yes or no.
    #[arg(long, default_value = "auto")]
    pub header: String,
    #[arg(long, default_value_t = 0)]
    pub time_col: usize,
    #[arg(long, default_value_t = 1)]
    pub value_col: usize,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub theta_x: Option<f64>,
    #[arg(long)]
    pub theta_y: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub sigma_x: Option<f64>,
    #[arg(long)]
    pub sigma_y: Option<f64>,
    #[arg(long)]
    pub eta2_x: Option<f64>,
    #[arg(long)]
    pub eta2_y: Option<f64>,
    #[arg(long)]
    pub horizon: Option<f64>,
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// 30000 expected ticks per asset and 1000 replications.
    #[arg(long)]
    pub paper_scale: bool,
    #[arg(long, default_value = "hy,sub,multi")]
    pub estimators: String,
    #[arg(long, default_value = "oracle")]
    pub tuning: String,
    /// Per-replication CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the summary here.
    #[arg(long)]
    pub summary_out: Option<PathBuf>,
    /// Format of the summary.
    #[arg(long, default_value = "csv")]
    pub format: String,
    /// Run replications on one thread.
    #[arg(long)]
    pub serial: bool,
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct LanArgs {
    #[arg(long)]
    pub rho: f64,
    #[arg(long)]
    pub eta_x: f64,
    #[arg(long)]
    pub eta_y: f64,
    #[arg(long, default_value_t = 1.0)]
    pub h: f64,
    /// Comma-separated sample sizes.
    #[arg(long, default_value = "1000,10000,100000")]
    pub n_list: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    pub format: String,
}

pub fn parse_estimators(list: &str) -> AppResult<Vec<EstimatorKind>> {
    let kinds: Vec<EstimatorKind> = list
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.parse::<EstimatorKind>().map_err(|_| AppError::Usage(format!("unknown estimator {:?}", s.trim()))))
        .collect::<AppResult<_>>()?;
    if kinds.is_empty() {
        return Err(AppError::Usage("no estimator selected".into()));
    }
    Ok(kinds)
}

pub fn parse_tuning(arg: &str) -> AppResult<TuningPolicy> {
    match arg.trim().to_ascii_lowercase().as_str() {
        "oracle" => return Ok(TuningPolicy::Oracle),
        "plugin" | "plug-in" => return Ok(TuningPolicy::Plugin),
        _ => {}
    }
    let (mut k, mut m) = (None, None);
    for part in arg.split(',') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| AppError::Usage(format!("invalid tuning {arg:?}")))?;
        let value: usize = value
            .trim()
            .parse()
            .map_err(|_| AppError::Usage(format!("invalid tuning value {:?}", value.trim())))?;
        match key.trim() {
            "K" | "k" => k = Some(value),
            "M" | "m" => m = Some(value),
            other => return Err(AppError::Usage(format!("unknown tuning key {other:?}"))),
        }
    }
    Ok(TuningPolicy::Manual { k, m })
}

pub fn parse_n_list(list: &str) -> AppResult<Vec<usize>> {
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse().map_err(|_| AppError::Usage(format!("invalid sample size {:?}", s.trim()))))
        .collect()
}

fn parse_header(s: &str) -> AppResult<HeaderMode> {
    match s {
        "auto" => Ok(HeaderMode::Auto),
        "yes" | "true" => Ok(HeaderMode::Present),
        "no" | "false" => Ok(HeaderMode::Absent),
        other => Err(AppError::Usage(format!("invalid header mode {other:?} (auto, yes, no)"))),
    }
}

fn open_output(path: Option<&PathBuf>) -> AppResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| AppError::io(p, e))?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

pub fn run(cli: Cli) -> AppResult<()> {
    match cli.command {
        Command::Estimate(args) => cmd_estimate(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Lan(args) => cmd_lan(args),
    }
}

pub fn cmd_estimate(args: EstimateArgs) -> AppResult<()> {
    let format: Format = args.format.parse()?;
    let kinds = parse_estimators(&args.estimators)?;
    let policy = parse_tuning(&args.tuning)?;
    if !args.delimiter.is_ascii() {
        return Err(AppError::Usage("delimiter must be a single ASCII character".into()));
    }
    let opts = IngestOptions {
        delimiter: args.delimiter as u8,
        header: parse_header(&args.header)?,
        time_col: args.time_col,
        value_col: args.value_col,
        dedup: args.dedup,
    };
    let x = ingest_ticks(&args.x, &opts)?;
    let y = ingest_ticks(&args.y, &opts)?;
    let true_noise = match (args.eta2_x, args.eta2_y) {
        (Some(a), Some(b)) => Some((a, b)),
        (None, None) => None,
        _ => return Err(AppError::Usage("--eta2-x and --eta2-y go together".into())),
    };
    if policy == TuningPolicy::Oracle && true_noise.is_none() {
        return Err(AppError::Usage("oracle tuning needs --eta2-x and --eta2-y".into()));
    }
    let reports = estimate_all(&x, &y, &kinds, policy, true_noise)?;
    write_estimates(open_output(args.out.as_ref())?, &reports, format)
}

pub fn sim_config(args: &SimulateArgs) -> SimConfig {
    let base = if args.paper_scale { SimConfig::paper_scale() } else { SimConfig::desk_scale() };
    SimConfig {
        horizon: args.horizon.unwrap_or(base.horizon),
        theta_x: args.theta_x.unwrap_or(base.theta_x),
        theta_y: args.theta_y.unwrap_or(base.theta_y),
        rho: args.rho.unwrap_or(base.rho),
        sigma_x: args.sigma_x.unwrap_or(base.sigma_x),
        sigma_y: args.sigma_y.unwrap_or(base.sigma_y),
        eta_x2: args.eta2_x.unwrap_or(base.eta_x2),
        eta_y2: args.eta2_y.unwrap_or(base.eta_y2),
        seed: args.seed,
        replications: args.reps.unwrap_or(base.replications),
    }
}

pub fn cmd_simulate(args: SimulateArgs) -> AppResult<()> {
    let format: Format = args.format.parse()?;
    let kinds = parse_estimators(&args.estimators)?;
    let policy = parse_tuning(&args.tuning)?;
    let cfg = sim_config(&args);
    let result = if args.serial {
        run_experiment(&cfg, &kinds, policy)?
    } else if let Some(threads) = args.threads {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| AppError::Usage(format!("thread pool: {e}")))?;
        pool.install(|| run_experiment_parallel(&cfg, &kinds, policy))?
    } else {
        run_experiment_parallel(&cfg, &kinds, policy)?
    };
    if let Some(path) = &args.out {
        write_replications(open_output(Some(path))?, &result.records, Format::Csv)?;
    }
    if let Some(path) = &args.summary_out {
        write_summary(open_output(Some(path))?, &result.summaries, format)?;
    }
    write_summary(open_output(None)?, &result.summaries, format)
}

pub fn cmd_lan(args: LanArgs) -> AppResult<()> {
    let format: Format = args.format.parse()?;
    let n_list = parse_n_list(&args.n_list)?;
    let rows = convergence_table(args.rho, args.eta_x, args.eta_y, args.h, &n_list)?;
    write_lan_table(open_output(args.out.as_ref())?, &rows, format)
}
