//! `ucurve` — model selection over partition-lattice learning spaces.
//!
//! Subcommands: `select` (U-curve search), `oracle` (exhaustive search),
//! `check` (U-curve / convexity / stats checks on computed or injected
//! costs), and `simulate` (Monte Carlo consistency experiments).
//!
//! Exit codes: 0 success, 2 malformed input, 3 domain cap exceeded.

mod commands;
mod config;
mod dataset;
mod dot;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{build_space, cmd_check, cmd_oracle, cmd_select, cmd_simulate, CheckProperty};
use config::RunConfig;
use ucurve_core::domain::FiniteDomain;

pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    /// Malformed input of any kind: exit code 2.
    pub fn input(message: String) -> Self {
        Self { code: 2, message }
    }

    /// Domain cap exceeded: exit code 3.
    pub fn cap(message: String) -> Self {
        Self { code: 3, message }
    }
}

#[derive(Parser)]
#[command(name = "ucurve", version, about = "Model selection on learning spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonFlags {
    /// Learning space: partition | feature | l2 (default: partition)
    #[arg(long)]
    space: Option<String>,
    /// Model-error estimator: holdout:V | kfold:K (default: a half/half
    /// holdout; simulate reads V as a percentage of each sample size)
    #[arg(long)]
    estimator: Option<String>,
    /// Final-hypothesis learning: reuse | independent:FRAC (default: reuse)
    #[arg(long)]
    mode: Option<String>,
    /// Seed for all randomized pieces (default: 0)
    #[arg(long)]
    seed: Option<u64>,
    /// Exhaustive fallback once fewer candidates remain (default: 0 = off)
    #[arg(long)]
    fallback: Option<usize>,
    /// Stochastic search: RESTARTS:BUDGET
    #[arg(long)]
    stochastic: Option<String>,
    /// Neighbor visit order: canonical | cheapest (default: canonical)
    #[arg(long)]
    order: Option<String>,
    /// Drop visited neighbors costing more than the current node
    #[arg(long)]
    prune_worse: bool,
    /// Assert the lattice-convexity condition and skip implied joins
    #[arg(long)]
    convexity_prune: bool,
    /// Maximum distinct feature rows accepted (default: 9)
    #[arg(long)]
    cap: Option<usize>,
    /// key = value configuration file (flags override it)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the JSON report here as well as stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Learn a model with the U-curve search, then a hypothesis on it
    Select {
        /// Dataset CSV: feature columns of 0/1 plus a final label column
        #[arg(long)]
        data: PathBuf,
        /// Ground-truth dist.json enabling the report's truth section
        #[arg(long)]
        truth: Option<PathBuf>,
        /// Write a DOT rendering of the visited subgraph
        #[arg(long)]
        dot: Option<PathBuf>,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Score every node of the space exhaustively
    Oracle {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        truth: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Check a property of a cost landscape
    Check {
        /// Compute node costs from this dataset...
        #[arg(long, conflicts_with = "costs")]
        data: Option<PathBuf>,
        /// ...or inject them from a costs.json fixture
        #[arg(long)]
        costs: Option<PathBuf>,
        /// ucurve-weak | ucurve-strong | convexity | stats
        #[arg(long)]
        property: String,
        /// Cube width for costs.json runs (domain = {0,1}^WIDTH)
        #[arg(long)]
        width: Option<usize>,
        /// Explicit comma-separated point labels for costs.json runs
        #[arg(long)]
        points: Option<String>,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Monte Carlo consistency experiment against a known distribution
    Simulate {
        /// dist.json: {"points": [...], "prob": {"point,label": "p/q"}}
        #[arg(long)]
        dist: PathBuf,
        /// Sample sizes, comma separated
        #[arg(long, default_value = "20,200,2000")]
        sizes: String,
        #[arg(long, default_value_t = 200)]
        reps: usize,
        /// Write one DOT per size for a representative run
        #[arg(long)]
        dot: Option<PathBuf>,
        #[command(flatten)]
        common: CommonFlags,
    },
}

fn read_file(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn build_config(common: &CommonFlags) -> Result<RunConfig, CliError> {
    let mut config = RunConfig::default();
    if let Some(path) = &common.config {
        let text = read_file(path)?;
        config::apply_config_file(&mut config, &text, &path.display().to_string())?;
    }
    if let Some(s) = &common.space {
        config.space = config::parse_space(s)?;
    }
    if let Some(s) = &common.estimator {
        config.estimator = config::parse_estimator(s)?;
    }
    if let Some(s) = &common.mode {
        config.mode = config::parse_mode(s)?;
    }
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    if let Some(fallback) = common.fallback {
        config.fallback = fallback;
    }
    if let Some(s) = &common.stochastic {
        config.stochastic = Some(config::parse_stochastic(s)?);
    }
    if let Some(s) = &common.order {
        config.order = config::parse_order(s)?;
    }
    if common.prune_worse {
        config.prune_worse = true;
    }
    if common.convexity_prune {
        config.convexity_prune = true;
    }
    if let Some(cap) = common.cap {
        config.cap = cap;
    }
    Ok(config)
}

fn emit(json: &impl serde::Serialize, out: &Option<PathBuf>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(json)
        .map_err(|e| CliError::input(format!("report serialization failed: {e}")))?;
    println!("{text}");
    if let Some(path) = out {
        std::fs::write(path, text.as_bytes())
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn write_dot(path: &PathBuf, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content.as_bytes())
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn load_truth(
    path: &Option<PathBuf>,
    domain: &FiniteDomain,
) -> Result<Option<ucurve_core::domain::JointDistribution>, CliError> {
    let Some(path) = path else { return Ok(None) };
    let text = read_file(path)?;
    let (truth_domain, dist) = dataset::parse_dist(&text, &path.display().to_string())?;
    if truth_domain.labels() != domain.labels() {
        return Err(CliError::input(format!(
            "{}: truth points {:?} do not match the dataset domain {:?}",
            path.display(),
            truth_domain.labels(),
            domain.labels()
        )));
    }
    Ok(Some(dist))
}

fn run() -> Result<(), CliError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Select {
            data,
            truth,
            dot,
            common,
        } => {
            let config = build_config(&common)?;
            let ds = dataset::parse_csv(&read_file(&data)?, &data.display().to_string())?;
            let dist = load_truth(&truth, &ds.domain)?;
            let output = cmd_select(&ds, &config, dist.as_ref())?;
            if let Some(path) = &dot {
                write_dot(path, &dot::trace_to_dot(&output.search, &output.space, &ds.domain))?;
            }
            emit(&output.report, &common.out)
        }
        Command::Oracle {
            data,
            truth,
            dot,
            common,
        } => {
            let config = build_config(&common)?;
            let ds = dataset::parse_csv(&read_file(&data)?, &data.display().to_string())?;
            let dist = load_truth(&truth, &ds.domain)?;
            let output = cmd_oracle(&ds, &config, dist.as_ref())?;
            if let Some(path) = &dot {
                write_dot(path, &dot::trace_to_dot(&output.search, &output.space, &ds.domain))?;
            }
            emit(&output.report, &common.out)
        }
        Command::Check {
            data,
            costs,
            property,
            width,
            points,
            common,
        } => {
            let config = build_config(&common)?;
            let property = CheckProperty::parse(&property)?;
            let report = match (&data, &costs) {
                (Some(data), None) => {
                    let ds =
                        dataset::parse_csv(&read_file(data)?, &data.display().to_string())?;
                    commands::enforce_cap(&ds, config.cap)?;
                    let space = build_space(&ds.domain, &config.space)?;
                    let table = if property == CheckProperty::Stats {
                        None
                    } else {
                        Some(commands::costs_from_dataset(&ds, &space, &config)?)
                    };
                    cmd_check(&space, &ds.domain, table.as_ref(), property, commands::space_name(&config))?
                }
                (None, Some(costs_path)) => {
                    let domain = match (&points, width) {
                        (Some(list), _) => {
                            let labels: Vec<String> =
                                list.split(',').map(|s| s.trim().to_string()).collect();
                            FiniteDomain::new(labels)
                                .map_err(|e| CliError::input(e.to_string()))?
                        }
                        (None, Some(d)) => FiniteDomain::boolean_cube(d),
                        (None, None) => {
                            return Err(CliError::input(
                                "costs.json runs need --width D or --points a,b,c".into(),
                            ))
                        }
                    };
                    let space = build_space(&domain, &config.space)?;
                    let table = dataset::parse_costs(
                        &read_file(costs_path)?,
                        &costs_path.display().to_string(),
                        &domain,
                    )?;
                    if property != CheckProperty::Stats {
                        commands::ensure_total(&table, &space, &domain)?;
                    }
                    cmd_check(&space, &domain, Some(&table), property, commands::space_name(&config))?
                }
                _ => {
                    return Err(CliError::input(
                        "check needs exactly one of --data or --costs".into(),
                    ))
                }
            };
            emit(&report, &common.out)
        }
        Command::Simulate {
            dist,
            sizes,
            reps,
            dot,
            common,
        } => {
            let config = build_config(&common)?;
            let (domain, dist) =
                dataset::parse_dist(&read_file(&dist)?, &dist.display().to_string())?;
            let sizes: Vec<usize> = sizes
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|_| CliError::input(format!("bad size {s:?}")))
                })
                .collect::<Result<_, _>>()?;
            if sizes.is_empty() {
                return Err(CliError::input("need at least one sample size".into()));
            }
            let output =
                cmd_simulate(&domain, &dist, &config, &sizes, reps, dot.is_some())?;
            if let Some(base) = &dot {
                for (n, run, space) in &output.traces {
                    let stem = base.with_extension("");
                    let path = PathBuf::from(format!("{}_n{}.dot", stem.display(), n));
                    write_dot(&path, &dot::trace_to_dot(run, space, &domain))?;
                }
            }
            emit(&output.report, &common.out)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
