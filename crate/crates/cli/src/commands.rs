//! The four subcommands: select, oracle, check, and simulate.

use ucurve_core::analysis::{
    check_lattice_convexity, check_ucurve, consistency_experiment, cost_table_from_sample,
    estimation_errors, space_stats, target_model, CostTable, UcurveStrength, UcurveVerdict,
};
use ucurve_core::domain::{split_holdout, FiniteDomain, JointDistribution, Sample};
use ucurve_core::lattice::LearningSpace;
use ucurve_core::rational::Rational;
use ucurve_core::search::{learn_final_hypothesis, ucurve_search, LearnMode, SearchReport};

use crate::config::{EstimatorChoice, ModeChoice, RunConfig, SpaceChoice};
use crate::dataset::Dataset;
use crate::report::{
    node_cost, rat, selection_report, truth_section, ChainViolationReport, CheckReport,
    CondSViolationReport, ConfigEcho, DatasetEcho, NodeCost, SelectionReport, SimulateReport,
    SimulateRow, StatsReport,
};
use crate::CliError;

/// Full node-cost tables are reported only below this size.
const COST_TABLE_LIMIT: usize = 10_000;

pub fn space_name(config: &RunConfig) -> &'static str {
    match config.space {
        SpaceChoice::Partition => "partition",
        SpaceChoice::Feature => "feature",
        SpaceChoice::L2 => "l2",
    }
}

pub fn config_echo(config: &RunConfig) -> ConfigEcho {
    ConfigEcho {
        space: space_name(config).into(),
        estimator: match config.estimator {
            EstimatorChoice::Holdout(0) => "holdout:half".into(),
            EstimatorChoice::Holdout(v) => format!("holdout:{v}"),
            EstimatorChoice::KFold(k) => format!("kfold:{k}"),
        },
        mode: match config.mode {
            ModeChoice::Reuse => "reuse".into(),
            ModeChoice::Independent(f) => format!("independent:{f}"),
        },
        seed: config.seed,
        fallback: config.fallback,
        stochastic: config.stochastic.map(|(r, b)| format!("{r}:{b}")),
        order: match config.order {
            ucurve_core::search::NeighborOrder::Canonical => "canonical".into(),
            ucurve_core::search::NeighborOrder::CheapestFirst => "cheapest".into(),
        },
        prune_worse: config.prune_worse,
        convexity_prune: config.convexity_prune,
        cap: config.cap,
    }
}

pub fn build_space(
    domain: &FiniteDomain,
    choice: &SpaceChoice,
) -> Result<LearningSpace, CliError> {
    match choice {
        SpaceChoice::Partition => Ok(LearningSpace::full_partition_lattice(domain)),
        SpaceChoice::Feature => LearningSpace::feature_lattice(domain)
            .map_err(|e| CliError::input(e.to_string())),
        SpaceChoice::L2 => Ok(LearningSpace::vc_restricted(domain, 2)),
    }
}

fn dataset_echo(dataset: &Dataset) -> DatasetEcho {
    DatasetEcho {
        observations: dataset.sample.len(),
        distinct_rows: dataset.domain.len(),
        points: dataset.domain.labels().to_vec(),
        counts: dataset.counts.clone(),
    }
}

pub fn enforce_cap(dataset: &Dataset, cap: usize) -> Result<(), CliError> {
    if dataset.domain.len() > cap {
        return Err(CliError::cap(format!(
            "dataset has {} distinct feature rows, above the cap of {cap}",
            dataset.domain.len()
        )));
    }
    Ok(())
}

/// Splits per the run mode: the selection sample and, for independent mode,
/// the reserved tail used to learn the final hypothesis.
fn split_by_mode(
    sample: &Sample,
    mode: &ModeChoice,
) -> Result<(Sample, Option<Sample>), CliError> {
    match mode {
        ModeChoice::Reuse => Ok((sample.clone(), None)),
        ModeChoice::Independent(frac) => {
            let n = sample.len();
            let reserve = ((n as f64 * frac).floor() as usize).clamp(1, n.saturating_sub(1));
            let (selection, independent) = split_holdout(sample, reserve)
                .map_err(|e| CliError::input(e.to_string()))?;
            Ok((selection, Some(independent)))
        }
    }
}

struct RunPieces {
    report: SearchReport,
    selected_estimate: Rational,
    space: LearningSpace,
    selection_sample: Sample,
    independent_sample: Option<Sample>,
}

fn run_search(
    dataset: &Dataset,
    config: &RunConfig,
    exhaustive: bool,
) -> Result<RunPieces, CliError> {
    enforce_cap(dataset, config.cap)?;
    let space = build_space(&dataset.domain, &config.space)?;
    let (selection_sample, independent_sample) = split_by_mode(&dataset.sample, &config.mode)?;
    let spec = config.estimator_spec(selection_sample.len());
    spec.validate(selection_sample.len())
        .map_err(|e| CliError::input(e.to_string()))?;

    let mut report = if exhaustive {
        ucurve_core::search::exhaustive_search(&space, &selection_sample, &spec)
    } else {
        ucurve_search(&space, &selection_sample, &spec, &config.search_config())
    }
    .map_err(|e| CliError::input(e.to_string()))?;

    if let Some(independent) = &independent_sample {
        report.final_hypothesis =
            learn_final_hypothesis(&report.selected, LearnMode::Independent(independent), spec.tie)
                .map_err(|e| CliError::input(e.to_string()))?;
    }
    let selected_estimate = report.global_minima[0].1.clone();
    Ok(RunPieces {
        report,
        selected_estimate,
        space,
        selection_sample,
        independent_sample,
    })
}

fn truth_for(
    pieces: &RunPieces,
    dist: &JointDistribution,
    domain: &FiniteDomain,
) -> Result<crate::report::TruthSection, CliError> {
    let summary =
        target_model(&pieces.space, dist).map_err(|e| CliError::input(e.to_string()))?;
    let eval_sample = pieces
        .independent_sample
        .as_ref()
        .unwrap_or(&pieces.selection_sample);
    let errors = estimation_errors(
        &pieces.report.selected,
        &pieces.report.final_hypothesis,
        dist,
        eval_sample,
    )
    .map_err(|e| CliError::input(e.to_string()))?;
    Ok(truth_section(&summary, &errors, domain))
}

pub struct SelectOutput {
    pub report: SelectionReport,
    pub search: SearchReport,
    pub space: LearningSpace,
}

pub fn cmd_select(
    dataset: &Dataset,
    config: &RunConfig,
    truth: Option<&JointDistribution>,
) -> Result<SelectOutput, CliError> {
    let pieces = run_search(dataset, config, false)?;
    let truth = truth
        .map(|dist| truth_for(&pieces, dist, &dataset.domain))
        .transpose()?;
    let report = selection_report(
        "select",
        config_echo(config),
        dataset_echo(dataset),
        &pieces.report,
        &pieces.selected_estimate,
        &dataset.domain,
        truth,
        None,
    );
    Ok(SelectOutput {
        report,
        search: pieces.report,
        space: pieces.space,
    })
}

pub fn cmd_oracle(
    dataset: &Dataset,
    config: &RunConfig,
    truth: Option<&JointDistribution>,
) -> Result<SelectOutput, CliError> {
    let pieces = run_search(dataset, config, true)?;
    let truth = truth
        .map(|dist| truth_for(&pieces, dist, &dataset.domain))
        .transpose()?;
    // Exhaustive runs carry the full cost table when it is small enough.
    let node_costs = {
        let spec = config.estimator_spec(pieces.selection_sample.len());
        let count = pieces.space.node_count();
        if count <= COST_TABLE_LIMIT {
            let table = cost_table_from_sample(&pieces.space, &pieces.selection_sample, &spec)
                .map_err(|e| CliError::input(e.to_string()))?;
            Some(
                table
                    .iter()
                    .map(|(n, v)| node_cost(n, v, &dataset.domain))
                    .collect::<Vec<NodeCost>>(),
            )
        } else {
            None
        }
    };
    let report = selection_report(
        "oracle",
        config_echo(config),
        dataset_echo(dataset),
        &pieces.report,
        &pieces.selected_estimate,
        &dataset.domain,
        truth,
        node_costs,
    );
    Ok(SelectOutput {
        report,
        search: pieces.report,
        space: pieces.space,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckProperty {
    UcurveWeak,
    UcurveStrong,
    Convexity,
    Stats,
}

impl CheckProperty {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "ucurve-weak" => Ok(Self::UcurveWeak),
            "ucurve-strong" => Ok(Self::UcurveStrong),
            "convexity" => Ok(Self::Convexity),
            "stats" => Ok(Self::Stats),
            other => Err(CliError::input(format!(
                "unknown property {other:?}; expected ucurve-weak, ucurve-strong, convexity, or stats"
            ))),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Self::UcurveWeak => "ucurve-weak",
            Self::UcurveStrong => "ucurve-strong",
            Self::Convexity => "convexity",
            Self::Stats => "stats",
        }
    }
}

pub fn cmd_check(
    space: &LearningSpace,
    domain: &FiniteDomain,
    costs: Option<&CostTable>,
    property: CheckProperty,
    space_name: &str,
) -> Result<CheckReport, CliError> {
    let encode = |p: &ucurve_core::lattice::Partition| p.encode(domain);
    let mut report = CheckReport {
        command: "check".into(),
        property: property.name().into(),
        space: space_name.into(),
        verdict: String::new(),
        u_curve_compatible: None,
        chain_violations: Vec::new(),
        convexity_violations: Vec::new(),
        stats: None,
    };
    match property {
        CheckProperty::Stats => {
            let stats = space_stats(space).map_err(|e| CliError::input(e.to_string()))?;
            report.verdict = "stats".into();
            report.stats = Some(StatsReport::from(&stats));
        }
        CheckProperty::UcurveWeak | CheckProperty::UcurveStrong => {
            let costs = costs.ok_or_else(|| {
                CliError::input("this property needs a cost table (data or costs.json)".into())
            })?;
            let strength = if property == CheckProperty::UcurveWeak {
                UcurveStrength::Weak
            } else {
                UcurveStrength::Strong
            };
            match check_ucurve(costs, space, strength)
                .map_err(|e| CliError::input(e.to_string()))?
            {
                UcurveVerdict::Holds => report.verdict = "holds".into(),
                UcurveVerdict::Violations(violations) => {
                    report.verdict = "violated".into();
                    report.chain_violations = violations
                        .iter()
                        .map(|v| ChainViolationReport {
                            chain: v.chain.iter().map(encode).collect(),
                            minimum: encode(&v.minimum),
                            cheaper: encode(&v.cheaper),
                        })
                        .collect();
                }
            }
        }
        CheckProperty::Convexity => {
            let costs = costs.ok_or_else(|| {
                CliError::input("this property needs a cost table (data or costs.json)".into())
            })?;
            let result = check_lattice_convexity(costs, space)
                .map_err(|e| CliError::input(e.to_string()))?;
            report.verdict = if result.holds() { "holds" } else { "violated" }.into();
            report.u_curve_compatible = Some(result.u_curve_compatible);
            report.convexity_violations = result
                .violations
                .iter()
                .map(|v| CondSViolationReport {
                    a: encode(&v.a),
                    b: encode(&v.b),
                    meet: encode(&v.meet),
                    join: encode(&v.join),
                    lhs: rat(&v.lhs),
                    rhs: rat(&v.rhs),
                })
                .collect();
        }
    }
    Ok(report)
}

/// Builds the per-node cost table for check runs driven by a dataset.
pub fn costs_from_dataset(
    dataset: &Dataset,
    space: &LearningSpace,
    config: &RunConfig,
) -> Result<CostTable, CliError> {
    enforce_cap(dataset, config.cap)?;
    let spec = config.estimator_spec(dataset.sample.len());
    cost_table_from_sample(space, &dataset.sample, &spec)
        .map_err(|e| CliError::input(e.to_string()))
}

/// Checks an injected cost table for totality before use.
pub fn ensure_total(
    costs: &CostTable,
    space: &LearningSpace,
    domain: &FiniteDomain,
) -> Result<(), CliError> {
    for node in space.enumerate() {
        if !costs.contains_key(&node) {
            return Err(CliError::input(format!(
                "costs table is missing node {:?}",
                node.encode(domain)
            )));
        }
    }
    Ok(())
}

pub struct SimulateOutput {
    pub report: SimulateReport,
    /// One representative search per size for DOT export.
    pub traces: Vec<(usize, SearchReport, LearningSpace)>,
}

pub fn cmd_simulate(
    domain: &FiniteDomain,
    dist: &JointDistribution,
    config: &RunConfig,
    sizes: &[usize],
    reps: usize,
    want_traces: bool,
) -> Result<SimulateOutput, CliError> {
    if domain.len() > config.cap {
        return Err(CliError::cap(format!(
            "distribution covers {} points, above the cap of {}",
            domain.len(),
            config.cap
        )));
    }
    let space = build_space(domain, &config.space)?;
    let rows = consistency_experiment(
        dist,
        &space,
        sizes,
        reps,
        |n| config.estimator_spec_scaled(n),
        config.seed,
    )
    .map_err(|e| CliError::input(e.to_string()))?;
    let mut traces = Vec::new();
    if want_traces && reps > 0 {
        for &n in sizes {
            let sample = ucurve_core::domain::sample_from(dist, n, config.seed);
            let spec = config.estimator_spec_scaled(n);
            if spec.validate(sample.len()).is_ok() {
                let run = ucurve_search(&space, &sample, &spec, &config.search_config())
                    .map_err(|e| CliError::input(e.to_string()))?;
                traces.push((n, run, build_space(domain, &config.space)?));
            }
        }
    }
    let report = SimulateReport {
        command: "simulate".into(),
        config: config_echo(config),
        sizes: sizes.to_vec(),
        reps,
        rows: rows.iter().map(SimulateRow::from).collect(),
    };
    Ok(SimulateOutput { report, traces })
}
