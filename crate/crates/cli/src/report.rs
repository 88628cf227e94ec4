//! JSON report types. Field order is fixed by declaration and all maps are
//! ordered, so a report is byte-identical across runs of the same config
//! (reports carry no timestamps).

use serde::Serialize;

use ucurve_core::analysis::{ConsistencyRow, ErrorQuadruple, SpaceStats, TargetSummary};
use ucurve_core::domain::FiniteDomain;
use ucurve_core::lattice::Partition;
use ucurve_core::rational::{approx, format_ratio, Rational};
use ucurve_core::search::SearchReport;

/// A rational rendered exactly plus a lossy decimal view.
#[derive(Serialize)]
pub struct Rat {
    pub exact: String,
    pub approx: f64,
}

pub fn rat(r: &Rational) -> Rat {
    Rat {
        exact: format_ratio(r),
        approx: approx(r),
    }
}

#[derive(Serialize)]
pub struct NodeCost {
    pub node: String,
    pub vc_dim: usize,
    pub estimate: Rat,
}

pub fn node_cost(node: &Partition, value: &Rational, domain: &FiniteDomain) -> NodeCost {
    NodeCost {
        node: node.encode(domain),
        vc_dim: node.block_count(),
        estimate: rat(value),
    }
}

#[derive(Serialize)]
pub struct ConfigEcho {
    pub space: String,
    pub estimator: String,
    pub mode: String,
    pub seed: u64,
    pub fallback: usize,
    pub stochastic: Option<String>,
    pub order: String,
    pub prune_worse: bool,
    pub convexity_prune: bool,
    pub cap: usize,
}

#[derive(Serialize)]
pub struct DatasetEcho {
    pub observations: usize,
    pub distinct_rows: usize,
    pub points: Vec<String>,
    /// Counts per point: [zeros, ones], domain order.
    pub counts: Vec<[u64; 2]>,
}

#[derive(Serialize)]
pub struct VisitStats {
    pub nodes_visited: usize,
    pub estimates_computed: usize,
    pub suboptimal: bool,
}

#[derive(Serialize)]
pub struct TruthSection {
    pub target_node: String,
    pub target_vc_dim: usize,
    pub target_error: Rat,
    /// `null` when every node attains the optimum.
    pub mde: Option<Rat>,
    pub type_i: Rat,
    pub type_ii: Rat,
    pub type_iii: Rat,
    pub type_iv: Rat,
}

pub fn truth_section(
    summary: &TargetSummary,
    errors: &ErrorQuadruple,
    domain: &FiniteDomain,
) -> TruthSection {
    TruthSection {
        target_node: summary.target_node.encode(domain),
        target_vc_dim: summary.target_node.block_count(),
        target_error: rat(&summary.target_error),
        mde: summary.mde.as_ref().map(rat),
        type_i: rat(&errors.type_i),
        type_ii: rat(&errors.type_ii),
        type_iii: rat(&errors.type_iii),
        type_iv: rat(&errors.type_iv),
    }
}

#[derive(Serialize)]
pub struct SelectionReport {
    pub command: String,
    pub config: ConfigEcho,
    pub dataset: DatasetEcho,
    pub selected: NodeCost,
    /// Point label -> predicted class, domain order.
    pub final_hypothesis: Vec<(String, u8)>,
    pub strong_local_minima: Vec<NodeCost>,
    pub global_minima: Vec<NodeCost>,
    pub visit_stats: VisitStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truth: Option<TruthSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub node_costs: Option<Vec<NodeCost>>,
}

pub fn selection_report(
    command: &str,
    config: ConfigEcho,
    dataset: DatasetEcho,
    report: &SearchReport,
    selected_estimate: &Rational,
    domain: &FiniteDomain,
    truth: Option<TruthSection>,
    node_costs: Option<Vec<NodeCost>>,
) -> SelectionReport {
    SelectionReport {
        command: command.into(),
        config,
        dataset,
        selected: node_cost(&report.selected, selected_estimate, domain),
        final_hypothesis: (0..domain.len())
            .map(|p| {
                (
                    domain.label(p).to_string(),
                    u8::from(report.final_hypothesis.label(p)),
                )
            })
            .collect(),
        strong_local_minima: report
            .strong_local_minima
            .iter()
            .map(|(n, v)| node_cost(n, v, domain))
            .collect(),
        global_minima: report
            .global_minima
            .iter()
            .map(|(n, v)| node_cost(n, v, domain))
            .collect(),
        visit_stats: VisitStats {
            nodes_visited: report.nodes_visited,
            estimates_computed: report.estimates_computed,
            suboptimal: report.suboptimal,
        },
        truth,
        node_costs,
    }
}

#[derive(Serialize)]
pub struct ChainViolationReport {
    pub chain: Vec<String>,
    pub minimum: String,
    pub cheaper: String,
}

#[derive(Serialize)]
pub struct CondSViolationReport {
    pub a: String,
    pub b: String,
    pub meet: String,
    pub join: String,
    pub lhs: Rat,
    pub rhs: Rat,
}

#[derive(Serialize)]
pub struct CheckReport {
    pub command: String,
    pub property: String,
    pub space: String,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u_curve_compatible: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub chain_violations: Vec<ChainViolationReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub convexity_violations: Vec<CondSViolationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<StatsReport>,
}

#[derive(Serialize)]
pub struct StatsReport {
    pub node_count: usize,
    pub vc_dim_max: usize,
    pub maximal_count: usize,
}

impl From<&SpaceStats> for StatsReport {
    fn from(s: &SpaceStats) -> Self {
        StatsReport {
            node_count: s.node_count,
            vc_dim_max: s.vc_dim_max,
            maximal_count: s.maximal_count,
        }
    }
}

#[derive(Serialize)]
pub struct SimulateRow {
    pub n: usize,
    pub frac_model_match: Rat,
    pub frac_error_match: Rat,
    pub mean_type_iii: Rat,
}

impl From<&ConsistencyRow> for SimulateRow {
    fn from(r: &ConsistencyRow) -> Self {
        SimulateRow {
            n: r.n,
            frac_model_match: rat(&r.frac_model_match),
            frac_error_match: rat(&r.frac_error_match),
            mean_type_iii: rat(&r.mean_type_iii),
        }
    }
}

#[derive(Serialize)]
pub struct SimulateReport {
    pub command: String,
    pub config: ConfigEcho,
    pub sizes: Vec<usize>,
    pub reps: usize,
    pub rows: Vec<SimulateRow>,
}
