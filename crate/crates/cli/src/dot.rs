//! DOT export of the visited Hasse subgraph.

use std::collections::BTreeSet;

use ucurve_core::domain::FiniteDomain;
use ucurve_core::lattice::{Direction, LearningSpace, Partition};
use ucurve_core::rational::approx;
use ucurve_core::search::{SearchReport, TraceEvent};

/// Renders the nodes the walk visited, with Hasse edges among them. Strong
/// local minima are double-circled, the selected node filled.
pub fn trace_to_dot(
    report: &SearchReport,
    space: &LearningSpace,
    domain: &FiniteDomain,
) -> String {
    let mut visited: BTreeSet<Partition> = BTreeSet::new();
    for event in &report.trace {
        if let TraceEvent::Visit { node, .. } = event {
            visited.insert(node.clone());
        }
    }
    for (node, _) in report.strong_local_minima.iter().chain(&report.global_minima) {
        visited.insert(node.clone());
    }
    visited.insert(report.selected.clone());

    let minima: BTreeSet<&Partition> = report
        .strong_local_minima
        .iter()
        .map(|(n, _)| n)
        .collect();
    let cost_of = |node: &Partition| {
        report
            .trace
            .iter()
            .find_map(|e| match e {
                TraceEvent::Visit { node: n, cost } if n == node => Some(cost.clone()),
                _ => None,
            })
            .or_else(|| {
                report
                    .strong_local_minima
                    .iter()
                    .chain(&report.global_minima)
                    .find(|(n, _)| n == node)
                    .map(|(_, c)| c.clone())
            })
    };

    let mut out = String::from("graph hasse {\n  rankdir=BT;\n  node [shape=ellipse];\n");
    for node in &visited {
        let label = match cost_of(node) {
            Some(c) => format!("{}\\n{:.4}", node.encode(domain), approx(&c)),
            None => node.encode(domain),
        };
        let mut attrs = format!("label=\"{label}\"");
        if minima.contains(node) {
            attrs.push_str(", peripheries=2");
        }
        if *node == report.selected {
            attrs.push_str(", style=filled, fillcolor=lightgray");
        }
        out.push_str(&format!("  \"{}\" [{attrs}];\n", node.encode(domain)));
    }
    for node in &visited {
        for up in space.neighbors(node, Direction::Up).unwrap_or_default() {
            if visited.contains(&up) {
                out.push_str(&format!(
                    "  \"{}\" -- \"{}\";\n",
                    node.encode(domain),
                    up.encode(domain)
                ));
            }
        }
    }
    out.push_str("}\n");
    out
}
