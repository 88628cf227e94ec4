//! Dataset and fixture ingestion: CSV observations, injected cost tables,
//! and exact joint-distribution files.

use std::collections::BTreeMap;

use ucurve_core::domain::{FiniteDomain, JointDistribution, Sample};
use ucurve_core::lattice::Partition;
use ucurve_core::rational::{parse_rational, Rational};

use crate::CliError;

/// A parsed dataset: the induced domain (one point per distinct feature
/// row, lexicographic order, labeled by the concatenated bits) and the
/// observations in file order.
pub struct Dataset {
    pub domain: FiniteDomain,
    pub sample: Sample,
    /// Observation counts per (point, label), domain order.
    pub counts: Vec<[u64; 2]>,
}

/// Parses the CSV format: a header row, `d >= 1` feature columns of 0/1, and
/// a final 0/1 label column. Malformed content reports row and column.
pub fn parse_csv(text: &str, path: &str) -> Result<Dataset, CliError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| CliError::input(format!("{path}: empty file")))?;
    let columns = header.split(',').count();
    if columns < 2 {
        return Err(CliError::input(format!(
            "{path}:1: need at least one feature column and a label column"
        )));
    }
    let width = columns - 1;
    let mut rows: Vec<(Vec<bool>, bool)> = Vec::new();
    for (idx, line) in lines {
        let rowno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != columns {
            return Err(CliError::input(format!(
                "{path}:{rowno}: expected {columns} columns, found {}",
                cells.len()
            )));
        }
        let mut bits = Vec::with_capacity(width);
        for (c, cell) in cells.iter().enumerate() {
            let bit = match cell.trim() {
                "0" => false,
                "1" => true,
                other => {
                    return Err(CliError::input(format!(
                        "{path}:{rowno}: column {} has {other:?}, expected 0 or 1",
                        c + 1
                    )))
                }
            };
            bits.push(bit);
        }
        let label = bits.pop().expect("label column");
        rows.push((bits, label));
    }
    if rows.is_empty() {
        return Err(CliError::input(format!("{path}: no observation rows")));
    }

    let mut distinct: Vec<Vec<bool>> = rows.iter().map(|(f, _)| f.clone()).collect();
    distinct.sort();
    distinct.dedup();
    let labels: Vec<String> = distinct
        .iter()
        .map(|bits| bits.iter().map(|&b| if b { '1' } else { '0' }).collect())
        .collect();
    let domain = FiniteDomain::with_features(labels, distinct.clone())
        .map_err(|e| CliError::input(format!("{path}: {e}")))?;

    let index: BTreeMap<&Vec<bool>, usize> =
        distinct.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let pairs: Vec<(usize, bool)> = rows.iter().map(|(f, y)| (index[f], *y)).collect();
    let mut counts = vec![[0u64; 2]; distinct.len()];
    for &(p, y) in &pairs {
        counts[p][usize::from(y)] += 1;
    }
    let sample = Sample::new(pairs, distinct.len())
        .map_err(|e| CliError::input(format!("{path}: {e}")))?;
    Ok(Dataset {
        domain,
        sample,
        counts,
    })
}

/// Parses a costs.json file: a flat map from canonical partition encodings to
/// rational strings, resolved against the given domain.
pub fn parse_costs(
    text: &str,
    path: &str,
    domain: &FiniteDomain,
) -> Result<BTreeMap<Partition, Rational>, CliError> {
    let raw: BTreeMap<String, String> = serde_json::from_str(text)
        .map_err(|e| CliError::input(format!("{path}: not a string-to-string map: {e}")))?;
    let mut table = BTreeMap::new();
    for (encoding, value) in raw {
        let node = Partition::parse(&encoding, domain)
            .map_err(|e| CliError::input(format!("{path}: {e}")))?;
        let cost =
            parse_rational(&value).map_err(|e| CliError::input(format!("{path}: {e}")))?;
        table.insert(node, cost);
    }
    Ok(table)
}

/// Parses a dist.json file: `{"points": [...], "prob": {"point,label": "p/q"}}`.
pub fn parse_dist(
    text: &str,
    path: &str,
) -> Result<(FiniteDomain, JointDistribution), CliError> {
    #[derive(serde::Deserialize)]
    struct Raw {
        points: Vec<String>,
        prob: BTreeMap<String, String>,
    }
    let raw: Raw =
        serde_json::from_str(text).map_err(|e| CliError::input(format!("{path}: {e}")))?;
    let domain =
        FiniteDomain::new(raw.points).map_err(|e| CliError::input(format!("{path}: {e}")))?;
    let mut probs =
        vec![[Rational::from_integer(0.into()), Rational::from_integer(0.into())]; domain.len()];
    for (key, value) in &raw.prob {
        let (point, label) = key.rsplit_once(',').ok_or_else(|| {
            CliError::input(format!("{path}: key {key:?} is not \"point,label\""))
        })?;
        let p = domain.index_of(point.trim()).ok_or_else(|| {
            CliError::input(format!("{path}: unknown point {point:?} in prob table"))
        })?;
        let y = match label.trim() {
            "0" => 0usize,
            "1" => 1usize,
            other => {
                return Err(CliError::input(format!(
                    "{path}: label {other:?} must be 0 or 1"
                )))
            }
        };
        probs[p][y] = parse_rational(value).map_err(|e| CliError::input(format!("{path}: {e}")))?;
    }
    let dist =
        JointDistribution::new(probs).map_err(|e| CliError::input(format!("{path}: {e}")))?;
    Ok((domain, dist))
}
