//! Ground-truth quantities, estimation-error decompositions, minimum
//! classification, U-curve and lattice-convexity checkers, and Monte Carlo
//! consistency experiments.
//!
//! Everything here works on exact rationals, so equalities between model
//! errors (and hence equivalence classes and tie structure) are exact.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::domain::{empirical_measure, sample_from, JointDistribution, Sample};
use crate::error::{Error, Result};
use crate::estimators::{CostOracle, EstimateCache, EstimatorSpec};
use crate::lattice::{Direction, LearningSpace, Partition};
use crate::learner::{best_in_model, true_loss, Hypothesis};
use crate::rational::{from_count, Rational};
use crate::search::{search_minima, select_least_vc, SearchConfig};

/// Nodes beyond this bound are not enumerated by the exact checkers.
const ENUMERATION_LIMIT: usize = 200_000;
/// Chain enumeration is only attempted on small spaces.
const CHAIN_ENUMERATION_LIMIT: usize = 1_024;
/// Hard cap on `2^blocks` hypothesis enumeration for the exact supremum.
const TYPE_I_BLOCK_CAP: usize = 20;

/// The target model of a space under a distribution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetSummary {
    /// Least-VC witness of the optimal equivalence class (ties broken by
    /// canonical encoding).
    pub target_node: Partition,
    /// The optimal model error over the space.
    pub target_error: Rational,
    /// Maximum discrimination error: the gap to the best strictly worse
    /// node. `None` means every node attains the optimum (infinite gap).
    pub mde: Option<Rational>,
    /// A pointwise-Bayes hypothesis over the whole hypothesis space.
    pub bayes_like_hypothesis: Hypothesis,
}

/// Computes the target model, its error, and the discrimination gap by full
/// enumeration of the space.
pub fn target_model(space: &LearningSpace, dist: &JointDistribution) -> Result<TargetSummary> {
    if dist.n_points() != space.n_points() {
        return Err(Error::DomainMismatch {
            left: space.n_points(),
            right: dist.n_points(),
        });
    }
    let mut errors: Vec<(Partition, Rational)> = Vec::new();
    for node in space.enumerate() {
        if errors.len() >= ENUMERATION_LIMIT {
            return Err(Error::InfeasibleSpace {
                nodes: errors.len(),
                limit: ENUMERATION_LIMIT,
            });
        }
        let (_, loss) = best_in_model(&node, dist)?;
        errors.push((node, loss));
    }
    let target_error = errors
        .iter()
        .map(|(_, l)| l.clone())
        .min()
        .ok_or_else(|| Error::InvalidInput("learning space has no nodes".into()))?;
    let target_node = errors
        .iter()
        .filter(|(_, l)| *l == target_error)
        .map(|(n, _)| n.clone())
        .min_by(|a, b| (a.block_count(), a).cmp(&(b.block_count(), b)))
        .expect("at least one minimizer");
    let mde = errors
        .iter()
        .filter(|(_, l)| *l > target_error)
        .map(|(_, l)| l - &target_error)
        .min();
    let (bayes_like_hypothesis, _) =
        best_in_model(&Partition::singletons(space.n_points()), dist)?;
    Ok(TargetSummary {
        target_node,
        target_error,
        mde,
        bayes_like_hypothesis,
    })
}

/// The four estimation errors of one finished run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorQuadruple {
    /// Uniform estimation gap over the selected model on the evaluation
    /// sample: `sup_h |L_sample(h) - L(h)|`.
    pub type_i: Rational,
    /// Excess loss of the learned hypothesis within the selected model.
    pub type_ii: Rational,
    /// Bias of the selected model against the whole hypothesis space.
    pub type_iii: Rational,
    /// Total excess loss of the learned hypothesis.
    pub type_iv: Rational,
}

/// Exact estimation errors of a selection outcome against the ground truth.
///
/// The evaluation sample is the one the final hypothesis was learned from
/// (the full selection sample when reusing, the second sample otherwise).
/// The supremum iterates all `2^blocks` labelings of the selected node and is
/// refused beyond [`TYPE_I_BLOCK_CAP`] blocks.
pub fn estimation_errors(
    selected: &Partition,
    final_hypothesis: &Hypothesis,
    dist: &JointDistribution,
    eval_sample: &Sample,
) -> Result<ErrorQuadruple> {
    let blocks = selected.block_count();
    if blocks > TYPE_I_BLOCK_CAP {
        return Err(Error::TypeICapExceeded {
            blocks,
            cap: TYPE_I_BLOCK_CAP,
        });
    }
    let measure = empirical_measure(eval_sample)?;
    // Per-block gap contributions: delta_b(y) sums D(x, !y) - P(x, !y).
    let block_list = selected.blocks();
    let deltas: Vec<[Rational; 2]> = block_list
        .iter()
        .map(|block| {
            let mut d = [Rational::zero(), Rational::zero()];
            for &p in block {
                d[0] += measure.frequency(p, true) - dist.prob(p, true);
                d[1] += measure.frequency(p, false) - dist.prob(p, false);
            }
            d
        })
        .collect();
    let mut type_i = Rational::zero();
    for mask in 0u32..(1u32 << blocks) {
        let mut gap = Rational::zero();
        for (b, d) in deltas.iter().enumerate() {
            gap += &d[usize::from(mask >> b & 1 == 1)];
        }
        let gap = gap.abs();
        if gap > type_i {
            type_i = gap;
        }
    }

    let (_, selected_best) = best_in_model(selected, dist)?;
    let bayes = best_in_model(&Partition::singletons(selected.n_points()), dist)?.1;
    let learned = true_loss(final_hypothesis, dist);
    let type_ii = &learned - &selected_best;
    let type_iii = &selected_best - &bayes;
    let type_iv = &learned - &bayes;
    Ok(ErrorQuadruple {
        type_i,
        type_ii,
        type_iii,
        type_iv,
    })
}

/// How a node sits in the cost landscape.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MinimumClassification {
    /// Cost no greater than every immediate Hasse neighbor.
    pub strong_local: bool,
    /// Weak local minimum of at least one maximal continuous chain.
    pub weak_local: bool,
    /// Cost minimal over the whole space.
    pub global: bool,
}

pub type CostTable = BTreeMap<Partition, Rational>;

fn cost_of<'a>(costs: &'a CostTable, node: &Partition) -> Result<&'a Rational> {
    costs
        .get(node)
        .ok_or_else(|| Error::MissingCost(format!("{node:?}")))
}

/// Classifies one node against a total cost table.
///
/// A maximal chain through the node picks any covered neighbor below and any
/// covering neighbor above (chain ends fall back to infinite sentinels), so
/// the weak test reduces to one existence check per side.
pub fn classify_minimum(
    costs: &CostTable,
    space: &LearningSpace,
    node: &Partition,
) -> Result<MinimumClassification> {
    let value = cost_of(costs, node)?;
    let ups = space.up_neighbors(node)?;
    let downs = space.down_neighbors(node)?;
    let side_ok = |side: &[Partition]| -> Result<bool> {
        if side.is_empty() {
            return Ok(true);
        }
        for q in side {
            if cost_of(costs, q)? >= value {
                return Ok(true);
            }
        }
        Ok(false)
    };
    let all_ok = |side: &[Partition]| -> Result<bool> {
        for q in side {
            if cost_of(costs, q)? < value {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let weak_local = side_ok(&ups)? && side_ok(&downs)?;
    let strong_local = all_ok(&ups)? && all_ok(&downs)?;
    let mut global = true;
    for q in space.enumerate() {
        if cost_of(costs, &q)? < value {
            global = false;
            break;
        }
    }
    Ok(MinimumClassification {
        strong_local,
        weak_local,
        global,
    })
}

/// Enumerates every maximal continuous chain of the space (low to high).
pub fn maximal_chains(space: &LearningSpace) -> Result<Vec<Vec<Partition>>> {
    let mut count = 0usize;
    for _ in space.enumerate() {
        count += 1;
        if count > CHAIN_ENUMERATION_LIMIT {
            return Err(Error::InfeasibleSpace {
                nodes: count,
                limit: CHAIN_ENUMERATION_LIMIT,
            });
        }
    }
    let minimal: Vec<Partition> = space
        .enumerate()
        .filter(|n| space.neighbors_unchecked(n, Direction::Down).is_empty())
        .collect();
    let mut chains = Vec::new();
    let mut stack: Vec<Vec<Partition>> = minimal.into_iter().map(|n| vec![n]).collect();
    while let Some(chain) = stack.pop() {
        let ups = space.neighbors_unchecked(chain.last().unwrap(), Direction::Up);
        if ups.is_empty() {
            chains.push(chain);
            continue;
        }
        for q in ups {
            let mut next = chain.clone();
            next.push(q);
            stack.push(next);
        }
    }
    chains.sort();
    Ok(chains)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UcurveStrength {
    Weak,
    Strong,
}

/// A chain on which some local minimum fails to be the chain's global
/// minimum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainViolation {
    pub chain: Vec<Partition>,
    pub minimum: Partition,
    pub cheaper: Partition,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UcurveVerdict {
    Holds,
    Violations(Vec<ChainViolation>),
}

impl UcurveVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, UcurveVerdict::Holds)
    }
}

/// Exhaustive chain check of the weak or strong U-curve property.
///
/// Weak: every strong local minimum of the space is a global minimum of every
/// maximal chain through it. Strong: every weak local minimum of a maximal
/// chain is that chain's global minimum.
pub fn check_ucurve(
    costs: &CostTable,
    space: &LearningSpace,
    strength: UcurveStrength,
) -> Result<UcurveVerdict> {
    let chains = maximal_chains(space)?;
    let mut strong_nodes: BTreeMap<Partition, bool> = BTreeMap::new();
    let mut violations = Vec::new();
    for chain in &chains {
        let values: Vec<&Rational> = chain
            .iter()
            .map(|n| cost_of(costs, n))
            .collect::<Result<_>>()?;
        let chain_min = values.iter().min().unwrap();
        for (i, node) in chain.iter().enumerate() {
            let is_candidate = match strength {
                UcurveStrength::Weak => {
                    if let Some(known) = strong_nodes.get(node) {
                        *known
                    } else {
                        let known = classify_minimum(costs, space, node)?.strong_local;
                        strong_nodes.insert(node.clone(), known);
                        known
                    }
                }
                UcurveStrength::Strong => {
                    let left_ok = i == 0 || values[i - 1] >= values[i];
                    let right_ok = i + 1 == chain.len() || values[i + 1] >= values[i];
                    left_ok && right_ok
                }
            };
            if is_candidate && values[i] > chain_min {
                let cheaper = chain
                    .iter()
                    .zip(&values)
                    .find(|(_, v)| *v == chain_min)
                    .map(|(n, _)| n.clone())
                    .unwrap();
                violations.push(ChainViolation {
                    chain: chain.clone(),
                    minimum: node.clone(),
                    cheaper,
                });
            }
        }
    }
    Ok(if violations.is_empty() {
        UcurveVerdict::Holds
    } else {
        UcurveVerdict::Violations(violations)
    })
}

/// A diamond pair breaking the convexity inequality
/// `cost(join) >= cost(a) + cost(b) - cost(meet)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CondSViolation {
    pub a: Partition,
    pub b: Partition,
    pub meet: Partition,
    pub join: Partition,
    pub lhs: Rational,
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexityReport {
    /// Structural precondition: within every principal up-set and down-set,
    /// non-extreme members keep at least two inner covers.
    pub u_curve_compatible: bool,
    pub violations: Vec<CondSViolation>,
}

impl ConvexityReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the convexity inequality over every diamond pair of the space and
/// verifies U-curve compatibility separately.
pub fn check_lattice_convexity(costs: &CostTable, space: &LearningSpace) -> Result<ConvexityReport> {
    let nodes: Vec<Partition> = space.enumerate().collect();
    if nodes.len() > CHAIN_ENUMERATION_LIMIT {
        return Err(Error::InfeasibleSpace {
            nodes: nodes.len(),
            limit: CHAIN_ENUMERATION_LIMIT,
        });
    }
    let mut violations = Vec::new();
    for (i, a) in nodes.iter().enumerate() {
        for b in nodes.iter().skip(i + 1) {
            let meet = a.meet(b)?;
            let join = a.join(b)?;
            if !space.contains(&meet) || !space.contains(&join) {
                continue;
            }
            let up_meet = space.neighbors_unchecked(&meet, Direction::Up);
            if !(up_meet.contains(a) && up_meet.contains(b)) {
                continue;
            }
            let down_join = space.neighbors_unchecked(&join, Direction::Down);
            if !(down_join.contains(a) && down_join.contains(b)) {
                continue;
            }
            let lhs = cost_of(costs, &join)?.clone();
            let rhs = cost_of(costs, a)? + cost_of(costs, b)? - cost_of(costs, &meet)?;
            if lhs < rhs {
                violations.push(CondSViolation {
                    a: a.clone(),
                    b: b.clone(),
                    meet,
                    join,
                    lhs,
                    rhs,
                });
            }
        }
    }
    Ok(ConvexityReport {
        u_curve_compatible: u_curve_compatible(space, &nodes),
        violations,
    })
}

/// For every node `m` and every strictly comparable `x`, the covers of `x`
/// inside the interval toward `m` must be `{m}` alone or at least two nodes.
fn u_curve_compatible(space: &LearningSpace, nodes: &[Partition]) -> bool {
    for m in nodes {
        for x in nodes {
            if x == m {
                continue;
            }
            let (toward, dir) = if m.leq_unchecked(x) {
                (Direction::Down, true)
            } else if x.leq_unchecked(m) {
                (Direction::Up, false)
            } else {
                continue;
            };
            let inner: Vec<Partition> = space
                .neighbors_unchecked(x, toward)
                .into_iter()
                .filter(|y| {
                    if dir {
                        m.leq_unchecked(y)
                    } else {
                        y.leq_unchecked(m)
                    }
                })
                .collect();
            let ok = inner == vec![m.clone()] || inner.len() >= 2;
            if !ok {
                return false;
            }
        }
    }
    true
}

/// Node count, maximal VC dimension, and number of maximal models.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceStats {
    pub node_count: usize,
    pub vc_dim_max: usize,
    pub maximal_count: usize,
}

pub fn space_stats(space: &LearningSpace) -> Result<SpaceStats> {
    let mut node_count = 0usize;
    let mut vc_dim_max = 0usize;
    let mut maximal_count = 0usize;
    for node in space.enumerate() {
        node_count += 1;
        if node_count > ENUMERATION_LIMIT {
            return Err(Error::InfeasibleSpace {
                nodes: node_count,
                limit: ENUMERATION_LIMIT,
            });
        }
        vc_dim_max = vc_dim_max.max(node.block_count());
        if space.neighbors_unchecked(&node, Direction::Up).is_empty() {
            maximal_count += 1;
        }
    }
    Ok(SpaceStats {
        node_count,
        vc_dim_max,
        maximal_count,
    })
}

/// One Monte Carlo row: fractions of runs recovering the target class and the
/// target error, and the mean model bias, across `reps` samples of size `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyRow {
    pub n: usize,
    pub frac_model_match: Rational,
    pub frac_error_match: Rational,
    pub mean_type_iii: Rational,
}

fn derived_seed(seed: u64, n: usize, rep: usize) -> u64 {
    // SplitMix64 over the packed inputs; reps stay independent and stable.
    let mut z = seed
        .wrapping_add((n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add((rep as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs the full selection pipeline on `reps` fresh samples per size and
/// reports how often the selected model matches the target.
///
/// `spec_for` builds the estimator for each sample size (hold-out sizes and
/// fold counts are size-dependent).
pub fn consistency_experiment(
    dist: &JointDistribution,
    space: &LearningSpace,
    sizes: &[usize],
    reps: usize,
    spec_for: impl Fn(usize) -> EstimatorSpec,
    seed: u64,
) -> Result<Vec<ConsistencyRow>> {
    if reps == 0 {
        return Ok(Vec::new());
    }
    let target = target_model(space, dist)?;
    let config = SearchConfig::default();
    let mut rows = Vec::new();
    for &n in sizes {
        let spec = spec_for(n);
        let mut model_matches = 0u64;
        let mut error_matches = 0u64;
        let mut bias_sum = Rational::zero();
        for rep in 0..reps {
            let sample = sample_from(dist, n, derived_seed(seed, n, rep));
            let mut oracle = EstimateCache::new(&sample, spec.clone());
            let outcome = search_minima(space, &mut oracle, &config)?;
            let selected = select_least_vc(&outcome.global_minima, space, &mut oracle)?;
            let (_, selected_error) = best_in_model(&selected, dist)?;
            if selected_error == target.target_error {
                error_matches += 1;
                if selected.block_count() == target.target_node.block_count() {
                    model_matches += 1;
                }
            }
            bias_sum += selected_error - &target.target_error;
        }
        rows.push(ConsistencyRow {
            n,
            frac_model_match: Rational::new(model_matches.into(), (reps as u64).into()),
            frac_error_match: Rational::new(error_matches.into(), (reps as u64).into()),
            mean_type_iii: bias_sum / from_count(reps as u64),
        });
    }
    Ok(rows)
}

/// Model-error estimates for every node, as a total cost table.
pub fn cost_table_from_sample(
    space: &LearningSpace,
    sample: &Sample,
    spec: &EstimatorSpec,
) -> Result<CostTable> {
    let mut cache = EstimateCache::new(sample, spec.clone());
    let mut table = BTreeMap::new();
    let mut count = 0usize;
    for node in space.enumerate() {
        count += 1;
        if count > ENUMERATION_LIMIT {
            return Err(Error::InfeasibleSpace {
                nodes: count,
                limit: ENUMERATION_LIMIT,
            });
        }
        let cost = cache.cost(&node)?;
        table.insert(node, cost);
    }
    Ok(table)
}
