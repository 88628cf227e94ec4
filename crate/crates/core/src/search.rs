//! The U-curve search, its exhaustive oracle, and final-hypothesis learning.
//!
//! The walk repeatedly exhausts a node's immediate neighborhood: a node whose
//! estimate is no greater than all its neighbors' is a strong local minimum
//! and every node comparable to it is pruned. Otherwise the walk moves to a
//! cheaper neighbor, dropping the departed node. The candidate pool is never
//! materialized: exclusion is decided by comparability against the recorded
//! minima plus an explicit removed set.
//!
//! On the full partition lattice, pruning around a recorded minimum is kept
//! exact by two guards. Refinements of a minimum are provably no cheaper only
//! pair by pair — a single train/validation pair inherits the per-block ERM
//! argument, while an m-pair mean can dip again higher up through cross-pair
//! compensation — so refinements are pruned only when the minimum holds
//! within every pair. Coarsenings are never provably worse in any case
//! (merging two same-labeled blocks ties the estimate exactly, and a further
//! merge can then drop below the minimum), so they are scored outright before
//! being discarded; a k-block node has at most Bell(k) of them, few at the
//! depths where minima live. The reported global minimum therefore matches
//! the exhaustive oracle even where the weak U-curve property fails. On
//! predicate-restricted spaces, whose Hasse steps are not single block
//! splits, exactness remains conditional on that property.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::{empirical_measure, Sample};
use crate::error::{Error, Result};
use crate::estimators::{CostOracle, EstimateCache, EstimatorSpec};
use crate::lattice::{Direction, LearningSpace, Partition};
use crate::learner::{erm_on_partition, Hypothesis, TieRule};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StartPolicy {
    /// Start (and restart) at the least remaining node: fewest blocks first,
    /// canonical order within a level.
    Coarsest,
    /// Restart at a random non-excluded node, sampled with the given seed.
    SeededRandom(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NeighborOrder {
    /// Move to the first cheaper neighbor in canonical order.
    Canonical,
    /// Evaluate the whole neighborhood, then descend to the cheapest.
    CheapestFirst,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StochasticConfig {
    pub restarts: usize,
    /// Maximum number of node evaluations across all restarts.
    pub budget: usize,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub start: StartPolicy,
    /// When positive: once fewer than this many candidates remain, stop the
    /// walk and score all of them exhaustively.
    pub exhaustive_fallback_threshold: usize,
    /// Drop neighbors seen to cost strictly more than the current node.
    pub prune_visited_worse_neighbors: bool,
    /// Asserts the lattice-convexity condition for this space, licensing
    /// join-skipping; unsound when the condition does not actually hold.
    pub convexity_prune: bool,
    pub stochastic: Option<StochasticConfig>,
    pub neighbor_order: NeighborOrder,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            start: StartPolicy::Coarsest,
            exhaustive_fallback_threshold: 0,
            prune_visited_worse_neighbors: false,
            convexity_prune: false,
            stochastic: None,
            neighbor_order: NeighborOrder::Canonical,
        }
    }
}

/// Membership in the shrinking candidate pool, decided lazily.
///
/// A node is excluded iff it is comparable (`<=` or `>=`, including equality)
/// to a fully recorded minimum, weakly below a downward-only minimum, or in
/// the explicit removed set. The downward-only kind exists for multi-pair
/// estimators, where a minimum's refinements are not provably worse.
#[derive(Clone, Debug, Default)]
pub struct ExclusionSet {
    minima: Vec<Partition>,
    minima_down_only: Vec<Partition>,
    removed: BTreeSet<Partition>,
}

impl ExclusionSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record_minimum(&mut self, node: Partition) {
        self.minima.push(node);
    }

    /// Excludes only the minimum itself and the nodes it contains.
    pub fn record_minimum_down_only(&mut self, node: Partition) {
        self.minima_down_only.push(node);
    }

    pub fn remove(&mut self, node: Partition) {
        self.removed.insert(node);
    }

    pub fn is_excluded(&self, node: &Partition) -> bool {
        self.removed.contains(node)
            || self
                .minima
                .iter()
                .any(|m| m.leq_unchecked(node) || node.leq_unchecked(m))
            || self.minima_down_only.iter().any(|m| node.leq_unchecked(m))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceEvent {
    Visit { node: Partition, cost: Rational },
    Minimum { node: Partition },
    Move { from: Partition, to: Partition },
    Restart { node: Partition },
    Fallback { remaining: usize },
}

/// Everything a search run reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub strong_local_minima: Vec<(Partition, Rational)>,
    pub global_minima: Vec<(Partition, Rational)>,
    pub selected: Partition,
    pub final_hypothesis: Hypothesis,
    pub nodes_visited: usize,
    pub estimates_computed: usize,
    pub trace: Vec<TraceEvent>,
    /// Set when a stochastic run exhausted its budget before finishing.
    pub suboptimal: bool,
}

/// Minima-search outcome, before tie resolution and final learning.
#[derive(Clone, Debug)]
pub struct MinimaOutcome {
    pub strong_local_minima: Vec<(Partition, Rational)>,
    /// Nodes scored exhaustively rather than neighborhood-exhausted: the
    /// coarsening audits of recorded minima and any remaining-pool fallback.
    pub fallback_checked: Vec<(Partition, Rational)>,
    pub global_minima: Vec<(Partition, Rational)>,
    pub nodes_visited: usize,
    pub trace: Vec<TraceEvent>,
    pub suboptimal: bool,
}

/// True iff no immediate neighbor estimates strictly below `value`.
pub fn minimum_exhausted(
    space: &LearningSpace,
    node: &Partition,
    value: &Rational,
    oracle: &mut dyn CostOracle,
) -> Result<bool> {
    for dir in [Direction::Up, Direction::Down] {
        for q in space.neighbors(node, dir)? {
            if oracle.cost(&q)? < *value {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Join-skipping signal: with the convexity condition asserted for this
/// space, a pair both costing more than their meet guarantees the join costs
/// more than the meet as well, so it need not be visited.
pub fn convexity_skip(
    p1: &Partition,
    p2: &Partition,
    oracle: &mut dyn CostOracle,
    convexity_asserted: bool,
) -> Result<bool> {
    if !convexity_asserted {
        return Ok(false);
    }
    let meet = p1.meet(p2)?;
    let c1 = oracle.cost(p1)?;
    let c2 = oracle.cost(p2)?;
    let cm = oracle.cost(&meet)?;
    Ok(c1.min(c2) > cm)
}

struct NeighborScan {
    is_minimum: bool,
    /// Cheapest (or first cheaper, per order) non-excluded neighbor.
    step: Option<(Partition, Rational)>,
}

fn scan_neighborhood(
    space: &LearningSpace,
    node: &Partition,
    value: &Rational,
    oracle: &mut dyn CostOracle,
    config: &SearchConfig,
    exclusion: &mut ExclusionSet,
) -> Result<NeighborScan> {
    let mut is_minimum = true;
    let mut step: Option<(Partition, Rational)> = None;
    let mut up_costs: Vec<(Partition, Rational)> = Vec::new();
    for dir in [Direction::Up, Direction::Down] {
        for q in space.neighbors(node, dir)? {
            let cost = oracle.cost(&q)?;
            if dir == Direction::Up {
                up_costs.push((q.clone(), cost.clone()));
            }
            if cost < *value {
                is_minimum = false;
                if !exclusion.is_excluded(&q) {
                    let better = match (&step, config.neighbor_order) {
                        (None, _) => true,
                        (Some((_, best)), NeighborOrder::CheapestFirst) => cost < *best,
                        (Some(_), NeighborOrder::Canonical) => false,
                    };
                    if better {
                        step = Some((q.clone(), cost.clone()));
                    }
                    if config.neighbor_order == NeighborOrder::Canonical
                        && !config.prune_visited_worse_neighbors
                        && !config.convexity_prune
                    {
                        // Plain walk: first cheaper neighbor wins outright.
                        return Ok(NeighborScan { is_minimum, step });
                    }
                }
            } else if cost > *value && config.prune_visited_worse_neighbors {
                exclusion.remove(q.clone());
            }
        }
    }
    if config.convexity_prune {
        // Any two up-covers of `node` meet exactly at `node`; when both cost
        // strictly more and their join covers both, the join may be skipped.
        for i in 0..up_costs.len() {
            for j in i + 1..up_costs.len() {
                let (q1, c1) = &up_costs[i];
                let (q2, c2) = &up_costs[j];
                if c1 > value && c2 > value {
                    let join = q1.join(q2)?;
                    if join.block_count() == q1.block_count() + 1 && space.contains(&join) {
                        exclusion.remove(join);
                    }
                }
            }
        }
    }
    Ok(NeighborScan { is_minimum, step })
}

/// True iff every neighbor weakly dominates the node within every single
/// train/validation pair (trivially true for single-pair estimates and for
/// injected tables, which carry no pair structure).
fn per_pair_strong(
    space: &LearningSpace,
    node: &Partition,
    oracle: &mut dyn CostOracle,
) -> Result<bool> {
    let mine = match oracle.per_pair_costs(node)? {
        Some(pairs) if pairs.len() > 1 => pairs,
        _ => return Ok(true),
    };
    for dir in [Direction::Up, Direction::Down] {
        for q in space.neighbors_unchecked(node, dir) {
            let theirs = oracle
                .per_pair_costs(&q)?
                .expect("same oracle kind for neighbors");
            if theirs.iter().zip(&mine).any(|(t, m)| t < m) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Least remaining node: fewest blocks, then canonical order. `None` when the
/// pool is empty.
fn least_remaining(space: &LearningSpace, exclusion: &ExclusionSet) -> Option<Partition> {
    let mut best: Option<Partition> = None;
    for node in space.enumerate() {
        if exclusion.is_excluded(&node) {
            continue;
        }
        let better = match &best {
            None => true,
            Some(b) => (node.block_count(), &node) < (b.block_count(), b),
        };
        if better {
            if node.block_count() == 1 {
                return Some(node);
            }
            best = Some(node);
        }
    }
    best
}

fn random_remaining(
    space: &LearningSpace,
    exclusion: &ExclusionSet,
    rng: &mut ChaCha8Rng,
) -> Option<Partition> {
    // Sample a handful of assignment vectors; keep the non-excluded members
    // and pick uniformly among them. Falls back to the deterministic scan.
    let n = space.n_points();
    let mut candidates: Vec<Partition> = Vec::new();
    for _ in 0..32 {
        let assignment: Vec<u8> = (0..n).map(|_| rng.random_range(0..n as u8)).collect();
        let p = Partition::from_assignment(&assignment);
        if space.contains(&p) && !exclusion.is_excluded(&p) && !candidates.contains(&p) {
            candidates.push(p);
        }
    }
    if candidates.is_empty() {
        least_remaining(space, exclusion)
    } else {
        Some(candidates.swap_remove(rng.random_range(0..candidates.len())))
    }
}

/// Collects every remaining candidate if fewer than `limit` remain.
fn remaining_below(
    space: &LearningSpace,
    exclusion: &ExclusionSet,
    limit: usize,
) -> Option<Vec<Partition>> {
    let mut out = Vec::new();
    for node in space.enumerate() {
        if !exclusion.is_excluded(&node) {
            out.push(node);
            if out.len() >= limit {
                return None;
            }
        }
    }
    Some(out)
}

/// Core walk of the candidate pool. Runs until the pool empties (or, in
/// stochastic mode, until the restart or evaluation budget runs out).
pub fn search_minima(
    space: &LearningSpace,
    oracle: &mut dyn CostOracle,
    config: &SearchConfig,
) -> Result<MinimaOutcome> {
    let mut exclusion = ExclusionSet::new();
    let mut minima: Vec<(Partition, Rational)> = Vec::new();
    let mut fallback_checked: Vec<(Partition, Rational)> = Vec::new();
    let mut audited: BTreeSet<Partition> = BTreeSet::new();
    let mut trace: Vec<TraceEvent> = Vec::new();
    let mut nodes_visited = 0usize;
    let mut suboptimal = false;

    let mut rng = match (&config.start, &config.stochastic) {
        (_, Some(s)) => Some(ChaCha8Rng::seed_from_u64(s.seed)),
        (StartPolicy::SeededRandom(seed), None) => Some(ChaCha8Rng::seed_from_u64(*seed)),
        (StartPolicy::Coarsest, None) => None,
    };
    let stochastic = config.stochastic.clone();
    let mut restarts_left = stochastic.as_ref().map(|s| s.restarts);

    let pick = |exclusion: &ExclusionSet, rng: &mut Option<ChaCha8Rng>| match (&config.start, rng) {
        (StartPolicy::Coarsest, None) => least_remaining(space, exclusion),
        (_, Some(rng)) => random_remaining(space, exclusion, rng),
        (StartPolicy::SeededRandom(_), None) => unreachable!(),
    };

    let mut current = match pick(&exclusion, &mut rng) {
        Some(node) => node,
        None => {
            return Err(Error::InvalidInput("learning space has no nodes".into()));
        }
    };
    if let Some(r) = restarts_left.as_mut() {
        *r = r.saturating_sub(1);
    }

    'walk: loop {
        if let Some(s) = &stochastic {
            if oracle.computed() >= s.budget {
                suboptimal = true;
                break 'walk;
            }
        }
        let cost = oracle.cost(&current)?;
        trace.push(TraceEvent::Visit {
            node: current.clone(),
            cost: cost.clone(),
        });
        nodes_visited += 1;

        let scan = scan_neighborhood(space, &current, &cost, oracle, config, &mut exclusion)?;
        if scan.is_minimum {
            if !minima.iter().any(|(m, _)| *m == current) {
                minima.push((current.clone(), cost.clone()));
            }
            trace.push(TraceEvent::Minimum {
                node: current.clone(),
            });
            if stochastic.is_none() {
                // Coarsenings of a minimum are not provably worse (merging
                // two same-labeled blocks ties the estimate exactly and a
                // further merge can drop below it), so score them outright
                // before pruning them away.
                for coarser in coarsenings_in_space(&current, space) {
                    if coarser != current && audited.insert(coarser.clone()) {
                        let c = oracle.cost(&coarser)?;
                        fallback_checked.push((coarser, c));
                    }
                }
                // Refinements are provably worse only when the minimum holds
                // pair by pair: a single validation pair inherits the
                // per-block ERM argument, but an m-pair mean can dip again
                // higher up through cross-pair compensation.
                if per_pair_strong(space, &current, oracle)? {
                    exclusion.record_minimum(current.clone());
                } else {
                    exclusion.record_minimum_down_only(current.clone());
                }
            } else {
                exclusion.remove(current.clone());
            }
        } else if let Some((next, _)) = scan.step {
            exclusion.remove(current.clone());
            trace.push(TraceEvent::Move {
                from: current.clone(),
                to: next.clone(),
            });
            current = next;
            continue 'walk;
        } else {
            // Cheaper neighbors exist but none is still a candidate.
            exclusion.remove(current.clone());
        }

        // Restart (or stop).
        if let Some(r) = restarts_left.as_mut() {
            if *r == 0 {
                break 'walk;
            }
            *r -= 1;
        }
        if config.exhaustive_fallback_threshold > 0 {
            if let Some(rest) =
                remaining_below(space, &exclusion, config.exhaustive_fallback_threshold)
            {
                trace.push(TraceEvent::Fallback {
                    remaining: rest.len(),
                });
                for node in rest {
                    let c = oracle.cost(&node)?;
                    fallback_checked.push((node.clone(), c));
                    exclusion.remove(node);
                }
                break 'walk;
            }
        }
        match pick(&exclusion, &mut rng) {
            Some(node) => {
                trace.push(TraceEvent::Restart { node: node.clone() });
                current = node;
            }
            None => break 'walk,
        }
    }

    minima.sort_by(|a, b| a.0.cmp(&b.0));
    fallback_checked.sort_by(|a, b| a.0.cmp(&b.0));
    let global_minima = global_among(minima.iter().chain(&fallback_checked));
    Ok(MinimaOutcome {
        strong_local_minima: minima,
        fallback_checked,
        global_minima,
        nodes_visited,
        trace,
        suboptimal,
    })
}

fn global_among<'a, I>(candidates: I) -> Vec<(Partition, Rational)>
where
    I: IntoIterator<Item = &'a (Partition, Rational)>,
{
    let all: Vec<&(Partition, Rational)> = candidates.into_iter().collect();
    let best = match all.iter().map(|(_, c)| c).min() {
        Some(b) => b.clone(),
        None => return Vec::new(),
    };
    let mut out: Vec<(Partition, Rational)> = all
        .into_iter()
        .filter(|(_, c)| *c == best)
        .cloned()
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out.dedup();
    out
}

/// Resolves estimate ties toward the simplest model.
///
/// Every global minimum is expanded downward through the space: any node it
/// strictly contains whose estimate ties the minimum is itself a global
/// minimum the walk may have pruned. The least-VC survivor wins, canonical
/// order breaking residual ties.
pub fn select_least_vc(
    global_minima: &[(Partition, Rational)],
    space: &LearningSpace,
    oracle: &mut dyn CostOracle,
) -> Result<Partition> {
    let (first, value) = global_minima
        .first()
        .ok_or_else(|| Error::InvalidInput("no global minima to select from".into()))?;
    for (_, v) in global_minima {
        if v != value {
            return Err(Error::UnequalMinima(value.to_string(), v.to_string()));
        }
    }
    let mut best = first.clone();
    let mut seen: BTreeSet<Partition> = BTreeSet::new();
    for (node, _) in global_minima {
        for coarser in coarsenings_in_space(node, space) {
            if !seen.insert(coarser.clone()) {
                continue;
            }
            if oracle.cost(&coarser)? == *value {
                let better = (coarser.block_count(), &coarser) < (best.block_count(), &best);
                if better {
                    best = coarser;
                }
            }
        }
    }
    Ok(best)
}

/// All space members weakly below `node` (partitions of its blocks).
fn coarsenings_in_space(node: &Partition, space: &LearningSpace) -> Vec<Partition> {
    let blocks = node.blocks();
    crate::lattice::PartitionIter::new(blocks.len())
        .map(|grouping| {
            let mut assignment = vec![0u8; node.n_points()];
            for (b, block) in blocks.iter().enumerate() {
                for &p in block {
                    assignment[p] = grouping.block_of(b) as u8;
                }
            }
            Partition::from_assignment(&assignment)
        })
        .filter(|p| space.contains(p))
        .collect()
}

/// How the final hypothesis is learned on the selected model.
pub enum LearnMode<'a> {
    /// ERM under the same sample that drove the selection.
    Reuse(&'a Sample),
    /// ERM under a second sample, independent in origin from the first.
    Independent(&'a Sample),
}

pub fn learn_final_hypothesis(
    selected: &Partition,
    mode: LearnMode<'_>,
    tie: TieRule,
) -> Result<Hypothesis> {
    let sample = match mode {
        LearnMode::Reuse(s) => s,
        LearnMode::Independent(s) => s,
    };
    let measure = empirical_measure(sample)?;
    erm_on_partition(selected, &measure, tie)
}

/// Full U-curve run: minima search, least-VC tie resolution, and a final
/// hypothesis learned by reusing the whole selection sample.
pub fn ucurve_search(
    space: &LearningSpace,
    sample: &Sample,
    spec: &EstimatorSpec,
    config: &SearchConfig,
) -> Result<SearchReport> {
    spec.validate(sample.len())?;
    let mut oracle = EstimateCache::new(sample, spec.clone());
    let mut outcome = search_minima(space, &mut oracle, config)?;
    let selected = select_least_vc(&outcome.global_minima, space, &mut oracle)?;
    // Tie resolution may land on a coarsening the walk never listed; it ties
    // the minimum estimate by construction, so it belongs in the report.
    if !outcome.global_minima.iter().any(|(n, _)| *n == selected) {
        let value = outcome.global_minima[0].1.clone();
        outcome.global_minima.push((selected.clone(), value));
        outcome.global_minima.sort_by(|a, b| a.0.cmp(&b.0));
    }
    let final_hypothesis = learn_final_hypothesis(&selected, LearnMode::Reuse(sample), spec.tie)?;
    Ok(SearchReport {
        strong_local_minima: outcome.strong_local_minima,
        global_minima: outcome.global_minima,
        selected,
        final_hypothesis,
        nodes_visited: outcome.nodes_visited,
        estimates_computed: oracle.computed(),
        trace: outcome.trace,
        suboptimal: outcome.suboptimal,
    })
}

/// Scores every node of the space; the exact oracle the U-curve run is
/// checked against. Reported minima are the global ones.
pub fn exhaustive_minima(
    space: &LearningSpace,
    oracle: &mut dyn CostOracle,
) -> Result<MinimaOutcome> {
    let mut scored: Vec<(Partition, Rational)> = Vec::new();
    let mut trace = Vec::new();
    for node in space.enumerate() {
        let cost = oracle.cost(&node)?;
        trace.push(TraceEvent::Visit {
            node: node.clone(),
            cost: cost.clone(),
        });
        scored.push((node, cost));
    }
    let global_minima = global_among(scored.iter());
    Ok(MinimaOutcome {
        strong_local_minima: global_minima.clone(),
        fallback_checked: scored,
        global_minima,
        nodes_visited: trace.len(),
        trace,
        suboptimal: false,
    })
}

pub fn exhaustive_search(
    space: &LearningSpace,
    sample: &Sample,
    spec: &EstimatorSpec,
) -> Result<SearchReport> {
    spec.validate(sample.len())?;
    let mut oracle = EstimateCache::new(sample, spec.clone());
    let outcome = exhaustive_minima(space, &mut oracle)?;
    let selected = select_least_vc(&outcome.global_minima, space, &mut oracle)?;
    let final_hypothesis = learn_final_hypothesis(&selected, LearnMode::Reuse(sample), spec.tie)?;
    Ok(SearchReport {
        strong_local_minima: outcome.strong_local_minima,
        global_minima: outcome.global_minima,
        selected,
        final_hypothesis,
        nodes_visited: outcome.nodes_visited,
        estimates_computed: oracle.computed(),
        trace: outcome.trace,
        suboptimal: false,
    })
}

#[cfg(test)]
pub(crate) mod fig_fixture {
    //! The 16-node Boolean-lattice cost fixture used across search and
    //! analysis tests: each feature subset of a 4-cube domain carries a fixed
    //! cost; three nodes are strong local minima and the global minimum costs
    //! 41/1000.

    use std::collections::BTreeMap;

    use crate::domain::FiniteDomain;
    use crate::estimators::FixedCosts;
    use crate::lattice::{feature_set_to_partition, FeatureSet, LearningSpace, Partition};
    use crate::rational::{ratio, Rational};

    pub const COSTS: [(&[usize], i64); 16] = [
        (&[], 70),
        (&[1], 50),
        (&[2], 62),
        (&[3], 57),
        (&[4], 51),
        (&[1, 2], 60),
        (&[1, 3], 42),
        (&[1, 4], 53),
        (&[2, 3], 41),
        (&[2, 4], 48),
        (&[3, 4], 54),
        (&[1, 2, 3], 45),
        (&[1, 2, 4], 47),
        (&[1, 3, 4], 48),
        (&[2, 3, 4], 53),
        (&[1, 2, 3, 4], 55),
    ];

    pub fn domain() -> FiniteDomain {
        FiniteDomain::boolean_cube(4)
    }

    pub fn space(domain: &FiniteDomain) -> LearningSpace {
        LearningSpace::feature_lattice(domain).unwrap()
    }

    pub fn node(domain: &FiniteDomain, features: &[usize]) -> Partition {
        feature_set_to_partition(domain, &FeatureSet::from_iter(features.iter().copied()))
            .unwrap()
    }

    pub fn cost_table(domain: &FiniteDomain) -> BTreeMap<Partition, Rational> {
        COSTS
            .iter()
            .map(|(features, millis)| (node(domain, features), ratio(*millis, 1000)))
            .collect()
    }

    pub fn oracle(domain: &FiniteDomain) -> FixedCosts {
        FixedCosts::new(cost_table(domain))
    }

    pub fn strong_minima_costs() -> Vec<Rational> {
        vec![ratio(42, 1000), ratio(41, 1000), ratio(47, 1000)]
    }
}
