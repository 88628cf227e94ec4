//! Model-error estimators: the general m-pair form with hold-out and k-fold
//! front ends, plus the memoizing caches the search runs on.
//!
//! Every estimator is the mean over `m` train/validation pairs of the
//! validation loss of the per-pair ERM hypothesis. Hold-out is the `m = 1`
//! special case, k-fold the `m = k` one.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::domain::{empirical_measure, Sample};
use crate::error::{Error, Result};
use crate::lattice::Partition;
use crate::learner::{empirical_loss, erm_on_partition, Hypothesis, TieRule};
use crate::rational::{from_count, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EstimatorKind {
    /// Train on the first `n - v_n` observations, validate on the last `v_n`.
    Holdout { v_n: usize },
    /// `k` contiguous folds; fold `j` validates the ERM of the other `k - 1`.
    KFold { k: usize },
    /// Arbitrary train/validation position pairs (disjoint within each pair).
    Pairs(Vec<SamplePair>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplePair {
    pub train: Vec<usize>,
    pub val: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EstimatorSpec {
    pub kind: EstimatorKind,
    pub tie: TieRule,
}

impl EstimatorSpec {
    pub fn holdout(v_n: usize) -> Self {
        Self {
            kind: EstimatorKind::Holdout { v_n },
            tie: TieRule::default(),
        }
    }

    pub fn kfold(k: usize) -> Self {
        Self {
            kind: EstimatorKind::KFold { k },
            tie: TieRule::default(),
        }
    }

    pub fn pairs(pairs: Vec<SamplePair>) -> Self {
        Self {
            kind: EstimatorKind::Pairs(pairs),
            tie: TieRule::default(),
        }
    }

    pub fn with_tie(mut self, tie: TieRule) -> Self {
        self.tie = tie;
        self
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match &self.kind {
            EstimatorKind::Holdout { v_n } => {
                if *v_n == 0 || *v_n >= n {
                    return Err(Error::InvalidHoldout { v_n: *v_n, n });
                }
            }
            EstimatorKind::KFold { k } => {
                if *k < 2 || n == 0 || !n.is_multiple_of(*k) {
                    return Err(Error::InvalidKfold { k: *k, n });
                }
            }
            EstimatorKind::Pairs(pairs) => {
                if pairs.is_empty() {
                    return Err(Error::InvalidEstimator("no train/validation pairs".into()));
                }
                for (j, pair) in pairs.iter().enumerate() {
                    if pair.train.is_empty() || pair.val.is_empty() {
                        return Err(Error::InvalidEstimator(format!(
                            "pair {j} has an empty train or validation side"
                        )));
                    }
                    if pair.train.iter().chain(&pair.val).any(|&i| i >= n) {
                        return Err(Error::InvalidEstimator(format!(
                            "pair {j} indexes beyond the sample (n = {n})"
                        )));
                    }
                    let train: std::collections::BTreeSet<_> = pair.train.iter().collect();
                    if pair.val.iter().any(|i| train.contains(i)) {
                        return Err(Error::InvalidEstimator(format!(
                            "pair {j} has overlapping train and validation indices"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The concrete index pairs for a sample of size `n`.
    fn resolve(&self, n: usize) -> Result<Vec<SamplePair>> {
        self.validate(n)?;
        Ok(match &self.kind {
            EstimatorKind::Holdout { v_n } => vec![SamplePair {
                train: (0..n - v_n).collect(),
                val: (n - v_n..n).collect(),
            }],
            EstimatorKind::KFold { k } => {
                let fold = n / k;
                (0..*k)
                    .map(|j| {
                        let val: Vec<usize> = (j * fold..(j + 1) * fold).collect();
                        let train: Vec<usize> =
                            (0..n).filter(|i| *i < j * fold || *i >= (j + 1) * fold).collect();
                        SamplePair { train, val }
                    })
                    .collect()
            }
            EstimatorKind::Pairs(pairs) => pairs.clone(),
        })
    }
}

/// The estimate of one node: the mean of the per-pair validation losses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelEstimate {
    pub node: Partition,
    pub value: Rational,
    pub per_pair: Vec<(Hypothesis, Rational)>,
}

/// Estimates the node's model error on the sample under the given spec.
///
/// Deterministic: a pure function of `(node, sample, spec)`.
pub fn estimate(node: &Partition, sample: &Sample, spec: &EstimatorSpec) -> Result<ModelEstimate> {
    let pairs = spec.resolve(sample.len())?;
    let mut per_pair = Vec::with_capacity(pairs.len());
    let mut sum = Rational::zero();
    for pair in &pairs {
        let train = sample.select(&pair.train)?;
        let val = sample.select(&pair.val)?;
        let train_measure = empirical_measure(&train)?;
        let val_measure = empirical_measure(&val)?;
        let h = erm_on_partition(node, &train_measure, spec.tie)?;
        let loss = empirical_loss(&h, &val_measure);
        sum += &loss;
        per_pair.push((h, loss));
    }
    let value = sum / from_count(per_pair.len() as u64);
    Ok(ModelEstimate {
        node: node.clone(),
        value,
        per_pair,
    })
}

/// Estimates every listed node once, memoized by canonical encoding.
pub fn estimate_all(
    nodes: &[Partition],
    sample: &Sample,
    spec: &EstimatorSpec,
) -> Result<BTreeMap<Partition, ModelEstimate>> {
    let mut map = BTreeMap::new();
    for node in nodes {
        if !map.contains_key(node) {
            map.insert(node.clone(), estimate(node, sample, spec)?);
        }
    }
    Ok(map)
}

/// Something the search can ask for node costs: either a live estimator or an
/// injected cost table. A node's cost is computed at most once per oracle.
pub trait CostOracle {
    fn cost(&mut self, node: &Partition) -> Result<Rational>;
    /// The per-pair validation losses behind the cost, when the cost is an
    /// m-pair estimate. `None` for injected tables.
    fn per_pair_costs(&mut self, node: &Partition) -> Result<Option<Vec<Rational>>>;
    /// Number of distinct nodes whose cost has been produced so far.
    fn computed(&self) -> usize;
    /// Every node evaluated so far with its cost, in canonical order.
    fn evaluated(&self) -> Vec<(Partition, Rational)>;
}

/// Memoizing estimator cache over one `(sample, spec)` context.
pub struct EstimateCache<'a> {
    sample: &'a Sample,
    spec: EstimatorSpec,
    values: BTreeMap<Partition, (Rational, Vec<Rational>)>,
}

impl<'a> EstimateCache<'a> {
    pub fn new(sample: &'a Sample, spec: EstimatorSpec) -> Self {
        Self {
            sample,
            spec,
            values: BTreeMap::new(),
        }
    }

    pub fn spec(&self) -> &EstimatorSpec {
        &self.spec
    }

    fn entry(&mut self, node: &Partition) -> Result<&(Rational, Vec<Rational>)> {
        if !self.values.contains_key(node) {
            let e = estimate(node, self.sample, &self.spec)?;
            let pairs = e.per_pair.iter().map(|(_, l)| l.clone()).collect();
            self.values.insert(node.clone(), (e.value, pairs));
        }
        Ok(&self.values[node])
    }
}

impl CostOracle for EstimateCache<'_> {
    fn cost(&mut self, node: &Partition) -> Result<Rational> {
        Ok(self.entry(node)?.0.clone())
    }

    fn per_pair_costs(&mut self, node: &Partition) -> Result<Option<Vec<Rational>>> {
        Ok(Some(self.entry(node)?.1.clone()))
    }

    fn computed(&self) -> usize {
        self.values.len()
    }

    fn evaluated(&self) -> Vec<(Partition, Rational)> {
        self.values
            .iter()
            .map(|(p, (v, _))| (p.clone(), v.clone()))
            .collect()
    }
}

/// A fixed node -> cost table, for injected fixtures. Unknown nodes error.
pub struct FixedCosts {
    table: BTreeMap<Partition, Rational>,
    queried: std::collections::BTreeSet<Partition>,
}

impl FixedCosts {
    pub fn new(table: BTreeMap<Partition, Rational>) -> Self {
        Self {
            table,
            queried: Default::default(),
        }
    }

    pub fn table(&self) -> &BTreeMap<Partition, Rational> {
        &self.table
    }
}

impl CostOracle for FixedCosts {
    fn cost(&mut self, node: &Partition) -> Result<Rational> {
        let v = self
            .table
            .get(node)
            .ok_or_else(|| Error::MissingCost(format!("{node:?}")))?;
        self.queried.insert(node.clone());
        Ok(v.clone())
    }

    fn per_pair_costs(&mut self, _node: &Partition) -> Result<Option<Vec<Rational>>> {
        Ok(None)
    }

    fn computed(&self) -> usize {
        self.queried.len()
    }

    fn evaluated(&self) -> Vec<(Partition, Rational)> {
        self.queried
            .iter()
            .map(|p| (p.clone(), self.table[p].clone()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::fixtures::{pooled_sample, sample_with_counts};
    use crate::lattice::PartitionIter;
    use crate::rational::ratio;

    fn node(blocks: &[&[usize]]) -> Partition {
        Partition::from_blocks(&blocks.iter().map(|b| b.to_vec()).collect::<Vec<_>>(), 4).unwrap()
    }

    #[test]
    fn holdout_reproduces_the_published_estimates() {
        let sample = pooled_sample();
        let spec = EstimatorSpec::holdout(100);
        let cases = [
            (node(&[&[0, 1, 2], &[3]]), ratio(48, 100)),
            (node(&[&[0, 1], &[2], &[3]]), ratio(44, 100)),
            (node(&[&[0, 2], &[1], &[3]]), ratio(41, 100)),
            (Partition::singletons(4), ratio(33, 100)),
        ];
        for (n, expected) in cases {
            let got = estimate(&n, &sample, &spec).unwrap();
            assert_eq!(got.value, expected, "node {n:?}");
            assert_eq!(got.per_pair.len(), 1);
        }
    }

    #[test]
    fn kfold_over_identical_folds_equals_the_holdout_on_one_fold() {
        // Sample = one pattern repeated k times; every fold sees the same data.
        let pattern = sample_with_counts(&[[3, 1], [1, 2], [0, 2], [2, 2]], 4);
        let k = 3;
        let mut repeated = pattern.clone();
        for _ in 1..k {
            repeated = repeated.concat(&pattern).unwrap();
        }
        let doubled = pattern.concat(&pattern).unwrap();
        for n in PartitionIter::new(4) {
            let cv = estimate(&n, &repeated, &EstimatorSpec::kfold(k)).unwrap();
            let ho = estimate(&n, &doubled, &EstimatorSpec::holdout(pattern.len())).unwrap();
            assert_eq!(cv.value, ho.value, "node {n:?}");
            assert_eq!(cv.per_pair.len(), k);
        }
    }

    #[test]
    fn two_fold_on_the_coarsest_node_is_the_mean_of_two_constant_losses() {
        // Six observations on a 2-point domain, folds of three.
        // Fold 1: (0,1),(0,1),(1,0); fold 2: (1,0),(1,0),(0,1).
        let s = Sample::new(
            vec![(0, true), (0, true), (1, false), (1, false), (1, false), (0, true)],
            2,
        )
        .unwrap();
        // Fold 1 validates the majority of fold 2 (label 0): losses 1/3 on
        // fold 2 wait -- computed by hand below.
        // Train = fold2 = {(1,0),(1,0),(0,1)}: majority 0 -> h = 0;
        //   loss on fold1 {(0,1),(0,1),(1,0)} = 2/3.
        // Train = fold1: majority 1 -> h = 1; loss on fold2 = 2/3.
        let got = estimate(&Partition::coarsest(2), &s, &EstimatorSpec::kfold(2)).unwrap();
        assert_eq!(got.value, ratio(2, 3));
        assert_eq!(got.per_pair[0].1, ratio(2, 3));
        assert_eq!(got.per_pair[1].1, ratio(2, 3));
    }

    #[test]
    fn pairs_variant_replicates_holdout() {
        let sample = pooled_sample();
        let spec = EstimatorSpec::pairs(vec![SamplePair {
            train: (0..100).collect(),
            val: (100..200).collect(),
        }]);
        let n = node(&[&[0, 1], &[2], &[3]]);
        assert_eq!(estimate(&n, &sample, &spec).unwrap().value, ratio(44, 100));
    }

    #[test]
    fn invalid_specs_are_rejected() {
        let sample = pooled_sample();
        assert!(estimate(&Partition::coarsest(4), &sample, &EstimatorSpec::holdout(200)).is_err());
        assert!(estimate(&Partition::coarsest(4), &sample, &EstimatorSpec::kfold(3)).is_err());
        let overlapping = EstimatorSpec::pairs(vec![SamplePair {
            train: vec![0, 1],
            val: vec![1, 2],
        }]);
        assert!(estimate(&Partition::coarsest(4), &sample, &overlapping).is_err());
    }

    #[test]
    fn estimate_all_deduplicates_and_covers_the_lattice() {
        let sample = pooled_sample();
        let spec = EstimatorSpec::holdout(100);
        let twice = vec![Partition::coarsest(4), Partition::coarsest(4)];
        assert_eq!(estimate_all(&twice, &sample, &spec).unwrap().len(), 1);

        let nodes: Vec<Partition> = PartitionIter::new(4).collect();
        let map = estimate_all(&nodes, &sample, &spec).unwrap();
        assert_eq!(map.len(), 15);
    }

    #[test]
    fn cache_hits_return_identical_values() {
        let sample = pooled_sample();
        let mut cache = EstimateCache::new(&sample, EstimatorSpec::holdout(100));
        let n = node(&[&[0, 2], &[1], &[3]]);
        let first = cache.cost(&n).unwrap();
        let second = cache.cost(&n).unwrap();
        assert_eq!(first, second);
        assert_eq!(cache.computed(), 1);
        assert_eq!(first, estimate(&n, &sample, cache.spec()).unwrap().value);
    }

    #[test]
    fn validation_error_can_increase_under_refinement() {
        // Training favors per-point labels (1 -> 0, 2 -> 1) but validation is
        // all label 1, so the refinement overfits: L(fine) > L(coarse).
        let s = Sample::new(
            vec![
                (0, false),
                (0, false),
                (0, true),
                (1, false),
                (1, true),
                (1, true),
                (0, true),
                (0, true),
                (0, true),
                (1, true),
                (1, true),
                (1, true),
            ],
            2,
        )
        .unwrap();
        let spec = EstimatorSpec::holdout(6);
        let coarse = estimate(&Partition::coarsest(2), &s, &spec).unwrap().value;
        let fine = estimate(&Partition::singletons(2), &s, &spec).unwrap().value;
        assert!(Partition::coarsest(2).leq(&Partition::singletons(2)).unwrap());
        assert!(fine > coarse, "fine {fine} vs coarse {coarse}");
    }

    #[test]
    fn fixed_costs_error_on_unknown_nodes() {
        let mut table = BTreeMap::new();
        table.insert(Partition::coarsest(2), ratio(1, 2));
        let mut oracle = FixedCosts::new(table);
        assert!(oracle.cost(&Partition::coarsest(2)).is_ok());
        assert!(matches!(
            oracle.cost(&Partition::singletons(2)),
            Err(Error::MissingCost(_))
        ));
        assert_eq!(oracle.computed(), 1);
    }

    #[test]
    fn estimates_concentrate_as_the_sample_grows() {
        use crate::domain::{sample_from, JointDistribution};
        use crate::learner::best_in_model;
        use num_traits::Signed;

        let dist = JointDistribution::from_weights(&[[1, 9], [9, 1]]).unwrap();
        let target = Partition::singletons(2);
        let (_, model_error) = best_in_model(&target, &dist).unwrap();
        let mut medians = Vec::new();
        for (i, n) in [100usize, 1000, 10000].into_iter().enumerate() {
            let mut devs: Vec<Rational> = (0..21)
                .map(|rep| {
                    let s = sample_from(&dist, n, 1000 + (i * 100 + rep) as u64);
                    let e = estimate(&target, &s, &EstimatorSpec::holdout(n / 4)).unwrap();
                    (e.value - &model_error).abs()
                })
                .collect();
            devs.sort();
            medians.push(devs[devs.len() / 2].clone());
        }
        assert!(medians[1] < medians[0], "{medians:?}");
        assert!(medians[2] < medians[1], "{medians:?}");
    }
}
