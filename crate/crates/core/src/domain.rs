//! Finite domains, exact joint distributions, samples, and empirical measures.
//!
//! Points are referenced by their index in the domain's fixed canonical order;
//! labels are binary. All frequency tables are exact rationals.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// A nonempty finite input domain with a fixed total order on its points.
///
/// Points are opaque labels, optionally carrying binary feature vectors of a
/// common width `d` (required by the feature-selection learning space).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteDomain {
    labels: Vec<String>,
    features: Option<Vec<Vec<bool>>>,
}

impl FiniteDomain {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        Self::build(labels, None)
    }

    pub fn with_features(labels: Vec<String>, features: Vec<Vec<bool>>) -> Result<Self> {
        Self::build(labels, Some(features))
    }

    fn build(labels: Vec<String>, features: Option<Vec<Vec<bool>>>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidInput("domain must be nonempty".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.clone()) {
                return Err(Error::InvalidInput(format!("duplicate point label {l:?}")));
            }
        }
        if let Some(rows) = &features {
            if rows.len() != labels.len() {
                return Err(Error::InvalidInput(
                    "feature rows must match the number of points".into(),
                ));
            }
            let width = rows[0].len();
            if rows.iter().any(|r| r.len() != width) {
                return Err(Error::InvalidInput("feature rows have unequal widths".into()));
            }
        }
        Ok(Self { labels, features })
    }

    /// The full binary cube `{0,1}^d` in binary counting order (most
    /// significant coordinate first), points labeled `1..2^d`.
    pub fn boolean_cube(d: usize) -> Self {
        assert!((1..=16).contains(&d), "cube width out of supported range");
        let size = 1usize << d;
        let labels = (1..=size).map(|i| i.to_string()).collect();
        let features = (0..size)
            .map(|idx| (0..d).map(|bit| idx >> (d - 1 - bit) & 1 == 1).collect())
            .collect();
        Self {
            labels,
            features: Some(features),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, point: usize) -> &str {
        &self.labels[point]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn features(&self) -> Option<&[Vec<bool>]> {
        self.features.as_deref()
    }

    pub fn feature_width(&self) -> Option<usize> {
        self.features.as_ref().map(|rows| rows[0].len())
    }
}

/// An exact joint probability table over `points x {0,1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointDistribution {
    probs: Vec<[Rational; 2]>,
}

impl JointDistribution {
    /// Builds the table, checking nonnegativity and exact normalization.
    pub fn new(probs: Vec<[Rational; 2]>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidInput("distribution over empty domain".into()));
        }
        let mut sum = Rational::zero();
        for [p0, p1] in &probs {
            if p0.is_negative() || p1.is_negative() {
                return Err(Error::InvalidInput("negative probability entry".into()));
            }
            sum += p0;
            sum += p1;
        }
        if !sum.is_one() {
            return Err(Error::NotNormalized(rational::format_ratio(&sum)));
        }
        Ok(Self { probs })
    }

    /// Builds the table from per-cell weights, normalizing by their sum.
    pub fn from_weights(weights: &[[u64; 2]]) -> Result<Self> {
        let total: u64 = weights.iter().map(|[a, b]| a + b).sum();
        if total == 0 {
            return Err(Error::InvalidInput("all weights are zero".into()));
        }
        let t = BigInt::from(total);
        Self::new(
            weights
                .iter()
                .map(|[a, b]| {
                    [
                        Rational::new(BigInt::from(*a), t.clone()),
                        Rational::new(BigInt::from(*b), t.clone()),
                    ]
                })
                .collect(),
        )
    }

    pub fn n_points(&self) -> usize {
        self.probs.len()
    }

    pub fn prob(&self, point: usize, label: bool) -> &Rational {
        &self.probs[point][usize::from(label)]
    }

    /// Marginal probability of the point.
    pub fn point_mass(&self, point: usize) -> Rational {
        &self.probs[point][0] + &self.probs[point][1]
    }
}

/// An ordered sequence of observed `(point, label)` pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    pairs: Vec<(usize, bool)>,
    n_points: usize,
}

impl Sample {
    pub fn new(pairs: Vec<(usize, bool)>, n_points: usize) -> Result<Self> {
        if let Some((p, _)) = pairs.iter().find(|(p, _)| *p >= n_points) {
            return Err(Error::InvalidInput(format!(
                "sample point index {p} outside domain of {n_points} points"
            )));
        }
        Ok(Self { pairs, n_points })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn pairs(&self) -> &[(usize, bool)] {
        &self.pairs
    }

    /// Concatenation, preserving order.
    pub fn concat(&self, other: &Sample) -> Result<Sample> {
        if self.n_points != other.n_points {
            return Err(Error::DomainMismatch {
                left: self.n_points,
                right: other.n_points,
            });
        }
        let mut pairs = self.pairs.clone();
        pairs.extend_from_slice(&other.pairs);
        Sample::new(pairs, self.n_points)
    }

    /// The sub-sample at the given positions, in the given order.
    pub fn select(&self, indices: &[usize]) -> Result<Sample> {
        let mut pairs = Vec::with_capacity(indices.len());
        for &i in indices {
            let pair = self.pairs.get(i).ok_or_else(|| {
                Error::InvalidInput(format!("sample index {i} out of range (n={})", self.len()))
            })?;
            pairs.push(*pair);
        }
        Sample::new(pairs, self.n_points)
    }
}

/// Exact observation counts per `(point, label)` cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmpiricalMeasure {
    counts: Vec<[u64; 2]>,
    total: u64,
}

impl EmpiricalMeasure {
    pub fn n_points(&self) -> usize {
        self.counts.len()
    }

    pub fn count(&self, point: usize, label: bool) -> u64 {
        self.counts[point][usize::from(label)]
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn frequency(&self, point: usize, label: bool) -> Rational {
        Rational::new(
            BigInt::from(self.count(point, label)),
            BigInt::from(self.total),
        )
    }

    /// The frequency table as an exact joint distribution.
    pub fn to_distribution(&self) -> JointDistribution {
        JointDistribution::from_weights(&self.counts).expect("positive total")
    }
}

/// Exact per-cell counts of a nonempty sample.
pub fn empirical_measure(sample: &Sample) -> Result<EmpiricalMeasure> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut counts = vec![[0u64; 2]; sample.n_points()];
    for &(p, y) in sample.pairs() {
        counts[p][usize::from(y)] += 1;
    }
    Ok(EmpiricalMeasure {
        counts,
        total: sample.len() as u64,
    })
}

/// Draws `n` i.i.d. observations from the distribution, deterministic per seed.
pub fn sample_from(dist: &JointDistribution, n: usize, seed: u64) -> Sample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cells: Vec<(usize, bool)> = (0..dist.n_points())
        .flat_map(|p| [(p, false), (p, true)])
        .collect();
    let mut cumulative = Vec::with_capacity(cells.len());
    let mut acc = Rational::zero();
    for &(p, y) in &cells {
        acc += dist.prob(p, y);
        cumulative.push(acc.clone());
    }
    let denom: BigInt = BigInt::one() << 128;
    let mut pairs = Vec::with_capacity(n);
    for _ in 0..n {
        let r = Rational::new(BigInt::from(rng.random::<u128>()), denom.clone());
        let idx = cumulative
            .iter()
            .position(|c| r < *c)
            .unwrap_or(cells.len() - 1);
        pairs.push(cells[idx]);
    }
    Sample {
        pairs,
        n_points: dist.n_points(),
    }
}

/// Splits off the last `v_n` observations as the validation sample.
///
/// The first `n - v_n` pairs form the training sample, so concatenating the
/// two halves reproduces the input order.
pub fn split_holdout(sample: &Sample, v_n: usize) -> Result<(Sample, Sample)> {
    let n = sample.len();
    if v_n == 0 || v_n >= n {
        return Err(Error::InvalidHoldout { v_n, n });
    }
    let train = Sample {
        pairs: sample.pairs[..n - v_n].to_vec(),
        n_points: sample.n_points,
    };
    let val = Sample {
        pairs: sample.pairs[n - v_n..].to_vec(),
        n_points: sample.n_points,
    };
    Ok((train, val))
}

/// Splits the sample into `k` contiguous folds of equal size.
///
/// Rejected unless `k >= 2` and `k` divides the sample size; unequal folds
/// would silently change the cross-validation estimate.
pub fn kfold_split(sample: &Sample, k: usize) -> Result<Vec<Sample>> {
    let n = sample.len();
    if k < 2 || n == 0 || !n.is_multiple_of(k) {
        return Err(Error::InvalidKfold { k, n });
    }
    let fold = n / k;
    Ok((0..k)
        .map(|j| Sample {
            pairs: sample.pairs[j * fold..(j + 1) * fold].to_vec(),
            n_points: sample.n_points,
        })
        .collect())
}

#[cfg(test)]
pub(crate) mod fixtures {
    //! Shared numeric fixtures used across the crate's tests: a four-point
    //! domain with fixed training and validation frequency tables realized as
    //! count-exact samples of 100 draws each.

    use super::*;

    pub fn four_point_domain() -> FiniteDomain {
        FiniteDomain::with_features(
            ["a1", "a2", "a3", "b"].map(String::from).to_vec(),
            vec![
                vec![false, false],
                vec![false, true],
                vec![true, false],
                vec![true, true],
            ],
        )
        .unwrap()
    }

    /// Counts per (point, label) over 100 draws: a1 (18,7), a2 (2,11),
    /// a3 (1,11), b (20,30).
    pub const TRAIN_COUNTS: [[u64; 2]; 4] = [[18, 7], [2, 11], [1, 11], [20, 30]];
    /// Counts per (point, label) over 100 draws: a1 (20,5), a2 (1,12),
    /// a3 (2,10), b (25,25).
    pub const VAL_COUNTS: [[u64; 2]; 4] = [[20, 5], [1, 12], [2, 10], [25, 25]];

    pub fn sample_with_counts(counts: &[[u64; 2]], n_points: usize) -> Sample {
        let mut pairs = Vec::new();
        for (p, [c0, c1]) in counts.iter().enumerate() {
            pairs.extend(std::iter::repeat_n((p, false), *c0 as usize));
            pairs.extend(std::iter::repeat_n((p, true), *c1 as usize));
        }
        Sample::new(pairs, n_points).unwrap()
    }

    pub fn train_sample() -> Sample {
        sample_with_counts(&TRAIN_COUNTS, 4)
    }

    pub fn val_sample() -> Sample {
        sample_with_counts(&VAL_COUNTS, 4)
    }

    /// Training then validation pairs as one 200-draw sample.
    pub fn pooled_sample() -> Sample {
        train_sample().concat(&val_sample()).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn empirical_measure_reproduces_published_frequency_table() {
        let m = empirical_measure(&train_sample()).unwrap();
        assert_eq!(m.total(), 100);
        assert_eq!(m.frequency(0, false), ratio(18, 100));
        assert_eq!(m.frequency(0, true), ratio(7, 100));
        assert_eq!(m.frequency(1, false), ratio(2, 100));
        assert_eq!(m.frequency(1, true), ratio(11, 100));
        assert_eq!(m.frequency(2, false), ratio(1, 100));
        assert_eq!(m.frequency(2, true), ratio(11, 100));
        assert_eq!(m.frequency(3, false), ratio(20, 100));
        assert_eq!(m.frequency(3, true), ratio(30, 100));
    }

    #[test]
    fn empirical_measure_single_pair_is_a_point_mass() {
        let s = Sample::new(vec![(2, true)], 4).unwrap();
        let m = empirical_measure(&s).unwrap();
        assert_eq!(m.frequency(2, true), ratio(1, 1));
        assert_eq!(m.frequency(2, false), ratio(0, 1));
        assert_eq!(m.frequency(0, true), ratio(0, 1));
    }

    #[test]
    fn empirical_measure_is_scale_invariant_under_self_concatenation() {
        let s = train_sample();
        let doubled = s.concat(&s).unwrap();
        let m1 = empirical_measure(&s).unwrap();
        let m2 = empirical_measure(&doubled).unwrap();
        for p in 0..4 {
            for y in [false, true] {
                assert_eq!(m1.frequency(p, y), m2.frequency(p, y));
            }
        }
    }

    #[test]
    fn empirical_measure_rejects_empty_sample() {
        let s = Sample::new(vec![], 4).unwrap();
        assert!(matches!(empirical_measure(&s), Err(Error::EmptySample)));
    }

    #[test]
    fn frequencies_sum_to_exactly_one() {
        let m = empirical_measure(&pooled_sample()).unwrap();
        let d = m.to_distribution();
        let mut sum = Rational::zero();
        for p in 0..4 {
            sum += d.prob(p, false);
            sum += d.prob(p, true);
        }
        assert!(sum.is_one());
    }

    #[test]
    fn sampling_point_mass_gives_constant_sample() {
        let dist = JointDistribution::from_weights(&[[0, 1], [0, 0]]).unwrap();
        let s = sample_from(&dist, 5, 7);
        assert_eq!(s.pairs(), &[(0, true); 5]);
    }

    #[test]
    fn sampling_zero_draws_gives_empty_sample() {
        let dist = JointDistribution::from_weights(&[[1, 1]]).unwrap();
        assert!(sample_from(&dist, 0, 1).is_empty());
    }

    #[test]
    fn sampling_uniform_four_outcomes_is_roughly_uniform() {
        // (point, label) uniform over 4 cells on a 2-point domain.
        let dist = JointDistribution::from_weights(&[[1, 1], [1, 1]]).unwrap();
        let s = sample_from(&dist, 10_000, 42);
        let m = empirical_measure(&s).unwrap();
        for p in 0..2 {
            for y in [false, true] {
                let dev = (m.frequency(p, y) - ratio(1, 4)).abs();
                assert!(dev < ratio(5, 100), "cell ({p},{y}) deviates by {dev}");
            }
        }
    }

    #[test]
    fn empirical_frequencies_approach_the_distribution() {
        let dist = JointDistribution::from_weights(&[[9, 1], [3, 7], [5, 5], [1, 9]]).unwrap();
        let s = sample_from(&dist, 100_000, 11);
        let m = empirical_measure(&s).unwrap();
        let mut max_dev = Rational::zero();
        for p in 0..4 {
            for y in [false, true] {
                let dev = (m.frequency(p, y) - dist.prob(p, y)).abs();
                if dev > max_dev {
                    max_dev = dev;
                }
            }
        }
        assert!(max_dev < ratio(1, 100), "max deviation {max_dev}");
    }

    #[test]
    fn holdout_split_sizes_and_order() {
        let s = sample_with_counts(&[[5, 5]], 1);
        let (train, val) = split_holdout(&s, 3).unwrap();
        assert_eq!(train.len(), 7);
        assert_eq!(val.len(), 3);
        assert_eq!(train.concat(&val).unwrap(), s);
    }

    #[test]
    fn holdout_rejects_degenerate_splits() {
        let s = sample_with_counts(&[[5, 5]], 1);
        assert!(matches!(
            split_holdout(&s, 10),
            Err(Error::InvalidHoldout { .. })
        ));
        assert!(matches!(
            split_holdout(&s, 0),
            Err(Error::InvalidHoldout { .. })
        ));
    }

    #[test]
    fn holdout_split_reproduces_the_paired_tables() {
        let (train, val) = split_holdout(&pooled_sample(), 100).unwrap();
        assert_eq!(empirical_measure(&train).unwrap(), empirical_measure(&train_sample()).unwrap());
        assert_eq!(empirical_measure(&val).unwrap(), empirical_measure(&val_sample()).unwrap());
    }

    #[test]
    fn kfold_splits_into_contiguous_equal_folds() {
        let pairs: Vec<_> = (0..12).map(|i| (0usize, i % 2 == 0)).collect();
        let s = Sample::new(pairs.clone(), 1).unwrap();
        let folds = kfold_split(&s, 3).unwrap();
        assert_eq!(folds.len(), 3);
        for (j, f) in folds.iter().enumerate() {
            assert_eq!(f.pairs(), &pairs[j * 4..(j + 1) * 4]);
        }
    }

    #[test]
    fn kfold_leave_one_out_and_divisibility() {
        let s = Sample::new(vec![(0, true); 4], 1).unwrap();
        let folds = kfold_split(&s, 4).unwrap();
        assert!(folds.iter().all(|f| f.len() == 1));

        let s = Sample::new(vec![(0, true); 10], 1).unwrap();
        assert!(matches!(kfold_split(&s, 3), Err(Error::InvalidKfold { .. })));
    }

    #[test]
    fn boolean_cube_matches_binary_counting_order() {
        let d = FiniteDomain::boolean_cube(2);
        assert_eq!(d.labels(), &["1", "2", "3", "4"]);
        assert_eq!(
            d.features().unwrap(),
            &[
                vec![false, false],
                vec![false, true],
                vec![true, false],
                vec![true, true]
            ]
        );
    }

    #[test]
    fn domain_rejects_duplicates_and_empty() {
        assert!(FiniteDomain::new(vec![]).is_err());
        assert!(FiniteDomain::new(vec!["x".into(), "x".into()]).is_err());
    }
}
