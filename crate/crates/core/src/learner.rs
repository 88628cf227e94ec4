//! Per-block empirical risk minimization and exact 0-1 losses.

use num_traits::Zero;

use crate::domain::{EmpiricalMeasure, JointDistribution};
use crate::error::{Error, Result};
use crate::lattice::Partition;
use crate::rational::Rational;

/// Deterministic resolution of majority-vote ties (and of blocks with zero
/// training mass, where the majority is undefined).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TieRule {
    #[default]
    PreferOne,
    PreferZero,
}

impl TieRule {
    fn tie_label(self) -> bool {
        matches!(self, TieRule::PreferOne)
    }
}

/// A total binary labeling of the domain.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hypothesis {
    labels: Vec<bool>,
}

impl std::fmt::Debug for Hypothesis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let bits: String = self
            .labels
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect();
        write!(f, "Hypothesis({bits})")
    }
}

impl Hypothesis {
    pub fn new(labels: Vec<bool>) -> Self {
        assert!(!labels.is_empty());
        Self { labels }
    }

    pub fn constant(label: bool, n_points: usize) -> Self {
        Self::new(vec![label; n_points])
    }

    pub fn n_points(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, point: usize) -> bool {
        self.labels[point]
    }

    pub fn labels(&self) -> &[bool] {
        &self.labels
    }

    /// True iff the hypothesis is constant on every block of the partition.
    pub fn respects(&self, node: &Partition) -> bool {
        node.blocks()
            .iter()
            .all(|b| b.iter().all(|&p| self.labels[p] == self.labels[b[0]]))
    }

    /// All `2^k` hypotheses respecting the node, by block labeling.
    pub fn enumerate_on(node: &Partition) -> Vec<Hypothesis> {
        let k = node.block_count();
        assert!(k <= 24, "too many blocks to enumerate");
        (0u32..(1 << k))
            .map(|mask| {
                Hypothesis::new(
                    (0..node.n_points())
                        .map(|p| mask >> node.block_of(p) & 1 == 1)
                        .collect(),
                )
            })
            .collect()
    }
}

/// The ERM hypothesis of the node's model: per-block majority label under the
/// training measure, ties and empty blocks resolved by the tie rule.
pub fn erm_on_partition(
    node: &Partition,
    measure: &EmpiricalMeasure,
    tie: TieRule,
) -> Result<Hypothesis> {
    if node.n_points() != measure.n_points() {
        return Err(Error::DomainMismatch {
            left: node.n_points(),
            right: measure.n_points(),
        });
    }
    let mut block_mass = vec![[0u64; 2]; node.block_count()];
    for p in 0..node.n_points() {
        block_mass[node.block_of(p)][0] += measure.count(p, false);
        block_mass[node.block_of(p)][1] += measure.count(p, true);
    }
    let block_labels: Vec<bool> = block_mass
        .iter()
        .map(|[c0, c1]| match c1.cmp(c0) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => tie.tie_label(),
        })
        .collect();
    Ok(Hypothesis::new(
        (0..node.n_points())
            .map(|p| block_labels[node.block_of(p)])
            .collect(),
    ))
}

/// Mean 0-1 loss of the hypothesis under the empirical measure.
pub fn empirical_loss(h: &Hypothesis, measure: &EmpiricalMeasure) -> Rational {
    assert_eq!(h.n_points(), measure.n_points());
    let mismatches: u64 = (0..h.n_points())
        .map(|p| measure.count(p, !h.label(p)))
        .sum();
    Rational::new(mismatches.into(), measure.total().into())
}

/// Exact classification error under the joint distribution.
pub fn true_loss(h: &Hypothesis, dist: &JointDistribution) -> Rational {
    assert_eq!(h.n_points(), dist.n_points());
    let mut loss = Rational::zero();
    for p in 0..h.n_points() {
        loss += dist.prob(p, !h.label(p));
    }
    loss
}

/// The model error of a node: its per-block Bayes labeling under the
/// distribution together with that labeling's exact loss, minimal over all
/// hypotheses respecting the node.
pub fn best_in_model(node: &Partition, dist: &JointDistribution) -> Result<(Hypothesis, Rational)> {
    if node.n_points() != dist.n_points() {
        return Err(Error::DomainMismatch {
            left: node.n_points(),
            right: dist.n_points(),
        });
    }
    let mut block_mass = vec![[Rational::zero(), Rational::zero()]; node.block_count()];
    for p in 0..node.n_points() {
        block_mass[node.block_of(p)][0] += dist.prob(p, false);
        block_mass[node.block_of(p)][1] += dist.prob(p, true);
    }
    let block_labels: Vec<bool> = block_mass.iter().map(|[m0, m1]| m1 >= m0).collect();
    let h = Hypothesis::new(
        (0..node.n_points())
            .map(|p| block_labels[node.block_of(p)])
            .collect(),
    );
    let loss = true_loss(&h, dist);
    Ok((h, loss))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::fixtures::{train_sample, val_sample};
    use crate::domain::{empirical_measure, JointDistribution};
    use crate::lattice::Partition;
    use crate::rational::ratio;

    fn node(blocks: &[&[usize]]) -> Partition {
        Partition::from_blocks(&blocks.iter().map(|b| b.to_vec()).collect::<Vec<_>>(), 4).unwrap()
    }

    fn hyp(bits: [u8; 4]) -> Hypothesis {
        Hypothesis::new(bits.iter().map(|&b| b == 1).collect())
    }

    #[test]
    fn erm_on_the_meet_is_the_constant_one_hypothesis() {
        // Block {a1,a2,a3}: mass 0.21 vs 0.29; block {b}: 0.2 vs 0.3.
        let m = empirical_measure(&train_sample()).unwrap();
        let h = erm_on_partition(&node(&[&[0, 1, 2], &[3]]), &m, TieRule::PreferOne).unwrap();
        assert_eq!(h, hyp([1, 1, 1, 1]));
    }

    #[test]
    fn erm_on_pi1_matches_the_published_column() {
        let m = empirical_measure(&train_sample()).unwrap();
        let h = erm_on_partition(&node(&[&[0, 1], &[2], &[3]]), &m, TieRule::PreferOne).unwrap();
        assert_eq!(h, hyp([0, 0, 1, 1]));
    }

    #[test]
    fn erm_ties_go_to_the_tie_rule() {
        let s = crate::domain::Sample::new(vec![(0, false), (0, true)], 1).unwrap();
        let m = empirical_measure(&s).unwrap();
        let one = erm_on_partition(&Partition::coarsest(1), &m, TieRule::PreferOne).unwrap();
        assert_eq!(one.labels(), &[true]);
        let zero = erm_on_partition(&Partition::coarsest(1), &m, TieRule::PreferZero).unwrap();
        assert_eq!(zero.labels(), &[false]);
    }

    #[test]
    fn zero_mass_blocks_get_the_tie_label() {
        // Point 1 never observed.
        let s = crate::domain::Sample::new(vec![(0, false), (0, false)], 2).unwrap();
        let m = empirical_measure(&s).unwrap();
        let h = erm_on_partition(&Partition::singletons(2), &m, TieRule::PreferOne).unwrap();
        assert_eq!(h.labels(), &[false, true]);
    }

    #[test]
    fn validation_losses_match_the_published_values() {
        let m = empirical_measure(&val_sample()).unwrap();
        assert_eq!(empirical_loss(&hyp([1, 1, 1, 1]), &m), ratio(48, 100));
        assert_eq!(empirical_loss(&hyp([0, 1, 1, 1]), &m), ratio(33, 100));
        assert_eq!(empirical_loss(&hyp([0, 0, 1, 1]), &m), ratio(44, 100));
        assert_eq!(empirical_loss(&hyp([0, 1, 0, 1]), &m), ratio(41, 100));
    }

    #[test]
    fn perfect_fit_has_zero_empirical_loss() {
        let s = crate::domain::Sample::new(vec![(0, true), (1, false), (0, true)], 2).unwrap();
        let m = empirical_measure(&s).unwrap();
        let h = Hypothesis::new(vec![true, false]);
        assert_eq!(empirical_loss(&h, &m), ratio(0, 1));
    }

    /// Joint of uniform X on {1,2} with P(Y=1|1) = 0.9, P(Y=1|2) = 0.1.
    fn skewed_two_point() -> JointDistribution {
        JointDistribution::from_weights(&[[1, 9], [9, 1]]).unwrap()
    }

    #[test]
    fn true_loss_agrees_with_full_hypothesis_enumeration() {
        let dist = skewed_two_point();
        let mut losses: Vec<(Hypothesis, Rational)> =
            Hypothesis::enumerate_on(&Partition::singletons(2))
                .into_iter()
                .map(|h| {
                    let l = true_loss(&h, &dist);
                    (h, l)
                })
                .collect();
        losses.sort_by(|a, b| a.1.cmp(&b.1));
        assert_eq!(losses[0].0.labels(), &[true, false]);
        assert_eq!(losses[0].1, ratio(1, 10));
        let const1 = Hypothesis::constant(true, 2);
        assert_eq!(true_loss(&const1, &dist), ratio(1, 2));
    }

    #[test]
    fn true_loss_zero_for_a_realizable_target() {
        let dist = JointDistribution::from_weights(&[[0, 1], [0, 1]]).unwrap();
        assert_eq!(true_loss(&Hypothesis::constant(true, 2), &dist), ratio(0, 1));
    }

    #[test]
    fn best_in_model_minimizes_over_block_labelings() {
        let dist = skewed_two_point();
        let (_, coarse_loss) = best_in_model(&Partition::coarsest(2), &dist).unwrap();
        assert_eq!(coarse_loss, ratio(1, 2));
        let (h, fine_loss) = best_in_model(&Partition::singletons(2), &dist).unwrap();
        assert_eq!(fine_loss, ratio(1, 10));
        assert_eq!(h.labels(), &[true, false]);
        // Oracle: brute force over every hypothesis respecting each node.
        for node in crate::lattice::PartitionIter::new(2) {
            let (_, claimed) = best_in_model(&node, &dist).unwrap();
            let brute = Hypothesis::enumerate_on(&node)
                .into_iter()
                .map(|h| true_loss(&h, &dist))
                .min()
                .unwrap();
            assert_eq!(claimed, brute);
        }
    }

    #[test]
    fn deterministic_distribution_respected_by_node_gives_zero_loss() {
        // Y = 1{X = point 0}, node separating point 0 from the rest.
        let dist = JointDistribution::from_weights(&[[0, 1], [1, 0], [1, 0]]).unwrap();
        let node = Partition::from_blocks(&[vec![0], vec![1, 2]], 3).unwrap();
        let (_, loss) = best_in_model(&node, &dist).unwrap();
        assert_eq!(loss, ratio(0, 1));
    }

    #[test]
    fn refinement_never_increases_in_sample_erm_error() {
        let m = empirical_measure(&train_sample()).unwrap();
        let nodes: Vec<Partition> = crate::lattice::PartitionIter::new(4).collect();
        for a in &nodes {
            for b in &nodes {
                if a.leq(b).unwrap() {
                    let la = empirical_loss(&erm_on_partition(a, &m, TieRule::PreferOne).unwrap(), &m);
                    let lb = empirical_loss(&erm_on_partition(b, &m, TieRule::PreferOne).unwrap(), &m);
                    assert!(lb <= la, "{a:?} -> {b:?}");
                }
            }
        }
    }

    #[test]
    fn erm_is_the_exact_minimizer_by_brute_force() {
        let m = empirical_measure(&train_sample()).unwrap();
        for node in crate::lattice::PartitionIter::new(4) {
            let h = erm_on_partition(&node, &m, TieRule::PreferOne).unwrap();
            let best = Hypothesis::enumerate_on(&node)
                .into_iter()
                .map(|g| empirical_loss(&g, &m))
                .min()
                .unwrap();
            assert_eq!(empirical_loss(&h, &m), best, "node {node:?}");
        }
    }

    #[test]
    fn splitting_a_block_flips_at_most_one_child_label() {
        let m = empirical_measure(&train_sample()).unwrap();
        for node in crate::lattice::PartitionIter::new(4) {
            let parent = erm_on_partition(&node, &m, TieRule::PreferOne).unwrap();
            for split in crate::lattice::LearningSpace::full_partition_lattice(
                &crate::domain::fixtures::four_point_domain(),
            )
            .up_neighbors(&node)
            .unwrap()
            {
                let child = erm_on_partition(&split, &m, TieRule::PreferOne).unwrap();
                let changed: Vec<usize> =
                    (0..4).filter(|&p| parent.label(p) != child.label(p)).collect();
                // Changed points must all lie in a single child block.
                if !changed.is_empty() {
                    let b = split.block_of(changed[0]);
                    assert!(changed.iter().all(|&p| split.block_of(p) == b));
                }
            }
        }
    }
}
