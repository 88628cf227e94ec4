//! Property tests over the partition algebra, splits, ERM, and search.

use proptest::prelude::*;

use ucurve_core::analysis::{check_lattice_convexity, check_ucurve, CostTable, UcurveStrength};
use ucurve_core::domain::{empirical_measure, kfold_split, FiniteDomain, Sample};
use ucurve_core::estimators::{estimate, EstimatorSpec};
use ucurve_core::lattice::{LearningSpace, Partition};
use ucurve_core::learner::{empirical_loss, erm_on_partition, TieRule};
use ucurve_core::rational::ratio;

fn partition_strategy(n: usize) -> impl Strategy<Value = Partition> {
    prop::collection::vec(0..n as u8, n).prop_map(|v| Partition::from_assignment(&v))
}

fn pair_strategy() -> impl Strategy<Value = (Partition, Partition)> {
    (2usize..=5).prop_flat_map(|n| (partition_strategy(n), partition_strategy(n)))
}

proptest! {
    #[test]
    fn meet_join_laws((a, b) in pair_strategy()) {
        let meet = a.meet(&b).unwrap();
        let join = a.join(&b).unwrap();
        // Commutativity.
        prop_assert_eq!(&meet, &b.meet(&a).unwrap());
        prop_assert_eq!(&join, &b.join(&a).unwrap());
        // Bounds.
        prop_assert!(meet.leq(&a).unwrap() && meet.leq(&b).unwrap());
        prop_assert!(a.leq(&join).unwrap() && b.leq(&join).unwrap());
        // Absorption.
        prop_assert_eq!(&a, &a.join(&meet).unwrap());
        prop_assert_eq!(&a, &a.meet(&join).unwrap());
        // Extremality of the meet: any common lower bound lies below it.
        let n = a.n_points();
        for c in ucurve_core::lattice::PartitionIter::new(n) {
            if c.leq(&a).unwrap() && c.leq(&b).unwrap() {
                prop_assert!(c.leq(&meet).unwrap());
            }
            if a.leq(&c).unwrap() && b.leq(&c).unwrap() {
                prop_assert!(join.leq(&c).unwrap());
            }
        }
    }

    #[test]
    fn associativity((a, b) in pair_strategy(), c_raw in prop::collection::vec(0..5u8, 5)) {
        let c = Partition::from_assignment(&c_raw[..a.n_points()]);
        let m1 = a.meet(&b).unwrap().meet(&c).unwrap();
        let m2 = a.meet(&b.meet(&c).unwrap()).unwrap();
        prop_assert_eq!(m1, m2);
        let j1 = a.join(&b).unwrap().join(&c).unwrap();
        let j2 = a.join(&b.join(&c).unwrap()).unwrap();
        prop_assert_eq!(j1, j2);
    }

    #[test]
    fn order_agrees_with_meet_and_join((a, b) in pair_strategy()) {
        let leq = a.leq(&b).unwrap();
        prop_assert_eq!(leq, a.meet(&b).unwrap() == a);
        prop_assert_eq!(leq, a.join(&b).unwrap() == b);
    }

    #[test]
    fn kfold_folds_partition_the_sample(
        fold_size in 1usize..6,
        k in 2usize..6,
        labels in prop::collection::vec(any::<bool>(), 30),
    ) {
        let n = fold_size * k;
        let pairs: Vec<(usize, bool)> = labels.iter().cycle().take(n).map(|&y| (0usize, y)).collect();
        let sample = Sample::new(pairs.clone(), 1).unwrap();
        let folds = kfold_split(&sample, k).unwrap();
        prop_assert_eq!(folds.len(), k);
        let rebuilt: Vec<(usize, bool)> = folds.iter().flat_map(|f| f.pairs().to_vec()).collect();
        prop_assert_eq!(rebuilt, pairs);
        prop_assert!(folds.iter().all(|f| f.len() == fold_size));
    }

    #[test]
    fn erm_in_sample_error_is_monotone_under_refinement(
        (a, b) in pair_strategy(),
        draws in prop::collection::vec((0usize..5, any::<bool>()), 1..40),
    ) {
        let n = a.n_points();
        let pairs: Vec<(usize, bool)> = draws.into_iter().map(|(p, y)| (p % n, y)).collect();
        let sample = Sample::new(pairs, n).unwrap();
        let m = empirical_measure(&sample).unwrap();
        if a.leq(&b).unwrap() {
            let la = empirical_loss(&erm_on_partition(&a, &m, TieRule::PreferOne).unwrap(), &m);
            let lb = empirical_loss(&erm_on_partition(&b, &m, TieRule::PreferOne).unwrap(), &m);
            prop_assert!(lb <= la);
        }
    }

    #[test]
    fn estimates_stay_within_the_unit_interval(
        p in partition_strategy(4),
        draws in prop::collection::vec((0usize..4, any::<bool>()), 8..40),
        v_frac in 1usize..4,
    ) {
        let sample = Sample::new(draws, 4).unwrap();
        let v_n = (sample.len() * v_frac / 4).max(1).min(sample.len() - 1);
        let e = estimate(&p, &sample, &EstimatorSpec::holdout(v_n)).unwrap();
        prop_assert!(e.value >= ratio(0, 1));
        prop_assert!(e.value <= ratio(1, 1));
        let mean: ucurve_core::Rational = e.per_pair.iter().map(|(_, l)| l.clone()).sum::<ucurve_core::Rational>()
            / ucurve_core::rational::from_count(e.per_pair.len() as u64);
        prop_assert_eq!(mean, e.value);
    }
}

/// Convexity implies the weak U-curve property (checked, never assumed): any
/// random cost table that happens to satisfy the diamond inequality on the
/// feature cube must pass the chain check.
#[test]
fn convexity_implies_weak_ucurve_on_random_tables() {
    use rand::{Rng, SeedableRng};
    let domain = FiniteDomain::boolean_cube(4);
    let space = LearningSpace::feature_lattice(&domain).unwrap();
    let nodes: Vec<Partition> = space.enumerate().collect();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
    let mut convex_seen = 0;
    for trial in 0..120 {
        let costs: CostTable = if trial % 2 == 0 {
            // Fully random tables; most will fail the diamond inequality.
            nodes
                .iter()
                .map(|n| (n.clone(), ratio(rng.random_range(0..100), 100)))
                .collect()
        } else {
            // Convex-in-cardinality tables satisfy it by construction.
            let base: i64 = rng.random_range(0..20);
            let slope: i64 = rng.random_range(-5..5);
            let curve: i64 = rng.random_range(0..4);
            nodes
                .iter()
                .map(|n| {
                    let k = (n.block_count() as f64).log2() as i64;
                    (n.clone(), ratio(60 + base + slope * k + curve * k * k, 100))
                })
                .collect()
        };
        let report = check_lattice_convexity(&costs, &space).unwrap();
        assert!(report.u_curve_compatible);
        if report.holds() {
            convex_seen += 1;
            assert!(
                check_ucurve(&costs, &space, UcurveStrength::Weak).unwrap().holds(),
                "trial {trial}: convex table violating the weak U-curve property"
            );
        }
    }
    assert!(convex_seen >= 40, "only {convex_seen} convex tables seen");
}

/// The shared types are immutable values usable across threads.
#[test]
fn core_types_are_send_and_sync() {
    fn check<T: Send + Sync>() {}
    check::<FiniteDomain>();
    check::<ucurve_core::domain::JointDistribution>();
    check::<Sample>();
    check::<ucurve_core::domain::EmpiricalMeasure>();
    check::<Partition>();
    check::<LearningSpace>();
    check::<ucurve_core::learner::Hypothesis>();
    check::<EstimatorSpec>();
}

/// The Hasse graph of every emitted space grades strictly by block count
/// along any upward step.
#[test]
fn hasse_steps_always_add_exactly_one_block() {
    let domain = FiniteDomain::boolean_cube(2);
    let spaces = [
        LearningSpace::full_partition_lattice(&domain),
        LearningSpace::feature_lattice(&domain).unwrap(),
        LearningSpace::vc_restricted(&domain, 2),
    ];
    // Feature and restricted spaces may skip levels; the full lattice never
    // does.
    for node in spaces[0].enumerate() {
        for up in spaces[0].up_neighbors(&node).unwrap() {
            assert_eq!(up.block_count(), node.block_count() + 1);
        }
    }
    for space in &spaces[1..] {
        for node in space.enumerate() {
            for up in space.up_neighbors(&node).unwrap() {
                assert!(node.leq(&up).unwrap() && up.block_count() > node.block_count());
            }
        }
    }
}
