//! Model selection over learning spaces of binary classifiers on finite domains.
//!
//! A *learning space* is a finite poset of models (subsets of the hypothesis
//! space of all labelings of a finite domain), graded by VC dimension. Nodes
//! are set partitions: the model of a partition contains every hypothesis that
//! is constant on each block, and its VC dimension is the number of blocks.
//!
//! The crate provides:
//!
//! * [`domain`] — finite domains, exact joint distributions, samples, and
//!   empirical measures;
//! * [`lattice`] — set-partition algebra and the partition / feature-selection
//!   learning spaces with their Hasse neighborhoods;
//! * [`learner`] — per-block empirical risk minimization under the 0-1 loss;
//! * [`estimators`] — hold-out, k-fold, and general train/validation-pair
//!   model-error estimators with a memoizing cache;
//! * [`search`] — the U-curve search for the simplest global minimum, an
//!   exhaustive oracle, and least-VC tie resolution;
//! * [`analysis`] — ground-truth targets, estimation-error decompositions,
//!   minimum classification, U-curve / lattice-convexity checkers, and Monte
//!   Carlo consistency experiments.
//!
//! All probabilities and losses are exact rationals so that ties between model
//! errors are decided exactly.

pub mod analysis;
pub mod domain;
pub mod error;
pub mod estimators;
pub mod lattice;
pub mod learner;
pub mod rational;
pub mod search;

pub use error::{Error, Result};
pub use rational::Rational;
