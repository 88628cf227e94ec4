use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty sample has no empirical measure")]
    EmptySample,
    #[error("holdout split requires 0 < validation size < sample size (got v_n={v_n}, n={n})")]
    InvalidHoldout { v_n: usize, n: usize },
    #[error("k-fold requires k >= 2 and k dividing the sample size (got k={k}, n={n})")]
    InvalidKfold { k: usize, n: usize },
    #[error("partitions belong to different domains ({left} vs {right} points)")]
    DomainMismatch { left: usize, right: usize },
    #[error("node is not a member of the learning space: {0}")]
    NodeOutsideSpace(String),
    #[error("domain points carry no feature vectors")]
    MissingFeatures,
    #[error("feature index {index} outside 1..={width}")]
    FeatureOutOfRange { index: usize, width: usize },
    #[error("invalid estimator for this sample: {0}")]
    InvalidEstimator(String),
    #[error("probability table does not sum to 1 (sum = {0})")]
    NotNormalized(String),
    #[error("invalid partition encoding {encoding:?}: {reason}")]
    BadEncoding { encoding: String, reason: String },
    #[error("space too large to enumerate here ({nodes} nodes, limit {limit})")]
    InfeasibleSpace { nodes: usize, limit: usize },
    #[error("cost table is missing a node: {0}")]
    MissingCost(String),
    #[error("global minima carry distinct estimates ({0} vs {1})")]
    UnequalMinima(String, String),
    #[error("selected node has {blocks} blocks; the exact supremum is capped at {cap} blocks")]
    TypeICapExceeded { blocks: usize, cap: usize },
    #[error("{0}")]
    InvalidInput(String),
}
