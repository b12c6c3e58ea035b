use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("weight {0:?} is not non-increasing")]
    NotDominant(Vec<i64>),
    #[error("weight of length {len} does not fit rank {rank}")]
    TooLong { len: usize, rank: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BundleError {
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error("bundles live on different Grassmannians: Gr({0},{1}) vs Gr({2},{3})")]
    Mismatch(usize, usize, usize, usize),
    #[error("plethysm unsupported: {0} applied to a composite expression")]
    Plethysm(&'static str),
    #[error("{0} is a complex, not a bundle")]
    NotABundle(String),
    #[error("invalid Grassmannian Gr({k},{n})")]
    BadGrassmannian { k: usize, n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivedError {
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error("Ext needed for the mutation is indeterminate: {0}")]
    Indeterminate(String),
    #[error("{0} is modelled only by its K-class")]
    ClassOnly(String),
    #[error("terms of {0} are not a chain-level presentation")]
    GradedOnly(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum G2Error {
    #[error("vectors are linearly dependent (rank {rank} < {expected})")]
    Dependent { rank: usize, expected: usize },
    #[error("expected a subspace of dimension {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("subspace is not a point of the Cayley Grassmannian")]
    NotOnCayley,
    #[error("q restricted to a Cayley point has rank {0}, which no orbit allows")]
    ImpossibleOrbit(usize),
    #[error("subspace is not closed under the bracket")]
    NotClosed,
    #[error("cannot contract: {0}")]
    Variance(&'static str),
    #[error("Segre input is degenerate: {0}")]
    Degenerate(&'static str),
}
