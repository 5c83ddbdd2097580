//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Covariate column has zero variance over the uncensored rows.
    #[error("column {0} is constant over the uncensored rows")]
    DegenerateColumn(usize),

    /// Fewer than two uncensored observations.
    #[error("need at least 2 uncensored observations, found {0}")]
    TooFewEvents(usize),

    /// A likelihood or density evaluation overflowed.
    #[error("non-finite result in {0}")]
    NonFiniteResult(&'static str),

    /// An iterative optimizer exhausted its budget.
    #[error("optimizer failed to converge: {0}")]
    NoConvergence(String),

    /// Argument outside the support of a transform.
    #[error("argument out of support: {0}")]
    OutOfSupport(String),

    /// Invalid distribution parameters.
    #[error("invalid distribution parameters: {0}")]
    InvalidParams(String),

    /// Truncation region is empty.
    #[error("empty truncation region: lower {lower} >= upper {upper}")]
    EmptyRegion { lower: f64, upper: f64 },

    /// Intersected Gibbs truncation bounds are empty; the chain state is
    /// corrupt and the run is aborted.
    #[error("infeasible truncation region for coefficient {index}: ({lower}, {upper})")]
    InfeasibleRegion {
        index: usize,
        lower: f64,
        upper: f64,
    },

    /// Chain state became non-finite.
    #[error("chain diverged at iteration {iteration}: {detail}")]
    ChainDiverged { iteration: usize, detail: String },

    /// Vector lengths disagree.
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    /// Selection AUC needs both classes present.
    #[error("selection truth contains only one class")]
    OneClassOnly,

    /// Concordance is undefined without comparable pairs.
    #[error("no comparable pairs for concordance")]
    NoComparablePairs,

    /// Matrix/vector dimensions disagree.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Malformed input data.
    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
