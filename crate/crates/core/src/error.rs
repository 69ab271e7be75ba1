use thiserror::Error;

use crate::ground::Element;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("exchange ({0:?}, {1:?}) is not feasible")]
    InfeasibleExchange(Element, Element),

    #[error("basis pairs are not compatible (unions differ)")]
    IncompatiblePairs,

    #[error("invalid basis pair: {0}")]
    InvalidPair(String),

    #[error("edge classes do not form two spanning trees")]
    NotAColoring,

    #[error("colorings do not have the same orientation")]
    OrientationMismatch,

    #[error("solver precondition violated: {0}")]
    Precondition(String),

    #[error("internal bound violated: {0}")]
    InternalBound(String),

    #[error("invalid parameter: {0}")]
    Domain(String),

    #[error("instance too large for exhaustive search ({size} > limit {limit})")]
    TooLarge { size: usize, limit: usize },

    #[error("no witness found")]
    NotFound,

    #[error("no completion sequence found")]
    CompletionNotFound,

    #[error("set is not a basis")]
    NotABasis,

    #[error("bijection union graph is not bipartite")]
    NotBipartite,
}

pub type Result<T> = std::result::Result<T, Error>;
