use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{rows}x{cols} matrix cannot hold {len} entries")]
    Shape { rows: usize, cols: usize, len: usize },

    #[error("matrix rows have unequal lengths")]
    RaggedRows,

    #[error("{op}: incompatible dimensions {left:?} and {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("monomial masks (gamma {gamma_mask:#b}, delta {delta_mask:#b}) exceed n={n}, a={a}")]
    MaskOutOfRange {
        gamma_mask: u32,
        delta_mask: u32,
        n: u32,
        a: u32,
    },

    #[error("lambda must be a power of two, got {0}")]
    InvalidLambda(usize),

    #[error("number of groups must be at least 1")]
    InvalidGroupCount,

    #[error("invalid weight array: {0}")]
    InvalidArray(String),

    #[error("invalid slot design: {0}")]
    InvalidSlot(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("representation is missing the image of {0}")]
    IncompleteRepresentation(String),

    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("constellation of group {0} is empty")]
    EmptyConstellation(usize),

    #[error("group {group} has {expected} variables but its constellation points have dimension {got}")]
    ConstellationDim { group: usize, expected: usize, got: usize },

    #[error("exhaustive search over {0} codewords exceeds the configured limit")]
    ExhaustiveTooLarge(u128),
}
