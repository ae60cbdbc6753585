use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("field order {order} exceeds the supported budget of {budget}")]
    Capacity { order: u64, budget: u64 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("databases {subset:?} do not determine the messages (stacked rank {rank} < {needed})")]
    Decode {
        subset: Vec<usize>,
        rank: usize,
        needed: usize,
    },

    #[error("message {k_star} symbol {symbol} is not recoverable from the answers for f={f}")]
    Reconstruction { k_star: usize, f: u32, symbol: usize },

    #[error(
        "coefficient search failed after {attempts} attempts (largest field {largest_field}): \
         {failing_subsets} failing subsets, {singular_blocks} singular coefficient blocks in the last sample"
    )]
    SearchFailure {
        attempts: u64,
        largest_field: u32,
        failing_subsets: usize,
        singular_blocks: usize,
    },

    #[error("family `{0}` has no built-in retrieval scheme")]
    UnsupportedFamily(String),

    #[error("schema error: {0}")]
    Schema(String),
}

pub(crate) fn param(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}
