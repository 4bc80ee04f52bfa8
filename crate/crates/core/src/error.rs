use thiserror::Error;

use crate::matrix::ExchangeMatrix;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {0} is frozen and cannot be mutated")]
    FrozenVertex(usize),

    #[error("vertex index {index} out of range for {n} vertices")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid exchange matrix: {0}")]
    InvalidMatrix(String),

    #[error("matrix is not skew-symmetrizable by the given weights at ({i}, {j})")]
    NotSkewSymmetrizable { i: usize, j: usize },

    #[error("integer overflow while mutating at vertex {0}")]
    Overflow(usize),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("permutation {0} does not preserve the frozen set")]
    FrozenNotPreserved(String),

    #[error("permutation {0} does not preserve vertex weights")]
    WeightsNotPreserved(String),

    #[error("word is not a mutation loop: final matrix differs from the initial one")]
    NotALoop {
        initial: Box<ExchangeMatrix>,
        fin: Box<ExchangeMatrix>,
    },

    #[error("mutation class exceeds the cap of {0} matrices")]
    CapExceeded(usize),

    #[error("edge orbit at class {class}, vertex {k} is inverted by an element of the group")]
    InvertedEdge { class: usize, k: usize },

    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("word does not lie in the subgroup: {0}")]
    NotInSubgroup(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }
}
