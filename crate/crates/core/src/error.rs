use thiserror::Error;

use crate::algebra::RingLevel;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot reduce a complex over {from} to {to}")]
    InvalidReduction { from: RingLevel, to: RingLevel },

    #[error("cannot lift a complex over {from} to {to}")]
    InvalidLift { from: RingLevel, to: RingLevel },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),

    #[error("invalid sign sequence: {0}")]
    InvalidSequence(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("forced arrow count {added} exceeds the bound {bound}")]
    ArrowBudgetExceeded { added: usize, bound: usize },

    #[error("sequence is not partially realizable")]
    NotRealizable,

    #[error("extension C({n1} | ... | -{n2}) is not partially realizable")]
    ExtensionTooShort { n1: u32, n2: u32 },

    #[error("gluing placement failed: {0}")]
    Placement(String),

    #[error("oracle search space too large: {candidates} candidates exceeds cap {cap}")]
    OracleTooLarge { candidates: usize, cap: usize },

    #[error("render error: {0}")]
    Render(String),

    #[error("internal error in stage `{stage}`: {message}")]
    Internal { stage: &'static str, message: String },

    #[error("malformed complex document: {0}")]
    Document(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
