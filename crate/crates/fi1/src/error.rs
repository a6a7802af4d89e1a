//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Fi1Error {
    #[error("invalid triple ({0},{1},{2}): need a,b >= 0, a+b >= 1, -a <= p <= b")]
    InvalidTriple(i64, i64, i64),

    #[error("invalid idempotent point ({0},{1}): (0,0) is excluded")]
    InvalidPoint(u64, u64),

    #[error("word must be non-empty")]
    EmptyWord,

    #[error("invalid letter name {0:?}: expected [a-z][a-z0-9]*")]
    BadLetterName(String),

    #[error("letter {0:?} is not in the word's alphabet")]
    LetterNotInAlphabet(String),

    #[error("cannot parse {0:?} as {1}")]
    Parse(String, &'static str),

    #[error("no assignment for letter {0:?}")]
    UnassignedLetter(String),

    #[error("expected a non-idempotent element, got {0}")]
    IdempotentInput(String),

    #[error("generator set must be non-empty")]
    EmptyGenerators,

    #[error("generator {0} is an idempotent; idempotent generators go in the idems family")]
    IdempotentGenerator(String),

    #[error("box {got} too small: need at least {need}")]
    BoxTooSmall { got: u64, need: u64 },

    #[error("semilattice description disagrees with membership at point ({0},{1})")]
    CertificationFailed(u64, u64),

    #[error("deepening cap {0} exceeded while searching for structure witnesses")]
    DeepeningCapExceeded(u64),

    #[error("no symbol for idempotent point ({0},{1})")]
    MissingSymbol(u64, u64),

    #[error("idempotent ({0},{1}) is not in the subsemigroup generated by the non-idempotent generators")]
    NotInSbar(u64, u64),

    #[error("auxiliary letter {0:?} has no defining word over the presentation generators")]
    NoDefiningWord(String),

    #[error("relation words use letter {0:?} outside the presentation alphabet")]
    RelationLetter(String),
}

pub type Result<T> = std::result::Result<T, Fi1Error>;
