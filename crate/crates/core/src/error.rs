use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("{0} is not a semigroup element (negative coordinate)")]
    NotSemigroup(String),

    #[error("alphabet sizes must lie in 2..=36, got {0}")]
    InvalidAlphabet(usize),

    #[error("a shift system needs at least one factor")]
    EmptySystem,

    #[error("symbol {symbol} out of range for alphabet of size {alphabet}")]
    InvalidSymbol { symbol: char, alphabet: usize },

    #[error("word {word} is shorter than the required depth {required:?}")]
    WordTooShort { word: String, required: Vec<usize> },

    #[error("cannot lower depth from {from:?} to {to:?}")]
    DepthDecrease { from: Vec<usize>, to: Vec<usize> },

    #[error("table of {len} entries does not match depth {depth:?} (expected {expected})")]
    TableShape {
        depth: Vec<usize>,
        len: usize,
        expected: usize,
    },

    #[error("table for depth {0:?} would be too large")]
    TableTooLarge(Vec<usize>),

    #[error("operands live on different shift systems")]
    SystemMismatch,

    #[error("expected {expected} generator tables, found {found}")]
    GeneratorCount { expected: usize, found: usize },

    #[error(
        "cocycle extension to level {level} depends on the factorization: \
         orders {first:?} and {second:?} disagree at word {word}"
    )]
    InconsistentExtension {
        level: String,
        first: Vec<usize>,
        second: Vec<usize>,
        word: String,
    },

    #[error("word {lift} is not a level-{level} lift of {base}")]
    NotALift {
        base: String,
        level: String,
        lift: String,
    },

    #[error("weight vanishes at {0}; index is infinite")]
    ZeroWeight(String),

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("row {row} is not a probability vector: {reason}")]
    NotProbability { row: String, reason: String },

    #[error("kernel is not a conditional expectation: {0}")]
    NotConditionalExpectation(String),

    #[error("invalid piecewise-linear cocycle: {0}")]
    InvalidPiecewise(String),

    #[error("|x| = {modulus} is not 1")]
    NonUnitModulus { modulus: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}
