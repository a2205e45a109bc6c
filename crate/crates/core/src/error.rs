use alloc::string::String;
use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} is outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("invalid joint distribution: {0}")]
    InvalidDistribution(String),
    #[error("observation y = {0} has zero probability")]
    ImpossibleObservation(u8),
    #[error("no b in [0, 1/2] gives H(X|Y) = {target} with a = {a}")]
    NoSolution { target: f64, a: f64 },
    #[error("bit strings must be nonempty")]
    EmptyBitString,
    #[error("invalid bit value {value} at position {index}")]
    InvalidBit { index: usize, value: u8 },
    #[error("{what}: expected length {expected}, got {got}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid parity-check matrix: {0}")]
    InvalidMatrix(String),
    #[error("exhaustive search supports n <= {max}, got {n}")]
    TooLarge { n: usize, max: usize },
    #[error("syndrome is inconsistent with the matrix: no string satisfies it")]
    InconsistentSyndrome,
    #[error("infeasible degree sequence: {0}")]
    InfeasibleDegrees(String),
    #[error("invalid degree distribution: {0}")]
    InvalidDegreeDistribution(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("family conditional entropies differ by {spread:e} (limit {limit:e})")]
    FamilyEntropyMismatch { spread: f64, limit: f64 },
}
