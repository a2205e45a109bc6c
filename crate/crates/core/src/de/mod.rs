//! Density evolution: thresholds of LDPC ensembles for syndrome decoding
//! over BSC-correlated sources, and a budgeted ensemble search.

mod density;
mod ensemble;
mod search;

pub use density::{de_converges, de_evolve, threshold, DeOutcome, DeParams, ThresholdReport};
pub use ensemble::DegreeDistribution;
pub use search::{baseline, search, SearchConfig, SearchOutcome};
