//! Reconciliation sessions, leakage accounting and Monte-Carlo experiments.
//!
//! A frame error is `x̂ ≠ x` as strings. Leakage is counted in disclosed
//! bits, which upper-bounds the information the conversation carries
//! about `x`.

mod sim;
mod transcript;

pub use sim::{
    rate_sweep, rate_sweep_with, reconcile_oneway, reconcile_shortened, run_trial, simulate,
    simulate_with, trial_seed, universality_sweep, universality_sweep_with, Scheme, Sequential,
    SimReport, TrialOutcome, TrialRunner, UniversalityReport,
};
pub use transcript::{key_reduction, Direction, LeakagePolicy, Message, MessageKind, Transcript};
