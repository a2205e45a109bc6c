use rayon::prelude::*;
use syndrec_core::session::{TrialOutcome, TrialRunner};
use syndrec_core::Result;

/// Runs trials on the rayon thread pool. Outcomes come back in trial order,
/// so reports are identical to sequential runs.
#[derive(Debug, Clone, Copy, Default)]
pub struct Parallel;

impl TrialRunner for Parallel {
    fn run_trials<F>(&self, trials: usize, f: F) -> Result<Vec<TrialOutcome>>
    where
        F: Fn(usize) -> Result<TrialOutcome> + Sync + Send,
    {
        (0..trials).into_par_iter().map(f).collect()
    }
}
