use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{Direction, MessageKind, Transcript};
use crate::cascade::{self, CascadeConfig};
use crate::domain::{BitString, JointDistribution};
use crate::ldpc::{DecodeResult, Shortening, SparseParityMatrix};
use crate::rng;
use crate::{Error, Result};

const FAMILY_ENTROPY_TOL: f64 = 1e-6;

/// Alice sends `M x`; Bob decodes with priors from `y`.
pub fn reconcile_oneway(
    x: &BitString,
    y: &BitString,
    matrix: &SparseParityMatrix,
    d: &JointDistribution,
    max_iters: usize,
) -> Result<(DecodeResult, Transcript)> {
    let shortening = Shortening::new(matrix, &[])?;
    reconcile_shortened(x, y, &shortening, d, max_iters)
}

/// One-way reconciliation where Alice also discloses the shortened
/// positions of `x` in the clear.
pub fn reconcile_shortened(
    x: &BitString,
    y: &BitString,
    shortening: &Shortening<'_>,
    d: &JointDistribution,
    max_iters: usize,
) -> Result<(DecodeResult, Transcript)> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            what: "side information",
            expected: x.len(),
            got: y.len(),
        });
    }
    let matrix_syndrome = shortening.matrix().syndrome(x)?;
    let revealed = shortening.reveal(x)?;
    let mut transcript = Transcript::new();
    transcript.push(
        Direction::AliceToBob,
        MessageKind::Syndrome,
        matrix_syndrome.as_slice().to_vec(),
    );
    if !revealed.is_empty() {
        transcript.push(Direction::AliceToBob, MessageKind::RevealedBits, revealed.clone());
    }
    let priors = d.priors(y)?;
    let result = shortening.decode(&matrix_syndrome, &priors, &revealed, max_iters)?;
    Ok((result, transcript))
}

/// A reconciliation scheme as run by the harness.
#[derive(Debug, Clone, Copy)]
pub enum Scheme<'a> {
    /// One-way syndrome coding, optionally shortened by disclosing a
    /// fraction of `x`.
    Ldpc {
        matrix: &'a SparseParityMatrix,
        max_iters: usize,
        reveal_fraction: f64,
    },
    /// Cascade; `k1 = None` picks the classical block size from `P_XY`.
    Cascade {
        passes: usize,
        k1: Option<usize>,
        growth: usize,
    },
}

impl Scheme<'_> {
    pub fn id(&self) -> &'static str {
        match self {
            Scheme::Ldpc { .. } => "ldpc",
            Scheme::Cascade { .. } => "cascade",
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        match *self {
            Scheme::Ldpc {
                matrix,
                max_iters,
                reveal_fraction,
            } => {
                if matrix.n() != n {
                    return Err(Error::LengthMismatch {
                        what: "matrix columns",
                        expected: n,
                        got: matrix.n(),
                    });
                }
                if max_iters == 0 {
                    return Err(Error::InvalidParameter("max_iters must be >= 1".into()));
                }
                if !(0.0..=1.0).contains(&reveal_fraction) {
                    return Err(Error::OutOfRange {
                        name: "reveal fraction",
                        value: reveal_fraction,
                        lo: 0.0,
                        hi: 1.0,
                    });
                }
            }
            Scheme::Cascade { passes, k1, growth } => {
                CascadeConfig::new(passes, k1.unwrap_or(1), growth, 0)?;
            }
        }
        Ok(())
    }
}

/// Result of one trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub frame_error: bool,
    /// Bob believes he succeeded but `x̂ ≠ x`.
    pub undetected: bool,
    pub leak_alice: usize,
    pub leak_total: usize,
    pub iterations: Option<usize>,
    /// Decoder claimed success; re-verified against the syndrome.
    pub converged: Option<bool>,
    /// `converged` agreed with an independent syndrome check.
    pub soundness_ok: bool,
}

/// Seed of trial `index` under `master_seed`. Depends on nothing else, so
/// swept configurations and family members share their samples.
pub fn trial_seed(master_seed: u64, index: usize) -> u64 {
    rng::derive(master_seed, index as u64)
}

pub fn run_trial(
    scheme: &Scheme<'_>,
    d: &JointDistribution,
    n: usize,
    master_seed: u64,
    index: usize,
) -> Result<TrialOutcome> {
    let seed = trial_seed(master_seed, index);
    let (x, y) = d.sample(n, seed)?;
    match *scheme {
        Scheme::Ldpc {
            matrix,
            max_iters,
            reveal_fraction,
        } => {
            let k = libm::round(reveal_fraction * n as f64) as usize;
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng::rng_from(rng::derive(seed, 1)));
            let shortening = Shortening::new(matrix, &order[..k.min(n)])?;
            let (result, transcript) = reconcile_shortened(&x, &y, &shortening, d, max_iters)?;
            let s = matrix.syndrome(&x)?;
            let soundness_ok = result.converged == matrix.satisfies(&result.estimate, &s);
            let frame_error = result.estimate != x;
            Ok(TrialOutcome {
                frame_error,
                undetected: frame_error && result.converged,
                leak_alice: transcript.alice_bits(),
                leak_total: transcript.total_bits(),
                iterations: Some(result.iterations),
                converged: Some(result.converged),
                soundness_ok,
            })
        }
        Scheme::Cascade { passes, k1, growth } => {
            let shuffle_seed = rng::derive(seed, 2);
            let cfg = match k1 {
                Some(k1) => CascadeConfig::new(passes, k1, growth, shuffle_seed)?,
                None => {
                    let classic = CascadeConfig::for_distribution(d, n, shuffle_seed)?;
                    CascadeConfig::new(passes, classic.k1, growth, shuffle_seed)?
                }
            };
            let out = cascade::run(&x, &y, &cfg)?;
            let frame_error = out.residual_errors > 0;
            Ok(TrialOutcome {
                frame_error,
                undetected: frame_error,
                leak_alice: out.transcript.alice_bits(),
                leak_total: out.transcript.total_bits(),
                iterations: None,
                converged: None,
                soundness_ok: true,
            })
        }
    }
}

/// Executes independent trials. Implementations may run them in any order
/// or in parallel but must return outcomes indexed by trial.
pub trait TrialRunner {
    fn run_trials<F>(&self, trials: usize, f: F) -> Result<Vec<TrialOutcome>>
    where
        F: Fn(usize) -> Result<TrialOutcome> + Sync + Send;
}

/// Runs trials one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl TrialRunner for Sequential {
    fn run_trials<F>(&self, trials: usize, f: F) -> Result<Vec<TrialOutcome>>
    where
        F: Fn(usize) -> Result<TrialOutcome> + Sync + Send,
    {
        (0..trials).map(f).collect()
    }
}

/// Aggregate statistics of one experiment configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub scheme: String,
    pub dist: String,
    pub distribution: JointDistribution,
    pub conditional_entropy: f64,
    pub n: usize,
    pub m: Option<usize>,
    pub reveal_fraction: Option<f64>,
    pub effective_rate: Option<f64>,
    pub trials: usize,
    pub frame_errors: usize,
    pub fer: f64,
    pub undetected: usize,
    pub mean_leak_alice: f64,
    pub mean_leak_total: f64,
    /// `mean_leak_alice / (n · H(X|Y))`; `None` when `H(X|Y) = 0`.
    pub efficiency: Option<f64>,
    pub mean_iterations: Option<f64>,
    /// Trials whose `converged` flag disagreed with an independent
    /// syndrome check. Always expected to be 0.
    pub soundness_violations: usize,
    pub seed: u64,
}

impl SimReport {
    pub fn aggregate(
        scheme: &Scheme<'_>,
        d: &JointDistribution,
        n: usize,
        seed: u64,
        outcomes: &[TrialOutcome],
    ) -> Result<SimReport> {
        let trials = outcomes.len();
        if trials == 0 {
            return Err(Error::InvalidParameter("trials must be >= 1".into()));
        }
        let t = trials as f64;
        let frame_errors = outcomes.iter().filter(|o| o.frame_error).count();
        let mean_leak_alice = outcomes.iter().map(|o| o.leak_alice as f64).sum::<f64>() / t;
        let mean_leak_total = outcomes.iter().map(|o| o.leak_total as f64).sum::<f64>() / t;
        let h = d.conditional_entropy();
        let iterations: Vec<usize> = outcomes.iter().filter_map(|o| o.iterations).collect();
        let (m, reveal_fraction, effective_rate) = match *scheme {
            Scheme::Ldpc {
                matrix,
                reveal_fraction,
                ..
            } => {
                let k = libm::round(reveal_fraction * n as f64);
                (
                    Some(matrix.m()),
                    Some(reveal_fraction),
                    Some((matrix.m() as f64 + k) / n as f64),
                )
            }
            Scheme::Cascade { .. } => (None, None, None),
        };
        Ok(SimReport {
            scheme: scheme.id().into(),
            dist: d.label(),
            distribution: *d,
            conditional_entropy: h,
            n,
            m,
            reveal_fraction,
            effective_rate,
            trials,
            frame_errors,
            fer: frame_errors as f64 / t,
            undetected: outcomes.iter().filter(|o| o.undetected).count(),
            mean_leak_alice,
            mean_leak_total,
            efficiency: (h > 0.0).then(|| mean_leak_alice / (n as f64 * h)),
            mean_iterations: (!iterations.is_empty())
                .then(|| iterations.iter().sum::<usize>() as f64 / iterations.len() as f64),
            soundness_violations: outcomes.iter().filter(|o| !o.soundness_ok).count(),
            seed,
        })
    }
}

pub fn simulate(
    scheme: &Scheme<'_>,
    d: &JointDistribution,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<SimReport> {
    simulate_with(&Sequential, scheme, d, n, trials, seed)
}

pub fn simulate_with<R: TrialRunner>(
    runner: &R,
    scheme: &Scheme<'_>,
    d: &JointDistribution,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<SimReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    if n == 0 {
        return Err(Error::EmptyBitString);
    }
    scheme.validate(n)?;
    let outcomes = runner.run_trials(trials, |i| run_trial(scheme, d, n, seed, i))?;
    SimReport::aggregate(scheme, d, n, seed, &outcomes)
}

/// Shortening sweep over one mother matrix. Trials share samples across
/// fractions, and the disclosed positions are nested: a larger fraction
/// reveals a superset of a smaller one.
pub fn rate_sweep(
    matrix: &SparseParityMatrix,
    d: &JointDistribution,
    reveal_fractions: &[f64],
    trials: usize,
    seed: u64,
    max_iters: usize,
) -> Result<Vec<SimReport>> {
    rate_sweep_with(&Sequential, matrix, d, reveal_fractions, trials, seed, max_iters)
}

pub fn rate_sweep_with<R: TrialRunner>(
    runner: &R,
    matrix: &SparseParityMatrix,
    d: &JointDistribution,
    reveal_fractions: &[f64],
    trials: usize,
    seed: u64,
    max_iters: usize,
) -> Result<Vec<SimReport>> {
    reveal_fractions
        .iter()
        .map(|&reveal_fraction| {
            let scheme = Scheme::Ldpc {
                matrix,
                max_iters,
                reveal_fraction,
            };
            simulate_with(runner, &scheme, d, matrix.n(), trials, seed)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniversalityReport {
    pub reports: Vec<SimReport>,
    /// `max fer − min fer` across the family.
    pub fer_spread: f64,
    /// `max H(X|Y) − min H(X|Y)` across the family.
    pub entropy_spread: f64,
}

/// Runs one matrix against every member of a family of distributions with
/// equal `H(X|Y)`, using the same trial seeds for each member.
pub fn universality_sweep(
    matrix: &SparseParityMatrix,
    family: &[JointDistribution],
    trials: usize,
    seed: u64,
    max_iters: usize,
) -> Result<UniversalityReport> {
    universality_sweep_with(&Sequential, matrix, family, trials, seed, max_iters)
}

pub fn universality_sweep_with<R: TrialRunner>(
    runner: &R,
    matrix: &SparseParityMatrix,
    family: &[JointDistribution],
    trials: usize,
    seed: u64,
    max_iters: usize,
) -> Result<UniversalityReport> {
    if family.is_empty() {
        return Err(Error::InvalidParameter("empty distribution family".into()));
    }
    let entropies: Vec<f64> = family.iter().map(|d| d.conditional_entropy()).collect();
    let entropy_spread = spread(&entropies);
    if entropy_spread > FAMILY_ENTROPY_TOL {
        return Err(Error::FamilyEntropyMismatch {
            spread: entropy_spread,
            limit: FAMILY_ENTROPY_TOL,
        });
    }
    let scheme = Scheme::Ldpc {
        matrix,
        max_iters,
        reveal_fraction: 0.0,
    };
    let reports = family
        .iter()
        .map(|d| simulate_with(runner, &scheme, d, matrix.n(), trials, seed))
        .collect::<Result<Vec<_>>>()?;
    let fers: Vec<f64> = reports.iter().map(|r| r.fer).collect();
    Ok(UniversalityReport {
        fer_spread: spread(&fers),
        entropy_spread,
        reports,
    })
}

fn spread(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    max - min
}

impl core::fmt::Display for SimReport {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let eff = self
            .efficiency
            .map_or_else(|| String::from("n/a"), |e| format!("{e:.4}"));
        write!(
            f,
            "{} {} n={} trials={} fer={:.4} undetected={} leak_alice={:.1} efficiency={}",
            self.scheme, self.dist, self.n, self.trials, self.fer, self.undetected,
            self.mean_leak_alice, eff
        )
    }
}
