//! Population-dynamics density evolution for BSC-correlated sources.
//!
//! With uniform `X` and a symmetric `P(Y|X)`, the decoder's error behavior
//! does not depend on which coset `{x : M x = s}` the source lies in, so the
//! syndrome decoder can be analyzed on the all-zero word with zero
//! syndrome. That is ordinary channel-coding density evolution over a BSC,
//! which is what this module runs.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::DegreeDistribution;
use crate::domain::{clip_llr, LLR_MAX};
use crate::rng::{self, Rng};
use crate::{Error, Result};

/// Sampling budget and stopping rule for one density-evolution run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeParams {
    /// Number of message samples representing each density.
    pub population: usize,
    /// Convergence is declared when the estimated bit error rate drops
    /// below this.
    pub eps: f64,
    pub max_iters: usize,
    /// Seed shared by every probe (common random numbers across `p`).
    pub seed: u64,
}

impl Default for DeParams {
    fn default() -> Self {
        DeParams {
            population: 100_000,
            eps: 1e-4,
            max_iters: 500,
            seed: 0x5EED_DE00,
        }
    }
}

impl DeParams {
    fn validate(&self) -> Result<()> {
        if self.population == 0 || self.max_iters == 0 || self.eps.is_nan() || self.eps <= 0.0 {
            return Err(Error::InvalidParameter(alloc::format!(
                "density evolution needs population, max_iters and eps > 0, got {self:?}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeOutcome {
    pub converged: bool,
    pub iterations: usize,
    /// Estimated bit error rate after the last iteration.
    pub error_rate: f64,
}

struct DegreeSampler {
    degrees: Vec<usize>,
    cumulative: Vec<f64>,
}

impl DegreeSampler {
    fn new(weights: &[(usize, f64)]) -> Self {
        let mut acc = 0.0;
        let mut cumulative = Vec::with_capacity(weights.len());
        for &(_, w) in weights {
            acc += w;
            cumulative.push(acc);
        }
        DegreeSampler {
            degrees: weights.iter().map(|&(d, _)| d).collect(),
            cumulative,
        }
    }

    #[inline]
    fn sample(&self, rng: &mut Rng) -> usize {
        let u = rng::unit(rng) * self.cumulative[self.cumulative.len() - 1];
        let k = self
            .cumulative
            .iter()
            .position(|&c| u < c)
            .unwrap_or(self.degrees.len() - 1);
        self.degrees[k]
    }
}

/// Runs density evolution at crossover `p` and reports how it ended.
pub fn de_evolve(dd: &DegreeDistribution, p: f64, params: &DeParams) -> Result<DeOutcome> {
    if !(0.0..=0.5).contains(&p) {
        return Err(Error::OutOfRange {
            name: "p",
            value: p,
            lo: 0.0,
            hi: 0.5,
        });
    }
    params.validate()?;
    let n = params.population;
    let prior_mag = if p == 0.0 {
        LLR_MAX
    } else {
        clip_llr(libm::log((1.0 - p) / p))
    };
    let lambda = DegreeSampler::new(dd.lambda());
    let rho = DegreeSampler::new(dd.rho());
    let nodes = DegreeSampler::new(&dd.variable_node_fractions());

    // Every draw below is made regardless of `p`, so runs at different `p`
    // with the same seed are coupled: a flip at `p` is also a flip at `p' > p`.
    let mut rng = rng::rng_from(params.seed);
    let prior = |rng: &mut Rng| {
        if rng::unit(rng) < p {
            -prior_mag
        } else {
            prior_mag
        }
    };

    let mut var_to_check: Vec<f64> = (0..n).map(|_| prior(&mut rng)).collect();
    let mut tanh_half = vec![0.0; n];
    let mut check_to_var = vec![0.0; n];
    let mut error_rate = 1.0;

    for iteration in 1..=params.max_iters {
        for (t, &q) in tanh_half.iter_mut().zip(&var_to_check) {
            *t = libm::tanh(0.5 * q);
        }
        for r in check_to_var.iter_mut() {
            let d = rho.sample(&mut rng);
            let mut prod = 1.0;
            for _ in 1..d {
                prod *= tanh_half[rng::index(&mut rng, n)];
            }
            *r = clip_llr(2.0 * libm::atanh(prod));
        }
        for q in var_to_check.iter_mut() {
            let d = lambda.sample(&mut rng);
            let mut sum = prior(&mut rng);
            for _ in 1..d {
                sum += check_to_var[rng::index(&mut rng, n)];
            }
            *q = clip_llr(sum);
        }
        let mut errors = 0.0;
        for _ in 0..n {
            let d = nodes.sample(&mut rng);
            let mut posterior = prior(&mut rng);
            for _ in 0..d {
                posterior += check_to_var[rng::index(&mut rng, n)];
            }
            if posterior < 0.0 {
                errors += 1.0;
            } else if posterior == 0.0 {
                errors += 0.5;
            }
        }
        error_rate = errors / n as f64;
        if error_rate < params.eps {
            return Ok(DeOutcome {
                converged: true,
                iterations: iteration,
                error_rate,
            });
        }
    }
    Ok(DeOutcome {
        converged: false,
        iterations: params.max_iters,
        error_rate,
    })
}

/// True when density evolution drives the error rate below `params.eps`
/// within `params.max_iters` iterations.
pub fn de_converges(dd: &DegreeDistribution, p: f64, params: &DeParams) -> Result<bool> {
    Ok(de_evolve(dd, p, params)?.converged)
}

/// Bisection result for the BP threshold of an ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    /// Midpoint of the final bracket.
    pub p_star: f64,
    /// Largest probed crossover that converged.
    pub lower: f64,
    /// Smallest probed crossover that did not converge (0.5 if none failed).
    pub upper: f64,
    pub tol: f64,
    pub probes: usize,
    pub params: DeParams,
    pub criterion: String,
}

/// Bisects the crossover threshold over `[0, 0.5]` to bracket width `tol`.
pub fn threshold(dd: &DegreeDistribution, tol: f64, params: &DeParams) -> Result<ThresholdReport> {
    threshold_between(dd, 0.0, 0.5, tol, params, 0)
}

/// Bisection on `[lower, upper]`, where the caller already knows that
/// `lower` converges. `upper` is probed first.
pub(crate) fn threshold_between(
    dd: &DegreeDistribution,
    mut lower: f64,
    mut upper: f64,
    tol: f64,
    params: &DeParams,
    mut probes: usize,
) -> Result<ThresholdReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(alloc::format!(
            "threshold tolerance must be > 0, got {tol}"
        )));
    }
    params.validate()?;
    let report = |lower: f64, upper: f64, probes: usize| ThresholdReport {
        p_star: 0.5 * (lower + upper),
        lower,
        upper,
        tol,
        probes,
        params: *params,
        criterion: alloc::format!(
            "bit error rate < {:e} within {} iterations, population {}",
            params.eps,
            params.max_iters,
            params.population
        ),
    };
    probes += 1;
    if de_converges(dd, upper, params)? {
        return Ok(report(upper, upper, probes));
    }
    if lower == 0.0 {
        probes += 1;
        if !de_converges(dd, 0.0, params)? {
            return Ok(report(0.0, 0.0, probes));
        }
    }
    while upper - lower > tol {
        let mid = 0.5 * (lower + upper);
        probes += 1;
        if de_converges(dd, mid, params)? {
            lower = mid;
        } else {
            upper = mid;
        }
    }
    Ok(report(lower, upper, probes))
}
