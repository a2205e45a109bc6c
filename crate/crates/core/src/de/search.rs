//! Perturb-and-accept search over variable degree distributions.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::density::{de_converges, threshold, threshold_between, DeParams, ThresholdReport};
use super::DegreeDistribution;
use crate::rng::{self, Rng};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Channel-code design rate; the syndrome rate is `1 - design_rate`.
    pub design_rate: f64,
    /// Largest variable-node degree allowed.
    pub degree_cap: usize,
    /// Number of candidate evaluations, including the starting ensemble.
    pub budget: usize,
    pub seed: u64,
    /// Threshold bracket width.
    pub tol: f64,
    pub de: DeParams,
}

impl SearchConfig {
    pub fn new(design_rate: f64, degree_cap: usize, budget: usize, seed: u64) -> Self {
        SearchConfig {
            design_rate,
            degree_cap,
            budget,
            seed,
            tol: 0.002,
            de: DeParams {
                population: 10_000,
                max_iters: 200,
                ..DeParams::default()
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub best: DegreeDistribution,
    pub threshold: ThresholdReport,
    pub baseline: DegreeDistribution,
    pub baseline_threshold: ThresholdReport,
    pub evaluations: usize,
    pub accepted: usize,
}

/// Starting point: all variables at degree 3 (or the cap, if lower), with
/// checks concentrated to hit the design rate.
pub fn baseline(design_rate: f64, degree_cap: usize) -> Result<DegreeDistribution> {
    if degree_cap < 2 {
        return Err(Error::InvalidParameter(format!(
            "degree cap must be >= 2, got {degree_cap}"
        )));
    }
    DegreeDistribution::with_concentrated_checks(vec![(degree_cap.min(3), 1.0)], design_rate)
}

/// Local search for an ensemble with a higher BP threshold at a fixed
/// design rate.
///
/// A candidate is evaluated by probing density evolution at the smallest
/// crossover where the incumbent is known to fail. Only candidates that
/// converge there are bisected and accepted, so the returned threshold is
/// never below the baseline's.
pub fn search(cfg: &SearchConfig) -> Result<SearchOutcome> {
    if !(cfg.design_rate > 0.0 && cfg.design_rate < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "design rate {} is not in (0, 1)",
            cfg.design_rate
        )));
    }
    if cfg.budget == 0 {
        return Err(Error::InvalidParameter("search budget must be >= 1".into()));
    }
    let start = baseline(cfg.design_rate, cfg.degree_cap)
        .map_err(|e| Error::InfeasibleDegrees(format!("{e}")))?;
    let start_report = threshold(&start, cfg.tol, &cfg.de)?;

    let mut rng = rng::rng_from(cfg.seed);
    let mut best = start.clone();
    let mut best_report = start_report.clone();
    let mut weights = dense_weights(&start, cfg.degree_cap);
    let mut accepted = 0;

    for _ in 1..cfg.budget {
        let proposal = perturb(&weights, &mut rng);
        let Ok(candidate) = from_dense(&proposal, cfg.design_rate) else {
            continue;
        };
        // Nothing left to beat once the incumbent converges everywhere.
        if best_report.upper >= 0.5 && best_report.lower >= 0.5 {
            break;
        }
        if !de_converges(&candidate, best_report.upper, &cfg.de)? {
            continue;
        }
        let report =
            threshold_between(&candidate, best_report.upper, 0.5, cfg.tol, &cfg.de, 1)?;
        if report.p_star > best_report.p_star {
            best = candidate;
            best_report = report;
            weights = proposal;
            accepted += 1;
        }
    }
    Ok(SearchOutcome {
        best,
        threshold: best_report,
        baseline: start,
        baseline_threshold: start_report,
        evaluations: cfg.budget,
        accepted,
    })
}

/// `weights[d]` is the edge fraction at variable degree `d`, for `d <= cap`.
fn dense_weights(dd: &DegreeDistribution, cap: usize) -> Vec<f64> {
    let mut w = vec![0.0; cap + 1];
    for &(d, x) in dd.lambda() {
        w[d.min(cap)] += x;
    }
    w
}

fn from_dense(weights: &[f64], design_rate: f64) -> Result<DegreeDistribution> {
    let lambda: Vec<(usize, f64)> = weights
        .iter()
        .enumerate()
        .filter(|&(_, &w)| w > 0.0)
        .map(|(d, &w)| (d, w))
        .collect();
    DegreeDistribution::with_concentrated_checks(lambda, design_rate)
}

/// Moves a random share of one degree's edge mass onto another degree.
fn perturb(weights: &[f64], rng: &mut Rng) -> Vec<f64> {
    let cap = weights.len() - 1;
    let mut w = weights.to_vec();
    let moves = 1 + rng::index(rng, 2);
    for _ in 0..moves {
        let support: Vec<usize> = (2..=cap).filter(|&d| w[d] > 0.0).collect();
        let src = support[rng::index(rng, support.len())];
        let mut dst = 2 + rng::index(rng, cap - 1);
        if dst == src {
            dst = if dst == cap { 2 } else { dst + 1 };
        }
        if dst == src {
            continue;
        }
        let amount = w[src] * (0.05 + 0.6 * rng::unit(rng));
        w[src] -= amount;
        w[dst] += amount;
    }
    for x in w.iter_mut() {
        if *x < 1e-4 {
            *x = 0.0;
        }
    }
    let sum: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= sum);
    w
}
