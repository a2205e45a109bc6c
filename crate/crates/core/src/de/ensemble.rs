use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

const SUM_TOL: f64 = 1e-9;

/// Edge-perspective degree distribution `(λ, ρ)` of an LDPC ensemble.
///
/// Each side is a list of `(degree, weight)` pairs, sorted by degree, where
/// the weight is the fraction of edges attached to nodes of that degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawEnsemble")]
pub struct DegreeDistribution {
    lambda: Vec<(usize, f64)>,
    rho: Vec<(usize, f64)>,
}

#[derive(Deserialize)]
struct RawEnsemble {
    lambda: Vec<(usize, f64)>,
    rho: Vec<(usize, f64)>,
}

impl TryFrom<RawEnsemble> for DegreeDistribution {
    type Error = Error;

    fn try_from(raw: RawEnsemble) -> Result<Self> {
        DegreeDistribution::new(raw.lambda, raw.rho)
    }
}

fn normalize_side(name: &str, mut side: Vec<(usize, f64)>) -> Result<Vec<(usize, f64)>> {
    if side.is_empty() {
        return Err(Error::InvalidDegreeDistribution(format!("{name} is empty")));
    }
    side.sort_by_key(|&(d, _)| d);
    let mut merged: Vec<(usize, f64)> = Vec::with_capacity(side.len());
    for (d, w) in side {
        if d == 0 {
            return Err(Error::InvalidDegreeDistribution(format!(
                "{name} has a degree-0 entry"
            )));
        }
        if !w.is_finite() || w < 0.0 {
            return Err(Error::InvalidDegreeDistribution(format!(
                "{name} weight {w} for degree {d} is not a nonnegative number"
            )));
        }
        match merged.last_mut() {
            Some(last) if last.0 == d => last.1 += w,
            _ => merged.push((d, w)),
        }
    }
    merged.retain(|&(_, w)| w > 0.0);
    let sum: f64 = merged.iter().map(|&(_, w)| w).sum();
    if (sum - 1.0).abs() > SUM_TOL {
        return Err(Error::InvalidDegreeDistribution(format!(
            "{name} weights sum to {sum}, not 1"
        )));
    }
    Ok(merged)
}

fn inverse_mean(side: &[(usize, f64)]) -> f64 {
    side.iter().map(|&(d, w)| w / d as f64).sum()
}

/// Node-perspective fractions from edge-perspective weights.
fn node_fractions(side: &[(usize, f64)]) -> Vec<(usize, f64)> {
    let total = inverse_mean(side);
    side.iter()
        .map(|&(d, w)| (d, (w / d as f64) / total))
        .collect()
}

impl DegreeDistribution {
    pub fn new(lambda: Vec<(usize, f64)>, rho: Vec<(usize, f64)>) -> Result<Self> {
        let dd = DegreeDistribution {
            lambda: normalize_side("lambda", lambda)?,
            rho: normalize_side("rho", rho)?,
        };
        let r = dd.design_rate();
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::InvalidDegreeDistribution(format!(
                "design rate {r} is not in (0, 1)"
            )));
        }
        Ok(dd)
    }

    /// The `(dv, dc)`-regular ensemble.
    pub fn regular(dv: usize, dc: usize) -> Result<Self> {
        Self::new(alloc::vec![(dv, 1.0)], alloc::vec![(dc, 1.0)])
    }

    /// Pairs `lambda` with a check distribution concentrated on two
    /// consecutive degrees so that the design rate equals `design_rate`.
    pub fn with_concentrated_checks(lambda: Vec<(usize, f64)>, design_rate: f64) -> Result<Self> {
        if !(design_rate > 0.0 && design_rate < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "design rate {design_rate} is not in (0, 1)"
            )));
        }
        let lambda = normalize_side("lambda", lambda)?;
        // Σ ρ_j / j must equal (1 - r) Σ λ_i / i.
        let target = (1.0 - design_rate) * inverse_mean(&lambda);
        if target > 0.5 {
            return Err(Error::InvalidDegreeDistribution(format!(
                "design rate {design_rate} would need check degree below 2"
            )));
        }
        let d = libm::floor(1.0 / target + 1e-9) as usize;
        let (lo, hi) = (1.0 / (d + 1) as f64, 1.0 / d as f64);
        let w_d = ((target - lo) / (hi - lo)).clamp(0.0, 1.0);
        let mut rho = alloc::vec![(d, w_d), (d + 1, 1.0 - w_d)];
        rho.retain(|&(_, w)| w > 1e-12);
        let sum: f64 = rho.iter().map(|&(_, w)| w).sum();
        rho.iter_mut().for_each(|(_, w)| *w /= sum);
        Self::new(lambda, rho)
    }

    pub fn lambda(&self) -> &[(usize, f64)] {
        &self.lambda
    }

    pub fn rho(&self) -> &[(usize, f64)] {
        &self.rho
    }

    /// `1 - (Σ ρ_j / j) / (Σ λ_i / i)`: the rate of the ensemble read as a
    /// channel code. The syndrome compresses at `1 - design_rate`.
    pub fn design_rate(&self) -> f64 {
        1.0 - inverse_mean(&self.rho) / inverse_mean(&self.lambda)
    }

    /// Syndrome length over source length, `m / n`.
    pub fn compression_rate(&self) -> f64 {
        1.0 - self.design_rate()
    }

    pub fn variable_node_fractions(&self) -> Vec<(usize, f64)> {
        node_fractions(&self.lambda)
    }

    pub fn check_node_fractions(&self) -> Vec<(usize, f64)> {
        node_fractions(&self.rho)
    }

    pub fn max_variable_degree(&self) -> usize {
        self.lambda.last().map_or(0, |&(d, _)| d)
    }

    pub fn max_check_degree(&self) -> usize {
        self.rho.last().map_or(0, |&(d, _)| d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn regular_rates() {
        let dd = DegreeDistribution::regular(3, 6).unwrap();
        assert!((dd.design_rate() - 0.5).abs() < 1e-15);
        assert!((dd.compression_rate() - 0.5).abs() < 1e-15);
        assert!(DegreeDistribution::regular(3, 3).is_err());
        assert!(DegreeDistribution::regular(4, 3).is_err());
    }

    #[test]
    fn concentrated_checks_hit_the_rate() {
        let dd = DegreeDistribution::with_concentrated_checks(vec![(3, 1.0)], 0.5).unwrap();
        assert_eq!(dd, DegreeDistribution::regular(3, 6).unwrap());

        let dd = DegreeDistribution::with_concentrated_checks(vec![(3, 1.0)], 0.3).unwrap();
        assert!((dd.design_rate() - 0.3).abs() < 1e-12);
        // Hand solution: ρ4/4 + ρ5/5 = 0.7/3 with ρ4 + ρ5 = 1 gives ρ4 = 2/3.
        assert_eq!(dd.rho()[0].0, 4);
        assert!((dd.rho()[0].1 - 2.0 / 3.0).abs() < 1e-12);

        let irregular = vec![(2, 0.3), (3, 0.4), (8, 0.3)];
        let dd = DegreeDistribution::with_concentrated_checks(irregular, 0.55).unwrap();
        assert!((dd.design_rate() - 0.55).abs() < 1e-12);
    }

    #[test]
    fn node_fractions_of_mixed_ensemble() {
        // λ = 0.5 x + 0.5 x^2 (degrees 2 and 3): node fractions ∝ 1/4, 1/6.
        let dd = DegreeDistribution::new(vec![(2, 0.5), (3, 0.5)], vec![(6, 1.0)]).unwrap();
        let f = dd.variable_node_fractions();
        assert!((f[0].1 - 0.6).abs() < 1e-12);
        assert!((f[1].1 - 0.4).abs() < 1e-12);
    }

    #[test]
    fn validation() {
        assert!(DegreeDistribution::new(vec![(3, 0.5)], vec![(6, 1.0)]).is_err());
        assert!(DegreeDistribution::new(vec![(3, 1.5), (4, -0.5)], vec![(6, 1.0)]).is_err());
        assert!(DegreeDistribution::new(vec![], vec![(6, 1.0)]).is_err());
        assert!(DegreeDistribution::new(vec![(0, 1.0)], vec![(6, 1.0)]).is_err());
        // Duplicate entries merge.
        let dd = DegreeDistribution::new(vec![(3, 0.5), (3, 0.5)], vec![(6, 1.0)]).unwrap();
        assert_eq!(dd.lambda(), &[(3, 1.0)]);
    }
}
