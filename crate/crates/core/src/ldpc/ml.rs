//! Exhaustive maximum-likelihood decoding for small instances.

use alloc::vec::Vec;

use super::{SparseParityMatrix, Syndrome};
use crate::domain::{hard_decision, BitString};
use crate::{Error, Result};

pub const ML_MAX_N: usize = 20;

/// Negative log-likelihood of `x` relative to the hard decision of the
/// priors: the sum of `|prior_i|` over positions where `x` disagrees with
/// the prior's sign. Lower is more likely.
pub fn likelihood_cost(priors: &[f64], x: &[u8]) -> f64 {
    priors
        .iter()
        .zip(x)
        .filter(|(&p, &b)| hard_decision(p) != b)
        .map(|(p, _)| p.abs())
        .sum()
}

/// Returns the most likely `x` with `M x = s`; among equally likely
/// strings the lexicographically smallest wins.
pub fn decode_ml_bruteforce(
    matrix: &SparseParityMatrix,
    syndrome: &Syndrome,
    priors: &[f64],
) -> Result<BitString> {
    let n = matrix.n();
    if n > ML_MAX_N {
        return Err(Error::TooLarge { n, max: ML_MAX_N });
    }
    if priors.len() != n {
        return Err(Error::LengthMismatch {
            what: "priors",
            expected: n,
            got: priors.len(),
        });
    }
    if syndrome.len() != matrix.m() {
        return Err(Error::LengthMismatch {
            what: "syndrome",
            expected: matrix.m(),
            got: syndrome.len(),
        });
    }
    // Bit i of the string is bit (n-1-i) of the counter, so counting up
    // enumerates strings in lexicographic order.
    let to_mask = |positions: &[usize]| -> u32 {
        positions.iter().fold(0u32, |acc, &i| acc | 1 << (n - 1 - i))
    };
    let rows: Vec<(u32, u32)> = matrix
        .checks()
        .zip(syndrome.iter())
        .map(|(row, &s)| (to_mask(row), s as u32))
        .collect();
    let costs: Vec<(u32, f64)> = priors
        .iter()
        .enumerate()
        .map(|(i, &p)| (1u32 << (n - 1 - i), p))
        .collect();

    let mut best: Option<(f64, u32)> = None;
    for word in 0u32..(1u32 << n) {
        if rows
            .iter()
            .any(|&(mask, s)| (word & mask).count_ones() & 1 != s)
        {
            continue;
        }
        let cost: f64 = costs
            .iter()
            .filter(|&&(bit, p)| hard_decision(p) as u32 != ((word & bit != 0) as u32))
            .map(|&(_, p)| p.abs())
            .sum();
        if best.is_none_or(|(c, _)| cost < c) {
            best = Some((cost, word));
        }
    }
    let (_, word) = best.ok_or(Error::InconsistentSyndrome)?;
    Ok(BitString::from_raw(
        (0..n).map(|i| ((word >> (n - 1 - i)) & 1) as u8).collect(),
    ))
}
