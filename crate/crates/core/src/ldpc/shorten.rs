//! Rate adaptation by shortening a fixed mother matrix.
//!
//! Alice discloses the bits of `x` at chosen positions in addition to the
//! syndrome. Bob pins those variables to certainty-level priors and runs the
//! ordinary decoder, so one matrix serves a range of effective rates
//! `(m + k) / n`.

use alloc::vec::Vec;

use super::{decode, DecodeResult, SparseParityMatrix, Syndrome};
use crate::domain::{BitString, LLR_MAX};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct Shortening<'a> {
    matrix: &'a SparseParityMatrix,
    positions: Vec<usize>,
}

/// Validates `positions` against `matrix`; duplicates are ignored.
pub fn shorten<'a>(matrix: &'a SparseParityMatrix, positions: &[usize]) -> Result<Shortening<'a>> {
    Shortening::new(matrix, positions)
}

impl<'a> Shortening<'a> {
    pub fn new(matrix: &'a SparseParityMatrix, positions: &[usize]) -> Result<Self> {
        let n = matrix.n();
        if let Some(&index) = positions.iter().find(|&&i| i >= n) {
            return Err(Error::IndexOutOfRange { index, len: n });
        }
        let mut positions = positions.to_vec();
        positions.sort_unstable();
        positions.dedup();
        Ok(Shortening { matrix, positions })
    }

    pub fn matrix(&self) -> &'a SparseParityMatrix {
        self.matrix
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn revealed(&self) -> usize {
        self.positions.len()
    }

    pub fn effective_rate(&self) -> f64 {
        (self.matrix.m() + self.positions.len()) as f64 / self.matrix.n() as f64
    }

    /// The bits Alice discloses, in position order.
    pub fn reveal(&self, x: &BitString) -> Result<Vec<u8>> {
        if x.len() != self.matrix.n() {
            return Err(Error::LengthMismatch {
                what: "shortened source",
                expected: self.matrix.n(),
                got: x.len(),
            });
        }
        Ok(self.positions.iter().map(|&i| x[i]).collect())
    }

    /// Overrides the priors at disclosed positions with `±LLR_MAX`.
    pub fn pin_priors(&self, priors: &mut [f64], revealed: &[u8]) -> Result<()> {
        if revealed.len() != self.positions.len() {
            return Err(Error::LengthMismatch {
                what: "revealed bits",
                expected: self.positions.len(),
                got: revealed.len(),
            });
        }
        if priors.len() != self.matrix.n() {
            return Err(Error::LengthMismatch {
                what: "priors",
                expected: self.matrix.n(),
                got: priors.len(),
            });
        }
        for (&i, &bit) in self.positions.iter().zip(revealed) {
            priors[i] = if bit == 0 { LLR_MAX } else { -LLR_MAX };
        }
        Ok(())
    }

    pub fn decode(
        &self,
        syndrome: &Syndrome,
        priors: &[f64],
        revealed: &[u8],
        max_iters: usize,
    ) -> Result<DecodeResult> {
        let mut pinned = priors.to_vec();
        self.pin_priors(&mut pinned, revealed)?;
        decode(self.matrix, syndrome, &pinned, max_iters)
    }
}
