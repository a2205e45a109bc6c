//! Flooding sum-product decoding against a nonzero syndrome.
//!
//! Compared with channel decoding, two things change: variable priors come
//! from Bob's side information through `P(X|Y)`, and each check node `j`
//! targets parity `s_j` instead of zero. The latter is a sign flip
//! `(-1)^{s_j}` on every message the check emits.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{SparseParityMatrix, Syndrome};
use crate::domain::{clip_llr, hard_decision, BitString, LLR_MAX};
use crate::{Error, Result};

pub const DEFAULT_MAX_ITERS: usize = 200;

/// Outcome of one decoding attempt.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecodeResult {
    pub estimate: BitString,
    /// The estimate satisfies the target syndrome.
    pub converged: bool,
    /// Completed message-passing iterations; 0 when the priors alone
    /// already satisfy the syndrome.
    pub iterations: usize,
}

/// Sum-product decoder bound to one matrix. Owns its message buffers, so a
/// decoder can be reused across frames without reallocating.
#[derive(Debug, Clone)]
pub struct BpDecoder<'a> {
    matrix: &'a SparseParityMatrix,
    var_to_check: Vec<f64>,
    check_to_var: Vec<f64>,
    posterior: Vec<f64>,
    scratch: Vec<f64>,
    max_abs_message: f64,
}

impl<'a> BpDecoder<'a> {
    pub fn new(matrix: &'a SparseParityMatrix) -> Self {
        let edges = matrix.num_edges();
        BpDecoder {
            matrix,
            var_to_check: vec![0.0; edges],
            check_to_var: vec![0.0; edges],
            posterior: vec![0.0; matrix.n()],
            scratch: Vec::with_capacity(matrix.max_check_degree() + 1),
            max_abs_message: 0.0,
        }
    }

    /// Largest message magnitude seen during the last call to `decode`.
    /// `NaN` if any message was not finite.
    pub fn max_abs_message(&self) -> f64 {
        self.max_abs_message
    }

    pub fn posterior(&self) -> &[f64] {
        &self.posterior
    }

    pub fn decode(
        &mut self,
        syndrome: &Syndrome,
        priors: &[f64],
        max_iters: usize,
    ) -> Result<DecodeResult> {
        let h = self.matrix;
        if priors.len() != h.n() {
            return Err(Error::LengthMismatch {
                what: "priors",
                expected: h.n(),
                got: priors.len(),
            });
        }
        if syndrome.len() != h.m() {
            return Err(Error::LengthMismatch {
                what: "syndrome",
                expected: h.m(),
                got: syndrome.len(),
            });
        }
        if max_iters == 0 {
            return Err(Error::InvalidParameter("max_iters must be >= 1".into()));
        }
        if priors.iter().any(|p| p.is_nan()) {
            return Err(Error::InvalidParameter("priors contain NaN".into()));
        }

        let mut decision: Vec<u8> = Vec::with_capacity(h.n());
        for (i, &p) in priors.iter().enumerate() {
            let p = clip_llr(p);
            self.posterior[i] = p;
            decision.push(hard_decision(p));
            for &e in h.variable_edges(i) {
                self.var_to_check[e] = p;
            }
        }
        self.max_abs_message = 0.0;
        if h.satisfies(&decision, syndrome) {
            return Ok(DecodeResult {
                estimate: BitString::from_raw(decision),
                converged: true,
                iterations: 0,
            });
        }

        for iteration in 1..=max_iters {
            self.check_update(syndrome);
            self.variable_update(priors, &mut decision);
            if h.satisfies(&decision, syndrome) {
                return Ok(DecodeResult {
                    estimate: BitString::from_raw(decision),
                    converged: true,
                    iterations: iteration,
                });
            }
        }
        Ok(DecodeResult {
            estimate: BitString::from_raw(decision),
            converged: false,
            iterations: max_iters,
        })
    }

    fn check_update(&mut self, syndrome: &Syndrome) {
        let h = self.matrix;
        let mut peak = self.max_abs_message;
        for j in 0..h.m() {
            let range = h.check_edge_range(j);
            let sign = if syndrome[j] == 1 { -1.0 } else { 1.0 };
            let t = &mut self.scratch;
            t.clear();
            t.extend(
                self.var_to_check[range.clone()]
                    .iter()
                    .map(|&q| 1.0 - 2.0 / (libm::exp(q) + 1.0)),
            );
            // Exclusive products via a forward pass stored in place and a
            // running suffix product.
            let deg = t.len();
            let mut prefix = 1.0;
            let out = &mut self.check_to_var[range];
            for k in 0..deg {
                out[k] = prefix;
                prefix *= t[k];
            }
            let mut suffix = 1.0;
            for k in (0..deg).rev() {
                let prod = out[k] * suffix;
                suffix *= t[k];
                // 2 atanh(prod); clipping absorbs the infinities at |prod| = 1.
                let r = sign * clip_llr(libm::log((1.0 + prod) / (1.0 - prod)));
                peak = fmax_nan(peak, r.abs());
                out[k] = r;
            }
        }
        self.max_abs_message = peak;
    }

    fn variable_update(&mut self, priors: &[f64], decision: &mut [u8]) {
        let h = self.matrix;
        let mut peak = self.max_abs_message;
        for (i, &prior) in priors.iter().enumerate() {
            let edges = h.variable_edges(i);
            let total = clip_llr(prior)
                + edges.iter().map(|&e| self.check_to_var[e]).sum::<f64>();
            self.posterior[i] = total;
            decision[i] = hard_decision(total);
            for &e in edges {
                let q = clip_llr(total - self.check_to_var[e]);
                peak = fmax_nan(peak, q.abs());
                self.var_to_check[e] = q;
            }
        }
        self.max_abs_message = peak;
    }
}

// Sticky NaN so a single bad message is visible afterwards.
fn fmax_nan(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

/// Decodes `x` from its syndrome and per-bit prior LLRs.
pub fn decode(
    matrix: &SparseParityMatrix,
    syndrome: &Syndrome,
    priors: &[f64],
    max_iters: usize,
) -> Result<DecodeResult> {
    BpDecoder::new(matrix).decode(syndrome, priors, max_iters)
}

/// Internal message bound; messages never exceed this in magnitude.
pub const MESSAGE_CLIP: f64 = LLR_MAX;
