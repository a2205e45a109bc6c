//! Syndrome coding with sparse parity-check matrices.
//!
//! Alice sends `s = M x`; Bob decodes `x` from `s` and priors derived from
//! his side information `y`.

mod decoder;
mod matrix;
mod ml;
mod peg;
mod shorten;

pub use decoder::{decode, BpDecoder, DecodeResult, DEFAULT_MAX_ITERS, MESSAGE_CLIP};
pub use matrix::{syndrome, SparseParityMatrix, Syndrome};
pub use ml::{decode_ml_bruteforce, likelihood_cost, ML_MAX_N};
pub use peg::{generate, generate_with, PegOptions};
pub use shorten::{shorten, Shortening};
