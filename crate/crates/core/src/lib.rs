//! Information reconciliation between two correlated binary sources.
//!
//! Alice holds `x`, Bob holds `y`, the pairs `(x_i, y_i)` are i.i.d. from a
//! known [`JointDistribution`]. This crate provides:
//!
//! * syndrome (Slepian–Wolf) coding with sparse parity-check matrices and a
//!   sum-product decoder whose check nodes target the received syndrome
//!   ([`ldpc`]),
//! * density evolution for code ensembles and a small degree-distribution
//!   search ([`de`]),
//! * the interactive Cascade protocol as a baseline ([`cascade`]),
//! * transcripts, leakage accounting and a Monte-Carlo harness ([`session`]).
//!
//! The crate is `no_std` and only needs `alloc`. File formats, parallel
//! execution and the command-line front end live in the `syndrec` crate.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod cascade;
pub mod de;
pub mod domain;
mod error;
pub mod ldpc;
pub mod rng;
pub mod session;

pub use domain::{BitString, JointDistribution, LLR_MAX};
pub use error::{Error, Result};
pub use ldpc::{DecodeResult, SparseParityMatrix, Syndrome};
