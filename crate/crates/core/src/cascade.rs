//! The interactive Cascade protocol.
//!
//! Each pass shuffles the positions with a seeded permutation, cuts them into
//! blocks and compares block parities. A block whose parities differ holds
//! an odd number of errors; a binary search over halves locates one and Bob
//! flips it. A flip changes the parity of the blocks containing that
//! position in every earlier pass, so those blocks may turn odd and are
//! searched too. Known-odd blocks sit in one queue across passes and the
//! smallest is always resolved first.

use alloc::collections::BinaryHeap;
use alloc::format;
use alloc::vec::Vec;
use core::cmp::Reverse;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::domain::{BitString, JointDistribution};
use crate::rng;
use crate::session::{Direction, MessageKind, Transcript};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CascadeConfig {
    pub passes: usize,
    /// First-pass block size.
    pub k1: usize,
    /// Block size multiplier from one pass to the next.
    pub growth: usize,
    pub shuffle_seed: u64,
}

impl CascadeConfig {
    pub fn new(passes: usize, k1: usize, growth: usize, shuffle_seed: u64) -> Result<Self> {
        if passes == 0 || k1 == 0 || growth == 0 {
            return Err(Error::InvalidParameter(format!(
                "cascade needs passes, k1 and growth >= 1, got {passes}, {k1}, {growth}"
            )));
        }
        Ok(CascadeConfig {
            passes,
            k1,
            growth,
            shuffle_seed,
        })
    }

    /// Classical parameters: `k1 = ⌈0.73 / p⌉` clamped to `[2, n]`, doubling
    /// block sizes, four passes.
    pub fn for_crossover(p: f64, n: usize, shuffle_seed: u64) -> Result<Self> {
        if !(0.0..=0.5).contains(&p) {
            return Err(Error::OutOfRange {
                name: "p",
                value: p,
                lo: 0.0,
                hi: 0.5,
            });
        }
        let k1 = if p > 0.0 {
            libm::ceil(0.73 / p) as usize
        } else {
            n
        };
        Self::new(4, k1.clamp(2, n.max(2)), 2, shuffle_seed)
    }

    pub fn for_distribution(d: &JointDistribution, n: usize, shuffle_seed: u64) -> Result<Self> {
        Self::for_crossover(d.mismatch_probability().min(0.5), n, shuffle_seed)
    }

    pub fn block_size(&self, pass: usize, n: usize) -> usize {
        let mut k = self.k1;
        for _ in 0..pass {
            k = k.saturating_mul(self.growth);
            if k >= n {
                break;
            }
        }
        k.min(n).max(1)
    }
}

/// One parity Alice disclosed, with the positions it covers and Bob's
/// corresponding parity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityDisclosure {
    pub pass: usize,
    pub indices: Vec<usize>,
    pub alice: u8,
    pub bob: u8,
}

/// One binary-search episode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Correction {
    pub pass: usize,
    pub block: usize,
    pub position: usize,
    /// Parities Alice disclosed during the search.
    pub parities: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CascadeOutcome {
    pub corrected: BitString,
    pub transcript: Transcript,
    pub disclosures: Vec<ParityDisclosure>,
    pub corrections: Vec<Correction>,
    /// Hamming distance between `corrected` and Alice's string. Known to the
    /// harness only; neither party can compute it.
    pub residual_errors: usize,
}

struct Pass {
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
    alice: Vec<u8>,
    bob: Vec<u8>,
}

fn parity(bits: &[u8], indices: &[usize]) -> u8 {
    indices.iter().fold(0, |acc, &i| acc ^ bits[i])
}

/// Runs Cascade between Alice's `x` and Bob's `y`.
pub fn run(x: &BitString, y: &BitString, cfg: &CascadeConfig) -> Result<CascadeOutcome> {
    let n = x.len();
    if y.len() != n {
        return Err(Error::LengthMismatch {
            what: "cascade strings",
            expected: n,
            got: y.len(),
        });
    }
    CascadeConfig::new(cfg.passes, cfg.k1, cfg.growth, cfg.shuffle_seed)?;
    let alice = x.as_slice();
    let mut bob = y.as_slice().to_vec();
    let mut transcript = Transcript::new();
    let mut disclosures = Vec::new();
    let mut corrections = Vec::new();
    let mut passes: Vec<Pass> = Vec::with_capacity(cfg.passes);

    for pass_index in 0..cfg.passes {
        let k = cfg.block_size(pass_index, n);
        let mut order: Vec<usize> = (0..n).collect();
        let mut prng = rng::rng_from(rng::derive(cfg.shuffle_seed, pass_index as u64));
        order.shuffle(&mut prng);
        let blocks: Vec<Vec<usize>> = order.chunks(k).map(<[usize]>::to_vec).collect();
        let mut block_of = alloc::vec![0usize; n];
        for (b, block) in blocks.iter().enumerate() {
            for &i in block {
                block_of[i] = b;
            }
        }
        let a_par: Vec<u8> = blocks.iter().map(|b| parity(alice, b)).collect();
        let b_par: Vec<u8> = blocks.iter().map(|b| parity(&bob, b)).collect();
        for (b, block) in blocks.iter().enumerate() {
            disclosures.push(ParityDisclosure {
                pass: pass_index,
                indices: block.clone(),
                alice: a_par[b],
                bob: b_par[b],
            });
        }
        transcript.push(Direction::AliceToBob, MessageKind::BlockParity, a_par.clone());
        transcript.push(Direction::BobToAlice, MessageKind::BlockParity, b_par.clone());
        passes.push(Pass {
            blocks,
            block_of,
            alice: a_par,
            bob: b_par,
        });

        let current = &passes[pass_index];
        let mut queue: BinaryHeap<Reverse<(usize, usize, usize)>> = current
            .blocks
            .iter()
            .enumerate()
            .filter(|&(b, _)| current.alice[b] != current.bob[b])
            .map(|(b, block)| Reverse((block.len(), pass_index, b)))
            .collect();

        while let Some(Reverse((_, p, b))) = queue.pop() {
            if passes[p].alice[b] == passes[p].bob[b] {
                continue;
            }
            let (position, parities) = binary_search(
                alice,
                &bob,
                &passes[p].blocks[b],
                p,
                &mut transcript,
                &mut disclosures,
            );
            bob[position] ^= 1;
            corrections.push(Correction {
                pass: p,
                block: b,
                position,
                parities,
            });
            for (q, other) in passes.iter_mut().enumerate() {
                let ob = other.block_of[position];
                other.bob[ob] ^= 1;
                if other.bob[ob] != other.alice[ob] {
                    queue.push(Reverse((other.blocks[ob].len(), q, ob)));
                }
            }
        }
    }

    let corrected = BitString::from_raw(bob);
    let residual_errors = corrected.hamming_distance(x);
    Ok(CascadeOutcome {
        corrected,
        transcript,
        disclosures,
        corrections,
        residual_errors,
    })
}

/// Halves an odd block until one position remains. Alice discloses the
/// parity of the first half at each step and Bob answers with his.
fn binary_search(
    alice: &[u8],
    bob: &[u8],
    block: &[usize],
    pass: usize,
    transcript: &mut Transcript,
    disclosures: &mut Vec<ParityDisclosure>,
) -> (usize, usize) {
    let mut range = block;
    let mut parities = 0;
    while range.len() > 1 {
        let (left, right) = range.split_at(range.len().div_ceil(2));
        let a = parity(alice, left);
        let b = parity(bob, left);
        transcript.push(Direction::AliceToBob, MessageKind::BinarySearchParity, alloc::vec![a]);
        transcript.push(Direction::BobToAlice, MessageKind::BinarySearchParity, alloc::vec![b]);
        disclosures.push(ParityDisclosure {
            pass,
            indices: left.to_vec(),
            alice: a,
            bob: b,
        });
        parities += 1;
        range = if a != b { left } else { right };
    }
    (range[0], parities)
}
