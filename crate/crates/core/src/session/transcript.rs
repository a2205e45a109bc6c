use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    AliceToBob,
    BobToAlice,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MessageKind {
    /// The syndrome `M x`.
    Syndrome,
    /// Source bits disclosed in the clear (shortening).
    RevealedBits,
    /// Top-level Cascade block parities for one pass.
    BlockParity,
    /// One parity inside a Cascade binary search.
    BinarySearchParity,
}

/// One public-channel message with its payload bits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub direction: Direction,
    pub kind: MessageKind,
    pub payload: Vec<u8>,
}

impl Message {
    pub fn bits(&self) -> usize {
        self.payload.len()
    }
}

/// Which messages count toward the key-length deduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LeakagePolicy {
    AliceOnly,
    /// Every disclosed bit in both directions.
    #[default]
    Total,
}

/// Ordered record of everything said on the public channel.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    messages: Vec<Message>,
    alice_bits: usize,
    bob_bits: usize,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, direction: Direction, kind: MessageKind, payload: Vec<u8>) {
        match direction {
            Direction::AliceToBob => self.alice_bits += payload.len(),
            Direction::BobToAlice => self.bob_bits += payload.len(),
        }
        self.messages.push(Message {
            direction,
            kind,
            payload,
        });
    }

    pub fn messages(&self) -> &[Message] {
        &self.messages
    }

    pub fn alice_bits(&self) -> usize {
        self.alice_bits
    }

    pub fn bob_bits(&self) -> usize {
        self.bob_bits
    }

    pub fn total_bits(&self) -> usize {
        self.alice_bits + self.bob_bits
    }

    /// Bits to subtract from the final key: the disclosed-bit count, an
    /// upper bound on what the conversation reveals about `x`.
    pub fn key_reduction(&self, policy: LeakagePolicy) -> usize {
        match policy {
            LeakagePolicy::AliceOnly => self.alice_bits,
            LeakagePolicy::Total => self.total_bits(),
        }
    }

    pub fn bits_of_kind(&self, kind: MessageKind) -> usize {
        self.messages
            .iter()
            .filter(|msg| msg.kind == kind)
            .map(Message::bits)
            .sum()
    }
}

/// Free-function form of [`Transcript::key_reduction`].
pub fn key_reduction(transcript: &Transcript, policy: LeakagePolicy) -> usize {
    transcript.key_reduction(policy)
}
