//! Keyed constructions on top of the walk.
//!
//! The MAC keeps the hash pipeline but makes the initial position amplitudes
//! (`key1`) and the initialization control string (`key2`) secret. The PRNG
//! feeds the last `N` bits of every output block back in as the next control
//! block, carrying the walk state forward.

use alloc::vec::Vec;

use crate::digest::Digest;
use crate::error::{Error, Result};
use crate::hash::{self, HashContext, HashParams};
use crate::walk::{Amplitude, Coin2, WalkState};

/// Secret material for the MAC.
#[derive(Debug, Clone, PartialEq)]
pub struct MacKey {
    key1: Vec<Amplitude>,
    key2: Vec<bool>,
}

impl MacKey {
    /// `key1` must hold `n` normalized amplitudes; `key2` at least `n` bits.
    pub fn new(key1: Vec<Amplitude>, key2: Vec<bool>, n: usize) -> Result<Self> {
        if hash::check_alpha(&key1, n).is_err() {
            return Err(Error::InvalidKey("key1 must be N normalized amplitudes"));
        }
        if key2.len() < n {
            return Err(Error::InvalidKey("key2 must hold at least N bits"));
        }
        Ok(MacKey { key1, key2 })
    }

    /// The key that reduces the MAC to the unkeyed hash: `e_0` and `0^N`.
    pub fn trivial(n: usize) -> Self {
        MacKey {
            key1: hash::unit_alpha(n),
            key2: alloc::vec![false; n],
        }
    }

    pub fn key1(&self) -> &[Amplitude] {
        &self.key1
    }

    pub fn key2(&self) -> &[bool] {
        &self.key2
    }
}

/// A hash context whose initialization is driven by the key: start in
/// `key1 ⊗ |0⟩_c`, then run `⌈|key2|/N⌉` steps controlled by `key2`.
pub fn mac_context(params: &HashParams, key: &MacKey) -> Result<HashContext> {
    let n = params.positions();
    // re-check against these params; the key may have been built for another N
    let key = MacKey::new(key.key1.clone(), key.key2.clone(), n)?;
    let mut ctx = HashContext::unstepped(params, &key.key1)?;
    ctx.absorb_padded(&key.key2);
    Ok(ctx)
}

pub fn mac(params: &HashParams, key: &MacKey, message: &[bool]) -> Result<Digest> {
    let mut ctx = mac_context(params, key)?;
    ctx.absorb(message);
    Ok(ctx.finalize())
}

/// Chained generator state.
#[derive(Debug, Clone)]
pub struct PrngState {
    k: u32,
    coin0: Coin2,
    coin1: Coin2,
    state: WalkState,
    next_block: Vec<bool>,
}

impl PrngState {
    /// Seeds with `alpha ⊗ |0⟩_c`; `init_block` controls the first step.
    pub fn seed(params: &HashParams, alpha: &[Amplitude], init_block: &[bool]) -> Result<Self> {
        hash::check_alpha(alpha, params.positions())?;
        if init_block.len() != params.positions() {
            return Err(Error::SizeMismatch {
                expected: params.positions(),
                found: init_block.len(),
            });
        }
        let (coin0, coin1) = params.coins();
        Ok(PrngState {
            k: params.k(),
            coin0,
            coin1,
            state: WalkState::from_position_amplitudes(params.q(), alpha)?,
            next_block: init_block.to_vec(),
        })
    }

    pub fn state(&self) -> &WalkState {
        &self.state
    }

    pub fn next_control_block(&self) -> &[bool] {
        &self.next_block
    }

    /// Bits produced per call to [`PrngState::next_block`].
    pub fn block_bits(&self) -> usize {
        self.state.positions() * self.k as usize
    }

    /// One step, then post-processing into `N·k` bits. The last `N` output
    /// bits become the next control block.
    pub fn next_block(&mut self) -> Digest {
        self.state
            .step(&self.next_block, &self.coin0, &self.coin1)
            .expect("control block has width N");
        let bits = hash::postprocess_bits(self.state.probabilities().as_slice(), self.k);
        let n = self.next_block.len();
        self.next_block.copy_from_slice(&bits[bits.len() - n..]);
        Digest::from_bits(&bits).expect("N*k is byte aligned")
    }

    /// Concatenates whole blocks until `nbits` are available, then truncates.
    pub fn fill(&mut self, nbits: usize) -> Vec<bool> {
        let mut out = Vec::with_capacity(nbits + self.block_bits());
        while out.len() < nbits {
            out.extend(self.next_block().bits());
        }
        out.truncate(nbits);
        out
    }
}
