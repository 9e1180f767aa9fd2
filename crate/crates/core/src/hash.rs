//! The block hash pipeline.
//!
//! 1. Parameters `(q, k, θ1, θ2, α)` are validated.
//! 2. The walker starts in `(Σ_i α_i |i⟩_p) ⊗ |0⟩_c` and takes one step under
//!    the all-zero block, spreading probability over every position.
//! 3. Each full `N`-bit block of the message drives one step: bit `x` chooses
//!    the `θ2` coin (1) or the `θ1` coin (0) at position `x`. A trailing
//!    partial block of `r` bits drives one last step in which positions
//!    `r..N` use the Hadamard coin.
//! 4. Each `p(x)` becomes the `k`-bit group `floor(p(x)·10^k) mod 2^k`,
//!    written MSB first in ascending `x`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use crate::bits;
use crate::digest::Digest;
use crate::error::{Error, Result};
use crate::walk::{self, Amplitude, Coin2, WalkState, MAX_Q};

/// Largest supported bits-per-position; `10^k` must be exact in binary64.
pub const MAX_K: u32 = 22;

/// Tolerance on `|Σ|α_i|² − 1|`.
pub const ALPHA_TOLERANCE: f64 = 1e-12;

/// Below this a position probability counts as zero after initialization.
pub const DEGENERATE_THRESHOLD: f64 = 1e-300;

/// `acos(3/5)`, the first coin angle of the reference instances.
pub fn default_theta1() -> f64 {
    libm::acos(3.0 / 5.0)
}

/// `acos(8/17)`, the second coin angle of the reference instances.
pub fn default_theta2() -> f64 {
    libm::acos(8.0 / 17.0)
}

/// Full configuration of a hash instance.
#[derive(Debug, Clone, PartialEq)]
pub struct HashParams {
    q: u32,
    k: u32,
    theta1: f64,
    theta2: f64,
    alpha: Vec<Amplitude>,
}

/// `e_0` over `n` positions.
pub fn unit_alpha(n: usize) -> Vec<Amplitude> {
    let mut alpha = vec![Amplitude::ZERO; n];
    alpha[0] = Amplitude::ONE;
    alpha
}

pub(crate) fn check_alpha(alpha: &[Amplitude], n: usize) -> Result<()> {
    if alpha.len() != n {
        return Err(Error::InvalidAlpha("alpha must have exactly N entries"));
    }
    if !alpha.iter().all(|a| a.is_finite()) {
        return Err(Error::InvalidAlpha("alpha entries must be finite"));
    }
    if (walk::norm_sqr(alpha) - 1.0).abs() > ALPHA_TOLERANCE {
        return Err(Error::InvalidAlpha("sum of |alpha_i|^2 must equal 1"));
    }
    Ok(())
}

fn check_message_theta(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return Err(Error::InvalidTheta("theta must lie in (0, pi/2)"));
    }
    if theta == FRAC_PI_4 {
        return Err(Error::InvalidTheta("pi/4 is reserved for the padding coin"));
    }
    Ok(())
}

impl HashParams {
    /// Parameters with the default initial state `α = e_0`.
    pub fn new(q: u32, k: u32, theta1: f64, theta2: f64) -> Result<Self> {
        if q == 0 || q > MAX_Q {
            return Err(Error::InvalidSize("q must be in 1..=16"));
        }
        HashParams {
            q,
            k,
            theta1,
            theta2,
            alpha: unit_alpha(1usize << q),
        }
        .validate()
    }

    /// Same as [`HashParams::new`] but takes the block width `N` directly.
    pub fn with_width(n: usize, k: u32, theta1: f64, theta2: f64) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::InvalidSize("N must be a power of two >= 2"));
        }
        Self::new(n.trailing_zeros(), k, theta1, theta2)
    }

    /// CAQWBH-256: `N = 32`, `k = 8`, `cos θ1 = 3/5`, `cos θ2 = 8/17`.
    pub fn caqwbh256() -> Self {
        Self::new(5, 8, default_theta1(), default_theta2()).expect("reference instance is valid")
    }

    /// CAQWBH-512: `N = 64`, `k = 8`, same coins.
    pub fn caqwbh512() -> Self {
        Self::new(6, 8, default_theta1(), default_theta2()).expect("reference instance is valid")
    }

    pub fn with_alpha(mut self, alpha: Vec<Amplitude>) -> Result<Self> {
        self.alpha = alpha;
        self.validate()
    }

    /// Returns `self` iff every parameter invariant holds.
    pub fn validate(self) -> Result<Self> {
        if self.q == 0 || self.q > MAX_Q {
            return Err(Error::InvalidSize("q must be in 1..=16"));
        }
        if self.k == 0 || self.k > MAX_K {
            return Err(Error::InvalidSize("k must be in 1..=22"));
        }
        if (self.positions() * self.k as usize) % 8 != 0 {
            return Err(Error::InvalidSize("N*k must be a multiple of 8"));
        }
        check_message_theta(self.theta1)?;
        check_message_theta(self.theta2)?;
        if self.theta1 == self.theta2 {
            return Err(Error::InvalidTheta("theta1 and theta2 must differ"));
        }
        check_alpha(&self.alpha, self.positions())?;
        Ok(self)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn theta1(&self) -> f64 {
        self.theta1
    }

    pub fn theta2(&self) -> f64 {
        self.theta2
    }

    pub fn alpha(&self) -> &[Amplitude] {
        &self.alpha
    }

    pub fn alpha_is_unit(&self) -> bool {
        self.alpha == unit_alpha(self.positions())
    }

    /// `N = 2^q`.
    pub fn positions(&self) -> usize {
        1usize << self.q
    }

    pub fn digest_bits(&self) -> usize {
        self.positions() * self.k as usize
    }

    pub fn digest_bytes(&self) -> usize {
        self.digest_bits() / 8
    }

    /// `(θ1-coin, θ2-coin)`.
    pub fn coins(&self) -> (Coin2, Coin2) {
        (
            Coin2::new(self.theta1).expect("validated"),
            Coin2::new(self.theta2).expect("validated"),
        )
    }
}

/// `10^k` built by repeated multiplication; exact for `k ≤ 22`.
fn pow10(k: u32) -> f64 {
    (0..k).fold(1.0, |acc, _| acc * 10.0)
}

/// `floor(fl(p·10^k)) mod 2^k` for a nonnegative probability.
pub fn extract_group(p: f64, k: u32) -> u64 {
    debug_assert!(k >= 1 && k <= MAX_K);
    let mask = (1u64 << k) - 1;
    let v = p * pow10(k);
    if !(v > 0.0) {
        return 0;
    }
    if v < 18446744073709551616.0 {
        // truncation is floor for v >= 0
        return (v as u64) & mask;
    }
    // v >= 2^64 is an integer m·2^e with m < 2^53
    let raw = v.to_bits();
    let exp = ((raw >> 52) & 0x7ff) as i32 - 1075;
    let mantissa = (raw & ((1u64 << 52) - 1)) | (1u64 << 52);
    if exp >= k as i32 {
        0
    } else {
        (((mantissa as u128) << exp) as u64) & mask
    }
}

/// Maps a distribution to `N·k` bits: one `k`-bit group per position,
/// MSB first, ascending `x`.
pub fn postprocess_bits(p: &[f64], k: u32) -> Vec<bool> {
    let mut out = Vec::with_capacity(p.len() * k as usize);
    for &px in p {
        bits::push_group(&mut out, extract_group(px, k), k);
    }
    out
}

pub fn postprocess(p: &[f64], k: u32) -> Digest {
    Digest::from_bits(&postprocess_bits(p, k)).expect("N*k is byte aligned")
}

fn check_spread(p: &[f64]) -> Result<()> {
    match p.iter().position(|&px| px < DEGENERATE_THRESHOLD) {
        Some(position) => Err(Error::DegenerateInit { position }),
        None => Ok(()),
    }
}

/// Streaming hash state.
#[derive(Debug, Clone)]
pub struct HashContext {
    k: u32,
    coin0: Coin2,
    coin1: Coin2,
    pad: Coin2,
    state: WalkState,
    pending: Vec<bool>,
    steps: usize,
}

impl HashContext {
    /// Prepares `α ⊗ |0⟩_c` and runs the all-zero initialization step.
    pub fn new(params: &HashParams) -> Result<Self> {
        let mut ctx = Self::unstepped(params, params.alpha())?;
        let zeros = vec![false; params.positions()];
        ctx.run_block(&zeros);
        check_spread(ctx.state.probabilities().as_slice())?;
        Ok(ctx)
    }

    /// A context over `α ⊗ |0⟩_c` before any step has run.
    pub(crate) fn unstepped(params: &HashParams, alpha: &[Amplitude]) -> Result<Self> {
        let (coin0, coin1) = params.coins();
        Ok(HashContext {
            k: params.k(),
            coin0,
            coin1,
            pad: Coin2::hadamard(),
            state: WalkState::from_position_amplitudes(params.q(), alpha)?,
            pending: Vec::with_capacity(params.positions()),
            steps: 0,
        })
    }

    fn run_block(&mut self, block: &[bool]) {
        self.state
            .step(block, &self.coin0, &self.coin1)
            .expect("block has width N");
        self.steps += 1;
    }

    /// Appends message bits; every completed `N`-bit block drives one step.
    pub fn absorb(&mut self, message: &[bool]) {
        let n = self.state.positions();
        let mut rest = message;
        if !self.pending.is_empty() {
            let take = (n - self.pending.len()).min(rest.len());
            self.pending.extend_from_slice(&rest[..take]);
            rest = &rest[take..];
            if self.pending.len() == n {
                let block = core::mem::take(&mut self.pending);
                self.run_block(&block);
                self.pending = block;
                self.pending.clear();
            }
        }
        let mut blocks = rest.chunks_exact(n);
        for block in &mut blocks {
            self.run_block(block);
        }
        self.pending.extend_from_slice(blocks.remainder());
    }

    /// Absorbs bytes unpacked most-significant bit first.
    pub fn absorb_bytes(&mut self, bytes: &[u8]) {
        self.absorb(&bits::unpack_msb(bytes));
    }

    /// Number of walk steps run so far, including initialization steps.
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn pending_len(&self) -> usize {
        self.pending.len()
    }

    pub fn state(&self) -> &WalkState {
        &self.state
    }

    /// Runs the padded final step if bits are pending.
    fn flush(&mut self) {
        if !self.pending.is_empty() {
            self.state
                .step_padded(&self.pending, &self.coin0, &self.coin1, &self.pad)
                .expect("pending is shorter than N");
            self.pending.clear();
            self.steps += 1;
        }
    }

    /// Absorbs `bits` as a standalone keyed prefix, padding a partial block.
    pub(crate) fn absorb_padded(&mut self, bits: &[bool]) {
        self.absorb(bits);
        self.flush();
    }

    pub fn finalize(mut self) -> Digest {
        self.flush();
        postprocess(self.state.probabilities().as_slice(), self.k)
    }
}

/// One-shot hash of a bit string.
pub fn hash(params: &HashParams, message: &[bool]) -> Result<Digest> {
    let mut ctx = HashContext::new(params)?;
    ctx.absorb(message);
    Ok(ctx.finalize())
}

/// One-shot hash of a byte string (MSB-first bit order).
pub fn hash_bytes(params: &HashParams, message: &[u8]) -> Result<Digest> {
    let mut ctx = HashContext::new(params)?;
    ctx.absorb_bytes(message);
    Ok(ctx.finalize())
}
