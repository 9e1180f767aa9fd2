//! Controlled alternate quantum walk block hash (CAQWBH).
//!
//! A walker on the complete graph with self-loops over `N = 2^q` vertices is
//! simulated exactly on a classical computer. Each walk step consumes an
//! `N`-bit block of the message: bit `x` selects which of two coin operators
//! acts at position `x`. The final position distribution is post-processed
//! into an `N·k`-bit digest.
//!
//! The crate is `no_std` (it needs `alloc`). All floating-point work follows a
//! fixed evaluation order in IEEE-754 binary64 with no fused multiply-add, so
//! digests are bit-identical on every platform.
//!
//! Modules:
//! * [`walk`]: state vector, coin and shift operators, evolution, measurement.
//! * [`hash`]: parameters, streaming context, post-processing into a [`Digest`].
//! * [`keyed`]: keyed MAC and the chained pseudo-random generator.
//! * [`stats`]: avalanche, uniformity, collision and birthday-bound harness.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bits;
mod digest;
mod error;
pub mod hash;
pub mod keyed;
pub mod rng;
pub mod stats;
pub mod walk;

pub use digest::Digest;
pub use error::{Error, Result};
pub use hash::{hash, hash_bytes, HashContext, HashParams};
pub use keyed::{mac, MacKey, PrngState};
pub use rng::TrialRng;
pub use walk::{Amplitude, Coin2, Distribution, WalkState};
