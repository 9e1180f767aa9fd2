//! Statistical harness: message sensitivity, diffusion and confusion,
//! per-location uniformity, byte-collision counts with their binomial model,
//! and the birthday bound.
//!
//! Every trial `i` draws its message and flip position from
//! `TrialRng::new(seed, i)`, so serial and parallel runs produce the same
//! [`TrialSet`]. Reports are computed from a `TrialSet` by plain index-order
//! folds.

pub mod bands;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::digest::Digest;
use crate::error::{Error, Result};
use crate::hash::{self, HashParams};
use crate::rng::TrialRng;

/// Small edits applied to a message.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    /// Invert one bit.
    Flip,
    /// Remove one bit.
    Delete,
    /// Insert one random bit at a position in `[0, len]`.
    Insert,
}

pub fn mutate(message: &[bool], mutation: Mutation, rng: &mut TrialRng) -> Result<Vec<bool>> {
    let len = message.len();
    let mut out = message.to_vec();
    match mutation {
        Mutation::Flip | Mutation::Delete if len == 0 => return Err(Error::EmptyMessage),
        Mutation::Flip => {
            let at = rng.below(len as u64) as usize;
            out[at] = !out[at];
        }
        Mutation::Delete => {
            let at = rng.below(len as u64) as usize;
            out.remove(at);
        }
        Mutation::Insert => {
            let at = rng.below(len as u64 + 1) as usize;
            let bit = rng.bit();
            out.insert(at, bit);
        }
    }
    Ok(out)
}

/// Digests of an original message and its flip, delete and insert
/// variants, with the Hamming distance of each variant from the original.
#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityReport {
    pub digests: [Digest; 4],
    pub distances: [u32; 3],
}

pub fn sensitivity_report(
    params: &HashParams,
    message: &[bool],
    rng: &mut TrialRng,
) -> Result<SensitivityReport> {
    if message.is_empty() {
        return Err(Error::EmptyMessage);
    }
    let flipped = mutate(message, Mutation::Flip, rng)?;
    let deleted = mutate(message, Mutation::Delete, rng)?;
    let inserted = mutate(message, Mutation::Insert, rng)?;
    let digests = [
        hash::hash(params, message)?,
        hash::hash(params, &flipped)?,
        hash::hash(params, &deleted)?,
        hash::hash(params, &inserted)?,
    ];
    let distances = [
        digests[0].hamming(&digests[1])?,
        digests[0].hamming(&digests[2])?,
        digests[0].hamming(&digests[3])?,
    ];
    Ok(SensitivityReport { digests, distances })
}

/// Digests of a random message and of the same message with one bit flipped.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub original: Digest,
    pub mutated: Digest,
}

/// Trial `index` of a run: a random `msg_len`-bit message and its one-bit flip.
pub fn run_trial(params: &HashParams, msg_len: usize, seed: u64, index: u64) -> Result<TrialOutcome> {
    let mut rng = TrialRng::new(seed, index);
    let message = rng.bits(msg_len);
    let mutated = mutate(&message, Mutation::Flip, &mut rng)?;
    Ok(TrialOutcome {
        original: hash::hash(params, &message)?,
        mutated: hash::hash(params, &mutated)?,
    })
}

/// The outcomes of `T` trials in index order.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialSet {
    n_bits: usize,
    outcomes: Vec<TrialOutcome>,
}

impl TrialSet {
    pub fn run(params: &HashParams, trials: usize, msg_len: usize, seed: u64) -> Result<Self> {
        let outcomes = (0..trials as u64)
            .map(|i| run_trial(params, msg_len, seed, i))
            .collect::<Result<Vec<_>>>()?;
        Self::from_outcomes(params.digest_bits(), outcomes)
    }

    /// Wraps outcomes produced elsewhere (e.g. on a thread pool); they must
    /// be in trial-index order.
    pub fn from_outcomes(n_bits: usize, outcomes: Vec<TrialOutcome>) -> Result<Self> {
        for o in &outcomes {
            for d in [&o.original, &o.mutated] {
                if d.bit_len() != n_bits {
                    return Err(Error::SizeMismatch {
                        expected: n_bits,
                        found: d.bit_len(),
                    });
                }
            }
        }
        Ok(TrialSet { n_bits, outcomes })
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn outcomes(&self) -> &[TrialOutcome] {
        &self.outcomes
    }

    pub fn diffusion(&self) -> Result<DiffusionReport> {
        let counts = self
            .outcomes
            .iter()
            .map(|o| o.original.hamming(&o.mutated))
            .collect::<Result<Vec<_>>>()?;
        DiffusionReport::from_counts(counts, self.n_bits)
    }

    pub fn uniformity(&self) -> Result<UniformityReport> {
        if self.outcomes.is_empty() {
            return Err(Error::Domain("uniformity needs at least one trial"));
        }
        let mut per_location = vec![0u64; self.n_bits];
        for o in &self.outcomes {
            for (j, (a, b)) in o.original.as_bytes().iter().zip(o.mutated.as_bytes()).enumerate() {
                let diff = a ^ b;
                for bit in 0..8 {
                    if (diff >> (7 - bit)) & 1 == 1 {
                        per_location[8 * j + bit] += 1;
                    }
                }
            }
        }
        let total: u64 = per_location.iter().sum();
        Ok(UniformityReport {
            trials: self.outcomes.len(),
            mean_count: total as f64 / self.n_bits as f64,
            per_location,
        })
    }

    pub fn collision(&self) -> Result<CollisionReport> {
        if self.outcomes.is_empty() {
            return Err(Error::Domain("collision test needs at least one trial"));
        }
        let n_bytes = self.n_bits / 8;
        let mut counts = vec![0u64; n_bytes + 1];
        for o in &self.outcomes {
            counts[omega(&o.original, &o.mutated)? as usize] += 1;
        }
        let trials = self.outcomes.len();
        let theory = (0..=n_bytes)
            .map(|w| w_theoretical(trials as u64, n_bytes as u32, w as u32))
            .collect::<Result<Vec<_>>>()?;
        Ok(CollisionReport {
            trials,
            n_bytes,
            counts,
            theory,
        })
    }
}

/// Changed-bit statistics over `T` one-bit-flip trials.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffusionReport {
    pub trials: usize,
    /// `B_i`, the changed-bit count of trial `i`.
    pub counts: Vec<u32>,
    pub b_min: u32,
    pub b_max: u32,
    pub b_mean: f64,
    /// Mean changed probability, in percent.
    pub p_mean: f64,
    pub delta_b: f64,
    /// Standard deviation of the changed probability, in percent.
    pub delta_p: f64,
    pub n_bits: usize,
}

impl DiffusionReport {
    /// Indicators with sample (`T − 1`) standard deviations and denominator
    /// `n_bits`.
    pub fn from_counts(counts: Vec<u32>, n_bits: usize) -> Result<Self> {
        let t = counts.len();
        if t < 2 {
            return Err(Error::Domain("diffusion needs at least two trials"));
        }
        let n = n_bits as f64;
        let b_min = *counts.iter().min().expect("nonempty");
        let b_max = *counts.iter().max().expect("nonempty");
        let b_mean = counts.iter().fold(0.0, |acc, &b| acc + b as f64) / t as f64;
        let p = b_mean / n;
        let var_b = counts.iter().fold(0.0, |acc, &b| {
            let d = b as f64 - b_mean;
            acc + d * d
        }) / (t - 1) as f64;
        let var_p = counts.iter().fold(0.0, |acc, &b| {
            let d = b as f64 / n - p;
            acc + d * d
        }) / (t - 1) as f64;
        Ok(DiffusionReport {
            trials: t,
            b_min,
            b_max,
            b_mean,
            p_mean: p * 100.0,
            delta_b: libm::sqrt(var_b),
            delta_p: libm::sqrt(var_p) * 100.0,
            n_bits,
            counts,
        })
    }
}

/// How often each digest bit location flipped across `T` trials.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformityReport {
    pub trials: usize,
    pub per_location: Vec<u64>,
    pub mean_count: f64,
}

/// Observed and expected frequencies of `ω`, the number of equal bytes at
/// equal positions.
#[derive(Debug, Clone, PartialEq)]
pub struct CollisionReport {
    pub trials: usize,
    pub n_bytes: usize,
    /// `counts[ω]`.
    pub counts: Vec<u64>,
    /// `theory[ω] = W_T(ω)`.
    pub theory: Vec<f64>,
}

/// Number of byte positions at which two digests agree.
pub fn omega(a: &Digest, b: &Digest) -> Result<u32> {
    if a.as_bytes().len() != b.as_bytes().len() {
        return Err(Error::SizeMismatch {
            expected: a.as_bytes().len(),
            found: b.as_bytes().len(),
        });
    }
    Ok(a.as_bytes()
        .iter()
        .zip(b.as_bytes())
        .filter(|(x, y)| x == y)
        .count() as u32)
}

fn binomial(n: u32, k: u32) -> BigUint {
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        // exact at every step: acc = C(n, i + 1)
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `W_T(ω) = T · C(n, ω) · (1/256)^ω · (255/256)^{n−ω}`.
///
/// The product `T · C(n, ω) · 255^{n−ω}` is formed exactly and divided by
/// `256^n = 2^{8n}` with a single rounding to binary64.
pub fn w_theoretical(trials: u64, n: u32, w: u32) -> Result<f64> {
    if w > n {
        return Err(Error::Domain("omega must lie in 0..=n"));
    }
    let numerator = BigUint::from(trials) * binomial(n, w) * BigUint::from(255u32).pow(n - w);
    Ok(scale_pow2(&numerator, 8 * n as i64))
}

/// `x / 2^shift` rounded once to binary64.
fn scale_pow2(x: &BigUint, shift: i64) -> f64 {
    let bits = x.bits() as i64;
    if bits == 0 {
        return 0.0;
    }
    // keep 64 leading bits; the dropped tail only matters below 2^-63 relative
    let drop = (bits - 64).max(0);
    let top = (x >> drop as usize).to_u64().expect("at most 64 bits");
    libm::ldexp(top as f64, (drop - shift) as i32)
}

/// `2^{n/2}` for an even digest length, with its exact decimal expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct BirthdayBound {
    pub n_bits: u32,
    pub exponent: u32,
    pub approx: f64,
    pub exact: String,
}

impl fmt::Display for BirthdayBound {
    /// `2^128 ≈ 3.4028×10^38`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2^{} \u{2248} {}", self.exponent, scientific(self.approx, 4))
    }
}

/// `x` as `m.dddd×10^e` with `digits` fractional digits.
pub fn scientific(x: f64, digits: usize) -> String {
    let s = alloc::format!("{x:.digits$e}");
    match s.split_once('e') {
        Some((mantissa, exp)) => alloc::format!("{mantissa}\u{00d7}10^{exp}"),
        None => s,
    }
}

pub fn birthday_bound(n_bits: u32) -> Result<BirthdayBound> {
    if n_bits == 0 || n_bits % 2 != 0 {
        return Err(Error::Domain("digest length must be even and positive"));
    }
    let exponent = n_bits / 2;
    let exact = BigUint::one() << exponent as usize;
    Ok(BirthdayBound {
        n_bits,
        exponent,
        approx: libm::ldexp(1.0, exponent as i32),
        exact: exact.to_str_radix(10),
    })
}
