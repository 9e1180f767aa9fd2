//! Acceptance bands for `--assert` style checks.
//!
//! The reference point is a 256-bit digest over `T = 10000` trials, where the
//! bands are:
//!
//! | statistic | band |
//! |---|---|
//! | mean changed bits | `[127, 129]` |
//! | mean changed probability | `[49.6 %, 50.4 %]` |
//! | changed-bit std. deviation | `[7.3, 8.7]` |
//! | min / max changed bits | `≥ 90` / `≤ 166` |
//! | per-location flip counts | `[4700, 5300]` |
//! | mean per-location count | `[4950, 5050]` |
//! | observed `ω = 0` | within 100 of `W_T(0)` |
//! | observed `ω ≥ 5` | 0 |
//!
//! Elsewhere each half-width is scaled by the ratio of the statistic's
//! standard error to its value at the reference point.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{CollisionReport, DiffusionReport, UniformityReport};

const REF_BITS: f64 = 256.0;
const REF_TRIALS: f64 = 10000.0;
const REF_BYTES: u32 = 32;

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub lo: f64,
    pub hi: f64,
}

impl Band {
    fn centered(center: f64, half: f64) -> Self {
        Band {
            lo: center - half,
            hi: center + half,
        }
    }

    pub fn contains(&self, v: f64) -> bool {
        v >= self.lo && v <= self.hi
    }
}

fn check(out: &mut Vec<String>, name: &str, v: f64, band: Band) {
    if !band.contains(v) {
        out.push(format!("{name} = {v} outside [{}, {}]", band.lo, band.hi));
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionBands {
    pub b_mean: Band,
    pub p_mean: Band,
    pub delta_b: Band,
    pub b_min_floor: f64,
    pub b_max_ceiling: f64,
}

impl DiffusionBands {
    pub fn for_run(n_bits: usize, trials: usize) -> Self {
        let n = n_bits as f64;
        let t = trials as f64;
        let sigma = libm::sqrt(n) / 2.0;
        let ref_sigma = libm::sqrt(REF_BITS) / 2.0;
        let mean_se = sigma / libm::sqrt(t);
        let ref_mean_se = ref_sigma / libm::sqrt(REF_TRIALS);
        let p_se = mean_se / n;
        let ref_p_se = ref_mean_se / REF_BITS;
        let sd_scale = (sigma / ref_sigma) * libm::sqrt(REF_TRIALS / t);
        // extremes widen like sqrt(2 ln T); never tighter than the reference
        let z = 4.75 * (libm::sqrt(libm::log(t) / libm::log(REF_TRIALS))).max(1.0);
        DiffusionBands {
            b_mean: Band::centered(n / 2.0, 1.0 * mean_se / ref_mean_se),
            p_mean: Band::centered(50.0, 0.4 * p_se / ref_p_se),
            delta_b: Band::centered(sigma, 0.7 * sd_scale),
            b_min_floor: n / 2.0 - z * sigma,
            b_max_ceiling: n / 2.0 + z * sigma,
        }
    }

    pub fn violations(&self, r: &DiffusionReport) -> Vec<String> {
        let mut out = Vec::new();
        check(&mut out, "b_mean", r.b_mean, self.b_mean);
        check(&mut out, "p_mean", r.p_mean, self.p_mean);
        check(&mut out, "delta_b", r.delta_b, self.delta_b);
        if (r.b_min as f64) < self.b_min_floor {
            out.push(format!("b_min = {} below {}", r.b_min, self.b_min_floor));
        }
        if (r.b_max as f64) > self.b_max_ceiling {
            out.push(format!("b_max = {} above {}", r.b_max, self.b_max_ceiling));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformityBands {
    pub per_location: Band,
    pub mean_count: Band,
}

impl UniformityBands {
    pub fn for_run(n_bits: usize, trials: usize) -> Self {
        let t = trials as f64;
        let sigma = libm::sqrt(t) / 2.0;
        UniformityBands {
            per_location: Band::centered(t / 2.0, 6.0 * sigma),
            mean_count: Band::centered(t / 2.0, 16.0 * sigma / libm::sqrt(n_bits as f64)),
        }
    }

    pub fn violations(&self, r: &UniformityReport) -> Vec<String> {
        let mut out = Vec::new();
        for (j, &c) in r.per_location.iter().enumerate() {
            check(&mut out, &format!("per_location[{j}]"), c as f64, self.per_location);
        }
        check(&mut out, "mean_count", r.mean_count, self.mean_count);
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollisionBands {
    /// Allowed distance of the observed `ω = 0` count from `W_T(0)`.
    pub omega0_tolerance: f64,
    /// Observed counts for `ω ≥ this` must be zero.
    pub zero_from: usize,
}

fn omega0_sigma(trials: f64, n_bytes: u32) -> f64 {
    let p0 = libm::pow(255.0 / 256.0, n_bytes as f64);
    libm::sqrt(trials * p0 * (1.0 - p0))
}

impl CollisionBands {
    pub fn for_run(n_bytes: usize, trials: usize) -> Self {
        let ratio = omega0_sigma(trials as f64, n_bytes as u32) / omega0_sigma(REF_TRIALS, REF_BYTES);
        CollisionBands {
            omega0_tolerance: 100.0 * ratio,
            zero_from: 5,
        }
    }

    pub fn violations(&self, r: &CollisionReport) -> Vec<String> {
        let mut out = Vec::new();
        let d = (r.counts[0] as f64 - r.theory[0]).abs();
        if d > self.omega0_tolerance {
            out.push(format!(
                "omega=0 count {} differs from {:.2} by more than {:.2}",
                r.counts[0], r.theory[0], self.omega0_tolerance
            ));
        }
        let tail: u64 = r.counts.iter().skip(self.zero_from).sum();
        if tail != 0 {
            out.push(format!("{tail} trials with omega >= {}", self.zero_from));
        }
        out
    }
}
