//! Time-position-dependent controlled alternate quantum walk on the complete
//! graph with self-loops `G_N`, `N = 2^q`.
//!
//! The walker lives in `H_p ⊗ H_c`. Amplitudes are stored position-major:
//! the amplitude of `|x, c⟩` sits at index `2·x + c`. This layout, together
//! with the loop orders documented on each operator, is part of the
//! determinism contract: every operator performs the same binary64 operations
//! in the same order on every platform.
//!
//! One walk step is `U = S_q C ⋯ S_2 C S_1 C`, with the same `N`-bit control
//! block selecting the coin at every position for all `q` coin layers.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

use crate::error::{Error, Result};

/// Largest supported number of position bits.
pub const MAX_Q: u32 = 16;

/// A complex probability amplitude in binary64.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Amplitude {
    pub re: f64,
    pub im: f64,
}

impl Amplitude {
    pub const ZERO: Amplitude = Amplitude { re: 0.0, im: 0.0 };
    pub const ONE: Amplitude = Amplitude { re: 1.0, im: 0.0 };

    pub const fn new(re: f64, im: f64) -> Self {
        Amplitude { re, im }
    }

    pub const fn real(re: f64) -> Self {
        Amplitude { re, im: 0.0 }
    }

    /// `|a|² = re·re + im·im`, in that order.
    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Sum of `|a_i|²` in ascending index order.
pub fn norm_sqr(amps: &[Amplitude]) -> f64 {
    amps.iter().fold(0.0, |acc, a| acc + a.norm_sqr())
}

/// The real reflection coin `[[cos θ, sin θ], [sin θ, −cos θ]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coin2 {
    theta: f64,
    c: f64,
    s: f64,
}

impl Coin2 {
    /// Builds the coin for `theta ∈ (0, π/2)`.
    ///
    /// `cos` and `sin` come from the pure-Rust `libm`, not the platform math
    /// library, so the entries are identical everywhere. `θ = π/4` yields the
    /// exact Hadamard coin `c = s = 1/√2`.
    pub fn new(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < FRAC_PI_2) {
            return Err(Error::Domain("coin angle must lie in (0, pi/2)"));
        }
        if theta == FRAC_PI_4 {
            return Ok(Coin2::hadamard());
        }
        Ok(Coin2 {
            theta,
            c: libm::cos(theta),
            s: libm::sin(theta),
        })
    }

    /// The Hadamard coin (`θ = π/4`), used for padding positions.
    pub fn hadamard() -> Self {
        Coin2 {
            theta: FRAC_PI_4,
            c: FRAC_1_SQRT_2,
            s: FRAC_1_SQRT_2,
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn cos(&self) -> f64 {
        self.c
    }

    pub fn sin(&self) -> f64 {
        self.s
    }

    /// Applies the 2×2 action to `(a0, a1)`:
    /// `new0 = c·a0 + s·a1`, `new1 = s·a0 − c·a1`, component-wise.
    #[inline]
    pub fn act(&self, a0: Amplitude, a1: Amplitude) -> (Amplitude, Amplitude) {
        let (c, s) = (self.c, self.s);
        (
            Amplitude {
                re: c * a0.re + s * a1.re,
                im: c * a0.im + s * a1.im,
            },
            Amplitude {
                re: s * a0.re - c * a1.re,
                im: s * a0.im - c * a1.im,
            },
        )
    }
}

/// Position distribution `p(x) = |amp(x,0)|² + |amp(x,1)|²`.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution(Vec<f64>);

impl Distribution {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn total(&self) -> f64 {
        self.0.iter().fold(0.0, |acc, p| acc + p)
    }
}

/// The `2N`-amplitude state of the walker.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    q: u32,
    amps: Vec<Amplitude>,
}

fn check_q(q: u32) -> Result<()> {
    if q == 0 || q > MAX_Q {
        return Err(Error::InvalidSize("q must be in 1..=16"));
    }
    Ok(())
}

impl WalkState {
    /// The basis state `|x⟩_p |c⟩_c`.
    pub fn basis(q: u32, x: usize, c: u8) -> Result<Self> {
        check_q(q)?;
        let n = 1usize << q;
        if x >= n || c > 1 {
            return Err(Error::Domain("basis index out of range"));
        }
        let mut amps = vec![Amplitude::ZERO; 2 * n];
        amps[2 * x + c as usize] = Amplitude::ONE;
        Ok(WalkState { q, amps })
    }

    /// `(Σ_i α_i |i⟩_p) ⊗ |0⟩_c`. Normalization is the caller's concern.
    pub fn from_position_amplitudes(q: u32, alpha: &[Amplitude]) -> Result<Self> {
        check_q(q)?;
        let n = 1usize << q;
        if alpha.len() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                found: alpha.len(),
            });
        }
        let mut amps = vec![Amplitude::ZERO; 2 * n];
        for (x, a) in alpha.iter().enumerate() {
            amps[2 * x] = *a;
        }
        Ok(WalkState { q, amps })
    }

    /// Wraps a raw amplitude vector laid out as `index = 2·x + c`.
    pub fn from_amplitudes(q: u32, amps: Vec<Amplitude>) -> Result<Self> {
        check_q(q)?;
        let expected = 2usize << q;
        if amps.len() != expected {
            return Err(Error::SizeMismatch {
                expected,
                found: amps.len(),
            });
        }
        Ok(WalkState { q, amps })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Number of positions `N = 2^q`.
    pub fn positions(&self) -> usize {
        1usize << self.q
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amps
    }

    pub fn amplitude(&self, x: usize, c: u8) -> Amplitude {
        self.amps[2 * x + c as usize]
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amps)
    }

    fn check_block(&self, len: usize) -> Result<()> {
        if len != self.positions() {
            return Err(Error::SizeMismatch {
                expected: self.positions(),
                found: len,
            });
        }
        Ok(())
    }

    /// One coin layer `C = Σ_x |x⟩⟨x| ⊗ C_2(x)`; position `x` uses
    /// `coin1` when `block[x]` is set and `coin0` otherwise.
    pub fn apply_coin(&mut self, block: &[bool], coin0: &Coin2, coin1: &Coin2) -> Result<()> {
        self.check_block(block.len())?;
        self.coin_layer(|x| if block[x] { coin1 } else { coin0 });
        Ok(())
    }

    /// Ascending `x`; `select(x)` picks the coin at position `x`.
    fn coin_layer<'c>(&mut self, select: impl Fn(usize) -> &'c Coin2) {
        for (x, pair) in self.amps.chunks_exact_mut(2).enumerate() {
            let (n0, n1) = select(x).act(pair[0], pair[1]);
            pair[0] = n0;
            pair[1] = n1;
        }
    }

    /// Shift `S_i` (`1 ≤ i ≤ q`): under coin 1 the position's bit `i`
    /// (value `2^{i−1}`) is flipped; the coin-0 subspace is untouched.
    pub fn apply_shift(&mut self, i: u32) -> Result<()> {
        if i == 0 || i > self.q {
            return Err(Error::Domain("shift index must lie in 1..=q"));
        }
        self.shift_layer(i);
        Ok(())
    }

    fn shift_layer(&mut self, i: u32) {
        let bit = 1usize << (i - 1);
        for x in 0..self.positions() {
            if x & bit == 0 {
                self.amps.swap(2 * x + 1, 2 * (x | bit) + 1);
            }
        }
    }

    /// One walk step `U = S_q C ⋯ S_1 C` controlled by a full `N`-bit block.
    pub fn step(&mut self, block: &[bool], coin0: &Coin2, coin1: &Coin2) -> Result<()> {
        self.check_block(block.len())?;
        self.step_with(|x| if block[x] { coin1 } else { coin0 });
        Ok(())
    }

    /// A step controlled by a partial block: positions `0..prefix.len()` use
    /// the message-selected coins, the remaining positions use `pad`.
    pub fn step_padded(
        &mut self,
        prefix: &[bool],
        coin0: &Coin2,
        coin1: &Coin2,
        pad: &Coin2,
    ) -> Result<()> {
        if prefix.len() > self.positions() {
            return Err(Error::SizeMismatch {
                expected: self.positions(),
                found: prefix.len(),
            });
        }
        self.step_with(|x| match prefix.get(x) {
            Some(true) => coin1,
            Some(false) => coin0,
            None => pad,
        });
        Ok(())
    }

    fn step_with<'c>(&mut self, select: impl Fn(usize) -> &'c Coin2 + Copy) {
        for i in 1..=self.q {
            self.coin_layer(select);
            self.shift_layer(i);
        }
    }

    /// `U(t) ⋯ U(1)`: block 1 is applied first.
    pub fn evolve<'b, I>(&mut self, blocks: I, coin0: &Coin2, coin1: &Coin2) -> Result<()>
    where
        I: IntoIterator<Item = &'b [bool]>,
    {
        for block in blocks {
            self.step(block, coin0, coin1)?;
        }
        Ok(())
    }

    /// Measurement distribution over positions, ascending `x`, coin 0 term
    /// added before coin 1.
    pub fn probabilities(&self) -> Distribution {
        Distribution(
            self.amps
                .chunks_exact(2)
                .map(|pair| pair[0].norm_sqr() + pair[1].norm_sqr())
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coin35() -> Coin2 {
        Coin2::new(libm::acos(0.6)).unwrap()
    }

    #[test]
    fn coin_from_pythagorean_cosine() {
        let c = coin35();
        assert!((c.cos() - 0.6).abs() < 1e-15);
        assert!((c.sin() - 0.8).abs() < 1e-15);
        assert!((c.cos() * c.cos() + c.sin() * c.sin() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hadamard_entries() {
        let h = Coin2::new(FRAC_PI_4).unwrap();
        assert_eq!(h, Coin2::hadamard());
        assert_eq!((h.cos(), h.sin()), (FRAC_1_SQRT_2, FRAC_1_SQRT_2));
    }

    #[test]
    fn coin_domain() {
        for bad in [0.0, FRAC_PI_2, -0.1, 2.0, f64::NAN] {
            assert!(matches!(Coin2::new(bad), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn coin_on_basis_state() {
        let mut st = WalkState::basis(3, 0, 0).unwrap();
        let c = coin35();
        st.apply_coin(&[false; 8], &c, &c).unwrap();
        assert!((st.amplitude(0, 0).re - 0.6).abs() < 1e-15);
        assert!((st.amplitude(0, 1).re - 0.8).abs() < 1e-15);
        assert!(st.amplitudes()[2..].iter().all(|a| *a == Amplitude::ZERO));
    }

    #[test]
    fn hadamard_on_basis_state() {
        let mut st = WalkState::basis(1, 0, 0).unwrap();
        let h = Coin2::hadamard();
        st.apply_coin(&[false, false], &h, &h).unwrap();
        let r = core::f64::consts::FRAC_1_SQRT_2;
        assert!((st.amplitude(0, 0).re - r).abs() < 1e-15);
        assert!((st.amplitude(0, 1).re - r).abs() < 1e-15);
    }

    #[test]
    fn block_length_checked() {
        let mut st = WalkState::basis(2, 0, 0).unwrap();
        let c = coin35();
        assert_eq!(
            st.apply_coin(&[false; 3], &c, &c),
            Err(Error::SizeMismatch { expected: 4, found: 3 })
        );
        assert!(st.step(&[false; 5], &c, &c).is_err());
    }

    #[test]
    fn shift_moves_coin_one_only() {
        let mut st = WalkState::basis(2, 0, 1).unwrap();
        st.apply_shift(1).unwrap();
        assert_eq!(st.amplitude(1, 1), Amplitude::ONE);

        let mut st = WalkState::basis(2, 1, 1).unwrap();
        st.apply_shift(2).unwrap();
        assert_eq!(st.amplitude(3, 1), Amplitude::ONE);

        for x in 0..4 {
            for i in 1..=2 {
                let mut st = WalkState::basis(2, x, 0).unwrap();
                st.apply_shift(i).unwrap();
                assert_eq!(st.amplitude(x, 0), Amplitude::ONE);
            }
        }
    }

    #[test]
    fn shift_index_range() {
        let mut st = WalkState::basis(3, 0, 0).unwrap();
        assert!(st.apply_shift(0).is_err());
        assert!(st.apply_shift(4).is_err());
        assert!(st.apply_shift(3).is_ok());
    }

    #[test]
    fn single_step_q1() {
        let mut st = WalkState::basis(1, 0, 0).unwrap();
        let c = coin35();
        st.step(&[false, false], &c, &c).unwrap();
        let a = st.amplitudes();
        assert!((a[0].re - 0.6).abs() < 1e-15);
        assert_eq!(a[1], Amplitude::ZERO);
        assert_eq!(a[2], Amplitude::ZERO);
        assert!((a[3].re - 0.8).abs() < 1e-15);
        let p = st.probabilities();
        assert!((p.as_slice()[0] - 0.36).abs() < 1e-15);
        assert!((p.as_slice()[1] - 0.64).abs() < 1e-15);
    }

    #[test]
    fn basis_distribution_is_delta() {
        let st = WalkState::basis(2, 3, 1).unwrap();
        assert_eq!(st.probabilities().as_slice(), &[0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn evolve_empty_is_identity() {
        let mut st = WalkState::basis(2, 1, 0).unwrap();
        let before = st.clone();
        let c = coin35();
        st.evolve(core::iter::empty(), &c, &c).unwrap();
        assert_eq!(st, before);
    }

    #[test]
    fn padded_step_with_full_prefix_is_step() {
        let c0 = coin35();
        let c1 = Coin2::new(libm::acos(8.0 / 17.0)).unwrap();
        let block = [true, false, true, true];
        let mut a = WalkState::basis(2, 0, 0).unwrap();
        let mut b = a.clone();
        a.step(&block, &c0, &c1).unwrap();
        b.step_padded(&block, &c0, &c1, &Coin2::hadamard()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn constructors_check_sizes() {
        assert!(WalkState::basis(0, 0, 0).is_err());
        assert!(WalkState::basis(17, 0, 0).is_err());
        assert!(WalkState::basis(2, 4, 0).is_err());
        assert!(WalkState::from_position_amplitudes(2, &[Amplitude::ONE; 3]).is_err());
        assert!(WalkState::from_amplitudes(2, alloc::vec![Amplitude::ZERO; 7]).is_err());
    }
}
