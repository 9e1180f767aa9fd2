use caqwbh_core::hash::{self, extract_group, postprocess, HashContext, HashParams};
use caqwbh_core::keyed::{mac, MacKey, PrngState};
use caqwbh_core::stats::{self, Mutation};
use caqwbh_core::{Amplitude, Coin2, Digest, TrialRng, WalkState};
use num_bigint::BigUint;
use proptest::prelude::*;

fn coins() -> (Coin2, Coin2) {
    HashParams::caqwbh256().coins()
}

fn random_state(q: u32, rng: &mut TrialRng) -> WalkState {
    let mut uniform = || (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
    let mut v: Vec<Amplitude> = (0..(2usize << q)).map(|_| Amplitude::new(uniform(), uniform())).collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut v {
        a.re /= norm;
        a.im /= norm;
    }
    WalkState::from_amplitudes(q, v).unwrap()
}

#[test]
fn long_evolutions_stay_normalized() {
    let (c0, c1) = coins();
    for q in [2u32, 5] {
        let mut rng = TrialRng::new(11, q as u64);
        let mut st = WalkState::basis(q, 0, 0).unwrap();
        for _ in 0..1000 {
            let block = rng.bits(1 << q);
            st.step(&block, &c0, &c1).unwrap();
        }
        assert!((st.norm_sqr() - 1.0).abs() < 1e-10);
        assert!((st.probabilities().total() - 1.0).abs() < 1e-10);
        assert!(st.amplitudes().iter().all(|a| a.is_finite()));
    }
}

#[test]
fn coin_layer_is_an_involution() {
    let (c0, c1) = coins();
    let mut rng = TrialRng::new(3, 0);
    for _ in 0..50 {
        let start = random_state(4, &mut rng);
        let block = rng.bits(16);
        let mut st = start.clone();
        st.apply_coin(&block, &c0, &c1).unwrap();
        assert!((st.norm_sqr() - 1.0).abs() < 1e-12);
        st.apply_coin(&block, &c0, &c1).unwrap();
        for (a, b) in st.amplitudes().iter().zip(start.amplitudes()) {
            assert!((a.re - b.re).abs() < 1e-13 && (a.im - b.im).abs() < 1e-13);
        }
    }
}

#[test]
fn shift_twice_is_exact_identity() {
    let mut rng = TrialRng::new(4, 0);
    let start = random_state(4, &mut rng);
    for i in 1..=4 {
        let mut st = start.clone();
        st.apply_shift(i).unwrap();
        st.apply_shift(i).unwrap();
        assert_eq!(st, start);
    }
}

#[test]
fn one_step_reaches_every_position() {
    let mut rng = TrialRng::new(5, 0);
    for &(t0, t1) in &[(0.3, 1.2), (0.1, 0.9), (hash::default_theta1(), hash::default_theta2())] {
        let c0 = Coin2::new(t0).unwrap();
        let c1 = Coin2::new(t1).unwrap();
        for q in 1..=6u32 {
            let mut st = WalkState::basis(q, 0, 0).unwrap();
            st.step(&rng.bits(1 << q), &c0, &c1).unwrap();
            assert!(st.probabilities().as_slice().iter().all(|&p| p > 0.0));
        }
    }
}

#[test]
fn evolve_composes_in_order() {
    let (c0, c1) = coins();
    let mut rng = TrialRng::new(6, 0);
    let start = random_state(3, &mut rng);
    let b1 = rng.bits(8);
    let b2 = rng.bits(8);
    let mut folded = start.clone();
    folded.evolve([&b1[..], &b2[..]], &c0, &c1).unwrap();
    let mut manual = start.clone();
    manual.step(&b1, &c0, &c1).unwrap();
    manual.step(&b2, &c0, &c1).unwrap();
    assert_eq!(folded, manual);
    let mut single = start.clone();
    single.evolve([&b1[..]], &c0, &c1).unwrap();
    let mut direct = start;
    direct.step(&b1, &c0, &c1).unwrap();
    assert_eq!(single, direct);
}

#[test]
fn repeated_runs_are_bit_identical() {
    let params = HashParams::caqwbh256();
    let msg = TrialRng::new(8, 0).bits(777);
    let a = hash::hash(&params, &msg).unwrap();
    let b = hash::hash(&params, &msg).unwrap();
    assert_eq!(a, b);
    let mut s1 = WalkState::basis(5, 0, 0).unwrap();
    let mut s2 = s1.clone();
    let (c0, c1) = coins();
    for block in msg.chunks_exact(32) {
        s1.step(block, &c0, &c1).unwrap();
        s2.step(block, &c0, &c1).unwrap();
    }
    let bits = |s: &WalkState| -> Vec<u64> {
        s.amplitudes().iter().flat_map(|a| [a.re.to_bits(), a.im.to_bits()]).collect()
    };
    assert_eq!(bits(&s1), bits(&s2));
}

#[test]
fn step_count_for_block_aligned_messages() {
    let params = HashParams::caqwbh256();
    for t in 0..5 {
        let mut ctx = HashContext::new(&params).unwrap();
        ctx.absorb(&vec![true; 32 * t]);
        assert_eq!(ctx.steps(), t + 1);
        assert_eq!(ctx.pending_len(), 0);
        assert_eq!(ctx.finalize().bit_len(), 256);
    }
}

#[test]
fn empty_message_digest_is_post_init_distribution() {
    let params = HashParams::caqwbh256();
    let ctx = HashContext::new(&params).unwrap();
    let expect = postprocess(ctx.state().probabilities().as_slice(), 8);
    assert_eq!(hash::hash(&params, &[]).unwrap(), expect);
}

#[test]
fn padding_uses_hadamard_on_missing_positions() {
    let params = HashParams::caqwbh256();
    let msg = [true, false, true];
    let (c0, c1) = params.coins();
    let mut st = HashContext::new(&params).unwrap().state().clone();
    st.step_padded(&msg, &c0, &c1, &Coin2::hadamard()).unwrap();
    assert_eq!(hash::hash(&params, &msg).unwrap(), postprocess(st.probabilities().as_slice(), 8));
}

#[test]
fn byte_input_is_msb_first() {
    let params = HashParams::caqwbh256();
    let bits: Vec<bool> = "0110000101100010".chars().map(|c| c == '1').collect();
    assert_eq!(
        hash::hash_bytes(&params, b"ab").unwrap(),
        hash::hash(&params, &bits).unwrap()
    );
}

/// `floor(p · 10^k) mod 2^k` evaluated in exact rational arithmetic for
/// `p = j / 2^m`.
fn exact_group(j: u64, m: u32, k: u32) -> u64 {
    let num = BigUint::from(j) * BigUint::from(10u32).pow(k);
    let floor = num >> m as usize;
    let modulus = BigUint::from(1u64) << k as usize;
    (floor % modulus).iter_u64_digits().next().unwrap_or(0)
}

proptest! {
    #[test]
    fn extraction_matches_exact_arithmetic(m in 0u32..=20, j_raw in any::<u64>(), k in 1u32..=8) {
        // p = j / 2^m with j ≤ 2^m, and j · 10^k < 2^53 so the product is exact
        let j = j_raw % ((1u64 << m) + 1);
        let p = j as f64 / (1u64 << m) as f64;
        prop_assert_eq!(extract_group(p, k), exact_group(j, m, k));
    }

    #[test]
    fn streaming_partitions_agree(
        len in 0usize..300,
        cuts in proptest::collection::vec(0usize..300, 0..6),
        seed in any::<u64>(),
    ) {
        let params = HashParams::new(4, 8, 0.4, 1.0).unwrap();
        let msg = TrialRng::new(seed, 0).bits(len);
        let mut points: Vec<usize> = cuts.into_iter().map(|c| c % (len + 1)).collect();
        points.sort_unstable();
        let mut ctx = HashContext::new(&params).unwrap();
        let mut prev = 0;
        for p in points.into_iter().chain([len]) {
            ctx.absorb(&msg[prev..p]);
            prev = p;
        }
        prop_assert_eq!(ctx.finalize(), hash::hash(&params, &msg).unwrap());
    }

    #[test]
    fn trivial_key_mac_is_hash(len in 0usize..400, seed in any::<u64>()) {
        let params = HashParams::caqwbh256();
        let msg = TrialRng::new(seed, 1).bits(len);
        prop_assert_eq!(
            mac(&params, &MacKey::trivial(32), &msg).unwrap(),
            hash::hash(&params, &msg).unwrap()
        );
    }

    #[test]
    fn omega_is_symmetric(a in proptest::collection::vec(any::<u8>(), 32), b in proptest::collection::vec(any::<u8>(), 32)) {
        let (a, b) = (Digest::from_bytes(a), Digest::from_bytes(b));
        prop_assert_eq!(stats::omega(&a, &b).unwrap(), stats::omega(&b, &a).unwrap());
    }
}

#[test]
fn two_blocks_in_two_calls() {
    let params = HashParams::caqwbh256();
    let msg = TrialRng::new(9, 0).bits(64);
    let mut a = HashContext::new(&params).unwrap();
    a.absorb(&msg[..32]);
    a.absorb(&msg[32..]);
    let mut b = HashContext::new(&params).unwrap();
    b.absorb(&msg);
    assert_eq!(a.state(), b.state());
}

#[test]
fn avalanche_on_single_bit_flips() {
    let params = HashParams::caqwbh256();
    let set = stats::TrialSet::run(&params, 1000, 1024, 2024).unwrap();
    let r = set.diffusion().unwrap();
    // binomial(256, 1/2): standard error of the mean over 1000 trials is 8/sqrt(1000)
    let se = 8.0 / (1000f64).sqrt();
    assert!((r.b_mean - 128.0).abs() < 3.0 * se, "b_mean {}", r.b_mean);
    assert!(r.b_min as f64 <= r.b_mean && r.b_mean <= r.b_max as f64);
    assert!(r.b_max <= 256);
}

fn flip_key2(params: &HashParams, key2: Vec<bool>, at: usize, msg: &[bool]) -> u32 {
    let mut key2b = key2.clone();
    key2b[at] = !key2b[at];
    let k1 = MacKey::new(hash::unit_alpha(32), key2, 32).unwrap();
    let k2 = MacKey::new(hash::unit_alpha(32), key2b, 32).unwrap();
    mac(params, &k1, msg).unwrap().hamming(&mac(params, &k2, msg).unwrap()).unwrap()
}

#[test]
fn mac_key2_sensitivity() {
    let params = HashParams::caqwbh256();
    let mut total = 0u64;
    let trials = 1000;
    for i in 0..trials {
        let mut rng = TrialRng::new(77, i);
        let key2 = rng.bits(64);
        let msg = rng.bits(256);
        // from a basis state the first block's upper half is never consulted
        let mut at = rng.below(48) as usize;
        if at >= 16 {
            at += 16;
        }
        total += flip_key2(&params, key2, at, &msg) as u64;
    }
    let mean = total as f64 / trials as f64;
    assert!((mean - 128.0).abs() < 3.0 * 8.0 / (trials as f64).sqrt(), "mean {mean}");
}

#[test]
fn first_key_block_upper_half_is_inert_for_basis_key1() {
    let params = HashParams::caqwbh256();
    for i in 0..50 {
        let mut rng = TrialRng::new(78, i);
        let key2 = rng.bits(64);
        let msg = rng.bits(100);
        let at = 16 + rng.below(16) as usize;
        assert_eq!(flip_key2(&params, key2, at, &msg), 0);
    }
}

#[test]
fn mac_key1_changes_tag() {
    let params = HashParams::caqwbh256();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut key1 = vec![Amplitude::ZERO; 32];
    key1[0] = Amplitude::real(r);
    key1[5] = Amplitude::new(0.0, r);
    let keyed = MacKey::new(key1, vec![false; 32], 32).unwrap();
    let msg = TrialRng::new(1, 1).bits(100);
    let a = mac(&params, &keyed, &msg).unwrap();
    let b = mac(&params, &MacKey::trivial(32), &msg).unwrap();
    assert!(a.hamming(&b).unwrap() > 64);
}

#[test]
fn prng_first_block_is_one_step() {
    let params = HashParams::caqwbh256();
    let init = TrialRng::new(10, 0).bits(32);
    let alpha = hash::unit_alpha(32);
    let mut prng = PrngState::seed(&params, &alpha, &init).unwrap();
    let (c0, c1) = params.coins();
    let mut st = WalkState::from_position_amplitudes(5, &alpha).unwrap();
    st.step(&init, &c0, &c1).unwrap();
    assert_eq!(prng.next_block(), postprocess(st.probabilities().as_slice(), 8));

    let mut again = PrngState::seed(&params, &alpha, &init).unwrap();
    let mut other = PrngState::seed(&params, &alpha, &init).unwrap();
    assert_eq!(again.fill(5000), other.fill(5000));
}

#[test]
fn prng_output_length_and_monobit() {
    let params = HashParams::caqwbh256();
    let mut prng = PrngState::seed(&params, &hash::unit_alpha(32), &[false; 32]).unwrap();
    let mut total = 0usize;
    for m in 1..=4 {
        total += prng.next_block().bit_len();
        assert_eq!(total, m * 256);
    }
    let bits = prng.fill(1_000_000);
    let ones = bits.iter().filter(|b| **b).count() as f64 / bits.len() as f64;
    assert!((0.495..=0.505).contains(&ones), "ones fraction {ones}");
}

#[test]
fn prng_chaining_propagates_seed_changes() {
    let params = HashParams::caqwbh256();
    let alpha = hash::unit_alpha(32);
    let mut differing = 0u64;
    let trials = 200;
    for i in 0..trials {
        let mut rng = TrialRng::new(12, i);
        let init = rng.bits(32);
        let mut flipped = init.clone();
        // positions >= N/2 of the first block do not act on a basis state
        let at = rng.below(16) as usize;
        flipped[at] = !flipped[at];
        let mut a = PrngState::seed(&params, &alpha, &init).unwrap();
        let mut b = PrngState::seed(&params, &alpha, &flipped).unwrap();
        a.next_block();
        b.next_block();
        // the second block sees the change through both state and feedback
        differing += a.next_block().hamming(&b.next_block()).unwrap() as u64;
    }
    let mean = differing as f64 / trials as f64;
    assert!((mean - 128.0).abs() < 3.0 * 8.0 / (trials as f64).sqrt(), "mean {mean}");
}

#[test]
fn sensitivity_conditions() {
    let params = HashParams::caqwbh256();
    for seed in 0..20 {
        let mut rng = TrialRng::new(seed, 0);
        let msg = rng.bits(1024);
        let r = stats::sensitivity_report(&params, &msg, &mut rng).unwrap();
        assert_eq!(r.digests.len(), 4);
        assert!(r.digests.iter().all(|d| d.bit_len() == 256));
        for d in r.distances {
            assert!(d >= 64, "seed {seed}: only {d} bits differ");
        }
        let again = stats::sensitivity_report(&params, &msg, &mut TrialRng::new(seed, 1)).unwrap();
        assert_eq!(again.digests[0], r.digests[0]);
    }
    assert!(stats::sensitivity_report(&params, &[], &mut TrialRng::new(0, 0)).is_err());
    assert_eq!(
        stats::mutate(&[true, true], Mutation::Flip, &mut TrialRng::new(0, 0)).unwrap().len(),
        2
    );
}

#[test]
fn w_theoretical_sums_to_trials() {
    for n in [16u32, 32, 64] {
        let s: f64 = (0..=n).map(|w| stats::w_theoretical(10000, n, w).unwrap()).sum();
        assert!((s - 10000.0).abs() < 1e-6, "n={n}: {s}");
    }
}
