//! Deterministic seeded sampling over big-integer ranges.
//!
//! Every randomized code path in this crate derives its stream from an
//! explicit 64-bit seed plus a shard index, so identical inputs always
//! reproduce identical outputs.

use num_bigint::{BigInt, BigUint};
use rand::RngCore;
use rand_chacha::ChaCha8Rng;

/// Mix a base seed with a shard index (block number, worker id, ...) into an
/// independent sub-seed. SplitMix64 finalizer over a golden-ratio stride.
pub(crate) fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform draw from the inclusive range `[lo, hi]`.
///
/// Draws whole numbers of bits from the generator and rejects values outside
/// the range width (a power-of-two envelope), so the distribution is exactly
/// uniform at any magnitude. The expected number of draws is below two.
pub(crate) fn sample_range_inclusive(rng: &mut ChaCha8Rng, lo: &BigInt, hi: &BigInt) -> BigInt {
    assert!(lo <= hi, "empty sampling range");
    let width: BigUint = (hi - lo + 1u32)
        .to_biguint()
        .expect("range width is positive");
    let bits = width.bits();
    let nbytes = ((bits + 7) / 8) as usize;
    let top_bits = bits % 8;
    let top_mask: u8 = if top_bits == 0 {
        0xFF
    } else {
        (1u8 << top_bits) - 1
    };
    let mut buf = vec![0u8; nbytes];
    loop {
        rng.fill_bytes(&mut buf);
        buf[0] &= top_mask;
        let candidate = BigUint::from_bytes_be(&buf);
        if candidate < width {
            return lo + BigInt::from(candidate);
        }
    }
}
