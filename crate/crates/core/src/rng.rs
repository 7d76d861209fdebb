//! Counter-based randomness.
//!
//! Every coin flip is a pure function of `(seed, sample, src, dst)`, so a
//! sample's outcome does not depend on which thread draws it or on which other
//! edges are present. Derived seeds follow the same rule.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// One round of the splitmix64 finalizer.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform draw in `[0, 1)` for edge `(src, dst)` in sample `sample` of the
/// stream identified by `seed`.
#[inline]
pub fn edge_uniform(seed: u64, sample: u64, src: u32, dst: u32) -> f64 {
    let h = splitmix64(splitmix64(seed) ^ sample);
    let h = splitmix64(h ^ ((u64::from(src) << 32) | u64::from(dst)));
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Whether the coin of bias `prob` on `(src, dst)` comes up live.
#[inline]
pub fn edge_live(seed: u64, sample: u64, src: u32, dst: u32, prob: f64) -> bool {
    edge_uniform(seed, sample, src, dst) < prob
}

/// Seed of the `stream`-th derived random stream: `splitmix64(base ^ splitmix64(stream))`.
pub fn derive_seed(base: u64, stream: u64) -> u64 {
    splitmix64(base ^ splitmix64(stream))
}

/// Order-sensitive 64-bit digest of a sequence of words.
pub fn digest(words: impl IntoIterator<Item = u64>) -> u64 {
    words.into_iter().fold(0x6A09_E667_F3BC_C908, |acc, w| splitmix64(acc ^ w))
}
