//! Deterministic seed derivation.
//!
//! Every random decision in the crate is driven by a seed derived from the
//! master seed and a stream identifier (trial index, source-image hash)
//! through SplitMix64. Work items can therefore run in any order, on any
//! number of threads, without changing results.

/// SplitMix64 finalizer. Bijective on `u64` with good avalanche behavior.
pub fn splitmix64(seed: u64) -> u64 {
    let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive the seed for an independent stream (e.g. one selection trial).
///
/// Both arguments are mixed through SplitMix64 before combining so that
/// consecutive stream indices produce unrelated seeds.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    splitmix64(splitmix64(master).wrapping_add(splitmix64(stream)))
}

/// FNV-1a hash of a byte string. Used to map opaque source ids to stream
/// identifiers; stable across platforms and releases, unlike `DefaultHasher`.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}
