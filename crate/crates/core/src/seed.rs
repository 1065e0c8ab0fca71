use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Derive an independent child seed from a master seed and a stream index.
///
/// SplitMix64 finalizer over the combined value; stable across platforms so
/// parallel and serial runs see identical generators.
pub(crate) fn derive(master: u64, stream: u64) -> u64 {
    let mut z = master
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(stream.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub(crate) fn rng(master: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(master, stream))
}
