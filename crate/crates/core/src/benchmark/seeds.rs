/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of one random stream, keyed by the master seed and a path such as
/// `[run_id, stream, index]`. Independent of worker assignment.
pub fn derive_seed(master_seed: u64, path: &[u64]) -> u64 {
    path.iter().fold(mix(master_seed), |h, &k| mix(h ^ mix(k)))
}

/// Stream tags used with [`derive_seed`].
pub(crate) mod stream {
    pub const ENVIRONMENT: u64 = 1;
    pub const BASELINE: u64 = 2;
    pub const DATASET: u64 = 3;
}
