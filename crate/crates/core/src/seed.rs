//! Seed splitting.
//!
//! A master seed expands into independent per-purpose streams with
//! `derive_seed(master, stream) = splitmix64(master + stream * 0x9E3779B97F4A7C15)`.
//! Stream 0 draws random payoff matrices; stream 1 drives random
//! tie-breaking. Parallel jobs use `derive_seed(master, 2 + job)` as their
//! own master.

pub const MATRIX_STREAM: u64 = 0;
pub const POLICY_STREAM: u64 = 1;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive_seed(master: u64, stream: u64) -> u64 {
    splitmix64(master.wrapping_add(stream.wrapping_mul(GOLDEN_GAMMA)))
}

pub fn job_seed(master: u64, job: u64) -> u64 {
    derive_seed(master, 2 + job)
}
