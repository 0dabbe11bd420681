//! Deterministic seed splitting for parallel work.

/// The seed of stream `i` derived from a master seed (splitmix64 finalizer).
/// Streams depend only on `(master, i)`, never on scheduling.
pub fn split(master: u64, i: u64) -> u64 {
    let mut z = master.wrapping_add(i.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
