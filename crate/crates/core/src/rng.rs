//! Reproducible random streams for parallel Monte Carlo.
//!
//! Every trajectory draws from its own ChaCha8 stream, addressed by
//! `(master seed, cell, trajectory)`. The stream depends only on that key, so
//! results do not change with the number of worker threads or the order in
//! which trajectories are scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Address of one trajectory's random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StreamKey {
    pub master: u64,
    pub cell: u64,
    pub trajectory: u64,
}

impl StreamKey {
    pub fn new(master: u64, cell: u64, trajectory: u64) -> Self {
        StreamKey {
            master,
            cell,
            trajectory,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut seed = [0u8; 32];
        seed[..8].copy_from_slice(&self.master.to_le_bytes());
        seed[8..16].copy_from_slice(&self.cell.to_le_bytes());
        // fixed tag so that (master, cell) = (0, 0) is not the all-zero key
        seed[16..24].copy_from_slice(b"phasedsc");
        let mut rng = ChaCha8Rng::from_seed(seed);
        rng.set_stream(self.trajectory);
        rng
    }
}

/// Packs a few small indices into a cell id.
pub fn cell_id(parts: &[u64]) -> u64 {
    // splitmix64 folding
    parts.iter().fold(0x9e37_79b9_7f4a_7c15u64, |acc, &p| {
        let mut z = acc.wrapping_add(p).wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    })
}
