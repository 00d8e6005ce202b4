//! Counter-based random streams: trial `t` of an experiment seeded with
//! `master` always draws from the ChaCha8 stream `(master, t)`, whatever
//! the scheduling of trials across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Identifies one independent random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    pub master: u64,
    pub index: u64,
}

impl RngStream {
    pub fn new(master: u64, index: u64) -> Self {
        Self { master, index }
    }

    /// Stream `index` of the same family.
    pub fn at(self, index: u64) -> Self {
        Self { master: self.master, index }
    }

    /// A new family of streams for a different purpose (pilot run, reference
    /// draws, hyperplane candidates...), decorrelated from this one.
    pub fn fork(self, tag: u64) -> Self {
        let m = splitmix64(self.master ^ splitmix64(tag.wrapping_add(0x9e37_79b9_7f4a_7c15)) ^ self.index.rotate_left(32));
        Self { master: m, index: 0 }
    }

    pub fn rng(self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(self.index);
        rng
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
