//! Seeded, hierarchically derived random streams.
//!
//! Every stochastic task receives its own ChaCha stream, identified by the
//! master seed plus a stream id derived from a path of task labels. Results
//! therefore never depend on scheduling order or thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeededRng {
    master: u64,
    stream: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SeededRng {
    pub fn new(master: u64) -> Self {
        SeededRng { master, stream: 0 }
    }

    pub fn master(&self) -> u64 {
        self.master
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Child stream keyed by `key`. Distinct keys give independent streams.
    pub fn derive(&self, key: u64) -> Self {
        let stream = splitmix64(self.stream ^ splitmix64(key.wrapping_add(0x632B_E59B_D9B4_E019)));
        SeededRng { master: self.master, stream }
    }

    /// Child stream keyed by a string label.
    pub fn derive_named(&self, label: &str) -> Self {
        // FNV-1a, stable across platforms and releases.
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in label.as_bytes() {
            h ^= u64::from(*b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        self.derive(h)
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(self.stream);
        rng
    }
}
