//! Counter-based random streams: a (root, stream) pair fully determines a
//! sample sequence, so parallel workers can own disjoint streams and any
//! worker split reproduces the same numbers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seed {
    pub root: u64,
    pub stream_index: u64,
}

impl Seed {
    pub fn new(root: u64) -> Self {
        Seed {
            root,
            stream_index: 0,
        }
    }

    pub fn stream(self, index: u64) -> Self {
        Seed {
            root: self.root,
            stream_index: self.stream_index.wrapping_add(index),
        }
    }

    /// The RNG for this (root, stream); streams are independent ChaCha
    /// streams under a key derived from the root.
    pub fn rng(self) -> ChaCha12Rng {
        let mut key = [0u8; 32];
        let mut s = splitmix(self.root);
        for chunk in key.chunks_mut(8) {
            s = splitmix(s);
            chunk.copy_from_slice(&s.to_le_bytes());
        }
        let mut rng = ChaCha12Rng::from_seed(key);
        rng.set_stream(self.stream_index);
        rng
    }
}

fn splitmix(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Samples an index from cumulative weights via a single uniform draw.
pub fn sample_categorical(rng: &mut ChaCha12Rng, probs: &[f64]) -> usize {
    let u: f64 = rng.gen::<f64>();
    let mut acc = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    probs.len() - 1
}
