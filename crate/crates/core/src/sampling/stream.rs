use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Generator behind every stream.
pub type StreamRng = ChaCha8Rng;

/// Identity of a reproducible random stream.
///
/// The stream is ChaCha8 keyed by an expansion of `root_seed`, with the
/// ChaCha stream id set to `stream_index`. ChaCha is a counter-based
/// generator, so streams with distinct ids under one key never overlap, and
/// replaying the same `(root_seed, stream_index)` reproduces the same
/// sequence bit for bit, independently of scheduling or thread count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RandomStream {
    pub root_seed: u64,
    pub stream_index: u64,
}

impl RandomStream {
    pub const fn new(root_seed: u64, stream_index: u64) -> Self {
        Self {
            root_seed,
            stream_index,
        }
    }

    pub fn rng(&self) -> StreamRng {
        let mut key = [0u8; 32];
        let mut state = self.root_seed;
        for chunk in key.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(self.stream_index);
        rng
    }

    /// Child stream `j`, e.g. one per replication of a batch run on this
    /// stream. Children of distinct parents use distinct keys.
    pub fn substream(&self, j: u64) -> RandomStream {
        let mut state = self.root_seed ^ 0x6a09_e667_f3bc_c909;
        let a = splitmix64(&mut state);
        let mut state = self.stream_index.wrapping_add(a);
        let b = splitmix64(&mut state);
        RandomStream::new(a ^ b.rotate_left(17), j)
    }
}

/// SplitMix64 step: advances `state` and returns the mixed output.
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
