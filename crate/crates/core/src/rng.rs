//! Deterministic random streams.
//!
//! Every randomized operation takes an [`RngSeed`], a `(seed, stream_id)`
//! pair. Identical pairs produce identical draw sequences; distinct stream
//! ids on the same seed give independent streams, which is how the sender's
//! noise, the attacker's flips, and the graph generator stay decoupled
//! inside one reproducible experiment.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngSeed {
    pub seed: u64,
    pub stream_id: u64,
}

/// Which pipeline stage a derived stream feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StreamRole {
    Graph,
    Sender,
    Attacker,
}

impl StreamRole {
    fn tag(self) -> u64 {
        match self {
            StreamRole::Graph => 1,
            StreamRole::Sender => 2,
            StreamRole::Attacker => 3,
        }
    }
}

impl RngSeed {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        RngSeed { seed, stream_id }
    }

    /// Instantiate the generator for this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }

    /// Derive the stream for one `(trial, copy-count, role)` cell.
    ///
    /// The derivation is a fixed splitmix64 chain over the parent stream id,
    /// so records are replayable from `(base seed, trial_index, k_copies,
    /// role)` alone.
    pub fn derive(&self, trial_index: u64, k_copies: u64, role: StreamRole) -> RngSeed {
        let mut h = splitmix64(self.stream_id ^ 0x6a09_e667_f3bc_c908);
        h = splitmix64(h ^ trial_index);
        h = splitmix64(h ^ k_copies);
        h = splitmix64(h ^ role.tag());
        RngSeed {
            seed: self.seed,
            stream_id: h,
        }
    }
}

fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
