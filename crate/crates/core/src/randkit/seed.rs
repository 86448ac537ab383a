use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Generator behind every [`Seed`]. ChaCha output is specified independently
/// of platform and word size.
pub type SeedRng = ChaCha8Rng;

/// Odd multiplier applied to the stream index before mixing.
pub const STREAM_MULTIPLIER: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A `(master, stream)` pair identifying one reproducible random stream.
///
/// Parallel work never shares generator state. Instead every unit of work
/// derives its own child seed with [`Seed::derive`], so results do not depend
/// on scheduling or on the number of worker threads.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Seed {
    pub master: u64,
    pub stream: u64,
}

impl Seed {
    pub const fn new(master: u64) -> Self {
        Seed { master, stream: 0 }
    }

    pub const fn with_stream(master: u64, stream: u64) -> Self {
        Seed { master, stream }
    }

    /// `mix64(master ^ stream * STREAM_MULTIPLIER)`.
    #[inline]
    pub fn key(&self) -> u64 {
        mix64(self.master ^ self.stream.wrapping_mul(STREAM_MULTIPLIER))
    }

    /// Child seed whose master is this seed's key.
    #[inline]
    pub fn derive(&self, stream: u64) -> Seed {
        Seed {
            master: self.key(),
            stream,
        }
    }

    pub fn rng(&self) -> SeedRng {
        SeedRng::seed_from_u64(self.key())
    }
}
