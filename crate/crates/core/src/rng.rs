//! Counter-based random streams.
//!
//! Every draw is addressed by `(seed, stream, index)`. The ChaCha block
//! function is a pure function of that triple, so draw `i` of a stream is the
//! same no matter how many draws were made before it or on which thread.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Address of one independent uniform stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamKey {
    pub seed: u64,
    pub stream: u64,
}

impl StreamKey {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    /// Uniform stream positioned at draw `start`.
    pub fn uniforms_from(self, start: u64) -> Uniforms {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        // each draw consumes two 32-bit words
        rng.set_word_pos(2 * start as u128);
        Uniforms { rng }
    }

    pub fn uniforms(self) -> Uniforms {
        self.uniforms_from(0)
    }
}

/// Iterator of uniforms on the open interval (0, 1).
#[derive(Debug, Clone)]
pub struct Uniforms {
    rng: ChaCha8Rng,
}

impl Uniforms {
    pub fn next_open01(&mut self) -> f64 {
        let bits = self.rng.next_u64() >> 11;
        (bits as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }
}

impl Iterator for Uniforms {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        Some(self.next_open01())
    }
}

/// SplitMix64 finalizer; used to fold structured ids into a stream number.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stream number for an ordered tuple of ids.
pub fn stream_id(parts: &[u64]) -> u64 {
    parts.iter().fold(0x5DEE_CE66_D1CE_4E5Bu64, |acc, &p| mix64(acc ^ mix64(p)))
}
