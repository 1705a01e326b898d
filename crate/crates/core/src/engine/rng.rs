//! Deterministic randomness.
//!
//! The engine draws every random value as a pure function of
//! (seed, tick, sprite id, salt), so a replayed game is bit-identical on
//! every platform and cloned states stay independent for free. Agents use
//! the sequential [`SplitMix64`] stream.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
fn finalize(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stateless draw: mixes the four inputs into one 64-bit value.
pub fn draw(seed: u64, tick: u64, sprite_id: u64, salt: u64) -> u64 {
    let mut z = seed;
    z = finalize(z ^ tick.wrapping_mul(0xA076_1D64_78BD_642F));
    z = finalize(z ^ sprite_id.wrapping_mul(0xE703_7ED1_A0B4_28DB));
    finalize(z ^ salt.wrapping_mul(0x8EBC_6AF0_9C88_C6E3))
}

/// Map a draw to [0, 1).
pub fn unit(x: u64) -> f64 {
    (x >> 11) as f64 / (1u64 << 53) as f64
}

/// Combine values into a derived seed (used for per-run seeds).
pub fn mix_seed(parts: &[u64]) -> u64 {
    let mut z = 0x5851_F42D_4C95_7F2D;
    for &p in parts {
        z = finalize(z ^ p);
    }
    z
}

/// Hash a string into a 64-bit value for seed derivation (FNV-1a).
pub fn hash_str(s: &str) -> u64 {
    let mut h = 0xCBF2_9CE4_8422_2325u64;
    for b in s.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}

/// Sequential SplitMix64 generator for agent-side sampling.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        finalize(self.state)
    }

    /// Uniform index in `0..n`. `n` must be nonzero; bias is negligible
    /// for the small `n` used here.
    pub fn next_below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}
