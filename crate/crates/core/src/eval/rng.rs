//! Reproducible sampling.
//!
//! The generator is SplitMix64 (Steele, Lea, Flood 2014), chosen because it
//! is a few lines in any language. `docs/prng.md` gives the exact algorithm.

use std::collections::BTreeMap;

use crate::model::Construction;

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix(self.state)
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn next_unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[-range, range)`.
    pub fn next_symmetric(&mut self, range: f64) -> f64 {
        -range + 2.0 * range * self.next_unit()
    }
}

/// Seed of trial `index`: the `index`-th output (0-based) of SplitMix64
/// seeded with `seed`. Closed form, so trials can be generated in any order.
pub fn trial_seed(seed: u64, index: u64) -> u64 {
    mix(seed.wrapping_add(GAMMA.wrapping_mul(index.wrapping_add(1))))
}

pub type FreeAssignment = BTreeMap<String, (f64, f64)>;

/// Coordinates for every free point, drawn x then y per point in program
/// order, uniform in `[-range, range)²`.
pub fn sample_free_points(k: &Construction, seed: u64, range: f64) -> FreeAssignment {
    assert!(range > 0.0, "sampling range must be positive");
    let mut rng = SplitMix64::new(seed);
    k.free_points()
        .map(|id| {
            let x = rng.next_symmetric(range);
            let y = rng.next_symmetric(range);
            (id.to_string(), (x, y))
        })
        .collect()
}
