//! Reproducible per-trial random streams.
//!
//! Trial `i` of a campaign seeded with `base_seed` draws from
//! `ChaCha8Rng::seed_from_u64(mix(base_seed, i))`, where
//!
//! ```text
//! splitmix64(z) = finalizer of (z + 0x9E3779B97F4A7C15)
//! mix(a, b)     = splitmix64(a ^ splitmix64(b))
//! ```
//!
//! so a trial's sample depends only on `(base_seed, i)` and never on how
//! trials are scheduled across threads. Named sub-streams (one per
//! scenario) re-key the base seed with the FNV-1a hash of the name.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// One step of the SplitMix64 generator applied to `z`.
pub fn splitmix64(z: u64) -> u64 {
    let mut z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Combines a base seed with a stream or trial index.
pub fn mix(base: u64, index: u64) -> u64 {
    splitmix64(base ^ splitmix64(index))
}

fn fnv1a(label: &str) -> u64 {
    label.bytes().fold(0xCBF2_9CE4_8422_2325_u64, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01B3)
    })
}

pub type TrialRng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngSpec {
    pub base_seed: u64,
}

impl RngSpec {
    pub fn new(base_seed: u64) -> Self {
        Self { base_seed }
    }

    pub fn trial_seed(&self, trial: u64) -> u64 {
        mix(self.base_seed, trial)
    }

    pub fn trial_rng(&self, trial: u64) -> TrialRng {
        ChaCha8Rng::seed_from_u64(self.trial_seed(trial))
    }

    /// Independent stream keyed by a label such as a scenario name.
    pub fn stream(&self, label: &str) -> RngSpec {
        RngSpec::new(mix(self.base_seed, fnv1a(label)))
    }
}
