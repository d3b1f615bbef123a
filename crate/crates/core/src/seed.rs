//! Seed derivation for independent, reproducible random streams.
//!
//! Every parallel unit of work (a Monte-Carlo iteration, a dwell, a
//! synthetic measurement) draws from its own generator seeded by mixing the
//! master seed with a stream tag and an index, so results do not depend on
//! scheduling order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stream tags keep generators for different purposes apart even when they
/// share a master seed and index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Dwell = 1,
    MonteCarlo = 2,
    Dataset = 3,
    Fold = 4,
}

pub fn derive_seed(master: u64, stream: Stream, index: u64) -> u64 {
    splitmix64(splitmix64(master ^ splitmix64(stream as u64)) ^ index)
}

pub fn rng_for(master: u64, stream: Stream, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, stream, index))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_seeds_differ_across_streams_and_indices() {
        let a = derive_seed(7, Stream::Dwell, 0);
        assert_ne!(a, derive_seed(7, Stream::Dwell, 1));
        assert_ne!(a, derive_seed(7, Stream::MonteCarlo, 0));
        assert_ne!(a, derive_seed(8, Stream::Dwell, 0));
        assert_eq!(a, derive_seed(7, Stream::Dwell, 0));
    }
}
