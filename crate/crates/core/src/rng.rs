//! Seeded random streams.
//!
//! Every random draw in a run comes from a ChaCha8 stream keyed by the run's
//! seed and a fixed purpose, so results never depend on thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Purpose {
    Environment = 0,
    Run = 1,
    Training = 2,
    Dataset = 3,
    Factorization = 4,
}

pub fn stream(seed: u64, purpose: Purpose) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(purpose as u64);
    rng
}
