pub mod cavity;
pub mod cli;
pub mod error;
pub mod fidelity;
pub mod hbsa;
pub mod hilbert;
pub mod optics;
pub mod swapping;
pub mod tables;

pub use error::{Error, Result};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Seed used when none is given on the command line or in the environment.
pub const DEFAULT_SEED: u64 = 20130917;

/// Random stream for run `index` of a batch seeded with `seed`. Each run gets
/// its own stream, so results do not depend on how runs are scheduled.
pub fn run_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
