//! Test-only oracles and generators.
//!
//! The oracles here are written from scratch against the plain definitions
//! (linear scans, ray casting, trapezoid areas) and must not call into the
//! spatial index or geometry helpers they are used to check.

pub mod docs;
pub mod oracle;
pub mod traces;

pub use rand::rngs::StdRng;
pub use rand::{RngExt, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}
