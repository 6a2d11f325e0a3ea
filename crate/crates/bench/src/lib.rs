//! Fixed inputs shared by the benchmarks.

use triality::{random_density, DensityMatrix};

/// Seed used for every benchmark input.
pub const SEED: u64 = 2024;

/// A full-rank random state of dimension `dim`.
pub fn full_rank(dim: usize) -> DensityMatrix {
    random_density(dim, dim, SEED).expect("dim within range")
}

/// A random state of dimension `dim` and rank `rank`.
pub fn with_rank(dim: usize, rank: usize) -> DensityMatrix {
    random_density(dim, rank, SEED).expect("rank within range")
}
