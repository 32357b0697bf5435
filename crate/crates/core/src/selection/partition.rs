use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::BoundarySet;
use crate::error::{Error, Result};

/// Generator used for every seeded random choice in the crate.
///
/// ChaCha8 has a fixed, documented output stream, so partitions and random
/// support sets are identical across platforms for a given seed.
pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Boundary indices split into `m` balanced, disjoint groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPartition {
    m: usize,
    groups: Vec<Vec<usize>>,
    seed: u64,
}

impl GroupPartition {
    pub fn group_count(&self) -> usize {
        self.m
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn group(&self, i: usize) -> &[usize] {
        &self.groups[i]
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn group_sizes(&self) -> Vec<usize> {
        self.groups.iter().map(Vec::len).collect()
    }
}

/// Shuffles the boundary indices with a seeded generator and deals them
/// round-robin into `m` groups.
pub fn partition_boundary(b: &BoundarySet, m: usize, seed: u64) -> Result<GroupPartition> {
    partition_indices(b.len(), m, seed)
}

pub(crate) fn partition_indices(n: usize, m: usize, seed: u64) -> Result<GroupPartition> {
    if m < 1 || m > n {
        return Err(Error::InvalidGroupCount { m, n_boundary: n });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut seeded_rng(seed));
    let mut groups = vec![Vec::with_capacity(n / m + 1); m];
    for (k, idx) in order.into_iter().enumerate() {
        groups[k % m].push(idx);
    }
    Ok(GroupPartition { m, groups, seed })
}
