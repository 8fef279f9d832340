use serde::{Deserialize, Serialize};

use crate::field::DEFAULT_FIELD_CAP;

/// Size limits for every enumerating step. A step whose search space exceeds
/// its cap refuses to run instead of silently truncating.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Largest admissible field order `p^n`.
    pub field_size: u64,
    /// Largest group produced by generator closure.
    pub group_close: usize,
    /// Largest group whose normal subgroups may be enumerated.
    pub subgroup_enum: usize,
    /// Largest `q^dim` scanned for grouplike elements.
    pub grouplike_enum: u64,
    /// Largest `q^(dim^2)` matrix space scanned by the brute automorphism oracle.
    pub brute_oracle: u64,
    /// Largest number of structured automorphism triples listed explicitly.
    pub structured_enum: u64,
    /// Largest number of search-tree nodes visited by graph automorphism search.
    pub graph_search: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            field_size: DEFAULT_FIELD_CAP,
            group_close: 10_000,
            subgroup_enum: 2_000,
            grouplike_enum: 1 << 20,
            brute_oracle: 1 << 24,
            structured_enum: 1 << 20,
            graph_search: 2_000_000,
        }
    }
}

/// `base^exp`, saturating at `u64::MAX`.
pub fn saturating_pow(base: u64, exp: u64) -> u64 {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
        if acc == u64::MAX {
            break;
        }
    }
    acc
}
