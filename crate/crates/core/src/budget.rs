use serde::{Deserialize, Serialize};

/// Documented hard limits for the brute-force kernels.
pub mod limits {
    /// `normalizer` enumerates the ambient group up to this many elements.
    pub const NORMALIZER: u128 = 100_000;
    /// `solvable_radical` walks conjugacy classes of groups up to this order.
    pub const RADICAL: u128 = 10_000;
    /// `subgroup_intersection` filters an enumerated factor up to this order
    /// and falls back to base-image backtracking above it.
    pub const INTERSECTION_ENUMERATION: u128 = 100_000;
    /// `all_homomorphisms` requires `|G|·|C|` at most this.
    pub const HOMOMORPHISMS: u128 = 10_000_000;
    /// Largest permutation degree a construction may produce.
    pub const DEGREE: usize = 100_000;
    /// Stored terms of a truncated power series.
    pub const SERIES_TERMS: usize = 1_000_000;
    /// Subgroup-lattice enumeration.
    pub const SUBGROUP_LATTICE: u128 = 2_000;
}

/// Caps that turn expensive searches into explicit `Unknown` outcomes. Every
/// report echoes the budget it ran under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Largest group (or tuple count) that may be enumerated element by element.
    pub element_cap: u128,
    /// Largest `|G|·|C|` for homomorphism enumeration.
    pub hom_cap: u128,
    /// Largest top group accepted by `regular_wreath`.
    pub wreath_top_cap: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            element_cap: 100_000,
            hom_cap: limits::HOMOMORPHISMS,
            wreath_top_cap: 128,
        }
    }
}
