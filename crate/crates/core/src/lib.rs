//! Computational group theory for dominions and epimorphisms in varieties of
//! groups.
//!
//! The crate is organised bottom-up: [`perm`] (permutation groups),
//! [`variety`] (words, laws, verbal subgroups, variety descriptors),
//! [`constructions`] (direct powers, regular wreath products and the
//! Kaloujnine–Krasner embedding), [`wreath_z`] (the wreath product with the
//! infinite cyclic group, on tail-constant functions), [`power_series`]
//! (truncated noncommutative power series and the Magnus map) and
//! [`engine`] (dominion bounds and certified epi decisions).

pub mod budget;
pub mod catalog;
pub mod constructions;
pub mod engine;
pub mod error;
pub mod perm;
pub mod power_series;
pub mod serde_cycles;
pub mod variety;
pub mod wreath_z;

pub use budget::Budget;
pub use error::{Error, Result};
pub use perm::{GroupHomomorphism, Permutation, PermutationGroup};
