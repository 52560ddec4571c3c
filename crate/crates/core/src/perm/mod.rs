//! Finite permutation groups: elements, stabilizer chains, series,
//! subgroup queries and homomorphisms.

pub mod chain;
pub mod group;
pub mod hom;
pub mod named;
pub mod permutation;
pub mod series;
pub mod subgroups;

pub use chain::StabChain;
pub use group::{Fingerprint, PermutationGroup, SubgroupBuilder};
pub use hom::{all_homomorphisms, all_homomorphisms_within, find_embedding, for_each_homomorphism, GroupHomomorphism};
pub use permutation::Permutation;
pub use series::{
    derived_length, derived_series, derived_subgroup, derived_term, is_solvable,
    lower_central_series, nilpotency_class, normal_closure,
};
pub use subgroups::{
    all_subgroups, conjugacy_classes, is_normal, is_simple, normal_subgroups, normalizer,
    normalizer_within, product_covers, quotient, solvable_radical, subgroup_intersection,
};
