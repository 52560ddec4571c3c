//! Words, laws, verbal subgroups and variety descriptors.

pub mod descriptor;
pub mod fixture;
pub mod verbal;
pub mod word;

pub use descriptor::{Tri, VarietyDescriptor};
pub use fixture::{Fixture, FixtureKind, FixtureSet};
pub use verbal::{
    eval_word, member_of_variety, q_verbal, satisfies_laws, verbal_subgroup, LawCheck, LawWitness,
};
pub use word::Word;

use crate::budget::Budget;

/// Fixtures plus the budget every variety query runs under.
#[derive(Debug, Clone)]
pub struct Context {
    pub fixtures: FixtureSet,
    pub budget: Budget,
}

impl Context {
    pub fn new(fixtures: FixtureSet, budget: Budget) -> Self {
        Self { fixtures, budget }
    }
}

impl Default for Context {
    fn default() -> Self {
        Self {
            fixtures: FixtureSet::bundled(),
            budget: Budget::default(),
        }
    }
}
