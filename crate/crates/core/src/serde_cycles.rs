//! Serde helpers that write permutations in cycle notation.

use serde::ser::SerializeSeq;
use serde::Serializer;

use crate::perm::{Permutation, PermutationGroup};

pub fn one<S: Serializer>(p: &Permutation, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(p)
}

pub fn seq<S: Serializer>(ps: &[Permutation], s: S) -> Result<S::Ok, S::Error> {
    let mut out = s.serialize_seq(Some(ps.len()))?;
    for p in ps {
        out.serialize_element(&p.to_string())?;
    }
    out.end()
}

/// A group as `{degree, order, generators}`.
pub fn group<S: Serializer>(g: &PermutationGroup, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut out = s.serialize_struct("Group", 3)?;
    out.serialize_field("degree", &g.degree())?;
    out.serialize_field("order", &g.order().to_string())?;
    let gens: Vec<String> = g.generators().iter().map(|p| p.to_string()).collect();
    out.serialize_field("generators", &gens)?;
    out.end()
}
