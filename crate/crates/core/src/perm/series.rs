use super::group::{PermutationGroup, SubgroupBuilder};
use super::permutation::Permutation;
use crate::error::{Error, Result};

/// Smallest subgroup of `g` containing `s` and closed under conjugation by
/// the generators of `g`.
pub fn normal_closure(g: &PermutationGroup, s: &[Permutation]) -> Result<PermutationGroup> {
    for x in s {
        if !g.contains(x)? {
            return Err(Error::NotInGroup(x.to_string()));
        }
    }
    Ok(normal_closure_unchecked(g, s))
}

pub(crate) fn normal_closure_unchecked(g: &PermutationGroup, s: &[Permutation]) -> PermutationGroup {
    let mut builder = SubgroupBuilder::new(g.degree());
    let mut pending: Vec<Permutation> = Vec::new();
    for x in s {
        if builder.add(x) {
            pending.push(x.clone());
        }
    }
    while let Some(n) = pending.pop() {
        for h in g.generators() {
            let c = n.conjugate_by(h);
            if builder.add(&c) {
                pending.push(c);
            }
        }
    }
    builder.finish()
}

/// `[a, b]` for normal subgroups `a`, `b` of `g`: normal closure of the
/// commutators of generator pairs.
pub fn commutator_subgroup(
    g: &PermutationGroup,
    a: &PermutationGroup,
    b: &PermutationGroup,
) -> PermutationGroup {
    let mut comms = Vec::new();
    for x in a.generators() {
        for y in b.generators() {
            let c = x.commutator(y);
            if !c.is_identity() {
                comms.push(c);
            }
        }
    }
    normal_closure_unchecked(g, &comms)
}

pub fn derived_subgroup(g: &PermutationGroup) -> PermutationGroup {
    commutator_subgroup(g, g, g)
}

/// `G = G⁽⁰⁾ ⊇ G⁽¹⁾ ⊇ …`, stopping at the first repeated term.
pub fn derived_series(g: &PermutationGroup) -> Vec<PermutationGroup> {
    let mut series = vec![g.clone()];
    loop {
        let last = series.last().unwrap();
        let next = derived_subgroup(last);
        if next.order() == last.order() {
            return series;
        }
        series.push(next);
    }
}

/// `n`-th derived subgroup.
pub fn derived_term(g: &PermutationGroup, n: usize) -> PermutationGroup {
    let mut cur = g.clone();
    for _ in 0..n {
        let next = derived_subgroup(&cur);
        if next.order() == cur.order() {
            return cur;
        }
        cur = next;
    }
    cur
}

/// `[γ₁, …, γ_{c+1}]` with `γ₁ = G` and `γ_{i+1} = [γ_i, G]`.
pub fn lower_central_series(g: &PermutationGroup, c: usize) -> Vec<PermutationGroup> {
    let mut series = vec![g.clone()];
    for _ in 0..c {
        let last = series.last().unwrap();
        let next = if last.is_trivial() {
            last.clone()
        } else {
            commutator_subgroup(g, last, g)
        };
        series.push(next);
    }
    series
}

pub fn is_solvable(g: &PermutationGroup) -> bool {
    derived_series(g).last().unwrap().order() == 1
}

pub fn derived_length(g: &PermutationGroup) -> Option<usize> {
    let s = derived_series(g);
    (s.last().unwrap().order() == 1).then(|| s.len() - 1)
}

/// Nilpotency class, or `None` when the lower central series stalls above 1.
pub fn nilpotency_class(g: &PermutationGroup) -> Option<usize> {
    if g.order() == 1 {
        return Some(0);
    }
    let mut cur = g.clone();
    let mut class = 0;
    loop {
        let next = commutator_subgroup(g, &cur, g);
        class += 1;
        if next.order() == 1 {
            return Some(class);
        }
        if next.order() == cur.order() {
            return None;
        }
        cur = next;
    }
}
