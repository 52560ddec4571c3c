use serde::Serialize;

use super::descriptor::{Tri, VarietyDescriptor};
use super::word::Word;
use super::Context;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::perm::series::normal_closure_unchecked;
use crate::perm::{
    conjugacy_classes, derived_subgroup, derived_term, find_embedding, is_simple,
    lower_central_series, normal_subgroups, quotient, subgroup_intersection, Permutation,
    PermutationGroup, SubgroupBuilder,
};

/// Substitutes `tuple[i-1]` for `x_i` and multiplies left to right.
pub fn eval_word(w: &Word, tuple: &[Permutation], g: &PermutationGroup) -> Result<Permutation> {
    if tuple.len() < w.arity() {
        return Err(Error::Arity {
            needed: w.arity(),
            supplied: tuple.len(),
        });
    }
    for x in tuple {
        if !g.contains(x)? {
            return Err(Error::NotInGroup(x.to_string()));
        }
    }
    if w.is_identity() {
        return Ok(g.identity());
    }
    w.eval(tuple)
}

/// Calls `visit` on every `k`-tuple over `elements` in lexicographic order
/// until it returns `false`.
fn for_each_tuple(elements: &[Permutation], k: usize, mut visit: impl FnMut(&[Permutation]) -> bool) {
    if elements.is_empty() {
        return;
    }
    let mut idx = vec![0usize; k];
    let mut tuple: Vec<Permutation> = vec![elements[0].clone(); k];
    loop {
        if !visit(&tuple) {
            return;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < elements.len() {
                tuple[i] = elements[idx[i]].clone();
                break;
            }
            idx[i] = 0;
            tuple[i] = elements[0].clone();
        }
    }
}

fn tuple_count(g: &PermutationGroup, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, _| acc.saturating_mul(g.order()))
}

/// Verbal subgroup of a single word.
fn word_verbal(g: &PermutationGroup, w: &Word, budget: &Budget) -> Result<PermutationGroup> {
    if w.is_identity() || g.is_trivial() {
        return Ok(PermutationGroup::trivial(g.degree()));
    }
    if let Some(c) = w.as_left_normed_weight() {
        let series = lower_central_series(g, c as usize - 1);
        return Ok(series.last().cloned().unwrap());
    }
    if let Some(n) = w.as_derived_depth() {
        return Ok(derived_term(g, n as usize));
    }
    if let Some(e) = w.as_power() {
        let classes = conjugacy_classes(g, budget.element_cap)?;
        let powers: Vec<Permutation> = classes
            .iter()
            .map(|c| c[0].pow(e))
            .filter(|p| !p.is_identity())
            .collect();
        return Ok(normal_closure_unchecked(g, &powers));
    }
    let k = w.arity();
    let needed = tuple_count(g, k);
    if needed > budget.element_cap {
        return Err(Error::budget(format!("values of {w}"), needed, budget.element_cap));
    }
    let elements = g.sorted_elements_within(budget.element_cap)?;
    let mut builder = SubgroupBuilder::new(g.degree());
    let full = g.order();
    for_each_tuple(&elements, k, |t| {
        let v = w.eval(t).expect("arity checked");
        builder.add(&v);
        builder.order() < full
    });
    Ok(builder.finish())
}

/// Subgroup generated by all values of all `laws` in `g`. Commutator,
/// left-normed and derived words use the corresponding series; power words
/// use one representative per conjugacy class; anything else enumerates
/// `|G|^arity` tuples under `budget.element_cap`.
pub fn verbal_subgroup(g: &PermutationGroup, laws: &[Word], budget: &Budget) -> Result<PermutationGroup> {
    let mut acc = PermutationGroup::trivial(g.degree());
    for w in laws {
        let v = word_verbal(g, w, budget)?;
        if !v.is_subgroup_of(&acc) {
            acc = acc.join(&v);
        }
    }
    Ok(acc)
}

/// A tuple on which a law is not the identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawWitness {
    pub law: Word,
    #[serde(serialize_with = "crate::serde_cycles::seq")]
    pub tuple: Vec<Permutation>,
    #[serde(serialize_with = "crate::serde_cycles::one")]
    pub value: Permutation,
}

/// Outcome of a law check. A failing law always comes with a witness unless
/// finding one would exceed the budget.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawCheck {
    pub holds: bool,
    pub failed_law: Option<Word>,
    pub witness: Option<LawWitness>,
}

fn search_witness(g: &PermutationGroup, w: &Word, budget: &Budget) -> Option<LawWitness> {
    let k = w.arity();
    let probe = |pool: &[Permutation]| {
        let mut found = None;
        for_each_tuple(pool, k, |t| {
            let v = w.eval(t).expect("arity checked");
            if v.is_identity() {
                true
            } else {
                found = Some(LawWitness {
                    law: w.clone(),
                    tuple: t.to_vec(),
                    value: v,
                });
                false
            }
        });
        found
    };
    let mut gens = g.generators().to_vec();
    gens.sort();
    if (gens.len() as u128).saturating_pow(k as u32) <= budget.element_cap {
        if let Some(w) = probe(&gens) {
            return Some(w);
        }
    }
    if tuple_count(g, k) <= budget.element_cap {
        if let Ok(elements) = g.sorted_elements_within(budget.element_cap) {
            return probe(&elements);
        }
    }
    None
}

/// Whether every law is the identity on every tuple of `g`; stops at the
/// first violated law.
pub fn satisfies_laws(g: &PermutationGroup, laws: &[Word], budget: &Budget) -> Result<LawCheck> {
    for w in laws {
        if w.is_identity() {
            continue;
        }
        let structured =
            w.as_left_normed_weight().is_some() || w.as_derived_depth().is_some() || w.as_power().is_some();
        let violated = if structured {
            !word_verbal(g, w, budget)?.is_trivial()
        } else {
            let needed = tuple_count(g, w.arity());
            if needed > budget.element_cap {
                return Err(Error::budget(format!("tuples for {w}"), needed, budget.element_cap));
            }
            search_witness(g, w, budget).is_some()
        };
        if violated {
            return Ok(LawCheck {
                holds: false,
                failed_law: Some(w.clone()),
                witness: search_witness(g, w, budget),
            });
        }
    }
    Ok(LawCheck {
        holds: true,
        failed_law: None,
        witness: None,
    })
}

/// The verbal subgroup of `g` for `desc`: the smallest normal subgroup with
/// quotient in the variety.
pub fn q_verbal(g: &PermutationGroup, desc: &VarietyDescriptor, ctx: &Context) -> Result<PermutationGroup> {
    if let Some(laws) = desc.defining_laws() {
        return verbal_subgroup(g, &laws, &ctx.budget);
    }
    match desc {
        VarietyDescriptor::Product(n, q) => {
            let inner = q_verbal(g, q, ctx)?;
            q_verbal(&inner, n, ctx)
        }
        VarietyDescriptor::VarOfGroup(name) => var_verbal(g, name, desc, ctx),
        _ => unreachable!("law-defined descriptors handled above"),
    }
}

/// Intersection of the normal subgroups whose quotient is a decided member;
/// fails if any quotient is undecided.
fn var_verbal(
    g: &PermutationGroup,
    name: &str,
    desc: &VarietyDescriptor,
    ctx: &Context,
) -> Result<PermutationGroup> {
    let undecidable = || Error::Undecidable(format!("verbal subgroup of a group of order {} in {desc}", g.order()));
    match member_of_variety(g, desc, ctx) {
        Tri::Yes => return Ok(PermutationGroup::trivial(g.degree())),
        Tri::No if is_simple(g, ctx.budget.element_cap).unwrap_or(false) => return Ok(g.clone()),
        Tri::No => {}
        Tri::Unknown => return Err(undecidable()),
    }
    let normals = normal_subgroups(g, ctx.budget.element_cap).map_err(|_| undecidable())?;
    let mut acc = g.clone();
    for n in normals {
        if n.order() == g.order() || n.is_trivial() {
            continue;
        }
        let (q, _) = quotient(g, &n)?;
        match var_membership(&q, name, desc, ctx) {
            Tri::Yes => acc = subgroup_intersection(g, &acc, &n),
            Tri::No => {}
            Tri::Unknown => return Err(undecidable()),
        }
    }
    Ok(acc)
}

/// Three-valued membership. Law-defined varieties are decided exactly
/// (budget permitting); products reduce to the verbal subgroup of the right
/// factor; `var:S` uses fixtures, subdirect embeddings into `S`, and a screen
/// of laws that `S` satisfies.
pub fn member_of_variety(g: &PermutationGroup, desc: &VarietyDescriptor, ctx: &Context) -> Tri {
    if g.is_trivial() {
        return Tri::Yes;
    }
    if let Some(laws) = desc.defining_laws() {
        return match satisfies_laws(g, &laws, &ctx.budget) {
            Ok(c) if c.holds => Tri::Yes,
            Ok(_) => Tri::No,
            Err(_) => Tri::Unknown,
        };
    }
    match desc {
        VarietyDescriptor::Product(n, q) => match q_verbal(g, q, ctx) {
            Ok(v) => member_of_variety(&v, n, ctx),
            Err(_) => Tri::Unknown,
        },
        VarietyDescriptor::VarOfGroup(name) => var_membership(g, name, desc, ctx),
        _ => unreachable!("law-defined descriptors handled above"),
    }
}

/// Laws of `s` from a fixed candidate list: the exponent law, powers of the
/// commutator, `[x1^k, x2^k]`, and the nilpotent / derived words of `s`.
pub fn screening_laws(s: &PermutationGroup, budget: &Budget) -> Vec<Word> {
    let x1 = Word::var(1);
    let x2 = Word::var(2);
    let exponent = group_exponent(s, budget);
    let mut candidates = Vec::new();
    if let Some(e) = exponent {
        candidates.push(x1.pow(e as i64));
        let d = derived_subgroup(s);
        if let Some(ed) = group_exponent(&d, budget) {
            candidates.push(Word::commutator(&x1, &x2).pow(ed as i64));
        }
        for k in 1..e {
            if e % k == 0 {
                candidates.push(Word::commutator(&x1.pow(k as i64), &x2.pow(k as i64)));
            }
        }
    }
    if let Some(c) = crate::perm::nilpotency_class(s) {
        candidates.push(Word::left_normed_commutator(c as u32 + 1));
    }
    if let Some(n) = crate::perm::derived_length(s) {
        if n >= 1 {
            candidates.push(Word::derived_word(n as u32));
        }
    }
    candidates
        .into_iter()
        .filter(|w| !w.is_identity())
        .filter(|w| matches!(satisfies_laws(s, std::slice::from_ref(w), budget), Ok(c) if c.holds))
        .collect()
}

fn group_exponent(g: &PermutationGroup, budget: &Budget) -> Option<u64> {
    let classes = conjugacy_classes(g, budget.element_cap).ok()?;
    Some(classes.iter().fold(1u64, |acc, c| {
        let o = c[0].order();
        acc / gcd(acc, o) * o
    }))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn var_membership(g: &PermutationGroup, name: &str, desc: &VarietyDescriptor, ctx: &Context) -> Tri {
    if g.is_trivial() {
        return Tri::Yes;
    }
    if let Ok(Some((member, _))) = ctx.fixtures.membership(g, desc, ctx.budget.hom_cap) {
        return if member { Tri::Yes } else { Tri::No };
    }
    let Ok(s) = crate::catalog::resolve(name) else {
        return Tri::Unknown;
    };
    if subdirect_in(g, &s, &ctx.budget) == Some(true) {
        return Tri::Yes;
    }
    for w in screening_laws(&s, &ctx.budget) {
        if let Ok(c) = satisfies_laws(g, std::slice::from_ref(&w), &ctx.budget) {
            if !c.holds {
                return Tri::No;
            }
        }
    }
    Tri::Unknown
}

/// `Some(true)` when `g` is a subdirect product of subgroups of `s`: the
/// normal subgroups whose quotients embed in `s` intersect trivially.
fn subdirect_in(g: &PermutationGroup, s: &PermutationGroup, budget: &Budget) -> Option<bool> {
    if find_embedding(g, s, budget.hom_cap).ok()?.is_some() {
        return Some(true);
    }
    let normals = normal_subgroups(g, budget.element_cap).ok()?;
    let mut acc = g.clone();
    for n in normals {
        if n.is_trivial() || n.order() == g.order() || acc.is_subgroup_of(&n) {
            continue;
        }
        if !s.order().is_multiple_of(g.order() / n.order()) {
            continue;
        }
        let (q, _) = quotient(g, &n).ok()?;
        if find_embedding(&q, s, budget.hom_cap).ok()?.is_some() {
            acc = subgroup_intersection(g, &acc, &n);
            if acc.is_trivial() {
                return Some(true);
            }
        }
    }
    Some(false)
}
