//! Structural queries on subgroups: normality, intersections, normalizers,
//! quotients, conjugacy classes, the solvable radical, and lattice
//! enumeration for small groups.

use std::collections::{HashMap, HashSet};

use super::chain::StabChain;
use super::group::{PermutationGroup, SubgroupBuilder};
use super::hom::GroupHomomorphism;
use super::permutation::Permutation;
use super::series::{is_solvable, normal_closure_unchecked};
use crate::budget::limits;
use crate::error::{Error, Result};

/// Conjugation check over generators.
pub fn is_normal(g: &PermutationGroup, n: &PermutationGroup) -> bool {
    g.generators()
        .iter()
        .all(|h| n.generators().iter().all(|x| n.has(&x.conjugate_by(h))))
}

/// `a ∩ b`. Filters the smaller factor's elements when it has at most
/// `limits::INTERSECTION_ENUMERATION` elements, else backtracks over base
/// images.
pub fn subgroup_intersection(
    _g: &PermutationGroup,
    a: &PermutationGroup,
    b: &PermutationGroup,
) -> PermutationGroup {
    let (small, big) = if a.order() <= b.order() { (a, b) } else { (b, a) };
    if small.order() <= limits::INTERSECTION_ENUMERATION {
        let mut builder = SubgroupBuilder::new(small.degree());
        for e in small.chain().elements() {
            if !builder.contains(&e) && big.has(&e) {
                builder.add(&e);
            }
        }
        return builder.finish();
    }
    backtrack_intersection(small, big)
}

fn backtrack_intersection(a: &PermutationGroup, b: &PermutationGroup) -> PermutationGroup {
    let ca = a.chain();
    let base = ca.base();
    let cb = StabChain::build(b.degree(), b.generators(), &base);
    let mut builder = SubgroupBuilder::new(a.degree());
    let id = Permutation::identity(a.degree());
    let mut images = Vec::with_capacity(base.len());
    descend(ca, &cb, 0, &id, &mut images, &mut builder);
    builder.finish()
}

/// Partial product `acc = u_{j-1} ⋯ u_0`; `images[i]` is the image of base
/// point `i` under the element being built.
fn descend(
    ca: &StabChain,
    cb: &StabChain,
    level: usize,
    acc: &Permutation,
    images: &mut Vec<u32>,
    builder: &mut SubgroupBuilder,
) {
    if level == ca.depth() {
        if !builder.contains(acc) && cb.contains(acc) {
            builder.add(acc);
        }
        return;
    }
    let b = ca.level_point(level);
    for &beta in ca.level_orbit(level) {
        let u = ca.level_transversal(level, beta).unwrap();
        let next = u.compose(acc);
        images.push(next.apply(b));
        if prefix_realisable(cb, images) {
            descend(ca, cb, level + 1, &next, images, builder);
        }
        images.pop();
    }
}

/// Whether `cb` (whose base begins with the points whose images are given)
/// has an element with those base images.
fn prefix_realisable(cb: &StabChain, images: &[u32]) -> bool {
    let mut targets: Vec<u32> = images.to_vec();
    for i in 0..targets.len() {
        let t = targets[i];
        let inv = match cb.level_inverse(i, t) {
            Some(inv) => inv,
            None => return false,
        };
        for x in targets.iter_mut().skip(i + 1) {
            *x = inv.apply(*x);
        }
    }
    true
}

/// `|H|·|N| / |H ∩ N| = |G|`, i.e. `HN = G`, without materializing cosets.
pub fn product_covers(g: &PermutationGroup, h: &PermutationGroup, n: &PermutationGroup) -> bool {
    let meet = subgroup_intersection(g, h, n);
    h.order() * n.order() == g.order() * meet.order()
}

/// `N_G(D)` by brute force over the elements of `g`, up to
/// `limits::NORMALIZER` elements.
pub fn normalizer(g: &PermutationGroup, d: &PermutationGroup) -> Result<PermutationGroup> {
    normalizer_within(g, d, limits::NORMALIZER)
}

pub fn normalizer_within(
    g: &PermutationGroup,
    d: &PermutationGroup,
    cap: u128,
) -> Result<PermutationGroup> {
    if is_normal(g, d) {
        return Ok(g.clone());
    }
    let elements = g.elements_within(cap)?;
    let mut builder = SubgroupBuilder::from_group(d);
    for x in &elements {
        if builder.contains(x) {
            continue;
        }
        if d.generators().iter().all(|y| d.has(&y.conjugate_by(x))) {
            builder.add(x);
        }
    }
    Ok(builder.finish())
}

/// The element of the right coset `N·x` with lexicographically least images
/// of the base points of `n_chain`; depends only on the coset.
pub(crate) fn canonical_coset_element(n_chain: &StabChain, x: &Permutation) -> Permutation {
    let mut y = x.clone();
    for level in 0..n_chain.depth() {
        let orbit = n_chain.level_orbit(level);
        let best = *orbit.iter().min_by_key(|&&beta| y.apply(beta)).unwrap();
        let u = n_chain.level_transversal(level, best).unwrap();
        y = u.compose(&y);
    }
    y
}

/// Action of `g` on the right cosets of the normal subgroup `n`, with the
/// projection homomorphism.
pub fn quotient(
    g: &PermutationGroup,
    n: &PermutationGroup,
) -> Result<(PermutationGroup, GroupHomomorphism)> {
    if !n.is_subgroup_of(g) || !is_normal(g, n) {
        return Err(Error::NotNormal);
    }
    let chain = n.chain();
    let mut index: HashMap<Permutation, usize> = HashMap::new();
    let mut reps = vec![g.identity()];
    index.insert(canonical_coset_element(chain, &g.identity()), 0);
    let mut action: Vec<Vec<u32>> = vec![Vec::new(); g.generators().len()];
    let mut head = 0;
    while head < reps.len() {
        let r = reps[head].clone();
        for (k, s) in g.generators().iter().enumerate() {
            let x = r.compose(s);
            let key = canonical_coset_element(chain, &x);
            let next = match index.get(&key) {
                Some(&j) => j,
                None => {
                    reps.push(x);
                    index.insert(key, reps.len() - 1);
                    reps.len() - 1
                }
            };
            action[k].push(next as u32);
        }
        head += 1;
    }
    let m = reps.len();
    let images: Vec<Permutation> = action
        .into_iter()
        .map(|imgs| Permutation::from_images(imgs).expect("coset action is a bijection"))
        .collect();
    debug_assert!(images.iter().all(|p| p.degree() == m));
    let target = PermutationGroup::new(m, images.clone())?;
    let hom = GroupHomomorphism::new_unchecked(g.clone(), target.clone(), images);
    Ok((target, hom))
}

/// Conjugacy classes in the chain's enumeration order.
pub fn conjugacy_classes(g: &PermutationGroup, cap: u128) -> Result<Vec<Vec<Permutation>>> {
    let elements = g.elements_within(cap)?;
    let mut seen: HashSet<Permutation> = HashSet::new();
    let mut classes = Vec::new();
    for e in elements {
        if seen.contains(&e) {
            continue;
        }
        let mut class = vec![e.clone()];
        seen.insert(e);
        let mut head = 0;
        while head < class.len() {
            let x = class[head].clone();
            head += 1;
            for h in g.generators() {
                let c = x.conjugate_by(h);
                if seen.insert(c.clone()) {
                    class.push(c);
                }
            }
        }
        classes.push(class);
    }
    Ok(classes)
}

/// Largest solvable normal subgroup, for groups of at most
/// `limits::RADICAL` elements.
pub fn solvable_radical(g: &PermutationGroup) -> Result<PermutationGroup> {
    if is_solvable(g) {
        return Ok(g.clone());
    }
    let classes = conjugacy_classes(g, limits::RADICAL)?;
    let mut radical = PermutationGroup::trivial(g.degree());
    'grow: loop {
        for class in &classes {
            let x = &class[0];
            if radical.has(x) {
                continue;
            }
            let mut seeds: Vec<Permutation> = radical.generators().to_vec();
            seeds.push(x.clone());
            let candidate = normal_closure_unchecked(g, &seeds);
            if is_solvable(&candidate) {
                radical = candidate;
                continue 'grow;
            }
        }
        return Ok(radical);
    }
}

/// Every normal subgroup, ordered by increasing order.
pub fn normal_subgroups(g: &PermutationGroup, cap: u128) -> Result<Vec<PermutationGroup>> {
    let classes = conjugacy_classes(g, cap)?;
    let minimal: Vec<PermutationGroup> = classes
        .iter()
        .filter(|c| !c[0].is_identity())
        .map(|c| normal_closure_unchecked(g, &c[..1]))
        .collect();
    let mut found: Vec<PermutationGroup> = vec![PermutationGroup::trivial(g.degree())];
    let mut head = 0;
    while head < found.len() {
        let base = found[head].clone();
        head += 1;
        for m in &minimal {
            if m.is_subgroup_of(&base) {
                continue;
            }
            let joined = base.join(m);
            if !found.iter().any(|f| f.same_as(&joined)) {
                found.push(joined);
            }
        }
    }
    found.sort_by_key(|f| f.order());
    Ok(found)
}

/// No proper nontrivial normal subgroup.
pub fn is_simple(g: &PermutationGroup, cap: u128) -> Result<bool> {
    if g.order() == 1 {
        return Ok(false);
    }
    let n = g.order();
    for class in conjugacy_classes(g, cap)? {
        if class[0].is_identity() {
            continue;
        }
        if normal_closure_unchecked(g, &class[..1]).order() != n {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All subgroups of a small group (at most `limits::SUBGROUP_LATTICE`
/// elements), as joins of cyclic subgroups. Sorted by order, then by
/// sorted element list.
pub fn all_subgroups(g: &PermutationGroup) -> Result<Vec<PermutationGroup>> {
    let elements = g.sorted_elements_within(limits::SUBGROUP_LATTICE)?;
    let n = elements.len();
    let index: HashMap<&Permutation, usize> = elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let words = n.div_ceil(64);
    let mul = |i: usize, j: usize| index[&elements[i].compose(&elements[j])];
    let id = index[&g.identity()];

    let close = |gens: &[usize]| -> Vec<u64> {
        let mut bits = vec![0u64; words];
        bits[id / 64] |= 1 << (id % 64);
        let mut members = vec![id];
        let mut head = 0;
        while head < members.len() {
            let x = members[head];
            head += 1;
            for &s in gens {
                let y = mul(x, s);
                if bits[y / 64] & (1 << (y % 64)) == 0 {
                    bits[y / 64] |= 1 << (y % 64);
                    members.push(y);
                }
            }
        }
        bits
    };
    let has = |bits: &[u64], i: usize| bits[i / 64] & (1 << (i % 64)) != 0;

    let mut subgroups: Vec<(Vec<u64>, Vec<usize>)> = Vec::new();
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let trivial = close(&[]);
    seen.insert(trivial.clone());
    subgroups.push((trivial, vec![]));
    let mut cyclic: Vec<(Vec<u64>, usize)> = Vec::new();
    for i in 0..n {
        let bits = close(&[i]);
        if seen.insert(bits.clone()) {
            subgroups.push((bits.clone(), vec![i]));
            cyclic.push((bits, i));
        }
    }
    let mut head = 1;
    while head < subgroups.len() {
        let (bits, gens) = subgroups[head].clone();
        head += 1;
        for (_, c) in &cyclic {
            if has(&bits, *c) {
                continue;
            }
            let mut g2 = gens.clone();
            g2.push(*c);
            let joined = close(&g2);
            if seen.insert(joined.clone()) {
                subgroups.push((joined, g2));
            }
        }
    }
    let mut out: Vec<(usize, Vec<usize>, PermutationGroup)> = subgroups
        .into_iter()
        .map(|(bits, gens)| {
            let members: Vec<usize> = (0..n).filter(|&i| has(&bits, i)).collect();
            let group = PermutationGroup::new(
                g.degree(),
                gens.iter().map(|&i| elements[i].clone()).collect(),
            )
            .unwrap();
            (members.len(), members, group)
        })
        .collect();
    out.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    Ok(out.into_iter().map(|(_, _, grp)| grp).collect())
}
