use std::cmp::Reverse;
use std::collections::HashMap;

use serde::Serialize;

use super::{Certificate, Derivation, EpiVerdict, Outcome, Rule, SeparatingPair};
use crate::error::{Error, Result};
use crate::perm::{
    all_homomorphisms_within, normal_subgroups, product_covers, quotient, solvable_radical, subgroup_intersection,
    GroupHomomorphism, Permutation, PermutationGroup,
};
use crate::variety::{member_of_variety, q_verbal, Context, Tri, VarietyDescriptor};

/// `Some(N)` when `H ≠ G` and the solvable radical `N` satisfies `NH = G`.
/// Such an `H` is not epi in any variety containing `G`.
pub fn neumann_not_epi_test(g: &PermutationGroup, h: &PermutationGroup) -> Result<Option<Certificate>> {
    if !h.is_subgroup_of(g) {
        return Err(Error::Invalid("H is not a subgroup of G".into()));
    }
    if h.order() == g.order() {
        return Ok(None);
    }
    let radical = solvable_radical(g)?;
    Ok(product_covers(g, h, &radical).then_some(Certificate::Neumann { normal: radical }))
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    pub pair: Option<SeparatingPair>,
    pub homomorphisms: usize,
    pub notes: Vec<String>,
}

/// Homomorphisms sorted by decreasing image order, then by generator images.
fn ordered_homs(g: &PermutationGroup, c: &PermutationGroup, cap: u128) -> Result<Vec<(GroupHomomorphism, u128)>> {
    let mut homs: Vec<(GroupHomomorphism, u128)> = all_homomorphisms_within(g, c, cap)?
        .into_iter()
        .map(|f| {
            let o = f.image().order();
            (f, o)
        })
        .collect();
    homs.sort_by(|(a, oa), (b, ob)| (Reverse(*oa), a.generator_images()).cmp(&(Reverse(*ob), b.generator_images())));
    Ok(homs)
}

/// Looks for `f, g : G → C` agreeing on `H` and differing somewhere, with
/// `⟨f(G), g(G)⟩` a verified member of `desc` when one is given. The first
/// pair `(i, j)`, `i < j`, in the fixed enumeration order wins.
pub fn separating_pair_search(
    g: &PermutationGroup,
    h: &PermutationGroup,
    targets: &[PermutationGroup],
    desc: Option<&VarietyDescriptor>,
    ctx: &Context,
) -> Result<SearchReport> {
    if !h.is_subgroup_of(g) {
        return Err(Error::Invalid("H is not a subgroup of G".into()));
    }
    let mut report = SearchReport {
        pair: None,
        homomorphisms: 0,
        notes: Vec::new(),
    };
    for (t, c) in targets.iter().enumerate() {
        let target_member = desc.map(|d| member_of_variety(c, d, ctx));
        let homs = match ordered_homs(g, c, ctx.budget.hom_cap) {
            Ok(homs) => homs,
            Err(e) => {
                report.notes.push(format!("target {t} (order {}): {e}", c.order()));
                continue;
            }
        };
        report.homomorphisms += homs.len();
        let mut classes: HashMap<Vec<Permutation>, Vec<usize>> = HashMap::new();
        let mut order: Vec<Vec<Permutation>> = Vec::new();
        for (i, (f, _)) in homs.iter().enumerate() {
            let key: Vec<Permutation> = h.generators().iter().map(|x| f.apply(x)).collect();
            let entry = classes.entry(key.clone()).or_default();
            if entry.is_empty() {
                order.push(key);
            }
            entry.push(i);
        }
        let mut skipped = 0usize;
        let mut best: Option<(usize, usize)> = None;
        for key in &order {
            let members = &classes[key];
            for (a, &i) in members.iter().enumerate() {
                for &j in &members[a + 1..] {
                    if best.is_some_and(|b| b <= (i, j)) {
                        break;
                    }
                    let (f, k) = (&homs[i].0, &homs[j].0);
                    if f.generator_images() == k.generator_images() {
                        continue;
                    }
                    let ok = match (desc, target_member) {
                        (None, _) | (_, Some(Tri::Yes)) => true,
                        (Some(d), _) => member_of_variety(&f.image().join(&k.image()), d, ctx) == Tri::Yes,
                    };
                    if ok {
                        best = Some((i, j));
                    } else {
                        skipped += 1;
                    }
                }
            }
        }
        if skipped > 0 {
            report.notes.push(format!(
                "target {t} (order {}): {skipped} separating pairs skipped, image not a verified member",
                c.order()
            ));
        }
        if let Some((i, j)) = best {
            let (f, k) = (&homs[i].0, &homs[j].0);
            let witness = g
                .generators()
                .iter()
                .zip(f.generator_images().iter().zip(k.generator_images()))
                .find(|(_, (a, b))| a != b)
                .map(|(x, _)| x.clone())
                .expect("distinct homomorphisms differ on a generator");
            report.pair = Some(SeparatingPair {
                target: c.clone(),
                f: f.generator_images().to_vec(),
                g: k.generator_images().to_vec(),
                witness,
            });
            return Ok(report);
        }
        report.notes.push(format!(
            "target {t} (order {}): {} homomorphisms, no separating pair",
            c.order(),
            homs.len()
        ));
    }
    Ok(report)
}

fn default_targets(g: &PermutationGroup, desc: &VarietyDescriptor) -> Vec<PermutationGroup> {
    let mut targets = vec![g.clone()];
    if let VarietyDescriptor::VarOfGroup(name) = desc {
        if let Ok(s) = crate::catalog::resolve(name) {
            targets.push(s);
        }
    }
    targets
}

/// Decides whether `H ↪ G` is an epimorphism in `desc`, with the default
/// separating targets `G` and, for `var:S`, `S`.
pub fn epi_decide(g: &PermutationGroup, h: &PermutationGroup, desc: &VarietyDescriptor, ctx: &Context) -> EpiVerdict {
    epi_decide_with(g, h, desc, ctx, &default_targets(g, desc))
}

pub fn epi_decide_with(
    g: &PermutationGroup,
    h: &PermutationGroup,
    desc: &VarietyDescriptor,
    ctx: &Context,
    targets: &[PermutationGroup],
) -> EpiVerdict {
    let mut steps = Vec::new();
    let (outcome, certificate) = decide(g, h, desc, ctx, targets, &mut steps);
    EpiVerdict::new(outcome, g, h, desc, certificate, steps, &ctx.budget)
}

fn unknown(steps: &mut Vec<String>, note: String) -> (Outcome, Certificate) {
    steps.push(note);
    (Outcome::Unknown, Certificate::Exhausted { notes: steps.clone() })
}

fn decide(
    g: &PermutationGroup,
    h: &PermutationGroup,
    desc: &VarietyDescriptor,
    ctx: &Context,
    targets: &[PermutationGroup],
    steps: &mut Vec<String>,
) -> (Outcome, Certificate) {
    if !h.is_subgroup_of(g) {
        return unknown(steps, "H is not a subgroup of G".into());
    }
    if let Ok(Some(f)) = ctx.fixtures.known_epi(g, h, desc, ctx.budget.hom_cap) {
        steps.push(format!("fixture: {f}"));
        let d = Derivation::leaf(g, h, desc, Rule::Fixture { record: f.to_string() });
        return (Outcome::Epi, Certificate::Derivation(d));
    }
    match member_of_variety(g, desc, ctx) {
        Tri::Yes => steps.push(format!("G (order {}) lies in {desc}", g.order())),
        Tri::No => return unknown(steps, format!("G (order {}) is not in {desc}", g.order())),
        Tri::Unknown => return unknown(steps, format!("membership of G (order {}) in {desc} is undecided", g.order())),
    }
    if h.same_as(g) {
        steps.push("H = G".into());
        return (Outcome::Epi, Certificate::Derivation(Derivation::leaf(g, h, desc, Rule::Identity)));
    }

    if desc.is_solvable_variety() == Tri::Yes {
        steps.push(format!("{desc} is solvable, so every epimorphism is surjective and H ≠ G"));
        return match neumann_not_epi_test(g, h) {
            Ok(Some(c)) => {
                steps.push("Neumann decomposition: the solvable radical covers G with H".into());
                (Outcome::NotEpi, c)
            }
            Ok(None) => unknown(steps, "solvable radical does not cover G with H; G is not solvable".into()),
            Err(e) => unknown(steps, format!("solvable radical: {e}")),
        };
    }

    if let VarietyDescriptor::Product(n, q) = desc {
        let qg = match q_verbal(g, q, ctx) {
            Ok(x) => x,
            Err(e) => return unknown(steps, format!("Q(G) for {q}: {e}")),
        };
        if !product_covers(g, h, &qg) {
            steps.push(format!("H·Q(G) ≠ G with |Q(G)| = {}: the cover condition fails", qg.order()));
            return (Outcome::NotEpi, Certificate::ProductCoverFails { verbal: qg });
        }
        let meet = subgroup_intersection(g, h, &qg);
        steps.push(format!(
            "H·Q(G) = G with |Q(G)| = {}; recurse on H ∩ Q(G) (order {}) in {n}",
            qg.order(),
            meet.order()
        ));
        let inner_targets = default_targets(&qg, n);
        let (outcome, cert) = decide(&qg, &meet, n, ctx, &inner_targets, steps);
        return match (outcome, cert) {
            (Outcome::Epi, Certificate::Derivation(child)) => {
                let d = Derivation {
                    group: g.clone(),
                    sub: h.clone(),
                    variety: desc.clone(),
                    rule: Rule::ProductConditions { verbal: qg },
                    children: vec![child],
                };
                (Outcome::Epi, Certificate::Derivation(d))
            }
            (Outcome::NotEpi, inner) => (
                Outcome::NotEpi,
                Certificate::ProductInner {
                    verbal: qg,
                    inner: Box::new(inner),
                },
            ),
            (_, _) => unknown(steps, "the recursion is undecided".into()),
        };
    }

    match neumann_not_epi_test(g, h) {
        Ok(Some(c)) => {
            steps.push("Neumann decomposition: the solvable radical covers G with H".into());
            return (Outcome::NotEpi, c);
        }
        Ok(None) => steps.push("Neumann test inconclusive".into()),
        Err(e) => steps.push(format!("Neumann test: {e}")),
    }
    match separating_pair_search(g, h, targets, Some(desc), ctx) {
        Ok(report) => {
            steps.extend(report.notes.iter().cloned());
            if let Some(pair) = report.pair {
                steps.push("separating pair found".into());
                return (Outcome::NotEpi, Certificate::SeparatingPair(pair));
            }
        }
        Err(e) => steps.push(format!("separating search: {e}")),
    }
    unknown(steps, "no fixture, certificate or separating pair".into())
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionIvReport {
    /// `(|N₀|, H·N₀ = G)` for every normal `N₀` with `N₀ ∈ N` and
    /// `G/N₀ ∈ Q`.
    pub checked: Vec<(u128, bool)>,
    /// Normal subgroups whose memberships were undecided.
    pub skipped: usize,
    pub all_cover: bool,
}

/// For `prod(N, Q)`: checks `H·N₀ = G` over every enumerated normal `N₀`
/// with `N₀ ∈ N` and `G/N₀ ∈ Q`.
pub fn condition_iv_check(
    g: &PermutationGroup,
    h: &PermutationGroup,
    desc: &VarietyDescriptor,
    ctx: &Context,
) -> Result<ConditionIvReport> {
    let VarietyDescriptor::Product(n, q) = desc else {
        return Err(Error::Invalid(format!("{desc} is not a product variety")));
    };
    let mut report = ConditionIvReport {
        checked: Vec::new(),
        skipped: 0,
        all_cover: true,
    };
    for n0 in normal_subgroups(g, ctx.budget.element_cap)? {
        let (quo, _) = quotient(g, &n0)?;
        match (member_of_variety(&n0, n, ctx), member_of_variety(&quo, q, ctx)) {
            (Tri::Yes, Tri::Yes) => {
                let covers = product_covers(g, h, &n0);
                report.all_cover &= covers;
                report.checked.push((n0.order(), covers));
            }
            (Tri::No, _) | (_, Tri::No) => {}
            _ => report.skipped += 1,
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{all_subgroups, named};

    fn d(s: &str) -> VarietyDescriptor {
        s.parse().unwrap()
    }

    fn sub(g: &PermutationGroup, gens: &[&str]) -> PermutationGroup {
        PermutationGroup::from_cycles(g.degree(), gens).unwrap()
    }

    #[test]
    fn neumann_examples() {
        let s4 = named::symmetric(4);
        let s3 = sub(&s4, &["(0 1)", "(0 1 2)"]);
        match neumann_not_epi_test(&s4, &s3).unwrap() {
            Some(Certificate::Neumann { normal }) => assert_eq!(normal.order(), 24),
            other => panic!("{other:?}"),
        }
        let a5 = named::alternating(5);
        let a4 = named::alternating(4).extend_degree(5);
        assert!(neumann_not_epi_test(&a5, &a4).unwrap().is_none());
        assert!(neumann_not_epi_test(&s4, &s4).unwrap().is_none());
        // S4 is solvable, so the radical is S4 itself; with a non-solvable
        // group the radical can be a proper subgroup.
        let s5 = named::symmetric(5);
        assert!(neumann_not_epi_test(&s5, &a4).unwrap().is_none());
    }

    #[test]
    fn separating_examples() {
        let ctx = Context::default();
        let c4 = named::cyclic(4);
        let c2 = sub(&c4, &["(0 2)(1 3)"]);
        let r = separating_pair_search(&c4, &c2, std::slice::from_ref(&c4), Some(&d("A")), &ctx).unwrap();
        let pair = r.pair.unwrap();
        assert_eq!(pair.f, c4.generators().to_vec());
        assert_eq!(pair.g, vec![c4.generators()[0].inverse()]);
        assert_eq!(pair.witness, c4.generators()[0]);
        assert!(pair.verify(&c4, &c2, Some(&d("A")), &ctx).unwrap());

        let s3 = named::symmetric(3);
        let r = separating_pair_search(&s3, &s3, &[s3.clone(), c4.clone()], None, &ctx).unwrap();
        assert!(r.pair.is_none());

        let a5 = named::alternating(5);
        let a4 = named::alternating(4).extend_degree(5);
        let r = separating_pair_search(&a5, &a4, &[named::symmetric(5)], Some(&d("var:A5")), &ctx).unwrap();
        assert!(r.pair.is_none());
        assert_eq!(r.homomorphisms, 121);
    }

    #[test]
    fn decide_examples() {
        let ctx = Context::default();
        let a5 = named::alternating(5);
        let a4 = named::alternating(4).extend_degree(5);
        for desc in ["var:A5", "prod(var:A5,A)", "prod(var:A5,Nc:2)"] {
            let v = epi_decide(&a5, &a4, &d(desc), &ctx);
            assert_eq!(v.outcome, Outcome::Epi, "{desc}: {:?}", v.derivation);
            assert!(v.verify(&ctx).unwrap(), "{desc}");
        }
        let c4 = named::cyclic(4);
        let c2 = sub(&c4, &["(0 2)(1 3)"]);
        let v = epi_decide(&c4, &c2, &d("A"), &ctx);
        assert_eq!(v.outcome, Outcome::NotEpi);
        assert!(v.verify(&ctx).unwrap());
        // S5 has elements of order 4, so it fails the exponent law of A5.
        let s5 = named::symmetric(5);
        let v = epi_decide(&s5, &a4, &d("var:A5"), &ctx);
        assert_eq!(v.outcome, Outcome::Unknown);
    }

    #[test]
    fn product_cover_failure() {
        let ctx = Context::default();
        let s4 = named::symmetric(4);
        let v4 = sub(&s4, &["(0 1)(2 3)", "(0 2)(1 3)"]);
        let v = epi_decide(&s4, &v4, &d("prod(var:A5,A)"), &ctx);
        assert_eq!(v.outcome, Outcome::NotEpi);
        assert!(matches!(v.certificate, Certificate::ProductCoverFails { .. }));
        assert!(v.verify(&ctx).unwrap());
    }

    #[test]
    fn solvable_varieties_reject_every_proper_subgroup() {
        let ctx = Context::default();
        for g in [named::symmetric(4), named::quaternion(), named::dihedral(6)] {
            for h in all_subgroups(&g).unwrap() {
                let v = epi_decide(&g, &h, &d("Sl:3"), &ctx);
                let expected = if h.order() == g.order() { Outcome::Epi } else { Outcome::NotEpi };
                assert_eq!(v.outcome, expected);
                assert!(v.verify(&ctx).unwrap());
            }
        }
    }

    #[test]
    fn tampered_certificates_fail() {
        let ctx = Context::default();
        let c4 = named::cyclic(4);
        let c2 = sub(&c4, &["(0 2)(1 3)"]);
        let mut v = epi_decide(&c4, &c2, &d("A"), &ctx);
        v.certificate = Certificate::Neumann { normal: c2.clone() };
        assert!(!v.verify(&ctx).unwrap());
        let r = separating_pair_search(&c4, &c2, std::slice::from_ref(&c4), None, &ctx).unwrap();
        let mut pair = r.pair.unwrap();
        pair.g = pair.f.clone();
        assert!(!pair.verify(&c4, &c2, None, &ctx).unwrap());
        let a5 = named::alternating(5);
        let a4 = named::alternating(4).extend_degree(5);
        let mut v = epi_decide(&a5, &a4, &d("var:A5"), &ctx);
        v.outcome = Outcome::NotEpi;
        assert!(!v.verify(&ctx).unwrap());
        let v = epi_decide(&a5, &a4, &d("var:A5"), &ctx);
        assert!(!v.certificate.verify(&a5, &a5, &d("var:A5"), &ctx).unwrap());
    }

    #[test]
    fn condition_iv_on_epi_instances() {
        let ctx = Context::default();
        let a5 = named::alternating(5);
        let a4 = named::alternating(4).extend_degree(5);
        let desc = d("prod(var:A5,A)");
        let r = condition_iv_check(&a5, &a4, &desc, &ctx).unwrap();
        assert!(r.all_cover);
        let s4 = named::symmetric(4);
        for h in all_subgroups(&s4).unwrap() {
            let desc = d("prod(A,Nc:2)");
            if epi_decide(&s4, &h, &desc, &ctx).outcome == Outcome::Epi {
                assert!(condition_iv_check(&s4, &h, &desc, &ctx).unwrap().all_cover);
            }
        }
    }
}
