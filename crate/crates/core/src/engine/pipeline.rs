use serde::Serialize;

use super::{Derivation, EpiVerdict, Outcome, Rule};
use super::Certificate;
use crate::catalog;
use crate::constructions::regular_wreath;
use crate::error::{Error, Result};
use crate::perm::{
    derived_length, is_simple, lower_central_series, named, nilpotency_class, product_covers, subgroup_intersection,
    PermutationGroup,
};
use crate::serde_cycles;
use crate::variety::{member_of_variety, q_verbal, satisfies_laws, Context, LawWitness, Tri, VarietyDescriptor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// `Q(S wr B) = S^B`.
    Base,
    /// `Q(S wr B) = 1`.
    Trivial,
}

#[derive(Debug, Clone, Serialize)]
pub struct QofSimpleReport {
    pub branch: Branch,
    pub variety: VarietyDescriptor,
    pub wreath_order: String,
    pub verbal_order: String,
    pub base_order: String,
}

fn check_simple_nonabelian(s: &PermutationGroup, ctx: &Context) -> Result<()> {
    if s.is_abelian() || !is_simple(s, ctx.budget.element_cap)? {
        return Err(Error::Invalid("expected a nonabelian simple group".into()));
    }
    Ok(())
}

/// For simple nonabelian `S`, `Q(S wr B)` is the base `S^B` or trivial.
/// Anything else is reported as an internal error.
pub fn verify_qofsimple(
    s: &PermutationGroup,
    b: &PermutationGroup,
    q: &VarietyDescriptor,
    ctx: &Context,
) -> Result<QofSimpleReport> {
    check_simple_nonabelian(s, ctx)?;
    let w = regular_wreath(s, b, &ctx.budget)?;
    let v = q_verbal(&w.product, q, ctx)?;
    let base = w.base_subgroup();
    let branch = if v.same_as(&base) {
        Branch::Base
    } else if v.is_trivial() {
        Branch::Trivial
    } else {
        return Err(Error::Invalid(format!(
            "verbal subgroup of order {} is neither the base nor trivial",
            v.order()
        )));
    };
    Ok(QofSimpleReport {
        branch,
        variety: q.clone(),
        wreath_order: w.product.order().to_string(),
        verbal_order: v.order().to_string(),
        base_order: base.order().to_string(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct LadderStep {
    pub candidate: String,
    pub note: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct EscapeReport {
    pub base: String,
    pub variety: VarietyDescriptor,
    /// Name of the escaping top group `G ∈ V`.
    pub top: String,
    #[serde(serialize_with = "serde_cycles::group")]
    pub top_group: PermutationGroup,
    /// `|A wr G|`.
    pub witness_order: String,
    pub nilpotency_class: Option<usize>,
    pub derived_length: Option<usize>,
    /// A failing law with its violating tuple, for law-defined varieties.
    pub failing_law: Option<LawWitness>,
    pub tried: Vec<LadderStep>,
}

/// Candidate tops in order. For a p-group base: the trivial group, cyclic
/// p-groups up to the wreath top cap, then `C_p wr C_p` and
/// `C_p wr C_p wr C_p`. Otherwise: the trivial group, `C2 … C12`,
/// `C2 wr C2`, `C2 wr C2 wr C2`, `C3 wr C3`.
pub fn escape_ladder(a: &PermutationGroup, cap: u128) -> Vec<(String, PermutationGroup)> {
    let mut out = vec![("1".to_string(), named::trivial())];
    let n = a.order();
    let p = (2..=n).find(|p| n.is_multiple_of(*p)).unwrap_or(1);
    let mut m = n;
    while p > 1 && m.is_multiple_of(p) {
        m /= p;
    }
    if p > 1 && m == 1 {
        let mut q = p;
        while q <= cap {
            out.push((format!("C{q}"), named::cyclic(q as usize)));
            q *= p;
        }
        for name in [format!("C{p}wrC{p}"), format!("C{p}wrC{p}wrC{p}")] {
            if let Ok(g) = catalog::resolve(&name) {
                out.push((name, g));
            }
        }
        return out;
    }
    for k in 2..=12 {
        out.push((format!("C{k}"), named::cyclic(k)));
    }
    for name in ["C2wrC2", "C2wrC2wrC2", "C3wrC3"] {
        out.push((name.to_string(), catalog::resolve(name).expect("ladder group")));
    }
    out
}

/// First ladder group `G ∈ V` with `A wr G ∉ V`.
pub fn find_wreath_escape(a: &PermutationGroup, a_name: &str, desc: &VarietyDescriptor, ctx: &Context) -> Result<EscapeReport> {
    if a.is_trivial() {
        return Err(Error::Invalid("the base group must be nontrivial".into()));
    }
    let mut tried = Vec::new();
    if member_of_variety(a, desc, ctx) == Tri::No {
        tried.push(LadderStep {
            candidate: "-".into(),
            note: format!("{a_name} itself is not in {desc}"),
        });
    }
    let mut budget_hit = false;
    for (name, g) in escape_ladder(a, ctx.budget.wreath_top_cap) {
        let step = |note: String| LadderStep {
            candidate: name.clone(),
            note,
        };
        match member_of_variety(&g, desc, ctx) {
            Tri::Yes => {}
            Tri::No => {
                tried.push(step(format!("{name} is not in {desc}")));
                continue;
            }
            Tri::Unknown => {
                tried.push(step(format!("membership of {name} undecided")));
                continue;
            }
        }
        let w = match regular_wreath(a, &g, &ctx.budget) {
            Ok(w) => w,
            Err(e) => {
                budget_hit = true;
                tried.push(step(e.to_string()));
                continue;
            }
        };
        match member_of_variety(&w.product, desc, ctx) {
            Tri::No => {
                let failing_law = desc
                    .defining_laws()
                    .and_then(|laws| satisfies_laws(&w.product, &laws, &ctx.budget).ok())
                    .and_then(|c| c.witness);
                tried.push(step(format!("{a_name} wr {name} (order {}) escapes {desc}", w.product.order())));
                return Ok(EscapeReport {
                    base: a_name.to_string(),
                    variety: desc.clone(),
                    top: name.clone(),
                    top_group: g,
                    witness_order: w.product.order().to_string(),
                    nilpotency_class: nilpotency_class(&w.product),
                    derived_length: derived_length(&w.product),
                    failing_law,
                    tried,
                });
            }
            Tri::Yes => tried.push(step(format!("{a_name} wr {name} lies in {desc}"))),
            Tri::Unknown => tried.push(step(format!("membership of {a_name} wr {name} undecided"))),
        }
    }
    if budget_hit {
        Err(Error::budget("wreath escape ladder", tried.len() as u128, tried.len() as u128))
    } else {
        Err(Error::Undecidable(format!(
            "no ladder group escapes {desc} for {a_name}: {}",
            tried.iter().map(|s| format!("{}: {}", s.candidate, s.note)).collect::<Vec<_>>().join("; ")
        )))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PipelineReport {
    pub verdict: EpiVerdict,
    pub escape: Option<EscapeReport>,
    pub qofsimple: Option<QofSimpleReport>,
    pub notes: Vec<String>,
}

/// From a known epi `H ↪ S` in `N` (S simple nonabelian), finds `G ∈ Q`
/// with `S wr G ∉ Q` and proves `H wr G ↪ S wr G` epi in `prod(N, Q)`.
pub fn simpletimes_pipeline(
    s: &PermutationGroup,
    s_name: &str,
    h: &PermutationGroup,
    n: &VarietyDescriptor,
    q: &VarietyDescriptor,
    ctx: &Context,
) -> Result<PipelineReport> {
    let desc = VarietyDescriptor::product(n.clone(), q.clone());
    let unknown = |g: &PermutationGroup, hh: &PermutationGroup, notes: Vec<String>, escape, qofsimple| PipelineReport {
        verdict: EpiVerdict::new(
            Outcome::Unknown,
            g,
            hh,
            &desc,
            Certificate::Exhausted { notes: notes.clone() },
            notes.clone(),
            &ctx.budget,
        ),
        escape,
        qofsimple,
        notes,
    };
    check_simple_nonabelian(s, ctx)?;
    let Some(fixture) = ctx.fixtures.known_epi(s, h, n, ctx.budget.hom_cap)? else {
        return Ok(unknown(s, h, vec![format!("no known-epi fixture for this pair in {n}")], None, None));
    };
    let mut notes = vec![format!("fixture: {fixture}")];
    let escape = match find_wreath_escape(s, s_name, q, ctx) {
        Ok(e) => e,
        Err(e) => {
            notes.push(format!("escape search: {e}"));
            return Ok(unknown(s, h, notes, None, None));
        }
    };
    notes.push(format!("{s_name} wr {} escapes {q}", escape.top));
    let w = regular_wreath(s, &escape.top_group, &ctx.budget)?;
    let hw = w.subgroup_wreath(h);
    let qw = match q_verbal(&w.product, q, ctx) {
        Ok(x) => x,
        Err(e) => {
            notes.push(format!("Q(S wr G): {e}"));
            return Ok(unknown(&w.product, &hw, notes, Some(escape), None));
        }
    };
    let base = w.base_subgroup();
    let branch = if qw.same_as(&base) {
        Branch::Base
    } else if qw.is_trivial() {
        Branch::Trivial
    } else {
        return Err(Error::Invalid("verbal subgroup of S wr G is neither the base nor trivial".into()));
    };
    let qofsimple = QofSimpleReport {
        branch,
        variety: q.clone(),
        wreath_order: w.product.order().to_string(),
        verbal_order: qw.order().to_string(),
        base_order: base.order().to_string(),
    };
    if branch == Branch::Trivial {
        notes.push("Q(S wr G) is trivial although S wr G escapes Q".into());
        return Ok(unknown(&w.product, &hw, notes, Some(escape), Some(qofsimple)));
    }
    let covers = product_covers(&w.product, &hw, &qw);
    let meet = subgroup_intersection(&w.product, &hw, &qw);
    let h_power = w.base_power_of(h);
    notes.push(format!(
        "(H wr G)·Q(S wr G) {} S wr G; (H wr G) ∩ S^G {} H^G",
        if covers { "=" } else { "≠" },
        if meet.same_as(&h_power) { "=" } else { "≠" }
    ));
    if !covers || !meet.same_as(&h_power) {
        return Ok(unknown(&w.product, &hw, notes, Some(escape), Some(qofsimple)));
    }
    let leaf = Derivation::leaf(s, h, n, Rule::Fixture { record: fixture.to_string() });
    let power = Derivation {
        group: qw.clone(),
        sub: meet,
        variety: n.clone(),
        rule: Rule::DirectPower { factors: w.blocks() },
        children: vec![leaf],
    };
    let root = Derivation {
        group: w.product.clone(),
        sub: hw.clone(),
        variety: desc.clone(),
        rule: Rule::ProductConditions { verbal: qw },
        children: vec![power],
    };
    let steps = root.rules();
    let verdict = EpiVerdict::new(
        Outcome::Epi,
        &w.product,
        &hw,
        &desc,
        Certificate::Derivation(root),
        steps,
        &ctx.budget,
    );
    Ok(PipelineReport {
        verdict,
        escape: Some(escape),
        qofsimple: Some(qofsimple),
        notes,
    })
}

/// Lower central series terms' orders, for witness reports.
pub fn lcs_orders(g: &PermutationGroup, max: usize) -> Vec<u128> {
    lower_central_series(g, max).iter().map(PermutationGroup::order).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> VarietyDescriptor {
        s.parse().unwrap()
    }

    #[test]
    fn qofsimple_examples() {
        let ctx = Context::default();
        let a5 = named::alternating(5);
        let r = verify_qofsimple(&a5, &named::cyclic(2), &d("A"), &ctx).unwrap();
        assert_eq!((r.branch, r.verbal_order.as_str()), (Branch::Base, "3600"));
        let r = verify_qofsimple(&a5, &named::trivial(), &d("A"), &ctx).unwrap();
        assert_eq!((r.branch, r.verbal_order.as_str()), (Branch::Base, "60"));
        let r = verify_qofsimple(&a5, &named::cyclic(2), &d("laws:{x1^60}"), &ctx).unwrap();
        assert_eq!(r.branch, Branch::Trivial);
        assert!(verify_qofsimple(&named::symmetric(4), &named::cyclic(2), &d("A"), &ctx).is_err());
    }

    #[test]
    fn escape_examples() {
        let ctx = Context::default();
        let r = find_wreath_escape(&named::cyclic(2), "C2", &d("A"), &ctx).unwrap();
        assert_eq!((r.top.as_str(), r.witness_order.as_str()), ("C2", "8"));
        assert!(r.failing_law.is_some());
        let r = find_wreath_escape(&named::alternating(5), "A5", &d("A"), &ctx).unwrap();
        assert_eq!(r.top, "1");
        let r = find_wreath_escape(&named::cyclic(2), "C2", &d("Nc:2"), &ctx).unwrap();
        assert_eq!(r.top, "C4");
        assert!(r.nilpotency_class.unwrap() >= 3);
        assert!(find_wreath_escape(&named::trivial(), "1", &d("A"), &ctx).is_err());
    }

    #[test]
    fn lcs_of_c2_wr_c4() {
        let w = regular_wreath(&named::cyclic(2), &named::cyclic(4), &Default::default()).unwrap();
        assert_eq!(w.product.order(), 64);
        assert_eq!(lcs_orders(&w.product, 6)[..5], [64, 8, 4, 2, 1]);
        assert_eq!(nilpotency_class(&w.product), Some(4));
    }

    #[test]
    fn pipeline_examples() {
        let ctx = Context::default();
        let a5 = named::alternating(5);
        let a4 = named::alternating(4).extend_degree(5);
        for q in ["A", "Nc:2"] {
            let r = simpletimes_pipeline(&a5, "A5", &a4, &d("var:A5"), &d(q), &ctx).unwrap();
            assert_eq!(r.verdict.outcome, Outcome::Epi, "{q}: {:?}", r.notes);
            assert_eq!(r.escape.as_ref().unwrap().top, "1");
            assert!(r.verdict.verify(&ctx).unwrap());
        }
        let d5 = PermutationGroup::from_cycles(5, &["(0 1 2 3 4)", "(1 4)(2 3)"]).unwrap();
        let r = simpletimes_pipeline(&a5, "A5", &d5, &d("var:A5"), &d("A"), &ctx).unwrap();
        assert_eq!(r.verdict.outcome, Outcome::Unknown);
        // Every element order of A5 wr C_k divides 60·k, so laws:{x1^60}
        // holds in A5 wr 1 and escape needs a larger top.
        let r = simpletimes_pipeline(&a5, "A5", &a4, &d("var:A5"), &d("laws:{x1^60}"), &ctx).unwrap();
        assert_ne!(r.verdict.outcome, Outcome::NotEpi);
        assert!(r.verdict.verify(&ctx).unwrap());
    }

    #[test]
    fn pipeline_with_nontrivial_top() {
        // With Q = laws:{x1^30}, A5 lies in Q, C2 lies in Q, and A5 wr C2
        // has elements of order 4, so the escape top is C2.
        let ctx = Context::default();
        let a5 = named::alternating(5);
        let a4 = named::alternating(4).extend_degree(5);
        let r = simpletimes_pipeline(&a5, "A5", &a4, &d("var:A5"), &d("laws:{x1^30}"), &ctx).unwrap();
        assert_eq!(r.escape.as_ref().unwrap().top, "C2", "{:?}", r.notes);
        assert_eq!(r.verdict.outcome, Outcome::Epi, "{:?}", r.notes);
        assert_eq!(r.verdict.group.order(), 7200);
        assert!(r.verdict.verify(&ctx).unwrap());
    }
}
