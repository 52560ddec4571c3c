//! Bundled scenarios. Each one re-runs deterministically (fixed seeds, sorted
//! enumerations) and compares its observed summary with the recorded one.

use std::collections::BTreeMap;

use anyhow::Result;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use vlab::catalog::{default_catalog, resolve};
use vlab::engine::{
    dominion_bounds, epi_decide, find_wreath_escape, simpletimes_pipeline, verify_qofsimple, Branch, Outcome,
};
use vlab::perm::all_subgroups;
use vlab::power_series::law_failure_witness;
use vlab::variety::{Context, VarietyDescriptor, Word};
use vlab::wreath_z::{commutator_with_x, solve_commutator, TailConstantFn};
use vlab::{Permutation, PermutationGroup};

pub struct Scenario {
    pub name: &'static str,
    pub description: &'static str,
    pub expected: &'static str,
    run: fn(&Context) -> Result<(String, Value)>,
}

pub const SEED: u64 = 0x7a11_5eed;

pub fn all() -> Vec<Scenario> {
    vec![
        Scenario {
            name: "neumann-a4a5",
            description: "A4 in A5: fixture-backed epi in var(A5), lifted through prod(var:A5,A), prod(var:A5,Nc:2) and A4 wr C2 in A5 wr C2",
            expected: "Epi Epi pipeline:Epi verified",
            run: neumann_a4a5,
        },
        Scenario {
            name: "mckay-bound-demo",
            description: "lower, upper and Q(G)·H bounds under product varieties",
            expected: "A5>A4 60/60/60 exact; S4>S3 6/6/24 exact; S4>C2 2/2/24 exact; D4>C2 2/2/4 exact; S5>A4 60/60/60 exact; A5>C3 3/60/60 open",
            run: mckay_bound_demo,
        },
        Scenario {
            name: "commofwr-fuzz",
            description: "200 random finitely supported phi over S3, D4, A4, solved as [psi, x] from two seeds",
            expected: "400/400 exact, 200/200 constant differences",
            run: commofwr_fuzz,
        },
        Scenario {
            name: "qofsimple-a5c2",
            description: "verbal subgroup of A5 wr C2 in A and in laws:{x1^60}",
            expected: "A:base 3600; laws:{x1^60}:trivial 1",
            run: qofsimple_a5c2,
        },
        Scenario {
            name: "escape-abelian",
            description: "first ladder top G in A with base wr G outside A",
            expected: "C2:C2 order 8; A5:1",
            run: escape_abelian,
        },
        Scenario {
            name: "escape-nil2",
            description: "first ladder top G in Nc:2 with C2 wr G outside Nc:2",
            expected: "C2:C4 order 64 class 4",
            run: escape_nil2,
        },
        Scenario {
            name: "magnus-corpus",
            description: "20 seeded reduced words in at most 3 letters, law-failure witnesses at p = 2, 3",
            expected: "40/40 verified",
            run: magnus_corpus,
        },
        Scenario {
            name: "solvable-exhaustive",
            description: "every proper subgroup of every bundled group of order at most 24 is not epi in Sl:3",
            expected: "NotEpi everywhere, certificates verified, 0 Unknown",
            run: solvable_exhaustive,
        },
    ]
}

pub fn find(name: &str) -> Option<Scenario> {
    all().into_iter().find(|s| s.name == name)
}

impl Scenario {
    pub fn run(&self, ctx: &Context) -> Result<(String, Value)> {
        (self.run)(ctx)
    }
}

fn d(s: &str) -> VarietyDescriptor {
    s.parse().expect("bundled descriptor")
}

fn g(name: &str) -> PermutationGroup {
    resolve(name).expect("bundled group name")
}

fn a5_a4() -> (PermutationGroup, PermutationGroup) {
    (g("A5"), g("A4").extend_degree(5))
}

fn neumann_a4a5(ctx: &Context) -> Result<(String, Value)> {
    let (a5, a4) = a5_a4();
    let mut verified = true;
    let mut outcomes = Vec::new();
    let mut verdicts = Vec::new();
    for desc in ["prod(var:A5,A)", "prod(var:A5,Nc:2)"] {
        let v = epi_decide(&a5, &a4, &d(desc), ctx);
        verified &= v.verify(ctx)?;
        outcomes.push(format!("{:?}", v.outcome));
        verdicts.push(json!({"variety": desc, "outcome": v.outcome, "derivation": v.derivation}));
    }
    let p = simpletimes_pipeline(&a5, "A5", &a4, &d("var:A5"), &d("A"), ctx)?;
    verified &= p.verdict.verify(ctx)?;
    let observed = format!(
        "{} pipeline:{:?}{}",
        outcomes.join(" "),
        p.verdict.outcome,
        if verified { " verified" } else { " UNVERIFIED" }
    );
    let details = json!({
        "decisions": verdicts,
        "pipeline": {
            "outcome": p.verdict.outcome,
            "group_order": p.verdict.group.order(),
            "sub_order": p.verdict.sub.order(),
            "escape_top": p.escape.as_ref().map(|e| e.top.clone()),
            "derivation": p.verdict.derivation,
        },
    });
    Ok((observed, details))
}

fn mckay_bound_demo(ctx: &Context) -> Result<(String, Value)> {
    let s4 = g("S4");
    let sub = |gr: &PermutationGroup, gens: &[&str]| PermutationGroup::from_cycles(gr.degree(), gens);
    let d4 = g("D4");
    let (a5, a4) = a5_a4();
    let cases = [
        ("A5>A4", a5, a4, "prod(var:A5,A)"),
        ("S4>S3", s4.clone(), sub(&s4, &["(0 1)", "(0 1 2)"])?, "prod(A,A)"),
        ("S4>C2", s4.clone(), sub(&s4, &["(0 1)"])?, "prod(A,A)"),
        ("D4>C2", d4.clone(), sub(&d4, &["(1 3)"])?, "prod(A,A)"),
        ("S5>A4", g("S5"), g("A4").extend_degree(5), "prod(var:A5,A)"),
        ("A5>C3", g("A5"), sub(&g("A5"), &["(0 1 2)"])?, "prod(var:A5,A)"),
    ];
    let mut parts = Vec::new();
    let mut rows = Vec::new();
    for (label, gr, h, desc) in cases {
        let b = dominion_bounds(&gr, &h, &d(desc), ctx)?;
        parts.push(format!(
            "{label} {}/{}/{} {}",
            b.lower.order(),
            b.upper.order(),
            b.mckay.order(),
            if b.exact { "exact" } else { "open" }
        ));
        rows.push(json!({
            "case": label,
            "variety": desc,
            "sub_order": h.order(),
            "lower_order": b.lower.order(),
            "upper_order": b.upper.order(),
            "mckay_order": b.mckay.order(),
            "exact": b.exact,
            "derivation": b.derivation,
        }));
    }
    Ok((parts.join("; "), json!({ "cases": rows })))
}

fn commofwr_fuzz(ctx: &Context) -> Result<(String, Value)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let groups: Vec<(&str, Vec<Permutation>)> = ["S3", "D4", "A4"]
        .iter()
        .map(|n| Ok((*n, g(n).sorted_elements_within(ctx.budget.element_cap)?)))
        .collect::<Result<_>>()?;
    let (mut exact, mut constant, mut max_window) = (0, 0, 0);
    let mut per_group: BTreeMap<&str, usize> = BTreeMap::new();
    for i in 0..200 {
        let (name, elems) = &groups[i % groups.len()];
        let phi = TailConstantFn::random_finitely_supported(&mut rng, elems, 6)?;
        let seed = elems[rand::Rng::gen_range(&mut rng, 0..elems.len())].clone();
        let psi_e = solve_commutator(&phi, &Permutation::identity(phi.degree()))?;
        let psi_s = solve_commutator(&phi, &seed)?;
        let ok = [&psi_e, &psi_s].iter().filter(|p| commutator_with_x(p).map(|c| c == phi).unwrap_or(false)).count();
        exact += ok;
        if psi_e.constant_left_quotient(&psi_s).is_some() {
            constant += 1;
        }
        max_window = max_window.max(psi_e.window().map_or(0, |(lo, hi)| hi - lo + 1));
        *per_group.entry(name).or_default() += 1;
    }
    let observed = format!("{exact}/400 exact, {constant}/200 constant differences");
    Ok((observed, json!({"seed": SEED, "runs_per_group": per_group, "max_psi_window": max_window})))
}

fn qofsimple_a5c2(ctx: &Context) -> Result<(String, Value)> {
    let (a5, c2) = (g("A5"), g("C2"));
    let mut parts = Vec::new();
    let mut reports = Vec::new();
    for desc in ["A", "laws:{x1^60}"] {
        let r = verify_qofsimple(&a5, &c2, &d(desc), ctx)?;
        let branch = match r.branch {
            Branch::Base => "base",
            Branch::Trivial => "trivial",
        };
        parts.push(format!("{desc}:{branch} {}", r.verbal_order));
        reports.push(serde_json::to_value(&r)?);
    }
    Ok((parts.join("; "), json!({ "reports": reports })))
}

fn escape_abelian(ctx: &Context) -> Result<(String, Value)> {
    let c2 = find_wreath_escape(&g("C2"), "C2", &d("A"), ctx)?;
    let a5 = find_wreath_escape(&g("A5"), "A5", &d("A"), ctx)?;
    let observed = format!("C2:{} order {}; A5:{}", c2.top, c2.witness_order, a5.top);
    Ok((observed, json!({"C2": c2, "A5": a5})))
}

fn escape_nil2(ctx: &Context) -> Result<(String, Value)> {
    let r = find_wreath_escape(&g("C2"), "C2", &d("Nc:2"), ctx)?;
    let class = r.nilpotency_class.map_or("-".to_string(), |c| c.to_string());
    let observed = format!("C2:{} order {} class {class}", r.top, r.witness_order);
    Ok((observed, serde_json::to_value(&r)?))
}

fn magnus_corpus(_ctx: &Context) -> Result<(String, Value)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let words: Vec<Word> = (0..20).map(|_| Word::random_reduced(&mut rng, 3, 8)).collect();
    let mut ok = 0;
    let mut rows = Vec::new();
    for w in &words {
        for p in [2, 3] {
            let x = law_failure_witness(w, p)?;
            ok += x.verified() as usize;
            rows.push(json!({
                "word": x.word,
                "p": p,
                "d": x.d,
                "monomial": x.monomial_text,
                "predicted": x.predicted_coefficient,
                "coefficient": x.coefficient,
                "verified": x.verified(),
            }));
        }
    }
    Ok((format!("{ok}/{} verified", rows.len()), json!({"seed": SEED, "witnesses": rows})))
}

fn solvable_exhaustive(ctx: &Context) -> Result<(String, Value)> {
    let desc = d("Sl:3");
    let (mut pairs, mut not_epi, mut verified, mut unknown) = (0, 0, 0, 0);
    let mut groups = 0;
    for entry in default_catalog().entries().iter().filter(|e| e.group.order() <= 24) {
        groups += 1;
        for h in all_subgroups(&entry.group)? {
            if h.same_as(&entry.group) {
                continue;
            }
            pairs += 1;
            let v = epi_decide(&entry.group, &h, &desc, ctx);
            match v.outcome {
                Outcome::NotEpi => not_epi += 1,
                Outcome::Unknown => unknown += 1,
                Outcome::Epi => {}
            }
            verified += v.verify(ctx)? as usize;
        }
    }
    let observed = if not_epi == pairs && verified == pairs {
        format!("NotEpi everywhere, certificates verified, {unknown} Unknown")
    } else {
        format!("NotEpi {not_epi}/{pairs}, verified {verified}/{pairs}, {unknown} Unknown")
    };
    Ok((observed, json!({"groups": groups, "pairs": pairs, "not_epi": not_epi, "verified": verified, "unknown": unknown})))
}
