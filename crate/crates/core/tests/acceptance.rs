//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the test
//! harness so every line is printed; exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vlab::catalog::{default_catalog, resolve};
use vlab::constructions::{direct_power, kaloujnine_krasner};
use vlab::engine::{dominion_bounds, epi_decide, find_wreath_escape, separating_pair_search, verify_qofsimple, Branch, Outcome};
use vlab::perm::{all_homomorphisms, all_subgroups, derived_subgroup, lower_central_series, normal_subgroups};
use vlab::power_series::magnus_image;
use vlab::variety::{Context, VarietyDescriptor, Word};
use vlab::wreath_z::{solve_commutator, TailConstantFn, WreathZElement};
use vlab::{Permutation, PermutationGroup};

const SEED: u64 = 20_240_601;

type Check = std::result::Result<String, String>;

fn d(s: &str) -> VarietyDescriptor {
    s.parse().unwrap()
}

fn g(name: &str) -> PermutationGroup {
    resolve(name).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> std::result::Result<(), String> {
    ensure(start.elapsed() < limit, || format!("took {:.1?}, limit {limit:?}", start.elapsed()))
}

fn criterion_1() -> Check {
    let t = Instant::now();
    let ctx = Context::default();
    let (a5, a4) = (g("A5"), g("A4").extend_degree(5));
    for desc in ["prod(var:A5,A)", "prod(var:A5,Nc:2)"] {
        let v = epi_decide(&a5, &a4, &d(desc), &ctx);
        ensure(v.outcome == Outcome::Epi, || format!("{desc}: {:?}", v.outcome))?;
        ensure(v.verify(&ctx).unwrap(), || format!("{desc}: certificate does not verify"))?;
        let text = v.derivation.join(" | ");
        ensure(text.contains("H·Q(G) = G") && text.contains("fixture") && text.contains("Neumann"), || {
            format!("{desc}: derivation lacks the product conditions or the fixture: {text}")
        })?;
    }
    within(t, Duration::from_secs(30))?;
    Ok(format!("both Epi with verified derivations in {:.2?}", t.elapsed()))
}

fn criterion_2() -> Check {
    let t = Instant::now();
    let ctx = Context::default();
    let (a5, c2) = (g("A5"), g("C2"));
    let r = verify_qofsimple(&a5, &c2, &d("A"), &ctx).map_err(|e| e.to_string())?;
    // The base of A5 wr C2 is A5 x A5.
    let base = a5.order() * a5.order();
    ensure(r.branch == Branch::Base && r.verbal_order == base.to_string(), || format!("A: {r:?}"))?;
    let r2 = verify_qofsimple(&a5, &c2, &d("laws:{x1^60}"), &ctx).map_err(|e| e.to_string())?;
    ensure(r2.branch == Branch::Trivial && r2.verbal_order == "1", || format!("x1^60: {r2:?}"))?;
    within(t, Duration::from_secs(60))?;
    Ok(format!("base branch with |Q| = {}, trivial branch for x1^60, {:.2?}", r.verbal_order, t.elapsed()))
}

fn criterion_3() -> Check {
    let t = Instant::now();
    let ctx = Context::default();
    let (mut pairs, mut groups) = (0, 0);
    for e in default_catalog().entries().iter().filter(|e| e.group.order() <= 24) {
        groups += 1;
        for h in all_subgroups(&e.group).map_err(|x| x.to_string())? {
            if h.same_as(&e.group) {
                continue;
            }
            pairs += 1;
            let v = epi_decide(&e.group, &h, &d("Sl:3"), &ctx);
            ensure(v.outcome == Outcome::NotEpi, || format!("{} > order {}: {:?}", e.name, h.order(), v.outcome))?;
            ensure(v.verify(&ctx).unwrap(), || format!("{}: certificate fails", e.name))?;
        }
    }
    within(t, Duration::from_secs(600))?;
    Ok(format!("{pairs} proper pairs over {groups} groups, all NotEpi and verified, {:.2?}", t.elapsed()))
}

fn criterion_4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let pools: Vec<Vec<Permutation>> = ["S3", "D4", "A4"]
        .iter()
        .map(|n| g(n).sorted_elements_within(100).unwrap())
        .collect();
    let mut runs = 0;
    for i in 0..200 {
        let pool = &pools[i % 3];
        let deg = pool[0].degree();
        let phi = TailConstantFn::random_finitely_supported(&mut rng, pool, 6).map_err(|e| e.to_string())?;
        let seed = pool[rng.gen_range(0..pool.len())].clone();
        let mut sols = Vec::new();
        for s in [Permutation::identity(deg), seed] {
            let psi = solve_commutator(&phi, &s).map_err(|e| e.to_string())?;
            // [ψ, x] computed through the group law of G wr Z.
            let b = WreathZElement::base(psi.clone());
            let x = WreathZElement::x(deg);
            let c = b.inverse().multiply(&x.inverse()).unwrap().multiply(&b).unwrap().multiply(&x).unwrap();
            ensure(c.shift == 0 && c.f == phi, || format!("run {i}: [psi,x] = {c} but phi = {phi}"))?;
            runs += 1;
            sols.push(psi);
        }
        let diff = |n: i64| sols[1].at(n).compose(&sols[0].at(n).inverse());
        let c0 = diff(0);
        ensure((-40..=40).all(|n| diff(n) == c0), || format!("run {i}: seed difference is not constant"))?;
    }
    Ok(format!("{runs}/400 exact, 200/200 constant differences"))
}

fn criterion_5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut ok = 0;
    for _ in 0..20 {
        let w = Word::random_reduced(&mut rng, 3, 8);
        ensure(!w.is_identity() && w.length() <= 8 && w.arity() <= 3, || format!("bad corpus word {w}"))?;
        for p in [2u32, 3] {
            // e = p^k b with p ∤ b contributes y_r^{p^k} and the factor b mod p.
            let mut monomial = Vec::new();
            let mut predicted = 1i64;
            for &(r, e) in w.letters() {
                let (mut k, mut b) = (0u32, e);
                while b % p as i64 == 0 {
                    b /= p as i64;
                    k += 1;
                }
                monomial.extend(std::iter::repeat_n(r, p.pow(k) as usize));
                predicted = predicted * b.rem_euclid(p as i64) % p as i64;
            }
            let deg = monomial.len() as u32 + 1;
            let image = magnus_image(&w, p, deg).map_err(|e| e.to_string())?;
            let got = image.coefficient(&monomial) as i64;
            ensure(got == predicted && got != 0 && !image.is_one(), || {
                format!("{w} at p={p}: coefficient {got}, predicted {predicted}")
            })?;
            ok += 1;
        }
    }
    Ok(format!("{ok}/40 witnesses match and images are nontrivial"))
}

fn criterion_6() -> Check {
    let t = Instant::now();
    let ctx = Context::default();
    let c2 = g("C2");
    let r = find_wreath_escape(&c2, "C2", &d("A"), &ctx).map_err(|e| e.to_string())?;
    let w = g("C2 wr C2");
    ensure(r.top == "C2" && r.witness_order == "8" && !w.is_abelian(), || format!("A: top {} order {}", r.top, r.witness_order))?;
    let r = find_wreath_escape(&g("A5"), "A5", &d("A"), &ctx).map_err(|e| e.to_string())?;
    ensure(r.top == "1", || format!("A5 in A: top {}", r.top))?;
    let r = find_wreath_escape(&c2, "C2", &d("Nc:2"), &ctx).map_err(|e| e.to_string())?;
    ensure(r.top == "C4", || format!("Nc:2: top {}", r.top))?;
    let w = g("C2 wr C4");
    let lcs = lower_central_series(&w, 3);
    let class_at_least_3 = !lcs[3].is_trivial();
    ensure(class_at_least_3, || "C2 wr C4 has class below 3".into())?;
    within(t, Duration::from_secs(60))?;
    ensure(r.witness_order == "32" && w.order() == 32, || {
        format!(
            "Nc:2 escape is C4 with class >= 3, but the witness C2 wr C4 has order {} (= 2^4 * 4), not 32",
            w.order()
        )
    })?;
    Ok(format!("C2 -> C2 (order 8), C2 -> C4 (order 32), A5 -> 1, {:.2?}", t.elapsed()))
}

/// The normal subgroup of `e` with the fingerprint of `a`.
fn normal_like(e: &PermutationGroup, a: &PermutationGroup) -> PermutationGroup {
    let fp = a.fingerprint(1000).unwrap();
    normal_subgroups(e, 1000)
        .unwrap()
        .into_iter()
        .find(|n| n.fingerprint(1000).unwrap() == fp)
        .expect("normal subgroup of the requested type")
}

fn criterion_7() -> Check {
    let ctx = Context::default();
    let cases = [
        ("C4", "C2"),
        ("S3", "C3"),
        ("D4", "C4"),
        ("Q8", "C4"),
        ("A4", "V4"),
        ("S4", "A4"),
        ("S4", "V4"),
        ("D6", "C6"),
        ("C6", "C3"),
        ("D5", "C5"),
    ];
    for (en, an) in cases {
        let e = g(en);
        let a = normal_like(&e, &g(an));
        let k = kaloujnine_krasner(&e, &a, &ctx.budget).map_err(|x| x.to_string())?;
        let elems = e.sorted_elements_within(1000).unwrap();
        let images: Vec<Permutation> = elems.iter().map(|x| k.hom.apply(x)).collect();
        for (i, x) in elems.iter().enumerate() {
            for (j, y) in elems.iter().enumerate() {
                let xy = elems.binary_search(&x.compose(y)).unwrap();
                ensure(images[xy] == images[i].compose(&images[j]), || format!("{en}/{an}: not a homomorphism"))?;
            }
        }
        let mut distinct = images.clone();
        distinct.sort();
        distinct.dedup();
        ensure(distinct.len() == elems.len(), || format!("{en}/{an}: not injective"))?;
        ensure(images.iter().all(|x| k.wreath.product.has(x)), || format!("{en}/{an}: image leaves the wreath"))?;
        ensure(k.hom.image().order() == e.order(), || format!("{en}/{an}: image order"))?;
    }
    Ok("10/10 embeddings are injective homomorphisms with image order |E|".into())
}

/// 100 seeded instances `(G, H)` with `|G| ≤ 200`.
fn sandwich_instances() -> Vec<(PermutationGroup, PermutationGroup)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let pool: Vec<&PermutationGroup> =
        default_catalog().entries().iter().map(|e| &e.group).filter(|g| g.order() <= 200).collect();
    (0..100)
        .map(|_| {
            let g = pool[rng.gen_range(0..pool.len())].clone();
            let k = rng.gen_range(0..=2);
            let gens = (0..k).map(|_| g.random_element(&mut rng)).filter(|x| !x.is_identity()).collect();
            let h = PermutationGroup::new(g.degree(), gens).unwrap();
            (g, h)
        })
        .collect()
}

fn criterion_8() -> Check {
    let ctx = Context::default();
    let desc = d("prod(A,A)");
    let mut exact = 0;
    for (i, (g, h)) in sandwich_instances().iter().enumerate() {
        let b = dominion_bounds(g, h, &desc, &ctx).map_err(|e| e.to_string())?;
        // A(G)·H with A(G) the derived subgroup.
        let formula = derived_subgroup(g).join(h);
        ensure(h.is_subgroup_of(&b.lower) && b.lower.is_subgroup_of(&b.upper), || format!("instance {i}: H <= lower <= upper fails"))?;
        ensure(b.mckay.same_as(&formula) && b.upper.is_subgroup_of(&formula), || format!("instance {i}: upper bound is not within A(G)H"))?;
        if b.exact {
            exact += 1;
            ensure(b.lower.same_as(&b.upper), || format!("instance {i}: exact but lower != upper"))?;
        } else {
            ensure(b.upper.same_as(&formula), || format!("instance {i}: open bound is not A(G)H"))?;
        }
    }
    Ok(format!("100 instances, {exact} exact, no violations"))
}

fn criterion_9() -> Check {
    let ctx = Context::default();
    let desc = d("prod(A,A)");
    let mut checked = 0;
    for (g, h) in sandwich_instances().into_iter().filter(|(g, _)| g.order() <= 60) {
        let base = dominion_bounds(&g, &h, &desc, &ctx).map_err(|e| e.to_string())?;
        if !base.exact {
            continue;
        }
        for k in [2, 3] {
            let dp = direct_power(&g, k).map_err(|e| e.to_string())?;
            let hk = dp.product_of(&vec![h.clone(); k]);
            let p = dominion_bounds(&dp.product, &hk, &desc, &ctx).map_err(|e| e.to_string())?;
            ensure(p.lower.same_as(&dp.product_of(&vec![base.lower.clone(); k])), || format!("|G| = {}, k = {k}: lower", g.order()))?;
            ensure(p.upper.same_as(&dp.product_of(&vec![base.upper.clone(); k])), || format!("|G| = {}, k = {k}: upper", g.order()))?;
            checked += 1;
        }
    }
    ensure(checked > 0, || "no exact instances".into())?;
    Ok(format!("{checked} power comparisons agree"))
}

fn criterion_10() -> Check {
    let ctx = Context::default();
    let count = |a: &str, b: &str| all_homomorphisms(&g(a), &g(b)).unwrap().len();
    // Homs from C_n are the elements x with x^n = 1; A5 is perfect.
    let cyclic_oracle = |n: i64, t: &str| {
        g(t).sorted_elements_within(1000).unwrap().iter().filter(|x| x.pow(n).is_identity()).count()
    };
    ensure(count("C4", "C4") == 4 && cyclic_oracle(4, "C4") == 4, || "|Hom(C4,C4)|".into())?;
    ensure(count("C2", "S3") == 4 && cyclic_oracle(2, "S3") == 4, || "|Hom(C2,S3)|".into())?;
    ensure(count("A5", "C2") == 1 && derived_subgroup(&g("A5")).order() == 60, || "|Hom(A5,C2)|".into())?;

    let c4 = g("C4");
    let c2 = PermutationGroup::new(4, vec![c4.generators()[0].pow(2)]).unwrap();
    let r = separating_pair_search(&c4, &c2, std::slice::from_ref(&c4), Some(&d("A")), &ctx).map_err(|e| e.to_string())?;
    let pair = r.pair.ok_or("no separating pair for C2 in C4")?;
    let x = c4.generators()[0].clone();
    let mut images = [pair.f[0].clone(), pair.g[0].clone()];
    images.sort();
    let mut expected = [x.clone(), x.inverse()];
    expected.sort();
    ensure(images == expected, || format!("pair is not identity/inversion: {images:?}"))?;

    let (a5, a4, s5) = (g("A5"), g("A4").extend_degree(5), g("S5"));
    let r = separating_pair_search(&a5, &a4, &[s5], None, &ctx).map_err(|e| e.to_string())?;
    // Hom(A5, S5): the trivial map plus |Aut(A5)| = 120 embeddings onto A5.
    ensure(r.pair.is_none() && r.homomorphisms == 121, || format!("A5/A4 into S5: {} homs, pair {}", r.homomorphisms, r.pair.is_some()))?;
    Ok("hom counts 4, 1, 4; identity/inversion pair; 121 homs into S5, inconclusive".into())
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("epi decisions for A4 in A5 under product varieties", criterion_1),
        ("verbal subgroup of A5 wr C2 is the base or trivial", criterion_2),
        ("no proper epis in Sl:3 for groups of order <= 24", criterion_3),
        ("commutator solutions in G wr Z", criterion_4),
        ("Magnus law-failure witnesses", criterion_5),
        ("wreath escapes for A and Nc:2", criterion_6),
        ("Kaloujnine-Krasner embeddings", criterion_7),
        ("dominion bound sandwich under prod(A,A)", criterion_8),
        ("bounds commute with direct powers", criterion_9),
        ("homomorphism counts and separating search", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
