use serde::Serialize;

use crate::constructions::direct_power;
use crate::error::{Error, Result};
use crate::perm::{normalizer_within, product_covers, subgroup_intersection, PermutationGroup};
use crate::serde_cycles;
use crate::variety::{q_verbal, Context, Tri, VarietyDescriptor};

/// `H ⊆ lower ⊆ dom ⊆ upper ⊆ mckay ⊆ G`. When `exact`, the dominion is
/// `lower = upper`; otherwise `upper = mckay`.
#[derive(Debug, Clone, Serialize)]
pub struct DominionBounds {
    #[serde(serialize_with = "serde_cycles::group")]
    pub lower: PermutationGroup,
    #[serde(serialize_with = "serde_cycles::group")]
    pub upper: PermutationGroup,
    /// `Q(G)·H` for products, `G` otherwise.
    #[serde(serialize_with = "serde_cycles::group")]
    pub mckay: PermutationGroup,
    pub exact: bool,
    pub derivation: Vec<String>,
}

/// `Q(G)·H`, a subgroup because `Q(G)` is normal. Membership of `G` in
/// `prod(N, Q)` is not enforced; the formula is computed for any `G`.
pub fn mckay_bound(
    g: &PermutationGroup,
    h: &PermutationGroup,
    _n: &VarietyDescriptor,
    q: &VarietyDescriptor,
    ctx: &Context,
) -> Result<PermutationGroup> {
    Ok(q_verbal(g, q, ctx)?.join(h))
}

pub fn dominion_bounds(g: &PermutationGroup, h: &PermutationGroup, desc: &VarietyDescriptor, ctx: &Context) -> Result<DominionBounds> {
    if !h.is_subgroup_of(g) {
        return Err(Error::Invalid("H is not a subgroup of G".into()));
    }
    let exact = |x: &PermutationGroup, mckay: PermutationGroup, why: String| DominionBounds {
        lower: x.clone(),
        upper: x.clone(),
        mckay,
        exact: true,
        derivation: vec![why],
    };
    if h.same_as(g) {
        return Ok(exact(g, g.clone(), "H = G".into()));
    }
    if let VarietyDescriptor::Product(n, q) = desc {
        let qg = q_verbal(g, q, ctx)?;
        let mckay = qg.join(h);
        let meet = subgroup_intersection(g, h, &qg);
        let inner = dominion_bounds(&qg, &meet, n, ctx)?;
        let lower = h.join(&inner.lower);
        let mut derivation: Vec<String> = inner.derivation.iter().map(|s| format!("  inside Q(G): {s}")).collect();
        derivation.push(format!(
            "Q(G) for {q} has order {}; upper bound Q(G)·H of order {}",
            qg.order(),
            mckay.order()
        ));
        derivation.push(format!("lower bound H·D of order {}", lower.order()));
        let mut is_exact = false;
        if inner.exact {
            let nd = normalizer_within(g, &inner.lower, ctx.budget.element_cap)?;
            is_exact = product_covers(g, &nd, &qg);
            derivation.push(format!(
                "D exact; N_G(D)·Q(G) {} G, so the dominion {}",
                if is_exact { "=" } else { "≠" },
                if is_exact { "is H·D" } else { "is only bounded" }
            ));
        }
        let upper = if is_exact { lower.clone() } else { mckay.clone() };
        return Ok(DominionBounds {
            lower,
            upper,
            mckay,
            exact: is_exact,
            derivation,
        });
    }
    if desc.is_solvable_variety() == Tri::Yes {
        return Ok(exact(h, g.clone(), format!("{desc} is solvable: dominions are trivial, dom = H")));
    }
    if let Some(f) = ctx.fixtures.known_epi(g, h, desc, ctx.budget.hom_cap)? {
        return Ok(exact(g, g.clone(), format!("fixture: {f}")));
    }
    Ok(DominionBounds {
        lower: h.clone(),
        upper: g.clone(),
        mckay: g.clone(),
        exact: false,
        derivation: vec![format!("no rule applies in {desc}: H ⊆ dom ⊆ G")],
    })
}

/// On exact instances, bounds for `(G^k, H^k)` are the `k`-th powers of the
/// bounds for `(G, H)`. `Ok(None)` when `(G, H)` is not exact.
pub fn direct_power_bounds_agree(
    g: &PermutationGroup,
    h: &PermutationGroup,
    desc: &VarietyDescriptor,
    k: usize,
    ctx: &Context,
) -> Result<Option<bool>> {
    let base = dominion_bounds(g, h, desc, ctx)?;
    if !base.exact {
        return Ok(None);
    }
    let dp = direct_power(g, k)?;
    let hk = dp.product_of(&vec![h.clone(); k]);
    let power = dominion_bounds(&dp.product, &hk, desc, ctx)?;
    let lower = dp.product_of(&vec![base.lower.clone(); k]);
    let upper = dp.product_of(&vec![base.upper.clone(); k]);
    Ok(Some(power.exact && power.lower.same_as(&lower) && power.upper.same_as(&upper)))
}
