//! Dominion bounds and three-valued epimorphism decisions with certificates
//! that re-verify mechanically.
//!
//! An `Epi` outcome always carries a [`Derivation`] whose leaves are
//! fixtures or identities; search exhaustion never yields `Epi`.

mod bounds;
mod decide;
mod pipeline;

pub use bounds::{direct_power_bounds_agree, dominion_bounds, mckay_bound, DominionBounds};
pub use decide::{
    condition_iv_check, epi_decide, epi_decide_with, neumann_not_epi_test, separating_pair_search,
    ConditionIvReport, SearchReport,
};
pub use pipeline::{
    escape_ladder, find_wreath_escape, lcs_orders, simpletimes_pipeline, verify_qofsimple, Branch, EscapeReport, LadderStep,
    PipelineReport, QofSimpleReport,
};

use serde::Serialize;

use crate::budget::Budget;
use crate::error::Result;
use crate::perm::{is_normal, is_solvable, product_covers, subgroup_intersection, GroupHomomorphism, Permutation, PermutationGroup};
use crate::serde_cycles;
use crate::variety::{member_of_variety, q_verbal, Context, Tri, VarietyDescriptor};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Epi,
    NotEpi,
    Unknown,
}

/// Two homomorphisms into `target` that agree on the subgroup's generators
/// and differ at `witness`.
#[derive(Debug, Clone, Serialize)]
pub struct SeparatingPair {
    #[serde(serialize_with = "serde_cycles::group")]
    pub target: PermutationGroup,
    /// Images of the group's generators under `f`.
    #[serde(serialize_with = "serde_cycles::seq")]
    pub f: Vec<Permutation>,
    #[serde(serialize_with = "serde_cycles::seq")]
    pub g: Vec<Permutation>,
    #[serde(serialize_with = "serde_cycles::one")]
    pub witness: Permutation,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    SeparatingPair(SeparatingPair),
    /// A solvable normal subgroup `N` with `NH = G` and `H ≠ G`.
    Neumann {
        #[serde(serialize_with = "serde_cycles::group")]
        normal: PermutationGroup,
    },
    /// For `prod(N, Q)`: `H·Q(G) ≠ G`.
    ProductCoverFails {
        #[serde(serialize_with = "serde_cycles::group")]
        verbal: PermutationGroup,
    },
    /// For `prod(N, Q)`: `H·Q(G) = G`, and `H ∩ Q(G)` is not epi in `Q(G)`
    /// within `N`, certified by `inner`.
    ProductInner {
        #[serde(serialize_with = "serde_cycles::group")]
        verbal: PermutationGroup,
        inner: Box<Certificate>,
    },
    Derivation(Derivation),
    /// Nothing was proved; lists what was tried.
    Exhausted { notes: Vec<String> },
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum Rule {
    /// `H = G`.
    Identity,
    /// A known-epi fixture matches `(G, H)` up to isomorphism.
    Fixture { record: String },
    /// `H·Q(G) = G` and the single child proves `H ∩ Q(G)` epi in `Q(G)`
    /// within `N`.
    ProductConditions {
        #[serde(serialize_with = "serde_cycles::group")]
        verbal: PermutationGroup,
    },
    /// `G = S^k` and `H = H₀^k` in consecutive blocks; the child proves
    /// `H₀` epi in `S`, and dominions commute with finite direct powers.
    DirectPower { factors: usize },
}

/// A proof that `sub` is epimorphically embedded in `group` within
/// `variety`.
#[derive(Debug, Clone, Serialize)]
pub struct Derivation {
    #[serde(serialize_with = "serde_cycles::group")]
    pub group: PermutationGroup,
    #[serde(serialize_with = "serde_cycles::group")]
    pub sub: PermutationGroup,
    pub variety: VarietyDescriptor,
    #[serde(flatten)]
    pub rule: Rule,
    pub children: Vec<Derivation>,
}

/// `h` copied into `k` consecutive blocks of `h.degree()` points.
pub fn block_power(h: &PermutationGroup, k: usize) -> PermutationGroup {
    let m = h.degree();
    let gens = (0..k)
        .flat_map(|c| h.generators().iter().map(move |x| x.shifted_into(c * m, k * m)))
        .filter(|x| !x.is_identity())
        .collect();
    PermutationGroup::new(k * m, gens).expect("block generators")
}

impl Derivation {
    pub fn leaf(group: &PermutationGroup, sub: &PermutationGroup, variety: &VarietyDescriptor, rule: Rule) -> Self {
        Self {
            group: group.clone(),
            sub: sub.clone(),
            variety: variety.clone(),
            rule,
            children: Vec::new(),
        }
    }

    /// Re-runs every condition check from scratch.
    pub fn verify(&self, ctx: &Context) -> Result<bool> {
        if !self.sub.is_subgroup_of(&self.group) {
            return Ok(false);
        }
        let ok = match &self.rule {
            Rule::Identity => self.children.is_empty() && self.sub.same_as(&self.group),
            Rule::Fixture { .. } => {
                self.children.is_empty()
                    && ctx
                        .fixtures
                        .known_epi(&self.group, &self.sub, &self.variety, ctx.budget.hom_cap)?
                        .is_some()
            }
            Rule::ProductConditions { .. } => {
                let VarietyDescriptor::Product(n, q) = &self.variety else {
                    return Ok(false);
                };
                let [child] = self.children.as_slice() else {
                    return Ok(false);
                };
                let qg = q_verbal(&self.group, q, ctx)?;
                let meet = subgroup_intersection(&self.group, &self.sub, &qg);
                product_covers(&self.group, &self.sub, &qg)
                    && child.variety == **n
                    && child.group.same_as(&qg)
                    && child.sub.same_as(&meet)
                    && child.verify(ctx)?
            }
            Rule::DirectPower { factors } => {
                let [child] = self.children.as_slice() else {
                    return Ok(false);
                };
                *factors >= 1
                    && child.variety == self.variety
                    && self.group.degree() == factors * child.group.degree()
                    && self.group.same_as(&block_power(&child.group, *factors))
                    && self.sub.same_as(&block_power(&child.sub, *factors))
                    && child.verify(ctx)?
            }
        };
        Ok(ok)
    }

    /// Rules used, depth first, for reporting.
    pub fn rules(&self) -> Vec<String> {
        let mut out = vec![match &self.rule {
            Rule::Identity => format!("identity: H = G (order {}) in {}", self.group.order(), self.variety),
            Rule::Fixture { record } => format!("fixture: {record}"),
            Rule::ProductConditions { verbal } => format!(
                "product conditions in {}: H·Q(G) = G with |Q(G)| = {}, recurse on H ∩ Q(G) (order {})",
                self.variety,
                verbal.order(),
                self.children.first().map(|c| c.sub.order()).unwrap_or(0)
            ),
            Rule::DirectPower { factors } => format!(
                "direct power: dominion of H^{factors} in S^{factors} is the power of the dominion of H in S, in {}",
                self.variety
            ),
        }];
        for c in &self.children {
            out.extend(c.rules());
        }
        out
    }
}

impl SeparatingPair {
    pub fn verify(&self, g: &PermutationGroup, h: &PermutationGroup, desc: Option<&VarietyDescriptor>, ctx: &Context) -> Result<bool> {
        let Ok(f) = GroupHomomorphism::new(g.clone(), self.target.clone(), self.f.clone()) else {
            return Ok(false);
        };
        let Ok(k) = GroupHomomorphism::new(g.clone(), self.target.clone(), self.g.clone()) else {
            return Ok(false);
        };
        if self.witness.degree() != g.degree() || !g.has(&self.witness) {
            return Ok(false);
        }
        let agree = h.generators().iter().all(|x| f.apply(x) == k.apply(x));
        let differ = f.apply(&self.witness) != k.apply(&self.witness);
        let member = match desc {
            None => true,
            Some(d) => {
                let span = f.image().join(&k.image());
                member_of_variety(&span, d, ctx) == Tri::Yes
            }
        };
        Ok(agree && differ && member)
    }
}

impl Certificate {
    /// Mechanical re-verification for `(g, h)` in `desc`.
    pub fn verify(&self, g: &PermutationGroup, h: &PermutationGroup, desc: &VarietyDescriptor, ctx: &Context) -> Result<bool> {
        if !h.is_subgroup_of(g) {
            return Ok(false);
        }
        match self {
            Certificate::SeparatingPair(pair) => pair.verify(g, h, Some(desc), ctx),
            Certificate::Neumann { normal } => Ok(normal.is_subgroup_of(g)
                && is_normal(g, normal)
                && is_solvable(normal)
                && product_covers(g, h, normal)
                && h.order() < g.order()),
            Certificate::ProductCoverFails { verbal } => {
                let VarietyDescriptor::Product(_, q) = desc else {
                    return Ok(false);
                };
                let qg = q_verbal(g, q, ctx)?;
                Ok(qg.same_as(verbal) && !product_covers(g, h, &qg))
            }
            Certificate::ProductInner { verbal, inner } => {
                let VarietyDescriptor::Product(n, q) = desc else {
                    return Ok(false);
                };
                let qg = q_verbal(g, q, ctx)?;
                if !qg.same_as(verbal) || !product_covers(g, h, &qg) {
                    return Ok(false);
                }
                let meet = subgroup_intersection(g, h, &qg);
                inner.verify(&qg, &meet, n, ctx)
            }
            Certificate::Derivation(d) => {
                Ok(d.group.same_as(g) && d.sub.same_as(h) && d.variety == *desc && d.verify(ctx)?)
            }
            Certificate::Exhausted { .. } => Ok(true),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EpiVerdict {
    pub schema: u32,
    pub outcome: Outcome,
    #[serde(serialize_with = "serde_cycles::group")]
    pub group: PermutationGroup,
    #[serde(serialize_with = "serde_cycles::group")]
    pub sub: PermutationGroup,
    pub variety: VarietyDescriptor,
    pub certificate: Certificate,
    /// Human-readable steps, in order.
    pub derivation: Vec<String>,
    pub budgets: Budget,
}

impl EpiVerdict {
    pub(crate) fn new(
        outcome: Outcome,
        g: &PermutationGroup,
        h: &PermutationGroup,
        desc: &VarietyDescriptor,
        certificate: Certificate,
        derivation: Vec<String>,
        budget: &Budget,
    ) -> Self {
        Self {
            schema: SCHEMA,
            outcome,
            group: g.clone(),
            sub: h.clone(),
            variety: desc.clone(),
            certificate,
            derivation,
            budgets: *budget,
        }
    }

    /// The certificate matches the outcome and re-verifies.
    pub fn verify(&self, ctx: &Context) -> Result<bool> {
        let shape = matches!(
            (self.outcome, &self.certificate),
            (Outcome::Epi, Certificate::Derivation(_))
                | (Outcome::Unknown, Certificate::Exhausted { .. })
                | (
                    Outcome::NotEpi,
                    Certificate::SeparatingPair(_)
                        | Certificate::Neumann { .. }
                        | Certificate::ProductCoverFails { .. }
                        | Certificate::ProductInner { .. }
                )
        );
        Ok(shape && self.certificate.verify(&self.group, &self.sub, &self.variety, ctx)?)
    }
}
