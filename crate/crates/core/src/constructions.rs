//! Direct products, regular wreath products and the Kaloujnine–Krasner
//! embedding.
//!
//! Wreath conventions: with `B`'s elements sorted as `b_0 < b_1 < …`, point
//! `(i, c)` of `A wr B` is `c·m + i` where `m = degree(A)`. A base element
//! `φ` acts by `(i, c) ↦ (φ(c)(i), c)` and a top element `b` by
//! `(i, c) ↦ (i, index(b_c·b))`, so `(φb)(ψd) = (c ↦ φ(c)·ψ(c·b))·bd`.

use std::collections::HashMap;
use std::ops::Range;

use crate::budget::{limits, Budget};
use crate::error::{Error, Result};
use crate::perm::{is_normal, quotient, GroupHomomorphism, Permutation, PermutationGroup};

/// `G_1 × … × G_k` on disjoint point blocks.
#[derive(Debug, Clone)]
pub struct DirectProduct {
    pub product: PermutationGroup,
    pub factors: Vec<PermutationGroup>,
    offsets: Vec<usize>,
}

impl DirectProduct {
    pub fn block(&self, i: usize) -> Range<usize> {
        self.offsets[i]..self.offsets[i] + self.factors[i].degree()
    }

    /// `x` placed in component `i`.
    pub fn embed(&self, i: usize, x: &Permutation) -> Permutation {
        x.shifted_into(self.offsets[i], self.product.degree())
    }

    pub fn project(&self, i: usize, x: &Permutation) -> Permutation {
        x.restrict(self.offsets[i], self.factors[i].degree())
    }

    pub fn embedding(&self, i: usize) -> GroupHomomorphism {
        let f = &self.factors[i];
        let images = f.generators().iter().map(|x| self.embed(i, x)).collect();
        GroupHomomorphism::new(f.clone(), self.product.clone(), images).expect("component embedding")
    }

    /// `H_1 × … × H_k` for subgroups `H_i ⊆ G_i`.
    pub fn product_of(&self, subs: &[PermutationGroup]) -> PermutationGroup {
        assert_eq!(subs.len(), self.factors.len());
        let gens = subs
            .iter()
            .enumerate()
            .flat_map(|(i, h)| h.generators().iter().map(move |x| (i, x)))
            .map(|(i, x)| self.embed(i, x))
            .filter(|x| !x.is_identity())
            .collect();
        PermutationGroup::new(self.product.degree(), gens).unwrap()
    }
}

pub fn direct_product(factors: &[PermutationGroup]) -> Result<DirectProduct> {
    if factors.is_empty() {
        return Err(Error::Invalid("direct product of no factors".into()));
    }
    let degree: usize = factors.iter().map(PermutationGroup::degree).sum();
    if degree > limits::DEGREE {
        return Err(Error::budget("direct product degree", degree as u128, limits::DEGREE as u128));
    }
    let mut offsets = Vec::with_capacity(factors.len());
    let mut at = 0;
    for f in factors {
        offsets.push(at);
        at += f.degree();
    }
    let gens = factors
        .iter()
        .zip(&offsets)
        .flat_map(|(f, &o)| f.generators().iter().map(move |x| x.shifted_into(o, degree)))
        .filter(|x| !x.is_identity())
        .collect();
    Ok(DirectProduct {
        product: PermutationGroup::new(degree, gens)?,
        factors: factors.to_vec(),
        offsets,
    })
}

/// `G^k` with componentwise embeddings.
pub fn direct_power(g: &PermutationGroup, k: usize) -> Result<DirectProduct> {
    if k == 0 {
        return Err(Error::Invalid("direct power exponent must be positive".into()));
    }
    direct_product(&vec![g.clone(); k])
}

/// Regular wreath product `A wr B` with its block structure.
#[derive(Debug, Clone)]
pub struct WreathContext {
    pub bottom: PermutationGroup,
    pub top: PermutationGroup,
    pub product: PermutationGroup,
    /// Elements of `B` in the deterministic order; block `c` belongs to
    /// `top_elements[c]`.
    pub top_elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
}

pub fn regular_wreath(a: &PermutationGroup, b: &PermutationGroup, budget: &Budget) -> Result<WreathContext> {
    let nb = b.order();
    if nb > budget.wreath_top_cap {
        return Err(Error::budget("wreath top group order", nb, budget.wreath_top_cap));
    }
    let m = a.degree();
    let degree = m.saturating_mul(nb as usize);
    if degree > limits::DEGREE {
        return Err(Error::budget("wreath product degree", degree as u128, limits::DEGREE as u128));
    }
    if a.order().checked_pow(nb as u32).and_then(|x| x.checked_mul(nb)).is_none() {
        return Err(Error::budget("wreath product order", u128::MAX, u128::MAX));
    }
    let top_elements = b.sorted_elements_within(budget.wreath_top_cap)?;
    let index: HashMap<Permutation, usize> =
        top_elements.iter().enumerate().map(|(i, x)| (x.clone(), i)).collect();
    let mut ctx = WreathContext {
        bottom: a.clone(),
        top: b.clone(),
        product: PermutationGroup::trivial(degree.max(1)),
        top_elements,
        index,
    };
    let mut gens: Vec<Permutation> = a.generators().iter().map(|x| ctx.in_block(0, x)).collect();
    gens.extend(b.generators().iter().map(|y| ctx.top_element(y)));
    gens.retain(|x| !x.is_identity());
    ctx.product = PermutationGroup::new(degree, gens)?;
    Ok(ctx)
}

impl WreathContext {
    pub fn block_size(&self) -> usize {
        self.bottom.degree()
    }

    pub fn blocks(&self) -> usize {
        self.top_elements.len()
    }

    /// Point range of the block indexed by top element `b`.
    pub fn block_of(&self, b: &Permutation) -> Option<Range<usize>> {
        let c = *self.index.get(b)?;
        Some(self.block_range(c))
    }

    pub fn block_range(&self, c: usize) -> Range<usize> {
        let m = self.block_size();
        c * m..(c + 1) * m
    }

    /// `(top element, block)` pairs in block order.
    pub fn base_block_map(&self) -> Vec<(Permutation, Range<usize>)> {
        (0..self.blocks())
            .map(|c| (self.top_elements[c].clone(), self.block_range(c)))
            .collect()
    }

    pub fn index_of(&self, b: &Permutation) -> Option<usize> {
        self.index.get(b).copied()
    }

    /// The base element with `x` in block `c` and the identity elsewhere.
    pub fn in_block(&self, c: usize, x: &Permutation) -> Permutation {
        x.shifted_into(c * self.block_size(), self.product_degree())
    }

    fn product_degree(&self) -> usize {
        self.block_size() * self.blocks()
    }

    /// The base element `φ` with `φ(b_c) = phi[c]`.
    pub fn base_element(&self, phi: &[Permutation]) -> Permutation {
        assert_eq!(phi.len(), self.blocks());
        let m = self.block_size();
        let mut images = Vec::with_capacity(self.product_degree());
        for (c, x) in phi.iter().enumerate() {
            images.extend(x.images().iter().map(|&i| (c * m) as u32 + i));
        }
        Permutation::from_images(images).expect("blockwise bijection")
    }

    /// Right translation by `b` on blocks.
    pub fn top_element(&self, b: &Permutation) -> Permutation {
        let m = self.block_size();
        let mut images = vec![0u32; self.product_degree()];
        for (c, t) in self.top_elements.iter().enumerate() {
            let d = self.index[&t.compose(b)];
            for i in 0..m {
                images[c * m + i] = (d * m + i) as u32;
            }
        }
        Permutation::from_images(images).expect("block translation")
    }

    /// Splits `x = φ·b` into the base coordinates and the top element.
    pub fn decompose(&self, x: &Permutation) -> Option<(Vec<Permutation>, Permutation)> {
        let m = self.block_size();
        let d = x.apply(0) as usize / m;
        let b = self.top_elements.get(d)?.clone();
        let phi_part = x.compose(&self.top_element(&b).inverse());
        let phi: Vec<Permutation> = (0..self.blocks()).map(|c| phi_part.restrict(c * m, m)).collect();
        (self.base_element(&phi) == phi_part).then_some((phi, b))
    }

    /// The base subgroup `A^B`, normal of index `|B|`.
    pub fn base_subgroup(&self) -> PermutationGroup {
        let gens = (0..self.blocks())
            .flat_map(|c| self.bottom.generators().iter().map(move |x| (c, x)))
            .map(|(c, x)| self.in_block(c, x))
            .filter(|x| !x.is_identity())
            .collect();
        PermutationGroup::new(self.product.degree(), gens).unwrap()
    }

    /// `H^B` for a subgroup `H ⊆ A`.
    pub fn base_power_of(&self, h: &PermutationGroup) -> PermutationGroup {
        let gens = (0..self.blocks())
            .flat_map(|c| h.generators().iter().map(move |x| (c, x)))
            .map(|(c, x)| self.in_block(c, x))
            .filter(|x| !x.is_identity())
            .collect();
        PermutationGroup::new(self.product.degree(), gens).unwrap()
    }

    /// The complement `{b}` acting by right translation on blocks.
    pub fn top_subgroup(&self) -> PermutationGroup {
        let gens = self
            .top
            .generators()
            .iter()
            .map(|b| self.top_element(b))
            .filter(|x| !x.is_identity())
            .collect();
        PermutationGroup::new(self.product.degree(), gens).unwrap()
    }

    pub fn top_embedding(&self) -> GroupHomomorphism {
        let images = self.top.generators().iter().map(|b| self.top_element(b)).collect();
        GroupHomomorphism::new(self.top.clone(), self.product.clone(), images).expect("top embedding")
    }

    /// `H wr B` inside `A wr B` for a subgroup `H ⊆ A`.
    pub fn subgroup_wreath(&self, h: &PermutationGroup) -> PermutationGroup {
        let mut gens: Vec<Permutation> = h.generators().iter().map(|x| self.in_block(0, x)).collect();
        gens.extend(self.top.generators().iter().map(|b| self.top_element(b)));
        gens.retain(|x| !x.is_identity());
        PermutationGroup::new(self.product.degree(), gens).unwrap()
    }
}

/// Embedding of `E` into `A wr (E/A)`.
#[derive(Debug, Clone)]
pub struct KkEmbedding {
    pub wreath: WreathContext,
    pub hom: GroupHomomorphism,
    /// `transversal[c]` lies in the coset labelled by `wreath.top_elements[c]`.
    pub transversal: Vec<Permutation>,
}

/// Kaloujnine–Krasner embedding with the minimal-element transversal.
pub fn kaloujnine_krasner(e: &PermutationGroup, a: &PermutationGroup, budget: &Budget) -> Result<KkEmbedding> {
    kk_with(e, a, budget, |cands| cands.iter().min().cloned().unwrap())
}

/// As [`kaloujnine_krasner`] with the transversal picked by `choose` from
/// each coset's sorted members.
pub fn kk_with(
    e: &PermutationGroup,
    a: &PermutationGroup,
    budget: &Budget,
    mut choose: impl FnMut(&[Permutation]) -> Permutation,
) -> Result<KkEmbedding> {
    if !a.is_subgroup_of(e) || !is_normal(e, a) {
        return Err(Error::NotNormal);
    }
    let (q, pi) = quotient(e, a)?;
    let wreath = regular_wreath(a, &q, budget)?;
    let mut cosets: Vec<Vec<Permutation>> = vec![Vec::new(); wreath.blocks()];
    for x in e.sorted_elements_within(budget.element_cap)? {
        let c = wreath.index_of(&pi.apply(&x)).expect("projection lands in quotient");
        cosets[c].push(x);
    }
    let transversal: Vec<Permutation> = cosets.iter().map(|c| choose(c)).collect();
    let embed = |x: &Permutation| -> Permutation {
        let px = pi.apply(x);
        let phi: Vec<Permutation> = wreath
            .top_elements
            .iter()
            .enumerate()
            .map(|(c, b)| {
                let d = wreath.index_of(&b.compose(&px)).unwrap();
                transversal[c].compose(x).compose(&transversal[d].inverse())
            })
            .collect();
        wreath.base_element(&phi).compose(&wreath.top_element(&px))
    };
    let images = e.generators().iter().map(embed).collect();
    let hom = GroupHomomorphism::new(e.clone(), wreath.product.clone(), images)?;
    Ok(KkEmbedding {
        wreath,
        hom,
        transversal,
    })
}
