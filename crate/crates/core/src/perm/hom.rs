use std::ops::ControlFlow;
use std::sync::OnceLock;

use super::chain::StabChain;
use super::group::PermutationGroup;
use super::permutation::Permutation;
use crate::budget::limits;
use crate::error::{Error, Result};

/// A map between permutation groups given by generator images.
///
/// Well-definedness is the graph criterion: the subgroup of `source × target`
/// generated by the pairs `(gᵢ, imageᵢ)` has order `|source|`.
#[derive(Clone)]
pub struct GroupHomomorphism {
    source: PermutationGroup,
    target: PermutationGroup,
    images: Vec<Permutation>,
    graph: OnceLock<StabChain>,
}

impl std::fmt::Debug for GroupHomomorphism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GroupHomomorphism")
            .field("source", &self.source)
            .field("images", &self.images)
            .finish()
    }
}

fn graph_chain(source: &PermutationGroup, images: &[Permutation]) -> StabChain {
    let pairs: Vec<Permutation> = source
        .generators()
        .iter()
        .zip(images)
        .map(|(g, c)| g.direct_sum(c))
        .collect();
    let degree = source.degree() + images.first().map(|c| c.degree()).unwrap_or(0);
    StabChain::build(degree, &pairs, &source.chain().base())
}

impl GroupHomomorphism {
    pub fn new(
        source: PermutationGroup,
        target: PermutationGroup,
        images: Vec<Permutation>,
    ) -> Result<Self> {
        if images.len() != source.generators().len() {
            return Err(Error::Invalid(format!(
                "{} generator images for {} generators",
                images.len(),
                source.generators().len()
            )));
        }
        for c in &images {
            if !target.contains(c)? {
                return Err(Error::NotInGroup(c.to_string()));
            }
        }
        let hom = Self::new_unchecked(source, target, images);
        if !hom.verify() {
            return Err(Error::Invalid("generator images do not define a homomorphism".into()));
        }
        Ok(hom)
    }

    pub(crate) fn new_unchecked(
        source: PermutationGroup,
        target: PermutationGroup,
        images: Vec<Permutation>,
    ) -> Self {
        Self {
            source,
            target,
            images,
            graph: OnceLock::new(),
        }
    }

    fn graph(&self) -> &StabChain {
        self.graph.get_or_init(|| graph_chain(&self.source, &self.images))
    }

    /// Graph-of-map criterion.
    pub fn verify(&self) -> bool {
        self.graph().order() == self.source.order()
    }

    pub fn source(&self) -> &PermutationGroup {
        &self.source
    }

    pub fn target(&self) -> &PermutationGroup {
        &self.target
    }

    pub fn generator_images(&self) -> &[Permutation] {
        &self.images
    }

    /// Image of `g ∈ source`. Sifting `(g, 1)` through the graph chain, whose
    /// base lies in the source points, leaves `(1, f(g)⁻¹)`.
    pub fn apply(&self, g: &Permutation) -> Permutation {
        let m = self.source.degree();
        let n = self.target.degree();
        let x = g.direct_sum(&Permutation::identity(n));
        let (residue, _) = self.graph().sift(&x);
        debug_assert!(residue.restrict(0, m).is_identity(), "element outside source");
        residue.restrict(m, n).inverse()
    }

    pub fn image(&self) -> PermutationGroup {
        PermutationGroup::new(self.target.degree(), self.images.clone()).unwrap()
    }

    pub fn is_injective(&self) -> bool {
        self.image().order() == self.source.order()
    }

    /// Kernel by filtering source elements, up to `cap` elements.
    pub fn kernel(&self, cap: u128) -> Result<PermutationGroup> {
        let mut builder = super::group::SubgroupBuilder::new(self.source.degree());
        for e in self.source.elements_within(cap)? {
            if !builder.contains(&e) && self.apply(&e).is_identity() {
                builder.add(&e);
            }
        }
        Ok(builder.finish())
    }
}

/// Every homomorphism `g → c`, by backtracking over generator images.
///
/// Candidate images of generator `i` are the elements of `c` whose order
/// divides the order of `gᵢ`, taken in the deterministic element ordering;
/// partial assignments are pruned with the graph criterion on the subgroup
/// generated so far. Requires `|g|·|c| ≤ cap`.
pub fn all_homomorphisms_within(
    g: &PermutationGroup,
    c: &PermutationGroup,
    cap: u128,
) -> Result<Vec<GroupHomomorphism>> {
    let mut out = Vec::new();
    for_each_homomorphism(g, c, cap, |h| {
        out.push(h);
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

pub fn all_homomorphisms(g: &PermutationGroup, c: &PermutationGroup) -> Result<Vec<GroupHomomorphism>> {
    all_homomorphisms_within(g, c, limits::HOMOMORPHISMS)
}

/// Streams homomorphisms in enumeration order until `visit` breaks.
/// Returns whether the enumeration ran to completion.
pub fn for_each_homomorphism(
    g: &PermutationGroup,
    c: &PermutationGroup,
    cap: u128,
    mut visit: impl FnMut(GroupHomomorphism) -> ControlFlow<()>,
) -> Result<bool> {
    let work = g.order().saturating_mul(c.order());
    if work > cap {
        return Err(Error::budget("homomorphism search", work, cap));
    }
    let targets = c.sorted_elements_within(cap)?;
    let gens = g.generators().to_vec();
    let candidates: Vec<Vec<&Permutation>> = gens
        .iter()
        .map(|x| {
            let o = x.order();
            targets.iter().filter(|t| o % t.order() == 0).collect()
        })
        .collect();
    let prefixes: Vec<PermutationGroup> = (1..=gens.len())
        .map(|k| PermutationGroup::new(g.degree(), gens[..k].to_vec()).unwrap())
        .collect();
    let mut search = Search {
        g,
        c,
        candidates: &candidates,
        prefixes: &prefixes,
        chosen: Vec::with_capacity(gens.len()),
        visit: &mut visit,
    };
    Ok(search.run().is_continue())
}

/// First injective homomorphism `g → c` in enumeration order, if any.
pub fn find_embedding(
    g: &PermutationGroup,
    c: &PermutationGroup,
    cap: u128,
) -> Result<Option<GroupHomomorphism>> {
    if !c.order().is_multiple_of(g.order()) {
        return Ok(None);
    }
    let mut found = None;
    for_each_homomorphism(g, c, cap, |h| {
        if h.is_injective() {
            found = Some(h);
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(found)
}

struct Search<'a, F> {
    g: &'a PermutationGroup,
    c: &'a PermutationGroup,
    candidates: &'a [Vec<&'a Permutation>],
    prefixes: &'a [PermutationGroup],
    chosen: Vec<Permutation>,
    visit: &'a mut F,
}

impl<F: FnMut(GroupHomomorphism) -> ControlFlow<()>> Search<'_, F> {
    fn run(&mut self) -> ControlFlow<()> {
        let k = self.chosen.len();
        if k == self.candidates.len() {
            let hom = GroupHomomorphism::new_unchecked(self.g.clone(), self.c.clone(), self.chosen.clone());
            if hom.verify() {
                return (self.visit)(hom);
            }
            return ControlFlow::Continue(());
        }
        for &t in &self.candidates[k] {
            self.chosen.push(t.clone());
            let last = k + 1 == self.candidates.len();
            let sub = &self.prefixes[k];
            if last || graph_chain(sub, &self.chosen).order() == sub.order() {
                self.run()?;
            }
            self.chosen.pop();
        }
        ControlFlow::Continue(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::named;

    #[test]
    fn spot_counts() {
        assert_eq!(all_homomorphisms(&named::cyclic(4), &named::cyclic(4)).unwrap().len(), 4);
        assert_eq!(all_homomorphisms(&named::alternating(5), &named::cyclic(2)).unwrap().len(), 1);
        assert_eq!(all_homomorphisms(&named::cyclic(2), &named::symmetric(3)).unwrap().len(), 4);
        assert_eq!(all_homomorphisms(&named::symmetric(3), &named::cyclic(2)).unwrap().len(), 2);
        assert_eq!(all_homomorphisms(&named::klein_four(), &named::klein_four()).unwrap().len(), 16);
        assert_eq!(all_homomorphisms(&named::symmetric(3), &named::symmetric(3)).unwrap().len(), 10);
    }

    #[test]
    fn every_enumerated_map_passes_graph_criterion() {
        for h in all_homomorphisms(&named::dihedral(4), &named::symmetric(3)).unwrap() {
            assert!(h.verify());
            let elems = h.source().chain().elements();
            for a in &elems {
                for b in &elems {
                    assert_eq!(h.apply(&a.compose(b)), h.apply(a).compose(&h.apply(b)));
                }
            }
        }
    }

    #[test]
    fn rejects_non_homomorphism() {
        let c4 = named::cyclic(4);
        let s3 = named::symmetric(3);
        let three = Permutation::parse_cycles("(0 1 2)", 3).unwrap();
        assert!(GroupHomomorphism::new(c4, s3, vec![three]).is_err());
    }

    #[test]
    fn embeddings() {
        assert!(find_embedding(&named::klein_four(), &named::symmetric(4), 10_000).unwrap().is_some());
        assert!(find_embedding(&named::quaternion(), &named::symmetric(4), 10_000).unwrap().is_none());
        assert!(find_embedding(&named::cyclic(5), &named::symmetric(4), 10_000).unwrap().is_none());
    }

    #[test]
    fn budget_is_enforced() {
        let r = all_homomorphisms_within(&named::alternating(5), &named::symmetric(5), 1000);
        assert!(matches!(r, Err(Error::BudgetExceeded { .. })));
    }
}
