use std::fmt;
use std::sync::OnceLock;

use rand::Rng;

use super::chain::StabChain;
use super::permutation::Permutation;
use crate::error::{Error, Result};

/// A permutation group given by generators, with a lazily built stabilizer
/// chain. Subgroups are values of the same type whose generators lie in the
/// ambient group.
#[derive(Clone)]
pub struct PermutationGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: OnceLock<StabChain>,
}

impl PermutationGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        let mut generators = generators;
        if generators.is_empty() {
            generators.push(Permutation::identity(degree));
        }
        Ok(Self {
            degree,
            generators,
            chain: OnceLock::new(),
        })
    }

    /// Generators from cycle strings, e.g. `from_cycles(5, &["(0 1 2 3 4)", "(0 1 2)"])`.
    pub fn from_cycles(degree: usize, generators: &[&str]) -> Result<Self> {
        let gens = generators
            .iter()
            .map(|s| Permutation::parse_cycles(s, degree))
            .collect::<Result<Vec<_>>>()?;
        Self::new(degree, gens)
    }

    pub fn trivial(degree: usize) -> Self {
        Self::new(degree, vec![]).expect("identity has the right degree")
    }

    pub(crate) fn from_chain(degree: usize, generators: Vec<Permutation>, chain: StabChain) -> Self {
        let group = Self::new(degree, generators).expect("degrees checked by caller");
        let _ = group.chain.set(chain);
        group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    pub fn chain(&self) -> &StabChain {
        self.chain
            .get_or_init(|| StabChain::build(self.degree, &self.generators, &[]))
    }

    pub fn order(&self) -> u128 {
        self.chain().order()
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.iter().all(Permutation::is_identity)
    }

    /// Membership by sifting. Errors on a degree mismatch.
    pub fn contains(&self, p: &Permutation) -> Result<bool> {
        if p.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: p.degree(),
            });
        }
        Ok(self.chain().contains(p))
    }

    /// Membership for an element already known to have the right degree.
    pub fn has(&self, p: &Permutation) -> bool {
        debug_assert_eq!(p.degree(), self.degree);
        self.chain().contains(p)
    }

    pub fn is_subgroup_of(&self, other: &PermutationGroup) -> bool {
        self.degree == other.degree && self.generators.iter().all(|g| other.has(g))
    }

    /// Same set of elements.
    pub fn same_as(&self, other: &PermutationGroup) -> bool {
        self.degree == other.degree && self.order() == other.order() && self.is_subgroup_of(other)
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        (0..g.len()).all(|i| (i + 1..g.len()).all(|j| g[i].compose(&g[j]) == g[j].compose(&g[i])))
    }

    /// All elements, refusing groups larger than `cap`.
    pub fn elements_within(&self, cap: u128) -> Result<Vec<Permutation>> {
        let n = self.order();
        if n > cap {
            return Err(Error::budget("element enumeration", n, cap));
        }
        Ok(self.chain().elements())
    }

    /// All elements sorted by the deterministic element ordering.
    pub fn sorted_elements_within(&self, cap: u128) -> Result<Vec<Permutation>> {
        let mut e = self.elements_within(cap)?;
        e.sort();
        Ok(e)
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        self.chain().random_element(rng)
    }

    /// Subgroup generated by `gens` (which should lie in `self`).
    pub fn subgroup(&self, gens: Vec<Permutation>) -> PermutationGroup {
        debug_assert!(gens.iter().all(|g| self.has(g)));
        PermutationGroup::new(self.degree, gens).expect("degree matches ambient group")
    }

    /// Subgroup generated by `self` and `other`.
    pub fn join(&self, other: &PermutationGroup) -> PermutationGroup {
        let mut b = SubgroupBuilder::from_group(self);
        for g in other.generators() {
            b.add(g);
        }
        b.finish()
    }

    /// Same group acting on `degree ≥ self.degree()` points.
    pub fn extend_degree(&self, degree: usize) -> PermutationGroup {
        let gens = self.generators.iter().map(|g| g.extend_to(degree)).collect();
        PermutationGroup::new(degree, gens).expect("extended generators")
    }

    /// Drops identity and duplicate generators (keeps at least one).
    pub fn tidy(&self) -> PermutationGroup {
        let mut gens: Vec<Permutation> = Vec::new();
        for g in &self.generators {
            if !g.is_identity() && !gens.contains(g) {
                gens.push(g.clone());
            }
        }
        PermutationGroup::new(self.degree, gens).unwrap()
    }

    /// `(element-order histogram, |Z(G)|, |G'|, class count)` fingerprint,
    /// computed by enumeration. Used in reports and for telling catalog
    /// entries apart, never as an isomorphism test.
    pub fn fingerprint(&self, cap: u128) -> Result<Fingerprint> {
        let elements = self.elements_within(cap)?;
        let mut orders: Vec<(u64, usize)> = Vec::new();
        for e in &elements {
            let o = e.order();
            match orders.iter_mut().find(|(k, _)| *k == o) {
                Some(entry) => entry.1 += 1,
                None => orders.push((o, 1)),
            }
        }
        orders.sort();
        let center = elements
            .iter()
            .filter(|e| self.generators.iter().all(|g| e.compose(g) == g.compose(e)))
            .count() as u128;
        let derived = super::series::derived_subgroup(self);
        let classes = super::subgroups::conjugacy_classes(self, cap)?.len();
        let abelianization = self.order() / derived.order();
        Ok(Fingerprint {
            order: self.order(),
            element_orders: orders,
            center,
            derived: derived.order(),
            abelianization,
            classes,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct Fingerprint {
    pub order: u128,
    pub element_orders: Vec<(u64, usize)>,
    pub center: u128,
    pub derived: u128,
    pub abelianization: u128,
    pub classes: usize,
}

impl fmt::Debug for PermutationGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group[deg {}](", self.degree)?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

/// Grows a subgroup one element at a time, rebuilding the chain only when
/// the new element is not already contained.
pub struct SubgroupBuilder {
    degree: usize,
    generators: Vec<Permutation>,
    chain: StabChain,
}

impl SubgroupBuilder {
    pub fn new(degree: usize) -> Self {
        Self {
            degree,
            generators: Vec::new(),
            chain: StabChain::build(degree, &[], &[]),
        }
    }

    pub fn from_group(group: &PermutationGroup) -> Self {
        let generators: Vec<Permutation> = group
            .generators()
            .iter()
            .filter(|g| !g.is_identity())
            .cloned()
            .collect();
        Self {
            degree: group.degree(),
            generators,
            chain: group.chain().clone(),
        }
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.chain.contains(g)
    }

    pub fn order(&self) -> u128 {
        self.chain.order()
    }

    /// Returns true if `g` enlarged the subgroup.
    pub fn add(&mut self, g: &Permutation) -> bool {
        if self.chain.contains(g) {
            return false;
        }
        self.generators.push(g.clone());
        let mut strong = self.chain.strong_generators();
        strong.push(g.clone());
        self.chain = StabChain::build(self.degree, &strong, &self.chain.base());
        true
    }

    pub fn finish(self) -> PermutationGroup {
        PermutationGroup::from_chain(self.degree, self.generators, self.chain)
    }
}
