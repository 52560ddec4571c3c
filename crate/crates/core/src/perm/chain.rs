//! Deterministic Schreier–Sims.
//!
//! Base points are the caller's prefix followed, as needed, by the first point
//! moved by each new strong generator. Orbits are grown breadth-first over the
//! strong generators in insertion order, so the chain (and everything derived
//! from it, such as element enumeration order) is reproducible run to run.

use rand::Rng;

use super::permutation::Permutation;

#[derive(Clone, Debug)]
struct Level {
    point: u32,
    gens: Vec<Permutation>,
    orbit: Vec<u32>,
    transversal: Vec<Option<Permutation>>,
    inverse: Vec<Option<Permutation>>,
}

impl Level {
    fn new(point: u32, degree: usize) -> Self {
        Self {
            point,
            gens: Vec::new(),
            orbit: Vec::new(),
            transversal: vec![None; degree],
            inverse: vec![None; degree],
        }
    }

    fn rebuild_orbit(&mut self, degree: usize) {
        self.transversal = vec![None; degree];
        self.inverse = vec![None; degree];
        let id = Permutation::identity(degree);
        self.transversal[self.point as usize] = Some(id.clone());
        self.inverse[self.point as usize] = Some(id);
        self.orbit = vec![self.point];
        let mut head = 0;
        while head < self.orbit.len() {
            let delta = self.orbit[head];
            head += 1;
            for s in &self.gens {
                let gamma = s.apply(delta);
                if self.transversal[gamma as usize].is_none() {
                    let u = self.transversal[delta as usize]
                        .as_ref()
                        .expect("orbit point has a transversal")
                        .compose(s);
                    self.inverse[gamma as usize] = Some(u.inverse());
                    self.transversal[gamma as usize] = Some(u);
                    self.orbit.push(gamma);
                }
            }
        }
    }
}

/// A base and strong generating set with explicit transversals.
#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    /// Runs Schreier–Sims on `generators`, starting the base with `base_prefix`.
    pub fn build(degree: usize, generators: &[Permutation], base_prefix: &[u32]) -> Self {
        let mut gens: Vec<Permutation> = Vec::new();
        for g in generators {
            if !g.is_identity() && !gens.contains(g) {
                gens.push(g.clone());
            }
        }
        let mut base: Vec<u32> = Vec::new();
        for &b in base_prefix {
            if !base.contains(&b) {
                base.push(b);
            }
        }
        for g in &gens {
            if base.iter().all(|&b| g.apply(b) == b) {
                base.push(g.first_moved_point().expect("non-identity"));
            }
        }
        let mut chain = StabChain {
            degree,
            levels: base.iter().map(|&b| Level::new(b, degree)).collect(),
        };
        for g in &gens {
            for (i, level) in chain.levels.iter_mut().enumerate() {
                level.gens.push(g.clone());
                if g.apply(base[i]) != base[i] {
                    break;
                }
            }
        }
        for level in &mut chain.levels {
            level.rebuild_orbit(degree);
        }

        let mut i = chain.levels.len() as isize - 1;
        while i >= 0 {
            let iu = i as usize;
            let mut modified = None;
            'scan: for oi in 0..chain.levels[iu].orbit.len() {
                let beta = chain.levels[iu].orbit[oi];
                for si in 0..chain.levels[iu].gens.len() {
                    let level = &chain.levels[iu];
                    let s = &level.gens[si];
                    let image = s.apply(beta);
                    let schreier = level.transversal[beta as usize]
                        .as_ref()
                        .unwrap()
                        .compose(s)
                        .compose(level.inverse[image as usize].as_ref().unwrap());
                    if schreier.is_identity() {
                        continue;
                    }
                    let (h, j) = chain.strip_from(schreier, iu + 1);
                    let k = chain.levels.len();
                    if j < k || !h.is_identity() {
                        if j == k {
                            let p = h.first_moved_point().expect("non-identity residue");
                            chain.levels.push(Level::new(p, degree));
                        }
                        for l in iu + 1..=j {
                            chain.levels[l].gens.push(h.clone());
                            chain.levels[l].rebuild_orbit(degree);
                        }
                        modified = Some(j);
                        break 'scan;
                    }
                }
            }
            match modified {
                Some(j) => i = j as isize,
                None => i -= 1,
            }
        }
        chain
    }

    /// Sifts `g` starting at `level`; returns the residue and the level at
    /// which sifting stopped (`levels.len()` if it passed every level).
    fn strip_from(&self, mut g: Permutation, level: usize) -> (Permutation, usize) {
        for (j, l) in self.levels.iter().enumerate().skip(level) {
            let beta = g.apply(l.point);
            match &l.inverse[beta as usize] {
                Some(inv) => g = g.compose(inv),
                None => return (g, j),
            }
        }
        (g, self.levels.len())
    }

    pub fn sift(&self, g: &Permutation) -> (Permutation, usize) {
        self.strip_from(g.clone(), 0)
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        let (h, j) = self.sift(g);
        j == self.levels.len() && h.is_identity()
    }

    pub fn order(&self) -> u128 {
        self.levels
            .iter()
            .map(|l| l.orbit.len() as u128)
            .fold(1u128, |a, b| a.saturating_mul(b))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.point).collect()
    }

    pub fn strong_generators(&self) -> Vec<Permutation> {
        self.levels.first().map(|l| l.gens.clone()).unwrap_or_default()
    }

    pub(crate) fn depth(&self) -> usize {
        self.levels.len()
    }

    pub(crate) fn level_point(&self, i: usize) -> u32 {
        self.levels[i].point
    }

    pub(crate) fn level_orbit(&self, i: usize) -> &[u32] {
        &self.levels[i].orbit
    }

    pub(crate) fn level_transversal(&self, i: usize, point: u32) -> Option<&Permutation> {
        self.levels[i].transversal[point as usize].as_ref()
    }

    pub(crate) fn level_inverse(&self, i: usize, point: u32) -> Option<&Permutation> {
        self.levels[i].inverse[point as usize].as_ref()
    }

    /// Every element exactly once, in a fixed order determined by the chain.
    pub fn elements(&self) -> Vec<Permutation> {
        let mut current = vec![Permutation::identity(self.degree)];
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(current.len() * level.orbit.len());
            for e in &current {
                for &b in &level.orbit {
                    next.push(e.compose(level.transversal[b as usize].as_ref().unwrap()));
                }
            }
            current = next;
        }
        current
    }

    /// Uniformly random element.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for level in self.levels.iter().rev() {
            let b = level.orbit[rng.gen_range(0..level.orbit.len())];
            g = g.compose(level.transversal[b as usize].as_ref().unwrap());
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn closure(gens: &[Permutation], degree: usize) -> HashSet<Permutation> {
        let mut seen: HashSet<Permutation> = HashSet::new();
        let id = Permutation::identity(degree);
        seen.insert(id.clone());
        let mut stack = vec![id];
        while let Some(x) = stack.pop() {
            for g in gens {
                let y = x.compose(g);
                if seen.insert(y.clone()) {
                    stack.push(y);
                }
            }
        }
        seen
    }

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(s, n).unwrap()
    }

    #[test]
    fn orders_match_closure() {
        let cases: Vec<(Vec<Permutation>, usize)> = vec![
            (vec![p("(0 1 2 3 4)", 5), p("(0 1 2)", 5)], 5),
            (vec![p("(0 1 2 3)", 4), p("(0 1)", 4)], 4),
            (vec![p("(0 1)(2 3)", 6), p("(2 3 4 5)", 6)], 6),
            (vec![p("(0 1 2)(3 4 5 6 7)", 8)], 8),
            (vec![p("(0 1 2 3 4 5 6)", 7), p("(1 2 4)(3 6 5)", 7)], 7),
            (vec![p("(0 2)(1 3)", 4), p("(0 1)", 4)], 4),
        ];
        for (gens, n) in cases {
            let chain = StabChain::build(n, &gens, &[]);
            let all = closure(&gens, n);
            assert_eq!(chain.order(), all.len() as u128, "{gens:?}");
            let elts = chain.elements();
            assert_eq!(elts.len(), all.len());
            assert!(elts.iter().all(|e| all.contains(e)));
            for e in &all {
                assert!(chain.contains(e));
            }
        }
    }

    #[test]
    fn base_prefix_is_respected() {
        let gens = vec![p("(0 1 2 3 4)", 5), p("(0 1 2)", 5)];
        let chain = StabChain::build(5, &gens, &[4, 3]);
        assert_eq!(&chain.base()[..2], &[4, 3]);
        assert_eq!(chain.order(), 60);
    }

    #[test]
    fn trivial_group() {
        let chain = StabChain::build(3, &[Permutation::identity(3)], &[]);
        assert_eq!(chain.order(), 1);
        assert_eq!(chain.elements(), vec![Permutation::identity(3)]);
        assert!(!chain.contains(&p("(0 1)", 3)));
    }
}
