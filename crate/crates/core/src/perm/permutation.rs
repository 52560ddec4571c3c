use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A bijection of `{0, .., degree-1}` stored by its image list.
///
/// Composition follows the right-action convention: `a.compose(&b)` applies
/// `a` first and then `b`, so `x^(ab) = (x^a)^b`. Conjugation and commutators
/// below use the same convention (`g^h = h⁻¹gh`, `[a,b] = a⁻¹b⁻¹ab`).
///
/// The derived `Ord` compares image lists lexicographically; this is the
/// deterministic element ordering used throughout the crate.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Self {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from its image list, rejecting non-bijections.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(Error::NotBijective(images.clone()));
            }
            seen[i] = true;
        }
        Ok(Self { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Self::from_images(images.clone()).is_ok());
        Self { images }
    }

    /// Builds a permutation of the given degree from disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<u32>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &p) in cycle.iter().enumerate() {
                let pu = p as usize;
                if pu >= degree {
                    return Err(Error::PointOutOfRange { point: p, degree });
                }
                if touched[pu] {
                    return Err(Error::Parse {
                        message: format!("point {p} appears in more than one cycle"),
                        position: 0,
                    });
                }
                touched[pu] = true;
                images[pu] = cycle[(k + 1) % cycle.len()];
            }
        }
        Ok(Self { images })
    }

    /// Parses cycle notation such as `"(0 1 2 3 4)(5 6)"`. An empty string or
    /// `"()"` is the identity. The degree must be supplied because cycle
    /// notation does not record fixed points past the largest moved one.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self> {
        let cycles = parse_cycle_list(text)?;
        Self::from_cycles(degree, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, point: u32) -> u32 {
        self.images[point as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &p)| i as u32 == p)
    }

    /// `self` then `other`.
    pub fn compose(&self, other: &Self) -> Self {
        debug_assert_eq!(self.degree(), other.degree());
        Self {
            images: self.images.iter().map(|&p| other.images[p as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0u32; self.images.len()];
        for (i, &p) in self.images.iter().enumerate() {
            images[p as usize] = i as u32;
        }
        Self { images }
    }

    pub fn pow(&self, exponent: i64) -> Self {
        let mut base = if exponent < 0 {
            self.inverse()
        } else {
            self.clone()
        };
        let mut e = exponent.unsigned_abs();
        let mut acc = Self::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    /// `h⁻¹ self h`.
    pub fn conjugate_by(&self, h: &Self) -> Self {
        h.inverse().compose(self).compose(h)
    }

    /// `[self, other] = self⁻¹ other⁻¹ self other`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.inverse()
            .compose(&other.inverse())
            .compose(self)
            .compose(other)
    }

    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.degree()];
        let mut l = 1u64;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                p = self.images[p] as usize;
                len += 1;
            }
            l = lcm(l, len);
        }
        l
    }

    pub fn first_moved_point(&self) -> Option<u32> {
        self.images
            .iter()
            .enumerate()
            .find(|(i, &p)| *i as u32 != p)
            .map(|(i, _)| i as u32)
    }

    pub fn is_even(&self) -> bool {
        let transpositions: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        transpositions.is_multiple_of(2)
    }

    /// Nontrivial cycles, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p as u32);
                p = self.images[p] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Same permutation acting on `degree ≥ self.degree()` points, fixing the
    /// new ones.
    pub fn extend_to(&self, degree: usize) -> Self {
        assert!(degree >= self.degree());
        let mut images = self.images.clone();
        images.extend(self.degree() as u32..degree as u32);
        Self { images }
    }

    /// Places `self` on points `offset..offset+self.degree()` of a permutation
    /// of the given total degree.
    pub fn shifted_into(&self, offset: usize, degree: usize) -> Self {
        assert!(offset + self.degree() <= degree);
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for (i, &p) in self.images.iter().enumerate() {
            images[offset + i] = p + offset as u32;
        }
        Self { images }
    }

    /// Disjoint union `self ⊕ other` on `self.degree() + other.degree()` points.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let off = self.degree() as u32;
        let mut images = self.images.clone();
        images.extend(other.images.iter().map(|&p| p + off));
        Self { images }
    }

    /// Restriction to `range`, which must be a union of orbits of `self`.
    pub fn restrict(&self, start: usize, len: usize) -> Self {
        let images = self.images[start..start + len]
            .iter()
            .map(|&p| p - start as u32)
            .collect();
        Self::from_images_unchecked(images)
    }

    pub fn to_cycle_string(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (i, p) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}[{}]", self.degree())
    }
}

/// Cycle text where the degree is implied by the largest point mentioned.
impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let cycles = parse_cycle_list(s)?;
        let degree = cycles
            .iter()
            .flatten()
            .map(|&p| p as usize + 1)
            .max()
            .unwrap_or(0);
        Self::from_cycles(degree, &cycles)
    }
}

pub(crate) fn parse_cycle_list(text: &str) -> Result<Vec<Vec<u32>>> {
    let bytes = text.as_bytes();
    let mut i = 0;
    let mut cycles = Vec::new();
    let skip_ws = |i: &mut usize| {
        while *i < bytes.len() && bytes[*i].is_ascii_whitespace() {
            *i += 1;
        }
    };
    loop {
        skip_ws(&mut i);
        if i >= bytes.len() {
            break;
        }
        if bytes[i] != b'(' {
            return Err(parse_error(text, i, "expected '('"));
        }
        i += 1;
        let mut cycle = Vec::new();
        loop {
            skip_ws(&mut i);
            if i >= bytes.len() {
                return Err(parse_error(text, i, "unterminated cycle"));
            }
            if bytes[i] == b')' {
                i += 1;
                break;
            }
            if bytes[i] == b',' {
                i += 1;
                continue;
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if start == i {
                return Err(parse_error(text, start, "expected a point index"));
            }
            let p: u32 = text[start..i]
                .parse()
                .map_err(|_| parse_error(text, start, "point index out of range"))?;
            cycle.push(p);
        }
        if cycle.len() > 1 {
            cycles.push(cycle);
        }
    }
    Ok(cycles)
}

fn parse_error(text: &str, position: usize, what: &str) -> Error {
    let token: String = text[position.min(text.len())..].chars().take(8).collect();
    Error::Parse {
        message: format!("{what} at '{token}'"),
        position,
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn perm_strategy(n: usize) -> impl Strategy<Value = Permutation> {
        Just((0..n as u32).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(Permutation::from_images_unchecked)
    }

    #[test]
    fn cycle_round_trip() {
        let p = Permutation::parse_cycles("(0 1 2 3 4)(5 6)", 8).unwrap();
        assert_eq!(p.apply(4), 0);
        assert_eq!(p.apply(6), 5);
        assert_eq!(p.apply(7), 7);
        assert_eq!(p.to_string(), "(0 1 2 3 4)(5 6)");
        assert_eq!(p.order(), 10);
        assert_eq!(Permutation::parse_cycles("()", 3).unwrap(), Permutation::identity(3));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_images(vec![0, 3, 1]).is_err());
        assert!(Permutation::parse_cycles("(0 1)(1 2)", 3).is_err());
        assert!(Permutation::parse_cycles("(0 5)", 3).is_err());
        let err = Permutation::parse_cycles("(0 1 x)", 3).unwrap_err();
        assert!(matches!(err, Error::Parse { position: 5, .. }), "{err:?}");
    }

    #[test]
    fn right_action_convention() {
        let a = Permutation::parse_cycles("(0 1)", 3).unwrap();
        let b = Permutation::parse_cycles("(1 2)", 3).unwrap();
        // 0 -a-> 1 -b-> 2
        assert_eq!(a.compose(&b).apply(0), 2);
        let c = a.commutator(&b);
        assert_eq!(c.order(), 3);
    }

    proptest! {
        #[test]
        fn inverse_of_product(p in perm_strategy(7), q in perm_strategy(7)) {
            prop_assert_eq!(p.compose(&q).inverse(), q.inverse().compose(&p.inverse()));
            prop_assert!(p.compose(&p.inverse()).is_identity());
        }

        #[test]
        fn pow_matches_order(p in perm_strategy(9)) {
            prop_assert!(p.pow(p.order() as i64).is_identity());
            prop_assert_eq!(p.pow(-1), p.inverse());
            prop_assert_eq!(p.pow(3), p.compose(&p).compose(&p));
        }

        #[test]
        fn display_parses_back(p in perm_strategy(9)) {
            let s = p.to_string();
            prop_assert_eq!(Permutation::parse_cycles(&s, 9).unwrap(), p);
        }
    }
}
