//! The wreath product `G wr Z` on tail-constant functions.
//!
//! An element `(k, φ)` stands for `x^k φ`, where `x` generates `Z` and `φ`
//! is a map `Z → G`. Conjugation re-indexes by right translation,
//! `φ^x(n) = φ(n − 1)`, which gives
//!
//! ```text
//! (k, φ)(l, ψ) = (k + l, n ↦ φ(n − l)·ψ(n))
//! (k, φ)⁻¹    = (−k, n ↦ φ(n + k)⁻¹)
//! [ψ, x](n)   = ψ(n)⁻¹·ψ(n − 1)
//! ```
//!
//! Group elements are permutations of a fixed degree; products in `G` use
//! [`Permutation::compose`].

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// A map `Z → G` that is constant below and above a finite window.
///
/// Canonical form: `values` neither starts with `left` nor ends with
/// `right`. When the window is empty and the tails differ, `start` is the
/// first position carrying the right tail; when the tails agree, an empty
/// window sits at `start = 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TailConstantFn {
    start: i64,
    values: Vec<Permutation>,
    left: Permutation,
    right: Permutation,
}

impl TailConstantFn {
    pub fn new(start: i64, values: Vec<Permutation>, left: Permutation, right: Permutation) -> Result<Self> {
        let degree = left.degree();
        for p in values.iter().chain(std::iter::once(&right)) {
            if p.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: p.degree(),
                });
            }
        }
        Ok(Self::canonical(start, values, left, right))
    }

    fn canonical(mut start: i64, mut values: Vec<Permutation>, left: Permutation, right: Permutation) -> Self {
        let lead = values.iter().take_while(|v| **v == left).count();
        values.drain(..lead);
        start += lead as i64;
        while values.last() == Some(&right) {
            values.pop();
        }
        if values.is_empty() && left == right {
            start = 0;
        }
        Self {
            start,
            values,
            left,
            right,
        }
    }

    pub fn constant(g: Permutation) -> Self {
        Self::canonical(0, Vec::new(), g.clone(), g)
    }

    pub fn identity(degree: usize) -> Self {
        Self::constant(Permutation::identity(degree))
    }

    /// `g` at `n`, the identity elsewhere.
    pub fn point_mass(n: i64, g: Permutation) -> Self {
        let e = Permutation::identity(g.degree());
        Self::canonical(n, vec![g], e.clone(), e)
    }

    /// Finitely supported function with the given values; unlisted
    /// positions are the identity.
    pub fn finitely_supported(degree: usize, entries: &[(i64, Permutation)]) -> Result<Self> {
        let e = Permutation::identity(degree);
        if entries.is_empty() {
            return Ok(Self::identity(degree));
        }
        let lo = entries.iter().map(|(n, _)| *n).min().unwrap();
        let hi = entries.iter().map(|(n, _)| *n).max().unwrap();
        let mut values = vec![e.clone(); (hi - lo + 1) as usize];
        for (n, g) in entries {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
            values[(n - lo) as usize] = g.clone();
        }
        Ok(Self::canonical(lo, values, e.clone(), e))
    }

    /// Values drawn from `elements` at up to `max_support` distinct positions
    /// in `-8..=8`; identity elsewhere.
    pub fn random_finitely_supported<R: Rng + ?Sized>(rng: &mut R, elements: &[Permutation], max_support: usize) -> Result<Self> {
        let degree = elements.first().map(Permutation::degree).ok_or_else(|| Error::Invalid("no elements to draw from".into()))?;
        let positions: Vec<i64> = (-8..=8).collect();
        let size = rng.gen_range(0..=max_support.min(positions.len()));
        let entries: Vec<(i64, Permutation)> = positions
            .choose_multiple(rng, size)
            .map(|&n| (n, elements.choose(rng).expect("nonempty").clone()))
            .collect();
        Self::finitely_supported(degree, &entries)
    }

    pub fn degree(&self) -> usize {
        self.left.degree()
    }

    pub fn left_tail(&self) -> &Permutation {
        &self.left
    }

    pub fn right_tail(&self) -> &Permutation {
        &self.right
    }

    /// Inclusive window `[lo, hi]`, `None` when empty.
    pub fn window(&self) -> Option<(i64, i64)> {
        (!self.values.is_empty()).then(|| (self.start, self.start + self.values.len() as i64 - 1))
    }

    /// First position that may differ from the left tail.
    pub fn start(&self) -> i64 {
        self.start
    }

    /// One past the last position that may differ from the right tail.
    pub fn end(&self) -> i64 {
        self.start + self.values.len() as i64
    }

    pub fn at(&self, n: i64) -> &Permutation {
        if n < self.start {
            &self.left
        } else if n >= self.end() {
            &self.right
        } else {
            &self.values[(n - self.start) as usize]
        }
    }

    pub fn is_identity(&self) -> bool {
        self.values.is_empty() && self.left.is_identity() && self.right.is_identity()
    }

    pub fn has_identity_tails(&self) -> bool {
        self.left.is_identity() && self.right.is_identity()
    }

    /// `n ↦ f(n − k)`.
    pub fn shift(&self, k: i64) -> Self {
        Self::canonical(self.start + k, self.values.clone(), self.left.clone(), self.right.clone())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.degree(),
                found: other.degree(),
            });
        }
        Ok(())
    }

    /// Pointwise `n ↦ f(n)·g(n)`.
    pub fn pointwise_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let lo = self.start.min(other.start);
        let hi = self.end().max(other.end());
        let values = (lo..hi).map(|n| self.at(n).compose(other.at(n))).collect();
        Ok(Self::canonical(
            lo,
            values,
            self.left.compose(&other.left),
            self.right.compose(&other.right),
        ))
    }

    pub fn pointwise_inverse(&self) -> Self {
        Self::canonical(
            self.start,
            self.values.iter().map(Permutation::inverse).collect(),
            self.left.inverse(),
            self.right.inverse(),
        )
    }

    /// `n ↦ c·f(n)`.
    pub fn left_mul_constant(&self, c: &Permutation) -> Result<Self> {
        Self::constant(c.clone()).pointwise_mul(self)
    }

    /// Whether `self = c·other` for a constant `c`; returns `c`.
    pub fn constant_left_quotient(&self, other: &Self) -> Option<Permutation> {
        let lo = self.start.min(other.start) - 1;
        let hi = self.end().max(other.end()) + 1;
        let c = self.at(lo).compose(&other.at(lo).inverse());
        (lo..=hi)
            .all(|n| self.at(n).compose(&other.at(n).inverse()) == c)
            .then_some(c)
    }

    /// Parses `{-2:(0 1), 0:(0 1 2) | L=e, R=e}`. Unlisted positions between
    /// listed ones are `e`. An empty window with distinct tails carries its
    /// split point as `@n`.
    pub fn parse(text: &str, degree: usize) -> Result<Self> {
        LiteralParser { src: text, pos: 0, degree }.literal()
    }
}

fn write_elem(f: &mut fmt::Formatter<'_>, g: &Permutation) -> fmt::Result {
    if g.is_identity() {
        write!(f, "e")
    } else {
        write!(f, "{g}")
    }
}

impl fmt::Display for TailConstantFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:", self.start + i as i64)?;
            write_elem(f, v)?;
        }
        if self.values.is_empty() && self.left != self.right {
            write!(f, "@{}", self.start)?;
        }
        write!(f, " | L=")?;
        write_elem(f, &self.left)?;
        write!(f, ", R=")?;
        write_elem(f, &self.right)?;
        write!(f, "}}")
    }
}

impl fmt::Debug for TailConstantFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for TailConstantFn {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

struct LiteralParser<'a> {
    src: &'a str,
    pos: usize,
    degree: usize,
}

impl LiteralParser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            message: message.to_string(),
            position: self.pos,
        }
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().unwrap().len_utf8();
        }
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{token}'")))
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        if bytes.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        self.src[start..self.pos].parse().map_err(|_| {
            self.pos = start;
            self.error("expected an integer")
        })
    }

    fn elem(&mut self) -> Result<Permutation> {
        self.skip_ws();
        if self.eat("e") {
            return Ok(Permutation::identity(self.degree));
        }
        let start = self.pos;
        let bytes = self.src.as_bytes();
        while bytes.get(self.pos) == Some(&b'(') {
            match self.src[self.pos..].find(')') {
                Some(close) => self.pos += close + 1,
                None => return Err(self.error("unclosed cycle")),
            }
            self.skip_ws();
        }
        if start == self.pos {
            return Err(self.error("expected 'e' or a permutation in cycle notation"));
        }
        Permutation::parse_cycles(self.src[start..self.pos].trim_end(), self.degree).map_err(|e| match e {
            Error::Parse { message, position } => Error::Parse {
                message,
                position: start + position,
            },
            other => other,
        })
    }

    fn literal(mut self) -> Result<TailConstantFn> {
        self.expect("{")?;
        let mut entries: Vec<(i64, Permutation)> = Vec::new();
        let mut split = None;
        self.skip_ws();
        if !self.src[self.pos..].starts_with('|') {
            loop {
                if self.eat("@") {
                    split = Some(self.int()?);
                } else {
                    let at = self.pos;
                    let n = self.int()?;
                    if entries.iter().any(|(m, _)| *m == n) {
                        self.pos = at;
                        return Err(self.error("position listed twice"));
                    }
                    self.expect(":")?;
                    entries.push((n, self.elem()?));
                }
                if !self.eat(",") {
                    break;
                }
            }
        }
        self.expect("|")?;
        self.expect("L")?;
        self.expect("=")?;
        let left = self.elem()?;
        self.expect(",")?;
        self.expect("R")?;
        self.expect("=")?;
        let right = self.elem()?;
        self.expect("}")?;
        self.skip_ws();
        if self.pos < self.src.len() {
            return Err(self.error("unexpected trailing input"));
        }
        if entries.is_empty() {
            let start = match split {
                Some(s) => s,
                None if left == right => 0,
                None => return Err(self.error("distinct tails with an empty window need '@n'")),
            };
            return Ok(TailConstantFn::canonical(start, Vec::new(), left, right));
        }
        let lo = entries.iter().map(|(n, _)| *n).min().unwrap();
        let hi = entries.iter().map(|(n, _)| *n).max().unwrap();
        if hi - lo >= crate::budget::limits::DEGREE as i64 {
            return Err(self.error("window too wide"));
        }
        let mut values = vec![Permutation::identity(self.degree); (hi - lo + 1) as usize];
        for (n, g) in entries {
            values[(n - lo) as usize] = g;
        }
        Ok(TailConstantFn::canonical(lo, values, left, right))
    }
}

/// `x^shift · f`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct WreathZElement {
    pub shift: i64,
    #[serde(rename = "fn")]
    pub f: TailConstantFn,
}

impl WreathZElement {
    pub fn identity(degree: usize) -> Self {
        Self {
            shift: 0,
            f: TailConstantFn::identity(degree),
        }
    }

    /// The generator `x` of `Z`.
    pub fn x(degree: usize) -> Self {
        Self {
            shift: 1,
            f: TailConstantFn::identity(degree),
        }
    }

    pub fn base(f: TailConstantFn) -> Self {
        Self { shift: 0, f }
    }

    pub fn degree(&self) -> usize {
        self.f.degree()
    }

    pub fn is_identity(&self) -> bool {
        self.shift == 0 && self.f.is_identity()
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            shift: self.shift + other.shift,
            f: self.f.shift(other.shift).pointwise_mul(&other.f)?,
        })
    }

    pub fn inverse(&self) -> Self {
        Self {
            shift: -self.shift,
            f: self.f.shift(-self.shift).pointwise_inverse(),
        }
    }

    /// `a⁻¹ b⁻¹ a b`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.inverse()
            .multiply(&other.inverse())?
            .multiply(self)?
            .multiply(other)
    }

    pub fn conjugate_by(&self, h: &Self) -> Result<Self> {
        h.inverse().multiply(self)?.multiply(h)
    }
}

impl fmt::Display for WreathZElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{} {}", self.shift, self.f)
    }
}

impl fmt::Debug for WreathZElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub fn wz_multiply(a: &WreathZElement, b: &WreathZElement) -> Result<WreathZElement> {
    a.multiply(b)
}

pub fn wz_inverse(a: &WreathZElement) -> WreathZElement {
    a.inverse()
}

pub fn wz_commutator(a: &WreathZElement, b: &WreathZElement) -> Result<WreathZElement> {
    a.commutator(b)
}

/// Solves `[ψ, x] = φ` for finitely supported `φ` with `ψ(0) = seed`, by
/// `ψ(n+1) = ψ(n)·φ(n+1)⁻¹` upwards and `ψ(n−1) = ψ(n)·φ(n)` downwards.
/// Different seeds give solutions differing by a constant on the left.
pub fn solve_commutator(phi: &TailConstantFn, seed: &Permutation) -> Result<TailConstantFn> {
    if !phi.has_identity_tails() {
        return Err(Error::NonIdentityTails);
    }
    if seed.degree() != phi.degree() {
        return Err(Error::DegreeMismatch {
            expected: phi.degree(),
            found: seed.degree(),
        });
    }
    let lo = phi.start().min(0) - 1;
    let hi = phi.end().max(1) - 1;
    let mut values = vec![seed.clone(); (hi - lo + 1) as usize];
    let at = |n: i64| (n - lo) as usize;
    for n in 0..hi {
        values[at(n + 1)] = values[at(n)].compose(&phi.at(n + 1).inverse());
    }
    for n in (lo + 1..=0).rev() {
        values[at(n - 1)] = values[at(n)].compose(phi.at(n));
    }
    let left = values[0].clone();
    let right = values[values.len() - 1].clone();
    Ok(TailConstantFn::canonical(lo, values, left, right))
}

/// `[ψ, x]` computed through the group law.
pub fn commutator_with_x(psi: &TailConstantFn) -> Result<TailConstantFn> {
    let c = WreathZElement::base(psi.clone()).commutator(&WreathZElement::x(psi.degree()))?;
    debug_assert_eq!(c.shift, 0);
    Ok(c.f)
}

/// Commutators of `k` pairs, i.e. the commutator of two `k`-tuples in the
/// direct power.
pub fn componentwise_commutator(pairs: &[(WreathZElement, WreathZElement)]) -> Result<Vec<WreathZElement>> {
    pairs.iter().map(|(a, b)| a.commutator(b)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Depth2Report {
    pub phi: TailConstantFn,
    pub psi: TailConstantFn,
    /// `[ψ, x] = φ`, recomputed through the group law.
    pub verified: bool,
    pub note: String,
}

/// Writes a finitely supported `φ` as the commutator `[ψ₁, x]` with `ψ₁` a
/// base function (seed `e`), so `φ` is a value of `[x1,x2]` inside
/// `G wr Z`. Deeper nilpotent claims are checked on finite wreath products.
pub fn depth2_witness(phi: &TailConstantFn) -> Result<(TailConstantFn, Depth2Report)> {
    let psi = solve_commutator(phi, &Permutation::identity(phi.degree()))?;
    let verified = commutator_with_x(&psi)? == *phi;
    let report = Depth2Report {
        phi: phi.clone(),
        psi: psi.clone(),
        verified,
        note: "phi = [psi, x] with psi in the base; weights above 2 are checked on finite wreath products".into(),
    };
    Ok((psi, report))
}
