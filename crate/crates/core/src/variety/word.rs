use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// A freely reduced group word, stored as syllables `x_v^e` with adjacent
/// syllables on distinct variables and nonzero exponents. Variables are
/// numbered from 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<(u32, i64)>,
}

impl Word {
    pub fn identity() -> Self {
        Self { letters: Vec::new() }
    }

    pub fn var(index: u32) -> Self {
        assert!(index >= 1, "variables are numbered from 1");
        Self {
            letters: vec![(index, 1)],
        }
    }

    /// Reduces an arbitrary syllable sequence.
    pub fn from_syllables(syllables: impl IntoIterator<Item = (u32, i64)>) -> Self {
        let mut letters: Vec<(u32, i64)> = Vec::new();
        for (v, e) in syllables {
            assert!(v >= 1, "variables are numbered from 1");
            if e == 0 {
                continue;
            }
            match letters.last_mut() {
                Some(last) if last.0 == v => {
                    last.1 += e;
                    if last.1 == 0 {
                        letters.pop();
                    }
                }
                _ => letters.push((v, e)),
            }
        }
        Self { letters }
    }

    /// A reduced word of length `1..=max_len` in `x1..x_vars`, built letter by
    /// letter without cancellation, so it is never the identity.
    pub fn random_reduced<R: Rng + ?Sized>(rng: &mut R, vars: u32, max_len: usize) -> Word {
        assert!(vars >= 1 && max_len >= 1);
        let len = rng.gen_range(1..=max_len);
        let mut seq: Vec<(u32, i64)> = Vec::with_capacity(len);
        while seq.len() < len {
            let letter = (rng.gen_range(1..=vars), if rng.gen_bool(0.5) { 1 } else { -1 });
            if seq.last() != Some(&(letter.0, -letter.1)) {
                seq.push(letter);
            }
        }
        Word::from_syllables(seq)
    }

    pub fn letters(&self) -> &[(u32, i64)] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Largest variable index (0 for the empty word).
    pub fn arity(&self) -> usize {
        self.letters.iter().map(|&(v, _)| v as usize).max().unwrap_or(0)
    }

    /// Sum of absolute exponents.
    pub fn length(&self) -> u64 {
        self.letters.iter().map(|&(_, e)| e.unsigned_abs()).sum()
    }

    pub fn mul(&self, other: &Word) -> Word {
        Word::from_syllables(self.letters.iter().chain(other.letters.iter()).copied())
    }

    pub fn inverse(&self) -> Word {
        Word::from_syllables(self.letters.iter().rev().map(|&(v, e)| (v, -e)))
    }

    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `[a, b] = a⁻¹ b⁻¹ a b`.
    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.inverse().mul(&b.inverse()).mul(a).mul(b)
    }

    /// `[x_1, …, x_n]`, left-normed.
    pub fn left_normed_commutator(n: u32) -> Word {
        assert!(n >= 1);
        let mut w = Word::var(1);
        for i in 2..=n {
            w = Word::commutator(&w, &Word::var(i));
        }
        w
    }

    /// `δ₁ = [x1, x2]`, `δ_{n+1} = [δ_n(x_1..), δ_n(x_{2^n+1}..)]`.
    pub fn derived_word(depth: u32) -> Word {
        assert!(depth >= 1);
        if depth == 1 {
            return Word::commutator(&Word::var(1), &Word::var(2));
        }
        let inner = Word::derived_word(depth - 1);
        let shift = 1u32 << (depth - 1);
        Word::commutator(&inner, &inner.rename(|v| v + shift))
    }

    /// `[[x1,x2],[x3,x4]]`.
    pub fn metabelian() -> Word {
        Word::derived_word(2)
    }

    pub fn rename(&self, f: impl Fn(u32) -> u32) -> Word {
        Word::from_syllables(self.letters.iter().map(|&(v, e)| (f(v), e)))
    }

    /// Renumbers variables by order of first appearance.
    pub fn canonical(&self) -> Word {
        let mut order: Vec<u32> = Vec::new();
        for &(v, _) in &self.letters {
            if !order.contains(&v) {
                order.push(v);
            }
        }
        self.rename(|v| order.iter().position(|&o| o == v).unwrap() as u32 + 1)
    }

    /// `Some(e)` for a single-variable power `x_i^e`.
    pub fn as_power(&self) -> Option<i64> {
        match self.letters.as_slice() {
            [(_, e)] => Some(*e),
            _ => None,
        }
    }

    /// `Some(c)` when the word is a left-normed commutator of weight `c ≥ 2`
    /// in distinct variables.
    pub fn as_left_normed_weight(&self) -> Option<u32> {
        let canon = self.canonical();
        let k = canon.arity() as u32;
        // `[x1,…,xk]` has 3·2^(k-1) − 2 letters.
        if !(2..=48).contains(&k) || self.length() != 3 * (1u64 << (k - 1)) - 2 {
            return None;
        }
        (canon == Word::left_normed_commutator(k).canonical()).then_some(k)
    }

    /// `Some(n)` when the word is the depth-`n` derived word in distinct
    /// variables.
    pub fn as_derived_depth(&self) -> Option<u32> {
        let canon = self.canonical();
        let k = canon.arity();
        if k < 2 || !k.is_power_of_two() {
            return None;
        }
        let n = k.trailing_zeros();
        // The depth-n word has 4^n letters.
        if n > 24 || self.length() != 1u64 << (2 * n) {
            return None;
        }
        (canon == Word::derived_word(n).canonical()).then_some(n)
    }

    /// Substitutes `tuple[i-1]` for `x_i` and multiplies left to right.
    pub fn eval(&self, tuple: &[Permutation]) -> Result<Permutation> {
        let needed = self.arity();
        if tuple.len() < needed {
            return Err(Error::Arity {
                needed,
                supplied: tuple.len(),
            });
        }
        let degree = tuple.first().map(Permutation::degree).ok_or(Error::Arity {
            needed: 1,
            supplied: 0,
        })?;
        let mut acc = Permutation::identity(degree);
        for &(v, e) in &self.letters {
            acc = acc.compose(&tuple[v as usize - 1].pow(e));
        }
        Ok(acc)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, &(v, e)) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if e == 1 {
                write!(f, "x{v}")?;
            } else {
                write!(f, "x{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        let mut p = WordParser { src: s, pos: 0 };
        let w = p.product()?;
        p.skip_ws();
        if p.pos < s.len() {
            return Err(p.error("unexpected token"));
        }
        Ok(w)
    }
}

/// Grammar:
/// ```text
/// product := factor*
/// factor  := atom ('^' int)?
/// atom    := 'x' digits | '1' | '(' product ')' | '[' product (',' product)+ ']'
/// ```
/// Brackets with more than two entries are left-normed.
pub(crate) struct WordParser<'a> {
    pub(crate) src: &'a str,
    pub(crate) pos: usize,
}

impl WordParser<'_> {
    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    pub(crate) fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    pub(crate) fn error(&self, what: &str) -> Error {
        let token: String = self.src[self.pos.min(self.src.len())..].chars().take(8).collect();
        Error::Parse {
            message: format!("{what} at '{token}'"),
            position: self.pos,
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.peek(), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.src[start..self.pos].parse().map_err(|_| {
            self.pos = start;
            self.error("expected an integer")
        })
    }

    pub(crate) fn product(&mut self) -> Result<Word> {
        let mut w = Word::identity();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'x') | Some(b'(') | Some(b'[') | Some(b'1') => {
                    let f = self.factor()?;
                    w = w.mul(&f);
                }
                _ => return Ok(w),
            }
        }
    }

    /// A product with at least one factor.
    fn entry(&mut self) -> Result<Word> {
        self.skip_ws();
        match self.peek() {
            Some(b'x') | Some(b'(') | Some(b'[') | Some(b'1') => self.product(),
            _ => Err(self.error("expected a word")),
        }
    }

    fn factor(&mut self) -> Result<Word> {
        let atom = self.atom()?;
        self.skip_ws();
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.int()?;
            return Ok(atom.pow(e));
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<Word> {
        self.skip_ws();
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let v: u32 = self.src[start..self.pos]
                    .parse()
                    .ok()
                    .filter(|&v| v >= 1)
                    .ok_or_else(|| {
                        self.pos = start;
                        self.error("expected a variable index ≥ 1")
                    })?;
                Ok(Word::var(v))
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(Word::identity())
            }
            Some(b'(') => {
                self.pos += 1;
                let w = self.entry()?;
                self.expect(b')')?;
                Ok(w)
            }
            Some(b'[') => {
                self.pos += 1;
                let mut acc = self.entry()?;
                let mut entries = 1;
                loop {
                    self.skip_ws();
                    match self.peek() {
                        Some(b',') => {
                            self.pos += 1;
                            let next = self.entry()?;
                            acc = Word::commutator(&acc, &next);
                            entries += 1;
                        }
                        Some(b']') if entries >= 2 => {
                            self.pos += 1;
                            return Ok(acc);
                        }
                        _ => return Err(self.error("expected ',' or ']' in commutator")),
                    }
                }
            }
            _ => Err(self.error("expected a word")),
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }
}
