//! Truncated noncommutative polynomials over `Z/p` and the Magnus map
//! `x_i ↦ 1 + y_i`.
//!
//! The units with constant term 1 in `Z/p⟨y_1..y_k⟩ / (y)^d` form a finite
//! p-group. Writing each exponent of a reduced word as `b·p^m` with
//! `p ∤ b`, the image of `x_{r_1}^{a_1}⋯x_{r_s}^{a_s}` carries the monomial
//! `y_{r_1}^{p^{m_1}}⋯y_{r_s}^{p^{m_s}}` with coefficient `b_1⋯b_s`, so the
//! word fails in that group once `d` exceeds the monomial's degree.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::budget::limits;
use crate::error::{Error, Result};
use crate::variety::Word;

/// A monomial is a sequence of variable indices, numbered from 1.
pub type Monomial = Vec<u32>;

/// Invariant: no stored monomial has length `≥ d`, no stored coefficient
/// is 0, every coefficient is below `p`, every letter is in `1..=k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    p: u32,
    k: u32,
    d: u32,
    terms: BTreeMap<Monomial, u32>,
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|i: &u32| i * i <= p).all(|i| !p.is_multiple_of(i))
}

impl TruncatedSeries {
    pub fn zero(p: u32, k: u32, d: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        if d == 0 {
            return Err(Error::Invalid("truncation degree must be at least 1".into()));
        }
        Ok(Self {
            p,
            k,
            d,
            terms: BTreeMap::new(),
        })
    }

    pub fn one(p: u32, k: u32, d: u32) -> Result<Self> {
        let mut s = Self::zero(p, k, d)?;
        s.add_term(Vec::new(), 1);
        Ok(s)
    }

    /// `1 + y_v`.
    pub fn one_plus_var(p: u32, k: u32, d: u32, v: u32) -> Result<Self> {
        let mut s = Self::one(p, k, d)?;
        s.check_letter(v)?;
        s.add_term(vec![v], 1);
        Ok(s)
    }

    /// Builds a series from `(monomial, coefficient)` pairs; coefficients
    /// are reduced mod `p` and repeated monomials add up.
    pub fn from_terms(p: u32, k: u32, d: u32, terms: impl IntoIterator<Item = (Monomial, i64)>) -> Result<Self> {
        let mut s = Self::zero(p, k, d)?;
        for (m, c) in terms {
            for &v in &m {
                s.check_letter(v)?;
            }
            s.add_term(m, c.rem_euclid(p as i64) as u32);
        }
        Ok(s)
    }

    fn check_letter(&self, v: u32) -> Result<()> {
        if v == 0 || v > self.k {
            return Err(Error::Invalid(format!("variable y{v} outside y1..y{}", self.k)));
        }
        Ok(())
    }

    /// Adds `c·m`, dropping it when `m` is truncated away.
    fn add_term(&mut self, m: Monomial, c: u32) {
        if m.len() >= self.d as usize || c.is_multiple_of(self.p) {
            return;
        }
        let p = self.p;
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c % p);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = (*o.get() + c % p) % p;
                if sum == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, u32> {
        &self.terms
    }

    pub fn coefficient(&self, m: &[u32]) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn constant_term(&self) -> u32 {
        self.coefficient(&[])
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term() == 1
    }

    fn check(&self, other: &Self) -> Result<()> {
        if (self.p, self.k, self.d) != (other.p, other.k, other.d) {
            return Err(Error::ParameterMismatch(format!(
                "(p, k, d) = ({}, {}, {}) vs ({}, {}, {})",
                self.p, self.k, self.d, other.p, other.k, other.d
            )));
        }
        Ok(())
    }

    pub fn scale(&self, c: i64) -> Self {
        let mut out = Self {
            terms: BTreeMap::new(),
            ..self.clone()
        };
        let c = c.rem_euclid(self.p as i64) as u64;
        for (m, &v) in &self.terms {
            out.add_term(m.clone(), ((v as u64 * c) % self.p as u64) as u32);
        }
        out
    }

    /// `u^n` for `n ≥ 0` by repeated squaring.
    pub fn pow(&self, mut n: u64) -> Result<Self> {
        let mut acc = Self::one(self.p, self.k, self.d)?;
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = ts_multiply(&acc, &base)?;
            }
            n >>= 1;
            if n > 0 {
                base = ts_multiply(&base, &base)?;
            }
        }
        Ok(acc)
    }
}

pub fn ts_add(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries> {
    a.check(b)?;
    let mut out = a.clone();
    for (m, &c) in &b.terms {
        out.add_term(m.clone(), c);
    }
    Ok(out)
}

/// Concatenation product, truncated at degree `d`.
pub fn ts_multiply(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries> {
    a.check(b)?;
    let work = a.terms.len() as u128 * b.terms.len() as u128;
    if work > limits::SERIES_TERMS as u128 * 100 {
        return Err(Error::budget("series product", work, limits::SERIES_TERMS as u128 * 100));
    }
    let mut out = TruncatedSeries {
        terms: BTreeMap::new(),
        ..a.clone()
    };
    let d = a.d as usize;
    let p = a.p as u64;
    for (ma, &ca) in &a.terms {
        for (mb, &cb) in &b.terms {
            if ma.len() + mb.len() >= d {
                continue;
            }
            let mut m = Vec::with_capacity(ma.len() + mb.len());
            m.extend_from_slice(ma);
            m.extend_from_slice(mb);
            out.add_term(m, ((ca as u64 * cb as u64) % p) as u32);
        }
    }
    if out.terms.len() > limits::SERIES_TERMS {
        return Err(Error::budget("series terms", out.terms.len() as u128, limits::SERIES_TERMS as u128));
    }
    Ok(out)
}

/// `(1 + a)⁻¹ = Σ (−a)^j`, finite because `a^d = 0`.
pub fn ts_unit_inverse(u: &TruncatedSeries) -> Result<TruncatedSeries> {
    let c = u.constant_term();
    if c != 1 {
        return Err(Error::NotAUnit(c));
    }
    let one = TruncatedSeries::one(u.p, u.k, u.d)?;
    let neg_a = ts_add(u, &one.scale(-1))?.scale(-1);
    let mut acc = one.clone();
    let mut power = one;
    for _ in 1..u.d {
        power = ts_multiply(&power, &neg_a)?;
        if power.terms.is_empty() {
            break;
        }
        acc = ts_add(&acc, &power)?;
    }
    Ok(acc)
}

/// `C(n, j) mod p` by Lucas' theorem.
fn binomial_mod(mut n: u64, mut j: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while j > 0 {
        let (nd, jd) = (n % p, j % p);
        if jd > nd {
            return 0;
        }
        let mut c = 1u64;
        for i in 0..jd {
            c = c * ((nd - i) % p) % p;
        }
        for i in 1..=jd {
            c = c * mod_inverse(i % p, p) % p;
        }
        acc = acc * c % p;
        n /= p;
        j /= p;
    }
    acc
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    r
}

/// `(1 + y_v)^e` by the binomial series; for `e = −m` the coefficient of
/// `y^j` is `(−1)^j C(m+j−1, j)`.
fn one_plus_var_pow(p: u32, k: u32, d: u32, v: u32, e: i64) -> Result<TruncatedSeries> {
    let mut s = TruncatedSeries::zero(p, k, d)?;
    s.check_letter(v)?;
    let pp = p as u64;
    for j in 0..d as u64 {
        let c = if e >= 0 {
            binomial_mod(e as u64, j, pp)
        } else {
            let m = e.unsigned_abs();
            let c = binomial_mod(m + j - 1, j, pp);
            if j % 2 == 1 {
                (pp - c) % pp
            } else {
                c
            }
        };
        s.add_term(vec![v; j as usize], c as u32);
    }
    Ok(s)
}

/// Image of `w` under `x_i ↦ 1 + y_i` in the truncation at degree `d`,
/// with `k = max(arity, 1)` variables.
pub fn magnus_image(w: &Word, p: u32, d: u32) -> Result<TruncatedSeries> {
    let k = w.arity().max(1) as u32;
    let mut acc = TruncatedSeries::one(p, k, d)?;
    for &(v, e) in w.letters() {
        acc = ts_multiply(&acc, &one_plus_var_pow(p, k, d, v, e)?)?;
    }
    Ok(acc)
}

/// `(b, m)` with `a = b·p^m` and `p ∤ b`.
fn split_exponent(a: i64, p: u32) -> (i64, u32) {
    let (mut b, mut m) = (a, 0u32);
    while b % p as i64 == 0 {
        b /= p as i64;
        m += 1;
    }
    (b, m)
}

/// Monomial rendering with runs collapsed: `y1^2 y2`.
pub fn monomial_text(m: &[u32]) -> String {
    if m.is_empty() {
        return "1".into();
    }
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < m.len() {
        let run = m[i..].iter().take_while(|&&v| v == m[i]).count();
        parts.push(if run == 1 {
            format!("y{}", m[i])
        } else {
            format!("y{}^{run}", m[i])
        });
        i += run;
    }
    parts.join(" ")
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Order by degree, then lexicographically.
        let mut terms: Vec<(&Monomial, &u32)> = self.terms.iter().collect();
        terms.sort_by(|a, b| (a.0.len(), a.0).cmp(&(b.0.len(), b.0)));
        for (i, (m, &c)) in terms.into_iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match (m.is_empty(), c) {
                (true, _) => write!(f, "{c}")?,
                (false, 1) => write!(f, "{}", monomial_text(m))?,
                (false, _) => write!(f, "{c}*{}", monomial_text(m))?,
            }
        }
        Ok(())
    }
}

impl Serialize for TruncatedSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A finite p-group, the units `1 + (y)` of `Z/p⟨y_1..y_k⟩ / (y)^d`, in
/// which the law fails under `x_i ↦ 1 + y_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MagnusWitness {
    pub word: String,
    pub p: u32,
    pub k: u32,
    pub d: u32,
    pub monomial: Monomial,
    pub monomial_text: String,
    /// `Π b_i mod p`.
    pub predicted_coefficient: u32,
    /// Coefficient read off the computed image.
    pub coefficient: u32,
    pub assignment: Vec<String>,
    /// The image differs from 1, so the law fails in the unit group.
    pub image_is_nontrivial: bool,
    /// `log_p` of the unit group's order: the number of nonconstant
    /// monomials of degree `< d`.
    pub unit_group_log_p: u128,
    /// Every unit raised to `p^exponent_log_p` is 1.
    pub exponent_log_p: u32,
}

impl MagnusWitness {
    pub fn verified(&self) -> bool {
        self.image_is_nontrivial && self.coefficient == self.predicted_coefficient && self.coefficient != 0
    }
}

/// `Σ_{j=1}^{d−1} k^j`, saturating.
pub fn unit_group_log_p(k: u32, d: u32) -> u128 {
    let mut total = 0u128;
    let mut term = 1u128;
    for _ in 1..d {
        term = term.saturating_mul(k as u128);
        total = total.saturating_add(term);
    }
    total
}

/// Least `m` with `p^m ≥ d`.
pub fn exponent_log_p(p: u32, d: u32) -> u32 {
    let mut m = 0;
    let mut q = 1u64;
    while q < d as u64 {
        q *= p as u64;
        m += 1;
    }
    m
}

pub fn law_failure_witness(w: &Word, p: u32) -> Result<MagnusWitness> {
    if w.is_identity() {
        return Err(Error::EmptyWord);
    }
    if !is_prime(p) {
        return Err(Error::Invalid(format!("{p} is not prime")));
    }
    let mut monomial = Vec::new();
    let mut predicted = 1i64;
    for &(v, a) in w.letters() {
        let (b, m) = split_exponent(a, p);
        let len = (p as u64).checked_pow(m).filter(|&l| l < limits::SERIES_TERMS as u64).ok_or_else(|| {
            Error::budget("witness degree", (p as u128).saturating_pow(m), limits::SERIES_TERMS as u128)
        })?;
        monomial.extend(std::iter::repeat_n(v, len as usize));
        predicted = predicted * b.rem_euclid(p as i64) % p as i64;
    }
    let d = monomial.len() as u32 + 1;
    let image = magnus_image(w, p, d)?;
    let k = image.k();
    Ok(MagnusWitness {
        word: w.to_string(),
        p,
        k,
        d,
        monomial_text: monomial_text(&monomial),
        coefficient: image.coefficient(&monomial),
        monomial,
        predicted_coefficient: predicted as u32,
        assignment: (1..=k).map(|i| format!("x{i} -> 1 + y{i}")).collect(),
        image_is_nontrivial: !image.is_one(),
        unit_group_log_p: unit_group_log_p(k, d),
        exponent_log_p: exponent_log_p(p, d),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn series(p: u32, k: u32, d: u32, terms: &[(&[u32], i64)]) -> TruncatedSeries {
        TruncatedSeries::from_terms(p, k, d, terms.iter().map(|(m, c)| (m.to_vec(), *c))).unwrap()
    }

    /// Evaluates `w` by multiplying `1 + y_v` or its inverse one letter at a time.
    fn magnus_by_letters(w: &Word, p: u32, d: u32) -> TruncatedSeries {
        let k = w.arity().max(1) as u32;
        let mut acc = TruncatedSeries::one(p, k, d).unwrap();
        for &(v, e) in w.letters() {
            let base = TruncatedSeries::one_plus_var(p, k, d, v).unwrap();
            let step = if e < 0 { ts_unit_inverse(&base).unwrap() } else { base };
            for _ in 0..e.unsigned_abs() {
                acc = ts_multiply(&acc, &step).unwrap();
            }
        }
        acc
    }

    #[test]
    fn arithmetic_examples() {
        let u = TruncatedSeries::one_plus_var(2, 1, 3, 1).unwrap();
        assert_eq!(ts_multiply(&u, &u).unwrap(), series(2, 1, 3, &[(&[], 1), (&[1, 1], 1)]));
        let one = TruncatedSeries::one(2, 1, 3).unwrap();
        assert_eq!(ts_multiply(&u, &one).unwrap(), u);
        let y1 = series(3, 2, 3, &[(&[1], 1)]);
        let y2 = series(3, 2, 3, &[(&[2], 1)]);
        assert_ne!(ts_multiply(&y1, &y2).unwrap(), ts_multiply(&y2, &y1).unwrap());
        assert!(matches!(ts_add(&u, &y1), Err(Error::ParameterMismatch(_))));
        assert!(matches!(ts_multiply(&u, &y1), Err(Error::ParameterMismatch(_))));
    }

    #[test]
    fn inverse_examples() {
        let u = TruncatedSeries::one_plus_var(2, 1, 3, 1).unwrap();
        assert_eq!(ts_unit_inverse(&u).unwrap(), series(2, 1, 3, &[(&[], 1), (&[1], 1), (&[1, 1], 1)]));
        let one = TruncatedSeries::one(5, 2, 4).unwrap();
        assert_eq!(ts_unit_inverse(&one).unwrap(), one);
        assert!(matches!(ts_unit_inverse(&series(3, 1, 3, &[(&[], 2)])), Err(Error::NotAUnit(2))));
        assert!(matches!(ts_unit_inverse(&series(3, 1, 3, &[(&[1], 1)])), Err(Error::NotAUnit(0))));
    }

    #[test]
    fn magnus_examples() {
        assert_eq!(magnus_image(&w("x1"), 7, 2).unwrap(), series(7, 1, 2, &[(&[], 1), (&[1], 1)]));
        assert_eq!(magnus_image(&w("x1^2"), 2, 3).unwrap(), series(2, 1, 3, &[(&[], 1), (&[1, 1], 1)]));
        let c = magnus_image(&w("[x1,x2]"), 2, 5).unwrap();
        assert_eq!(c.coefficient(&[1, 2, 1, 2]), 1);
        // [x1,x2] ≡ 1 + (y1y2 − y2y1) + higher terms.
        let c3 = magnus_image(&w("[x1,x2]"), 3, 3).unwrap();
        assert_eq!(c3, series(3, 2, 3, &[(&[], 1), (&[1, 2], 1), (&[2, 1], -1)]));
        assert!(matches!(magnus_image(&w("x1"), 2, 0), Err(Error::Invalid(_))));
    }

    #[test]
    fn witness_examples() {
        let x = law_failure_witness(&w("x1^2"), 2).unwrap();
        assert_eq!((x.d, x.monomial.clone(), x.coefficient), (3, vec![1, 1], 1));
        assert!(x.verified());
        let x = law_failure_witness(&w("[x1,x2]"), 2).unwrap();
        assert_eq!((x.d, x.monomial.clone(), x.coefficient), (5, vec![1, 2, 1, 2], 1));
        assert_eq!(x.monomial_text, "y1 y2 y1 y2");
        assert!(x.verified());
        let x = law_failure_witness(&w("x1"), 3).unwrap();
        assert_eq!((x.d, x.monomial.clone(), x.coefficient), (2, vec![1], 1));
        assert_eq!(x.unit_group_log_p, 1);
        assert!(matches!(law_failure_witness(&Word::identity(), 2), Err(Error::EmptyWord)));
        let x = law_failure_witness(&w("x1^-6 x2^3"), 3).unwrap();
        assert_eq!(x.monomial, vec![1, 1, 1, 2, 2, 2]);
        assert_eq!(x.predicted_coefficient, 1);
        assert!(x.verified());
    }

    #[test]
    fn binomial_oracle() {
        for p in [2u64, 3, 5, 7] {
            for n in 0..40u64 {
                let mut row = vec![1u64];
                for j in 1..=n {
                    row.push(row[j as usize - 1] * (n - j + 1) / j);
                }
                for j in 0..=n.min(20) {
                    assert_eq!(binomial_mod(n, j, p), row[j as usize] % p, "C({n},{j}) mod {p}");
                }
            }
        }
    }

    fn corpus() -> Vec<Word> {
        [
            "x1", "x1^2", "x1^-1", "x1^3", "x1^4", "x1^6", "x1^-4", "[x1,x2]", "[x1,x2,x3]", "[x1^2,x2]",
            "[x1,x2]^2", "x1 x2 x1^-1", "x1^2 x2^-2", "x1 x2^3 x1^-2", "[[x1,x2],[x3,x4]]", "x1^9 x2^-3",
            "[x1^3,x2^-1]", "x1 x2 x1 x2^-1",
        ]
        .iter()
        .map(|s| w(s))
        .collect()
    }

    #[test]
    fn witness_matches_image_on_corpus() {
        for word in corpus() {
            for p in [2, 3, 5] {
                let x = law_failure_witness(&word, p).unwrap();
                assert!(x.verified(), "{word} at p={p}: {x:?}");
            }
        }
    }

    #[test]
    fn binomial_image_matches_letter_products() {
        for word in corpus().into_iter().filter(|x| x.length() <= 12) {
            for (p, d) in [(2, 5), (3, 4), (5, 3)] {
                assert_eq!(magnus_image(&word, p, d).unwrap(), magnus_by_letters(&word, p, d), "{word}");
            }
        }
    }

    fn all_words(max_len: usize) -> Vec<Word> {
        let letters: [(u32, i64); 4] = [(1, 1), (1, -1), (2, 1), (2, -1)];
        let mut out = vec![Word::identity()];
        let mut frontier: Vec<Vec<(u32, i64)>> = vec![vec![]];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for seq in &frontier {
                for &l in &letters {
                    if seq.last() == Some(&(l.0, -l.1)) {
                        continue;
                    }
                    let mut s = seq.clone();
                    s.push(l);
                    out.push(Word::from_syllables(s.iter().copied()));
                    next.push(s);
                }
            }
            frontier = next;
        }
        out
    }

    /// Reduced words of length at most 4 in two variables, grouped by image.
    fn image_classes(p: u32, d: u32) -> Vec<Vec<Word>> {
        let mut classes: std::collections::BTreeMap<String, Vec<Word>> = Default::default();
        for word in all_words(4) {
            classes.entry(magnus_image(&word, p, d).unwrap().to_string()).or_default().push(word);
        }
        classes.into_values().collect()
    }

    #[test]
    fn freeness_spot_check() {
        assert_eq!(all_words(4).len(), 1 + 4 + 12 + 36 + 108);
        // (1+y)^8 = 1 + y^8 vanishes below degree 8, so x^4 and x^-4 agree at
        // d = 6; these are the only coincidences among words of length ≤ 4.
        let mut shared: Vec<Vec<String>> = image_classes(2, 6)
            .into_iter()
            .filter(|c| c.len() > 1)
            .map(|c| c.iter().map(ToString::to_string).collect())
            .collect();
        shared.sort();
        assert_eq!(shared, vec![vec!["x1^4", "x1^-4"], vec!["x2^4", "x2^-4"]]);
        assert!(image_classes(2, 9).iter().all(|c| c.len() == 1));
    }

    fn arb_series(p: u32, k: u32, d: u32) -> impl Strategy<Value = TruncatedSeries> {
        prop::collection::vec((prop::collection::vec(1..=k, 0..d as usize), 0..p as i64), 0..8)
            .prop_map(move |terms| TruncatedSeries::from_terms(p, k, d, terms).unwrap())
    }

    fn arb_unit(p: u32, k: u32, d: u32) -> impl Strategy<Value = TruncatedSeries> {
        arb_series(p, k, d).prop_map(move |s| {
            let c = s.constant_term() as i64;
            ts_add(&s, &TruncatedSeries::from_terms(p, k, d, [(vec![], 1 - c)]).unwrap()).unwrap()
        })
    }

    fn params() -> impl Strategy<Value = (u32, u32, u32)> {
        prop_oneof![Just((2, 2, 5)), Just((3, 2, 4))]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn ring_axioms((a, b, c) in params().prop_flat_map(|(p, k, d)| (arb_series(p, k, d), arb_series(p, k, d), arb_series(p, k, d)))) {
            let ab_c = ts_multiply(&ts_multiply(&a, &b).unwrap(), &c).unwrap();
            let a_bc = ts_multiply(&a, &ts_multiply(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
            let left = ts_multiply(&a, &ts_add(&b, &c).unwrap()).unwrap();
            let right = ts_add(&ts_multiply(&a, &b).unwrap(), &ts_multiply(&a, &c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
            let left = ts_multiply(&ts_add(&a, &b).unwrap(), &c).unwrap();
            let right = ts_add(&ts_multiply(&a, &c).unwrap(), &ts_multiply(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
            prop_assert_eq!(ts_add(&a, &b).unwrap(), ts_add(&b, &a).unwrap());
        }

        #[test]
        fn unit_inverse_and_exponent(u in params().prop_flat_map(|(p, k, d)| arb_unit(p, k, d))) {
            let inv = ts_unit_inverse(&u).unwrap();
            prop_assert!(ts_multiply(&u, &inv).unwrap().is_one());
            prop_assert!(ts_multiply(&inv, &u).unwrap().is_one());
            prop_assert_eq!(&ts_unit_inverse(&inv).unwrap(), &u);
            let e = (u.p() as u64).pow(exponent_log_p(u.p(), u.d()));
            prop_assert!(u.pow(e).unwrap().is_one());
        }
    }
}
