use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::word::{Word, WordParser};
use crate::error::{Error, Result};

/// A variety of groups, described syntactically. Equality is syntactic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum VarietyDescriptor {
    /// All groups satisfying the given laws.
    Laws(Vec<Word>),
    /// Abelian groups, `[x1,x2]`.
    Abelian,
    /// Nilpotent of class at most `c`, `[x1,…,x_{c+1}]`.
    Nilpotent(u32),
    /// Solvable of derived length at most `n`.
    Solvable(u32),
    /// The variety generated by a named finite group. Membership is only
    /// partially decidable (fixtures plus necessary conditions).
    VarOfGroup(String),
    /// Extensions of a `left`-group by a `right`-group.
    Product(Box<VarietyDescriptor>, Box<VarietyDescriptor>),
}

/// Three-valued answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

impl VarietyDescriptor {
    pub fn product(left: VarietyDescriptor, right: VarietyDescriptor) -> Self {
        VarietyDescriptor::Product(Box::new(left), Box::new(right))
    }

    pub fn var_of(name: &str) -> Self {
        VarietyDescriptor::VarOfGroup(name.to_string())
    }

    /// The equivalent single-law set for the named families.
    pub fn defining_laws(&self) -> Option<Vec<Word>> {
        match self {
            VarietyDescriptor::Laws(ws) => Some(ws.clone()),
            VarietyDescriptor::Abelian => Some(vec![Word::left_normed_commutator(2)]),
            VarietyDescriptor::Nilpotent(c) => Some(vec![Word::left_normed_commutator(c + 1)]),
            VarietyDescriptor::Solvable(n) => Some(vec![Word::derived_word(*n)]),
            _ => None,
        }
    }

    /// Structural solvability: the named families and their products are
    /// solvable; the variety generated by a group is solvable exactly when the
    /// group is. Raw law sets are never classified.
    pub fn is_solvable_variety(&self) -> Tri {
        match self {
            VarietyDescriptor::Abelian
            | VarietyDescriptor::Nilpotent(_)
            | VarietyDescriptor::Solvable(_) => Tri::Yes,
            VarietyDescriptor::Laws(_) => Tri::Unknown,
            VarietyDescriptor::VarOfGroup(name) => match crate::catalog::resolve(name) {
                Ok(g) if crate::perm::is_solvable(&g) => Tri::Yes,
                Ok(_) => Tri::No,
                Err(_) => Tri::Unknown,
            },
            VarietyDescriptor::Product(l, r) => {
                match (l.is_solvable_variety(), r.is_solvable_variety()) {
                    (Tri::Yes, Tri::Yes) => Tri::Yes,
                    (Tri::No, _) | (_, Tri::No) => Tri::No,
                    _ => Tri::Unknown,
                }
            }
        }
    }
}

impl fmt::Display for VarietyDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarietyDescriptor::Laws(ws) => {
                write!(f, "laws:{{")?;
                for (i, w) in ws.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{w}")?;
                }
                write!(f, "}}")
            }
            VarietyDescriptor::Abelian => write!(f, "A"),
            VarietyDescriptor::Nilpotent(c) => write!(f, "Nc:{c}"),
            VarietyDescriptor::Solvable(n) => write!(f, "Sl:{n}"),
            VarietyDescriptor::VarOfGroup(name) => write!(f, "var:{name}"),
            VarietyDescriptor::Product(l, r) => write!(f, "prod({l},{r})"),
        }
    }
}

impl fmt::Debug for VarietyDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for VarietyDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for VarietyDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = WordParser { src: s, pos: 0 };
        let d = descriptor(&mut p)?;
        p.skip_ws();
        if p.pos < s.len() {
            return Err(p.error("unexpected token"));
        }
        Ok(d)
    }
}

fn positive(p: &mut WordParser<'_>) -> Result<u32> {
    let start = p.pos;
    while p.src.as_bytes().get(p.pos).is_some_and(u8::is_ascii_digit) {
        p.pos += 1;
    }
    match p.src[start..p.pos].parse::<u32>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => {
            p.pos = start;
            Err(p.error("expected a positive integer"))
        }
    }
}

fn eat(p: &mut WordParser<'_>, token: &str) -> bool {
    p.skip_ws();
    if p.src[p.pos..].starts_with(token) {
        p.pos += token.len();
        true
    } else {
        false
    }
}

fn descriptor(p: &mut WordParser<'_>) -> Result<VarietyDescriptor> {
    p.skip_ws();
    if eat(p, "prod(") {
        let mut acc = descriptor(p)?;
        let mut parts = 1;
        loop {
            if eat(p, ",") {
                let next = descriptor(p)?;
                acc = VarietyDescriptor::product(acc, next);
                parts += 1;
            } else if parts >= 2 && eat(p, ")") {
                return Ok(acc);
            } else {
                return Err(p.error("expected ',' or ')' in prod"));
            }
        }
    }
    if eat(p, "Nc:") {
        return Ok(VarietyDescriptor::Nilpotent(positive(p)?));
    }
    if eat(p, "Sl:") {
        return Ok(VarietyDescriptor::Solvable(positive(p)?));
    }
    if eat(p, "var:") {
        let start = p.pos;
        while p
            .src
            .as_bytes()
            .get(p.pos)
            .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
        {
            p.pos += 1;
        }
        if start == p.pos {
            return Err(p.error("expected a group name"));
        }
        return Ok(VarietyDescriptor::VarOfGroup(p.src[start..p.pos].to_string()));
    }
    if eat(p, "laws:{") {
        let mut words = Vec::new();
        loop {
            p.skip_ws();
            if eat(p, "}") {
                return Ok(VarietyDescriptor::Laws(words));
            }
            words.push(p.product()?);
            p.skip_ws();
            if !eat(p, ";") {
                p.skip_ws();
                if !p.src[p.pos..].starts_with('}') {
                    return Err(p.error("expected ';' or '}' in law set"));
                }
            }
        }
    }
    if eat(p, "A") {
        return Ok(VarietyDescriptor::Abelian);
    }
    Err(p.error("expected a variety descriptor"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> VarietyDescriptor {
        s.parse().unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(d("A"), VarietyDescriptor::Abelian);
        assert_eq!(d("Nc:2"), VarietyDescriptor::Nilpotent(2));
        assert_eq!(d("Sl:3"), VarietyDescriptor::Solvable(3));
        assert_eq!(d("var:A5"), VarietyDescriptor::var_of("A5"));
        assert_eq!(
            d("laws:{[x1,x2];x1^4}"),
            VarietyDescriptor::Laws(vec!["[x1,x2]".parse().unwrap(), "x1^4".parse().unwrap()])
        );
        assert_eq!(
            d("prod(var:A5, A)"),
            VarietyDescriptor::product(VarietyDescriptor::var_of("A5"), VarietyDescriptor::Abelian)
        );
        assert_eq!(
            d("prod(A,Nc:2,Sl:1)"),
            VarietyDescriptor::product(
                VarietyDescriptor::product(VarietyDescriptor::Abelian, VarietyDescriptor::Nilpotent(2)),
                VarietyDescriptor::Solvable(1)
            )
        );
    }

    #[test]
    fn parse_errors_carry_position() {
        for (s, pos) in [("Nc:0", 3), ("prod(A)", 6), ("B", 0), ("laws:{x1 x}", 10), ("A junk", 2)] {
            match s.parse::<VarietyDescriptor>() {
                Err(Error::Parse { position, .. }) => assert_eq!(position, pos, "{s}"),
                other => panic!("{s}: {other:?}"),
            }
        }
    }

    #[test]
    fn display_round_trip() {
        for s in ["A", "Nc:3", "Sl:2", "var:A5", "laws:{x1^4;[x1,x2]}", "prod(var:A5,prod(A,Nc:2))"] {
            assert_eq!(d(&d(s).to_string()), d(s));
        }
    }

    #[test]
    fn solvable_classification() {
        assert_eq!(d("A").is_solvable_variety(), Tri::Yes);
        assert_eq!(d("prod(A,Nc:2)").is_solvable_variety(), Tri::Yes);
        assert_eq!(d("laws:{x1^5}").is_solvable_variety(), Tri::Unknown);
        assert_eq!(d("var:A5").is_solvable_variety(), Tri::No);
        assert_eq!(d("prod(var:A5,A)").is_solvable_variety(), Tri::No);
        assert_eq!(d("var:S3").is_solvable_variety(), Tri::Yes);
        assert_eq!(d("var:S5").is_solvable_variety(), Tri::No);
        assert_eq!(d("var:Z9").is_solvable_variety(), Tri::Unknown);
    }
}
