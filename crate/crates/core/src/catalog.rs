//! Named groups: every group of order at most 24 (74 isomorphism types),
//! plus `A5`, `S5` and a few small wreath products.
//!
//! Text format, one group per line (`#` starts a comment):
//!
//! ```text
//! name degree img,img,... img,...
//! ```
//!
//! Each generator is its image list; a group with no generators is trivial.

use std::collections::HashMap;
use std::path::Path;
use std::sync::OnceLock;

use crate::budget::Budget;
use crate::constructions::{direct_product, regular_wreath};
use crate::error::{Error, Result};
use crate::perm::{named, quotient, Permutation, PermutationGroup};

/// Environment variable naming a catalog file to use instead of the bundled
/// one.
pub const CATALOG_ENV: &str = "VLAB_CATALOG";

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub group: PermutationGroup,
}

impl PartialEq for CatalogEntry {
    /// Same name, degree and generator images.
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.group.degree() == other.group.degree()
            && self.group.generators() == other.group.generators()
    }
}

impl Eq for CatalogEntry {}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn new(entries: Vec<CatalogEntry>) -> Self {
        Self { entries }
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&PermutationGroup> {
        self.entries.iter().find(|e| e.name == name).map(|e| &e.group)
    }

    pub fn groups(&self) -> impl Iterator<Item = &PermutationGroup> {
        self.entries.iter().map(|e| &e.group)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&e.name);
            out.push(' ');
            out.push_str(&e.group.degree().to_string());
            for g in e.group.generators() {
                out.push(' ');
                let imgs: Vec<String> = g.images().iter().map(u32::to_string).collect();
                out.push_str(&imgs.join(","));
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let entry = parse_entry(line).map_err(|message| Error::Line { line: i + 1, message })?;
            entries.push(entry);
        }
        Ok(Self { entries })
    }
}

fn parse_entry(line: &str) -> std::result::Result<CatalogEntry, String> {
    let mut fields = line.split_whitespace();
    let name = fields.next().ok_or("missing name")?.to_string();
    let degree: usize = fields
        .next()
        .ok_or("missing degree")?
        .parse()
        .map_err(|_| "degree is not a number".to_string())?;
    if degree == 0 {
        return Err("degree must be positive".into());
    }
    let mut gens = Vec::new();
    for field in fields {
        let images: Vec<u32> = field
            .split(',')
            .map(|t| t.parse::<u32>().map_err(|_| format!("bad image '{t}'")))
            .collect::<std::result::Result<_, _>>()?;
        if images.len() != degree {
            return Err(format!("generator has {} images, degree is {degree}", images.len()));
        }
        gens.push(Permutation::from_images(images).map_err(|e| e.to_string())?);
    }
    let group = PermutationGroup::new(degree, gens).map_err(|e| e.to_string())?;
    Ok(CatalogEntry { name, group })
}

/// Reads a catalog file; malformed records are reported with their line.
pub fn load_catalog(path: impl AsRef<Path>) -> Result<Catalog> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| Error::Invalid(format!("{}: {e}", path.as_ref().display())))?;
    Catalog::parse(&text)
}

/// The file named by [`CATALOG_ENV`] if set, otherwise the bundled catalog.
pub fn catalog_from_env() -> Result<Catalog> {
    match std::env::var_os(CATALOG_ENV) {
        Some(path) => load_catalog(path),
        None => Ok(default_catalog().clone()),
    }
}

/// Resolves a group name: `Cn`, `Sn`, `An`, `Dn`, `V4`, `Q8`, bundled
/// catalog names, `X wr Y` (left-associative) and `X x Y` direct products.
pub fn resolve(name: &str) -> Result<PermutationGroup> {
    let name = name.trim();
    if let Ok(g) = named::by_name(name) {
        return Ok(g);
    }
    if let Some(g) = default_catalog().get(name) {
        return Ok(g.clone());
    }
    if let Some(at) = name.rfind("wr") {
        let (a, b) = (&name[..at], &name[at + 2..]);
        if !a.trim().is_empty() && !b.trim().is_empty() {
            if let (Ok(a), Ok(b)) = (resolve(a), resolve(b)) {
                return Ok(regular_wreath(&a, &b, &Budget::default())?.product);
            }
        }
    }
    if name.contains('x') {
        let parts: Result<Vec<PermutationGroup>> = name.split('x').map(resolve).collect();
        if let Ok(parts) = parts {
            return Ok(direct_product(&parts)?.product);
        }
    }
    Err(Error::UnknownGroup(name.to_string()))
}

/// Regular representation of `⟨a, b | aⁿ, bᵐ = aᵗ, b a b⁻¹ = aʳ⟩` on its
/// `n·m` elements `aⁱbʲ`. Panics if the parameters do not define a group of
/// that order.
pub fn metacyclic(n: u64, m: u64, t: u64, r: u64) -> PermutationGroup {
    assert!(n >= 1 && m >= 1);
    assert_eq!(mod_pow(r, m, n), 1 % n, "r^m must be 1 mod n");
    assert_eq!(r * t % n, t % n, "a^t must be central");
    let size = (n * m) as usize;
    let idx = |i: u64, j: u64| (j * n + i) as usize;
    let mul = |(i, j): (u64, u64), (k, l): (u64, u64)| -> (u64, u64) {
        let mut e = i + k * mod_pow(r, j, n);
        let mut f = j + l;
        if f >= m {
            f -= m;
            e += t;
        }
        (e % n, f)
    };
    let right_mult = |g: (u64, u64)| -> Permutation {
        let mut images = vec![0u32; size];
        for j in 0..m {
            for i in 0..n {
                let (e, f) = mul((i, j), g);
                images[idx(i, j)] = idx(e, f) as u32;
            }
        }
        Permutation::from_images(images).expect("group multiplication table row")
    };
    let g = PermutationGroup::new(size, vec![right_mult((1 % n, 0)), right_mult((0, 1 % m))]).unwrap();
    assert_eq!(g.order(), size as u128, "presentation collapses");
    g.tidy()
}

fn mod_pow(base: u64, exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    for _ in 0..exp {
        acc = acc * base % m;
    }
    acc
}

fn dp(parts: &[PermutationGroup]) -> PermutationGroup {
    direct_product(parts).unwrap().product
}

fn c(n: usize) -> PermutationGroup {
    named::cyclic(n)
}

fn gens(degree: usize, cycles: &[&str]) -> PermutationGroup {
    PermutationGroup::from_cycles(degree, cycles).unwrap()
}

/// `SL(2,3)` on the eight nonzero vectors of `F₃²`.
fn sl23() -> PermutationGroup {
    let vectors: Vec<(u32, u32)> = (0..3)
        .flat_map(|x| (0..3).map(move |y| (x, y)))
        .filter(|&v| v != (0, 0))
        .collect();
    let act = |m: [[u32; 2]; 2]| {
        let images = vectors
            .iter()
            .map(|&(x, y)| {
                let w = ((x * m[0][0] + y * m[1][0]) % 3, (x * m[0][1] + y * m[1][1]) % 3);
                vectors.iter().position(|&v| v == w).unwrap() as u32
            })
            .collect();
        Permutation::from_images(images).unwrap()
    };
    PermutationGroup::new(8, vec![act([[1, 1], [0, 1]]), act([[1, 0], [1, 1]])]).unwrap()
}

/// Central product `C4 ∘ D4`.
fn pauli() -> PermutationGroup {
    let g = dp(&[named::dihedral(4), c(4)]);
    let z = Permutation::parse_cycles("(0 2)(1 3)(4 6)(5 7)", 8).unwrap();
    let n = g.subgroup(vec![z]);
    quotient(&g, &n).unwrap().0
}

fn build_default() -> Catalog {
    let b = Budget::default();
    let wr = |a: &PermutationGroup, t: &PermutationGroup| regular_wreath(a, t, &b).unwrap().product;
    let v4 = named::klein_four();
    let q8 = named::quaternion();
    let d4 = named::dihedral(4);
    let s3 = named::symmetric(3);
    let a4 = named::alternating(4);
    let dic3 = metacyclic(6, 2, 3, 5);
    let list: Vec<(&str, PermutationGroup)> = vec![
        ("C1", named::trivial()),
        ("C2", c(2)),
        ("C3", c(3)),
        ("C4", c(4)),
        ("V4", v4.clone()),
        ("C5", c(5)),
        ("C6", c(6)),
        ("S3", s3.clone()),
        ("C7", c(7)),
        ("C8", c(8)),
        ("C4xC2", dp(&[c(4), c(2)])),
        ("C2^3", dp(&[c(2), c(2), c(2)])),
        ("D4", d4.clone()),
        ("Q8", q8.clone()),
        ("C9", c(9)),
        ("C3^2", dp(&[c(3), c(3)])),
        ("C10", c(10)),
        ("D5", named::dihedral(5)),
        ("C11", c(11)),
        ("C12", c(12)),
        ("C6xC2", dp(&[c(6), c(2)])),
        ("A4", a4.clone()),
        ("D6", named::dihedral(6)),
        ("Dic3", dic3.clone()),
        ("C13", c(13)),
        ("C14", c(14)),
        ("D7", named::dihedral(7)),
        ("C15", c(15)),
        ("C16", c(16)),
        ("C4xC4", dp(&[c(4), c(4)])),
        ("C2^2:C4", gens(8, &["(0 1)", "(2 3)", "(0 2)(1 3)(4 5 6 7)"])),
        ("C4:C4", metacyclic(4, 4, 0, 3)),
        ("C8xC2", dp(&[c(8), c(2)])),
        ("M16", metacyclic(8, 2, 0, 5)),
        ("D8", named::dihedral(8)),
        ("SD16", metacyclic(8, 2, 0, 3)),
        ("Q16", metacyclic(8, 2, 4, 7)),
        ("C4xC2^2", dp(&[c(4), c(2), c(2)])),
        ("C2xD4", dp(&[c(2), d4.clone()])),
        ("C2xQ8", dp(&[c(2), q8.clone()])),
        ("C4oD4", pauli()),
        ("C2^4", dp(&[c(2), c(2), c(2), c(2)])),
        ("C17", c(17)),
        ("C18", c(18)),
        ("C6xC3", dp(&[c(6), c(3)])),
        ("D9", named::dihedral(9)),
        ("C3xS3", dp(&[c(3), s3.clone()])),
        ("C3^2:C2", gens(6, &["(0 1 2)", "(3 4 5)", "(1 2)(4 5)"])),
        ("C19", c(19)),
        ("C20", c(20)),
        ("C10xC2", dp(&[c(10), c(2)])),
        ("D10", named::dihedral(10)),
        ("Dic5", metacyclic(10, 2, 5, 9)),
        ("F20", metacyclic(5, 4, 0, 2)),
        ("C21", c(21)),
        ("C7:C3", metacyclic(7, 3, 0, 2)),
        ("C22", c(22)),
        ("D11", named::dihedral(11)),
        ("C23", c(23)),
        ("C24", c(24)),
        ("C12xC2", dp(&[c(12), c(2)])),
        ("C6xC2^2", dp(&[c(6), c(2), c(2)])),
        ("S4", named::symmetric(4)),
        ("SL(2,3)", sl23()),
        ("C3:C8", metacyclic(3, 8, 0, 2)),
        ("Dic6", metacyclic(12, 2, 6, 11)),
        ("D12", named::dihedral(12)),
        ("C2xA4", dp(&[c(2), a4.clone()])),
        ("C2xDic3", dp(&[c(2), dic3])),
        ("C3:D4", gens(7, &["(0 1 2)", "(3 4 5 6)(1 2)", "(3 5)"])),
        ("C4xS3", dp(&[c(4), s3.clone()])),
        ("C2^2xS3", dp(&[v4.clone(), s3.clone()])),
        ("C3xD4", dp(&[c(3), d4.clone()])),
        ("C3xQ8", dp(&[c(3), q8.clone()])),
        ("A5", named::alternating(5)),
        ("S5", named::symmetric(5)),
        ("C2wrC2", wr(&c(2), &c(2))),
        ("C2wrC3", wr(&c(2), &c(3))),
        ("C3wrC2", wr(&c(3), &c(2))),
        ("C2wrC4", wr(&c(2), &c(4))),
        ("C2wrC2wrC2", wr(&wr(&c(2), &c(2)), &c(2))),
        ("C3wrC3", wr(&c(3), &c(3))),
        ("A5wrC2", wr(&named::alternating(5), &c(2))),
    ];
    Catalog::new(
        list.into_iter()
            .map(|(name, group)| CatalogEntry {
                name: name.to_string(),
                group: group.tidy(),
            })
            .collect(),
    )
}

/// The bundled catalog, built once.
pub fn default_catalog() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(build_default)
}

/// Bundled groups of order at most `n`.
pub fn small_groups(n: u128) -> Vec<&'static CatalogEntry> {
    default_catalog().entries().iter().filter(|e| e.group.order() <= n && !e.name.contains("wr")).collect()
}

/// Counts of bundled groups by order, for the order range `1..=24`.
pub fn order_census() -> HashMap<u128, usize> {
    let mut out = HashMap::new();
    for e in small_groups(24) {
        *out.entry(e.group.order()).or_insert(0) += 1;
    }
    out
}
