//! Externally sourced facts about varieties, with provenance.
//!
//! Record format, one per line (`#` starts a comment):
//!
//! ```text
//! known-epi       | A4 < A5 | var:A5 | citation
//! known-member    | C2      | var:A5 | citation
//! known-nonmember | S5      | var:A5 | citation
//! ```

use std::fmt;
use std::ops::ControlFlow;
use std::path::Path;

use serde::Serialize;

use super::descriptor::VarietyDescriptor;
use crate::error::{Error, Result};
use crate::perm::{for_each_homomorphism, PermutationGroup};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FixtureKind {
    KnownEpi {
        sub: String,
        group: String,
        variety: VarietyDescriptor,
    },
    KnownMember {
        group: String,
        variety: VarietyDescriptor,
    },
    KnownNonmember {
        group: String,
        variety: VarietyDescriptor,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fixture {
    #[serde(flatten)]
    pub kind: FixtureKind,
    pub provenance: String,
}

const BUNDLED: &str = "\
# The alternating group A4 is epimorphically embedded in A5 within the
# variety A5 generates.
known-epi | A4 < A5 | var:A5 | B. H. Neumann, Example A, as reported in P. M. Neumann, \"Splitting groups and projectives in varieties of groups\"
";

impl Fixture {
    pub fn variety(&self) -> &VarietyDescriptor {
        match &self.kind {
            FixtureKind::KnownEpi { variety, .. }
            | FixtureKind::KnownMember { variety, .. }
            | FixtureKind::KnownNonmember { variety, .. } => variety,
        }
    }

    /// The fixture's group, and for known-epi its subgroup padded to the
    /// group's degree.
    pub fn groups(&self) -> Result<(PermutationGroup, Option<PermutationGroup>)> {
        match &self.kind {
            FixtureKind::KnownEpi { sub, group, .. } => {
                let g = crate::catalog::resolve(group)?;
                let h = crate::catalog::resolve(sub)?;
                if h.degree() > g.degree() {
                    return Err(Error::Invalid(format!("{sub} does not act inside {group}")));
                }
                let h = h.extend_degree(g.degree());
                if !h.is_subgroup_of(&g) {
                    return Err(Error::Invalid(format!("{sub} is not a subgroup of {group}")));
                }
                Ok((g, Some(h)))
            }
            FixtureKind::KnownMember { group, .. } | FixtureKind::KnownNonmember { group, .. } => {
                Ok((crate::catalog::resolve(group)?, None))
            }
        }
    }
}

impl fmt::Display for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FixtureKind::KnownEpi { sub, group, variety } => {
                write!(f, "known-epi | {sub} < {group} | {variety} | {}", self.provenance)
            }
            FixtureKind::KnownMember { group, variety } => {
                write!(f, "known-member | {group} | {variety} | {}", self.provenance)
            }
            FixtureKind::KnownNonmember { group, variety } => {
                write!(f, "known-nonmember | {group} | {variety} | {}", self.provenance)
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FixtureSet {
    fixtures: Vec<Fixture>,
}

fn parse_record(line: &str) -> std::result::Result<Fixture, String> {
    let fields: Vec<&str> = line.splitn(4, '|').map(str::trim).collect();
    let [kind, names, desc, provenance] = fields[..] else {
        return Err("expected 'kind | names | descriptor | provenance'".into());
    };
    if provenance.is_empty() {
        return Err("missing provenance".into());
    }
    let variety: VarietyDescriptor = desc.parse().map_err(|e: Error| format!("descriptor: {e}"))?;
    let single = |names: &str| -> std::result::Result<String, String> {
        if names.is_empty() || names.contains(char::is_whitespace) {
            Err(format!("expected one group name, found '{names}'"))
        } else {
            Ok(names.to_string())
        }
    };
    let kind = match kind {
        "known-epi" => {
            let (sub, group) = names
                .split_once('<')
                .ok_or_else(|| format!("expected 'H < G', found '{names}'"))?;
            FixtureKind::KnownEpi {
                sub: single(sub.trim())?,
                group: single(group.trim())?,
                variety,
            }
        }
        "known-member" => FixtureKind::KnownMember {
            group: single(names)?,
            variety,
        },
        "known-nonmember" => FixtureKind::KnownNonmember {
            group: single(names)?,
            variety,
        },
        other => return Err(format!("unknown fixture kind '{other}'")),
    };
    let fixture = Fixture {
        kind,
        provenance: provenance.to_string(),
    };
    fixture.groups().map_err(|e| e.to_string())?;
    Ok(fixture)
}

impl FixtureSet {
    pub fn new(fixtures: Vec<Fixture>) -> Self {
        Self { fixtures }
    }

    /// The fixtures shipped with the library.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED).expect("bundled fixtures parse")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut fixtures = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fixture = parse_record(line).map_err(|message| Error::Line { line: i + 1, message })?;
            fixtures.push(fixture);
        }
        Ok(Self { fixtures })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::Invalid(format!("{}: {e}", path.as_ref().display())))?;
        Self::parse(&text)
    }

    pub fn to_text(&self) -> String {
        self.fixtures.iter().map(|f| format!("{f}\n")).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Fixture> {
        self.fixtures.iter()
    }

    pub fn len(&self) -> usize {
        self.fixtures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fixtures.is_empty()
    }

    pub fn push(&mut self, fixture: Fixture) {
        self.fixtures.push(fixture);
    }

    /// A known-epi fixture for `desc` whose pair is isomorphic to `(g, h)`:
    /// some isomorphism from the fixture group onto `g` carries the fixture
    /// subgroup onto `h`.
    pub fn known_epi(
        &self,
        g: &PermutationGroup,
        h: &PermutationGroup,
        desc: &VarietyDescriptor,
        cap: u128,
    ) -> Result<Option<&Fixture>> {
        for f in &self.fixtures {
            if !matches!(f.kind, FixtureKind::KnownEpi { .. }) || f.variety() != desc {
                continue;
            }
            let (fg, fh) = f.groups()?;
            if pair_isomorphic(&fg, fh.as_ref(), g, Some(h), cap)? {
                return Ok(Some(f));
            }
        }
        Ok(None)
    }

    /// `Some(true)` for a matching known-member fixture, `Some(false)` for a
    /// matching known-nonmember fixture.
    pub fn membership(
        &self,
        g: &PermutationGroup,
        desc: &VarietyDescriptor,
        cap: u128,
    ) -> Result<Option<(bool, &Fixture)>> {
        for f in &self.fixtures {
            let member = match f.kind {
                FixtureKind::KnownMember { .. } => true,
                FixtureKind::KnownNonmember { .. } => false,
                FixtureKind::KnownEpi { .. } => continue,
            };
            if f.variety() != desc {
                continue;
            }
            let (fg, _) = f.groups()?;
            if pair_isomorphic(&fg, None, g, None, cap)? {
                return Ok(Some((member, f)));
            }
        }
        Ok(None)
    }
}

/// Isomorphism `fg → g` carrying `fh` onto `h` when both are given.
fn pair_isomorphic(
    fg: &PermutationGroup,
    fh: Option<&PermutationGroup>,
    g: &PermutationGroup,
    h: Option<&PermutationGroup>,
    cap: u128,
) -> Result<bool> {
    if fg.order() != g.order() || fh.map(|x| x.order()) != h.map(|x| x.order()) {
        return Ok(false);
    }
    if fg.degree() == g.degree()
        && fg.same_as(g)
        && match (fh, h) {
            (Some(a), Some(b)) => a.same_as(b),
            _ => true,
        }
    {
        return Ok(true);
    }
    let mut found = false;
    for_each_homomorphism(fg, g, cap, |phi| {
        if !phi.is_injective() {
            return ControlFlow::Continue(());
        }
        let ok = match (fh, h) {
            (Some(a), Some(b)) => {
                let imgs = a.generators().iter().map(|x| phi.apply(x)).collect();
                PermutationGroup::new(g.degree(), imgs).map(|img| img.same_as(b)).unwrap_or(false)
            }
            _ => true,
        };
        if ok {
            found = true;
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(found)
}
