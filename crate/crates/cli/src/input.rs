//! Resolution of group, subgroup, word and descriptor arguments.

use anyhow::{anyhow, bail, Context as _, Result};
use vlab::catalog::{self, Catalog};
use vlab::perm::find_embedding;
use vlab::variety::{VarietyDescriptor, Word};
use vlab::{Error, Permutation, PermutationGroup};

/// Rewrites a library parse error so it names the flag, the position in
/// the original argument and the token found there.
pub fn explain(flag: &str, input: &str, offset: usize, err: Error) -> anyhow::Error {
    match err {
        Error::Parse { message, position } => {
            let at = offset + position;
            let token: String = input
                .get(at..)
                .unwrap_or("")
                .chars()
                .take_while(|c| !c.is_whitespace())
                .take(16)
                .collect();
            let token = if token.is_empty() { "end of input".to_string() } else { format!("'{token}'") };
            anyhow!("{flag}: {message} at position {at} (found {token}) in '{input}'")
        }
        other => anyhow!("{flag}: {other}"),
    }
}

pub fn descriptor(flag: &str, text: &str) -> Result<VarietyDescriptor> {
    text.parse().map_err(|e| explain(flag, text, 0, e))
}

pub fn word(flag: &str, text: &str) -> Result<Word> {
    text.parse().map_err(|e| explain(flag, text, 0, e))
}

/// Group names resolve through the user catalog (if any), then the
/// library's naming scheme. `<g1; g2; ...>` lists generators in cycle
/// notation; `<...>@n` fixes the degree.
pub struct Resolver {
    user: Option<Catalog>,
}

impl Resolver {
    pub fn new(path: Option<&std::path::Path>) -> Result<Self> {
        let user = match path {
            Some(p) => Some(catalog::load_catalog(p).with_context(|| format!("catalog {}", p.display()))?),
            None => None,
        };
        Ok(Self { user })
    }

    pub fn group(&self, flag: &str, text: &str) -> Result<PermutationGroup> {
        let text = text.trim();
        if text.starts_with('<') {
            return generated(flag, text, None);
        }
        if let Some(g) = self.user.as_ref().and_then(|c| c.get(text)) {
            return Ok(g.clone());
        }
        catalog::resolve(text).map_err(|e| anyhow!("{flag}: {e}"))
    }

    /// A subgroup of `g`. Generator lists are read at `g`'s degree. A named
    /// group is used as is when its natural copy lies in `g`, otherwise
    /// through the first embedding in enumeration order.
    pub fn subgroup(&self, flag: &str, text: &str, g: &PermutationGroup, hom_cap: u128) -> Result<PermutationGroup> {
        let h = if text.trim().starts_with('<') {
            generated(flag, text.trim(), Some(g.degree()))?
        } else {
            self.group(flag, text)?
        };
        if h.degree() <= g.degree() {
            let lifted = h.extend_degree(g.degree());
            if lifted.is_subgroup_of(g) {
                return Ok(lifted);
            }
        }
        if text.trim().starts_with('<') {
            bail!("{flag}: '{text}' does not generate a subgroup of the group");
        }
        match find_embedding(&h, g, hom_cap)? {
            Some(f) => Ok(f.image()),
            None => bail!("{flag}: {text} (order {}) does not embed in the group", h.order()),
        }
    }
}

fn generated(flag: &str, text: &str, ambient: Option<usize>) -> Result<PermutationGroup> {
    let close = text
        .rfind('>')
        .ok_or_else(|| anyhow!("{flag}: missing '>' at position {} in '{text}'", text.len()))?;
    let tail = text[close + 1..].trim();
    let fixed = if tail.is_empty() {
        None
    } else {
        let n = tail
            .strip_prefix('@')
            .and_then(|n| n.trim().parse::<usize>().ok())
            .ok_or_else(|| anyhow!("{flag}: expected '@degree' at position {} (found '{tail}') in '{text}'", close + 1))?;
        Some(n)
    };
    let body = &text[1..close];
    let largest = body
        .split(|c: char| !c.is_ascii_digit())
        .filter_map(|s| s.parse::<usize>().ok())
        .max()
        .map_or(1, |m| m + 1);
    let degree = fixed.or(ambient).unwrap_or(largest);
    let mut gens = Vec::new();
    let mut offset = 1;
    for part in body.split(';') {
        if !part.trim().is_empty() {
            let g = Permutation::parse_cycles(part, degree).map_err(|e| explain(flag, text, offset, e))?;
            gens.push(g);
        }
        offset += part.len() + 1;
    }
    gens.retain(|g| !g.is_identity());
    Ok(PermutationGroup::new(degree, gens)?)
}
