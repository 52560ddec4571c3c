//! Named constructors: `Cn`, `Sn`, `An`, `Dn` (dihedral of order `2n`), `V4`,
//! `Q8` and the trivial group.

use super::group::PermutationGroup;
use super::permutation::Permutation;
use crate::error::{Error, Result};

fn cycle(degree: usize, points: impl IntoIterator<Item = usize>) -> Permutation {
    let pts: Vec<u32> = points.into_iter().map(|p| p as u32).collect();
    Permutation::from_cycles(degree, &[pts]).expect("valid cycle")
}

/// Trivial group acting on one point.
pub fn trivial() -> PermutationGroup {
    PermutationGroup::trivial(1)
}

pub fn cyclic(n: usize) -> PermutationGroup {
    assert!(n >= 1);
    PermutationGroup::new(n, vec![cycle(n, 0..n)]).unwrap()
}

pub fn symmetric(n: usize) -> PermutationGroup {
    assert!(n >= 1);
    if n == 1 {
        return trivial();
    }
    if n == 2 {
        return cyclic(2);
    }
    PermutationGroup::new(n, vec![cycle(n, 0..n), cycle(n, [0, 1])]).unwrap()
}

pub fn alternating(n: usize) -> PermutationGroup {
    assert!(n >= 1);
    if n < 3 {
        return PermutationGroup::trivial(n);
    }
    if n == 3 {
        return cyclic(3);
    }
    let long = if n % 2 == 1 { cycle(n, 0..n) } else { cycle(n, 1..n) };
    PermutationGroup::new(n, vec![long, cycle(n, [0, 1, 2])]).unwrap()
}

/// Dihedral group of order `2n` acting on the `n` vertices of a polygon.
pub fn dihedral(n: usize) -> PermutationGroup {
    assert!(n >= 1);
    if n == 1 {
        return cyclic(2);
    }
    if n == 2 {
        return klein_four();
    }
    let reflection: Vec<u32> = (0..n).map(|i| ((n - i) % n) as u32).collect();
    PermutationGroup::new(
        n,
        vec![cycle(n, 0..n), Permutation::from_images(reflection).unwrap()],
    )
    .unwrap()
}

pub fn klein_four() -> PermutationGroup {
    PermutationGroup::from_cycles(4, &["(0 1)(2 3)", "(0 2)(1 3)"]).unwrap()
}

/// Quaternion group in its regular representation.
pub fn quaternion() -> PermutationGroup {
    PermutationGroup::from_cycles(8, &["(0 1 2 3)(4 5 6 7)", "(0 4 2 6)(1 7 3 5)"]).unwrap()
}

/// Resolves `C6`, `S4`, `A5`, `D4`, `V4`, `Q8`, `1`/`trivial`.
pub fn by_name(name: &str) -> Result<PermutationGroup> {
    let name = name.trim();
    match name {
        "1" | "trivial" | "C1" | "E" => return Ok(trivial()),
        "V4" => return Ok(klein_four()),
        "Q8" => return Ok(quaternion()),
        _ => {}
    }
    let (kind, rest) = name.split_at(name.char_indices().nth(1).map(|(i, _)| i).unwrap_or(name.len()));
    let n: usize = rest
        .parse()
        .map_err(|_| Error::UnknownGroup(name.to_string()))?;
    if n == 0 {
        return Err(Error::UnknownGroup(name.to_string()));
    }
    match kind {
        "C" => Ok(cyclic(n)),
        "S" => Ok(symmetric(n)),
        "A" => Ok(alternating(n)),
        "D" => Ok(dihedral(n)),
        _ => Err(Error::UnknownGroup(name.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(by_name("A5").unwrap().order(), 60);
        assert_eq!(by_name("S4").unwrap().order(), 24);
        assert_eq!(by_name("D4").unwrap().order(), 8);
        assert_eq!(by_name("D5").unwrap().order(), 10);
        assert_eq!(by_name("C7").unwrap().order(), 7);
        assert_eq!(by_name("A4").unwrap().order(), 12);
        assert_eq!(by_name("A6").unwrap().order(), 360);
        assert_eq!(by_name("Q8").unwrap().order(), 8);
        assert_eq!(by_name("trivial").unwrap().order(), 1);
        assert!(by_name("X3").is_err());
        assert!(by_name("C").is_err());
    }

    #[test]
    fn a5_matches_listed_generators() {
        let a5 = PermutationGroup::from_cycles(5, &["(0 1 2 3 4)", "(0 1 2)"]).unwrap();
        assert_eq!(a5.order(), 60);
        assert!(a5.same_as(&alternating(5)));
        assert!(!a5.has(&Permutation::parse_cycles("(0 1)", 5).unwrap()));
    }

    #[test]
    fn quaternion_is_not_dihedral() {
        let q = quaternion();
        let involutions = q
            .elements_within(100)
            .unwrap()
            .iter()
            .filter(|e| e.order() == 2)
            .count();
        assert_eq!(involutions, 1);
    }
}
