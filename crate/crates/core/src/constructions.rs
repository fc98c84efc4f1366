//! Named groups: symmetric, alternating, cyclic, dihedral, the affine and
//! projective families over GF(q), and the Mathieu group M11 in its two
//! actions.
//!
//! Field codes label points directly; on the projective line the point at
//! infinity is labeled `q`.

use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::group::PermGroup;
use crate::perm::Permutation;

/// Variants of the projective group on the line over GF(q).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Projective {
    Psl,
    Pgl,
    PSigmaL,
    PGammaL,
}

/// Standard generators of M11 on 11 points, 1-based cycles.
const M11_ON_11: [&[&[usize]]; 2] = [&[&[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11]], &[&[3, 7, 11, 8], &[4, 10, 5, 6]]];

/// Generators of the 3-transitive M11 on 12 points, 1-based cycles.
const M11_ON_12: [&[&[usize]]; 2] =
    [&[&[1, 11, 12, 10, 9, 4, 6, 2], &[3, 5, 8, 7]], &[&[1, 12, 9, 8, 10], &[3, 5, 11, 6, 7]]];

fn from_one_based(n: usize, cycles: &[&[usize]]) -> Result<Permutation> {
    let cycles: Vec<Vec<usize>> = cycles.iter().map(|c| c.iter().map(|x| x - 1).collect()).collect();
    Permutation::from_cycles(n, &cycles)
}

fn from_map(q: usize, f: impl Fn(usize) -> usize) -> Result<Permutation> {
    Permutation::new((0..q).map(f).collect())
}

pub fn symmetric(n: usize) -> Result<PermGroup> {
    let mut gens = Vec::new();
    if n >= 2 {
        gens.push(Permutation::from_cycles(n, &[vec![0, 1]])?);
    }
    if n >= 3 {
        gens.push(Permutation::from_cycles(n, &[(0..n).collect()])?);
    }
    PermGroup::generate(n, &gens)
}

pub fn alternating(n: usize) -> Result<PermGroup> {
    let mut gens = Vec::new();
    if n >= 3 {
        gens.push(Permutation::from_cycles(n, &[vec![0, 1, 2]])?);
    }
    if n >= 4 {
        let long: Vec<usize> = if n % 2 == 1 { (0..n).collect() } else { (1..n).collect() };
        gens.push(Permutation::from_cycles(n, &[long])?);
    }
    PermGroup::generate(n, &gens)
}

pub fn cyclic(n: usize) -> Result<PermGroup> {
    PermGroup::generate(n, &[from_map(n, |x| (x + 1) % n)?])
}

/// Dihedral group of order `2n` acting on the vertices of an `n`-gon.
pub fn dihedral(n: usize) -> Result<PermGroup> {
    PermGroup::generate(n, &[from_map(n, |x| (x + 1) % n)?, from_map(n, |x| (n - x) % n)?])
}

pub fn mathieu11(degree: usize) -> Result<PermGroup> {
    let cycles = match degree {
        11 => &M11_ON_11,
        12 => &M11_ON_12,
        _ => return Err(Error::UnknownGroup(format!("M11@{degree}"))),
    };
    let gens = cycles.iter().map(|c| from_one_based(degree, c)).collect::<Result<Vec<_>>>()?;
    PermGroup::generate(degree, &gens)
}

/// AGL(1,q), or AΓL(1,q) when `with_frobenius` is set, on the `q` field elements.
pub fn affine_group(q: usize, with_frobenius: bool) -> Result<PermGroup> {
    let f = FiniteField::new(q)?;
    let w = f.primitive_element();
    let mut gens = vec![from_map(q, |x| f.add(x as u8, 1) as usize)?, from_map(q, |x| f.mul(x as u8, w) as usize)?];
    if with_frobenius && f.degree() > 1 {
        gens.push(from_map(q, |x| f.frobenius(x as u8) as usize)?);
    }
    PermGroup::generate(q, &gens)
}

/// The index-2 subgroup of AGL(1,q), q odd: maps `x -> ax + b` with `a` a nonzero square.
pub fn affine_half(q: usize) -> Result<PermGroup> {
    let f = FiniteField::new(q)?;
    if q.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("AGL(1,{q}) has no index-2 subgroup for even q")));
    }
    let w2 = f.mul(f.primitive_element(), f.primitive_element());
    PermGroup::generate(
        q,
        &[from_map(q, |x| f.add(x as u8, 1) as usize)?, from_map(q, |x| f.mul(x as u8, w2) as usize)?],
    )
}

/// Image of `x` (point `q` is infinity) under `x -> (ax + b) / (cx + d)`.
fn mobius(f: &FiniteField, [a, b, c, d]: [u8; 4], x: usize) -> usize {
    let q = f.order();
    let (num, den) = if x == q { (a, c) } else { (f.add(f.mul(a, x as u8), b), f.add(f.mul(c, x as u8), d)) };
    match f.inv(den) {
        None => q,
        Some(inv) => f.mul(num, inv) as usize,
    }
}

/// Projective groups acting on the `q + 1` points of the projective line.
pub fn projective_group(q: usize, variant: Projective) -> Result<PermGroup> {
    let f = FiniteField::new(q)?;
    let n = q + 1;
    let w = f.primitive_element();
    let scale = match variant {
        Projective::Psl | Projective::PSigmaL => f.mul(w, w),
        Projective::Pgl | Projective::PGammaL => w,
    };
    let minus_one = f.neg(1);
    let mut gens = vec![
        from_map(n, |x| mobius(&f, [1, 1, 0, 1], x))?,
        from_map(n, |x| mobius(&f, [scale, 0, 0, 1], x))?,
        from_map(n, |x| mobius(&f, [0, minus_one, 1, 0], x))?,
    ];
    if matches!(variant, Projective::PSigmaL | Projective::PGammaL) && f.degree() > 1 {
        gens.push(from_map(n, |x| if x == q { q } else { f.frobenius(x as u8) as usize })?);
    }
    PermGroup::generate(n, &gens)
}

/// Catalog names accepted by [`catalog`]; `n` and `q` are placeholders.
pub const CATALOG_NAMES: &[&str] = &[
    "S<n>@<n>",
    "A<n>@<n>",
    "C<n>@<n>",
    "D<n>@<n>",
    "M11@11",
    "M11@12",
    "PSL(2,<q>)@<q+1>",
    "PGL(2,<q>)@<q+1>",
    "PΣL(2,<q>)@<q+1>",
    "PΓL(2,<q>)@<q+1>",
    "AGL(1,<q>)@<q>",
    "AΓL(1,<q>)@<q>",
    "AGL(1,<q>)-half@<q>",
];

fn parse_field_args(inner: &str, first: usize) -> Option<usize> {
    let (a, b) = inner.split_once(',')?;
    (a.trim().parse::<usize>().ok()? == first).then_some(())?;
    b.trim().parse().ok()
}

/// Builds a named group such as `"A6@6"`, `"M11@12"` or `"PΓL(2,8)@9"`.
/// `Sigma` and `Gamma` are accepted in place of `Σ` and `Γ`.
pub fn catalog(name: &str) -> Result<PermGroup> {
    let unknown = || Error::UnknownGroup(name.to_string());
    let (family, degree) = name.trim().rsplit_once('@').ok_or_else(unknown)?;
    let degree: usize = degree.trim().parse().map_err(|_| unknown())?;
    let family = family.trim().replace("Sigma", "Σ").replace("Gamma", "Γ");
    let expect = |n: usize| if n == degree { Ok(()) } else { Err(unknown()) };

    if family == "M11" {
        return mathieu11(degree);
    }
    if let Some(body) = family.strip_suffix(')').and_then(|f| f.split_once('(')) {
        let (head, inner) = body;
        let variant = match head {
            "PSL" => Some(Projective::Psl),
            "PGL" => Some(Projective::Pgl),
            "PΣL" => Some(Projective::PSigmaL),
            "PΓL" => Some(Projective::PGammaL),
            _ => None,
        };
        if let Some(variant) = variant {
            let q = parse_field_args(inner, 2).ok_or_else(unknown)?;
            expect(q + 1)?;
            return projective_group(q, variant);
        }
        let frobenius = match head {
            "AGL" => false,
            "AΓL" => true,
            _ => return Err(unknown()),
        };
        let q = parse_field_args(inner, 1).ok_or_else(unknown)?;
        expect(q)?;
        return affine_group(q, frobenius);
    }
    if let Some(inner) = family.strip_prefix("AGL(").and_then(|f| f.strip_suffix(")-half")) {
        let q = parse_field_args(inner, 1).ok_or_else(unknown)?;
        expect(q)?;
        return affine_half(q);
    }
    let mut chars = family.chars();
    let head = chars.next().ok_or_else(unknown)?;
    let n: usize = chars.as_str().parse().map_err(|_| unknown())?;
    expect(n)?;
    match head {
        'S' => symmetric(n),
        'A' => alternating(n),
        'C' => cyclic(n),
        'D' => dihedral(n),
        _ => Err(unknown()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn catalog_basics() {
        assert_eq!(catalog("A6@6").unwrap().order(), 360);
        assert_eq!(catalog("S5@5").unwrap().order(), 120);
        assert_eq!(catalog("C7@7").unwrap().order(), 7);
        assert_eq!(catalog("D5@5").unwrap().order(), 10);
        assert_eq!(catalog("S1@1").unwrap().order(), 1);
        assert_eq!(catalog("A3@3").unwrap().order(), 3);
        assert!(matches!(catalog("A6@7"), Err(Error::UnknownGroup(_))));
        assert!(matches!(catalog("Q8@8"), Err(Error::UnknownGroup(_))));
        assert!(matches!(catalog("M12@12"), Err(Error::UnknownGroup(_))));
        assert!(matches!(catalog("PSL(2,6)@7"), Err(Error::UnsupportedField(6))));
    }

    #[test]
    fn mathieu_groups() {
        let m11 = catalog("M11@11").unwrap();
        assert_eq!(m11.order(), 7920);
        // 11*10*9*8: sharply 4-transitive
        assert_eq!(m11.transitivity_degree(), 4);
        let m11_12 = catalog("M11@12").unwrap();
        assert_eq!(m11_12.order(), 7920);
        assert_eq!(m11_12.transitivity_degree(), 3);
    }

    #[test]
    fn affine_orders() {
        for q in [3usize, 4, 5, 7, 8, 9, 16, 25, 27, 32] {
            let e = crate::field::prime_power(q).unwrap().1;
            assert_eq!(affine_group(q, false).unwrap().order(), q * (q - 1), "AGL(1,{q})");
            assert_eq!(affine_group(q, true).unwrap().order(), q * (q - 1) * e, "AΓL(1,{q})");
        }
        let agl5 = catalog("AGL(1,5)@5").unwrap();
        assert_eq!(agl5.order(), 20);
        assert_eq!(agl5.transitivity_degree(), 2);
        assert_eq!(catalog("AGL(1,7)@7").unwrap().order(), 42);
        assert_eq!(catalog("AΓL(1,8)@8").unwrap().order(), 168);
        assert_eq!(catalog("AGammaL(1,8)@8").unwrap().order(), 168);
        assert_eq!(catalog("AGL(1,7)-half@7").unwrap().order(), 21);
        assert!(catalog("AGL(1,8)-half@8").is_err());
    }

    #[test]
    fn projective_orders() {
        for q in [2usize, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            let base = q * (q * q - 1);
            let e = crate::field::prime_power(q).unwrap().1;
            let psl = projective_group(q, Projective::Psl).unwrap();
            assert_eq!(psl.order(), base / gcd(2, q - 1), "PSL(2,{q})");
            assert_eq!(projective_group(q, Projective::Pgl).unwrap().order(), base, "PGL(2,{q})");
            assert_eq!(projective_group(q, Projective::PSigmaL).unwrap().order(), base / gcd(2, q - 1) * e);
            assert_eq!(projective_group(q, Projective::PGammaL).unwrap().order(), base * e);
            assert!(psl.is_k_transitive(2));
            assert_eq!(psl.is_k_transitive(3), q % 2 == 0, "PSL(2,{q}) 3-transitivity");
            assert!(projective_group(q, Projective::Pgl).unwrap().is_k_transitive(3));
        }
    }

    #[test]
    fn named_projective_examples() {
        let pgl5 = catalog("PGL(2,5)@6").unwrap();
        assert_eq!((pgl5.order(), pgl5.degree()), (120, 6));
        let psl7 = catalog("PSL(2,7)@8").unwrap();
        assert_eq!((psl7.order(), psl7.degree()), (168, 8));
        assert!(psl7.is_k_homogeneous(3));
        assert!(!psl7.is_k_transitive(3));
        assert_eq!(catalog("PΓL(2,8)@9").unwrap().order(), 1512);
        assert_eq!(catalog("PGammaL(2,8)@9").unwrap().order(), 1512);
    }
}
