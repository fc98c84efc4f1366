//! Strong factorizability `S = EG` and the rank-k equivalence harness.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::monoid::{TransMonoid, DEFAULT_MONOID_LIMIT};
use crate::perm::{Permutation, Transformation};
use crate::transversal::{has_ordered_kut_with, Strategy, UtConfig, UtWitness, DEFAULT_EXHAUSTIVE_THRESHOLD};

/// Degree bound for sweeps over all rank-k maps.
pub const MAX_SWEEP_DEGREE: usize = 7;

/// `element = idempotent · unit`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub element: Transformation,
    pub idempotent: Transformation,
    pub unit: Permutation,
}

impl Factorization {
    /// Re-checks `a = e·g`, `e² = e` and `a = a·(g⁻¹e)·a`.
    pub fn verify(&self) -> bool {
        let g = self.unit.as_transformation();
        let g_inv = self.unit.inverse().as_transformation();
        let a = &self.element;
        let e = &self.idempotent;
        e.then(&g) == *a && e.is_idempotent() && a.then(&g_inv).then(e).then(a) == *a
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e={},g={}", self.idempotent, self.unit)
    }
}

/// The permutations in `m`.
pub fn units(m: &TransMonoid) -> PermGroup {
    let perms = m.elements().iter().filter_map(Transformation::to_permutation).collect();
    PermGroup::from_closed_elements(m.degree(), perms)
}

/// Index of the first `g` with `a·g` idempotent. That holds exactly when
/// `g` sends each image point `x` back into the kernel class over `x`.
fn first_unit(a: &Transformation, units: &[Permutation]) -> Option<usize> {
    let image = a.image();
    units.iter().position(|g| image.iter().all(|&x| a.apply(g.apply(x)) == x))
}

/// Factorization of `a` scanning `units` in order.
pub fn eg_witness_over(units: &[Permutation], a: &Transformation) -> Option<Factorization> {
    let g = &units[first_unit(a, units)?];
    Some(Factorization { element: a.clone(), idempotent: a.then(&g.as_transformation()), unit: g.inverse() })
}

pub fn eg_witness(m: &TransMonoid, a: &Transformation) -> Result<Option<Factorization>> {
    if !m.contains(a) {
        return Err(Error::NotInMonoid);
    }
    Ok(eg_witness_over(units(m).elements(), a))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorVerdict {
    pub holds: bool,
    /// Least-index element with no factorization.
    pub witness: Option<Transformation>,
}

/// `m = E·G` with `G` the group of units of `m`.
pub fn is_strongly_factorizable(m: &TransMonoid) -> FactorVerdict {
    is_factorizable_over(m, &units(m))
}

/// `m = E·G` for a given group `G` contained in `m`.
pub fn is_factorizable_over(m: &TransMonoid, group: &PermGroup) -> FactorVerdict {
    let bad = m.elements().iter().find(|a| first_unit(a, group.elements()).is_none()).cloned();
    FactorVerdict { holds: bad.is_none(), witness: bad }
}

fn sweep_generators(group: &PermGroup) -> Vec<Permutation> {
    if group.generators().len() <= 16 {
        group.generators().to_vec()
    } else {
        group.small_generators()
    }
}

/// `⟨G, t⟩`.
pub fn generate_with_group(group: &PermGroup, t: &Transformation, limit: usize) -> Result<TransMonoid> {
    if t.degree() != group.degree() {
        return Err(Error::DegreeMismatch { left: group.degree(), right: t.degree() });
    }
    let mut gens: Vec<Transformation> = sweep_generators(group).iter().map(Permutation::as_transformation).collect();
    gens.push(t.clone());
    TransMonoid::froidure_pin(group.degree(), &gens, limit)
}

fn decode(mut code: u64, n: usize) -> Box<[u8]> {
    (0..n)
        .map(|_| {
            let x = (code % n as u64) as u8;
            code /= n as u64;
            x
        })
        .collect()
}

fn encode(images: &[u8], n: usize) -> u64 {
    images.iter().rev().fold(0, |acc, &x| acc * n as u64 + x as u64)
}

/// One map per `G×G` orbit on rank-`k` maps under `t ↦ g·t·h`; `⟨G,t⟩`
/// depends only on the orbit. Each representative is the least code.
pub fn rank_k_representatives(group: &PermGroup, k: usize) -> Result<Vec<Transformation>> {
    let n = group.degree();
    if n > MAX_SWEEP_DEGREE {
        return Err(Error::UnsupportedDegree(n));
    }
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("k = {k} outside 1..={n}")));
    }
    let gens: Vec<Transformation> = sweep_generators(group).iter().map(Permutation::as_transformation).collect();
    let total = (n as u64).pow(n as u32);
    let mut visited = vec![false; total as usize];
    let mut reps = Vec::new();
    let mut frontier = Vec::new();
    for code in 0..total {
        if visited[code as usize] {
            continue;
        }
        let t = Transformation::from_bytes(decode(code, n));
        if t.rank() != k {
            continue;
        }
        visited[code as usize] = true;
        frontier.push(t.clone());
        reps.push(t);
        while let Some(x) = frontier.pop() {
            for s in &gens {
                for y in [s.then(&x), x.then(s)] {
                    let c = encode(y.bytes(), n) as usize;
                    if !visited[c] {
                        visited[c] = true;
                        frontier.push(y);
                    }
                }
            }
        }
    }
    Ok(reps)
}

/// All rank-`k` maps, unreduced.
pub fn rank_k_maps(n: usize, k: usize) -> Result<Vec<Transformation>> {
    if n > MAX_SWEEP_DEGREE {
        return Err(Error::UnsupportedDegree(n));
    }
    Ok((0..(n as u64).pow(n as u32))
        .map(|c| Transformation::from_bytes(decode(c, n)))
        .filter(|t| t.rank() == k)
        .collect())
}

/// A uniformly random kernel with `k` classes and random distinct images.
pub fn random_rank_k(n: usize, k: usize, rng: &mut impl Rng) -> Transformation {
    let class_of = loop {
        let c: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
        if (0..k).all(|i| c.contains(&i)) {
            break c;
        }
    };
    let mut points: Vec<usize> = (0..n).collect();
    points.shuffle(rng);
    Transformation::new(class_of.iter().map(|&c| points[c]).collect()).expect("images in range")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepMode {
    All,
    Sample { seed: u64, count: usize },
}

impl fmt::Display for SweepMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SweepMode::All => f.write_str("all"),
            SweepMode::Sample { seed, count } => write!(f, "sample(seed={seed},count={count})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorRow {
    pub t: Transformation,
    pub factorizable: bool,
    /// The factorization of `t` when `⟨G,t⟩ = EG`, else an unfactorizable element.
    pub witness: String,
}

impl fmt::Display for FactorRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t={} factorizable={} witness={}", self.t, self.factorizable, self.witness)
    }
}

/// Decides whether `⟨G,t⟩ = EG` with `G` itself as the unit set.
pub fn factor_row(group: &PermGroup, t: &Transformation, limit: usize) -> Result<FactorRow> {
    let m = generate_with_group(group, t, limit)?;
    let verdict = is_factorizable_over(&m, group);
    let witness = match &verdict.witness {
        Some(bad) => bad.to_string(),
        None => eg_witness_over(group.elements(), t).expect("t factorizes").to_string(),
    };
    Ok(FactorRow { t: t.clone(), factorizable: verdict.holds, witness })
}

#[derive(Clone, Debug)]
pub struct EquivalenceReport {
    pub degree: usize,
    pub k: usize,
    pub mode: SweepMode,
    pub ordered_kut: bool,
    pub kut_witness: Option<UtWitness>,
    pub rows: Vec<FactorRow>,
    /// The map sending part `i` of the witness partition to tuple entry `i`.
    pub converse: Option<FactorRow>,
    pub consistent: bool,
}

impl fmt::Display for EquivalenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "degree={} k={} mode={} ordered_kut={}", self.degree, self.k, self.mode, self.ordered_kut)?;
        if let Some(w) = &self.kut_witness {
            writeln!(f, "kut_witness {w}")?;
        }
        for row in &self.rows {
            writeln!(f, "{row}")?;
        }
        if let Some(row) = &self.converse {
            writeln!(f, "converse {row}")?;
        }
        write!(f, "consistent={}", self.consistent)
    }
}

/// Map with `A_i t = {a_i}` for the witness tuple and partition.
pub fn converse_map(witness: &UtWitness) -> Transformation {
    let a = witness.tuple.entries();
    let images = witness.partition.colors().iter().map(|&c| a[c]).collect();
    Transformation::new(images).expect("tuple points in range")
}

/// Compares the ordered k-ut verdict of `G` with factorizability of
/// `⟨G,t⟩` over rank-`k` maps `t`.
pub fn check_equivalence_theorem(group: &PermGroup, k: usize, mode: SweepMode) -> Result<EquivalenceReport> {
    let n = group.degree();
    let fits = (k as u128).checked_pow(n as u32).is_some_and(|c| c <= DEFAULT_EXHAUSTIVE_THRESHOLD as u128);
    let strategy = if fits { Strategy::Exhaustive } else { Strategy::Csp };
    let verdict = has_ordered_kut_with(group, k, &UtConfig::new(strategy))?;

    let maps = match mode {
        SweepMode::All => rank_k_representatives(group, k)?,
        SweepMode::Sample { seed, count } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count).map(|_| random_rank_k(n, k, &mut rng)).collect()
        }
    };
    let rows = maps.par_iter().map(|t| factor_row(group, t, DEFAULT_MONOID_LIMIT)).collect::<Result<Vec<_>>>()?;

    let converse = match &verdict.witness {
        Some(w) => {
            let t = converse_map(w);
            Some(FactorRow { factorizable: eg_witness_over(group.elements(), &t).is_some(), witness: t.to_string(), t })
        }
        None => None,
    };
    let all_factorizable = rows.iter().all(|r| r.factorizable);
    let consistent = if verdict.holds {
        all_factorizable
    } else {
        converse.as_ref().is_some_and(|c| !c.factorizable) && (mode != SweepMode::All || !all_factorizable)
    };
    Ok(EquivalenceReport {
        degree: n,
        k,
        mode,
        ordered_kut: verdict.holds,
        kut_witness: verdict.witness,
        rows,
        converse,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{alternating, cyclic, symmetric};
    use std::collections::HashMap;

    fn tr(images: &[usize]) -> Transformation {
        Transformation::new(images.to_vec()).unwrap()
    }

    /// Oracle: literally try every unit and test idempotency of `a·g`.
    fn brute_factorizable(a: &Transformation, units: &[Permutation]) -> bool {
        units.iter().any(|g| a.compose(&g.as_transformation()).unwrap().is_idempotent())
    }

    #[test]
    fn units_of_full_monoid_are_symmetric() {
        let gens = [tr(&[1, 0, 2]), tr(&[1, 2, 0]), tr(&[0, 0, 2])];
        let m = TransMonoid::froidure_pin(3, &gens, 100).unwrap();
        assert_eq!(units(&m).order(), 6);
        assert!(is_strongly_factorizable(&m).holds);
        let chain = TransMonoid::froidure_pin(4, &[tr(&[1, 2, 3, 3])], 10).unwrap();
        assert_eq!(units(&chain).order(), 1);
    }

    #[test]
    fn trivial_factorizations() {
        let g = symmetric(4).unwrap();
        let e = tr(&[0, 0, 2, 3]);
        let m = generate_with_group(&g, &e, DEFAULT_MONOID_LIMIT).unwrap();
        let f = eg_witness(&m, &e).unwrap().unwrap();
        assert_eq!(f.idempotent, e);
        assert!(f.unit.is_identity());
        let p = Permutation::from_cycles(4, &[vec![0, 1, 2]]).unwrap();
        let f = eg_witness(&m, &p.as_transformation()).unwrap().unwrap();
        assert!(f.idempotent.is_permutation() && f.idempotent.is_idempotent());
        assert_eq!(f.unit, p);
        let chain = TransMonoid::froidure_pin(4, &[tr(&[1, 2, 3, 3])], 10).unwrap();
        assert_eq!(eg_witness(&chain, &tr(&[0, 0, 0, 0])), Err(Error::NotInMonoid));
    }

    #[test]
    fn fast_unit_test_matches_idempotent_oracle() {
        let g = alternating(4).unwrap();
        for t in rank_k_maps(4, 2).unwrap().into_iter().step_by(7) {
            let m = generate_with_group(&g, &t, DEFAULT_MONOID_LIMIT).unwrap();
            let u = units(&m);
            for a in m.elements() {
                let fast = eg_witness_over(u.elements(), a);
                assert_eq!(fast.is_some(), brute_factorizable(a, u.elements()));
                if let Some(f) = fast {
                    assert!(f.verify());
                }
            }
        }
    }

    #[test]
    fn group_with_rank_one_map() {
        let g = symmetric(3).unwrap();
        let m = generate_with_group(&g, &tr(&[0, 0, 0]), DEFAULT_MONOID_LIMIT).unwrap();
        // oracle: S_3 plus the three constants
        assert_eq!(m.len(), 9);
        let trivial = PermGroup::trivial(3);
        let m = generate_with_group(&trivial, &tr(&[0, 0, 2]), 10).unwrap();
        assert_eq!(m.len(), 2);
    }

    #[test]
    fn c4_has_unfactorizable_rank_two_extension() {
        let g = cyclic(4).unwrap();
        let bad = rank_k_maps(4, 2)
            .unwrap()
            .into_iter()
            .find(|t| !factor_row(&g, t, DEFAULT_MONOID_LIMIT).unwrap().factorizable)
            .expect("some rank-2 map fails");
        let m = generate_with_group(&g, &bad, DEFAULT_MONOID_LIMIT).unwrap();
        let v = is_strongly_factorizable(&m);
        assert!(!v.holds);
        assert!(!brute_factorizable(v.witness.as_ref().unwrap(), units(&m).elements()));
    }

    #[test]
    fn double_coset_reduction_matches_unreduced_sweep() {
        for g in [cyclic(4).unwrap(), alternating(4).unwrap(), crate::constructions::dihedral(4).unwrap()] {
            for k in 1..=4 {
                let reps = rank_k_representatives(&g, k).unwrap();
                let all = rank_k_maps(4, k).unwrap();
                let verdict: HashMap<Transformation, bool> = all
                    .iter()
                    .map(|t| (t.clone(), factor_row(&g, t, DEFAULT_MONOID_LIMIT).unwrap().factorizable))
                    .collect();
                // every map is g·r·h for a unique representative, with the same verdict
                let mut covered = 0;
                for r in &reps {
                    let mut orbit = std::collections::HashSet::new();
                    for a in g.elements() {
                        for b in g.elements() {
                            orbit.insert(a.as_transformation().then(r).then(&b.as_transformation()));
                        }
                    }
                    assert!(orbit.iter().all(|t| verdict[t] == verdict[r]));
                    covered += orbit.len();
                }
                assert_eq!(covered, all.len());
                let reduced = reps.iter().all(|r| verdict[r]);
                assert_eq!(reduced, verdict.values().all(|&v| v));
            }
        }
    }

    #[test]
    fn equivalence_on_small_groups() {
        let s5 = check_equivalence_theorem(&symmetric(5).unwrap(), 2, SweepMode::All).unwrap();
        assert!(s5.ordered_kut && s5.consistent && s5.rows.iter().all(|r| r.factorizable));
        let a4 = check_equivalence_theorem(&alternating(4).unwrap(), 3, SweepMode::All).unwrap();
        assert!(a4.ordered_kut && a4.consistent);
        let c4 = check_equivalence_theorem(&cyclic(4).unwrap(), 2, SweepMode::All).unwrap();
        assert!(!c4.ordered_kut && c4.consistent);
        assert!(!c4.converse.as_ref().unwrap().factorizable);
        let sampled =
            check_equivalence_theorem(&cyclic(5).unwrap(), 2, SweepMode::Sample { seed: 3, count: 20 }).unwrap();
        assert_eq!(sampled.rows.len(), 20);
        assert!(sampled.consistent);
    }

    #[test]
    fn row_format() {
        let g = symmetric(3).unwrap();
        let row = factor_row(&g, &tr(&[0, 0, 2]), 100).unwrap();
        assert_eq!(row.to_string(), "t=[1,1,3] factorizable=true witness=e=[1,1,3],g=()");
    }
}
