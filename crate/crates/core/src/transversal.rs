//! Deciders for the ordered and unordered k-universal transversal
//! properties.
//!
//! A group has ordered k-ut when, for every ordered tuple of k distinct
//! points and every ordered partition into k nonempty parts, some group
//! element sends the i-th point into the i-th part. Partitions are encoded
//! as surjective colorings `color_of: point -> part`. The question is
//! decided one tuple orbit at a time: the property fails exactly when some
//! coloring avoids every tuple in some orbit.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{for_each_distinct_tuple, from_mask, PermGroup};
use crate::perm::{KTuple, Point};

/// Default ceiling on `k^n` for the exhaustive strategy.
pub const DEFAULT_EXHAUSTIVE_THRESHOLD: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Exhaustive,
    Csp,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Exhaustive => "exhaustive",
            Strategy::Csp => "csp",
        })
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Strategy::Exhaustive),
            "csp" => Ok(Strategy::Csp),
            other => Err(Error::InvalidArgument(format!("unknown strategy `{other}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct UtConfig {
    pub strategy: Strategy,
    pub exhaustive_threshold: u64,
    /// Node budget per orbit for the csp strategy; `None` searches to completion.
    pub node_budget: Option<u64>,
}

impl UtConfig {
    pub fn new(strategy: Strategy) -> Self {
        Self { strategy, exhaustive_threshold: DEFAULT_EXHAUSTIVE_THRESHOLD, node_budget: None }
    }
}

/// An ordered partition into `k` nonempty parts, as a surjective coloring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderedPartition {
    color_of: Vec<usize>,
    k: usize,
}

impl OrderedPartition {
    pub fn new(color_of: Vec<usize>, k: usize) -> Result<Self> {
        let mut hit = vec![false; k];
        for &c in &color_of {
            if c >= k {
                return Err(Error::InvalidArgument(format!("part index {c} outside 0..{k}")));
            }
            hit[c] = true;
        }
        if let Some(empty) = hit.iter().position(|h| !h) {
            return Err(Error::InvalidArgument(format!("part {} is empty", empty + 1)));
        }
        Ok(Self { color_of, k })
    }

    pub fn from_parts(n: usize, parts: &[Vec<Point>]) -> Result<Self> {
        let mut color_of = vec![usize::MAX; n];
        for (i, part) in parts.iter().enumerate() {
            for &x in part {
                if x >= n || color_of[x] != usize::MAX {
                    return Err(Error::InvalidArgument(format!("parts do not partition 1..={n}")));
                }
                color_of[x] = i;
            }
        }
        if color_of.contains(&usize::MAX) {
            return Err(Error::InvalidArgument(format!("parts do not cover 1..={n}")));
        }
        Self::new(color_of, parts.len())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn degree(&self) -> usize {
        self.color_of.len()
    }

    pub fn color_of(&self, x: Point) -> usize {
        self.color_of[x]
    }

    pub fn colors(&self) -> &[usize] {
        &self.color_of
    }

    pub fn parts(&self) -> Vec<Vec<Point>> {
        let mut parts = vec![Vec::new(); self.k];
        for (x, &c) in self.color_of.iter().enumerate() {
            parts[c].push(x);
        }
        parts
    }
}

impl fmt::Display for OrderedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.parts().iter().map(|p| p.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(",")).collect();
        write!(f, "[{}]", parts.join("|"))
    }
}

/// True iff the i-th tuple entry lies in the i-th part, for every i.
pub fn is_section(tuple: &KTuple, partition: &OrderedPartition) -> Result<bool> {
    if tuple.len() != partition.k() {
        return Err(Error::InvalidArgument(format!(
            "tuple of length {} against a {}-partition",
            tuple.len(),
            partition.k()
        )));
    }
    if let Some(&x) = tuple.entries().iter().find(|&&x| x >= partition.degree()) {
        return Err(Error::PointOutOfRange { point: x, degree: partition.degree() });
    }
    Ok(tuple.entries().iter().enumerate().all(|(i, &x)| partition.color_of(x) == i))
}

/// A failing tuple/partition pair: no group element maps the tuple into
/// section position (for the unordered property: onto a transversal).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UtWitness {
    pub tuple: KTuple,
    pub partition: OrderedPartition,
}

impl fmt::Display for UtWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "tuple={}; parts={}", self.tuple, self.partition)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorkCounters {
    pub orbits: usize,
    pub colorings: u64,
    pub nodes: u64,
}

#[derive(Clone, Debug)]
pub struct UtVerdict {
    pub holds: bool,
    pub witness: Option<UtWitness>,
    pub strategy: Strategy,
    pub work: WorkCounters,
}

impl UtVerdict {
    fn trivially_true(strategy: Strategy) -> Self {
        Self { holds: true, witness: None, strategy, work: WorkCounters::default() }
    }
}

fn check_arity(group: &PermGroup, k: usize) -> Result<()> {
    if k == 0 || k > group.degree() {
        return Err(Error::InvalidArgument(format!("k = {k} outside 1..={}", group.degree())));
    }
    Ok(())
}

/// One tuple family to cover: a representative and the flattened members.
struct Family {
    rep: KTuple,
    tuples: Vec<u8>,
}

pub fn has_ordered_kut(group: &PermGroup, k: usize, strategy: Strategy) -> Result<UtVerdict> {
    has_ordered_kut_with(group, k, &UtConfig::new(strategy))
}

pub fn has_ordered_kut_with(group: &PermGroup, k: usize, config: &UtConfig) -> Result<UtVerdict> {
    check_arity(group, k)?;
    if k == 1 {
        return Ok(UtVerdict::trivially_true(config.strategy));
    }
    check_feasible(group.degree(), k, config)?;
    let families = group
        .orbits(k)?
        .into_iter()
        .map(|orbit| Family {
            rep: orbit[0].clone(),
            tuples: orbit.iter().flat_map(|t| t.entries().iter().map(|&x| x as u8)).collect(),
        })
        .collect();
    decide(group, families, k, config)
}

pub fn has_kut(group: &PermGroup, k: usize, strategy: Strategy) -> Result<UtVerdict> {
    has_kut_with(group, k, &UtConfig::new(strategy))
}

/// Unordered variant. A coloring avoids a set orbit when no set in it is
/// rainbow, which is ordered avoidance of every ordering of every set.
pub fn has_kut_with(group: &PermGroup, k: usize, config: &UtConfig) -> Result<UtVerdict> {
    check_arity(group, k)?;
    if k == 1 {
        return Ok(UtVerdict::trivially_true(config.strategy));
    }
    check_feasible(group.degree(), k, config)?;
    let mut orderings: Vec<Vec<u8>> = Vec::new();
    for_each_distinct_tuple(k, k, |p| orderings.push(p.to_vec()));
    let families = group
        .set_orbits(k)?
        .into_iter()
        .map(|orbit| {
            let mut tuples = Vec::with_capacity(orbit.len() * orderings.len() * k);
            for &mask in &orbit {
                let members = from_mask(mask);
                for order in &orderings {
                    tuples.extend(order.iter().map(|&i| members[i as usize] as u8));
                }
            }
            Family { rep: KTuple::new_unchecked(from_mask(orbit[0])), tuples }
        })
        .collect();
    decide(group, families, k, config)
}

fn check_feasible(n: usize, k: usize, config: &UtConfig) -> Result<()> {
    if config.strategy == Strategy::Exhaustive {
        let colorings = (k as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if colorings > config.exhaustive_threshold as u128 {
            return Err(Error::ExhaustiveInfeasible { colorings, threshold: config.exhaustive_threshold });
        }
    }
    Ok(())
}

fn decide(group: &PermGroup, families: Vec<Family>, k: usize, config: &UtConfig) -> Result<UtVerdict> {
    let n = group.degree();
    let mut work = WorkCounters { orbits: families.len(), ..Default::default() };
    let found = match config.strategy {
        Strategy::Exhaustive => {
            let mut found = None;
            for (i, family) in families.iter().enumerate() {
                let (avoider, swept) = exhaustive_avoider(&family.tuples, k, n);
                work.colorings += swept;
                if let Some(colors) = avoider {
                    found = Some((i, colors));
                    break;
                }
            }
            found
        }
        Strategy::Csp => {
            // Pinning is sound for any G-invariant tuple set: with G
            // j-transitive, one point from each of the first j parts can be
            // moved to points 0..j.
            let pins = group.transitivity_degree().min(k);
            let outcomes: Vec<(SearchOutcome, u64)> = families
                .par_iter()
                .map(|f| {
                    let mut search = AvoidSearch::new(&f.tuples, k, n, config.node_budget);
                    let outcome = search.run(pins);
                    (outcome, search.nodes)
                })
                .collect();
            work.nodes = outcomes.iter().map(|(_, nodes)| nodes).sum();
            let mut found = None;
            for (i, (outcome, _)) in outcomes.into_iter().enumerate() {
                match outcome {
                    SearchOutcome::Found(colors) => {
                        found = Some((i, colors));
                        break;
                    }
                    SearchOutcome::BudgetExceeded => {
                        return Err(Error::BudgetExhausted(config.node_budget.unwrap_or(0)));
                    }
                    SearchOutcome::Exhausted => {}
                }
            }
            found
        }
    };
    let witness = found.map(|(i, colors)| UtWitness {
        tuple: families[i].rep.clone(),
        partition: OrderedPartition { color_of: colors.into_iter().map(usize::from).collect(), k },
    });
    Ok(UtVerdict { holds: witness.is_none(), witness, strategy: config.strategy, work })
}

/// First surjective coloring (in base-`k` index order, point 0 least
/// significant) avoiding every tuple, with the number of colorings swept.
fn exhaustive_avoider(tuples: &[u8], k: usize, n: usize) -> (Option<Vec<u8>>, u64) {
    let total = (k as u64).pow(n as u32);
    let decode = |mut index: u64| -> Vec<u8> {
        (0..n)
            .map(|_| {
                let c = (index % k as u64) as u8;
                index /= k as u64;
                c
            })
            .collect()
    };
    let hit = (0..total).into_par_iter().find_first(|&index| {
        let colors = decode(index);
        let mut seen = 0u64;
        for &c in &colors {
            seen |= 1 << c;
        }
        if seen.count_ones() as usize != k {
            return false;
        }
        !tuples.chunks_exact(k).any(|t| t.iter().enumerate().all(|(i, &x)| colors[x as usize] as usize == i))
    });
    match hit {
        Some(index) => (Some(decode(index)), index + 1),
        None => (None, total),
    }
}

/// Backtracking search for a surjective `k`-coloring of `n` points in which
/// no orbit tuple sits in section position. `None` when none exists.
pub fn find_avoiding_partition(orbit: &[KTuple], k: usize, n: usize) -> Result<Option<OrderedPartition>> {
    if orbit.is_empty() {
        return Err(Error::InvalidArgument("empty tuple orbit".into()));
    }
    if k == 0 || k > n || k > 64 {
        return Err(Error::InvalidArgument(format!("k = {k} outside 1..={}", n.min(64))));
    }
    let mut tuples = Vec::with_capacity(orbit.len() * k);
    for t in orbit {
        if t.len() != k {
            return Err(Error::InvalidArgument(format!("tuple {t} does not have length {k}")));
        }
        if let Some(&x) = t.entries().iter().find(|&&x| x >= n) {
            return Err(Error::PointOutOfRange { point: x, degree: n });
        }
        tuples.extend(t.entries().iter().map(|&x| x as u8));
    }
    let mut search = AvoidSearch::new(&tuples, k, n, None);
    Ok(match search.run(0) {
        SearchOutcome::Found(colors) => {
            Some(OrderedPartition { color_of: colors.into_iter().map(usize::from).collect(), k })
        }
        _ => None,
    })
}

/// Re-checks an ordered witness against every group element.
pub fn verify_ordered_witness(group: &PermGroup, witness: &UtWitness) -> bool {
    group.elements().iter().all(|g| !is_section(&witness.tuple.image_under(g), &witness.partition).unwrap_or(true))
}

/// Re-checks an unordered witness: no image of the set is a transversal.
pub fn verify_unordered_witness(group: &PermGroup, witness: &UtWitness) -> bool {
    let k = witness.partition.k();
    group.elements().iter().all(|g| {
        let mut seen = 0u64;
        for &x in witness.tuple.entries() {
            seen |= 1 << witness.partition.color_of(g.apply(x));
        }
        seen.count_ones() as usize != k
    })
}

enum SearchOutcome {
    Found(Vec<u8>),
    Exhausted,
    BudgetExceeded,
}

const UNSET: u8 = u8::MAX;

/// Forward-checking backtracking. Per tuple it tracks how many entries
/// already carry their own position as color (`sat`) and how many carry a
/// different color (`dead`). A live tuple with `k - 1` satisfied entries
/// forbids the last entry's position color on the remaining point.
struct AvoidSearch<'a> {
    n: usize,
    k: usize,
    tuples: &'a [u8],
    incidence: Vec<Vec<(u32, u8)>>,
    color: Vec<u8>,
    domain: Vec<u64>,
    sat: Vec<u8>,
    dead: Vec<u8>,
    used: Vec<u32>,
    trail: Vec<(u8, u64)>,
    nodes: u64,
    budget: Option<u64>,
}

impl<'a> AvoidSearch<'a> {
    fn new(tuples: &'a [u8], k: usize, n: usize, budget: Option<u64>) -> Self {
        let count = tuples.len() / k;
        let mut incidence = vec![Vec::new(); n];
        for t in 0..count {
            for pos in 0..k {
                incidence[tuples[t * k + pos] as usize].push((t as u32, pos as u8));
            }
        }
        let full = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
        Self {
            n,
            k,
            tuples,
            incidence,
            color: vec![UNSET; n],
            domain: vec![full; n],
            sat: vec![0; count],
            dead: vec![0; count],
            used: vec![0; k],
            trail: Vec::new(),
            nodes: 0,
            budget,
        }
    }

    fn run(&mut self, pins: usize) -> SearchOutcome {
        for p in 0..pins {
            if self.domain[p] >> p & 1 == 0 || !self.assign(p, p as u8) {
                return SearchOutcome::Exhausted;
            }
        }
        match self.search(pins) {
            Step::Found => SearchOutcome::Found(self.color.clone()),
            Step::Dead => SearchOutcome::Exhausted,
            Step::Budget => SearchOutcome::BudgetExceeded,
        }
    }

    fn assign(&mut self, p: usize, c: u8) -> bool {
        self.color[p] = c;
        self.used[c as usize] += 1;
        let k = self.k as u8;
        let mut ok = true;
        for i in 0..self.incidence[p].len() {
            let (t, pos) = self.incidence[p][i];
            let t = t as usize;
            if pos == c {
                self.sat[t] += 1;
            } else {
                self.dead[t] += 1;
                continue;
            }
            if self.dead[t] != 0 {
                continue;
            }
            if self.sat[t] == k {
                ok = false;
            } else if self.sat[t] == k - 1 {
                let base = t * self.k;
                for j in 0..self.k {
                    let x = self.tuples[base + j] as usize;
                    if self.color[x] == UNSET {
                        let old = self.domain[x];
                        if old >> j & 1 == 1 {
                            self.trail.push((x as u8, old));
                            self.domain[x] = old & !(1 << j);
                            if self.domain[x] == 0 {
                                ok = false;
                            }
                        }
                        break;
                    }
                }
            }
        }
        ok
    }

    fn unassign(&mut self, p: usize, c: u8, mark: usize) {
        while self.trail.len() > mark {
            let (x, old) = self.trail.pop().unwrap();
            self.domain[x as usize] = old;
        }
        for &(t, pos) in &self.incidence[p] {
            if pos == c {
                self.sat[t as usize] -= 1;
            } else {
                self.dead[t as usize] -= 1;
            }
        }
        self.used[c as usize] -= 1;
        self.color[p] = UNSET;
    }

    fn surjection_possible(&self) -> bool {
        let mut reachable = 0u64;
        for (c, &u) in self.used.iter().enumerate() {
            if u > 0 {
                reachable |= 1 << c;
            }
        }
        for p in 0..self.n {
            if self.color[p] == UNSET {
                reachable |= self.domain[p];
            }
        }
        reachable.count_ones() as usize == self.k
    }

    /// Smallest domain first, then most tuple incidences, then lowest index.
    fn choose(&self) -> usize {
        let mut best = usize::MAX;
        let mut key = (u32::MAX, usize::MAX);
        for p in 0..self.n {
            if self.color[p] != UNSET {
                continue;
            }
            let candidate = (self.domain[p].count_ones(), usize::MAX - self.incidence[p].len());
            if candidate < key {
                key = candidate;
                best = p;
            }
        }
        best
    }

    fn search(&mut self, assigned: usize) -> Step {
        self.nodes += 1;
        if self.budget.is_some_and(|b| self.nodes > b) {
            return Step::Budget;
        }
        if !self.surjection_possible() {
            return Step::Dead;
        }
        if assigned == self.n {
            return Step::Found;
        }
        let p = self.choose();
        let mut options = self.domain[p];
        while options != 0 {
            let c = options.trailing_zeros() as u8;
            options &= options - 1;
            let mark = self.trail.len();
            if self.assign(p, c) {
                match self.search(assigned + 1) {
                    Step::Dead => {}
                    other => return other,
                }
            }
            self.unassign(p, c, mark);
        }
        Step::Dead
    }
}

enum Step {
    Found,
    Dead,
    Budget,
}
