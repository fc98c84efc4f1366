//! Fully materialized permutation groups and the orbit-style predicates
//! built on them: transitivity, homogeneity, blocks, primitivity,
//! k-primitivity, generous transitivity and orbitals.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::perm::{lcm, KTuple, Permutation, Point, MAX_DEGREE};

/// Default element bound for group enumeration.
pub const DEFAULT_ELEMENT_BOUND: usize = 2_000_000;

/// Upper limit on the number of tuples or sets an orbit sweep will index.
const SWEEP_LIMIT: u128 = 50_000_000;

#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, u32>,
}

impl PermGroup {
    /// Breadth-first closure of `generators` under right multiplication.
    pub fn enumerate(degree: usize, generators: &[Permutation], bound: usize) -> Result<Self> {
        if degree == 0 || degree > MAX_DEGREE {
            return Err(Error::UnsupportedDegree(degree));
        }
        if bound == 0 {
            return Err(Error::InvalidArgument("element bound must be positive".into()));
        }
        for g in generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch { left: degree, right: g.degree() });
            }
        }
        let identity = Permutation::identity(degree);
        let mut elements = vec![identity.clone()];
        let mut index = HashMap::new();
        index.insert(identity, 0u32);
        let mut next = 0;
        while next < elements.len() {
            for g in generators {
                let h = elements[next].then(g);
                if !index.contains_key(&h) {
                    if elements.len() == bound {
                        return Err(Error::TooLarge { bound, reached: elements.len() + 1 });
                    }
                    index.insert(h.clone(), elements.len() as u32);
                    elements.push(h);
                }
            }
            next += 1;
        }
        Ok(Self { degree, generators: generators.to_vec(), elements, index })
    }

    pub fn generate(degree: usize, generators: &[Permutation]) -> Result<Self> {
        Self::enumerate(degree, generators, DEFAULT_ELEMENT_BOUND)
    }

    /// Wraps an element list already known to be a group. The generator
    /// list is the element list itself.
    pub(crate) fn from_closed_elements(degree: usize, elements: Vec<Permutation>) -> Self {
        let index = elements.iter().enumerate().map(|(i, g)| (g.clone(), i as u32)).collect();
        Self { degree, generators: elements.clone(), elements, index }
    }

    pub fn trivial(degree: usize) -> Self {
        Self::from_closed_elements(degree, vec![Permutation::identity(degree)])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// Elements in enumeration order; the identity comes first.
    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.index.contains_key(g)
    }

    pub fn index_of(&self, g: &Permutation) -> Option<usize> {
        self.index.get(g).map(|&i| i as usize)
    }

    /// Greedy small generating set: scan elements, keep any not already generated.
    pub fn small_generators(&self) -> Vec<Permutation> {
        let mut gens: Vec<Permutation> = Vec::new();
        let mut span: HashSet<Permutation> = HashSet::from([Permutation::identity(self.degree)]);
        for g in &self.elements {
            if span.contains(g) {
                continue;
            }
            gens.push(g.clone());
            let mut frontier: Vec<Permutation> = span.iter().cloned().collect();
            while let Some(x) = frontier.pop() {
                for s in &gens {
                    let y = x.then(s);
                    if span.insert(y.clone()) {
                        frontier.push(y);
                    }
                }
            }
            if span.len() == self.order() {
                break;
            }
        }
        gens
    }

    /// Same element set, generated by `small_generators`.
    pub fn with_small_generators(&self) -> Self {
        let mut out = self.clone();
        out.generators = self.small_generators();
        out
    }

    pub fn exponent(&self) -> usize {
        self.elements.iter().fold(1, |acc, g| lcm(acc, g.order()))
    }

    pub fn point_orbit(&self, x: Point) -> Vec<Point> {
        let mut seen = vec![false; self.degree];
        let mut orbit = vec![x];
        seen[x] = true;
        let mut i = 0;
        while i < orbit.len() {
            for g in &self.generators {
                let y = g.apply(orbit[i]);
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        orbit
    }

    /// Orbits on points, ordered by least element.
    pub fn point_orbits(&self) -> Vec<Vec<Point>> {
        let mut done = vec![false; self.degree];
        let mut out = Vec::new();
        for x in 0..self.degree {
            if !done[x] {
                let orbit = self.point_orbit(x);
                for &y in &orbit {
                    done[y] = true;
                }
                out.push(orbit);
            }
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.point_orbit(0).len() == self.degree
    }

    /// Orbit of one ordered tuple of distinct points.
    pub fn tuple_orbit(&self, tuple: &KTuple) -> Vec<KTuple> {
        let mut seen: HashSet<KTuple> = HashSet::from([tuple.clone()]);
        let mut orbit = vec![tuple.clone()];
        let mut i = 0;
        while i < orbit.len() {
            for g in &self.generators {
                let image = orbit[i].image_under(g);
                if seen.insert(image.clone()) {
                    orbit.push(image);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        orbit
    }

    /// Orbits on ordered `k`-tuples of distinct points. Each orbit is sorted
    /// and orbits are ordered by their least tuple.
    pub fn orbits(&self, k: usize) -> Result<Vec<Vec<KTuple>>> {
        let n = self.degree;
        if k == 0 || k > n {
            return Err(Error::InvalidArgument(format!("tuple arity {k} outside 1..={n}")));
        }
        let count = falling_factorial(n, k);
        if count > SWEEP_LIMIT {
            return Err(Error::TooLarge { bound: SWEEP_LIMIT as usize, reached: count as usize });
        }
        let encode = |t: &[u8]| t.iter().fold(0u64, |acc, &x| acc * n as u64 + x as u64);
        let mut orbit_of: HashMap<u64, u32> = HashMap::with_capacity(count as usize);
        let mut orbits: Vec<Vec<KTuple>> = Vec::new();
        let gens: Vec<&[u8]> = self.generators.iter().map(|g| g.bytes()).collect();
        for_each_distinct_tuple(n, k, |tuple| {
            if orbit_of.contains_key(&encode(tuple)) {
                return;
            }
            let id = orbits.len() as u32;
            orbit_of.insert(encode(tuple), id);
            let mut members: Vec<Vec<u8>> = vec![tuple.to_vec()];
            let mut i = 0;
            while i < members.len() {
                for g in &gens {
                    let image: Vec<u8> = members[i].iter().map(|&x| g[x as usize]).collect();
                    let code = encode(&image);
                    if let std::collections::hash_map::Entry::Vacant(e) = orbit_of.entry(code) {
                        e.insert(id);
                        members.push(image);
                    }
                }
                i += 1;
            }
            let mut orbit: Vec<KTuple> = members
                .into_iter()
                .map(|m| KTuple::new_unchecked(m.into_iter().map(|x| x as usize).collect()))
                .collect();
            orbit.sort_unstable();
            orbits.push(orbit);
        });
        Ok(orbits)
    }

    /// Orbits on `k`-subsets, as bitmasks; ordered by least member set.
    pub fn set_orbits(&self, k: usize) -> Result<Vec<Vec<u128>>> {
        let n = self.degree;
        if k > n {
            return Err(Error::InvalidArgument(format!("subset size {k} exceeds degree {n}")));
        }
        let count = binomial(n, k);
        if count > SWEEP_LIMIT {
            return Err(Error::TooLarge { bound: SWEEP_LIMIT as usize, reached: count as usize });
        }
        let mut seen: HashSet<u128> = HashSet::new();
        let mut out = Vec::new();
        for_each_subset(n, k, |mask| {
            if seen.contains(&mask) {
                return;
            }
            let orbit = self.set_orbit(mask);
            seen.extend(orbit.iter().copied());
            out.push(orbit);
        });
        Ok(out)
    }

    /// Orbit of a point set given as a bitmask.
    pub fn set_orbit(&self, mask: u128) -> Vec<u128> {
        let mut seen: HashSet<u128> = HashSet::from([mask]);
        let mut orbit = vec![mask];
        let mut i = 0;
        while i < orbit.len() {
            for g in &self.generators {
                let image = map_set(g, orbit[i]);
                if seen.insert(image) {
                    orbit.push(image);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        orbit
    }

    /// Pointwise stabilizer of `points`, by filtering the element list.
    pub fn stabilizer(&self, points: &[Point]) -> Result<PermGroup> {
        self.check_points(points)?;
        let elements = self.elements.iter().filter(|g| points.iter().all(|&x| g.apply(x) == x)).cloned().collect();
        Ok(Self::from_closed_elements(self.degree, elements))
    }

    pub fn setwise_stabilizer(&self, set: &[Point]) -> Result<PermGroup> {
        self.check_points(set)?;
        let mask = to_mask(set);
        let elements = self.elements.iter().filter(|g| map_set(g, mask) == mask).cloned().collect();
        Ok(Self::from_closed_elements(self.degree, elements))
    }

    fn check_points(&self, points: &[Point]) -> Result<()> {
        let mut seen = 0u128;
        for &x in points {
            if x >= self.degree {
                return Err(Error::PointOutOfRange { point: x, degree: self.degree });
            }
            if seen >> x & 1 == 1 {
                return Err(Error::InvalidArgument(format!("point {} repeated", x + 1)));
            }
            seen |= 1 << x;
        }
        Ok(())
    }

    /// The action induced on an invariant set of points, relabeled so that
    /// `points[i]` becomes `i`.
    pub fn restrict(&self, points: &[Point]) -> Result<PermGroup> {
        self.check_points(points)?;
        if points.is_empty() {
            return Err(Error::InvalidArgument("cannot restrict to an empty set".into()));
        }
        let mut label = vec![usize::MAX; self.degree];
        for (i, &x) in points.iter().enumerate() {
            label[x] = i;
        }
        let mut seen = HashSet::new();
        let mut elements = Vec::new();
        for g in &self.elements {
            let images: Vec<Point> = points.iter().map(|&x| label[g.apply(x)]).collect();
            if images.contains(&usize::MAX) {
                return Err(Error::InvalidArgument("point set is not invariant".into()));
            }
            let h = Permutation::new(images)?;
            if seen.insert(h.clone()) {
                elements.push(h);
            }
        }
        Ok(Self::from_closed_elements(points.len(), elements))
    }

    /// Finest block system in which `a` and `b` share a block.
    pub fn minimal_block_system(&self, a: Point, b: Point) -> BlockSystem {
        let mut uf = UnionFind::new(self.degree);
        let mut queue = VecDeque::new();
        if uf.union(a, b) {
            queue.push_back((a, b));
        }
        while let Some((x, y)) = queue.pop_front() {
            for g in &self.generators {
                let (gx, gy) = (g.apply(x), g.apply(y));
                let (rx, ry) = (uf.find(gx), uf.find(gy));
                if rx != ry {
                    uf.union(rx, ry);
                    queue.push_back((rx, ry));
                }
            }
        }
        BlockSystem::from_labels((0..self.degree).map(|x| uf.find(x)).collect())
    }

    /// Primitivity decision. Intransitive groups are reported imprimitive
    /// with their orbit partition as the witness.
    pub fn is_primitive(&self) -> Primitivity {
        let orbits = self.point_orbits();
        if orbits.len() > 1 {
            let mut labels = vec![0; self.degree];
            for (i, orbit) in orbits.iter().enumerate() {
                for &x in orbit {
                    labels[x] = i;
                }
            }
            return Primitivity { primitive: false, blocks: Some(BlockSystem::from_labels(labels)) };
        }
        for x in 1..self.degree {
            let system = self.minimal_block_system(0, x);
            if system.block_count > 1 {
                return Primitivity { primitive: false, blocks: Some(system) };
            }
        }
        Primitivity { primitive: true, blocks: None }
    }

    pub fn is_k_transitive(&self, k: usize) -> bool {
        let n = self.degree;
        if k == 0 {
            return true;
        }
        if k > n {
            return false;
        }
        if falling_factorial(n, k) > self.order() as u128 {
            return false;
        }
        let start = KTuple::new_unchecked((0..k).collect());
        self.tuple_orbit(&start).len() as u128 == falling_factorial(n, k)
    }

    pub fn is_k_homogeneous(&self, k: usize) -> bool {
        let n = self.degree;
        if k > n {
            return false;
        }
        if binomial(n, k) > self.order() as u128 {
            return false;
        }
        self.set_orbit(first_subset(k)).len() as u128 == binomial(n, k)
    }

    /// Largest `k` with the group `k`-transitive.
    pub fn transitivity_degree(&self) -> usize {
        let mut k = 0;
        while k < self.degree && self.is_k_transitive(k + 1) {
            k += 1;
        }
        k
    }

    /// Largest `k <= n/2` with the group `k`-homogeneous.
    pub fn homogeneity_degree(&self) -> usize {
        let transitivity = self.transitivity_degree();
        let mut k = 0;
        while k < self.degree / 2 && (k < transitivity || self.is_k_homogeneous(k + 1)) {
            k += 1;
        }
        k
    }

    /// `k`-transitive, with the stabilizer of `k-1` points primitive on the rest.
    pub fn is_k_primitive(&self, k: usize) -> Result<bool> {
        if k == 0 {
            return Err(Error::InvalidArgument("k-primitivity needs k >= 1".into()));
        }
        if !self.is_k_transitive(k) {
            return Ok(false);
        }
        let fixed: Vec<Point> = (0..k - 1).collect();
        let rest: Vec<Point> = (k - 1..self.degree).collect();
        let induced = self.stabilizer(&fixed)?.restrict(&rest)?;
        Ok(induced.is_primitive().primitive)
    }

    /// Every `(k+1)`-set has a setwise stabilizer inducing its full symmetric group.
    pub fn is_generously_k_transitive(&self, k: usize) -> Result<bool> {
        let n = self.degree;
        if k + 1 > n {
            return Err(Error::InvalidArgument(format!("generous {k}-transitivity needs degree > {k}")));
        }
        let full = (1..=k as u128 + 1).product::<u128>();
        for orbit in self.set_orbits(k + 1)? {
            let rep = from_mask(orbit[0]);
            let induced = self.setwise_stabilizer(&rep)?.restrict(&rep)?;
            if (induced.order() as u128) < full {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Orbits on ordered pairs of distinct points.
    pub fn orbitals(&self) -> Result<Vec<Orbital>> {
        if self.degree < 2 {
            return Ok(Vec::new());
        }
        Ok(self
            .orbits(2)?
            .into_iter()
            .map(|orbit| {
                let pairs: Vec<(Point, Point)> = orbit.iter().map(|t| (t.entries()[0], t.entries()[1])).collect();
                let set: HashSet<(Point, Point)> = pairs.iter().copied().collect();
                let self_paired = pairs.iter().all(|&(a, b)| set.contains(&(b, a)));
                Orbital { pairs, self_paired }
            })
            .collect())
    }

    /// Strong connectivity of the digraph on all points whose arcs form the orbital.
    pub fn orbital_strongly_connected(&self, orbital: &Orbital) -> bool {
        let n = self.degree;
        let mut forward = vec![Vec::new(); n];
        let mut backward = vec![Vec::new(); n];
        for &(a, b) in &orbital.pairs {
            forward[a].push(b);
            backward[b].push(a);
        }
        reaches_all(&forward) && reaches_all(&backward)
    }
}

fn reaches_all(adjacency: &[Vec<Point>]) -> bool {
    let mut seen = vec![false; adjacency.len()];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for &y in &adjacency[x] {
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count == adjacency.len()
}

/// Partition of the points into blocks of imprimitivity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSystem {
    pub block_of: Vec<usize>,
    pub block_count: usize,
}

impl BlockSystem {
    /// Relabels arbitrary class labels as `0..` in order of first appearance.
    fn from_labels(labels: Vec<usize>) -> Self {
        let mut rename = HashMap::new();
        let block_of: Vec<usize> = labels
            .iter()
            .map(|l| {
                let next = rename.len();
                *rename.entry(*l).or_insert(next)
            })
            .collect();
        Self { block_count: rename.len(), block_of }
    }

    pub fn blocks(&self) -> Vec<Vec<Point>> {
        let mut out = vec![Vec::new(); self.block_count];
        for (x, &b) in self.block_of.iter().enumerate() {
            out[b].push(x);
        }
        out
    }

    pub fn block_containing(&self, x: Point) -> Vec<Point> {
        self.blocks().swap_remove(self.block_of[x])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Primitivity {
    pub primitive: bool,
    pub blocks: Option<BlockSystem>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbital {
    pub pairs: Vec<(Point, Point)>,
    pub self_paired: bool,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

pub(crate) fn falling_factorial(n: usize, k: usize) -> u128 {
    (0..k).map(|i| (n - i) as u128).product()
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

pub(crate) fn to_mask(points: &[Point]) -> u128 {
    points.iter().fold(0, |m, &x| m | 1 << x)
}

pub(crate) fn from_mask(mask: u128) -> Vec<Point> {
    (0..128).filter(|&x| mask >> x & 1 == 1).collect()
}

fn first_subset(k: usize) -> u128 {
    if k == 0 {
        0
    } else {
        u128::MAX >> (128 - k)
    }
}

pub(crate) fn map_set(g: &Permutation, mut mask: u128) -> u128 {
    let mut out = 0;
    while mask != 0 {
        let x = mask.trailing_zeros() as usize;
        out |= 1 << g.apply(x);
        mask &= mask - 1;
    }
    out
}

/// Visits every `k`-subset of `0..n` in colex order.
pub(crate) fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(u128)) {
    if k == 0 {
        f(0);
        return;
    }
    let full = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    let mut mask = first_subset(k);
    loop {
        f(mask);
        // Gosper's hack
        let low = mask & mask.wrapping_neg();
        let ripple = mask.wrapping_add(low);
        if ripple == 0 {
            return;
        }
        mask = (((ripple ^ mask) >> 2) / low) | ripple;
        if mask & !full != 0 {
            return;
        }
    }
}

/// Visits every ordered tuple of `k` distinct points in lexicographic order.
pub(crate) fn for_each_distinct_tuple(n: usize, k: usize, mut f: impl FnMut(&[u8])) {
    fn go(n: usize, k: usize, used: &mut u128, prefix: &mut Vec<u8>, f: &mut impl FnMut(&[u8])) {
        if prefix.len() == k {
            f(prefix);
            return;
        }
        for x in 0..n {
            if *used >> x & 1 == 0 {
                *used |= 1 << x;
                prefix.push(x as u8);
                go(n, k, used, prefix, f);
                prefix.pop();
                *used &= !(1 << x);
            }
        }
    }
    go(n, k, &mut 0, &mut Vec::with_capacity(k), &mut f);
}
