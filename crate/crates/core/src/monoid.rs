//! Transformation monoids by Froidure–Pin enumeration, Green's relations
//! and the regularity and square-root predicates.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{Transformation, MAX_DEGREE};

pub const DEFAULT_MONOID_LIMIT: usize = 2_000_000;

const NONE: u32 = u32::MAX;

/// A finitely generated monoid of transformations. Element 0 is the
/// identity; elements appear in short-lex order of their reduced words.
#[derive(Clone, Debug)]
pub struct TransMonoid {
    degree: usize,
    generators: Vec<Transformation>,
    elements: Vec<Transformation>,
    index: HashMap<Transformation, u32>,
    right: Vec<u32>,
    left: Vec<u32>,
    parent: Vec<u32>,
    last: Vec<u32>,
    green: OnceLock<GreenStructure>,
}

impl TransMonoid {
    pub fn froidure_pin(degree: usize, generators: &[Transformation], limit: usize) -> Result<Self> {
        if degree == 0 || degree > MAX_DEGREE {
            return Err(Error::UnsupportedDegree(degree));
        }
        if limit == 0 {
            return Err(Error::InvalidArgument("limit must be at least 1".into()));
        }
        for g in generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch { left: degree, right: g.degree() });
            }
        }
        let ng = generators.len();
        let identity = Transformation::identity(degree);
        let mut elements = vec![identity.clone()];
        let mut index = HashMap::from([(identity, 0u32)]);
        let mut parent = vec![NONE];
        let mut last = vec![NONE];
        let mut right = Vec::new();

        let mut i = 0;
        while i < elements.len() {
            for (gi, g) in generators.iter().enumerate() {
                let product = elements[i].then(g);
                let j = match index.get(&product) {
                    Some(&j) => j,
                    None => {
                        if elements.len() >= limit {
                            return Err(Error::TooLarge { bound: limit, reached: elements.len() + 1 });
                        }
                        let j = elements.len() as u32;
                        index.insert(product.clone(), j);
                        elements.push(product);
                        parent.push(i as u32);
                        last.push(gi as u32);
                        j
                    }
                };
                right.push(j);
            }
            i += 1;
        }

        // g·x = (g·prefix)·last, and prefixes precede their extensions.
        let mut left = vec![0u32; elements.len() * ng];
        left[..ng].copy_from_slice(&right[..ng]);
        for x in 1..elements.len() {
            let (p, l) = (parent[x] as usize, last[x] as usize);
            for gi in 0..ng {
                let gp = left[p * ng + gi] as usize;
                left[x * ng + gi] = right[gp * ng + l];
            }
        }

        Ok(Self {
            degree,
            generators: generators.to_vec(),
            elements,
            index,
            right,
            left,
            parent,
            last,
            green: OnceLock::new(),
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Transformation] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Transformation] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Transformation {
        &self.elements[i]
    }

    pub fn index_of(&self, t: &Transformation) -> Option<usize> {
        self.index.get(t).map(|&i| i as usize)
    }

    pub fn contains(&self, t: &Transformation) -> bool {
        self.index.contains_key(t)
    }

    fn require(&self, t: &Transformation) -> Result<usize> {
        self.index_of(t).ok_or(Error::NotInMonoid)
    }

    /// Index of `x·g_i`.
    pub fn right(&self, x: usize, generator: usize) -> usize {
        self.right[x * self.generators.len() + generator] as usize
    }

    /// Index of `g_i·x`.
    pub fn left(&self, x: usize, generator: usize) -> usize {
        self.left[x * self.generators.len() + generator] as usize
    }

    /// Short-lex least generator word for element `x`.
    pub fn word_of(&self, x: usize) -> Vec<usize> {
        let mut word = Vec::new();
        let mut y = x;
        while y != 0 {
            word.push(self.last[y] as usize);
            y = self.parent[y] as usize;
        }
        word.reverse();
        word
    }

    /// Index of `x·y`, traced through the right Cayley graph.
    pub fn product(&self, x: usize, y: usize) -> usize {
        self.word_of(y).into_iter().fold(x, |acc, g| self.right(acc, g))
    }

    pub fn is_idempotent(&self, x: usize) -> bool {
        self.elements[x].is_idempotent()
    }

    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.is_idempotent(x)).collect()
    }

    /// `(index, period)`: least `m ≥ 1` and `r ≥ 1` with `x^(m+r) = x^m`.
    pub fn cyclic_parameters(&self, x: usize) -> (usize, usize) {
        let mut seen = HashMap::new();
        let mut power = x;
        let mut m = 1;
        loop {
            if let Some(&first) = seen.get(&power) {
                return (first, m - first);
            }
            seen.insert(power, m);
            power = self.product(power, x);
            m += 1;
        }
    }

    /// Distinct powers `x, x², …` in order of exponent.
    pub fn powers(&self, x: usize) -> Vec<usize> {
        let (index, period) = self.cyclic_parameters(x);
        let mut out = Vec::with_capacity(index + period - 1);
        let mut power = x;
        for _ in 0..index + period - 1 {
            out.push(power);
            power = self.product(power, x);
        }
        out
    }

    pub fn green(&self) -> &GreenStructure {
        self.green.get_or_init(|| GreenStructure::compute(self))
    }

    pub fn is_r_related(&self, a: &Transformation, b: &Transformation) -> Result<bool> {
        let (a, b) = (self.require(a)?, self.require(b)?);
        Ok(self.green().r_class[a] == self.green().r_class[b])
    }

    pub fn is_l_related(&self, a: &Transformation, b: &Transformation) -> Result<bool> {
        let (a, b) = (self.require(a)?, self.require(b)?);
        Ok(self.green().l_class[a] == self.green().l_class[b])
    }

    pub fn is_h_related(&self, a: &Transformation, b: &Transformation) -> Result<bool> {
        let (a, b) = (self.require(a)?, self.require(b)?);
        Ok(self.green().h_class[a] == self.green().h_class[b])
    }

    pub fn is_j_related(&self, a: &Transformation, b: &Transformation) -> Result<bool> {
        let (a, b) = (self.require(a)?, self.require(b)?);
        Ok(self.green().j_class[a] == self.green().j_class[b])
    }

    pub fn is_regular(&self) -> Verdict {
        let green = self.green();
        let has = class_has_idempotent(self, &green.r_class, green.r_count);
        Verdict::first_element((0..self.len()).find(|&x| !has[green.r_class[x] as usize]))
    }

    pub fn is_completely_regular(&self) -> Verdict {
        let green = self.green();
        let has = class_has_idempotent(self, &green.h_class, green.h_count);
        Verdict::first_element((0..self.len()).find(|&x| !has[green.h_class[x] as usize]))
    }

    pub fn is_inverse(&self) -> Verdict {
        let regular = self.is_regular();
        if !regular.holds {
            return regular;
        }
        let idempotents = self.idempotents();
        for (i, &e) in idempotents.iter().enumerate() {
            for &f in &idempotents[i + 1..] {
                if self.product(e, f) != self.product(f, e) {
                    return Verdict::fail(Witness::Pair(e, f));
                }
            }
        }
        Verdict::pass()
    }

    pub fn is_clifford(&self) -> Verdict {
        let inverse = self.is_inverse();
        if !inverse.holds {
            return inverse;
        }
        self.is_completely_regular()
    }

    /// Every `a` lies in `S a² S`, i.e. `a J a²`.
    pub fn is_intra_regular(&self) -> Verdict {
        let j = &self.green().j_class;
        Verdict::first_element((0..self.len()).find(|&a| j[a] != j[self.product(a, a)]))
    }

    /// The squaring map is surjective.
    pub fn has_all_square_roots(&self) -> Verdict {
        let mut is_square = vec![false; self.len()];
        for x in 0..self.len() {
            is_square[self.product(x, x)] = true;
        }
        Verdict::first_element(is_square.iter().position(|s| !s))
    }

    /// Every `x` has a square root among its own powers.
    pub fn sqrt_in_cyclic_check(&self) -> Verdict {
        Verdict::first_element((0..self.len()).find(|&x| !self.powers(x).into_iter().any(|p| self.product(p, p) == x)))
    }

    /// Every H-class contains an idempotent and has odd size.
    pub fn is_union_of_odd_groups(&self) -> Verdict {
        let green = self.green();
        let has = class_has_idempotent(self, &green.h_class, green.h_count);
        let sizes = green.h_sizes();
        Verdict::first_element((0..self.len()).find(|&x| {
            let h = green.h_class[x] as usize;
            !has[h] || sizes[h].is_multiple_of(2)
        }))
    }

    /// `ab R ba` for all `a, b`.
    pub fn is_r_commutative(&self) -> Verdict {
        let r = &self.green().r_class;
        for a in 0..self.len() {
            for b in a + 1..self.len() {
                if r[self.product(a, b)] != r[self.product(b, a)] {
                    return Verdict::fail(Witness::Pair(a, b));
                }
            }
        }
        Verdict::pass()
    }

    /// Renders a witness with 1-based image lists.
    pub fn describe(&self, witness: &Witness) -> String {
        match *witness {
            Witness::Element(x) => self.elements[x].to_string(),
            Witness::Pair(a, b) => format!("{},{}", self.elements[a], self.elements[b]),
        }
    }
}

fn class_has_idempotent(m: &TransMonoid, class: &[u32], count: usize) -> Vec<bool> {
    let mut has = vec![false; count];
    for e in m.idempotents() {
        has[class[e] as usize] = true;
    }
    has
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Witness {
    Element(usize),
    Pair(usize, usize),
}

/// A boolean verdict; failures carry the least-index witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    fn pass() -> Self {
        Self { holds: true, witness: None }
    }

    fn fail(witness: Witness) -> Self {
        Self { holds: false, witness: Some(witness) }
    }

    fn first_element(bad: Option<usize>) -> Self {
        bad.map_or_else(Self::pass, |x| Self::fail(Witness::Element(x)))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.holds)
    }
}

/// Class ids per element for R, L, H and J. Ids are numbered by least member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreenStructure {
    pub r_class: Vec<u32>,
    pub l_class: Vec<u32>,
    pub h_class: Vec<u32>,
    pub j_class: Vec<u32>,
    pub r_count: usize,
    pub l_count: usize,
    pub h_count: usize,
    pub j_count: usize,
}

impl GreenStructure {
    fn compute(m: &TransMonoid) -> Self {
        let n = m.len();
        let ng = m.generators.len();
        let (r_class, r_count) = strongly_connected(n, ng, |x, i| m.right[x * ng + i] as usize);
        let (l_class, l_count) = strongly_connected(n, ng, |x, i| m.left[x * ng + i] as usize);
        let (j_class, j_count) = strongly_connected(n, 2 * ng, |x, i| {
            if i < ng {
                m.right[x * ng + i] as usize
            } else {
                m.left[x * ng + i - ng] as usize
            }
        });
        let mut pairs = HashMap::new();
        let h_class: Vec<u32> = (0..n)
            .map(|x| {
                let next = pairs.len() as u32;
                *pairs.entry((r_class[x], l_class[x])).or_insert(next)
            })
            .collect();
        let h_count = pairs.len();
        Self { r_class, l_class, h_class, j_class, r_count, l_count, h_count, j_count }
    }

    pub fn h_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.h_count];
        for &h in &self.h_class {
            sizes[h as usize] += 1;
        }
        sizes
    }
}

/// Iterative Tarjan over a graph with `width` out-edges per vertex.
fn strongly_connected(n: usize, width: usize, edge: impl Fn(usize, usize) -> usize) -> (Vec<u32>, usize) {
    let mut order = vec![NONE; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut raw = vec![NONE; n];
    let mut counter = 0u32;
    let mut components = 0u32;
    let mut calls: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if order[root] != NONE {
            continue;
        }
        order[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        calls.push((root, 0));
        while let Some(&mut (v, ref mut next)) = calls.last_mut() {
            if *next < width {
                let w = edge(v, *next);
                *next += 1;
                if order[w] == NONE {
                    order[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    calls.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(order[w]);
                }
            } else {
                calls.pop();
                if let Some(&(p, _)) = calls.last() {
                    low[p] = low[p].min(low[v]);
                }
                if low[v] == order[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        raw[w] = components;
                        if w == v {
                            break;
                        }
                    }
                    components += 1;
                }
            }
        }
    }
    let mut renumber = vec![NONE; components as usize];
    let mut next = 0;
    let class = raw
        .iter()
        .map(|&c| {
            if renumber[c as usize] == NONE {
                renumber[c as usize] = next;
                next += 1;
            }
            renumber[c as usize]
        })
        .collect();
    (class, components as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

    fn tr(images: &[usize]) -> Transformation {
        Transformation::new(images.to_vec()).unwrap()
    }

    fn cyc(n: usize, cycles: &[Vec<usize>]) -> Transformation {
        Permutation::from_cycles(n, cycles).unwrap().as_transformation()
    }

    fn t3() -> TransMonoid {
        let gens = [cyc(3, &[vec![0, 1]]), cyc(3, &[vec![0, 1, 2]]), tr(&[0, 0, 2])];
        TransMonoid::froidure_pin(3, &gens, DEFAULT_MONOID_LIMIT).unwrap()
    }

    /// t = [2,3,4,4] in 1-based image notation.
    fn nilpotent_chain() -> TransMonoid {
        TransMonoid::froidure_pin(4, &[tr(&[1, 2, 3, 3])], 100).unwrap()
    }

    #[test]
    fn trivial_monoid() {
        let m = TransMonoid::froidure_pin(3, &[], 10).unwrap();
        assert_eq!(m.len(), 1);
        let m = TransMonoid::froidure_pin(3, &[Transformation::identity(3)], 10).unwrap();
        assert_eq!(m.len(), 1);
    }

    #[test]
    fn full_transformation_monoid_of_degree_3() {
        let m = t3();
        assert_eq!(m.len(), 27);
        // idempotents fix their image pointwise: sum over images I of |I|^(n-|I|)
        let oracle = (0..27usize)
            .filter(|&code| {
                let f = [code % 3, code / 3 % 3, code / 9];
                (0..3).all(|x| f[f[x]] == f[x])
            })
            .count();
        assert_eq!(m.idempotents().len(), oracle);
        assert_eq!(oracle, 10);
        assert!(m.is_regular().holds);
        assert!(!m.is_inverse().holds);
    }

    #[test]
    fn limit_is_reported() {
        let gens = [cyc(3, &[vec![0, 1]]), cyc(3, &[vec![0, 1, 2]]), tr(&[0, 0, 2])];
        assert!(matches!(TransMonoid::froidure_pin(3, &gens, 20), Err(Error::TooLarge { bound: 20, .. })));
    }

    #[test]
    fn cayley_tables_agree_with_composition() {
        let m = t3();
        for x in 0..m.len() {
            for (gi, g) in m.generators().iter().enumerate() {
                assert_eq!(m.element(m.right(x, gi)), &m.element(x).compose(g).unwrap());
                assert_eq!(m.element(m.left(x, gi)), &g.compose(m.element(x)).unwrap());
            }
            for y in 0..m.len() {
                assert_eq!(m.element(m.product(x, y)), &m.element(x).compose(m.element(y)).unwrap());
            }
            let word = m.word_of(x);
            let rebuilt =
                word.iter().fold(Transformation::identity(3), |acc, &g| acc.compose(&m.generators()[g]).unwrap());
            assert_eq!(&rebuilt, m.element(x));
        }
    }

    #[test]
    fn green_relations_match_definitions() {
        let m = t3();
        let n = m.len();
        let green = m.green();
        for a in 0..n {
            for b in 0..n {
                let reach_r = |x: usize, y: usize| (0..n).any(|u| m.product(x, u) == y);
                let reach_l = |x: usize, y: usize| (0..n).any(|u| m.product(u, x) == y);
                let r = reach_r(a, b) && reach_r(b, a);
                let l = reach_l(a, b) && reach_l(b, a);
                assert_eq!(green.r_class[a] == green.r_class[b], r);
                assert_eq!(green.l_class[a] == green.l_class[b], l);
                assert_eq!(green.h_class[a] == green.h_class[b], r && l);
            }
        }
        // in T_n, J classes are exactly the ranks
        for a in 0..n {
            for b in 0..n {
                let same_rank = m.element(a).rank() == m.element(b).rank();
                assert_eq!(green.j_class[a] == green.j_class[b], same_rank);
            }
        }
    }

    #[test]
    fn non_regular_chain() {
        let m = nilpotent_chain();
        assert_eq!(m.len(), 4);
        let t = m.index_of(&tr(&[1, 2, 3, 3])).unwrap();
        // exhaustive: no u with t·u·t = t
        assert!((0..m.len()).all(|u| m.product(m.product(t, u), t) != t));
        assert_eq!(m.is_regular(), Verdict::fail(Witness::Element(t)));
        assert!(!m.is_intra_regular().holds);
        assert!(!m.has_all_square_roots().holds);
        assert!(!m.sqrt_in_cyclic_check().holds);
        assert!(!m.is_union_of_odd_groups().holds);
        assert_eq!(m.cyclic_parameters(t), (3, 1));
    }

    #[test]
    fn groups_pass_the_regularity_family() {
        let m = TransMonoid::froidure_pin(4, &[cyc(4, &[vec![0, 1, 2, 3]]), cyc(4, &[vec![0, 1]])], 100).unwrap();
        assert_eq!(m.len(), 24);
        assert_eq!(m.idempotents(), vec![0]);
        for v in [m.is_regular(), m.is_completely_regular(), m.is_inverse(), m.is_clifford(), m.is_intra_regular()] {
            assert!(v.holds);
        }
    }

    #[test]
    fn square_roots_in_cyclic_groups() {
        let c3 = TransMonoid::froidure_pin(3, &[cyc(3, &[vec![0, 1, 2]])], 10).unwrap();
        assert!(c3.has_all_square_roots().holds);
        assert!(c3.sqrt_in_cyclic_check().holds);
        assert!(c3.is_union_of_odd_groups().holds);
        let g = c3.index_of(&cyc(3, &[vec![0, 1, 2]])).unwrap();
        let g2 = c3.product(g, g);
        assert_eq!(c3.product(g2, g2), g);

        let c2 = TransMonoid::froidure_pin(2, &[cyc(2, &[vec![0, 1]])], 10).unwrap();
        assert!(!c2.has_all_square_roots().holds);
        assert!(!c2.sqrt_in_cyclic_check().holds);
        assert!(!c2.is_union_of_odd_groups().holds);
    }

    #[test]
    fn zero_band_with_identity_is_intra_regular() {
        // constant maps satisfy c·d = d under the right action
        let m = TransMonoid::froidure_pin(3, &[Transformation::constant(3, 0), Transformation::constant(3, 1)], 10)
            .unwrap();
        assert_eq!(m.len(), 3);
        assert!(m.is_intra_regular().holds);
        assert!(m.is_regular().holds);
        assert!(m.is_completely_regular().holds);
    }

    #[test]
    fn commutative_monoid_is_r_commutative() {
        let m = TransMonoid::froidure_pin(5, &[cyc(5, &[vec![0, 1, 2]]), tr(&[0, 1, 2, 3, 3])], 100).unwrap();
        assert!(m.is_r_commutative().holds);
    }

    #[test]
    fn membership_errors() {
        let m = nilpotent_chain();
        assert_eq!(m.is_r_related(&tr(&[0, 0, 0, 0]), &tr(&[1, 2, 3, 3])), Err(Error::NotInMonoid));
        let t = tr(&[1, 2, 3, 3]);
        assert!(m.is_r_related(&t, &t).unwrap());
    }
}
