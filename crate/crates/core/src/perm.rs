//! Permutations and transformations of `0..n`.
//!
//! Both act on the right: `x(ab) = (xa)b`, so `a.compose(&b)` applies `a`
//! first. Text forms are 1-based.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported degree. Sets of points are packed into a `u128`.
pub const MAX_DEGREE: usize = 128;

/// A point of `0..n`.
pub type Point = usize;

fn check_degree(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DEGREE {
        return Err(Error::UnsupportedDegree(n));
    }
    Ok(())
}

fn pack(images: &[usize]) -> Result<Box<[u8]>> {
    let n = images.len();
    check_degree(n)?;
    images
        .iter()
        .map(|&x| if x < n { Ok(x as u8) } else { Err(Error::PointOutOfRange { point: x, degree: n }) })
        .collect()
}

/// An arbitrary self-map of `0..n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transformation {
    images: Box<[u8]>,
}

impl Transformation {
    pub fn new(images: Vec<Point>) -> Result<Self> {
        Ok(Self { images: pack(&images)? })
    }

    pub(crate) fn from_bytes(images: Box<[u8]>) -> Self {
        debug_assert!(images.iter().all(|&x| (x as usize) < images.len()));
        Self { images }
    }

    pub fn identity(n: usize) -> Self {
        Self { images: (0..n).map(|x| x as u8).collect() }
    }

    pub fn constant(n: usize, value: Point) -> Self {
        assert!(value < n);
        Self { images: vec![value as u8; n].into_boxed_slice() }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, x: Point) -> Point {
        self.images[x] as usize
    }

    pub fn images(&self) -> Vec<Point> {
        self.images.iter().map(|&x| x as usize).collect()
    }

    pub(crate) fn bytes(&self) -> &[u8] {
        &self.images
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch { left: self.degree(), right: other.degree() });
        }
        Ok(self.then(other))
    }

    /// `self` followed by `other`; degrees must agree.
    #[inline]
    pub(crate) fn then(&self, other: &Self) -> Self {
        Self { images: self.images.iter().map(|&x| other.images[x as usize]).collect() }
    }

    pub fn pow(&self, m: usize) -> Self {
        let mut acc = Self::identity(self.degree());
        for _ in 0..m {
            acc = acc.then(self);
        }
        acc
    }

    pub fn is_idempotent(&self) -> bool {
        self.images.iter().all(|&y| self.images[y as usize] == y)
    }

    pub fn is_permutation(&self) -> bool {
        let mut seen = 0u128;
        for &y in self.images.iter() {
            seen |= 1 << y;
        }
        seen.count_ones() as usize == self.degree()
    }

    pub fn to_permutation(&self) -> Option<Permutation> {
        self.is_permutation().then(|| Permutation { images: self.images.clone() })
    }

    /// Sorted image set.
    pub fn image(&self) -> Vec<Point> {
        let mut mask = 0u128;
        for &y in self.images.iter() {
            mask |= 1 << y;
        }
        (0..self.degree()).filter(|&x| mask >> x & 1 == 1).collect()
    }

    pub fn rank(&self) -> usize {
        self.image().len()
    }

    /// Kernel classes, ordered by their least point.
    pub fn kernel(&self) -> Vec<Vec<Point>> {
        let mut slot = vec![usize::MAX; self.degree()];
        let mut classes: Vec<Vec<Point>> = Vec::new();
        for x in 0..self.degree() {
            let y = self.apply(x);
            if slot[y] == usize::MAX {
                slot[y] = classes.len();
                classes.push(Vec::new());
            }
            classes[slot[y]].push(x);
        }
        classes
    }

    /// The map sending every point of `classes[i]` to `images[i]`.
    pub fn from_kernel(n: usize, classes: &[Vec<Point>], images: &[Point]) -> Result<Self> {
        if classes.len() != images.len() {
            return Err(Error::InvalidArgument(format!(
                "{} kernel classes but {} images",
                classes.len(),
                images.len()
            )));
        }
        let mut out = vec![usize::MAX; n];
        for (class, &y) in classes.iter().zip(images) {
            for &x in class {
                if x >= n {
                    return Err(Error::PointOutOfRange { point: x, degree: n });
                }
                if out[x] != usize::MAX {
                    return Err(Error::InvalidArgument(format!("point {} lies in two classes", x + 1)));
                }
                out[x] = y;
            }
        }
        if let Some(x) = out.iter().position(|&y| y == usize::MAX) {
            return Err(Error::InvalidArgument(format!("point {} lies in no class", x + 1)));
        }
        Self::new(out)
    }
}

impl fmt::Display for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, &y) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", y as usize + 1)?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A bijection of `0..n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Box<[u8]>,
}

impl Permutation {
    pub fn new(images: Vec<Point>) -> Result<Self> {
        let t = Transformation::new(images)?;
        t.to_permutation().ok_or_else(|| Error::NotBijective(t.to_string()))
    }

    pub fn identity(n: usize) -> Self {
        Self { images: Transformation::identity(n).images }
    }

    /// Builds a permutation from 0-based disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<Point>]) -> Result<Self> {
        check_degree(n)?;
        let mut images: Vec<Point> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x >= n {
                    return Err(Error::PointOutOfRange { point: x, degree: n });
                }
                if touched[x] {
                    return Err(Error::InvalidArgument(format!("point {} repeated in cycles", x + 1)));
                }
                touched[x] = true;
                images[x] = cycle[(i + 1) % cycle.len()];
            }
        }
        Self::new(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, x: Point) -> Point {
        self.images[x] as usize
    }

    pub fn images(&self) -> Vec<Point> {
        self.images.iter().map(|&x| x as usize).collect()
    }

    pub(crate) fn bytes(&self) -> &[u8] {
        &self.images
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch { left: self.degree(), right: other.degree() });
        }
        Ok(self.then(other))
    }

    #[inline]
    pub(crate) fn then(&self, other: &Self) -> Self {
        Self { images: self.images.iter().map(|&x| other.images[x as usize]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.degree()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y as usize] = x as u8;
        }
        Self { images: inv.into_boxed_slice() }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(x, &y)| x == y as usize)
    }

    /// Disjoint cycles of length at least two, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<Point>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    /// Element order: lcm of cycle lengths.
    pub fn order(&self) -> usize {
        self.cycles().iter().fold(1, |acc, c| lcm(acc, c.len()))
    }

    pub fn as_transformation(&self) -> Transformation {
        Transformation { images: self.images.clone() }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for (i, x) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", x + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// An ordered tuple of distinct points.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct KTuple(Vec<Point>);

impl KTuple {
    pub fn new(entries: Vec<Point>, degree: usize) -> Result<Self> {
        let mut seen = 0u128;
        for &x in &entries {
            if x >= degree {
                return Err(Error::PointOutOfRange { point: x, degree });
            }
            if seen >> x & 1 == 1 {
                return Err(Error::InvalidArgument(format!("point {} repeated in tuple", x + 1)));
            }
            seen |= 1 << x;
        }
        Ok(Self(entries))
    }

    pub(crate) fn new_unchecked(entries: Vec<Point>) -> Self {
        Self(entries)
    }

    pub fn entries(&self) -> &[Point] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn image_under(&self, g: &Permutation) -> KTuple {
        KTuple(self.0.iter().map(|&x| g.apply(x)).collect())
    }
}

impl fmt::Display for KTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", x + 1)?;
        }
        write!(f, ")")
    }
}
