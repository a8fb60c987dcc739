//! Binary relations and self-maps on a finite carrier.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::space::Point;

/// Outcome of a universally quantified check, carrying a counterexample when
/// it fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<W> {
    Holds,
    Fails(W),
}

impl<W> Verdict<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(w) => Some(w),
        }
    }
}

/// A set of ordered pairs over `0..size`, stored as an adjacency matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteRelation {
    size: usize,
    matrix: Vec<bool>,
}

impl fmt::Debug for FiniteRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

impl FiniteRelation {
    pub fn empty(size: usize) -> Self {
        Self {
            size,
            matrix: vec![false; size * size],
        }
    }

    pub fn universal(size: usize) -> Self {
        Self {
            size,
            matrix: vec![true; size * size],
        }
    }

    pub fn diagonal(size: usize) -> Self {
        let mut r = Self::empty(size);
        for x in 0..size {
            r.insert(x, x);
        }
        r
    }

    pub fn from_pairs<I>(size: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Point, Point)>,
    {
        let mut r = Self::empty(size);
        for (x, y) in pairs {
            for p in [x, y] {
                if p >= size {
                    return Err(Error::PointOutOfRange { index: p, size });
                }
            }
            r.insert(x, y);
        }
        Ok(r)
    }

    /// Relation whose pairs are the set bits of `bits` in row-major order.
    pub fn from_bits(size: usize, bits: u64) -> Self {
        debug_assert!(size * size <= 64);
        let matrix = (0..size * size).map(|i| bits >> i & 1 == 1).collect();
        Self { size, matrix }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn insert(&mut self, x: Point, y: Point) {
        self.matrix[x * self.size + y] = true;
    }

    #[inline]
    pub fn contains(&self, x: Point, y: Point) -> bool {
        self.matrix[x * self.size + y]
    }

    /// `[x, y]`: related in at least one direction.
    #[inline]
    pub fn contains_either(&self, x: Point, y: Point) -> bool {
        self.contains(x, y) || self.contains(y, x)
    }

    /// Pairs in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.size;
        self.matrix
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| (i / n, i % n))
    }

    pub fn len(&self) -> usize {
        self.matrix.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.matrix.iter().any(|&b| b)
    }

    pub fn is_universal(&self) -> bool {
        self.matrix.iter().all(|&b| b)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.size == other.size
            && self
                .matrix
                .iter()
                .zip(&other.matrix)
                .all(|(&a, &b)| !a || b)
    }

    pub fn successors(&self, x: Point) -> impl Iterator<Item = Point> + '_ {
        (0..self.size).filter(move |&y| self.contains(x, y))
    }

    /// `R ∪ R⁻¹`.
    pub fn symmetrize(&self) -> Self {
        let mut out = self.clone();
        for (x, y) in self.pairs() {
            out.insert(y, x);
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs().all(|(x, y)| self.contains(y, x))
    }

    /// `R|_D`: the pairs with both endpoints in `subset`.
    pub fn restrict(&self, subset: &[Point]) -> Self {
        let mut member = vec![false; self.size];
        for &p in subset {
            member[p] = true;
        }
        let mut out = Self::empty(self.size);
        for (x, y) in self.pairs() {
            if member[x] && member[y] {
                out.insert(x, y);
            }
        }
        out
    }
}

/// Free-function form of [`FiniteRelation::symmetrize`].
pub fn symmetrize(r: &FiniteRelation) -> FiniteRelation {
    r.symmetrize()
}

/// A total function on the carrier.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SelfMap {
    image: Vec<Point>,
}

impl SelfMap {
    pub fn new(image: Vec<Point>) -> Result<Self> {
        let size = image.len();
        if let Some(&bad) = image.iter().find(|&&p| p >= size) {
            return Err(Error::PointOutOfRange { index: bad, size });
        }
        Ok(Self { image })
    }

    pub fn identity(size: usize) -> Self {
        Self {
            image: (0..size).collect(),
        }
    }

    pub fn constant(size: usize, value: Point) -> Result<Self> {
        Self::new(vec![value; size])
    }

    pub fn size(&self) -> usize {
        self.image.len()
    }

    #[inline]
    pub fn apply(&self, x: Point) -> Point {
        self.image[x]
    }

    pub fn as_slice(&self) -> &[Point] {
        &self.image
    }

    /// `f(X)`, sorted and deduplicated.
    pub fn image_set(&self) -> Vec<Point> {
        let mut seen = vec![false; self.size()];
        for &p in &self.image {
            seen[p] = true;
        }
        (0..self.size()).filter(|&p| seen[p]).collect()
    }
}

/// A chain `z_0, …, z_l` with `l >= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path {
    nodes: Vec<Point>,
}

impl Path {
    pub fn new(nodes: Vec<Point>) -> Option<Self> {
        (nodes.len() >= 2).then_some(Self { nodes })
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn length(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn start(&self) -> Point {
        self.nodes[0]
    }

    pub fn end(&self) -> Point {
        *self.nodes.last().expect("non-empty path")
    }
}

/// Whether `[x, y] ∈ R` for every `x, y ∈ subset`, diagonal included.
pub fn is_complete(r: &FiniteRelation, subset: &[Point]) -> Verdict<(Point, Point)> {
    for (i, &x) in subset.iter().enumerate() {
        for &y in &subset[i..] {
            if !r.contains_either(x, y) {
                return Verdict::Fails((x, y));
            }
        }
    }
    Verdict::Holds
}

/// Whether `(x, y) ∈ R` implies `(f x, f y) ∈ R`. The witness is the pair and
/// its unrelated image.
pub fn is_f_closed(r: &FiniteRelation, f: &SelfMap) -> Verdict<((Point, Point), (Point, Point))> {
    for (x, y) in r.pairs() {
        let (fx, fy) = (f.apply(x), f.apply(y));
        if !r.contains(fx, fy) {
            return Verdict::Fails(((x, y), (fx, fy)));
        }
    }
    Verdict::Holds
}

/// Whether every pair of `subset` has a common `R`-successor somewhere in the
/// carrier.
///
/// Distinct pairs are examined before the diagonal ones.
pub fn is_directed(r: &FiniteRelation, subset: &[Point]) -> Verdict<(Point, Point)> {
    let distinct = subset
        .iter()
        .enumerate()
        .flat_map(|(i, &x)| subset[i + 1..].iter().map(move |&y| (x, y)));
    let diagonal = subset.iter().map(|&x| (x, x));
    for (x, y) in distinct.chain(diagonal) {
        if common_successor(r, x, y).is_none() {
            return Verdict::Fails((x, y));
        }
    }
    Verdict::Holds
}

/// Smallest `z` with `(x, z), (y, z) ∈ R`.
pub fn common_successor(r: &FiniteRelation, x: Point, y: Point) -> Option<Point> {
    (0..r.size()).find(|&z| r.contains(x, z) && r.contains(y, z))
}

/// Shortest path of length at least one from `x` to `y` following pairs of
/// `r`. Ties go to the intermediate node that comes first in carrier order.
pub fn find_path(r: &FiniteRelation, x: Point, y: Point) -> Option<Path> {
    let n = r.size();
    let mut parent: Vec<Option<Point>> = vec![None; n];
    let mut queue = VecDeque::new();
    let mut seen = vec![false; n];
    // A closed path from x to itself must leave x first, so x stays unseen
    // in that case.
    if x != y {
        seen[x] = true;
    }
    let expand = |from: Point,
                  queue: &mut VecDeque<Point>,
                  seen: &mut Vec<bool>,
                  parent: &mut Vec<Option<Point>>|
     -> bool {
        for z in r.successors(from) {
            if !seen[z] {
                seen[z] = true;
                parent[z] = Some(from);
                if z == y {
                    return true;
                }
                queue.push_back(z);
            }
        }
        false
    };
    let mut found = expand(x, &mut queue, &mut seen, &mut parent);
    while !found {
        let Some(u) = queue.pop_front() else { break };
        found = expand(u, &mut queue, &mut seen, &mut parent);
    }
    if !found {
        return None;
    }
    let mut nodes = vec![y];
    let mut cur = parent[y].expect("reached node has a parent");
    while cur != x {
        nodes.push(cur);
        cur = parent[cur].expect("reached node has a parent");
    }
    nodes.push(x);
    nodes.reverse();
    Path::new(nodes)
}

/// Whether every consecutive pair of `seq` lies in `r`.
pub fn is_preserving(r: &FiniteRelation, seq: &[Point]) -> bool {
    seq.windows(2).all(|w| r.contains(w[0], w[1]))
}
