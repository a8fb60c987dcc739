//! Sequence-quantified properties decided on finite carriers.
//!
//! An infinite `R`-preserving sequence over a finite carrier eventually stays
//! inside, and visits infinitely often, a set `S` whose induced subdigraph of
//! `R` is strongly connected (a singleton needs a self-loop). Conversely
//! every such `S` is the tail of some `R`-preserving sequence: walk a closed
//! tour of `S` forever. The limit behaviour of a sequence depends only on its
//! tail, so:
//!
//! * the sequence is Cauchy iff `d` is constant (say `L`) on `S × S`;
//! * it converges to `x` iff `d(s, x) = d(x, x)` for every `s ∈ S`.
//!
//! Completeness, self-closedness and the continuity notions are all decided
//! by enumerating these tail sets. Note that a Cauchy tail `S` inside `Y`
//! always contains an admissible limit (any `s ∈ S` has `d(t, s) = d(s, s) =
//! L`), so [`check_r_completeness`] never fails on a finite carrier; it is
//! still evaluated literally.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::relation::{FiniteRelation, SelfMap, Verdict};
use crate::space::{FiniteDistanceSpace, Point};

/// Largest point set whose subsets are enumerated.
pub const MAX_SUBSET_POINTS: usize = 20;

/// Largest carrier the walk simulator accepts.
pub const MAX_WALK_POINTS: usize = 64;

/// Points an infinite sequence visits infinitely often.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailSet {
    pub members: Vec<Point>,
    /// `L` when `d` is constant `L` on `members × members`.
    pub cauchy_value: Option<Rational>,
}

/// A tail set, and where relevant a limit point, refuting a property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub tail: TailSet,
    pub point: Option<Point>,
}

pub type PropertyReport = Verdict<Counterexample>;

type Mask = u64;

fn bits(mut mask: Mask) -> impl Iterator<Item = Point> {
    std::iter::from_fn(move || {
        (mask != 0).then(|| {
            let i = mask.trailing_zeros() as Point;
            mask &= mask - 1;
            i
        })
    })
}

fn mask_of(points: &[Point]) -> Mask {
    points.iter().fold(0, |m, &p| m | 1 << p)
}

fn check_size(what: &'static str, size: usize, max: usize) -> Result<()> {
    if size > max {
        Err(Error::TooLarge { what, size, max })
    } else {
        Ok(())
    }
}

/// Successor and predecessor bitmasks of a relation.
struct Digraph {
    succ: Vec<Mask>,
    pred: Vec<Mask>,
}

impl Digraph {
    fn new(r: &FiniteRelation) -> Self {
        let n = r.size();
        let mut succ = vec![0; n];
        let mut pred = vec![0; n];
        for (x, y) in r.pairs() {
            succ[x] |= 1 << y;
            pred[y] |= 1 << x;
        }
        Self { succ, pred }
    }

    fn reach(adj: &[Mask], start: Point, within: Mask) -> Mask {
        let mut seen: Mask = 1 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0;
            for p in bits(frontier) {
                next |= adj[p];
            }
            next &= within & !seen;
            seen |= next;
            frontier = next;
        }
        seen
    }

    /// Whether the subdigraph induced on `set` is a realizable tail.
    fn is_tail(&self, set: Mask) -> bool {
        let first = set.trailing_zeros() as Point;
        if set & (set - 1) == 0 {
            return self.succ[first] >> first & 1 == 1;
        }
        Self::reach(&self.succ, first, set) == set && Self::reach(&self.pred, first, set) == set
    }

    /// Strongly connected component of `x` inside `within`.
    fn component(&self, x: Point, within: Mask) -> Mask {
        Self::reach(&self.succ, x, within) & Self::reach(&self.pred, x, within)
    }
}

fn cauchy_value(space: &FiniteDistanceSpace, set: Mask) -> Option<Rational> {
    let first = set.trailing_zeros() as Point;
    let constant = bits(set).all(|s| bits(set).all(|t| space.same_dist(s, t, first, first)));
    constant.then(|| space.dist(first, first).clone())
}

fn limits_mask(space: &FiniteDistanceSpace, set: Mask, candidates: Mask) -> Mask {
    bits(candidates)
        .filter(|&x| bits(set).all(|s| space.same_dist(s, x, x, x)))
        .fold(0, |m, x| m | 1 << x)
}

fn tail_masks(graph: &Digraph, domain: &[Point]) -> Vec<Mask> {
    let k = domain.len();
    (1u64..1 << k)
        .map(|sel| bits(sel).fold(0, |m, i| m | 1 << domain[i]))
        .filter(|&set| graph.is_tail(set))
        .collect()
}

fn sorted(points: &[Point]) -> Vec<Point> {
    let mut v = points.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

fn tail_set(space: &FiniteDistanceSpace, set: Mask) -> TailSet {
    TailSet {
        members: bits(set).collect(),
        cauchy_value: cauchy_value(space, set),
    }
}

/// All `x` with `d(s, x) = d(x, x)` for every `s ∈ tail`: the limits of any
/// sequence whose tail set is `tail`.
pub fn limits_of_tail(space: &FiniteDistanceSpace, tail: &[Point]) -> Vec<Point> {
    space
        .points()
        .filter(|&x| tail.iter().all(|&s| space.same_dist(s, x, x, x)))
        .collect()
}

/// Every subset of `y` that is the tail set of some `R`-preserving sequence
/// in `y`, annotated with its Cauchy value.
pub fn realizable_tail_sets(
    space: &FiniteDistanceSpace,
    r: &FiniteRelation,
    y: &[Point],
) -> Result<Vec<TailSet>> {
    let y = sorted(y);
    check_size("subspace", y.len(), MAX_SUBSET_POINTS)?;
    let graph = Digraph::new(r);
    Ok(tail_masks(&graph, &y)
        .into_iter()
        .map(|set| tail_set(space, set))
        .collect())
}

/// Every `R`-preserving Cauchy sequence in `y` has a limit `z ∈ y` with
/// `lim d(x_n, x_m) = d(z, z) = lim d(x_n, z)`.
pub fn check_r_completeness(
    space: &FiniteDistanceSpace,
    r: &FiniteRelation,
    y: &[Point],
) -> Result<PropertyReport> {
    let y = sorted(y);
    check_size("subspace", y.len(), MAX_SUBSET_POINTS)?;
    let graph = Digraph::new(r);
    Ok(r_completeness_with(space, &graph, &y))
}

fn r_completeness_with(
    space: &FiniteDistanceSpace,
    graph: &Digraph,
    y: &[Point],
) -> PropertyReport {
    let ymask = mask_of(y);
    for set in tail_masks(graph, y) {
        let first = set.trailing_zeros() as Point;
        if cauchy_value(space, set).is_none() {
            continue;
        }
        // d(z, z) = L and d(s, z) = d(z, z) for all s.
        let ok = bits(limits_mask(space, set, ymask)).any(|z| space.same_dist(z, z, first, first));
        if !ok {
            return Verdict::Fails(Counterexample {
                tail: tail_set(space, set),
                point: None,
            });
        }
    }
    Verdict::Holds
}

/// For every `R`-preserving sequence in `y` converging to `x ∈ y`, some point
/// visited infinitely often is related to `x` in either direction.
pub fn check_sigma_self_closed(
    space: &FiniteDistanceSpace,
    r: &FiniteRelation,
    y: &[Point],
) -> Result<PropertyReport> {
    let y = sorted(y);
    check_size("subspace", y.len(), MAX_SUBSET_POINTS)?;
    let graph = Digraph::new(r);
    Ok(self_closed_with(space, r, &graph, &y))
}

fn self_closed_with(
    space: &FiniteDistanceSpace,
    r: &FiniteRelation,
    graph: &Digraph,
    y: &[Point],
) -> PropertyReport {
    let ymask = mask_of(y);
    for set in tail_masks(graph, y) {
        for x in bits(limits_mask(space, set, ymask)) {
            if !bits(set).any(|s| r.contains_either(s, x)) {
                return Verdict::Fails(Counterexample {
                    tail: tail_set(space, set),
                    point: Some(x),
                });
            }
        }
    }
    Verdict::Holds
}

/// `f(x_n) → f(x)` for every `R`-preserving `x_n → x` over the whole carrier.
pub fn check_r_continuity_like(
    space: &FiniteDistanceSpace,
    r: &FiniteRelation,
    f: &SelfMap,
) -> Result<PropertyReport> {
    check_size("carrier", space.len(), MAX_SUBSET_POINTS)?;
    let graph = Digraph::new(r);
    let all: Vec<Point> = space.points().collect();
    Ok(continuity_with(space, f, &graph, &all))
}

fn continuity_with(
    space: &FiniteDistanceSpace,
    f: &SelfMap,
    graph: &Digraph,
    carrier: &[Point],
) -> PropertyReport {
    let full = mask_of(carrier);
    for set in tail_masks(graph, carrier) {
        for x in bits(limits_mask(space, set, full)) {
            let fx = f.apply(x);
            if !bits(set).all(|s| space.same_dist(f.apply(s), fx, fx, fx)) {
                return Verdict::Fails(Counterexample {
                    tail: tail_set(space, set),
                    point: Some(x),
                });
            }
        }
    }
    Verdict::Holds
}

/// [`check_r_continuity_like`] under the universal relation.
pub fn check_continuity_like(space: &FiniteDistanceSpace, f: &SelfMap) -> Result<PropertyReport> {
    check_r_continuity_like(space, &FiniteRelation::universal(space.len()), f)
}

/// Shared-work evaluation of the properties the validator needs.
pub(crate) struct TailAnalysis<'a> {
    space: &'a FiniteDistanceSpace,
    relation: &'a FiniteRelation,
    graph: Digraph,
}

impl<'a> TailAnalysis<'a> {
    pub(crate) fn new(
        space: &'a FiniteDistanceSpace,
        relation: &'a FiniteRelation,
    ) -> Result<Self> {
        check_size("carrier", space.len(), MAX_SUBSET_POINTS)?;
        Ok(Self {
            space,
            relation,
            graph: Digraph::new(relation),
        })
    }

    pub(crate) fn r_completeness(&self, y: &[Point]) -> PropertyReport {
        r_completeness_with(self.space, &self.graph, y)
    }

    pub(crate) fn self_closed(&self, y: &[Point]) -> PropertyReport {
        self_closed_with(self.space, self.relation, &self.graph, y)
    }

    pub(crate) fn r_continuity_like(&self, f: &SelfMap) -> PropertyReport {
        let all: Vec<Point> = self.space.points().collect();
        continuity_with(self.space, f, &self.graph, &all)
    }
}

/// One simulated `R`-preserving walk in `Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkSample {
    pub sequence: Vec<Point>,
    /// The walk reached a point with no successor in `Y` before the horizon.
    pub stuck: bool,
    /// Points visited in the final third, present once that window covers a
    /// strongly connected component the walk cannot leave.
    pub tail: Option<Vec<Point>>,
    /// Constant value of `d` over pairs of the final third, if constant.
    pub cauchy_value: Option<Rational>,
    /// Points `x` with `d(x_n, x) = d(x, x)` across the final third.
    pub limits: Vec<Point>,
}

impl WalkSample {
    pub fn is_cauchy(&self) -> bool {
        self.cauchy_value.is_some()
    }

    pub fn converges(&self) -> bool {
        !self.limits.is_empty()
    }
}

/// Random `R`-preserving walks of length `horizon` inside `y`, each step
/// uniform over the available successors. Deterministic for a given seed.
pub fn simulate_walks(
    space: &FiniteDistanceSpace,
    r: &FiniteRelation,
    y: &[Point],
    count: usize,
    horizon: usize,
    seed: u64,
) -> Result<Vec<WalkSample>> {
    check_size("carrier", space.len(), MAX_WALK_POINTS)?;
    let y = sorted(y);
    let ymask = mask_of(&y);
    let graph = Digraph::new(r);
    let succ_in_y: Vec<Vec<Point>> = space
        .points()
        .map(|x| bits(graph.succ[x] & ymask).collect())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    if y.is_empty() {
        return Ok(out);
    }
    for _ in 0..count {
        let mut cur = y[rng.random_range(0..y.len())];
        let mut sequence = Vec::with_capacity(horizon.max(1));
        sequence.push(cur);
        let mut stuck = false;
        while sequence.len() < horizon.max(1) {
            let next = &succ_in_y[cur];
            if next.is_empty() {
                stuck = true;
                break;
            }
            cur = next[rng.random_range(0..next.len())];
            sequence.push(cur);
        }
        out.push(summarize_walk(space, &graph, ymask, sequence, stuck));
    }
    Ok(out)
}

fn summarize_walk(
    space: &FiniteDistanceSpace,
    graph: &Digraph,
    ymask: Mask,
    sequence: Vec<Point>,
    stuck: bool,
) -> WalkSample {
    let mut sample = WalkSample {
        sequence,
        stuck,
        tail: None,
        cauchy_value: None,
        limits: Vec::new(),
    };
    if stuck {
        return sample;
    }
    let start = sample.sequence.len() - sample.sequence.len() / 3;
    let window = &sample.sequence[start.min(sample.sequence.len() - 1)..];
    let visited = mask_of(window);
    let first = window[0];
    let comp = graph.component(first, ymask);
    let settled = visited == comp && bits(comp).all(|c| graph.succ[c] & ymask & !comp == 0);
    if settled {
        sample.tail = Some(bits(visited).collect());
        sample.cauchy_value = cauchy_value(space, visited);
        sample.limits = bits(limits_mask(
            space,
            visited,
            mask_of(&space.points().collect::<Vec<_>>()),
        ))
        .collect();
    }
    sample
}

/// A simulated walk at odds with a decision-procedure verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WalkContradiction {
    /// The walk settled on a tail the enumeration does not list.
    UnlistedTail { walk: usize },
    /// Completeness holds, yet this Cauchy walk has no admissible limit in `Y`.
    CauchyWithoutLimit { walk: usize },
    /// Self-closedness holds, yet no tail point is related to this limit.
    UnrelatedLimit { walk: usize, limit: Point },
    /// `R`-continuity-like holds, yet `f` of the walk misses `f(limit)`.
    Discontinuity { walk: usize, limit: Point },
}

/// Compares simulated walks against the tail-set verdicts for `(space, r, y)`
/// and, when `f` is given, `R`-continuity-like.
pub fn walk_contradictions(
    space: &FiniteDistanceSpace,
    r: &FiniteRelation,
    y: &[Point],
    f: Option<&SelfMap>,
    walks: &[WalkSample],
) -> Result<Vec<WalkContradiction>> {
    let tails = realizable_tail_sets(space, r, y)?;
    let complete = check_r_completeness(space, r, y)?.holds();
    let closed = check_sigma_self_closed(space, r, y)?.holds();
    let continuous = match f {
        Some(f) if check_r_continuity_like(space, r, f)?.holds() => Some(f),
        _ => None,
    };
    let ysorted = sorted(y);
    let mut out = Vec::new();
    for (i, w) in walks.iter().enumerate() {
        let Some(tail) = &w.tail else { continue };
        if !tails.iter().any(|t| &t.members == tail) {
            out.push(WalkContradiction::UnlistedTail { walk: i });
        }
        if let (true, Some(value)) = (complete, &w.cauchy_value) {
            let has_limit = ysorted
                .iter()
                .any(|&z| w.limits.contains(&z) && space.dist(z, z) == value);
            if !has_limit {
                out.push(WalkContradiction::CauchyWithoutLimit { walk: i });
            }
        }
        if closed {
            for &x in w.limits.iter().filter(|x| ysorted.contains(x)) {
                if !tail.iter().any(|&s| r.contains_either(s, x)) {
                    out.push(WalkContradiction::UnrelatedLimit { walk: i, limit: x });
                }
            }
        }
        if let Some(f) = continuous {
            for &x in &w.limits {
                let fx = f.apply(x);
                if !tail
                    .iter()
                    .all(|&s| space.same_dist(f.apply(s), fx, fx, fx))
                {
                    out.push(WalkContradiction::Discontinuity { walk: i, limit: x });
                }
            }
        }
    }
    Ok(out)
}
