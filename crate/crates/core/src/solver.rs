//! Picard iteration with exact fixed-point detection and the geometric
//! a-priori error bound.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::contraction::check_k;
use crate::error::{Error, Result};
use crate::rational::{format_rational, pow_u, Rational};
use crate::relation::{find_path, FiniteRelation, Path, SelfMap};
use crate::space::{FiniteDistanceSpace, Point};

/// The orbit `x_0, f x_0, f² x_0, …` as far as it was computed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicardTrace {
    pub iterates: Vec<Point>,
    /// `d(x_n, x_{n+1})` for each consecutive pair of `iterates`.
    pub gaps: Vec<Rational>,
    /// `kⁿ·d₀/(1−k)` per gap, filled by [`PicardTrace::attach_bounds`].
    pub bounds: Vec<Rational>,
}

impl PicardTrace {
    /// `d₀ = d(x_0, f x_0)`, when at least one application was made.
    pub fn initial_gap(&self) -> Option<&Rational> {
        self.gaps.first()
    }

    /// Records the a-priori bound `kⁿ·d₀/(1−k)` for every recorded gap.
    pub fn attach_bounds(&mut self, k: &Rational) -> Result<()> {
        let d0 = self.gaps.first().cloned().unwrap_or_else(Rational::zero);
        self.bounds = (0..self.gaps.len())
            .map(|n| a_priori_bound(k, n as u64, &d0))
            .collect::<Result<_>>()?;
        Ok(())
    }
}

/// Evidence that `point` is a fixed point reached by Picard iteration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPointCertificate {
    pub point: Point,
    pub self_distance: Rational,
    /// `d(y, f y)`; zero whenever the iteration ran under a contraction on
    /// related pairs, since then `(y, y) ∈ R` forces `d(y, y) = 0`.
    pub residual: Rational,
    /// Applications of `f` needed to reach `point`.
    pub iterations: usize,
    /// Every consecutive pair of iterates lies in the relation, when one was
    /// supplied.
    pub preserving_verified: bool,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("no fixed point after {max_iter} applications")]
    NonConvergence { trace: PicardTrace, max_iter: usize },
    #[error(transparent)]
    Invalid(#[from] Error),
}

/// `|X| + 1`: an orbit on a finite set reaches a fixed point or closes a cycle
/// within `|X|` steps, and one more application confirms it.
pub fn default_max_iter(space: &FiniteDistanceSpace) -> usize {
    space.len() + 1
}

/// Runs Picard iteration from `x0` for at most `max_iter` applications of
/// `f`, stopping as soon as `f(x_n) = x_n`. When `relation` is given the
/// certificate records whether the orbit is `R`-preserving.
pub fn picard(
    space: &FiniteDistanceSpace,
    f: &SelfMap,
    x0: Point,
    max_iter: usize,
    relation: Option<&FiniteRelation>,
) -> std::result::Result<(PicardTrace, FixedPointCertificate), SolveError> {
    if x0 >= space.len() {
        return Err(Error::PointOutOfRange {
            index: x0,
            size: space.len(),
        }
        .into());
    }
    let mut trace = PicardTrace {
        iterates: vec![x0],
        gaps: Vec::new(),
        bounds: Vec::new(),
    };
    let mut cur = x0;
    for n in 0..max_iter {
        let next = f.apply(cur);
        trace.iterates.push(next);
        trace.gaps.push(space.dist(cur, next).clone());
        if next == cur {
            let preserving_verified = relation
                .map(|r| crate::relation::is_preserving(r, &trace.iterates))
                .unwrap_or(false);
            let certificate = FixedPointCertificate {
                point: cur,
                self_distance: space.dist(cur, cur).clone(),
                residual: space.dist(cur, next).clone(),
                iterations: n,
                preserving_verified,
            };
            return Ok((trace, certificate));
        }
        cur = next;
    }
    Err(SolveError::NonConvergence { trace, max_iter })
}

/// `kⁿ·d₀/(1−k)`.
pub fn a_priori_bound(k: &Rational, n: u64, d0: &Rational) -> Result<Rational> {
    if k.is_negative() || *k >= Rational::one() {
        return Err(Error::ConstantOutOfRange(format_rational(k)));
    }
    Ok(pow_u(k, n) * d0 / (Rational::one() - k))
}

/// `F(f)` by enumeration.
pub fn fixed_points(f: &SelfMap) -> Vec<Point> {
    (0..f.size()).filter(|&x| f.apply(x) == x).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Uniqueness {
    /// At most one fixed point.
    Unique,
    /// Two fixed points with no joining path in `R^s`.
    Unreachable { p: Point, q: Point },
    /// Two distinct fixed points joined by a path in `R^s` although the
    /// contraction was verified. The hypotheses rule this out, so it signals
    /// inconsistent input or a defect.
    Alarm { p: Point, q: Point, path: Path },
}

impl Uniqueness {
    pub fn holds(&self) -> bool {
        matches!(self, Uniqueness::Unique)
    }
}

/// Decides uniqueness through `R^s`-paths between fixed points. Requires
/// `k ∈ [0, 1)` with the contraction verified on `R`.
pub fn uniqueness_by_paths(
    space: &FiniteDistanceSpace,
    r: &FiniteRelation,
    f: &SelfMap,
    fixed: &[Point],
    k: &Rational,
) -> Result<Uniqueness> {
    if !check_k(space, r, f, k)?.holds() {
        return Err(Error::HypothesisNotMet(format!(
            "contraction with k = {} fails on the relation",
            format_rational(k)
        )));
    }
    // The first pair of distinct fixed points decides.
    let (p, q) = match fixed {
        [p, q, ..] => (*p, *q),
        _ => return Ok(Uniqueness::Unique),
    };
    Ok(match find_path(&r.symmetrize(), p, q) {
        None => Uniqueness::Unreachable { p, q },
        Some(path) => Uniqueness::Alarm { p, q, path },
    })
}
