//! Finite distance structures and the metric / partial metric / metric-like
//! axiom systems.
//!
//! A [`FiniteDistanceSpace`] is always symmetric and non-negative; those
//! properties are checked when the table is built. The remaining axioms are
//! decided by [`check_metric_like`], [`check_partial_metric`] and
//! [`check_metric`], each of which reports every violation it finds together
//! with a witness tuple that can be re-evaluated against the table.

use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, is_nonnegative, Rational};

/// Index of a point in its carrier.
pub type Point = usize;

/// Labelled point set with a symmetric, non-negative rational distance table.
#[derive(Clone, Debug)]
pub struct FiniteDistanceSpace {
    labels: Vec<String>,
    index: HashMap<String, Point>,
    dist: Vec<Rational>,
    // Order-preserving rank of each entry among the distinct table values.
    rank: Vec<u32>,
}

impl PartialEq for FiniteDistanceSpace {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.dist == other.dist
    }
}

impl Eq for FiniteDistanceSpace {}

impl FiniteDistanceSpace {
    /// Builds a space from a full square table given row by row.
    pub fn new(labels: Vec<String>, table: Vec<Vec<Rational>>) -> Result<Self> {
        let n = labels.len();
        if table.len() != n {
            return Err(Error::ShapeMismatch {
                expected: n,
                found: table.len(),
            });
        }
        let mut dist = Vec::with_capacity(n * n);
        for row in table {
            if row.len() != n {
                return Err(Error::ShapeMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            dist.extend(row);
        }
        Self::from_flat(labels, dist)
    }

    /// Builds a space by evaluating `d(i, j)` for every ordered pair.
    pub fn from_fn<F>(labels: Vec<String>, mut d: F) -> Result<Self>
    where
        F: FnMut(Point, Point) -> Rational,
    {
        let n = labels.len();
        let mut dist = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                dist.push(d(i, j));
            }
        }
        Self::from_flat(labels, dist)
    }

    fn from_flat(labels: Vec<String>, dist: Vec<Rational>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::EmptyCarrier);
        }
        let mut index = HashMap::with_capacity(n);
        for (i, label) in labels.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let v = &dist[i * n + j];
                if !is_nonnegative(v) {
                    return Err(Error::NegativeDistance {
                        x: labels[i].clone(),
                        y: labels[j].clone(),
                        value: format_rational(v),
                    });
                }
                if j > i && dist[i * n + j] != dist[j * n + i] {
                    return Err(Error::Asymmetric {
                        x: labels[i].clone(),
                        y: labels[j].clone(),
                        forward: format_rational(&dist[i * n + j]),
                        backward: format_rational(&dist[j * n + i]),
                    });
                }
            }
        }
        let mut distinct: Vec<&Rational> = dist.iter().collect();
        distinct.sort();
        distinct.dedup();
        let rank = dist
            .iter()
            .map(|v| distinct.binary_search(&v).expect("value present") as u32)
            .collect();
        Ok(Self {
            labels,
            index,
            dist,
            rank,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn points(&self) -> std::ops::Range<Point> {
        0..self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, p: Point) -> &str {
        &self.labels[p]
    }

    pub fn index_of(&self, label: &str) -> Option<Point> {
        self.index.get(label).copied()
    }

    /// Resolves a label or fails with [`Error::UnknownLabel`].
    pub fn point(&self, label: &str) -> Result<Point> {
        self.index_of(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn dist(&self, x: Point, y: Point) -> &Rational {
        &self.dist[x * self.len() + y]
    }

    /// `d(x, y) == d(u, v)` without touching the big-integer values.
    #[inline]
    pub fn same_dist(&self, x: Point, y: Point, u: Point, v: Point) -> bool {
        let n = self.len();
        self.rank[x * n + y] == self.rank[u * n + v]
    }

    /// `d(x, y)` is zero.
    #[inline]
    pub fn is_zero(&self, x: Point, y: Point) -> bool {
        self.dist(x, y).is_zero()
    }

    pub fn labels_of(&self, points: &[Point]) -> Vec<String> {
        points.iter().map(|&p| self.labels[p].clone()).collect()
    }
}

/// Axiom identifiers used in violation reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axiom {
    /// `d(x, y) = 0` implies `x = y`.
    #[serde(rename = "sigma1")]
    Sigma1,
    /// `d(x, y) <= d(x, z) + d(z, y)`.
    #[serde(rename = "sigma3")]
    Sigma3,
    /// `x = y` iff `p(x, x) = p(x, y) = p(y, y)`.
    #[serde(rename = "p1")]
    P1,
    /// `p(x, x) <= p(x, y)`.
    #[serde(rename = "p2")]
    P2,
    /// `p(x, y) <= p(x, z) + p(z, y) - p(z, z)`.
    #[serde(rename = "p4")]
    P4,
    /// `d(x, x) = 0`.
    #[serde(rename = "zero_self_distance")]
    ZeroSelfDistance,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::Sigma1 => "sigma1",
            Axiom::Sigma3 => "sigma3",
            Axiom::P1 => "p1",
            Axiom::P2 => "p2",
            Axiom::P4 => "p4",
            Axiom::ZeroSelfDistance => "zero_self_distance",
        };
        f.write_str(s)
    }
}

/// One failed axiom instance.
///
/// Witness layout per axiom: `Sigma1`, `P1`, `P2` use `(x, y)`; `Sigma3`
/// and `P4` use `(x, z, y)` with `z` the intermediate point;
/// `ZeroSelfDistance` uses `(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: Vec<Point>,
    pub lhs: Rational,
    pub rhs: Rational,
}

impl Violation {
    /// Recomputes `(lhs, rhs)` from the table for this witness.
    pub fn evaluate(&self, space: &FiniteDistanceSpace) -> (Rational, Rational) {
        let w = &self.witness;
        let d = |a: Point, b: Point| space.dist(a, b).clone();
        match self.axiom {
            Axiom::Sigma1 => (d(w[0], w[1]), Rational::zero()),
            Axiom::Sigma3 => (d(w[0], w[2]), d(w[0], w[1]) + d(w[1], w[2])),
            Axiom::P1 => (d(w[0], w[1]), d(w[0], w[0])),
            Axiom::P2 => (d(w[0], w[0]), d(w[0], w[1])),
            Axiom::P4 => (d(w[0], w[2]), d(w[0], w[1]) + d(w[1], w[2]) - d(w[1], w[1])),
            Axiom::ZeroSelfDistance => (d(w[0], w[0]), Rational::zero()),
        }
    }

    /// Whether the witness really violates its axiom in `space`.
    pub fn is_genuine(&self, space: &FiniteDistanceSpace) -> bool {
        let w = &self.witness;
        let (lhs, rhs) = self.evaluate(space);
        match self.axiom {
            Axiom::Sigma1 => w[0] != w[1] && lhs.is_zero(),
            Axiom::P1 => w[0] != w[1] && lhs == rhs && *space.dist(w[1], w[1]) == lhs,
            Axiom::Sigma3 | Axiom::P2 | Axiom::P4 => lhs > rhs,
            Axiom::ZeroSelfDistance => !lhs.is_zero(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    pub fn satisfied(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, axiom: Axiom) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }

    fn push(&mut self, axiom: Axiom, witness: Vec<Point>, lhs: Rational, rhs: Rational) {
        self.violations.push(Violation {
            axiom,
            witness,
            lhs,
            rhs,
        });
    }
}

/// Strongest axiom system a space satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SpaceClass {
    Metric,
    PartialMetric,
    MetricLike,
    NotMetricLike,
}

impl fmt::Display for SpaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SpaceClass::Metric => "Metric",
            SpaceClass::PartialMetric => "PartialMetric",
            SpaceClass::MetricLike => "MetricLike",
            SpaceClass::NotMetricLike => "NotMetricLike",
        };
        f.write_str(s)
    }
}

fn triangle_violations(space: &FiniteDistanceSpace, axiom: Axiom, report: &mut AxiomReport) {
    let subtract_self = axiom == Axiom::P4;
    for x in space.points() {
        for y in space.points() {
            let lhs = space.dist(x, y);
            for z in space.points() {
                let mut rhs = space.dist(x, z) + space.dist(z, y);
                if subtract_self {
                    rhs -= space.dist(z, z);
                }
                if *lhs > rhs {
                    report.push(axiom, vec![x, z, y], lhs.clone(), rhs);
                }
            }
        }
    }
}

/// Checks σ1 and σ3; symmetry is guaranteed by construction.
pub fn check_metric_like(space: &FiniteDistanceSpace) -> AxiomReport {
    let mut report = AxiomReport::default();
    for x in space.points() {
        for y in space.points() {
            if x != y && space.is_zero(x, y) {
                report.push(
                    Axiom::Sigma1,
                    vec![x, y],
                    Rational::zero(),
                    Rational::zero(),
                );
            }
        }
    }
    triangle_violations(space, Axiom::Sigma3, &mut report);
    report
}

/// Checks p1, p2 and the modified triangle inequality p4.
///
/// The forward half of p1 (`x = y` implies equal values) holds identically,
/// so only distinct points with `p(x, x) = p(x, y) = p(y, y)` are reported.
pub fn check_partial_metric(space: &FiniteDistanceSpace) -> AxiomReport {
    let mut report = AxiomReport::default();
    for x in space.points() {
        for y in space.points() {
            if x != y && space.same_dist(x, x, x, y) && space.same_dist(y, y, x, y) {
                report.push(
                    Axiom::P1,
                    vec![x, y],
                    space.dist(x, y).clone(),
                    space.dist(x, x).clone(),
                );
            }
        }
    }
    for x in space.points() {
        for y in space.points() {
            if space.dist(x, x) > space.dist(x, y) {
                report.push(
                    Axiom::P2,
                    vec![x, y],
                    space.dist(x, x).clone(),
                    space.dist(x, y).clone(),
                );
            }
        }
    }
    triangle_violations(space, Axiom::P4, &mut report);
    report
}

/// Partial-metric report plus every non-zero self-distance.
pub fn check_metric(space: &FiniteDistanceSpace) -> AxiomReport {
    let mut report = check_partial_metric(space);
    for x in space.points() {
        if !space.is_zero(x, x) {
            report.push(
                Axiom::ZeroSelfDistance,
                vec![x],
                space.dist(x, x).clone(),
                Rational::zero(),
            );
        }
    }
    report
}

pub fn classify(space: &FiniteDistanceSpace) -> SpaceClass {
    if check_metric(space).satisfied() {
        SpaceClass::Metric
    } else if check_partial_metric(space).satisfied() {
        SpaceClass::PartialMetric
    } else if check_metric_like(space).satisfied() {
        SpaceClass::MetricLike
    } else {
        SpaceClass::NotMetricLike
    }
}
