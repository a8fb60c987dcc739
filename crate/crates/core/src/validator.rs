//! Full hypothesis evaluation for the relation-theoretic contraction
//! principle and its corollaries, plus an oracle cross-check of the
//! resulting prediction.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::analysis::{check_continuity_like, Counterexample, PropertyReport, TailAnalysis};
use crate::contraction::{
    check_k, integral_check_k, integral_minimal_k, minimal_k, ContractionReport, IntegrandSpec,
    KValue,
};
use crate::document::instance_to_document;
use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};
use crate::relation::{
    find_path, is_complete, is_directed, is_f_closed, FiniteRelation, SelfMap, Verdict,
};
use crate::solver::{default_max_iter, fixed_points, picard};
use crate::space::{check_metric_like, FiniteDistanceSpace, Point};

/// Space, relation, self-map and subspace `Y ⊇ f(X)`, with optional start
/// point, contraction constant and integrand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    space: FiniteDistanceSpace,
    relation: FiniteRelation,
    map: SelfMap,
    y: Vec<Point>,
    x0: Option<Point>,
    k: Option<Rational>,
    rho: Option<IntegrandSpec>,
}

impl Instance {
    /// Fails unless the parts share a carrier and `f(X) ⊆ Y`.
    pub fn new(
        space: FiniteDistanceSpace,
        relation: FiniteRelation,
        map: SelfMap,
        y: Vec<Point>,
    ) -> Result<Self> {
        let n = space.len();
        for size in [relation.size(), map.size()] {
            if size != n {
                return Err(Error::ShapeMismatch {
                    expected: n,
                    found: size,
                });
            }
        }
        let mut y = y;
        y.sort_unstable();
        y.dedup();
        if let Some(&bad) = y.iter().find(|&&p| p >= n) {
            return Err(Error::PointOutOfRange {
                index: bad,
                size: n,
            });
        }
        for x in space.points() {
            let fx = map.apply(x);
            if y.binary_search(&fx).is_err() {
                return Err(Error::ImageOutsideSubspace {
                    x: space.label(x).to_string(),
                    image: space.label(fx).to_string(),
                });
            }
        }
        Ok(Self {
            space,
            relation,
            map,
            y,
            x0: None,
            k: None,
            rho: None,
        })
    }

    /// `Y = X`.
    pub fn whole(
        space: FiniteDistanceSpace,
        relation: FiniteRelation,
        map: SelfMap,
    ) -> Result<Self> {
        let y = space.points().collect();
        Self::new(space, relation, map, y)
    }

    pub fn with_x0(mut self, x0: Point) -> Result<Self> {
        if x0 >= self.space.len() {
            return Err(Error::PointOutOfRange {
                index: x0,
                size: self.space.len(),
            });
        }
        self.x0 = Some(x0);
        Ok(self)
    }

    pub fn with_k(mut self, k: Rational) -> Self {
        self.k = Some(k);
        self
    }

    pub fn with_rho(mut self, rho: IntegrandSpec) -> Result<Self> {
        rho.validate()?;
        self.rho = Some(rho);
        Ok(self)
    }

    /// Same instance under a different relation.
    pub fn with_relation(&self, relation: FiniteRelation) -> Result<Self> {
        let mut out = Self::new(
            self.space.clone(),
            relation,
            self.map.clone(),
            self.y.clone(),
        )?;
        out.x0 = self.x0;
        out.k = self.k.clone();
        out.rho = self.rho.clone();
        Ok(out)
    }

    pub fn space(&self) -> &FiniteDistanceSpace {
        &self.space
    }

    pub fn relation(&self) -> &FiniteRelation {
        &self.relation
    }

    pub fn map(&self) -> &SelfMap {
        &self.map
    }

    pub fn y(&self) -> &[Point] {
        &self.y
    }

    pub fn x0(&self) -> Option<Point> {
        self.x0
    }

    pub fn k(&self) -> Option<&Rational> {
        self.k.as_ref()
    }

    pub fn rho(&self) -> Option<&IntegrandSpec> {
        self.rho.as_ref()
    }

    pub fn y_is_whole(&self) -> bool {
        self.y.len() == self.space.len()
    }
}

/// Verdict on one hypothesis, with labelled witness points when it fails (or,
/// for existential conditions, when it holds).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConditionEntry {
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl ConditionEntry {
    fn new(holds: bool) -> Self {
        Self {
            holds,
            witness: None,
            detail: None,
        }
    }

    fn witness(mut self, space: &FiniteDistanceSpace, points: &[Point]) -> Self {
        self.witness = Some(space.labels_of(points));
        self
    }

    fn detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Prediction {
    NoGuarantee,
    ExistenceGuaranteed,
    UniqueFixedPoint,
}

impl fmt::Display for Prediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Prediction::NoGuarantee => "NoGuarantee",
            Prediction::ExistenceGuaranteed => "ExistenceGuaranteed",
            Prediction::UniqueFixedPoint => "UniqueFixedPoint",
        })
    }
}

/// Named results whose hypotheses an instance may satisfy.
pub mod results {
    pub const THEOREM_1: &str = "Theorem 1";
    pub const COROLLARY_1: &str = "Corollary 1";
    pub const COROLLARY_2: &str = "Corollary 2";
    pub const COROLLARY_3: &str = "Corollary 3";
    pub const COROLLARY_4: &str = "Corollary 4";
    pub const THEOREM_2: &str = "Theorem 2";
    pub const COROLLARY_5: &str = "Corollary 5";
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HypothesisReport {
    /// The standing assumption that `d` is metric-like.
    pub metric_like: ConditionEntry,
    /// (a) `(Y, d)` is `R`-complete.
    pub r_complete: ConditionEntry,
    /// (b) some `x0` has `(x0, f x0) ∈ R`; witness lists every such start.
    pub start_point: ConditionEntry,
    /// (c) `R` is `f`-closed.
    pub f_closed: ConditionEntry,
    /// (d), first disjunct: `f` is `R`-continuous-like.
    pub r_continuity_like: ConditionEntry,
    /// (d), second disjunct: `R|_Y` is `d`-self-closed.
    pub self_closed: ConditionEntry,
    /// (d) as a whole.
    pub continuity_or_self_closed: ConditionEntry,
    /// (e) linear contraction on related pairs.
    pub contraction: ConditionEntry,
    pub k_star: KValue,
    /// `k*` over every pair of points, reported alongside the related-pair
    /// value.
    pub universal_k_star: KValue,
    /// (f) every pair of image points is joined by a path in `R^s`.
    pub paths: ConditionEntry,
    /// (f′) `f(X)` is `R^s`-directed.
    pub directed_image: ConditionEntry,
    /// (f″) `R|_{f(X)}` is complete.
    pub complete_image: ConditionEntry,
    /// Integral-type contraction, when an integrand was supplied.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integral_contraction: Option<ConditionEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integral_k_star: Option<KValue>,
    pub admissible_starts: Vec<String>,
    pub prediction: Prediction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integral_prediction: Option<Prediction>,
    pub applicable_results: Vec<String>,
}

impl HypothesisReport {
    /// (a) through (e).
    pub fn existence_hypotheses(&self) -> bool {
        self.metric_like.holds
            && self.r_complete.holds
            && self.start_point.holds
            && self.f_closed.holds
            && self.continuity_or_self_closed.holds
            && self.contraction.holds
    }

    pub fn uniqueness_condition(&self) -> bool {
        self.paths.holds || self.directed_image.holds || self.complete_image.holds
    }
}

fn property_entry(space: &FiniteDistanceSpace, report: &PropertyReport) -> ConditionEntry {
    match report {
        Verdict::Holds => ConditionEntry::new(true),
        Verdict::Fails(Counterexample { tail, point }) => {
            let mut e = ConditionEntry::new(false).witness(space, &tail.members);
            if let Some(p) = point {
                e = e.detail(format!("limit {}", space.label(*p)));
            }
            e
        }
    }
}

fn pair_entry(space: &FiniteDistanceSpace, verdict: &Verdict<(Point, Point)>) -> ConditionEntry {
    match verdict {
        Verdict::Holds => ConditionEntry::new(true),
        Verdict::Fails((x, y)) => ConditionEntry::new(false).witness(space, &[*x, *y]),
    }
}

fn contraction_entry(
    space: &FiniteDistanceSpace,
    report: &ContractionReport,
    given: Option<(&Rational, Result<Verdict<(Point, Point)>>)>,
) -> ConditionEntry {
    match given {
        Some((k, Ok(verdict))) => {
            pair_entry(space, &verdict).detail(format!("k = {}", format_rational(k)))
        }
        Some((k, Err(_))) => ConditionEntry::new(false)
            .detail(format!("k = {} is outside [0, 1)", format_rational(k))),
        None if report.feasible => {
            ConditionEntry::new(true).detail(format!("kStar = {}", report.k_star))
        }
        None => {
            let blocked: Vec<Point> = report
                .blocking_pairs
                .first()
                .map(|b| vec![b.pair.0, b.pair.1])
                .unwrap_or_default();
            ConditionEntry::new(false)
                .witness(space, &blocked)
                .detail(format!("kStar = {}", report.k_star))
        }
    }
}

/// (f): `Υ(a, b, R^s) ≠ ∅` for all image points `a, b`, the diagonal
/// included.
fn image_paths(rs: &FiniteRelation, image: &[Point]) -> Verdict<(Point, Point)> {
    for (i, &a) in image.iter().enumerate() {
        for &b in &image[i..] {
            if find_path(rs, a, b).is_none() {
                return Verdict::Fails((a, b));
            }
        }
    }
    Verdict::Holds
}

/// Evaluates every hypothesis and derives the prediction.
pub fn validate(inst: &Instance) -> Result<HypothesisReport> {
    let space = &inst.space;
    let r = &inst.relation;
    let f = &inst.map;
    let y = &inst.y;

    let metric_like = match check_metric_like(space).violations.first() {
        None => ConditionEntry::new(true),
        Some(v) => ConditionEntry::new(false)
            .witness(space, &v.witness)
            .detail(v.axiom.to_string()),
    };

    let tails = TailAnalysis::new(space, r)?;
    let r_complete = property_entry(space, &tails.r_completeness(y));

    let admissible: Vec<Point> = space
        .points()
        .filter(|&x| r.contains(x, f.apply(x)))
        .collect();
    let start_point = match inst.x0 {
        Some(x0) if admissible.contains(&x0) => ConditionEntry::new(true).witness(space, &[x0]),
        Some(x0) => ConditionEntry::new(false)
            .witness(space, &[x0, f.apply(x0)])
            .detail("(x0, f x0) is not related"),
        None if admissible.is_empty() => ConditionEntry::new(false),
        None => ConditionEntry::new(true).witness(space, &admissible),
    };

    let f_closed = match is_f_closed(r, f) {
        Verdict::Holds => ConditionEntry::new(true),
        Verdict::Fails(((x, y), (fx, fy))) => {
            ConditionEntry::new(false).witness(space, &[x, y, fx, fy])
        }
    };

    let r_continuity_like = property_entry(space, &tails.r_continuity_like(f));
    let self_closed = property_entry(space, &tails.self_closed(y));
    let continuity_or_self_closed = ConditionEntry::new(
        r_continuity_like.holds || self_closed.holds,
    )
    .detail(match (r_continuity_like.holds, self_closed.holds) {
        (true, true) => "both disjuncts hold",
        (true, false) => "R-continuity-like",
        (false, true) => "self-closed",
        (false, false) => "neither disjunct holds",
    });

    let linear = minimal_k(space, r, f);
    let contraction = contraction_entry(
        space,
        &linear,
        inst.k.as_ref().map(|k| (k, check_k(space, r, f, k))),
    );
    let universal = FiniteRelation::universal(space.len());
    let universal_linear = minimal_k(space, &universal, f);

    let rs = r.symmetrize();
    let image = f.image_set();
    let paths = pair_entry(space, &image_paths(&rs, &image));
    let directed_image = pair_entry(space, &is_directed(&rs, &image));
    let complete_image = pair_entry(space, &is_complete(r, &image));

    let integral = match &inst.rho {
        Some(rho) => {
            let rep = integral_minimal_k(space, r, f, rho)?;
            let given = inst
                .k
                .as_ref()
                .map(|k| (k, integral_check_k(space, r, f, rho, k)));
            Some((contraction_entry(space, &rep, given), rep.k_star))
        }
        None => None,
    };

    let mut report = HypothesisReport {
        metric_like,
        r_complete,
        start_point,
        f_closed,
        r_continuity_like,
        self_closed,
        continuity_or_self_closed,
        contraction,
        k_star: linear.k_star,
        universal_k_star: universal_linear.k_star.clone(),
        paths,
        directed_image,
        complete_image,
        integral_contraction: integral.as_ref().map(|(e, _)| e.clone()),
        integral_k_star: integral.map(|(_, k)| k),
        admissible_starts: space.labels_of(&admissible),
        prediction: Prediction::NoGuarantee,
        integral_prediction: None,
        applicable_results: Vec::new(),
    };

    let unique = report.uniqueness_condition();
    let grade = |existence: bool| match (existence, unique) {
        (false, _) => Prediction::NoGuarantee,
        (true, false) => Prediction::ExistenceGuaranteed,
        (true, true) => Prediction::UniqueFixedPoint,
    };
    let base = report.existence_hypotheses();
    report.prediction = grade(base);

    let integral_base = report.integral_contraction.as_ref().map(|e| {
        report.metric_like.holds
            && report.r_complete.holds
            && report.start_point.holds
            && report.f_closed.holds
            && report.continuity_or_self_closed.holds
            && e.holds
    });
    report.integral_prediction = integral_base.map(grade);

    let mut applicable = Vec::new();
    if base {
        applicable.push(results::THEOREM_1);
        if inst.y_is_whole() {
            applicable.push(results::COROLLARY_1);
        }
    }
    // Corollary 2: completeness and continuity without the relation.
    if report.metric_like.holds
        && report.start_point.holds
        && report.f_closed.holds
        && report.contraction.holds
    {
        let plain = TailAnalysis::new(space, &universal)?;
        let complete = plain.r_completeness(y).holds();
        let continuous = check_continuity_like(space, f)?.holds();
        if complete && (continuous || report.self_closed.holds) {
            applicable.push(results::COROLLARY_2);
        }
    }
    if base && (report.directed_image.holds || report.complete_image.holds) {
        applicable.push(results::COROLLARY_3);
    }
    if r.is_universal() && report.metric_like.holds {
        let plain = TailAnalysis::new(space, &universal)?;
        let k_ok = match &inst.k {
            Some(k) => check_k(space, &universal, f, k)
                .map(|v| v.holds())
                .unwrap_or(false),
            None => universal_linear.feasible,
        };
        if plain.r_completeness(y).holds() && k_ok {
            applicable.push(results::COROLLARY_4);
        }
    }
    if integral_base == Some(true) {
        applicable.push(results::THEOREM_2);
        if r.is_universal() {
            applicable.push(results::COROLLARY_5);
        }
    }
    report.applicable_results = applicable.into_iter().map(String::from).collect();
    Ok(report)
}

/// Validates `(space, R, f)` with `Y = X`.
pub fn validate_corollary1(
    space: &FiniteDistanceSpace,
    r: &FiniteRelation,
    f: &SelfMap,
) -> Result<HypothesisReport> {
    validate(&Instance::whole(space.clone(), r.clone(), f.clone())?)
}

/// The two alternative uniqueness conditions, with the path constructions
/// that justify them checked explicitly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corollary3Report {
    /// (f′): `f(X)` is `R^s`-directed.
    pub directed: Verdict<(Point, Point)>,
    /// (f″): `R|_{f(X)}` is complete.
    pub complete: Verdict<(Point, Point)>,
    /// Longest shortest `R^s`-path between image points, `None` if some pair
    /// is unreachable.
    pub longest_path: Option<usize>,
    /// Path-length bounds hold: `<= 2` under (f′) and `<= 1` under (f″).
    pub constructions_verified: bool,
}

pub fn corollary3_variants(inst: &Instance) -> Corollary3Report {
    let r = &inst.relation;
    let rs = r.symmetrize();
    let image = inst.map.image_set();
    let directed = is_directed(&rs, &image);
    let complete = is_complete(r, &image);
    let mut longest = Some(0);
    for &a in &image {
        for &b in &image {
            longest = match (longest, find_path(&rs, a, b)) {
                (Some(m), Some(p)) => Some(m.max(p.length())),
                _ => None,
            };
        }
    }
    let within = |bound: usize| longest.is_some_and(|l| l <= bound);
    let constructions_verified =
        (!directed.holds() || within(2)) && (!complete.holds() || within(1));
    Corollary3Report {
        directed,
        complete,
        longest_path: longest,
        constructions_verified,
    }
}

/// Picard run from one admissible start during a cross-check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PicardRun {
    pub start: String,
    /// Fixed point reached, if any.
    pub reached: Option<String>,
}

/// A contradiction between a prediction and the brute-force oracle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Alarm {
    /// Existence predicted but `F(f)` is empty.
    MissingFixedPoint { source: String },
    /// Uniqueness predicted but `|F(f)| != 1`.
    NotUnique { source: String, count: usize },
    /// Picard iteration from an admissible start did not settle although
    /// existence was predicted.
    PicardDiverged { start: String },
    /// Picard reached a point outside `F(f)`.
    PicardOutsideFixedSet { start: String, point: String },
    /// Picard reached a fixed point with positive `d(y, f y)` under the
    /// predicted contraction.
    NonzeroResidual { start: String, point: String },
    /// The report names a start point the instance does not have.
    UnknownStart { start: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConsistencyVerdict {
    pub consistent: bool,
    pub fixed_points: Vec<String>,
    pub picard_runs: Vec<PicardRun>,
    pub alarms: Vec<Alarm>,
    /// The instance, serialised, whenever an alarm was raised.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<crate::document::InstanceDocument>,
}

fn expect(prediction: Prediction, source: &str, count: usize, alarms: &mut Vec<Alarm>) {
    match prediction {
        Prediction::NoGuarantee => {}
        Prediction::ExistenceGuaranteed if count == 0 => alarms.push(Alarm::MissingFixedPoint {
            source: source.to_string(),
        }),
        Prediction::UniqueFixedPoint if count != 1 => alarms.push(Alarm::NotUnique {
            source: source.to_string(),
            count,
        }),
        _ => {}
    }
}

/// Checks `report`'s predictions against `F(f)` and Picard runs from every
/// admissible start. Failed hypotheses never raise alarms: they are
/// sufficient conditions only.
pub fn cross_check(inst: &Instance, report: &HypothesisReport) -> ConsistencyVerdict {
    let space = &inst.space;
    let fixed = fixed_points(&inst.map);
    let mut alarms = Vec::new();
    expect(
        report.prediction,
        results::THEOREM_1,
        fixed.len(),
        &mut alarms,
    );
    if let Some(p) = report.integral_prediction {
        expect(p, results::THEOREM_2, fixed.len(), &mut alarms);
    }
    for name in [results::COROLLARY_4, results::COROLLARY_5] {
        if report.applicable_results.iter().any(|r| r == name) {
            expect(Prediction::UniqueFixedPoint, name, fixed.len(), &mut alarms);
        }
    }

    let guaranteed = report.prediction != Prediction::NoGuarantee;
    let mut runs = Vec::new();
    for label in &report.admissible_starts {
        let Some(start) = space.index_of(label) else {
            alarms.push(Alarm::UnknownStart {
                start: label.clone(),
            });
            continue;
        };
        let outcome = picard(
            space,
            &inst.map,
            start,
            default_max_iter(space),
            Some(&inst.relation),
        );
        match outcome {
            Ok((_, cert)) => {
                let point = space.label(cert.point).to_string();
                if !fixed.contains(&cert.point) {
                    alarms.push(Alarm::PicardOutsideFixedSet {
                        start: label.clone(),
                        point: point.clone(),
                    });
                }
                if guaranteed && !num_traits::Zero::is_zero(&cert.residual) {
                    alarms.push(Alarm::NonzeroResidual {
                        start: label.clone(),
                        point: point.clone(),
                    });
                }
                runs.push(PicardRun {
                    start: label.clone(),
                    reached: Some(point),
                });
            }
            Err(_) => {
                if guaranteed {
                    alarms.push(Alarm::PicardDiverged {
                        start: label.clone(),
                    });
                }
                runs.push(PicardRun {
                    start: label.clone(),
                    reached: None,
                });
            }
        }
    }
    let consistent = alarms.is_empty();
    ConsistencyVerdict {
        consistent,
        fixed_points: space.labels_of(&fixed),
        picard_runs: runs,
        instance: (!consistent).then(|| instance_to_document(inst)),
        alarms,
    }
}
