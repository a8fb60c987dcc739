//! JSON instance and report documents.
//!
//! Rationals travel as strings (`"3/2"`, `"2"`). Instance documents list
//! `sigma` as `[label, label, value]` triples; a pair given once also fixes
//! its mirror image unless strict loading is requested.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::analysis::{WalkContradiction, WalkSample};
use crate::contraction::IntegrandSpec;
use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::relation::{FiniteRelation, SelfMap, Verdict};
use crate::solver::{FixedPointCertificate, PicardTrace};
use crate::space::{
    check_metric, check_metric_like, check_partial_metric, classify, Axiom, FiniteDistanceSpace,
    Point, SpaceClass, Violation,
};
use crate::validator::{
    ConsistencyVerdict, Corollary3Report, HypothesisReport, Instance, Prediction,
};

/// Version stamped into every report document.
pub const SCHEMA_VERSION: u32 = 1;

fn doc_err(field: impl Into<String>, message: impl std::fmt::Display) -> Error {
    Error::Document {
        field: field.into(),
        message: message.to_string(),
    }
}

/// Integrand as `{kind, params}`: `constant` takes `[c]`, `power` takes
/// `[c, alpha]`, `piecewise_linear` takes `[t0, v0, t1, v1, ...]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RhoDocument {
    pub kind: String,
    pub params: Vec<String>,
}

impl RhoDocument {
    pub fn from_spec(rho: &IntegrandSpec) -> Self {
        let (kind, params) = match rho {
            IntegrandSpec::Constant { c } => ("constant", vec![format_rational(c)]),
            IntegrandSpec::Power { c, alpha } => {
                ("power", vec![format_rational(c), format_rational(alpha)])
            }
            IntegrandSpec::PiecewiseLinear { knots } => (
                "piecewise_linear",
                knots
                    .iter()
                    .flat_map(|(t, v)| [format_rational(t), format_rational(v)])
                    .collect(),
            ),
        };
        Self {
            kind: kind.to_string(),
            params,
        }
    }

    pub fn to_spec(&self) -> Result<IntegrandSpec> {
        let params = self
            .params
            .iter()
            .enumerate()
            .map(|(i, p)| parse_rational(p).map_err(|e| doc_err(format!("rho.params[{i}]"), e)))
            .collect::<Result<Vec<_>>>()?;
        let arity = |n: usize| {
            if params.len() == n {
                Ok(())
            } else {
                Err(doc_err(
                    "rho.params",
                    format!("`{}` takes {n} parameters, got {}", self.kind, params.len()),
                ))
            }
        };
        let spec = match self.kind.as_str() {
            "constant" => {
                arity(1)?;
                IntegrandSpec::constant(params[0].clone())
            }
            "power" => {
                arity(2)?;
                IntegrandSpec::power(params[0].clone(), params[1].clone())
            }
            "piecewise_linear" => {
                if params.is_empty() || params.len() % 2 != 0 {
                    return Err(doc_err(
                        "rho.params",
                        "expected an even, non-empty list of t, value",
                    ));
                }
                IntegrandSpec::piecewise_linear(
                    params
                        .chunks(2)
                        .map(|c| (c[0].clone(), c[1].clone()))
                        .collect(),
                )
            }
            other => {
                return Err(doc_err(
                    "rho.kind",
                    format!("unknown integrand kind `{other}`"),
                ))
            }
        };
        spec.validate().map_err(|e| doc_err("rho", e))?;
        Ok(spec)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub points: Vec<String>,
    pub sigma: Vec<(String, String, String)>,
    #[serde(default)]
    pub relation: Vec<(String, String)>,
    #[serde(default)]
    pub map: BTreeMap<String, String>,
    #[serde(rename = "Y", default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<RhoDocument>,
}

impl InstanceDocument {
    /// Parses JSON text; syntax and shape errors name the line and column.
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| doc_err(format!("line {} column {}", e.line(), e.column()), e))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialise")
    }

    fn lookup(&self, index: &BTreeMap<&str, Point>, field: String, label: &str) -> Result<Point> {
        index
            .get(label)
            .copied()
            .ok_or_else(|| doc_err(field, Error::UnknownLabel(label.to_string())))
    }

    fn index(&self) -> Result<BTreeMap<&str, Point>> {
        let mut index = BTreeMap::new();
        for (i, p) in self.points.iter().enumerate() {
            if index.insert(p.as_str(), i).is_some() {
                return Err(doc_err(
                    format!("points[{i}]"),
                    Error::DuplicateLabel(p.clone()),
                ));
            }
        }
        if index.is_empty() {
            return Err(doc_err("points", Error::EmptyCarrier));
        }
        Ok(index)
    }

    /// Builds the distance space. With `strict`, every ordered pair must be
    /// listed; otherwise `(x, y)` also supplies `(y, x)`.
    pub fn space(&self, strict: bool) -> Result<FiniteDistanceSpace> {
        let index = self.index()?;
        let n = self.points.len();
        let mut table: Vec<Vec<Option<Rational>>> = vec![vec![None; n]; n];
        for (i, (a, b, v)) in self.sigma.iter().enumerate() {
            let field = format!("sigma[{i}]");
            let x = self.lookup(&index, field.clone(), a)?;
            let y = self.lookup(&index, field.clone(), b)?;
            let value = parse_rational(v).map_err(|e| doc_err(field.clone(), e))?;
            if let Some(prev) = &table[x][y] {
                if *prev != value {
                    return Err(doc_err(
                        field,
                        format!(
                            "conflicting values {} and {} for ({a}, {b})",
                            format_rational(prev),
                            v
                        ),
                    ));
                }
            }
            table[x][y] = Some(value);
        }
        let mut rows = Vec::with_capacity(n);
        for x in 0..n {
            let mut row = Vec::with_capacity(n);
            for y in 0..n {
                let value = match (&table[x][y], &table[y][x]) {
                    (Some(v), _) => v.clone(),
                    (None, Some(v)) if !strict => v.clone(),
                    _ => {
                        return Err(doc_err(
                            "sigma",
                            Error::MissingDistance {
                                x: self.points[x].clone(),
                                y: self.points[y].clone(),
                            },
                        ))
                    }
                };
                row.push(value);
            }
            rows.push(row);
        }
        FiniteDistanceSpace::new(self.points.clone(), rows).map_err(|e| doc_err("sigma", e))
    }

    /// Builds the full instance; `Y` defaults to every point.
    pub fn to_instance(&self, strict: bool) -> Result<Instance> {
        let space = self.space(strict)?;
        let index = self.index()?;
        let n = space.len();

        let mut relation = FiniteRelation::empty(n);
        for (i, (a, b)) in self.relation.iter().enumerate() {
            let field = format!("relation[{i}]");
            let x = self.lookup(&index, field.clone(), a)?;
            let y = self.lookup(&index, field, b)?;
            relation.insert(x, y);
        }

        for label in self.map.keys() {
            self.lookup(&index, "map".into(), label)?;
        }
        let mut image = Vec::with_capacity(n);
        for p in &self.points {
            let target = self
                .map
                .get(p)
                .ok_or_else(|| doc_err("map", Error::MissingImage(p.clone())))?;
            image.push(self.lookup(&index, format!("map.{p}"), target)?);
        }
        let map = SelfMap::new(image).map_err(|e| doc_err("map", e))?;

        let y = match &self.y {
            Some(labels) => labels
                .iter()
                .enumerate()
                .map(|(i, l)| self.lookup(&index, format!("Y[{i}]"), l))
                .collect::<Result<Vec<_>>>()?,
            None => space.points().collect(),
        };
        let mut inst = Instance::new(space, relation, map, y).map_err(|e| doc_err("Y", e))?;
        if let Some(x0) = &self.x0 {
            let p = self.lookup(&index, "x0".into(), x0)?;
            inst = inst.with_x0(p)?;
        }
        if let Some(k) = &self.k {
            inst = inst.with_k(parse_rational(k).map_err(|e| doc_err("k", e))?);
        }
        if let Some(rho) = &self.rho {
            inst = inst.with_rho(rho.to_spec()?)?;
        }
        Ok(inst)
    }
}

/// Upper-triangle `sigma` triples, diagonal included.
fn sigma_of(space: &FiniteDistanceSpace) -> Vec<(String, String, String)> {
    let mut out = Vec::new();
    for x in space.points() {
        for y in x..space.len() {
            out.push((
                space.label(x).to_string(),
                space.label(y).to_string(),
                format_rational(space.dist(x, y)),
            ));
        }
    }
    out
}

pub fn space_to_document(space: &FiniteDistanceSpace) -> InstanceDocument {
    InstanceDocument {
        points: space.labels().to_vec(),
        sigma: sigma_of(space),
        relation: Vec::new(),
        map: BTreeMap::new(),
        y: None,
        x0: None,
        k: None,
        rho: None,
    }
}

pub fn instance_to_document(inst: &Instance) -> InstanceDocument {
    let space = inst.space();
    let label = |p: Point| space.label(p).to_string();
    InstanceDocument {
        points: space.labels().to_vec(),
        sigma: sigma_of(space),
        relation: inst
            .relation()
            .pairs()
            .map(|(x, y)| (label(x), label(y)))
            .collect(),
        map: space
            .points()
            .map(|x| (label(x), label(inst.map().apply(x))))
            .collect(),
        y: Some(space.labels_of(inst.y())),
        x0: inst.x0().map(label),
        k: inst.k().map(format_rational),
        rho: inst.rho().map(RhoDocument::from_spec),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ViolationDocument {
    pub axiom: Axiom,
    pub witness: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

impl ViolationDocument {
    fn new(space: &FiniteDistanceSpace, v: &Violation) -> Self {
        Self {
            axiom: v.axiom,
            witness: space.labels_of(&v.witness),
            lhs: format_rational(&v.lhs),
            rhs: format_rational(&v.rhs),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AxiomReportDocument {
    pub schema_version: u32,
    pub classification: SpaceClass,
    pub metric_like_violations: Vec<ViolationDocument>,
    pub partial_metric_violations: Vec<ViolationDocument>,
    pub metric_violations: Vec<ViolationDocument>,
}

impl AxiomReportDocument {
    pub fn new(space: &FiniteDistanceSpace) -> Self {
        let docs = |vs: &[Violation]| {
            vs.iter()
                .map(|v| ViolationDocument::new(space, v))
                .collect()
        };
        Self {
            schema_version: SCHEMA_VERSION,
            classification: classify(space),
            metric_like_violations: docs(&check_metric_like(space).violations),
            partial_metric_violations: docs(&check_partial_metric(space).violations),
            metric_violations: docs(&check_metric(space).violations),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CertificateDocument {
    pub point: String,
    pub self_distance: String,
    pub residual: String,
    pub iterations: usize,
    pub preserving_verified: bool,
}

impl CertificateDocument {
    pub fn new(space: &FiniteDistanceSpace, cert: &FixedPointCertificate) -> Self {
        Self {
            point: space.label(cert.point).to_string(),
            self_distance: format_rational(&cert.self_distance),
            residual: format_rational(&cert.residual),
            iterations: cert.iterations,
            preserving_verified: cert.preserving_verified,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SolveReportDocument {
    pub schema_version: u32,
    pub start: String,
    pub max_iter: usize,
    pub iterates: Vec<String>,
    pub gaps: Vec<String>,
    /// The constant behind `bounds`, when one in `[0, 1)` was available.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<String>,
    pub bounds: Vec<String>,
    pub converged: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateDocument>,
}

impl SolveReportDocument {
    pub fn new(
        space: &FiniteDistanceSpace,
        start: Point,
        max_iter: usize,
        trace: &PicardTrace,
        k: Option<&Rational>,
        certificate: Option<&FixedPointCertificate>,
    ) -> Self {
        let strs = |v: &[Rational]| v.iter().map(format_rational).collect();
        Self {
            schema_version: SCHEMA_VERSION,
            start: space.label(start).to_string(),
            max_iter,
            iterates: space.labels_of(&trace.iterates),
            gaps: strs(&trace.gaps),
            k: k.map(format_rational),
            bounds: strs(&trace.bounds),
            converged: certificate.is_some(),
            certificate: certificate.map(|c| CertificateDocument::new(space, c)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Corollary3Document {
    pub directed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directed_witness: Option<Vec<String>>,
    pub complete: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complete_witness: Option<Vec<String>>,
    pub longest_path: Option<usize>,
    pub constructions_verified: bool,
}

impl Corollary3Document {
    pub fn new(space: &FiniteDistanceSpace, rep: &Corollary3Report) -> Self {
        let witness =
            |v: &Verdict<(Point, Point)>| v.witness().map(|&(a, b)| space.labels_of(&[a, b]));
        Self {
            directed: rep.directed.holds(),
            directed_witness: witness(&rep.directed),
            complete: rep.complete.holds(),
            complete_witness: witness(&rep.complete),
            longest_path: rep.longest_path,
            constructions_verified: rep.constructions_verified,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ValidateReportDocument {
    pub schema_version: u32,
    #[serde(flatten)]
    pub report: HypothesisReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corollary3: Option<Corollary3Document>,
}

impl ValidateReportDocument {
    pub fn new(report: HypothesisReport, corollary3: Option<Corollary3Document>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            report,
            corollary3,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| doc_err(format!("line {} column {}", e.line(), e.column()), e))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WalkSummaryDocument {
    pub seed: u64,
    pub walks: usize,
    pub horizon: usize,
    pub stuck: usize,
    pub settled: usize,
    pub cauchy: usize,
    pub convergent: usize,
    pub contradictions: Vec<String>,
}

impl WalkSummaryDocument {
    pub fn new(
        space: &FiniteDistanceSpace,
        seed: u64,
        horizon: usize,
        walks: &[WalkSample],
        contradictions: &[WalkContradiction],
    ) -> Self {
        let count = |p: fn(&WalkSample) -> bool| walks.iter().filter(|w| p(w)).count();
        Self {
            seed,
            walks: walks.len(),
            horizon,
            stuck: count(|w| w.stuck),
            settled: count(|w| w.tail.is_some()),
            cauchy: count(|w| w.is_cauchy()),
            convergent: count(|w| w.converges()),
            contradictions: contradictions
                .iter()
                .map(|c| match c {
                    WalkContradiction::UnlistedTail { walk } => {
                        format!("walk {walk}: tail not among enumerated tail sets")
                    }
                    WalkContradiction::CauchyWithoutLimit { walk } => {
                        format!("walk {walk}: Cauchy without an admissible limit in Y")
                    }
                    WalkContradiction::UnrelatedLimit { walk, limit } => format!(
                        "walk {walk}: limit {} unrelated to its tail",
                        space.label(*limit)
                    ),
                    WalkContradiction::Discontinuity { walk, limit } => format!(
                        "walk {walk}: images do not converge to f({})",
                        space.label(*limit)
                    ),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OracleReportDocument {
    pub schema_version: u32,
    pub consistent: bool,
    pub prediction: Prediction,
    pub fixed_points: Vec<String>,
    pub verdict: ConsistencyVerdict,
    pub walks: WalkSummaryDocument,
}
