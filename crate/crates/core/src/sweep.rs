//! Exhaustive enumeration of small instances and the soundness sweep.
//!
//! Every symmetric table over a value grid that passes the metric-like
//! axioms is paired with every relation and every self-map, `Y = X`. Each
//! instance is validated and the prediction is checked against the
//! brute-force fixed-point set and Picard runs.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::contraction::IntegrandSpec;
use crate::document::{instance_to_document, InstanceDocument};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::relation::{FiniteRelation, SelfMap};
use crate::space::{check_metric_like, FiniteDistanceSpace};
use crate::validator::{corollary3_variants, cross_check, validate, Alarm, Instance, Prediction};

/// Largest carrier the sweep enumerates: relations are indexed by `n²`-bit
/// masks and the instance count grows as `2^(n²)·nⁿ`.
pub const MAX_SWEEP_SIZE: usize = 4;

fn labels(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| ((b'a' + i as u8) as char).to_string())
        .collect()
}

/// Every symmetric `n × n` table with entries from `values` that satisfies
/// the metric-like axioms, in lexicographic order of the upper triangle.
pub fn metric_like_tables(n: usize, values: &[Rational]) -> Vec<FiniteDistanceSpace> {
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let mut choice = vec![0usize; cells.len()];
    let mut out = Vec::new();
    if values.is_empty() || n == 0 {
        return out;
    }
    loop {
        let mut table = vec![vec![values[0].clone(); n]; n];
        for (&(i, j), &c) in cells.iter().zip(&choice) {
            table[i][j] = values[c].clone();
            table[j][i] = values[c].clone();
        }
        if let Ok(space) = FiniteDistanceSpace::new(labels(n), table) {
            if check_metric_like(&space).satisfied() {
                out.push(space);
            }
        }
        // Odometer increment, last cell fastest.
        let mut pos = cells.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < values.len() {
                break;
            }
            choice[pos] = 0;
        }
    }
}

/// All `2^(n²)` relations on `n` points.
pub fn all_relations(n: usize) -> impl Iterator<Item = FiniteRelation> {
    (0u64..1 << (n * n)).map(move |bits| FiniteRelation::from_bits(n, bits))
}

/// All `nⁿ` self-maps on `n` points.
pub fn all_maps(n: usize) -> impl Iterator<Item = SelfMap> {
    let total = n.pow(n as u32);
    (0..total).map(move |mut code| {
        let mut image = vec![0; n];
        for slot in image.iter_mut() {
            *slot = code % n;
            code /= n;
        }
        SelfMap::new(image).expect("digits are below n")
    })
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub max_size: usize,
    pub values: Vec<Rational>,
    pub rho: Option<IntegrandSpec>,
    /// Worker threads; `0` lets the pool decide.
    pub jobs: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            max_size: 3,
            values: (0..3).map(crate::rational::int).collect(),
            rho: None,
            jobs: 0,
        }
    }
}

/// One instance that broke an asserted property.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepFinding {
    pub property: String,
    pub detail: String,
    pub instance: InstanceDocument,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepSummary {
    pub tables: usize,
    pub instances: u64,
    pub existence_predictions: u64,
    pub unique_predictions: u64,
    pub integral_predictions: u64,
    /// Instances where `F(f)` is non-empty although no guarantee was given.
    pub fixed_points_without_guarantee: u64,
    pub findings: u64,
    /// The first findings, in enumeration order.
    pub examples: Vec<SweepFinding>,
}

/// Findings kept verbatim in a summary.
pub const MAX_REPORTED_FINDINGS: usize = 20;

impl SweepSummary {
    pub fn clean(&self) -> bool {
        self.findings == 0
    }

    fn merge(&mut self, other: SweepSummary) {
        self.tables += other.tables;
        self.instances += other.instances;
        self.existence_predictions += other.existence_predictions;
        self.unique_predictions += other.unique_predictions;
        self.integral_predictions += other.integral_predictions;
        self.fixed_points_without_guarantee += other.fixed_points_without_guarantee;
        self.findings += other.findings;
        for f in other.examples {
            if self.examples.len() < MAX_REPORTED_FINDINGS {
                self.examples.push(f);
            }
        }
    }

    fn record(&mut self, inst: &Instance, property: &str, detail: String) {
        self.findings += 1;
        if self.examples.len() < MAX_REPORTED_FINDINGS {
            self.examples.push(SweepFinding {
                property: property.to_string(),
                detail,
                instance: instance_to_document(inst),
            });
        }
    }
}

fn alarm_text(a: &Alarm) -> String {
    serde_json::to_string(a).expect("alarms serialise")
}

/// Validates and cross-checks one instance, recording every breach.
pub fn check_instance(inst: &Instance, summary: &mut SweepSummary) -> Result<()> {
    let report = validate(inst)?;
    summary.instances += 1;
    match report.prediction {
        Prediction::ExistenceGuaranteed => summary.existence_predictions += 1,
        Prediction::UniqueFixedPoint => {
            summary.existence_predictions += 1;
            summary.unique_predictions += 1;
        }
        Prediction::NoGuarantee => {}
    }
    if report
        .integral_prediction
        .is_some_and(|p| p != Prediction::NoGuarantee)
    {
        summary.integral_predictions += 1;
    }

    let verdict = cross_check(inst, &report);
    if report.prediction == Prediction::NoGuarantee && !verdict.fixed_points.is_empty() {
        summary.fixed_points_without_guarantee += 1;
    }
    for alarm in &verdict.alarms {
        summary.record(inst, "soundness", alarm_text(alarm));
    }
    if report.complete_image.holds && !report.paths.holds {
        summary.record(inst, "subsumption", "(f'') holds but (f) fails".into());
    }
    if report.directed_image.holds && !report.paths.holds {
        summary.record(inst, "subsumption", "(f') holds but (f) fails".into());
    }
    let c3 = corollary3_variants(inst);
    if !c3.constructions_verified {
        summary.record(
            inst,
            "path-construction",
            format!("longest shortest path {:?}", c3.longest_path),
        );
    }
    Ok(())
}

fn sweep_table(space: &FiniteDistanceSpace, rho: Option<&IntegrandSpec>) -> Result<SweepSummary> {
    let n = space.len();
    let mut summary = SweepSummary {
        tables: 1,
        ..SweepSummary::default()
    };
    let maps: Vec<SelfMap> = all_maps(n).collect();
    for relation in all_relations(n) {
        for map in &maps {
            let mut inst = Instance::whole(space.clone(), relation.clone(), map.clone())?;
            if let Some(rho) = rho {
                inst = inst.with_rho(rho.clone())?;
            }
            check_instance(&inst, &mut summary)?;
        }
    }
    Ok(summary)
}

/// Runs the sweep over carriers of size `1..=max_size`. Results are merged
/// in enumeration order, so the summary does not depend on `jobs`.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepSummary> {
    if config.max_size > MAX_SWEEP_SIZE {
        return Err(Error::TooLarge {
            what: "sweep carrier",
            size: config.max_size,
            max: MAX_SWEEP_SIZE,
        });
    }
    if let Some(rho) = &config.rho {
        rho.validate()?;
    }
    let tables: Vec<FiniteDistanceSpace> = (1..=config.max_size)
        .flat_map(|n| metric_like_tables(n, &config.values))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Error::Document {
            field: "jobs".into(),
            message: e.to_string(),
        })?;
    let parts: Vec<Result<SweepSummary>> = pool.install(|| {
        tables
            .par_iter()
            .map(|t| sweep_table(t, config.rho.as_ref()))
            .collect()
    });
    let mut total = SweepSummary::default();
    for part in parts {
        total.merge(part?);
    }
    Ok(total)
}
