//! Command-line front-end.
//!
//! Each subcommand reads a JSON instance document and returns a
//! [`CommandOutput`]; the binary only prints it and exits with its code.
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | metric-like / unique fixed point / converged / consistent / clean sweep |
//! | 1 | existence guaranteed without uniqueness (`validate`) |
//! | 2 | not metric-like (`check-axioms`), no guarantee (`validate`) |
//! | 3 | Picard iteration did not reach a fixed point (`solve`) |
//! | 5 | soundness alarm (`oracle`, `sweep`) |
//! | 64 | malformed input or usage |

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_traits::{One, Signed};
use serde::Serialize;

use crate::analysis::{simulate_walks, walk_contradictions};
use crate::contraction::minimal_k;
use crate::document::{
    AxiomReportDocument, Corollary3Document, InstanceDocument, OracleReportDocument, RhoDocument,
    SolveReportDocument, ValidateReportDocument, WalkSummaryDocument, SCHEMA_VERSION,
};
use crate::error::Error;
use crate::rational::{format_rational, parse_rational, Rational};
use crate::relation::is_f_closed;
use crate::solver::{default_max_iter, picard, SolveError};
use crate::space::{FiniteDistanceSpace, Point};
use crate::sweep::{run_sweep, SweepConfig};
use crate::validator::{
    corollary3_variants, cross_check, validate, ConditionEntry, HypothesisReport, Instance,
    Prediction,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_EXISTENCE_ONLY: i32 = 1;
pub const EXIT_NEGATIVE: i32 = 2;
pub const EXIT_NON_CONVERGENCE: i32 = 3;
pub const EXIT_ALARM: i32 = 5;
pub const EXIT_MALFORMED: i32 = 64;

/// Default seed for randomised subcommands.
pub const DEFAULT_SEED: u64 = 0;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CommandOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandOutput {
    fn ok(code: i32, stdout: String) -> Self {
        Self {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn malformed(path: &Path, err: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_MALFORMED,
            stdout: String::new(),
            stderr: format!("error: {}: {err}\n", path.display()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "relcontract",
    version,
    about = "Check fixed-point hypotheses on finite metric-like instances"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Instance document (JSON).
    pub path: PathBuf,
    /// Require every ordered sigma pair to be listed.
    #[arg(long)]
    pub strict: bool,
    /// Emit the machine-readable report.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the distance table and list axiom violations.
    CheckAxioms(InputArgs),
    /// Evaluate every hypothesis and report the prediction.
    Validate {
        #[command(flatten)]
        input: InputArgs,
        /// Also verify the path constructions behind (f') and (f'').
        #[arg(long)]
        corollaries: bool,
    },
    /// Run Picard iteration and certify the fixed point.
    Solve {
        #[command(flatten)]
        input: InputArgs,
        /// Start label; defaults to the document's x0, then the first
        /// admissible start, then the first point.
        #[arg(long)]
        x0: Option<String>,
        /// Applications of f before giving up; defaults to |X| + 1.
        #[arg(long)]
        max_iter: Option<usize>,
    },
    /// Cross-check a prediction against brute force and random walks.
    Oracle {
        #[command(flatten)]
        input: InputArgs,
        /// Check this validate report instead of a fresh one.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        walks: usize,
        #[arg(long, default_value_t = 200)]
        horizon: usize,
    },
    /// Exhaustive soundness sweep over small metric-like instances.
    Sweep {
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        /// Comma-separated distance grid.
        #[arg(long, default_value = "0,1,2")]
        values: String,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Integrand kind for the integral route.
        #[arg(long, requires = "rho_params")]
        rho_kind: Option<String>,
        /// Comma-separated integrand parameters.
        #[arg(long)]
        rho_params: Option<String>,
        #[arg(long)]
        json: bool,
    },
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> CommandOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli.command),
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_MALFORMED
            } else {
                EXIT_OK
            };
            let text = e.render().to_string();
            if code == EXIT_OK {
                CommandOutput::ok(code, text)
            } else {
                CommandOutput {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            }
        }
    }
}

pub fn execute(command: Command) -> CommandOutput {
    match command {
        Command::CheckAxioms(input) => cmd_check_axioms(&input),
        Command::Validate { input, corollaries } => cmd_validate(&input, corollaries),
        Command::Solve {
            input,
            x0,
            max_iter,
        } => cmd_solve(&input, x0.as_deref(), max_iter),
        Command::Oracle {
            input,
            report,
            seed,
            walks,
            horizon,
        } => cmd_oracle(&input, report.as_deref(), seed, walks, horizon),
        Command::Sweep {
            max_size,
            values,
            jobs,
            rho_kind,
            rho_params,
            json,
        } => cmd_sweep(max_size, &values, jobs, rho_kind, rho_params, json),
    }
}

fn read_document(path: &Path) -> Result<InstanceDocument, CommandOutput> {
    let text = std::fs::read_to_string(path).map_err(|e| CommandOutput::malformed(path, e))?;
    InstanceDocument::parse(&text).map_err(|e| CommandOutput::malformed(path, e))
}

fn load_instance(input: &InputArgs) -> Result<Instance, CommandOutput> {
    read_document(&input.path)?
        .to_instance(input.strict)
        .map_err(|e| CommandOutput::malformed(&input.path, e))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialise");
    s.push('\n');
    s
}

pub fn cmd_check_axioms(input: &InputArgs) -> CommandOutput {
    let space = match read_document(&input.path).and_then(|d| {
        d.space(input.strict)
            .map_err(|e| CommandOutput::malformed(&input.path, e))
    }) {
        Ok(s) => s,
        Err(out) => return out,
    };
    let doc = AxiomReportDocument::new(&space);
    let code = if doc.metric_like_violations.is_empty() {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    };
    if input.json {
        return CommandOutput::ok(code, to_json(&doc));
    }
    let mut out = format!("classification: {}\n", doc.classification);
    for (name, list) in [
        ("metric-like", &doc.metric_like_violations),
        ("partial metric", &doc.partial_metric_violations),
        ("metric", &doc.metric_violations),
    ] {
        if list.is_empty() {
            let _ = writeln!(out, "{name} axioms: satisfied");
            continue;
        }
        let _ = writeln!(out, "{name} axioms: {} violation(s)", list.len());
        for v in list {
            let axiom = serde_json::to_value(v.axiom).expect("axiom serialises");
            let _ = writeln!(
                out,
                "  {} at ({}): {} vs {}",
                axiom.as_str().unwrap_or_default(),
                v.witness.join(", "),
                v.lhs,
                v.rhs
            );
        }
    }
    CommandOutput::ok(code, out)
}

fn prediction_code(p: Prediction) -> i32 {
    match p {
        Prediction::UniqueFixedPoint => EXIT_OK,
        Prediction::ExistenceGuaranteed => EXIT_EXISTENCE_ONLY,
        Prediction::NoGuarantee => EXIT_NEGATIVE,
    }
}

fn condition_line(out: &mut String, name: &str, e: &ConditionEntry) {
    let _ = write!(
        out,
        "{name:<34} {}",
        if e.holds { "holds" } else { "fails" }
    );
    if let Some(w) = &e.witness {
        let _ = write!(out, "  [{}]", w.join(", "));
    }
    if let Some(d) = &e.detail {
        let _ = write!(out, "  {d}");
    }
    out.push('\n');
}

fn render_report(report: &HypothesisReport) -> String {
    let mut out = String::new();
    condition_line(&mut out, "metric-like", &report.metric_like);
    condition_line(&mut out, "(a) R-complete", &report.r_complete);
    condition_line(&mut out, "(b) related start", &report.start_point);
    condition_line(&mut out, "(c) f-closed", &report.f_closed);
    condition_line(&mut out, "(d) R-continuous-like", &report.r_continuity_like);
    condition_line(&mut out, "(d) self-closed", &report.self_closed);
    condition_line(&mut out, "(d) either", &report.continuity_or_self_closed);
    condition_line(&mut out, "(e) contraction", &report.contraction);
    condition_line(&mut out, "(f) paths between images", &report.paths);
    condition_line(&mut out, "(f') image directed", &report.directed_image);
    condition_line(&mut out, "(f'') image complete", &report.complete_image);
    if let Some(e) = &report.integral_contraction {
        condition_line(&mut out, "integral contraction", e);
    }
    let _ = writeln!(
        out,
        "kStar = {} on related pairs, {} on all pairs",
        report.k_star, report.universal_k_star
    );
    if let Some(k) = &report.integral_k_star {
        let _ = writeln!(out, "integral kStar = {k}");
    }
    let _ = writeln!(
        out,
        "admissible starts: [{}]",
        report.admissible_starts.join(", ")
    );
    let _ = writeln!(out, "prediction: {}", report.prediction);
    if let Some(p) = report.integral_prediction {
        let _ = writeln!(out, "integral prediction: {p}");
    }
    let _ = writeln!(
        out,
        "applicable: [{}]",
        report.applicable_results.join(", ")
    );
    out
}

pub fn cmd_validate(input: &InputArgs, corollaries: bool) -> CommandOutput {
    let inst = match load_instance(input) {
        Ok(i) => i,
        Err(out) => return out,
    };
    let report = match validate(&inst) {
        Ok(r) => r,
        Err(e) => return CommandOutput::malformed(&input.path, e),
    };
    let code = prediction_code(report.prediction);
    let c3 =
        corollaries.then(|| Corollary3Document::new(inst.space(), &corollary3_variants(&inst)));
    if input.json {
        return CommandOutput::ok(code, to_json(&ValidateReportDocument::new(report, c3)));
    }
    let mut out = render_report(&report);
    if let Some(c3) = c3 {
        let _ = writeln!(
            out,
            "corollary constructions: directed {}, complete {}, longest path {}, verified {}",
            c3.directed,
            c3.complete,
            c3.longest_path
                .map_or("none".to_string(), |l| l.to_string()),
            c3.constructions_verified
        );
    }
    CommandOutput::ok(code, out)
}

/// A constant in `[0, 1)` for the a-priori bounds from `start`: the
/// document's `k`, else the least constant on related pairs. The bounds only
/// apply to a related start under an `f`-closed relation.
fn bound_constant(inst: &Instance, start: Point) -> Option<Rational> {
    let (r, f) = (inst.relation(), inst.map());
    if !r.contains(start, f.apply(start)) || !is_f_closed(r, f).holds() {
        return None;
    }
    let in_range = |k: &Rational| !k.is_negative() && *k < Rational::one();
    let k = match inst.k() {
        Some(k) => k.clone(),
        None => minimal_k(inst.space(), r, f).k_star.as_rational()?,
    };
    in_range(&k).then_some(k)
}

pub fn cmd_solve(input: &InputArgs, x0: Option<&str>, max_iter: Option<usize>) -> CommandOutput {
    let inst = match load_instance(input) {
        Ok(i) => i,
        Err(out) => return out,
    };
    let space = inst.space();
    let start = match x0 {
        Some(label) => match space.point(label) {
            Ok(p) => p,
            Err(e) => return CommandOutput::malformed(&input.path, format!("--x0: {e}")),
        },
        None => inst.x0().unwrap_or_else(|| {
            space
                .points()
                .find(|&x| inst.relation().contains(x, inst.map().apply(x)))
                .unwrap_or(0)
        }),
    };
    let max_iter = max_iter.unwrap_or_else(|| default_max_iter(space));
    let k = bound_constant(&inst, start);
    let (mut trace, cert) = match picard(space, inst.map(), start, max_iter, Some(inst.relation()))
    {
        Ok((trace, cert)) => (trace, Some(cert)),
        Err(SolveError::NonConvergence { trace, .. }) => (trace, None),
        Err(SolveError::Invalid(e)) => return CommandOutput::malformed(&input.path, e),
    };
    if let Some(k) = &k {
        trace
            .attach_bounds(k)
            .expect("bound constant lies in [0, 1)");
    }
    let doc = SolveReportDocument::new(space, start, max_iter, &trace, k.as_ref(), cert.as_ref());
    let code = if doc.converged {
        EXIT_OK
    } else {
        EXIT_NON_CONVERGENCE
    };
    if input.json {
        return CommandOutput::ok(code, to_json(&doc));
    }
    CommandOutput::ok(code, render_solve(&doc))
}

fn render_solve(doc: &SolveReportDocument) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "iterates: {}", doc.iterates.join(" -> "));
    let _ = writeln!(out, "gaps:     [{}]", doc.gaps.join(", "));
    match &doc.k {
        Some(k) => {
            let _ = writeln!(out, "bounds (k = {k}): [{}]", doc.bounds.join(", "));
        }
        None => {
            let _ = writeln!(
                out,
                "bounds: none (needs a related start, an f-closed relation and k below 1)"
            );
        }
    }
    match &doc.certificate {
        Some(c) => {
            let _ = writeln!(
                out,
                "fixed point {} after {} application(s); d(y, y) = {}, residual = {}, preserving = {}",
                c.point, c.iterations, c.self_distance, c.residual, c.preserving_verified
            );
        }
        None => {
            let _ = writeln!(out, "no fixed point within {} application(s)", doc.max_iter);
        }
    }
    out
}

pub fn cmd_oracle(
    input: &InputArgs,
    report_path: Option<&Path>,
    seed: u64,
    walks: usize,
    horizon: usize,
) -> CommandOutput {
    let inst = match load_instance(input) {
        Ok(i) => i,
        Err(out) => return out,
    };
    let report = match report_path {
        Some(path) => {
            let parsed = std::fs::read_to_string(path)
                .map_err(|e| Error::Document {
                    field: "report".into(),
                    message: e.to_string(),
                })
                .and_then(|t| ValidateReportDocument::parse(&t));
            match parsed {
                Ok(doc) => doc.report,
                Err(e) => return CommandOutput::malformed(path, e),
            }
        }
        None => match validate(&inst) {
            Ok(r) => r,
            Err(e) => return CommandOutput::malformed(&input.path, e),
        },
    };
    let verdict = cross_check(&inst, &report);
    let space = inst.space();
    let sampled =
        simulate_walks(space, inst.relation(), inst.y(), walks, horizon, seed).and_then(|w| {
            walk_contradictions(space, inst.relation(), inst.y(), Some(inst.map()), &w)
                .map(|c| (w, c))
        });
    let (samples, contradictions) = match sampled {
        Ok(pair) => pair,
        Err(e) => return CommandOutput::malformed(&input.path, e),
    };
    let summary = WalkSummaryDocument::new(space, seed, horizon, &samples, &contradictions);
    let consistent = verdict.consistent && contradictions.is_empty();
    let doc = OracleReportDocument {
        schema_version: SCHEMA_VERSION,
        consistent,
        prediction: report.prediction,
        fixed_points: verdict.fixed_points.clone(),
        verdict,
        walks: summary,
    };
    let code = if consistent { EXIT_OK } else { EXIT_ALARM };
    if input.json {
        return CommandOutput::ok(code, to_json(&doc));
    }
    CommandOutput::ok(code, render_oracle(&doc, space))
}

fn render_oracle(doc: &OracleReportDocument, space: &FiniteDistanceSpace) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "F(f) = {{{}}}", doc.fixed_points.join(", "));
    let _ = writeln!(out, "prediction: {}", doc.prediction);
    for run in &doc.verdict.picard_runs {
        let _ = writeln!(
            out,
            "picard from {}: {}",
            run.start,
            run.reached.as_deref().unwrap_or("no fixed point")
        );
    }
    let w = &doc.walks;
    let _ = writeln!(
        out,
        "walks (seed {}, {} x {} steps over {} points): {} stuck, {} settled, {} Cauchy, {} convergent",
        w.seed,
        w.walks,
        w.horizon,
        space.len(),
        w.stuck,
        w.settled,
        w.cauchy,
        w.convergent
    );
    for c in &w.contradictions {
        let _ = writeln!(out, "walk contradiction: {c}");
    }
    for a in &doc.verdict.alarms {
        let _ = writeln!(
            out,
            "ALARM: {}",
            serde_json::to_string(a).expect("alarms serialise")
        );
    }
    if let Some(inst) = &doc.verdict.instance {
        let _ = writeln!(out, "instance:\n{}", inst.to_json());
    }
    let _ = writeln!(
        out,
        "{}",
        if doc.consistent {
            "consistent"
        } else {
            "SOUNDNESS ALARM"
        }
    );
    out
}

fn parse_list(field: &str, text: &str) -> Result<Vec<Rational>, Error> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            parse_rational(s).map_err(|e| Error::Document {
                field: field.to_string(),
                message: e.to_string(),
            })
        })
        .collect()
}

pub fn cmd_sweep(
    max_size: usize,
    values: &str,
    jobs: usize,
    rho_kind: Option<String>,
    rho_params: Option<String>,
    json: bool,
) -> CommandOutput {
    let usage = |e: Error| CommandOutput {
        code: EXIT_MALFORMED,
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
    };
    let values = match parse_list("--values", values) {
        Ok(v) => v,
        Err(e) => return usage(e),
    };
    let rho = match rho_kind {
        Some(kind) => {
            let params = parse_list("--rho-params", rho_params.as_deref().unwrap_or(""))
                .map(|v| v.iter().map(format_rational).collect());
            match params.and_then(|params| RhoDocument { kind, params }.to_spec()) {
                Ok(spec) => Some(spec),
                Err(e) => return usage(e),
            }
        }
        None => None,
    };
    let config = SweepConfig {
        max_size,
        values,
        rho,
        jobs,
    };
    let summary = match run_sweep(&config) {
        Ok(s) => s,
        Err(e) => return usage(e),
    };
    let code = if summary.clean() { EXIT_OK } else { EXIT_ALARM };
    if json {
        return CommandOutput::ok(code, to_json(&summary));
    }
    let mut out = format!(
        "{} tables, {} instances: {} with existence predicted, {} with uniqueness predicted, {} integral predictions\n",
        summary.tables,
        summary.instances,
        summary.existence_predictions,
        summary.unique_predictions,
        summary.integral_predictions
    );
    let _ = writeln!(
        out,
        "{} instances have fixed points without any guarantee",
        summary.fixed_points_without_guarantee
    );
    let _ = writeln!(out, "{} finding(s)", summary.findings);
    for f in &summary.examples {
        let _ = writeln!(
            out,
            "  {}: {}\n{}",
            f.property,
            f.detail,
            f.instance.to_json()
        );
    }
    CommandOutput::ok(code, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_64() {
        let out = run(["relcontract", "validate"]);
        assert_eq!(out.code, EXIT_MALFORMED);
        assert!(!out.stderr.is_empty());
        let out = run(["relcontract", "frobnicate", "x.json"]);
        assert_eq!(out.code, EXIT_MALFORMED);
    }

    #[test]
    fn help_exits_zero() {
        let out = run(["relcontract", "--help"]);
        assert_eq!(out.code, EXIT_OK);
        assert!(out.stdout.contains("check-axioms"));
    }

    #[test]
    fn missing_file_is_malformed() {
        let out = run(["relcontract", "solve", "/nonexistent/instance.json"]);
        assert_eq!(out.code, EXIT_MALFORMED);
        assert!(out.stderr.contains("/nonexistent/instance.json"));
    }

    #[test]
    fn sweep_rejects_bad_grid() {
        let out = run(["relcontract", "sweep", "--values", "0,0.5"]);
        assert_eq!(out.code, EXIT_MALFORMED);
        let out = run(["relcontract", "sweep", "--max-size", "1", "--values", "0,1"]);
        assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    }
}
