//! Acceptance suite: one line per criterion, non-zero exit if any fails.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use relcontract::analysis::{
    check_r_completeness, check_r_continuity_like, check_sigma_self_closed, realizable_tail_sets,
    simulate_walks, walk_contradictions,
};
use relcontract::contraction::{integral_minimal_k, minimal_k};
use relcontract::rational::{int, rat};
use relcontract::relation::{find_path, is_complete, is_directed};
use relcontract::solver::{default_max_iter, fixed_points, picard};
use relcontract::space::{
    check_metric, check_metric_like, check_partial_metric, classify, Axiom, Violation,
};
use relcontract::validator::validate;
use relcontract::{
    fixtures, FiniteDistanceSpace, FiniteRelation, Instance, IntegrandSpec, KValue, Point,
    Prediction, Rational, SelfMap, SpaceClass,
};

use common::*;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn grid() -> Vec<Rational> {
    (0..3).map(int).collect()
}

/// Symmetric tables over `{0, 1, 2}` on `n` points that pass the
/// metric-like axioms, enumerated and filtered here rather than by the
/// library.
fn grid_tables(n: usize) -> Vec<FiniteDistanceSpace> {
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let g = grid();
    let total = g.len().pow(cells.len() as u32);
    let mut out = Vec::new();
    for mut code in 0..total {
        let mut t = vec![vec![Rational::zero(); n]; n];
        for &(i, j) in &cells {
            let v = g[code % g.len()].clone();
            code /= g.len();
            t[i][j] = v.clone();
            t[j][i] = v;
        }
        let s = FiniteDistanceSpace::new(labels(n), t).expect("symmetric grid table");
        if axiom_truth(&s).metric_like {
            out.push(s);
        }
    }
    out
}

fn maps(n: usize) -> Vec<SelfMap> {
    (0..n.pow(n as u32))
        .map(|mut code| {
            SelfMap::new(
                (0..n)
                    .map(|_| {
                        let v = code % n;
                        code /= n;
                        v
                    })
                    .collect(),
            )
            .unwrap()
        })
        .collect()
}

fn relations(n: usize) -> impl Iterator<Item = FiniteRelation> {
    (0u64..1 << (n * n)).map(move |bits| {
        let mut r = FiniteRelation::empty(n);
        for i in 0..n * n {
            if bits >> i & 1 == 1 {
                r.insert(i / n, i % n);
            }
        }
        r
    })
}

fn criterion_1() -> Outcome {
    let sigma = fixtures::example1_sigma();
    let c = sigma.point("c").unwrap();
    let a = sigma.point("a").unwrap();
    let class = classify(&sigma);
    ensure(class == SpaceClass::MetricLike, || {
        format!("sigma classified {class}")
    })?;
    let expected = Violation {
        axiom: Axiom::P2,
        witness: vec![c, a],
        lhs: int(2),
        rhs: int(1),
    };
    ensure(
        check_partial_metric(&sigma).violations.contains(&expected),
        || "sigma lacks the p2 violation at (c, a) with values (2, 1)".into(),
    )?;

    let p = fixtures::example1_p();
    let b = p.point("b").unwrap();
    ensure(
        check_metric(&p)
            .violations
            .iter()
            .any(|v| v.axiom == Axiom::ZeroSelfDistance && v.witness == vec![b]),
        || "p lacks the zero-self-distance violation at b".into(),
    )?;
    let class = classify(&p);
    if class != SpaceClass::PartialMetric {
        let p1: Vec<String> = check_partial_metric(&p)
            .violations
            .iter()
            .map(|v| format!("{:?} at ({})", v.axiom, p.labels_of(&v.witness).join(", ")))
            .collect();
        return Err(format!(
            "sigma: MetricLike with p2 (c, a) = (2, 1) as expected; metric violation at b as \
             expected; but p is classified {class}, not PartialMetric: {} \
             (p(b,b) = p(b,c) = p(c,c) = 1 with b != c)",
            p1.join(", ")
        ));
    }
    Ok("sigma MetricLike with p2 (c, a) = (2, 1); p PartialMetric, metric violation at b".into())
}

fn criterion_2() -> Outcome {
    let doc = load_fixture("example2.json");
    let ex = fixtures::example2();
    ensure(doc == ex, || {
        "example2.json differs from the built-in instance".into()
    })?;
    let space = ex.space();
    let (a, b) = (space.point("a").unwrap(), space.point("b").unwrap());
    ensure(ex.y() == [a, b], || "Y is not {a, b}".into())?;

    let rep = validate(&ex).map_err(|e| e.to_string())?;
    for (name, e) in [
        ("(a)", &rep.r_complete),
        ("(b)", &rep.start_point),
        ("(c)", &rep.f_closed),
        ("(d)", &rep.continuity_or_self_closed),
        ("(e)", &rep.contraction),
        ("(f)", &rep.paths),
        ("(f')", &rep.directed_image),
        ("(f'')", &rep.complete_image),
    ] {
        ensure(e.holds, || format!("condition {name} fails: {e:?}"))?;
    }
    ensure(rep.prediction == Prediction::UniqueFixedPoint, || {
        format!("prediction {}", rep.prediction)
    })?;

    let k_r = minimal_k(space, ex.relation(), ex.map()).k_star;
    ensure(k_r.as_rational() == Some(int(0)), || {
        format!("kStar over R = {k_r}")
    })?;
    let k_u = minimal_k(space, &FiniteRelation::universal(3), ex.map()).k_star;
    ensure(k_u.as_rational() == Some(rat(1, 2)), || {
        format!("kStar over X x X = {k_u}")
    })?;
    ensure(rep.k_star == k_r && rep.universal_k_star == k_u, || {
        "report disagrees with minimal_k".into()
    })?;

    let (trace, cert) =
        picard(space, ex.map(), a, 10, Some(ex.relation())).map_err(|e| e.to_string())?;
    ensure(cert.point == b && cert.iterations == 1, || {
        format!(
            "picard from a: {:?} after {}",
            trace.iterates, cert.iterations
        )
    })?;
    ensure(fixed_points(ex.map()) == vec![b], || "F(f) != {b}".into())?;
    Ok(
        "(a)-(f) hold on Y = {a, b}; kStar 0 over R, 1/2 over X x X; a -> b in 1 step; F(f) = {b}"
            .into(),
    )
}

fn criterion_3() -> Outcome {
    let mut instances = 0u64;
    let mut existence = 0u64;
    let mut unique = 0u64;
    let mut tables = 0usize;
    for n in 1..=3 {
        let ms = maps(n);
        for space in grid_tables(n) {
            tables += 1;
            for r in relations(n) {
                for f in &ms {
                    let inst = Instance::whole(space.clone(), r.clone(), f.clone()).unwrap();
                    let rep = validate(&inst).map_err(|e| e.to_string())?;
                    instances += 1;
                    let fixed: Vec<Point> = (0..n).filter(|&x| f.apply(x) == x).collect();
                    let alarm = |what: &str| {
                        format!(
                            "{what}: {}",
                            relcontract::document::instance_to_document(&inst).to_json()
                        )
                    };
                    if rep.prediction == Prediction::NoGuarantee {
                        continue;
                    }
                    existence += 1;
                    ensure(!fixed.is_empty(), || {
                        alarm("existence predicted, F(f) empty")
                    })?;
                    if rep.prediction == Prediction::UniqueFixedPoint {
                        unique += 1;
                        ensure(fixed.len() == 1, || {
                            alarm("uniqueness predicted, |F(f)| != 1")
                        })?;
                    }
                    for x0 in (0..n).filter(|&x| r.contains(x, f.apply(x))) {
                        let mut x = x0;
                        for _ in 0..=n {
                            x = f.apply(x);
                        }
                        ensure(fixed.contains(&x), || alarm("Picard orbit misses F(f)"))?;
                    }
                }
            }
        }
    }
    ensure(tables == 3 + 18 + 216, || {
        format!("{tables} tables enumerated")
    })?;
    Ok(format!(
        "{instances} instances over {tables} tables; {existence} existence and {unique} uniqueness predictions, 0 alarms"
    ))
}

fn criterion_4() -> Outcome {
    let mut rng = rng(4);
    let mut found = 0;
    let mut attempts = 0u64;
    let mut checked_pairs = 0u64;
    while found < 1000 {
        attempts += 1;
        ensure(attempts < 2_000_000, || {
            format!("only {found} feasible instances found")
        })?;
        let n = 2 + (attempts % 5) as usize;
        let space = match attempts % 3 {
            0 => random_line_metric(&mut rng, n),
            1 => random_max_partial_metric(&mut rng, n),
            _ => random_metric_like(&mut rng, n),
        };
        let n = space.len();
        let f = random_map(&mut rng, n);
        let x0 = rand::Rng::random_range(&mut rng, 0..n);
        let mut seed = vec![(x0, f.apply(x0))];
        if attempts % 2 == 0 {
            let a = rand::Rng::random_range(&mut rng, 0..n);
            let b = rand::Rng::random_range(&mut rng, 0..n);
            seed.push((a, b));
        }
        let r = f_closure(n, &f, &seed);
        let rep = minimal_k(&space, &r, &f);
        if !rep.feasible {
            continue;
        }
        let k = rep.k_star.as_rational().expect("linear kStar is rational");
        found += 1;

        let max_iter = default_max_iter(&space);
        let (trace, cert) = picard(&space, &f, x0, max_iter, Some(&r)).map_err(|e| {
            format!(
                "feasible instance did not converge: {e}; f = {:?}, x0 = {x0}, R = {:?}",
                f.as_slice(),
                r.pairs().collect::<Vec<_>>()
            )
        })?;
        ensure(cert.preserving_verified, || "orbit left R".into())?;
        let d0 = trace.gaps[0].clone();
        let mut kn = Rational::one();
        for (step, gap) in trace.gaps.iter().enumerate() {
            ensure(*gap <= &kn * &d0, || {
                format!("gap {step}: {gap} > k^n d0 with k = {k}, d0 = {d0}")
            })?;
            let bound = &kn * &d0 / (Rational::one() - &k);
            for m in step + 1..trace.iterates.len() {
                checked_pairs += 1;
                let dist = space.dist(trace.iterates[step], trace.iterates[m]);
                ensure(*dist <= bound, || {
                    format!("d(x_{step}, x_{m}) = {dist} exceeds {bound} (k = {k})")
                })?;
            }
            kn *= &k;
        }
    }
    Ok(format!(
        "1000 feasible instances from {attempts} draws, {checked_pairs} (n, m) pairs, 0 violations"
    ))
}

fn criterion_5() -> Outcome {
    let mut rng = rng(5);
    let mut counts = [0usize; 4];
    for i in 0..1000 {
        let n = 1 + i % 5;
        let space = match i % 4 {
            0 => random_table(&mut rng, n, 4),
            1 => random_line_metric(&mut rng, n),
            2 => random_max_partial_metric(&mut rng, n),
            _ => random_metric_like(&mut rng, n),
        };
        let m = check_metric(&space);
        let pm = check_partial_metric(&space);
        let ml = check_metric_like(&space);
        let truth = axiom_truth(&space);
        ensure(m.satisfied() == truth.metric, || {
            format!("metric check disagrees on table {i}")
        })?;
        ensure(pm.satisfied() == truth.partial_metric, || {
            format!("partial metric check disagrees on table {i}")
        })?;
        ensure(ml.satisfied() == truth.metric_like, || {
            format!("metric-like check disagrees on table {i}")
        })?;
        ensure(!m.satisfied() || pm.satisfied(), || {
            format!("table {i}: metric but not partial metric")
        })?;
        ensure(!pm.satisfied() || ml.satisfied(), || {
            format!("table {i}: partial metric but not metric-like")
        })?;
        ensure(
            [&m, &pm, &ml]
                .iter()
                .all(|r| r.violations.iter().all(|v| v.is_genuine(&space))),
            || format!("table {i}: spurious witness"),
        )?;
        let class = classify(&space);
        counts[match class {
            SpaceClass::Metric => 0,
            SpaceClass::PartialMetric => 1,
            SpaceClass::MetricLike => 2,
            SpaceClass::NotMetricLike => 3,
        }] += 1;
    }
    ensure(counts.iter().all(|&c| c > 0), || {
        format!("class coverage {counts:?}")
    })?;
    Ok(format!(
        "1000 tables: {} metric, {} partial metric, {} metric-like, {} neither; 0 violations",
        counts[0], counts[1], counts[2], counts[3]
    ))
}

fn criterion_6() -> Outcome {
    let mut cache = SupportCache::default();
    let mut verdicts = 0u64;
    for n in 1..=3 {
        let full: Mask = (1 << n) - 1;
        let ms = maps(n);
        let subsets: Vec<Mask> = (1..=full).collect();
        for space in grid_tables(n) {
            for r in relations(n) {
                for &y in &subsets {
                    let ypts = members(y);
                    let sup = cache.get(&r, y).to_vec();
                    let lib = check_r_completeness(&space, &r, &ypts).map_err(|e| e.to_string())?;
                    ensure(lib.holds() == oracle_r_complete(&space, &sup, y), || {
                        format!("completeness disagrees: {r:?}, Y = {ypts:?}")
                    })?;
                    let lib =
                        check_sigma_self_closed(&space, &r, &ypts).map_err(|e| e.to_string())?;
                    ensure(
                        lib.holds() == oracle_self_closed(&space, &r, &sup, y),
                        || format!("self-closedness disagrees: {r:?}, Y = {ypts:?}"),
                    )?;
                    let tails: Vec<Mask> = realizable_tail_sets(&space, &r, &ypts)
                        .map_err(|e| e.to_string())?
                        .iter()
                        .map(|t| mask_of(&t.members))
                        .collect();
                    ensure(tails == sup, || {
                        format!("tail sets disagree: {r:?}, Y = {ypts:?}")
                    })?;
                    verdicts += 3;
                }
                let sup = cache.get(&r, full).to_vec();
                for f in &ms {
                    let lib = check_r_continuity_like(&space, &r, f).map_err(|e| e.to_string())?;
                    ensure(
                        lib.holds() == oracle_continuity_like(&space, f, &sup),
                        || format!("continuity disagrees: {r:?}, f = {:?}", f.as_slice()),
                    )?;
                    verdicts += 1;
                }
            }
        }
    }

    // Random walks over the fixture corpus.
    let corpus = instance_corpus();
    let per = 10_000 / corpus.len() + 1;
    let mut walks_run = 0;
    let mut closed = 0;
    for (i, (name, inst)) in corpus.iter().enumerate() {
        let (space, r, f) = (inst.space(), inst.relation(), inst.map());
        let y = inst.y();
        let ymask = mask_of(y);
        let complete = check_r_completeness(space, r, y).unwrap().holds();
        let self_closed = check_sigma_self_closed(space, r, y).unwrap().holds();
        let continuous = check_r_continuity_like(space, r, f).unwrap().holds();
        let count = per.min(10_000 - walks_run);
        let walks = simulate_walks(space, r, y, count, 200, i as u64).map_err(|e| e.to_string())?;
        walks_run += walks.len();
        let lib = walk_contradictions(space, r, y, Some(f), &walks).map_err(|e| e.to_string())?;
        ensure(lib.is_empty(), || format!("{name}: {lib:?}"))?;
        for w in &walks {
            ensure(
                w.sequence.windows(2).all(|p| r.contains(p[0], p[1])),
                || format!("{name}: walk is not R-preserving"),
            )?;
            // Longest closed stretch of the final third, repeated forever.
            let window = &w.sequence[w.sequence.len() - w.sequence.len() / 3..];
            let mut best: Option<(usize, usize)> = None;
            for (i, &p) in window.iter().enumerate() {
                if let Some(j) = window.iter().rposition(|&q| q == p) {
                    let span = (i, j);
                    let longer = best.map_or(true, |(a, b)| j - i > b - a);
                    let loop_ok = j > i || r.contains(p, p);
                    if loop_ok && longer {
                        best = Some(span);
                    }
                }
            }
            let Some((i0, j0)) = best else { continue };
            let cycle = if j0 > i0 {
                &window[i0..j0]
            } else {
                &window[i0..=i0]
            };
            let support = mask_of(cycle);
            closed += 1;
            if complete {
                if let Some(l) = cauchy_limit(space, support) {
                    ensure(
                        limits(space, support, ymask)
                            .iter()
                            .any(|&z| *space.dist(z, z) == l),
                        || format!("{name}: Cauchy walk without a limit in Y"),
                    )?;
                }
            }
            if self_closed {
                for x in limits(space, support, ymask) {
                    ensure(
                        members(support)
                            .iter()
                            .any(|&p| r.contains(p, x) || r.contains(x, p)),
                        || format!("{name}: limit unrelated to its tail"),
                    )?;
                }
            }
            if continuous {
                ensure(oracle_continuity_like(space, f, &[support]), || {
                    format!("{name}: walk breaks continuity")
                })?;
            }
        }
    }
    ensure(walks_run == 10_000, || format!("{walks_run} walks"))?;
    Ok(format!(
        "{verdicts} verdicts agree with the periodic-sequence enumerator; 10000 walks ({closed} with a closed tail) raise no contradiction"
    ))
}

fn criterion_7() -> Outcome {
    let mut directed_cases = 0u64;
    let mut complete_cases = 0u64;
    for n in 1..=3 {
        let ms = maps(n);
        for r in relations(n) {
            let rs = r.symmetrize();
            for f in &ms {
                let image = f.image_set();
                let own_complete = image
                    .iter()
                    .all(|&a| image.iter().all(|&b| r.contains(a, b) || r.contains(b, a)));
                let own_directed = image.iter().all(|&a| {
                    image
                        .iter()
                        .all(|&b| (0..n).any(|c| rs.contains(a, c) && rs.contains(b, c)))
                });
                ensure(is_complete(&r, &image).holds() == own_complete, || {
                    format!("(f'') verdict disagrees: {r:?}, f = {:?}", f.as_slice())
                })?;
                ensure(is_directed(&rs, &image).holds() == own_directed, || {
                    format!("(f') verdict disagrees: {r:?}, f = {:?}", f.as_slice())
                })?;
                let bound = if own_complete {
                    complete_cases += 1;
                    1
                } else if own_directed {
                    2
                } else {
                    continue;
                };
                if own_directed {
                    directed_cases += 1;
                }
                for &a in &image {
                    for &b in &image {
                        let path = find_path(&rs, a, b).ok_or_else(|| {
                            format!("no path {a} -> {b}: {r:?}, f = {:?}", f.as_slice())
                        })?;
                        let nodes = path.nodes();
                        ensure(
                            nodes[0] == a
                                && nodes[nodes.len() - 1] == b
                                && nodes.windows(2).all(|w| rs.contains(w[0], w[1])),
                            || format!("invalid path {nodes:?}"),
                        )?;
                        ensure(path.length() <= bound, || {
                            format!(
                                "path {nodes:?} longer than {bound}: {r:?}, f = {:?}",
                                f.as_slice()
                            )
                        })?;
                        ensure(Some(path.length()) == shortest_path_len(&rs, a, b), || {
                            format!("path {nodes:?} is not shortest")
                        })?;
                    }
                }
            }
        }
    }
    Ok(format!(
        "{complete_cases} instances with (f''), {directed_cases} with (f'); all image paths within bounds"
    ))
}

fn criterion_8() -> Outcome {
    let mut corpus: Vec<(String, Instance)> = instance_corpus();
    corpus.push(("example2 (built in)".into(), fixtures::example2()));
    corpus.push(("two-cycle (built in)".into(), fixtures::two_cycle()));
    corpus.push((
        "identity (built in)".into(),
        fixtures::identity_on_discrete(4),
    ));
    let one = IntegrandSpec::constant(int(1));
    let mut compared = 0;
    for (name, inst) in &corpus {
        let n = inst.space().len();
        for r in [inst.relation().clone(), FiniteRelation::universal(n)] {
            let linear = minimal_k(inst.space(), &r, inst.map());
            let integral = integral_minimal_k(inst.space(), &r, inst.map(), &one)
                .map_err(|e| e.to_string())?;
            ensure(linear == integral, || {
                format!(
                    "{name}: rho = 1 gives {} but minimal_k gives {}",
                    integral.k_star, linear.k_star
                )
            })?;
            compared += 1;
        }
    }
    let ex = fixtures::example2();
    let t = IntegrandSpec::power(int(1), int(1));
    let rep = integral_minimal_k(ex.space(), &FiniteRelation::universal(3), ex.map(), &t)
        .map_err(|e| e.to_string())?;
    ensure(rep.k_star == KValue::rational(rat(1, 4)), || {
        format!("rho(t) = t on example 2 gives {}", rep.k_star)
    })?;
    Ok(format!(
        "rho = 1 matches minimal_k on {compared} (instance, relation) pairs; rho(t) = t gives 1/4"
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Option<Duration>); 8] = [
        (
            "example 1 classification",
            criterion_1,
            Some(Duration::from_secs(1)),
        ),
        (
            "example 2 end to end",
            criterion_2,
            Some(Duration::from_secs(1)),
        ),
        ("soundness sweep", criterion_3, None),
        ("a-priori bound", criterion_4, None),
        ("axiom hierarchy", criterion_5, None),
        ("analysis oracle agreement", criterion_6, None),
        ("path constructions", criterion_7, None),
        ("integral reduction", criterion_8, None),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(l)) if elapsed > *l => Err(format!("took {elapsed:?}, limit {l:?}")),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!(
                "criterion {} ({name}): PASS [{elapsed:.2?}] {detail}",
                i + 1
            ),
            Err(detail) => {
                failed += 1;
                println!(
                    "criterion {} ({name}): FAIL [{elapsed:.2?}] {detail}",
                    i + 1
                );
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
