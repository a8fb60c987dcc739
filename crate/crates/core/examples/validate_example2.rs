//! Evaluates every hypothesis on the three-point instance whose relation
//! makes the contraction hold although the plain Banach condition fails.

use relcontract::contraction::minimal_k;
use relcontract::validator::{corollary3_variants, validate};
use relcontract::{fixtures, FiniteRelation};

fn main() -> relcontract::Result<()> {
    let inst = fixtures::example2();
    let report = validate(&inst)?;
    let entries = [
        ("metric-like", &report.metric_like),
        ("R-complete", &report.r_complete),
        ("start point", &report.start_point),
        ("f-closed", &report.f_closed),
        (
            "continuity or self-closed",
            &report.continuity_or_self_closed,
        ),
        ("contraction", &report.contraction),
        ("paths", &report.paths),
        ("directed image", &report.directed_image),
        ("complete image", &report.complete_image),
    ];
    for (name, entry) in entries {
        println!(
            "{name:>26}: {}",
            if entry.holds { "holds" } else { "fails" }
        );
    }
    println!("kStar over R: {}", report.k_star);

    let universal = minimal_k(inst.space(), &FiniteRelation::universal(3), inst.map());
    println!(
        "kStar over X x X: {} (feasible: {})",
        universal.k_star, universal.feasible
    );

    let c3 = corollary3_variants(&inst);
    println!("longest image path: {:?}", c3.longest_path);
    println!("prediction: {}", report.prediction);
    println!("applicable: {}", report.applicable_results.join(", "));
    Ok(())
}
