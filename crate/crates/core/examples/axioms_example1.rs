//! Classifies the two three-point tables of the running example and prints
//! every axiom violation with its witness.

use relcontract::fixtures;
use relcontract::rational::format_rational;
use relcontract::space::{check_metric, check_metric_like, check_partial_metric, classify};
use relcontract::FiniteDistanceSpace;

fn show(name: &str, space: &FiniteDistanceSpace) {
    println!("{name}: {}", classify(space));
    for (level, report) in [
        ("metric-like", check_metric_like(space)),
        ("partial metric", check_partial_metric(space)),
        ("metric", check_metric(space)),
    ] {
        for v in &report.violations {
            println!(
                "  {level}: {:?} at ({}) with {} vs {}",
                v.axiom,
                space.labels_of(&v.witness).join(", "),
                format_rational(&v.lhs),
                format_rational(&v.rhs)
            );
        }
    }
}

fn main() {
    show("sigma", &fixtures::example1_sigma());
    show("p", &fixtures::example1_p());
}
