//! Runs Picard iteration on a partial-metric chain and prints each gap next
//! to its a-priori bound.

use relcontract::contraction::minimal_k;
use relcontract::document::InstanceDocument;
use relcontract::rational::format_rational;
use relcontract::solver::{default_max_iter, picard};

const CHAIN: &str = include_str!("../fixtures/partial_metric_chain.json");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inst = InstanceDocument::parse(CHAIN)?.to_instance(false)?;
    let (space, r, f) = (inst.space(), inst.relation(), inst.map());
    let k = minimal_k(space, r, f)
        .k_star
        .as_rational()
        .expect("linear kStar is rational");
    let start = space.point("z")?;
    let (mut trace, cert) = picard(space, f, start, default_max_iter(space), Some(r))?;
    trace.attach_bounds(&k)?;

    println!("k = {}", format_rational(&k));
    for (n, (gap, bound)) in trace.gaps.iter().zip(&trace.bounds).enumerate() {
        println!(
            "x_{n} = {}  d(x_{n}, x_{}) = {:<4} bound {}",
            space.label(trace.iterates[n]),
            n + 1,
            format_rational(gap),
            format_rational(bound)
        );
    }
    println!(
        "fixed point {} after {} steps, residual {}",
        space.label(cert.point),
        cert.iterations,
        format_rational(&cert.residual)
    );
    Ok(())
}
