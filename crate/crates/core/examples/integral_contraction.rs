//! Compares the linear contraction constant with its integral counterpart
//! for a few integrands.

use relcontract::contraction::{integral_minimal_k, minimal_k};
use relcontract::rational::int;
use relcontract::{fixtures, FiniteRelation, IntegrandSpec};

fn main() -> relcontract::Result<()> {
    let inst = fixtures::example2();
    let r = FiniteRelation::universal(inst.space().len());
    println!("linear: {}", minimal_k(inst.space(), &r, inst.map()).k_star);
    let integrands = [
        ("rho = 1", IntegrandSpec::constant(int(1))),
        ("rho = t", IntegrandSpec::power(int(1), int(1))),
        ("rho = 3t^2", IntegrandSpec::power(int(3), int(2))),
        (
            "piecewise",
            IntegrandSpec::piecewise_linear(vec![
                (int(0), int(1)),
                (int(1), int(3)),
                (int(4), int(2)),
            ]),
        ),
    ];
    for (name, rho) in integrands {
        let rep = integral_minimal_k(inst.space(), &r, inst.map(), &rho)?;
        println!("{name}: {} (feasible: {})", rep.k_star, rep.feasible);
    }
    Ok(())
}
