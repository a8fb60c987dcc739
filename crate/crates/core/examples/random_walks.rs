//! Simulates random R-preserving walks and checks them against the tail-set
//! verdicts.

use relcontract::analysis::{simulate_walks, walk_contradictions};
use relcontract::fixtures;

fn main() -> relcontract::Result<()> {
    let inst = fixtures::example2();
    let (space, r, y) = (inst.space(), inst.relation(), inst.y());
    let walks = simulate_walks(space, r, y, 1000, 200, 42)?;
    let settled = walks.iter().filter(|w| w.tail.is_some()).count();
    let cauchy = walks.iter().filter(|w| w.is_cauchy()).count();
    let converging = walks.iter().filter(|w| w.converges()).count();
    println!(
        "{} walks: {settled} settled, {cauchy} Cauchy, {converging} convergent",
        walks.len()
    );
    let first = &walks[0];
    println!(
        "first walk starts {:?}",
        space.labels_of(&first.sequence[..8])
    );
    let contradictions = walk_contradictions(space, r, y, Some(inst.map()), &walks)?;
    println!("contradictions: {}", contradictions.len());
    Ok(())
}
