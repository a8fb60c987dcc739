//! Lists the tail sets of R-preserving sequences on the two-cycle instance
//! and decides completeness, self-closedness and continuity from them.

use relcontract::analysis::{
    check_r_completeness, check_r_continuity_like, check_sigma_self_closed, limits_of_tail,
    realizable_tail_sets,
};
use relcontract::fixtures;

fn main() -> relcontract::Result<()> {
    let inst = fixtures::two_cycle();
    let (space, r, f) = (inst.space(), inst.relation(), inst.map());
    let y = inst.y();
    for tail in realizable_tail_sets(space, r, y)? {
        let limits = limits_of_tail(space, &tail.members);
        println!(
            "tail {{{}}} cauchy value {:?}, limits {{{}}}",
            space.labels_of(&tail.members).join(", "),
            tail.cauchy_value.map(|v| v.to_string()),
            space.labels_of(&limits).join(", ")
        );
    }
    println!("R-complete: {}", check_r_completeness(space, r, y)?.holds());
    println!(
        "self-closed: {}",
        check_sigma_self_closed(space, r, y)?.holds()
    );
    println!(
        "R-continuity-like: {}",
        check_r_continuity_like(space, r, f)?.holds()
    );
    Ok(())
}
