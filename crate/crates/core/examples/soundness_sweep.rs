//! Exhaustively validates every instance on up to three points and checks
//! each prediction against the brute-force fixed-point set.

use relcontract::sweep::{run_sweep, SweepConfig};

fn main() -> relcontract::Result<()> {
    let max_size = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(2);
    let summary = run_sweep(&SweepConfig {
        max_size,
        ..SweepConfig::default()
    })?;
    println!(
        "{} tables, {} instances, {} existence and {} uniqueness predictions, {} findings",
        summary.tables,
        summary.instances,
        summary.existence_predictions,
        summary.unique_predictions,
        summary.findings
    );
    for f in &summary.examples {
        println!("{}: {}", f.property, f.detail);
    }
    Ok(())
}
