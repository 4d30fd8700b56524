//! A miniature recipe-vs-solver sweep: predictions are compared against
//! ground truth cell by cell, and the report renders as CSV and JSON.
//!
//! Run with: cargo run --example sweep_mini

use mzv::sweep::{run_sweep, SweepSpec};
use mzv::Result;

fn main() -> Result<()> {
    let report = run_sweep(&SweepSpec {
        fields: vec![(3, 1)],
        a_values: vec![2, 3],
        b_min: 1,
        b_max: 12,
        ..SweepSpec::default()
    })?;

    print!("{}", report.to_csv());
    println!(
        "\n{} cells: {} matched, {} mismatched, {} partial, {} ambiguous, {} errors ({} ms)",
        report.summary.cells,
        report.summary.matched,
        report.summary.mismatched,
        report.summary.partial,
        report.summary.ambiguous,
        report.summary.errors,
        report.wall_ms
    );
    assert_eq!(report.summary.matched, report.summary.compared);

    // The same report as JSON, e.g. for dashboards.
    let v = report.to_json();
    println!("match_pct = {}", v["summary"]["match_pct"]);
    Ok(())
}
