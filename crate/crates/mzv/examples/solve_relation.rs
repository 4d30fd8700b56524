//! Solving Δ_d(a, b) = S_d(a)S_d(b) − S_d(a+b) as an F_p-combination of
//! depth-two sums S_d(a_j, a+b−a_j), independent of d.
//!
//! Run with: cargo run --example solve_relation

use mzv::solver::{ShuffleSolver, SolveOptions};
use mzv::{FieldCtx, Result};

fn main() -> Result<()> {
    let ctx = FieldCtx::new(5, 1)?;
    let solver = ShuffleSolver::new(&ctx);

    let set = solver.solve(2, 30, &SolveOptions::default())?;
    println!("q = 5: Δ_d(2, 30) expands, for every d, as");
    for pr in &set.pairs {
        println!("  + {}·S_d({}, {})", pr.c, pr.aj, set.weight - pr.aj);
    }
    println!("certified: {:?}", set.certified);

    // Each second index is a multiple of q − 1 ("even").
    assert!(set.pairs.iter().all(|p| (set.weight - p.aj) % 4 == 0));

    // Independent numeric spot-checks at explicit degrees.
    for d in 0..=3u32 {
        assert!(solver.verify_at_d(&set, d)?);
    }
    println!("re-checked numerically at d = 0..3");

    println!("\nJSON: {}", serde_json::to_string(&set).expect("serializable"));
    Ok(())
}
