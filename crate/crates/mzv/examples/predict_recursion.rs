//! Predicting shuffle expansions without solving: the b-recursion driven
//! by the increment set T_a, with direct formulas for small a.
//!
//! Run with: cargo run --example predict_recursion

use mzv::recipes::{self, RecipeChoice};
use mzv::solver::{ShuffleSolver, SolveOptions};
use mzv::{FieldCtx, Result};

fn main() -> Result<()> {
    let ctx = FieldCtx::new(5, 1)?;
    let solver = ShuffleSolver::new(&ctx);

    // Structure constants for a = 2: the recursion period r_a and the
    // φ-offsets that generate new terms.
    let sp = recipes::struct_params(&ctx, 2)?;
    println!("q = 5, a = 2: r_a = {}, j_max = {}", sp.r_a, sp.j_max);
    println!("t_a = {} predicted increment entries:", recipes::t_of(&ctx, 2));
    let ta = recipes::ta_prime(&ctx, 2)?;
    for e in &ta.entries {
        println!("  j = {}: coefficient {}, second index offset φ = {}", e.j, e.c, e.phi_value);
    }

    // The prediction at b = 30 agrees with the solver.
    let pred = recipes::predict(&solver, 2, 30, RecipeChoice::Auto, false)?;
    println!(
        "\nprediction for Δ(2, 30) via '{}' ({}):",
        pred.recipe, pred.initial_provenance
    );
    for pr in &pred.pairs {
        println!("  + {}·S_d({}, {})", pr.c, pr.aj, pred.weight - pr.aj);
    }
    let solved = solver.solve(2, 30, &SolveOptions::default())?;
    assert_eq!(pred.pairs, solved.pairs);
    println!("matches the solver exactly");

    // The same increment set, extracted empirically from two solver runs
    // one period apart.
    let b = sp.r_a + 1;
    let extracted = solver.extract_t(2, b)?;
    let image: Vec<(u64, u64)> = ta.entries.iter().map(|e| (e.c, b - e.phi_value)).collect();
    assert_eq!(
        extracted.iter().map(|p| (p.c, p.aj)).collect::<Vec<_>>(),
        image
    );
    println!("empirical T(2, {b}) equals the predicted image of T_2");
    Ok(())
}
