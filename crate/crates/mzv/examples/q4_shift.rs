//! q = 4 specifics: increment sets selected by a base-2 bitcount rule, and
//! the shift identity S(a, a−1) = S(a, a−4^j).
//!
//! Run with: cargo run --example q4_shift

use mzv::recipes::{self, RecipeChoice};
use mzv::solver::ShuffleSolver;
use mzv::{FieldCtx, Result};

fn main() -> Result<()> {
    let ctx = FieldCtx::new(2, 2)?;
    let solver = ShuffleSolver::new(&ctx);

    println!("q = 4 increment sets (bitcount rule):");
    for a in [2u64, 3, 7] {
        let ta = recipes::ta_q4(&ctx, a)?;
        let phis: Vec<u64> = ta.entries.iter().map(|e| e.phi_value).collect();
        println!("  T_{a}: φ-offsets {phis:?}");
    }

    // The bitcount route and the direct formulas agree wherever both apply.
    for b in [5u64, 17, 40] {
        let full = recipes::predict(&solver, 3, b, RecipeChoice::Full, false)?;
        let bitcount = recipes::predict(&solver, 3, b, RecipeChoice::Q4, false)?;
        assert_eq!(full.pairs, bitcount.pairs);
        println!("Δ(3, {b}): both recipes give {} terms", full.pairs.len());
    }

    println!("\nshift identity S(a, a−1) = S(a, a−4^j):");
    for (a, j) in [(5u64, 1u32), (12, 1), (17, 2)] {
        assert!(recipes::check_shift_conjecture(&solver, a, j)?);
        println!("  S({a}, {}) = S({a}, {})", a - 1, a - 4u64.pow(j));
    }
    Ok(())
}
