//! Shuffle relations for index families near powers of q, predicted in
//! closed form and proved as bivariate identities.
//!
//! Run with: cargo run --example large_index

use mzv::prover::{prove_identity, ProofResult};
use mzv::recipes::{self, LargeFamily};
use mzv::solver::{Certified, ShuffleSet, ShuffleSolver};
use mzv::{FieldCtx, Result};

fn main() -> Result<()> {
    let ctx = FieldCtx::new(3, 1)?;
    let solver = ShuffleSolver::new(&ctx);

    // Δ(q^n, q^n − 1) = −S_d(q^n, q^n − 1), here at q = 3, n = 2.
    let pred = recipes::large_index_delta(&ctx, LargeFamily::PowAndPowMinus1, 2)?;
    println!("q = 3: Δ_d({}, {}) = −S_d(9, 8), predicted as:", pred.a, pred.b);
    for pr in &pred.pairs {
        println!("  + {}·S_d({}, {})", pr.c, pr.aj, pred.weight - pr.aj);
    }

    let set = ShuffleSet {
        q: ctx.q(),
        p: ctx.p(),
        n: ctx.n(),
        a: pred.a,
        b: pred.b,
        weight: pred.weight,
        pairs: pred.pairs.clone(),
        certified: Certified::Numeric,
    };
    let res = prove_identity(solver.hg(), &set)?;
    assert!(matches!(res, ProofResult::Proved { .. }));
    println!("proved for every d: {}", res.to_json());

    // The family detector recognizes the index shapes it covers.
    for (a, b) in [(9u64, 8u64), (10, 9), (8, 10), (3, 10), (7, 5)] {
        match recipes::detect_family(&ctx, a, b) {
            Some((family, n)) => println!("({a}, {b}) is {family:?} at n = {n}"),
            None => println!("({a}, {b}) is not in a covered family"),
        }
    }
    Ok(())
}
