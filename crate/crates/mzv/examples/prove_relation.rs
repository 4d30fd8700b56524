//! Proving a shuffle relation for every d at once: the relation is lifted
//! to H/G polynomials in an auxiliary variable T, where it becomes a
//! polynomial identity; a zero residual proves all degrees simultaneously.
//!
//! Run with: cargo run --example prove_relation

use mzv::prover::{prove_identity, ProofResult};
use mzv::solver::{ShuffleSolver, SolveOptions};
use mzv::{FieldCtx, Result};

fn main() -> Result<()> {
    let ctx = FieldCtx::new(3, 1)?;
    let solver = ShuffleSolver::new(&ctx);

    let mut set = solver.solve(2, 4, &SolveOptions::default())?;
    println!("q = 3: solved Δ_d(2, 4) with {} term(s)", set.pairs.len());

    match prove_identity(solver.hg(), &set)? {
        ProofResult::Proved { checked_d } => {
            println!("proved for every d (numeric spot checks at d = {checked_d:?})");
        }
        other => println!("unexpected: {}", other.to_json()),
    }

    // Tampering with one coefficient breaks the polynomial identity; the
    // residual is reported and the numeric check pinpoints the degree.
    set.pairs[0].c = 3 - set.pairs[0].c;
    match prove_identity(solver.hg(), &set)? {
        ProofResult::Refuted {
            residual,
            first_failing_d,
            ..
        } => {
            println!(
                "tampered set refuted: residual degree in T = {:?}, first failing d = {:?}",
                residual.as_ref().and_then(|r| r.deg_t_var()),
                first_failing_d
            );
        }
        other => println!("unexpected: {}", other.to_json()),
    }
    Ok(())
}
