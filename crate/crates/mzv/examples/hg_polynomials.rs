//! The H/G polynomials: one polynomial identity in an auxiliary variable T
//! carries a power-sum relation for every degree d at once, via
//! H_k(t^{q^d}) = ℓ_d^k·S_d(k) and G_k(t^{q^d}) = ℓ_d^k·S_(<d)(k).
//!
//! Run with: cargo run --example hg_polynomials

use mzv::hg::HgSession;
use mzv::polyrat::text::format_bipoly;
use mzv::{FieldCtx, RatFunc, Result};

fn main() -> Result<()> {
    let ctx = FieldCtx::new(3, 1)?;
    let hg = HgSession::new(&ctx);
    let cc = hg.powersums();

    let h3 = hg.compute_h(3)?;
    println!("q = 3: H_3(T) = {}", format_bipoly(&ctx, &h3));

    // G_k exists exactly when (q − 1) | k.
    assert!(hg.compute_g(3).is_err());
    let g4 = hg.compute_g(4)?;
    println!("G_4(T) = {}", format_bipoly(&ctx, &g4));

    println!("\nevaluations at T = t^(q^d):");
    for k in [3u64, 4] {
        for d in 0..=3u32 {
            let ellk = RatFunc::from_poly(&ctx, cc.ell(d)?).pow(&ctx, k);
            let h = hg.compute_h(k)?.eval_at_t_qd(&ctx, d)?;
            assert_eq!(h, ellk.mul(&ctx, &cc.power_sum(d, k)?));
        }
        println!("H_{k}(t^(q^d)) = ℓ_d^{k}·S_d({k})   for d = 0..3");
    }
    for d in 0..=3u32 {
        let ellk = RatFunc::from_poly(&ctx, cc.ell(d)?).pow(&ctx, 4);
        let g = g4.eval_at_t_qd(&ctx, d)?;
        assert_eq!(g, ellk.mul(&ctx, &cc.power_sum_less(d, 4)?));
    }
    println!("G_4(t^(q^d)) = ℓ_d^4·S_(<d)(4)   for d = 0..3");

    for note in hg.bound_notes() {
        println!("note: {note}");
    }
    Ok(())
}
