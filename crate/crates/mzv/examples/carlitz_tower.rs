//! The Carlitz quantities [n], D_n, L_n, ℓ_n and two identities built on
//! them: the Frobenius scaling S_d(p·s) = S_d(s)^p and the closed form
//! S_d(mq^i − 1) = ℓ_{d+i}/(ℓ_i · ℓ_d^{mq^i}).
//!
//! Run with: cargo run --example carlitz_tower

use mzv::polyrat::text::format_poly;
use mzv::powersums::CarlitzCache;
use mzv::{FieldCtx, Result};

fn main() -> Result<()> {
    let ctx = FieldCtx::new(2, 1)?;
    let cc = CarlitzCache::new(&ctx);

    println!("q = {}:", ctx.q());
    for n in 1..=3u32 {
        println!("[{n}] = {}", format_poly(&ctx, &cc.bracket(n)?));
    }
    for n in 0..=3u32 {
        println!("ℓ_{n} = {}", format_poly(&ctx, &cc.ell(n)?));
    }

    println!("\nFrobenius scaling S_d(p·s) = S_d(s)^p:");
    for d in 1..=3u32 {
        for s in [1u64, 3, 7] {
            assert!(cc.frobenius_check(d, s)?);
            println!("S_{d}({}) = S_{d}({s})^{}", ctx.p() * s, ctx.p());
        }
    }

    println!("\nclosed form S_d(mq^i − 1) = ℓ_(d+i) / (ℓ_i · ℓ_d^(mq^i)):");
    for i in 0..=2u32 {
        for d in 0..=3u32 {
            let (ok, _, _) = cc.closed_form_sd(2, i, d)?;
            assert!(ok);
            let k = 2 * ctx.q().pow(i) - 1;
            println!("S_{d}({k}) = ℓ_{} / (ℓ_{i} · ℓ_{d}^{})", d + i, k + 1);
        }
    }
    Ok(())
}
