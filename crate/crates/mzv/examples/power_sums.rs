//! Power sums over F_q[t]: the series route, the enumeration oracle, and
//! the reciprocal identity S_d(1)·ℓ_d = 1.
//!
//! Run with: cargo run --example power_sums

use mzv::polyrat::text::{display_rat, format_poly};
use mzv::powersums::CarlitzCache;
use mzv::{FieldCtx, RatFunc, Result};

fn main() -> Result<()> {
    let ctx = FieldCtx::new(3, 1)?;
    let cc = CarlitzCache::new(&ctx);

    println!("q = {}: S_d(k) = sum of 1/a^k over monic a of degree d\n", ctx.q());

    for d in 0..=2u32 {
        for k in [1u64, 2, 4] {
            let fast = cc.power_sum(d, k)?;
            let oracle = cc.power_sum_oracle(d, k)?;
            assert_eq!(fast, oracle);
            println!("S_{d}({k}) = {}", display_rat(&ctx, &fast));
        }
    }

    println!("\nreciprocal identity:");
    for d in 0..=3u32 {
        let sd1 = cc.power_sum(d, 1)?;
        let ell = RatFunc::from_poly(&ctx, cc.ell(d)?);
        assert_eq!(sd1.mul(&ctx, &ell), RatFunc::one(&ctx));
        println!("S_{d}(1) · ℓ_{d} = 1   with ℓ_{d} = {}", format_poly(&ctx, &cc.ell(d)?));
    }

    println!("\ndepth-two truncation S_2(2, 4) = S_2(2) · S_(<2)(4):");
    let double = cc.power_sum_double(2, 2, 4)?;
    let by_hand = cc.power_sum(2, 2)?.mul(&ctx, &cc.power_sum_less(2, 4)?);
    assert_eq!(double, by_hand);
    println!("S_2(2, 4) = {}", display_rat(&ctx, &double));
    Ok(())
}
