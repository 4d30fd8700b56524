//! Reduced rational functions over F_q(t).

use crate::error::{MzvError, Result};
use crate::ffield::FieldCtx;
use crate::polyrat::Poly;

/// num/den with den monic and gcd(num, den) = 1. The canonical form makes
/// the derived structural equality a semantic one; every constructor goes
/// through [`RatFunc::new`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    /// Canonicalizing constructor: reduces by the gcd and scales the
    /// denominator monic. `rat_normalize(a·f, a·g) = rat_normalize(f, g)`
    /// for any nonzero polynomial a.
    pub fn new(ctx: &FieldCtx, num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(MzvError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RatFunc {
                num: Poly::zero(),
                den: Poly::one(ctx),
            });
        }
        let g = num.gcd(ctx, &den);
        let (mut num, mut den) = if g.is_one(ctx) {
            (num, den)
        } else {
            (
                num.exact_div(ctx, &g).expect("gcd divides"),
                den.exact_div(ctx, &g).expect("gcd divides"),
            )
        };
        let lead = den.leading_coeff(ctx);
        if lead != ctx.one() {
            let inv = ctx.inv(&lead);
            num = num.scale(ctx, &inv);
            den = den.scale(ctx, &inv);
        }
        Ok(RatFunc { num, den })
    }

    pub fn from_poly(ctx: &FieldCtx, p: Poly) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(ctx),
        }
    }

    pub fn zero(ctx: &FieldCtx) -> Self {
        Self::from_poly(ctx, Poly::zero())
    }

    pub fn one(ctx: &FieldCtx) -> Self {
        Self::from_poly(ctx, Poly::one(ctx))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self, ctx: &FieldCtx) -> bool {
        self.den.is_one(ctx)
    }

    pub fn add(&self, ctx: &FieldCtx, other: &RatFunc) -> RatFunc {
        let num = self
            .num
            .mul(ctx, &other.den)
            .add(ctx, &other.num.mul(ctx, &self.den));
        let den = self.den.mul(ctx, &other.den);
        RatFunc::new(ctx, num, den).expect("nonzero denominator product")
    }

    pub fn neg(&self, ctx: &FieldCtx) -> RatFunc {
        RatFunc {
            num: self.num.neg(ctx),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, ctx: &FieldCtx, other: &RatFunc) -> RatFunc {
        self.add(ctx, &other.neg(ctx))
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &RatFunc) -> RatFunc {
        let num = self.num.mul(ctx, &other.num);
        let den = self.den.mul(ctx, &other.den);
        RatFunc::new(ctx, num, den).expect("nonzero denominator product")
    }

    pub fn inv(&self, ctx: &FieldCtx) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(MzvError::ZeroDenominator);
        }
        RatFunc::new(ctx, self.den.clone(), self.num.clone())
    }

    pub fn div(&self, ctx: &FieldCtx, other: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(ctx, &other.inv(ctx)?))
    }

    pub fn pow(&self, ctx: &FieldCtx, mut e: u64) -> RatFunc {
        let mut base = self.clone();
        let mut acc = RatFunc::one(ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(ctx, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(ctx, &base);
            }
        }
        acc
    }

    /// Substitute t ↦ t^e in both parts. Coprimality and monicity survive
    /// the substitution, so no re-normalization is needed.
    pub fn substitute_t_power(&self, e: u64) -> Result<RatFunc> {
        Ok(RatFunc {
            num: self.num.substitute_t_power(e)?,
            den: self.den.substitute_t_power(e)?,
        })
    }

    /// p-th power. The Frobenius preserves coprimality and monicity, so this
    /// avoids the quadratic multiply-and-reduce of `pow`.
    pub fn frobenius_power(&self, ctx: &FieldCtx) -> Result<RatFunc> {
        Ok(RatFunc {
            num: self.num.frobenius_power(ctx)?,
            den: self.den.frobenius_power(ctx)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FieldCtx {
        FieldCtx::new(2, 1).unwrap()
    }

    #[test]
    fn normalization_examples() {
        let ctx = f2();
        // (t^2+t)/t reduces to (t+1)/1.
        let r = RatFunc::new(
            &ctx,
            Poly::from_codes(&ctx, &[0, 1, 1]),
            Poly::t(&ctx),
        )
        .unwrap();
        assert_eq!(r.num(), &Poly::from_codes(&ctx, &[1, 1]));
        assert!(r.is_poly(&ctx));

        let zero = RatFunc::new(&ctx, Poly::zero(), Poly::t(&ctx)).unwrap();
        assert!(zero.is_zero());
        assert!(zero.den().is_one(&ctx));

        assert!(matches!(
            RatFunc::new(&ctx, Poly::one(&ctx), Poly::zero()),
            Err(MzvError::ZeroDenominator)
        ));
    }

    #[test]
    fn common_factors_do_not_change_the_value() {
        let ctx = FieldCtx::new(5, 1).unwrap();
        let f = Poly::from_codes(&ctx, &[1, 2]);
        let g = Poly::from_codes(&ctx, &[0, 0, 3]);
        let a = Poly::from_codes(&ctx, &[2, 1, 1]);
        let plain = RatFunc::new(&ctx, f.clone(), g.clone()).unwrap();
        let scaled = RatFunc::new(&ctx, f.mul(&ctx, &a), g.mul(&ctx, &a)).unwrap();
        assert_eq!(plain, scaled);
    }

    #[test]
    fn arithmetic_matches_by_hand() {
        let ctx = f2();
        let t = RatFunc::from_poly(&ctx, Poly::t(&ctx));
        let one = RatFunc::one(&ctx);
        let t1 = t.add(&ctx, &one); // t + 1
        // 1/t + 1/(t+1) = 1/(t^2+t) in characteristic 2.
        let s = one
            .div(&ctx, &t)
            .unwrap()
            .add(&ctx, &one.div(&ctx, &t1).unwrap());
        let expect = RatFunc::new(&ctx, Poly::one(&ctx), Poly::from_codes(&ctx, &[0, 1, 1])).unwrap();
        assert_eq!(s, expect);
        assert!(s.mul(&ctx, &s.inv(&ctx).unwrap()) == RatFunc::one(&ctx));
    }

    #[test]
    fn pow_is_repeated_multiplication() {
        let ctx = f2();
        let t = RatFunc::from_poly(&ctx, Poly::t(&ctx));
        let r = RatFunc::new(&ctx, Poly::one(&ctx), Poly::from_codes(&ctx, &[1, 1])).unwrap();
        let x = t.add(&ctx, &r);
        let mut acc = RatFunc::one(&ctx);
        for _ in 0..5 {
            acc = acc.mul(&ctx, &x);
        }
        assert_eq!(acc, x.pow(&ctx, 5));
    }
}
