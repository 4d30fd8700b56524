//! Truncated power series in an auxiliary variable with RatFunc
//! coefficients.

use crate::error::{MzvError, Result};
use crate::ffield::FieldCtx;
use crate::polyrat::RatFunc;

/// Power series c_0 + c_1 y + … + c_{w−1} y^{w−1}, truncated at order w.
/// The coefficient vector always has length exactly w; arithmetic truncates
/// consistently.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<RatFunc>,
}

impl Series {
    /// Series from explicit coefficients; their number fixes the order.
    pub fn new(coeffs: Vec<RatFunc>) -> Self {
        assert!(!coeffs.is_empty(), "series order must be positive");
        Series { coeffs }
    }

    pub fn zero(ctx: &FieldCtx, order: usize) -> Self {
        Series {
            coeffs: vec![RatFunc::zero(ctx); order.max(1)],
        }
    }

    pub fn one(ctx: &FieldCtx, order: usize) -> Self {
        let mut s = Series::zero(ctx, order);
        s.coeffs[0] = RatFunc::one(ctx);
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, i: usize) -> &RatFunc {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn add(&self, ctx: &FieldCtx, other: &Series) -> Series {
        let w = self.order().min(other.order());
        Series {
            coeffs: (0..w)
                .map(|i| self.coeffs[i].add(ctx, &other.coeffs[i]))
                .collect(),
        }
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &Series) -> Series {
        let w = self.order().min(other.order());
        let mut out = vec![RatFunc::zero(ctx); w];
        for (i, a) in self.coeffs.iter().enumerate().take(w) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(w - i) {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(ctx, &a.mul(ctx, b));
            }
        }
        Series { coeffs: out }
    }

    /// Multiplicative inverse to the series' own order, by the standard
    /// forward recurrence b_m = −c_0^{−1} Σ_{i≥1} c_i b_{m−i}.
    pub fn inverse(&self, ctx: &FieldCtx) -> Result<Series> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(MzvError::NonUnitConstantTerm);
        }
        let c0_inv = c0.inv(ctx).expect("nonzero constant term");
        let w = self.order();
        let mut out = Vec::with_capacity(w);
        out.push(c0_inv.clone());
        for m in 1..w {
            let mut acc = RatFunc::zero(ctx);
            for i in 1..=m {
                if self.coeffs[i].is_zero() {
                    continue;
                }
                acc = acc.add(ctx, &self.coeffs[i].mul(ctx, &out[m - i]));
            }
            out.push(acc.neg(ctx).mul(ctx, &c0_inv));
        }
        Ok(Series { coeffs: out })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyrat::Poly;

    #[test]
    fn geometric_series() {
        let ctx = FieldCtx::new(5, 1).unwrap();
        // (1 − y)^{-1} = 1 + y + y^2 + y^3 at order 4.
        let s = Series::new(vec![
            RatFunc::one(&ctx),
            RatFunc::one(&ctx).neg(&ctx),
            RatFunc::zero(&ctx),
            RatFunc::zero(&ctx),
        ]);
        let inv = s.inverse(&ctx).unwrap();
        assert!(inv.coeffs().iter().all(|c| *c == RatFunc::one(&ctx)));
    }

    #[test]
    fn geometric_series_with_ratfunc_ratio() {
        let ctx = FieldCtx::new(2, 1).unwrap();
        let r = RatFunc::new(&ctx, Poly::one(&ctx), Poly::from_codes(&ctx, &[0, 1, 1])).unwrap();
        // (1 − r·y)^{-1} = 1 + r·y + r²·y² at order 3 (− = + in char 2).
        let s = Series::new(vec![RatFunc::one(&ctx), r.clone(), RatFunc::zero(&ctx)]);
        let inv = s.inverse(&ctx).unwrap();
        assert_eq!(inv.coeff(0), &RatFunc::one(&ctx));
        assert_eq!(inv.coeff(1), &r);
        assert_eq!(inv.coeff(2), &r.mul(&ctx, &r));
    }

    #[test]
    fn inverse_round_trips_to_one() {
        let ctx = FieldCtx::new(3, 1).unwrap();
        let t = RatFunc::from_poly(&ctx, Poly::t(&ctx));
        let s = Series::new(vec![
            RatFunc::one(&ctx),
            t.clone(),
            t.mul(&ctx, &t),
            t.inv(&ctx).unwrap(),
            RatFunc::one(&ctx),
        ]);
        let prod = s.mul(&ctx, &s.inverse(&ctx).unwrap());
        assert_eq!(prod, Series::one(&ctx, 5));
    }

    #[test]
    fn non_unit_constant_term_is_rejected() {
        let ctx = FieldCtx::new(3, 1).unwrap();
        let s = Series::zero(&ctx, 3);
        assert!(matches!(
            s.inverse(&ctx),
            Err(MzvError::NonUnitConstantTerm)
        ));
    }
}
