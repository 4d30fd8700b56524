//! Sparse polynomials in the auxiliary variable T over F_q(t).

use std::collections::BTreeMap;

use crate::error::{MzvError, Result};
use crate::ffield::{checked_pow, FieldCtx};
use crate::polyrat::RatFunc;

/// Sparse polynomial Σ c_e(t)·T^e with strictly ascending exponents and no
/// stored zero coefficients. Evaluating at T = t^{q^d} is the bridge from
/// one polynomial to the whole family of degree-d values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiPoly {
    terms: Vec<(u64, RatFunc)>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly { terms: Vec::new() }
    }

    pub fn constant(c: RatFunc) -> Self {
        if c.is_zero() {
            return BiPoly::zero();
        }
        BiPoly { terms: vec![(0, c)] }
    }

    pub fn one(ctx: &FieldCtx) -> Self {
        BiPoly::constant(RatFunc::one(ctx))
    }

    /// The variable T.
    pub fn t_var(ctx: &FieldCtx) -> Self {
        BiPoly {
            terms: vec![(1, RatFunc::one(ctx))],
        }
    }

    pub fn from_terms(ctx: &FieldCtx, terms: Vec<(u64, RatFunc)>) -> Self {
        let mut map: BTreeMap<u64, RatFunc> = BTreeMap::new();
        for (e, c) in terms {
            match map.remove(&e) {
                Some(prev) => {
                    let s = prev.add(ctx, &c);
                    if !s.is_zero() {
                        map.insert(e, s);
                    }
                }
                None => {
                    if !c.is_zero() {
                        map.insert(e, c);
                    }
                }
            }
        }
        BiPoly {
            terms: map.into_iter().collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn deg_t_var(&self) -> Option<u64> {
        self.terms.last().map(|(e, _)| *e)
    }

    pub fn terms(&self) -> &[(u64, RatFunc)] {
        &self.terms
    }

    pub fn coeff(&self, ctx: &FieldCtx, e: u64) -> RatFunc {
        match self.terms.binary_search_by_key(&e, |(x, _)| *x) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => RatFunc::zero(ctx),
        }
    }

    pub fn add(&self, ctx: &FieldCtx, other: &BiPoly) -> BiPoly {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        BiPoly::from_terms(ctx, terms)
    }

    pub fn neg(&self, ctx: &FieldCtx) -> BiPoly {
        BiPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, c.neg(ctx)))
                .collect(),
        }
    }

    pub fn sub(&self, ctx: &FieldCtx, other: &BiPoly) -> BiPoly {
        self.add(ctx, &other.neg(ctx))
    }

    pub fn scale(&self, ctx: &FieldCtx, s: &RatFunc) -> BiPoly {
        if s.is_zero() {
            return BiPoly::zero();
        }
        BiPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, c.mul(ctx, s)))
                .collect(),
        }
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &BiPoly) -> BiPoly {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                terms.push((ea + eb, ca.mul(ctx, cb)));
            }
        }
        BiPoly::from_terms(ctx, terms)
    }

    /// Substitute T = t^{q^d} and return the resulting rational function.
    /// The homomorphism property eval(f·g, d) = eval(f, d)·eval(g, d) is
    /// what downstream proofs lean on.
    pub fn eval_at_t_qd(&self, ctx: &FieldCtx, d: u32) -> Result<RatFunc> {
        let qd = checked_pow(ctx.q(), d).ok_or_else(|| MzvError::ExponentOverflow {
            detail: format!("q^{d} with q = {}", ctx.q()),
        })?;
        let mut acc = RatFunc::zero(ctx);
        for (e, c) in &self.terms {
            let exp = e.checked_mul(qd).ok_or_else(|| MzvError::ExponentOverflow {
                detail: format!("T^{e} at T = t^{qd}"),
            })?;
            let num = c.num().shift(exp)?;
            let term = RatFunc::new(ctx, num, c.den().clone())?;
            acc = acc.add(ctx, &term);
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyrat::Poly;

    #[test]
    fn eval_of_constants_and_the_variable() {
        let ctx = FieldCtx::new(3, 1).unwrap();
        let one = BiPoly::one(&ctx);
        for d in 0..4 {
            assert_eq!(one.eval_at_t_qd(&ctx, d).unwrap(), RatFunc::one(&ctx));
        }
        let t_var = BiPoly::t_var(&ctx);
        assert_eq!(
            t_var.eval_at_t_qd(&ctx, 0).unwrap(),
            RatFunc::from_poly(&ctx, Poly::t(&ctx))
        );
    }

    #[test]
    fn eval_example_in_characteristic_two() {
        let ctx = FieldCtx::new(2, 1).unwrap();
        // T²/(t+t²) + t/(1+t), evaluated at T = t², is t + t².
        let t2t = Poly::from_codes(&ctx, &[0, 1, 1]);
        let p = BiPoly::from_terms(
            &ctx,
            vec![
                (2, RatFunc::new(&ctx, Poly::one(&ctx), t2t.clone()).unwrap()),
                (0, RatFunc::new(&ctx, Poly::t(&ctx), Poly::from_codes(&ctx, &[1, 1])).unwrap()),
            ],
        );
        let got = p.eval_at_t_qd(&ctx, 1).unwrap();
        assert_eq!(got, RatFunc::from_poly(&ctx, t2t));
    }

    #[test]
    fn eval_is_multiplicative() {
        let ctx = FieldCtx::new(2, 2).unwrap();
        let g = ctx.from_code(2);
        let f = BiPoly::from_terms(
            &ctx,
            vec![
                (0, RatFunc::from_poly(&ctx, Poly::t(&ctx))),
                (1, RatFunc::one(&ctx)),
            ],
        );
        let h = BiPoly::from_terms(
            &ctx,
            vec![
                (0, RatFunc::one(&ctx)),
                (2, RatFunc::from_poly(&ctx, Poly::constant(g))),
            ],
        );
        for d in 0..3 {
            let lhs = f.mul(&ctx, &h).eval_at_t_qd(&ctx, d).unwrap();
            let rhs = f
                .eval_at_t_qd(&ctx, d)
                .unwrap()
                .mul(&ctx, &h.eval_at_t_qd(&ctx, d).unwrap());
            assert_eq!(lhs, rhs);
        }
    }
}
