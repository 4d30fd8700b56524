//! Sparse univariate polynomials over F_q in the variable t.

use std::collections::BTreeMap;

use crate::error::{MzvError, Result};
use crate::ffield::{FieldCtx, FieldElem};

/// Sparse polynomial: strictly ascending exponents, no stored zero
/// coefficients, zero polynomial = empty term list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: Vec<(u64, FieldElem)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one(ctx: &FieldCtx) -> Self {
        Poly::constant(ctx.one())
    }

    /// The variable t itself.
    pub fn t(ctx: &FieldCtx) -> Self {
        Poly::monomial(1, ctx.one())
    }

    pub fn constant(c: FieldElem) -> Self {
        Poly::monomial(0, c)
    }

    pub fn monomial(exp: u64, coeff: FieldElem) -> Self {
        if coeff.coords().iter().all(|&x| x == 0) {
            return Poly::zero();
        }
        Poly {
            terms: vec![(exp, coeff)],
        }
    }

    /// Normalizing constructor: sorts, merges duplicate exponents, drops
    /// zeros.
    pub fn from_terms(ctx: &FieldCtx, terms: Vec<(u64, FieldElem)>) -> Self {
        let mut map: BTreeMap<u64, FieldElem> = BTreeMap::new();
        for (e, c) in terms {
            match map.remove(&e) {
                Some(prev) => {
                    let s = ctx.add(&prev, &c);
                    if !ctx.is_zero(&s) {
                        map.insert(e, s);
                    }
                }
                None => {
                    if !ctx.is_zero(&c) {
                        map.insert(e, c);
                    }
                }
            }
        }
        Poly {
            terms: map.into_iter().collect(),
        }
    }

    /// Polynomial from integer coefficient codes, ascending from t^0.
    pub fn from_codes(ctx: &FieldCtx, codes: &[u64]) -> Self {
        let terms = codes
            .iter()
            .enumerate()
            .map(|(i, &code)| (i as u64, ctx.from_code(code)))
            .collect();
        Poly::from_terms(ctx, terms)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<u64> {
        self.terms.last().map(|(e, _)| *e)
    }

    pub fn leading_coeff(&self, ctx: &FieldCtx) -> FieldElem {
        self.terms
            .last()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| ctx.zero())
    }

    pub fn coeff(&self, ctx: &FieldCtx, exp: u64) -> FieldElem {
        match self.terms.binary_search_by_key(&exp, |(e, _)| *e) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => ctx.zero(),
        }
    }

    pub fn terms(&self) -> &[(u64, FieldElem)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_one(&self, ctx: &FieldCtx) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1 == ctx.one()
    }

    pub fn add(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ea, ca) = &self.terms[i];
            let (eb, cb) = &other.terms[j];
            match ea.cmp(eb) {
                std::cmp::Ordering::Less => {
                    out.push((*ea, ca.clone()));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((*eb, cb.clone()));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let s = ctx.add(ca, cb);
                    if !ctx.is_zero(&s) {
                        out.push((*ea, s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Poly { terms: out }
    }

    pub fn neg(&self, ctx: &FieldCtx) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, ctx.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        self.add(ctx, &other.neg(ctx))
    }

    pub fn scale(&self, ctx: &FieldCtx, s: &FieldElem) -> Poly {
        if ctx.is_zero(s) {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, ctx.mul(c, s)))
                .collect(),
        }
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut map: BTreeMap<u64, FieldElem> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea + eb;
                let prod = ctx.mul(ca, cb);
                match map.remove(&e) {
                    Some(prev) => {
                        let s = ctx.add(&prev, &prod);
                        if !ctx.is_zero(&s) {
                            map.insert(e, s);
                        }
                    }
                    None => {
                        map.insert(e, prod);
                    }
                }
            }
        }
        Poly {
            terms: map.into_iter().collect(),
        }
    }

    /// Multiply by t^k with an explicit overflow check (exponents can sit
    /// near q^d already).
    pub fn shift(&self, k: u64) -> Result<Poly> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let shifted = e.checked_add(k).ok_or_else(|| MzvError::ExponentOverflow {
                detail: format!("t^{e} shifted by {k}"),
            })?;
            terms.push((shifted, c.clone()));
        }
        Ok(Poly { terms })
    }

    pub fn pow(&self, ctx: &FieldCtx, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(ctx);
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

    /// p-th power via the Frobenius: coefficients to the p, exponents times p.
    pub fn frobenius_power(&self, ctx: &FieldCtx) -> Result<Poly> {
        let p = ctx.p();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let new_exp = e.checked_mul(p).ok_or_else(|| MzvError::ExponentOverflow {
                detail: format!("t^{e} raised to the characteristic"),
            })?;
            terms.push((new_exp, ctx.pow(c, p)));
        }
        Ok(Poly { terms })
    }

    /// Substitute t ↦ t^e. Injective on polynomials, so gcd-free callers can
    /// rely on coprimality being preserved.
    pub fn substitute_t_power(&self, e: u64) -> Result<Poly> {
        if e == 0 {
            return Err(MzvError::InvalidIndex {
                detail: "substitution t -> t^0 collapses the variable".into(),
            });
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (exp, c) in &self.terms {
            let new_exp = exp.checked_mul(e).ok_or_else(|| MzvError::ExponentOverflow {
                detail: format!("t^{exp} substituted with e = {e}"),
            })?;
            terms.push((new_exp, c.clone()));
        }
        Ok(Poly { terms })
    }

    /// Formal derivative d/dt.
    pub fn derivative(&self, ctx: &FieldCtx) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| *e > 0)
            .filter_map(|(e, c)| {
                let factor = ctx.embed_prime(e % ctx.p());
                let coeff = ctx.mul(c, &factor);
                if ctx.is_zero(&coeff) {
                    None
                } else {
                    Some((e - 1, coeff))
                }
            })
            .collect();
        Poly { terms }
    }

    pub fn eval(&self, ctx: &FieldCtx, x: &FieldElem) -> FieldElem {
        // Horner over the sparse gaps.
        let mut acc = ctx.zero();
        let mut prev_exp = None;
        for (e, c) in self.terms.iter().rev() {
            if let Some(pe) = prev_exp {
                acc = ctx.mul(&acc, &ctx.pow(x, pe - e));
            }
            acc = ctx.add(&acc, c);
            prev_exp = Some(*e);
        }
        if let Some(e) = prev_exp {
            acc = ctx.mul(&acc, &ctx.pow(x, e));
        }
        acc
    }

    /// Leading coefficient scaled to 1; zero stays zero.
    pub fn make_monic(&self, ctx: &FieldCtx) -> Poly {
        match self.terms.last() {
            None => Poly::zero(),
            Some((_, lead)) => self.scale(ctx, &ctx.inv(lead)),
        }
    }

    /// Euclidean division: self = q·div + r with deg r < deg div.
    pub fn divmod(&self, ctx: &FieldCtx, div: &Poly) -> Result<(Poly, Poly)> {
        if div.is_zero() {
            return Err(MzvError::ZeroDenominator);
        }
        let dd = div.degree().unwrap();
        let lead_inv = ctx.inv(&div.leading_coeff(ctx));
        let mut rem = self.clone();
        let mut quot_terms: Vec<(u64, FieldElem)> = Vec::new();
        while let Some(dr) = rem.degree() {
            if dr < dd {
                break;
            }
            let coef = ctx.mul(&rem.leading_coeff(ctx), &lead_inv);
            let shift = dr - dd;
            quot_terms.push((shift, coef.clone()));
            let sub = div.scale(ctx, &coef).shift(shift)?;
            rem = rem.sub(ctx, &sub);
        }
        quot_terms.reverse();
        Ok((Poly { terms: quot_terms }, rem))
    }

    /// Monic gcd by the Euclidean algorithm; gcd(0, 0) = 0.
    pub fn gcd(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.divmod(ctx, &b).expect("nonzero divisor").1;
            a = b;
            b = r;
        }
        a.make_monic(ctx)
    }

    /// Exact division; errors if the remainder is nonzero.
    pub fn exact_div(&self, ctx: &FieldCtx, div: &Poly) -> Result<Poly> {
        let (q, r) = self.divmod(ctx, div)?;
        if !r.is_zero() {
            return Err(MzvError::VerificationFailed {
                detail: "exact division left a remainder".into(),
            });
        }
        Ok(q)
    }
}
