//! Power sums over monic polynomials of a fixed degree, exactly.
//!
//! S_d(k) = Σ a^{−k} over the q^d monics a of degree d. The monics of
//! degree d are precisely the roots of P_d(x) = e_d(x) − D_d, where e_d
//! is the Carlitz polynomial, so Σ 1/(x − a) = P_d'(x)/P_d(x) and
//! S_d(k) = −[x^{k−1}] P_d'/P_d. This module expands that logarithmic
//! derivative as an exact power series, which costs polynomial time in k
//! and d; literal enumeration over the q^d monics is retained as an
//! independent oracle.
//!
//! Series coefficients are held in a factored form: every denominator that
//! the expansion produces is a product of the basis polynomials
//! [j] = t^{q^j} − t, so a coefficient is a dense numerator plus an
//! exponent vector over that basis. Common-denominator alignment is a
//! componentwise max and a few shifted adds; no gcd runs in the loop.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::dense::{DPoly, FqTab};
#[cfg(test)]
use crate::dense::ExtField;
use crate::error::{MzvError, Result};
use crate::ffield::FieldCtx;
use crate::polyrat::{Poly, RatFunc};

/// Memoized Carlitz quantities ([n], D_n, L_n, ℓ_n, the e_d coefficient
/// lists) plus the per-degree series state for S_d(k). Appends under a
/// lock; returned values are immutable clones.
pub struct CarlitzCache {
    ctx: FieldCtx,
    tab: Option<FqTab>,
    inner: Mutex<Inner>,
}

struct Inner {
    /// brackets[j−1] = [j] = t^{q^j} − t.
    brackets: Vec<Poly>,
    /// big_d[n] = D_n, big_l[n] = L_n (index 0 = 1).
    big_d: Vec<Poly>,
    big_l: Vec<Poly>,
    /// e_coeffs[d][i] = coefficient of x^{q^i} in e_d(x).
    e_coeffs: Vec<Vec<Poly>>,
    /// Per-degree series state, extended to the session's high-water k.
    sigma: HashMap<u32, SigmaState>,
}

/// Series coefficient in factored-denominator form: value = num / Π [j]^{env[j−1]}.
type FdVal = (DPoly, Vec<u32>);

struct SigmaState {
    /// steps[i] = q^i.
    steps: Vec<usize>,
    /// betas[i][j−1] = exponent of [j] in D_i · L_{d−i}^{q^i}.
    betas: Vec<Vec<u32>>,
    /// signs[i] = code of (−1)^{d−i}.
    signs: Vec<u8>,
    /// sig[m] = m-th series coefficient of −D_d/P_d(x).
    sig: Vec<FdVal>,
}

impl CarlitzCache {
    pub fn new(ctx: &FieldCtx) -> CarlitzCache {
        let tab = FqTab::new(ctx).ok();
        CarlitzCache {
            ctx: ctx.clone(),
            tab,
            inner: Mutex::new(Inner {
                brackets: Vec::new(),
                big_d: Vec::new(),
                big_l: Vec::new(),
                e_coeffs: Vec::new(),
                sigma: HashMap::new(),
            }),
        }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    /// [n] = t^{q^n} − t; defined for n ≥ 1.
    pub fn bracket(&self, n: u32) -> Result<Poly> {
        if n == 0 {
            return Err(MzvError::InvalidIndex {
                detail: "[0] is undefined; brackets start at [1]".into(),
            });
        }
        let mut inner = self.inner.lock().unwrap();
        self.grow_brackets(&mut inner, n)?;
        Ok(inner.brackets[n as usize - 1].clone())
    }

    fn grow_brackets(&self, inner: &mut Inner, n: u32) -> Result<()> {
        let ctx = &self.ctx;
        while inner.brackets.len() < n as usize {
            let j = inner.brackets.len() as u32 + 1;
            let e = crate::ffield::checked_pow(ctx.q(), j).ok_or_else(|| {
                MzvError::ExponentOverflow {
                    detail: format!("q^{j} in bracket [{j}]"),
                }
            })?;
            let b = Poly::from_terms(
                ctx,
                vec![(1u64, ctx.neg(&ctx.one())), (e, ctx.one())],
            );
            inner.brackets.push(b);
        }
        Ok(())
    }

    fn grow_special(&self, inner: &mut Inner, n: u32) -> Result<()> {
        let ctx = &self.ctx;
        self.grow_brackets(inner, n.max(1))?;
        if inner.big_d.is_empty() {
            inner.big_d.push(Poly::one(ctx));
            inner.big_l.push(Poly::one(ctx));
        }
        while inner.big_d.len() <= n as usize {
            let m = inner.big_d.len();
            let br = inner.brackets[m - 1].clone();
            // D_m = [m] · D_{m−1}^q, the q-th power via n Frobenius twists.
            let mut dq = inner.big_d[m - 1].clone();
            for _ in 0..ctx.n() {
                dq = dq.frobenius_power(ctx)?;
            }
            inner.big_d.push(br.mul(ctx, &dq));
            let l = inner.brackets[m - 1].mul(ctx, &inner.big_l[m - 1]);
            inner.big_l.push(l);
        }
        Ok(())
    }

    /// D_n = [n] D_{n−1}^q, D_0 = 1.
    pub fn big_d(&self, n: u32) -> Result<Poly> {
        let mut inner = self.inner.lock().unwrap();
        self.grow_special(&mut inner, n)?;
        Ok(inner.big_d[n as usize].clone())
    }

    /// L_n = [n] L_{n−1}, L_0 = 1.
    pub fn big_l(&self, n: u32) -> Result<Poly> {
        let mut inner = self.inner.lock().unwrap();
        self.grow_special(&mut inner, n)?;
        Ok(inner.big_l[n as usize].clone())
    }

    /// ℓ_n = (−1)^n L_n.
    pub fn ell(&self, n: u32) -> Result<Poly> {
        let l = self.big_l(n)?;
        if n % 2 == 1 {
            Ok(l.neg(&self.ctx))
        } else {
            Ok(l)
        }
    }

    /// ([n], D_n, L_n, ℓ_n); the bracket slot is None at n = 0.
    pub fn special_polys(&self, n: u32) -> Result<(Option<Poly>, Poly, Poly, Poly)> {
        let b = if n == 0 { None } else { Some(self.bracket(n)?) };
        Ok((b, self.big_d(n)?, self.big_l(n)?, self.ell(n)?))
    }

    /// Coefficient list of the Carlitz polynomial e_d(x) = Σ_i c_i x^{q^i};
    /// returns [c_0, …, c_d].
    pub fn carlitz_e(&self, d: u32) -> Result<Vec<Poly>> {
        let ctx = &self.ctx;
        let mut inner = self.inner.lock().unwrap();
        if inner.e_coeffs.is_empty() {
            inner.e_coeffs.push(vec![Poly::one(ctx)]); // e_0(x) = x
        }
        while inner.e_coeffs.len() <= d as usize {
            let dd = inner.e_coeffs.len() as u32 - 1;
            self.grow_special(&mut inner, dd)?;
            // e_{d+1}(x) = e_d(x)^q − e_d(t^d)^{q−1} e_d(x), e_d(t^d) = D_d.
            let scale = inner.big_d[dd as usize].pow(ctx, self.ctx.q() - 1);
            let prev = inner.e_coeffs[dd as usize].clone();
            let mut next = Vec::with_capacity(prev.len() + 1);
            for i in 0..=prev.len() {
                let mut c = if i == 0 {
                    Poly::zero()
                } else {
                    let mut cq = prev[i - 1].clone();
                    for _ in 0..ctx.n() {
                        cq = cq.frobenius_power(ctx)?;
                    }
                    cq
                };
                if i < prev.len() {
                    c = c.sub(ctx, &scale.mul(ctx, &prev[i]));
                }
                next.push(c);
            }
            inner.e_coeffs.push(next);
        }
        Ok(inner.e_coeffs[d as usize].clone())
    }

    /// S_d(k) as a canonical rational function.
    pub fn power_sum(&self, d: u32, k: u64) -> Result<RatFunc> {
        let (num, env) = self.power_sum_fd(d, k)?;
        self.fd_to_ratfunc(&num, &env)
    }

    /// S_d(k) in factored-denominator form: value = num / Π [j]^{env[j−1]}.
    /// Not reduced to lowest terms; exact. Internal comparisons use this to
    /// avoid the final gcd.
    pub(crate) fn power_sum_fd(&self, d: u32, k: u64) -> Result<FdVal> {
        if k == 0 {
            return Err(MzvError::InvalidIndex {
                detail: "power sums need k >= 1".into(),
            });
        }
        if d == 0 {
            return Ok((DPoly::one(), Vec::new()));
        }
        let tab = self.tab()?;
        let mut inner = self.inner.lock().unwrap();
        self.extend_sigma(&mut inner, tab, d, (k - 1) as usize)?;
        let st = inner.sigma.get(&d).unwrap();
        let (num, env) = &st.sig[(k - 1) as usize];
        // S_d(k) = σ_{k−1}/ℓ_d with ℓ_d = (−1)^d Π_{j≤d} [j].
        let mut num = num.clone();
        if d % 2 == 1 {
            num.neg_assign(tab);
        }
        let env: Vec<u32> = env.iter().map(|e| e + 1).collect();
        Ok((num, env))
    }

    /// Series state for S_d: coefficient m of −D_d/P_d(x) in factored form.
    /// σ_m = Σ_{i, q^i ≤ m} (−1)^{d−i} σ_{m−q^i} / (D_i · L_{d−i}^{q^i}),
    /// which is the series inversion of P_d with the Carlitz coefficient
    /// e_{d,i}/D_d written as a bracket product.
    fn extend_sigma(&self, inner: &mut Inner, tab: &FqTab, d: u32, m_target: usize) -> Result<()> {
        let q = self.ctx.q();
        if !inner.sigma.contains_key(&d) {
            let du = d as usize;
            let mut steps = Vec::with_capacity(du + 1);
            for i in 0..=du {
                let s = crate::ffield::checked_pow(q, i as u32)
                    .filter(|&s| s <= (1u64 << 40))
                    .ok_or_else(|| MzvError::ExponentOverflow {
                        detail: format!("q^{i} lag in the degree-{d} series"),
                    })?;
                steps.push(s as usize);
            }
            let mut betas = Vec::with_capacity(du + 1);
            let mut signs = Vec::with_capacity(du + 1);
            for i in 0..=du {
                let mut beta = vec![0u32; du];
                for j in 1..=du {
                    let mut e = 0u64;
                    if j <= i {
                        e += steps[i - j] as u64;
                    }
                    if j <= du - i {
                        e += steps[i] as u64;
                    }
                    beta[j - 1] = u32::try_from(e).map_err(|_| MzvError::ExponentOverflow {
                        detail: format!("bracket exponent for i = {i}, j = {j}"),
                    })?;
                }
                betas.push(beta);
                signs.push(if (du - i) % 2 == 0 { 1 } else { tab.neg(1) });
            }
            inner.sigma.insert(
                d,
                SigmaState {
                    steps,
                    betas,
                    signs,
                    sig: vec![(DPoly::one(), vec![0u32; du])],
                },
            );
        }
        let qpow: Vec<usize> = {
            let st = inner.sigma.get(&d).unwrap();
            st.steps.clone()
        };
        let st = inner.sigma.get_mut(&d).unwrap();
        while st.sig.len() <= m_target {
            let m = st.sig.len();
            let du = d as usize;
            let mut env = vec![0u32; du];
            for i in 0..=du {
                if st.steps[i] <= m {
                    let prev_env = &st.sig[m - st.steps[i]].1;
                    for j in 0..du {
                        env[j] = env[j].max(prev_env[j] + st.betas[i][j]);
                    }
                }
            }
            let mut num = DPoly::zero();
            for i in 0..=du {
                if st.steps[i] > m {
                    continue;
                }
                let (prev_num, prev_env) = &st.sig[m - st.steps[i]];
                let mut term = prev_num.clone();
                for j in 0..du {
                    let gap = env[j] - prev_env[j] - st.betas[i][j];
                    if gap > 0 {
                        term = term.mul_bracket_pow(qpow[j + 1], gap, tab);
                    }
                }
                num.add_scaled_shifted(&term, st.signs[i], 0, tab);
            }
            if num.c.len() > 64_000_000 {
                return Err(MzvError::TooLarge {
                    detail: format!("series numerator for S_{d} exceeds the dense budget at order {m}"),
                });
            }
            st.sig.push((num, env));
        }
        Ok(())
    }

    fn tab(&self) -> Result<&FqTab> {
        self.tab.as_ref().ok_or_else(|| MzvError::TooLarge {
            detail: format!("series engine needs q <= 256, got q = {}", self.ctx.q()),
        })
    }

    /// Build Π [j]^{env[j−1]} as a dense polynomial and canonicalize.
    fn fd_to_ratfunc(&self, num: &DPoly, env: &[u32]) -> Result<RatFunc> {
        let tab = self.tab()?;
        let mut den = DPoly::one();
        for (j0, &e) in env.iter().enumerate() {
            if e > 0 {
                let step = crate::ffield::checked_pow(self.ctx.q(), j0 as u32 + 1)
                    .filter(|&s| s <= (1u64 << 32))
                    .ok_or_else(|| MzvError::ExponentOverflow {
                        detail: format!("bracket [{}] in a denominator", j0 + 1),
                    })? as usize;
                den = den.mul_bracket_pow(step, e, tab);
            }
        }
        RatFunc::new(&self.ctx, num.to_poly(&self.ctx), den.to_poly(&self.ctx))
    }

    /// Equality of two factored-form values without any gcd: align the
    /// envelopes by componentwise max and compare numerators.
    pub(crate) fn fd_equal(&self, a: &FdVal, b: &FdVal) -> Result<bool> {
        let tab = self.tab()?;
        let q = self.ctx.q();
        let len = a.1.len().max(b.1.len());
        let get = |env: &[u32], j: usize| env.get(j).copied().unwrap_or(0);
        let mut na = a.0.clone();
        let mut nb = b.0.clone();
        for j0 in 0..len {
            let target = get(&a.1, j0).max(get(&b.1, j0));
            let step = crate::ffield::checked_pow(q, j0 as u32 + 1)
                .filter(|&s| s <= (1u64 << 32))
                .ok_or_else(|| MzvError::ExponentOverflow {
                    detail: format!("bracket [{}] in comparison", j0 + 1),
                })? as usize;
            let ga = target - get(&a.1, j0);
            let gb = target - get(&b.1, j0);
            if ga > 0 {
                na = na.mul_bracket_pow(step, ga, tab);
            }
            if gb > 0 {
                nb = nb.mul_bracket_pow(step, gb, tab);
            }
        }
        Ok(na == nb)
    }

    /// Literal Σ a^{−k} over all monics of degree d. Guarded enumeration;
    /// cost grows quadratically in q^d.
    pub fn power_sum_oracle(&self, d: u32, k: u64) -> Result<RatFunc> {
        if k == 0 {
            return Err(MzvError::InvalidIndex {
                detail: "power sums need k >= 1".into(),
            });
        }
        let ctx = &self.ctx;
        let count = crate::ffield::checked_pow(ctx.q(), d)
            .filter(|&c| c <= 100_000)
            .ok_or_else(|| MzvError::TooLarge {
                detail: format!("enumeration oracle needs q^d <= 10^5, got q^{d}"),
            })?;
        let mut num = Poly::zero();
        let mut den = Poly::one(ctx);
        for code in 0..count {
            // Monic a = t^d + Σ c_i t^i from the base-q digits of code.
            let mut terms = vec![(d as u64, ctx.one())];
            let mut c = code;
            for i in 0..d as u64 {
                let digit = c % ctx.q();
                c /= ctx.q();
                if digit != 0 {
                    terms.push((i, ctx.from_code(digit)));
                }
            }
            let a = Poly::from_terms(ctx, terms);
            let ak = a.pow(ctx, k);
            num = num.mul(ctx, &ak).add(ctx, &den);
            den = den.mul(ctx, &ak);
        }
        RatFunc::new(ctx, num, den)
    }

    /// Exact check of the scaling law S_d(p·s) = S_d(s)^p on factored
    /// forms, with no reduction: the p-th power acts termwise on the
    /// numerator (Frobenius) and multiplies the denominator envelope by p.
    /// This stays cheap at sizes where building the reduced rational
    /// function would not.
    pub fn frobenius_check(&self, d: u32, s: u64) -> Result<bool> {
        let p = self.ctx.p();
        let lhs = self.power_sum_fd(d, p * s)?;
        let (num, env) = self.power_sum_fd(d, s)?;
        let tab = self.tab()?;
        let pu = p as usize;
        let mut coeffs = vec![0u8; num.deg().map_or(1, |n| n * pu + 1)];
        if let Some(nd) = num.deg() {
            for i in 0..=nd {
                let c = num.coeff(i);
                let mut cp = c;
                for _ in 1..p {
                    cp = tab.mul(cp, c);
                }
                coeffs[i * pu] = cp;
            }
        }
        let mut penv = Vec::with_capacity(env.len());
        for &e in &env {
            let pe = e.checked_mul(p as u32).ok_or_else(|| MzvError::ExponentOverflow {
                detail: format!("envelope power {e}·{p} in the scaling check"),
            })?;
            penv.push(pe);
        }
        self.fd_equal(&lhs, &(DPoly::from_vec(coeffs), penv))
    }

    /// Numerator of x over a target envelope with target[j] ≥ env[j].
    fn fd_raise(&self, x: &FdVal, target: &[u32]) -> Result<DPoly> {
        let tab = self.tab()?;
        let mut num = x.0.clone();
        for (j0, &t) in target.iter().enumerate() {
            let gap = t - x.1.get(j0).copied().unwrap_or(0);
            if gap > 0 {
                let step = crate::ffield::checked_pow(self.ctx.q(), j0 as u32 + 1)
                    .filter(|&s| s <= (1u64 << 32))
                    .ok_or_else(|| MzvError::ExponentOverflow {
                        detail: format!("bracket [{}] in envelope alignment", j0 + 1),
                    })? as usize;
                num = num.mul_bracket_pow(step, gap, tab);
            }
        }
        Ok(num)
    }

    /// Sum of two factored-form values over the componentwise-max envelope.
    fn fd_add(&self, x: &FdVal, y: &FdVal) -> Result<FdVal> {
        let tab = self.tab()?;
        let len = x.1.len().max(y.1.len());
        let mut env = vec![0u32; len];
        for (j, e) in env.iter_mut().enumerate() {
            *e = x.1.get(j).copied().unwrap_or(0).max(y.1.get(j).copied().unwrap_or(0));
        }
        let mut nx = self.fd_raise(x, &env)?;
        let ny = self.fd_raise(y, &env)?;
        nx.add_assign(&ny, tab);
        Ok((nx, env))
    }

    /// Product of two factored-form values; envelopes add componentwise.
    fn fd_mul(&self, x: &FdVal, y: &FdVal) -> Result<FdVal> {
        let tab = self.tab()?;
        let len = x.1.len().max(y.1.len());
        let mut env = vec![0u32; len];
        for (j, e) in env.iter_mut().enumerate() {
            let ex = x.1.get(j).copied().unwrap_or(0);
            let ey = y.1.get(j).copied().unwrap_or(0);
            *e = ex.checked_add(ey).ok_or_else(|| MzvError::ExponentOverflow {
                detail: format!("bracket [{}] exponent in a product", j + 1),
            })?;
        }
        Ok((x.0.mul(&y.0, tab), env))
    }

    /// S_{<d}(k) in factored form.
    fn power_sum_less_fd(&self, d: u32, k: u64) -> Result<FdVal> {
        let mut acc = (DPoly::zero(), Vec::new());
        for e in 0..d {
            let v = self.power_sum_fd(e, k)?;
            acc = self.fd_add(&acc, &v)?;
        }
        Ok(acc)
    }

    /// Exact check of Δ_d(a,b) = Σ c·S_d(a_j, a+b−a_j) at one degree, on
    /// factored forms with no reduction. Terms are (c, a_j) with c a
    /// prime-subfield residue. This is the workhorse behind per-degree
    /// verification; it stays polynomial-sized where the reduced route
    /// would spend its time in gcds.
    pub fn shuffle_check(&self, d: u32, a: u64, b: u64, terms: &[(u64, u64)]) -> Result<bool> {
        if a == 0 || b == 0 {
            return Err(MzvError::InvalidIndex {
                detail: "delta needs a, b >= 1".into(),
            });
        }
        // Δ_0 = 0 and every S_0(a_j, ·) carries an empty inner sum.
        if d == 0 {
            return Ok(true);
        }
        let tab = self.tab()?;
        let w = a + b;
        let lhs = {
            let sa = self.power_sum_fd(d, a)?;
            let sb = self.power_sum_fd(d, b)?;
            let mut sw = self.power_sum_fd(d, w)?;
            sw.0.neg_assign(tab);
            let prod = self.fd_mul(&sa, &sb)?;
            self.fd_add(&prod, &sw)?
        };
        let mut rhs = (DPoly::zero(), Vec::new());
        for &(c, aj) in terms {
            if aj == 0 || aj >= w {
                return Err(MzvError::InvalidIndex {
                    detail: format!("shuffle index a_j = {aj} outside 1..{w}"),
                });
            }
            let sd = self.power_sum_fd(d, aj)?;
            let less = self.power_sum_less_fd(d, w - aj)?;
            let mut term = self.fd_mul(&sd, &less)?;
            let code = self.ctx.to_code(&self.ctx.embed_prime(c)) as u8;
            term.0.scale_assign(code, tab);
            rhs = self.fd_add(&rhs, &term)?;
        }
        self.fd_equal(&lhs, &rhs)
    }

    /// S_{<d}(k) = Σ_{e<d} S_e(k); empty sum at d = 0.
    pub fn power_sum_less(&self, d: u32, k: u64) -> Result<RatFunc> {
        let ctx = &self.ctx;
        let mut acc = RatFunc::zero(ctx);
        for e in 0..d {
            acc = acc.add(ctx, &self.power_sum(e, k)?);
        }
        Ok(acc)
    }

    /// S_d(s1, s2) = S_d(s1) · S_{<d}(s2), the depth-two truncated sum.
    pub fn power_sum_double(&self, d: u32, s1: u64, s2: u64) -> Result<RatFunc> {
        if d == 0 {
            return Ok(RatFunc::zero(&self.ctx));
        }
        let a = self.power_sum(d, s1)?;
        let b = self.power_sum_less(d, s2)?;
        Ok(a.mul(&self.ctx, &b))
    }

    /// Δ_d(a, b) = S_d(a) S_d(b) − S_d(a+b).
    pub fn delta(&self, d: u32, a: u64, b: u64) -> Result<RatFunc> {
        if a == 0 || b == 0 {
            return Err(MzvError::InvalidIndex {
                detail: "delta needs a, b >= 1".into(),
            });
        }
        let ctx = &self.ctx;
        let sa = self.power_sum(d, a)?;
        let sb = self.power_sum(d, b)?;
        let sab = self.power_sum(d, a + b)?;
        Ok(sa.mul(ctx, &sb).sub(ctx, &sab))
    }

    /// Truncated zeta: Σ over D ≥ d_1 > … > d_r ≥ 0 of Π S_{d_i}(s_i).
    /// Depth capped at 4.
    pub fn zeta_trunc(&self, s: &[u64], cutoff: u32) -> Result<RatFunc> {
        if s.is_empty() || s.len() > 4 {
            return Err(MzvError::InvalidIndex {
                detail: format!("depth must be 1..=4, got {}", s.len()),
            });
        }
        if s.iter().any(|&si| si == 0) {
            return Err(MzvError::InvalidIndex {
                detail: "zeta indices must be >= 1".into(),
            });
        }
        self.zeta_rec(s, cutoff as i64)
    }

    fn zeta_rec(&self, s: &[u64], upper: i64) -> Result<RatFunc> {
        let ctx = &self.ctx;
        let remaining = s.len() as i64 - 1;
        let mut acc = RatFunc::zero(ctx);
        // d runs downward, leaving room for the deeper indices.
        let mut d = upper;
        while d >= remaining {
            let head = self.power_sum(d as u32, s[0])?;
            let tail = if s.len() == 1 {
                RatFunc::one(ctx)
            } else {
                self.zeta_rec(&s[1..], d - 1)?
            };
            acc = acc.add(ctx, &head.mul(ctx, &tail));
            d -= 1;
        }
        Ok(acc)
    }

    /// Check S_d(m q^i − 1) = ℓ_{d+i} / (ℓ_i ℓ_d^{m q^i}) for 2 ≤ m ≤ q.
    /// Returns (equal, lhs, rhs).
    pub fn closed_form_sd(&self, m: u64, i: u32, d: u32) -> Result<(bool, RatFunc, RatFunc)> {
        let ctx = &self.ctx;
        if m < 2 || m > ctx.q() {
            return Err(MzvError::InvalidIndex {
                detail: format!("closed form needs 2 <= m <= q, got m = {m}"),
            });
        }
        let qi = crate::ffield::checked_pow(ctx.q(), i).ok_or_else(|| {
            MzvError::ExponentOverflow {
                detail: format!("q^{i} in closed form"),
            }
        })?;
        let k = m
            .checked_mul(qi)
            .and_then(|v| v.checked_sub(1))
            .ok_or_else(|| MzvError::ExponentOverflow {
                detail: "m q^i - 1 overflows".into(),
            })?;
        let lhs = self.power_sum(d, k)?;
        let num = self.ell(d + i)?;
        let den = self.ell(i)?.mul(ctx, &self.ell(d)?.pow(ctx, m * qi));
        let rhs = RatFunc::new(ctx, num, den)?;
        Ok((lhs == rhs, lhs, rhs))
    }

    /// Evaluate S_d(1), …, S_d(kmax) at a point θ of an extension field.
    /// θ must avoid the subfields F_{q^s}, s ≤ d, so that no bracket
    /// vanishes. Same series recurrence as `power_sum`, scalar coefficients;
    /// kept as a test oracle for the extension-field arithmetic.
    #[cfg(test)]
    pub(crate) fn power_sum_eval_chain(
        &self,
        ext: &ExtField,
        theta: u16,
        d: u32,
        kmax: usize,
    ) -> Result<Vec<u16>> {
        if d == 0 {
            return Ok(vec![ExtField::ONE; kmax]);
        }
        let du = d as usize;
        let q = self.ctx.q();
        // Brackets, D_i, L_i at θ.
        let mut bk = vec![ExtField::ZERO; du + 1];
        for (j, slot) in bk.iter_mut().enumerate().skip(1) {
            let v = ext.sub(ext.frob_q(theta, j as u32), theta);
            if ExtField::is_zero(v) {
                return Err(MzvError::VerificationFailed {
                    detail: format!("evaluation point lies in F_q^{j}"),
                });
            }
            *slot = v;
        }
        let mut dv = vec![ExtField::ONE; du + 1];
        let mut lv = vec![ExtField::ONE; du + 1];
        for i in 1..=du {
            dv[i] = ext.mul(bk[i], ext.pow(dv[i - 1], q));
            lv[i] = ext.mul(bk[i], lv[i - 1]);
        }
        let mut steps = Vec::with_capacity(du + 1);
        let mut coefs = Vec::with_capacity(du + 1);
        for i in 0..=du {
            let qi = crate::ffield::checked_pow(q, i as u32).ok_or_else(|| {
                MzvError::ExponentOverflow {
                    detail: format!("q^{i} lag"),
                }
            })?;
            steps.push(qi as usize);
            let den = ext.mul(dv[i], ext.pow(lv[du - i], qi));
            let mut c = ext.inv(den);
            if (du - i) % 2 == 1 {
                c = ext.neg(c);
            }
            coefs.push(c);
        }
        let mut sig = Vec::with_capacity(kmax);
        sig.push(ExtField::ONE);
        for m in 1..kmax {
            let mut acc = ExtField::ZERO;
            for i in 0..=du {
                if steps[i] <= m {
                    acc = ext.add(acc, ext.mul(coefs[i], sig[m - steps[i]]));
                }
            }
            sig.push(acc);
        }
        let mut ell_inv = ext.inv(lv[du]);
        if du % 2 == 1 {
            ell_inv = ext.neg(ell_inv);
        }
        Ok(sig.into_iter().map(|s| ext.mul(s, ell_inv)).collect())
    }

    pub(crate) fn fq_tab(&self) -> Result<&FqTab> {
        self.tab()
    }
}
