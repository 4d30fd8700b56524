//! Finite-field contexts F_q (q = p^n) and base-p digit combinatorics.
//!
//! A [`FieldCtx`] owns the modulus and does the arithmetic; a [`FieldElem`]
//! is just a coordinate vector with respect to the power basis of that
//! modulus. All operations are methods on the context so elements stay
//! plain data. Moduli are deterministic: unless the caller supplies one,
//! the context uses the monic irreducible of degree n whose lower
//! coefficients, read as a base-p integer with the constant term least
//! significant, are minimal. Relation coefficients must never depend on the
//! model of F_q, so reproducibility of the modulus choice matters.

use crate::error::{MzvError, Result};

/// Finite-field context: p prime, n ≥ 1, q = p^n, and a monic irreducible
/// modulus of degree n over F_p (coefficients ascending, length n+1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldCtx {
    p: u64,
    n: usize,
    q: u64,
    modulus: Vec<u64>,
}

/// Element of F_q: n residues mod p, coordinates of the power basis
/// 1, x, …, x^{n−1} of the context's modulus.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    c: Vec<u64>,
}

impl FieldCtx {
    /// Context with the canonical (minimal) modulus.
    pub fn new(p: u64, n: usize) -> Result<Self> {
        Self::build(p, n, None)
    }

    /// Context with an explicit monic modulus, given as its full ascending
    /// coefficient list of length n+1.
    pub fn with_modulus(p: u64, n: usize, modulus: Vec<u64>) -> Result<Self> {
        Self::build(p, n, Some(modulus))
    }

    fn build(p: u64, n: usize, modulus: Option<Vec<u64>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(MzvError::CompositeP { p });
        }
        if n == 0 {
            return Err(MzvError::InvalidIndex {
                detail: "extension degree n must be >= 1".into(),
            });
        }
        let q = checked_pow(p, n as u32).ok_or_else(|| MzvError::ExponentOverflow {
            detail: format!("q = {p}^{n} exceeds 2^63"),
        })?;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != n + 1 || *m.last().unwrap() % p != 1 {
                    return Err(MzvError::DegreeMismatch {
                        detail: format!(
                            "modulus must be monic of degree {n} (got {} coefficients)",
                            m.len()
                        ),
                    });
                }
                let m: Vec<u64> = m.iter().map(|c| c % p).collect();
                if !fp_is_irreducible(&m, p) {
                    return Err(MzvError::ReducibleModulus {
                        modulus: fp_poly_string(&m),
                        p,
                    });
                }
                m
            }
            None => canonical_modulus(p, n),
        };
        Ok(FieldCtx { p, n, q, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Ascending coefficient list of the modulus, length n+1, monic.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// The modulus rendered as a polynomial in x, for messages and cache keys.
    pub fn modulus_string(&self) -> String {
        fp_poly_string(&self.modulus)
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem { c: vec![0; self.n] }
    }

    pub fn one(&self) -> FieldElem {
        self.embed_prime(1)
    }

    /// Image of the integer residue c under F_p ↪ F_q.
    pub fn embed_prime(&self, c: u64) -> FieldElem {
        let mut v = vec![0; self.n];
        v[0] = c % self.p;
        FieldElem { c: v }
    }

    /// Element from its base-p code Σ cᵢ pⁱ (constant coordinate least
    /// significant). Codes run over [0, q).
    pub fn from_code(&self, code: u64) -> FieldElem {
        let mut v = vec![0; self.n];
        let mut rest = code % self.q;
        for slot in v.iter_mut() {
            *slot = rest % self.p;
            rest /= self.p;
        }
        FieldElem { c: v }
    }

    /// Inverse of [`FieldCtx::from_code`].
    pub fn to_code(&self, a: &FieldElem) -> u64 {
        let mut code = 0u64;
        for &ci in a.c.iter().rev() {
            code = code * self.p + ci;
        }
        code
    }

    /// Element from explicit coordinates (length must be n).
    pub fn from_coords(&self, coords: &[u64]) -> Result<FieldElem> {
        if coords.len() != self.n {
            return Err(MzvError::DegreeMismatch {
                detail: format!("expected {} coordinates, got {}", self.n, coords.len()),
            });
        }
        Ok(FieldElem {
            c: coords.iter().map(|c| c % self.p).collect(),
        })
    }

    pub fn is_zero(&self, a: &FieldElem) -> bool {
        a.c.iter().all(|&x| x == 0)
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem {
            c: a.c
                .iter()
                .zip(&b.c)
                .map(|(&x, &y)| (x + y) % self.p)
                .collect(),
        }
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem {
            c: a.c
                .iter()
                .zip(&b.c)
                .map(|(&x, &y)| (x + self.p - y) % self.p)
                .collect(),
        }
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        FieldElem {
            c: a.c.iter().map(|&x| (self.p - x) % self.p).collect(),
        }
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        if self.n == 1 {
            return FieldElem {
                c: vec![mulmod(a.c[0], b.c[0], self.p)],
            };
        }
        // Schoolbook product, then reduce by the monic modulus from the top.
        let mut prod = vec![0u64; 2 * self.n - 1];
        for (i, &x) in a.c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.c.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                prod[i + j] = (prod[i + j] + mulmod(x, y, self.p)) % self.p;
            }
        }
        self.reduce_in_place(&mut prod);
        prod.truncate(self.n);
        FieldElem { c: prod }
    }

    fn reduce_in_place(&self, v: &mut Vec<u64>) {
        // modulus is monic: x^n ≡ −(lower part).
        while v.len() > self.n {
            let top = v.pop().unwrap();
            if top == 0 {
                continue;
            }
            let shift = v.len() - self.n;
            for (i, &mi) in self.modulus[..self.n].iter().enumerate() {
                if mi == 0 {
                    continue;
                }
                let sub = mulmod(top, mi, self.p);
                let slot = &mut v[shift + i];
                *slot = (*slot + self.p - sub) % self.p;
            }
        }
        while v.len() < self.n {
            v.push(0);
        }
    }

    /// Multiplicative inverse. Panics on zero input in debug builds; callers
    /// guard zero explicitly (division by zero is always a caller bug here).
    pub fn inv(&self, a: &FieldElem) -> FieldElem {
        debug_assert!(!self.is_zero(a), "inverse of zero");
        if self.n == 1 {
            return FieldElem {
                c: vec![invmod(a.c[0], self.p)],
            };
        }
        // Extended Euclid in F_p[x] against the modulus.
        let (mut r0, mut r1) = (self.modulus.clone(), {
            let mut v = a.c.clone();
            fp_trim(&mut v);
            v
        });
        let (mut s0, mut s1) = (vec![0u64], vec![1u64]);
        while !(r1.len() == 1 && r1[0] != 0) {
            debug_assert!(!r1.is_empty() && r1.iter().any(|&x| x != 0));
            let (quot, rem) = fp_divmod(&r0, &r1, self.p);
            let s2 = fp_sub(&s0, &fp_mul(&quot, &s1, self.p), self.p);
            r0 = r1;
            r1 = rem;
            s0 = s1;
            s1 = s2;
        }
        // r1 is a nonzero constant; divide it out.
        let scale = invmod(r1[0], self.p);
        let mut v: Vec<u64> = s1.iter().map(|&x| mulmod(x, scale, self.p)).collect();
        self.reduce_in_place(&mut v);
        v.truncate(self.n);
        FieldElem { c: v }
    }

    pub fn div(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.mul(a, &self.inv(b))
    }

    pub fn pow(&self, a: &FieldElem, mut e: u64) -> FieldElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Frobenius x ↦ x^p.
    pub fn frobenius(&self, a: &FieldElem) -> FieldElem {
        self.pow(a, self.p)
    }

    /// All q elements in code order; small-q helper for enumerations.
    pub fn all_elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.q).map(|code| self.from_code(code))
    }
}

impl FieldElem {
    /// Coordinates with respect to the power basis, constant term first.
    pub fn coords(&self) -> &[u64] {
        &self.c
    }
}

/// Base-p digits of m, least significant first; digits of 0 are the empty
/// sequence (this convention makes t_1 = 1 downstream).
pub fn base_p_digits(m: u64, p: u64) -> Vec<u64> {
    assert!(p >= 2, "base must be >= 2");
    let mut out = Vec::new();
    let mut m = m;
    while m > 0 {
        out.push(m % p);
        m /= p;
    }
    out
}

/// C(n, k) mod p by Lucas' theorem: the product of digit-wise binomials.
/// Zero whenever some digit of k exceeds the matching digit of n.
pub fn lucas_binom(n: u64, k: u64, p: u64) -> u64 {
    if k > n {
        return 0;
    }
    let (mut n, mut k) = (n, k);
    let mut acc = 1u64;
    while k > 0 || n > 0 {
        let (nd, kd) = (n % p, k % p);
        if kd > nd {
            return 0;
        }
        acc = mulmod(acc, small_binom_mod_p(nd, kd, p), p);
        n /= p;
        k /= p;
    }
    acc
}

/// True iff adding x and y in base p produces a carry. Equivalent to
/// lucas_binom(x+y, x, p) == 0, which the tests enforce.
///
/// The lowest carry, if any, arises at a digit where the plain digit sum
/// already reaches p (there is no carry-in below it), so propagated carries
/// never need simulating.
pub fn has_carry(x: u64, y: u64, p: u64) -> bool {
    let (mut x, mut y) = (x, y);
    while x > 0 && y > 0 {
        if x % p + y % p >= p {
            return true;
        }
        x /= p;
        y /= p;
    }
    false
}

/// C(n, k) mod p for 0 ≤ k ≤ n < p, by the multiplicative formula.
fn small_binom_mod_p(n: u64, k: u64, p: u64) -> u64 {
    debug_assert!(n < p && k <= n);
    let k = k.min(n - k);
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 1..=k {
        num = mulmod(num, (n - k + i) % p, p);
        den = mulmod(den, i % p, p);
    }
    mulmod(num, invmod(den, p), p)
}

pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn invmod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0, "inverse of zero mod p");
    powmod(a % p, p - 2, p)
}

pub(crate) fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
        if acc > (1 << 63) {
            return None;
        }
    }
    Some(acc)
}

/// Deterministic Miller–Rabin, valid for all u64.
pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    for small in [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if p == small {
            return true;
        }
        if p % small == 0 {
            return false;
        }
    }
    let mut d = p - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, p);
        if x == 1 || x == p - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, p);
            if x == p - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// ---- F_p[x] helpers for modulus construction (dense, ascending, trimmed) ----

fn fp_trim(v: &mut Vec<u64>) {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
}

fn fp_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if (a.len() == 1 && a[0] == 0) || (b.len() == 1 && b[0] == 0) {
        return vec![0];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
        }
    }
    fp_trim(&mut out);
    out
}

fn fp_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, slot) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *slot = (x + p - y) % p;
    }
    fp_trim(&mut out);
    out
}

fn fp_divmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut rem = a.to_vec();
    fp_trim(&mut rem);
    let mut div = b.to_vec();
    fp_trim(&mut div);
    debug_assert!(div.iter().any(|&x| x != 0));
    let db = div.len() - 1;
    if (rem.len() == 1 && rem[0] == 0) || rem.len() - 1 < db {
        return (vec![0], rem);
    }
    let lead_inv = invmod(div[db], p);
    let mut quot = vec![0u64; rem.len() - db];
    // Walk the leading position down to db, canceling each one; positions
    // below db are the remainder.
    let mut dr = rem.len() - 1;
    loop {
        let coef = mulmod(rem[dr], lead_inv, p);
        if coef != 0 {
            quot[dr - db] = coef;
            for (i, &bi) in div.iter().enumerate() {
                let slot = &mut rem[dr - db + i];
                *slot = (*slot + p - mulmod(coef, bi, p)) % p;
            }
        }
        if dr == db {
            break;
        }
        dr -= 1;
    }
    rem.truncate(db.max(1));
    fp_trim(&mut rem);
    fp_trim(&mut quot);
    (quot, rem)
}

fn fp_powmod(base: &[u64], mut e: u64, modulus: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = fp_divmod(base, modulus, p).1;
    while e > 0 {
        if e & 1 == 1 {
            acc = fp_divmod(&fp_mul(&acc, &b, p), modulus, p).1;
        }
        b = fp_divmod(&fp_mul(&b, &b, p), modulus, p).1;
        e >>= 1;
    }
    acc
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    fp_trim(&mut r0);
    fp_trim(&mut r1);
    while !(r1.len() == 1 && r1[0] == 0) {
        let rem = fp_divmod(&r0, &r1, p).1;
        r0 = r1;
        r1 = rem;
    }
    r0
}

/// Rabin irreducibility: f (monic, degree n) is irreducible over F_p iff
/// x^{p^n} ≡ x (mod f) and gcd(x^{p^{n/ℓ}} − x, f) = 1 for every prime ℓ | n.
fn fp_is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    // x^{p^k} mod f by repeated p-th powers.
    let frob = |k: usize| -> Vec<u64> {
        let mut acc = x.clone();
        for _ in 0..k {
            acc = fp_powmod(&acc, p, f, p);
        }
        acc
    };
    let mut m = n;
    let mut prime_divisors = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            prime_divisors.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        prime_divisors.push(m);
    }
    for ell in prime_divisors {
        let g = fp_sub(&frob(n / ell), &x, p);
        let gcd = fp_gcd(f, &g, p);
        if gcd.len() > 1 {
            return false;
        }
    }
    let top = fp_sub(&frob(n), &x, p);
    top.len() == 1 && top[0] == 0
}

/// First monic irreducible of degree n over F_p in ascending lower-coefficient
/// code order (constant term least significant).
fn canonical_modulus(p: u64, n: usize) -> Vec<u64> {
    if n == 1 {
        return vec![0, 1];
    }
    let total = checked_pow(p, n as u32).expect("q fits by construction");
    for code in 0..total {
        let mut f = vec![0u64; n + 1];
        let mut rest = code;
        for slot in f[..n].iter_mut() {
            *slot = rest % p;
            rest /= p;
        }
        f[n] = 1;
        if fp_is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("an irreducible of every degree exists over F_p")
}

fn fp_poly_string(f: &[u64]) -> String {
    let mut parts = Vec::new();
    for (i, &c) in f.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let var = match i {
            0 => String::new(),
            1 => "x".into(),
            _ => format!("x^{i}"),
        };
        let part = match (c, i) {
            (c, 0) => format!("{c}"),
            (1, _) => var,
            (c, _) => format!("{c}*{var}"),
        };
        parts.push(part);
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}
