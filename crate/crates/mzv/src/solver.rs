//! Shuffle-relation discovery: given (a, b), find coefficients c_j in F_p
//! and indices a_j with Δ_d(a, b) = Σ_j c_j·S_d(a_j, w − a_j) for every
//! degree d, where w = a + b.
//!
//! The finder works at d = 1, where multiplying the relation by ℓ_1^w turns
//! every side into a polynomial in t: ℓ_1^k·S_1(k) equals the chain value
//! τ_{k−1} with τ_0 = 1, τ_m = τ_{m−1} − [1]^{q−1}·τ_{m−q}. Matching
//! t-coefficients gives an F_q-linear system in the c_j; each equation
//! splits into n F_p-equations through power-basis coordinates (the c_j lie
//! in the prime field, which acts coordinatewise), solved by exact
//! elimination with deterministic pivoting.
//!
//! A d = 1 match alone proves nothing about other degrees. The solved set
//! is therefore certified as a bivariate identity H_a·H_b − H_w =
//! Σ_j c_j·H_{a_j}·G_{w−a_j} by the grid certificate in [`crate::prover`];
//! evaluating that identity at T = t^{q^d} recovers the relation at every d
//! at once. Candidates are first restricted to w − a_j ≡ 0 mod (q − 1),
//! since G_{w−a_j} exists only on that lattice; when the restricted system
//! is inconsistent the full index range is retried and any result carries
//! the weaker "numeric" certification, with the evenness violation left
//! visible in the pairs.
//!
//! Results are memoized per context and, when a disk cache is attached,
//! persisted as canonical JSON; loaded entries are re-proved at d = 1
//! before use.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::cache::{self, DiskCache};
use crate::error::{MzvError, Result};
use crate::ffield::{FieldCtx, FieldElem};
use crate::hg::HgSession;
use crate::linalg::{gauss, LinSolve};
use crate::polyrat::Poly;

/// Weight cap for solve requests; beyond it the linear system and the
/// certificate grid grow past desk scale.
pub const MAX_WEIGHT: u64 = 10_000;

/// One term c·S_d(a_j, w − a_j) of a shuffle expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ShufflePair {
    /// Coefficient as a residue in [1, p).
    pub c: u64,
    /// First index a_j; the second index is always w − a_j.
    pub aj: u64,
}

/// How a solved set was certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Certified {
    /// Proved as a bivariate polynomial identity, hence for every d.
    Bivariate,
    /// Checked numerically at finitely many d only.
    Numeric,
}

/// A solved expansion of Δ_d(a, b); pairs sorted ascending by a_j,
/// coefficients nonzero, a_j distinct in [1, w−1].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShuffleSet {
    pub q: u64,
    pub p: u64,
    pub n: usize,
    pub a: u64,
    pub b: u64,
    pub weight: u64,
    pub pairs: Vec<ShufflePair>,
    pub certified: Certified,
}

/// One predicted increment entry: coefficient, φ-value, generating index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TaEntry {
    /// Coefficient as a residue in [1, p).
    pub c: u64,
    /// phi_value = r_a − a − j(q − 1).
    pub phi_value: u64,
    pub j: u64,
}

/// The b-independent increment set T_a, entries sorted by j. Its size is
/// compared against the predicted count t_a, never assumed equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaSet {
    pub a: u64,
    pub entries: Vec<TaEntry>,
    /// Set when the entry count disagrees with the predicted t_a.
    pub size_warning: Option<String>,
}

/// Solve strategy: the bivariate identity is the route of record; the
/// per-degree mode solves at d = 2 and confirms at other d, as an
/// independent cross-check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMode {
    Bivariate,
    PerD,
}

/// Solve knobs; `..Default::default()` gives the documented behavior.
#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    /// Numeric confirmations run at d = 1..=d_checks on every result.
    pub d_checks: u32,
    /// Keep only candidates with w − a_j ≡ 0 mod (q − 1); no fallback.
    pub restrict_even: bool,
    pub mode: SolveMode,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            d_checks: 3,
            restrict_even: false,
            mode: SolveMode::Bivariate,
        }
    }
}

/// Shuffle-relation solver over one field context, with memoized results.
pub struct ShuffleSolver {
    hg: HgSession,
    disk: Option<DiskCache>,
    memo: Mutex<BTreeMap<(u64, u64, bool, bool), ShuffleSet>>,
}

impl ShuffleSolver {
    pub fn new(ctx: &FieldCtx) -> ShuffleSolver {
        ShuffleSolver::with_cache(ctx, None)
    }

    /// Solver whose H/G session and solved sets persist in `disk`.
    pub fn with_cache(ctx: &FieldCtx, disk: Option<DiskCache>) -> ShuffleSolver {
        ShuffleSolver {
            hg: HgSession::with_cache(ctx, disk.clone()),
            disk,
            memo: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn ctx(&self) -> &FieldCtx {
        self.hg.ctx()
    }

    /// The underlying H/G session (shared caches included).
    pub fn hg(&self) -> &HgSession {
        &self.hg
    }

    /// Finds S(a, b) and certifies it; see the module doc for the route.
    pub fn solve(&self, a: u64, b: u64, opts: &SolveOptions) -> Result<ShuffleSet> {
        if a == 0 || b == 0 {
            return Err(MzvError::InvalidIndex {
                detail: format!("solve needs a, b >= 1, got ({a}, {b})"),
            });
        }
        let w = a + b;
        if w > MAX_WEIGHT {
            return Err(MzvError::TooLarge {
                detail: format!("weight {w} exceeds the solver cap {MAX_WEIGHT}"),
            });
        }
        let per_d = matches!(opts.mode, SolveMode::PerD);
        let key = (a, b, opts.restrict_even, per_d);
        if let Some(s) = self.memo.lock().unwrap().get(&key) {
            return Ok(s.clone());
        }
        // Disk entries describe the default solve shape only.
        let default_shape = !opts.restrict_even && !per_d;
        if default_shape {
            if let Some(s) = self.disk_load(a, b) {
                self.memo.lock().unwrap().insert(key, s.clone());
                return Ok(s);
            }
        }
        let set = if per_d {
            self.solve_per_d(a, b, w, opts)?
        } else {
            self.solve_bivariate(a, b, w, opts)?
        };
        if default_shape && set.certified == Certified::Bivariate {
            self.disk_store(&set);
        }
        self.memo.lock().unwrap().insert(key, set.clone());
        Ok(set)
    }

    /// Checks Δ_d(a, b) = Σ c_j·S_d(a_j, w − a_j) exactly at one degree.
    pub fn verify_at_d(&self, set: &ShuffleSet, d: u32) -> Result<bool> {
        crate::prover::verify_numeric(&self.hg, set, d)
    }

    /// Empirical increment T(a, b) = S(a, b) \ S(a, b − r_a); needs b > r_a.
    pub fn extract_t(&self, a: u64, b: u64) -> Result<Vec<ShufflePair>> {
        let sp = crate::recipes::struct_params(self.ctx(), a)?;
        if b <= sp.r_a {
            return Err(MzvError::InvalidIndex {
                detail: format!(
                    "extract_t needs b > r_a = {}, got b = {b}",
                    sp.r_a
                ),
            });
        }
        let opts = SolveOptions::default();
        let whole = self.solve(a, b, &opts)?;
        let prev = self.solve(a, b - sp.r_a, &opts)?;
        let seen: BTreeSet<ShufflePair> = prev.pairs.iter().copied().collect();
        Ok(whole
            .pairs
            .iter()
            .filter(|p| !seen.contains(p))
            .copied()
            .collect())
    }

    fn solve_bivariate(&self, a: u64, b: u64, w: u64, opts: &SolveOptions) -> Result<ShuffleSet> {
        let even_basis = self.candidates(w, true);
        let detail;
        match self.solve_d1(a, b, w, &even_basis)? {
            LinSolve::Unique(sol) => {
                let pairs = pairs_from(&even_basis, &sol);
                match crate::prover::grid_certify(&self.hg, a, b, &pairs)? {
                    Some(true) => {
                        return self.certified_set(a, b, w, pairs, Certified::Bivariate, opts.d_checks)
                    }
                    Some(false) => {
                        detail = "the unique d = 1 even-basis expansion is refuted by the \
                                  bivariate certificate"
                            .to_string();
                    }
                    None => {
                        // Certificate out of reach: fall back to numeric
                        // evidence at d = 1..max(2, d_checks).
                        let set = self.finish(a, b, w, pairs, Certified::Numeric);
                        match self.numeric_check(&set, opts.d_checks.max(2))? {
                            None => return Ok(set),
                            Some(d) => {
                                detail = format!(
                                    "the unique d = 1 even-basis expansion fails numerically \
                                     at d = {d}"
                                );
                            }
                        }
                    }
                }
            }
            LinSolve::Affine { particular, kernel } => {
                return Err(self.non_unique(a, b, &even_basis, &particular, &kernel))
            }
            LinSolve::Inconsistent => {
                detail =
                    "no F_p-combination over the even candidate basis matches at d = 1".to_string();
            }
        }
        // The even-lattice route failed. Retry over every index unless the
        // caller pinned the basis or the two bases coincide (q = 2).
        if opts.restrict_even || self.ctx().q() == 2 {
            return Err(MzvError::NoSolution { a, b, detail });
        }
        let full_basis = self.candidates(w, false);
        match self.solve_d1(a, b, w, &full_basis)? {
            LinSolve::Unique(sol) => {
                let pairs = pairs_from(&full_basis, &sol);
                // Off-lattice second indices admit no G polynomial, so only
                // numeric certification is possible on this route.
                let set = self.finish(a, b, w, pairs, Certified::Numeric);
                match self.numeric_check(&set, opts.d_checks.max(2))? {
                    None => Ok(set),
                    Some(d) => Err(MzvError::NoSolution {
                        a,
                        b,
                        detail: format!(
                            "{detail}; the full-basis d = 1 expansion fails numerically at d = {d}"
                        ),
                    }),
                }
            }
            LinSolve::Affine { particular, kernel } => {
                Err(self.non_unique(a, b, &full_basis, &particular, &kernel))
            }
            LinSolve::Inconsistent => Err(MzvError::NoSolution {
                a,
                b,
                detail: format!("{detail}; the full basis is also inconsistent at d = 1"),
            }),
        }
    }

    /// Cross-check mode: solve the linear system at d = 2 (cleared by
    /// ℓ_2^w), then confirm numerically at d = 1, 3, 4.
    fn solve_per_d(&self, a: u64, b: u64, w: u64, opts: &SolveOptions) -> Result<ShuffleSet> {
        let ctx = self.ctx();
        let ps = self.hg.powersums();
        let basis = self.candidates(w, opts.restrict_even);
        let clear = ps.ell(2)?.pow(ctx, w);
        let to_poly = |label: &str, r: &crate::polyrat::RatFunc| -> Result<Poly> {
            let cleared = r.mul(ctx, &crate::polyrat::RatFunc::from_poly(ctx, clear.clone()));
            if !cleared.is_poly(ctx) {
                return Err(MzvError::VerificationFailed {
                    detail: format!("l_2^{w} does not clear {label}; denominators out of spec"),
                });
            }
            Ok(cleared.num().clone())
        };
        let mut cols = Vec::with_capacity(basis.len());
        for &aj in &basis {
            let term = ps.power_sum_double(2, aj, w - aj)?;
            cols.push(to_poly(&format!("S_2({aj}, {})", w - aj), &term)?);
        }
        let rhs = to_poly("delta(2)", &ps.delta(2, a, b)?)?;
        match self.eliminate(&cols, &rhs)? {
            LinSolve::Unique(sol) => {
                let pairs = pairs_from(&basis, &sol);
                let set = self.finish(a, b, w, pairs, Certified::Numeric);
                match self.numeric_check(&set, opts.d_checks.max(4))? {
                    None => Ok(set),
                    Some(d) => Err(MzvError::NoSolution {
                        a,
                        b,
                        detail: format!("the d = 2 expansion fails numerically at d = {d}"),
                    }),
                }
            }
            LinSolve::Affine { particular, kernel } => {
                Err(self.non_unique(a, b, &basis, &particular, &kernel))
            }
            LinSolve::Inconsistent => Err(MzvError::NoSolution {
                a,
                b,
                detail: "no F_p-combination matches at d = 2".to_string(),
            }),
        }
    }

    /// Candidate first indices a_j, ascending; the even restriction keeps
    /// those with (q − 1) | w − a_j.
    fn candidates(&self, w: u64, even_only: bool) -> Vec<u64> {
        let q = self.ctx().q();
        (1..w)
            .filter(|aj| !even_only || (w - aj) % (q - 1) == 0)
            .collect()
    }

    /// Builds and solves the d = 1 system over the given candidate basis.
    fn solve_d1(&self, a: u64, b: u64, w: u64, basis: &[u64]) -> Result<LinSolve<u64>> {
        let ctx = self.ctx();
        let ps = self.hg.powersums();
        let q = ctx.q();
        // τ_m = ℓ_1^{m+1}·S_1(m+1): τ_0 = 1, τ_m = τ_{m−1} − [1]^{q−1}·τ_{m−q}.
        let step = ps.bracket(1)?.pow(ctx, q - 1);
        let mut tau: Vec<Poly> = Vec::with_capacity(w as usize);
        tau.push(Poly::one(ctx));
        for m in 1..w as usize {
            let mut next = tau[m - 1].clone();
            if m as u64 >= q {
                next = next.sub(ctx, &tau[m - q as usize].mul(ctx, &step));
            }
            tau.push(next);
        }
        let ell1 = ps.ell(1)?;
        let mut ellpow: Vec<Poly> = Vec::with_capacity(w as usize);
        ellpow.push(Poly::one(ctx));
        for k in 1..w as usize {
            ellpow.push(ellpow[k - 1].mul(ctx, &ell1));
        }
        let cols: Vec<Poly> = basis
            .iter()
            .map(|&aj| ellpow[(w - aj) as usize].mul(ctx, &tau[(aj - 1) as usize]))
            .collect();
        let rhs = tau[(a - 1) as usize]
            .mul(ctx, &tau[(b - 1) as usize])
            .sub(ctx, &tau[(w - 1) as usize]);
        self.eliminate(&cols, &rhs)
    }

    /// Matches t-coefficients of Σ c_j·cols[j] = rhs, splits each F_q
    /// equation into p-adic coordinates, and eliminates over F_p.
    fn eliminate(&self, cols: &[Poly], rhs: &Poly) -> Result<LinSolve<u64>> {
        let ctx = self.ctx();
        let n = ctx.n();
        let pctx = FieldCtx::new(ctx.p(), 1)?;
        let maxdeg = cols
            .iter()
            .chain(std::iter::once(rhs))
            .filter_map(|p| p.degree())
            .max()
            .unwrap_or(0);
        let mut rows: Vec<Vec<FieldElem>> = Vec::new();
        let mut rv: Vec<FieldElem> = Vec::new();
        for e in 0..=maxdeg {
            let col_coeffs: Vec<FieldElem> = cols.iter().map(|c| c.coeff(ctx, e)).collect();
            let r = rhs.coeff(ctx, e);
            for i in 0..n {
                let row: Vec<FieldElem> = col_coeffs
                    .iter()
                    .map(|fe| pctx.embed_prime(fe.coords()[i]))
                    .collect();
                let rval = pctx.embed_prime(r.coords()[i]);
                if pctx.is_zero(&rval) && row.iter().all(|x| pctx.is_zero(x)) {
                    continue;
                }
                rows.push(row);
                rv.push(rval);
            }
        }
        Ok(match gauss(&pctx, rows, rv) {
            LinSolve::Unique(v) => LinSolve::Unique(v.iter().map(|x| pctx.to_code(x)).collect()),
            LinSolve::Affine { particular, kernel } => LinSolve::Affine {
                particular: particular.iter().map(|x| pctx.to_code(x)).collect(),
                kernel: kernel
                    .iter()
                    .map(|k| k.iter().map(|x| pctx.to_code(x)).collect())
                    .collect(),
            },
            LinSolve::Inconsistent => LinSolve::Inconsistent,
        })
    }

    /// Runs the numeric checks and returns the certified set; a failure
    /// after a bivariate certificate is an internal contradiction.
    fn certified_set(
        &self,
        a: u64,
        b: u64,
        w: u64,
        pairs: Vec<ShufflePair>,
        certified: Certified,
        d_checks: u32,
    ) -> Result<ShuffleSet> {
        let set = self.finish(a, b, w, pairs, certified);
        if let Some(d) = self.numeric_check(&set, d_checks)? {
            return Err(MzvError::VerificationFailed {
                detail: format!(
                    "certified set for (a, b) = ({a}, {b}) fails the numeric check at d = {d}"
                ),
            });
        }
        Ok(set)
    }

    /// First d in 1..=dmax where the numeric check fails, if any.
    fn numeric_check(&self, set: &ShuffleSet, dmax: u32) -> Result<Option<u32>> {
        for d in 1..=dmax {
            if !self.verify_at_d(set, d)? {
                return Ok(Some(d));
            }
        }
        Ok(None)
    }

    fn finish(
        &self,
        a: u64,
        b: u64,
        w: u64,
        pairs: Vec<ShufflePair>,
        certified: Certified,
    ) -> ShuffleSet {
        let ctx = self.ctx();
        ShuffleSet {
            q: ctx.q(),
            p: ctx.p(),
            n: ctx.n(),
            a,
            b,
            weight: w,
            pairs,
            certified,
        }
    }

    /// Formats every solution of an underdetermined system into the error;
    /// nothing is chosen on the caller's behalf.
    fn non_unique(
        &self,
        a: u64,
        b: u64,
        basis: &[u64],
        particular: &[u64],
        kernel: &[Vec<u64>],
    ) -> MzvError {
        let p = self.ctx().p();
        let fmt = |v: &[u64]| -> String {
            let pairs = pairs_from(basis, v);
            let body: Vec<String> = pairs.iter().map(|pr| format!("({},{})", pr.c, pr.aj)).collect();
            format!("{{{}}}", body.join(", "))
        };
        let mut solutions = vec![fmt(particular)];
        for k in kernel {
            let shifted: Vec<u64> = particular
                .iter()
                .zip(k)
                .map(|(&x, &y)| (x + y) % p)
                .collect();
            solutions.push(fmt(&shifted));
        }
        MzvError::NonUniqueSolution {
            a,
            b,
            kernel: kernel.iter().map(|k| fmt(k)).collect::<Vec<_>>().join(" ; "),
            solutions,
        }
    }

    fn disk_load(&self, a: u64, b: u64) -> Option<ShuffleSet> {
        let disk = self.disk.as_ref()?;
        let payload = disk.load(&cache::shuffle_key(self.ctx(), a, b))?;
        let set: ShuffleSet = serde_json::from_str(&payload).ok()?;
        let ctx = self.ctx();
        if set.q != ctx.q()
            || set.p != ctx.p()
            || set.n != ctx.n()
            || set.a != a
            || set.b != b
            || set.weight != a + b
        {
            return None;
        }
        // Loaded pairs are re-proved at d = 1 before being trusted.
        match self.verify_at_d(&set, 1) {
            Ok(true) => Some(set),
            _ => None,
        }
    }

    fn disk_store(&self, set: &ShuffleSet) {
        if let Some(disk) = self.disk.as_ref() {
            if let Ok(payload) = serde_json::to_string(set) {
                let _ = disk.store(&cache::shuffle_key(self.ctx(), set.a, set.b), &payload);
            }
        }
    }
}

/// Zips a candidate basis with solved coefficients, dropping zeros;
/// ascending basis order keeps the result sorted by a_j.
fn pairs_from(basis: &[u64], sol: &[u64]) -> Vec<ShufflePair> {
    basis
        .iter()
        .zip(sol)
        .filter(|(_, &c)| c != 0)
        .map(|(&aj, &c)| ShufflePair { c, aj })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::FieldCtx;

    fn pairs(raw: &[(u64, u64)]) -> Vec<ShufflePair> {
        raw.iter().map(|&(c, aj)| ShufflePair { c, aj }).collect()
    }

    #[test]
    fn frozen_example_weight_32_over_f5() {
        let ctx = FieldCtx::new(5, 1).unwrap();
        let solver = ShuffleSolver::new(&ctx);
        let set = solver.solve(2, 30, &SolveOptions::default()).unwrap();
        assert_eq!(
            set.pairs,
            pairs(&[(3, 4), (2, 8), (1, 12), (4, 20), (3, 24), (2, 28)])
        );
        assert_eq!(set.certified, Certified::Bivariate);
        assert_eq!(set.weight, 32);

        let small = solver.solve(2, 10, &SolveOptions::default()).unwrap();
        assert_eq!(small.pairs, pairs(&[(3, 4), (2, 8)]));
        assert_eq!(small.certified, Certified::Bivariate);
    }

    #[test]
    fn json_shape_is_canonical() {
        let ctx = FieldCtx::new(5, 1).unwrap();
        let solver = ShuffleSolver::new(&ctx);
        let set = solver.solve(2, 10, &SolveOptions::default()).unwrap();
        let js = serde_json::to_string(&set).unwrap();
        assert_eq!(
            js,
            "{\"q\":5,\"p\":5,\"n\":1,\"a\":2,\"b\":10,\"weight\":12,\
             \"pairs\":[{\"c\":3,\"aj\":4},{\"c\":2,\"aj\":8}],\"certified\":\"bivariate\"}"
        );
        let back: ShuffleSet = serde_json::from_str(&js).unwrap();
        assert_eq!(back, set);
    }

    #[test]
    fn empty_relation_when_delta_vanishes() {
        // q = 2: Δ(2, 2) = 0, so the expansion is the empty combination.
        let ctx = FieldCtx::new(2, 1).unwrap();
        let solver = ShuffleSolver::new(&ctx);
        let set = solver.solve(2, 2, &SolveOptions::default()).unwrap();
        assert!(set.pairs.is_empty());
        assert_eq!(set.certified, Certified::Bivariate);
    }

    #[test]
    fn solving_is_symmetric_in_a_and_b() {
        let ctx = FieldCtx::new(3, 1).unwrap();
        let solver = ShuffleSolver::new(&ctx);
        let opts = SolveOptions::default();
        for (a, b) in [(2, 7), (3, 8), (4, 5)] {
            let ab = solver.solve(a, b, &opts).unwrap();
            let ba = solver.solve(b, a, &opts).unwrap();
            assert_eq!(ab.pairs, ba.pairs, "asymmetry at ({a}, {b})");
        }
    }

    #[test]
    fn frobenius_scaling_multiplies_every_index_by_p() {
        let ctx = FieldCtx::new(5, 1).unwrap();
        let solver = ShuffleSolver::new(&ctx);
        let opts = SolveOptions::default();
        let base = solver.solve(2, 30, &opts).unwrap();
        let scaled = solver.solve(10, 150, &opts).unwrap();
        let expect: Vec<ShufflePair> = base
            .pairs
            .iter()
            .map(|pr| ShufflePair { c: pr.c, aj: 5 * pr.aj })
            .collect();
        assert_eq!(scaled.pairs, expect);
    }

    #[test]
    fn evenness_holds_without_the_restriction() {
        for (p, n) in [(3u64, 1usize), (2, 2)] {
            let ctx = FieldCtx::new(p, n).unwrap();
            let q = ctx.q();
            let solver = ShuffleSolver::new(&ctx);
            for (a, b) in [(2u64, 5u64), (2, 9), (3, 7), (4, 6)] {
                let set = solver.solve(a, b, &SolveOptions::default()).unwrap();
                for pr in &set.pairs {
                    assert_eq!(
                        (set.weight - pr.aj) % (q - 1),
                        0,
                        "odd second index in S({a}, {b}) over q = {q}"
                    );
                }
            }
        }
    }

    #[test]
    fn verify_holds_at_higher_d_and_detects_tampering() {
        let ctx = FieldCtx::new(5, 1).unwrap();
        let solver = ShuffleSolver::new(&ctx);
        let set = solver.solve(2, 30, &SolveOptions::default()).unwrap();
        for d in 1..=4 {
            assert!(solver.verify_at_d(&set, d).unwrap(), "failed at d = {d}");
        }
        let mut bad = set.clone();
        bad.pairs[0].c = (bad.pairs[0].c % 4) + 1;
        assert_ne!(bad.pairs[0].c, set.pairs[0].c);
        assert!(!solver.verify_at_d(&bad, 1).unwrap());
    }

    #[test]
    fn per_d_mode_agrees_with_the_bivariate_route() {
        let ctx = FieldCtx::new(3, 1).unwrap();
        let solver = ShuffleSolver::new(&ctx);
        let bi = solver.solve(2, 7, &SolveOptions::default()).unwrap();
        let pd = solver
            .solve(
                2,
                7,
                &SolveOptions {
                    mode: SolveMode::PerD,
                    ..SolveOptions::default()
                },
            )
            .unwrap();
        assert_eq!(bi.pairs, pd.pairs);
        assert_eq!(pd.certified, Certified::Numeric);
    }

    #[test]
    fn model_independence_for_q9() {
        // Two models of F_9 over different irreducible quadratics must
        // produce identical pair sets.
        let ctx1 = FieldCtx::with_modulus(3, 2, vec![1, 0, 1]).unwrap();
        let ctx2 = FieldCtx::with_modulus(3, 2, vec![2, 1, 1]).unwrap();
        let s1 = ShuffleSolver::new(&ctx1);
        let s2 = ShuffleSolver::new(&ctx2);
        let opts = SolveOptions::default();
        for (a, b) in [(2u64, 7u64), (3, 6)] {
            let r1 = s1.solve(a, b, &opts).unwrap();
            let r2 = s2.solve(a, b, &opts).unwrap();
            assert_eq!(r1.pairs, r2.pairs, "model dependence at ({a}, {b})");
        }
    }

    #[test]
    fn extracted_increment_matches_the_frozen_example() {
        let ctx = FieldCtx::new(5, 1).unwrap();
        let solver = ShuffleSolver::new(&ctx);
        // r_2 = 20 over q = 5, so T(2, 30) = S(2, 30) \ S(2, 10).
        let t = solver.extract_t(2, 30).unwrap();
        assert_eq!(t, pairs(&[(1, 12), (4, 20), (3, 24), (2, 28)]));

        let err = solver.extract_t(2, 20).unwrap_err();
        assert!(matches!(err, MzvError::InvalidIndex { .. }));
    }

    #[test]
    fn disk_round_trip_reuses_solved_sets() {
        let dir = std::env::temp_dir().join(format!(
            "mzv-solver-test-{}-{}",
            std::process::id(),
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .unwrap()
                .as_nanos()
        ));
        let ctx = FieldCtx::new(5, 1).unwrap();
        let opts = SolveOptions::default();
        let first = {
            let disk = DiskCache::new(&dir).unwrap();
            let solver = ShuffleSolver::with_cache(&ctx, Some(disk));
            solver.solve(2, 10, &opts).unwrap()
        };
        let disk = DiskCache::new(&dir).unwrap();
        assert!(disk
            .keys()
            .unwrap()
            .contains(&cache::shuffle_key(&ctx, 2, 10)));
        let solver = ShuffleSolver::with_cache(&ctx, Some(disk));
        let second = solver.solve(2, 10, &opts).unwrap();
        assert_eq!(first, second);
        std::fs::remove_dir_all(&dir).ok();
    }
}
