//! Exact Gaussian elimination for the small linear systems in this crate:
//! the functional-equation solve over F_q(t) and the per-degree fallback
//! solver over F_q. Deterministic pivoting (first nonzero), full
//! reduced-row-echelon form, kernel basis extraction.

use crate::ffield::{FieldCtx, FieldElem};
use crate::polyrat::RatFunc;

pub(crate) enum LinSolve<T> {
    Unique(Vec<T>),
    /// Particular solution (free variables at zero) plus a kernel basis.
    Affine {
        particular: Vec<T>,
        kernel: Vec<Vec<T>>,
    },
    Inconsistent,
}

/// Scalar operations the elimination needs; implemented for field elements
/// and for rational functions.
pub(crate) trait Scalar: Clone {
    fn zero(ctx: &FieldCtx) -> Self;
    fn one(ctx: &FieldCtx) -> Self;
    fn is_zero(&self, ctx: &FieldCtx) -> bool;
    fn sub_mul(&self, ctx: &FieldCtx, factor: &Self, other: &Self) -> Self;
    fn mul(&self, ctx: &FieldCtx, other: &Self) -> Self;
    fn inv(&self, ctx: &FieldCtx) -> Self;
    fn neg(&self, ctx: &FieldCtx) -> Self;
}

impl Scalar for FieldElem {
    fn zero(ctx: &FieldCtx) -> Self {
        ctx.zero()
    }
    fn one(ctx: &FieldCtx) -> Self {
        ctx.one()
    }
    fn is_zero(&self, ctx: &FieldCtx) -> bool {
        ctx.is_zero(self)
    }
    fn sub_mul(&self, ctx: &FieldCtx, factor: &Self, other: &Self) -> Self {
        ctx.sub(self, &ctx.mul(factor, other))
    }
    fn mul(&self, ctx: &FieldCtx, other: &Self) -> Self {
        ctx.mul(self, other)
    }
    fn inv(&self, ctx: &FieldCtx) -> Self {
        ctx.inv(self)
    }
    fn neg(&self, ctx: &FieldCtx) -> Self {
        ctx.neg(self)
    }
}

impl Scalar for RatFunc {
    fn zero(ctx: &FieldCtx) -> Self {
        RatFunc::zero(ctx)
    }
    fn one(ctx: &FieldCtx) -> Self {
        RatFunc::one(ctx)
    }
    fn is_zero(&self, _ctx: &FieldCtx) -> bool {
        RatFunc::is_zero(self)
    }
    fn sub_mul(&self, ctx: &FieldCtx, factor: &Self, other: &Self) -> Self {
        self.sub(ctx, &factor.mul(ctx, other))
    }
    fn mul(&self, ctx: &FieldCtx, other: &Self) -> Self {
        RatFunc::mul(self, ctx, other)
    }
    fn inv(&self, ctx: &FieldCtx) -> Self {
        RatFunc::inv(self, ctx).expect("pivot is nonzero")
    }
    fn neg(&self, ctx: &FieldCtx) -> Self {
        RatFunc::neg(self, ctx)
    }
}

/// Solve A x = b exactly. `rows` are the rows of A; `rhs` the right-hand
/// sides. Rows may outnumber columns (overdetermined systems are fine).
pub(crate) fn gauss<T: Scalar>(
    ctx: &FieldCtx,
    mut rows: Vec<Vec<T>>,
    mut rhs: Vec<T>,
) -> LinSolve<T> {
    assert_eq!(rows.len(), rhs.len());
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(pr) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero(ctx)) else {
            continue;
        };
        rows.swap(rank, pr);
        rhs.swap(rank, pr);
        let inv = rows[rank][col].inv(ctx);
        for c in col..ncols {
            rows[rank][c] = rows[rank][c].mul(ctx, &inv);
        }
        rhs[rank] = rhs[rank].mul(ctx, &inv);
        for r in 0..rows.len() {
            if r == rank || rows[r][col].is_zero(ctx) {
                continue;
            }
            let factor = rows[r][col].clone();
            for c in col..ncols {
                rows[r][c] = rows[r][c].sub_mul(ctx, &factor, &rows[rank][c]);
            }
            rhs[r] = rhs[r].sub_mul(ctx, &factor, &rhs[rank]);
        }
        pivots.push((rank, col));
        rank += 1;
    }
    for r in rank..rows.len() {
        if !rhs[r].is_zero(ctx) {
            return LinSolve::Inconsistent;
        }
    }
    let mut x: Vec<T> = (0..ncols).map(|_| T::zero(ctx)).collect();
    for &(r, c) in &pivots {
        x[c] = rhs[r].clone();
    }
    if rank == ncols {
        return LinSolve::Unique(x);
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut kernel = Vec::new();
    for free in 0..ncols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v: Vec<T> = (0..ncols).map(|_| T::zero(ctx)).collect();
        v[free] = T::one(ctx);
        for &(r, c) in &pivots {
            v[c] = rows[r][free].neg(ctx);
        }
        kernel.push(v);
    }
    LinSolve::Affine {
        particular: x,
        kernel,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyrat::Poly;

    #[test]
    fn unique_solution_over_f5() {
        let ctx = FieldCtx::new(5, 1).unwrap();
        let e = |c: u64| ctx.embed_prime(c);
        // x + 2y = 3, 3x + 2y = 1 (det = 1 over F_5)  →  x = 4, y = 2.
        let rows = vec![vec![e(1), e(2)], vec![e(3), e(2)]];
        let rhs = vec![e(3), e(1)];
        match gauss(&ctx, rows, rhs) {
            LinSolve::Unique(x) => {
                assert_eq!(x, vec![e(4), e(2)]);
            }
            _ => panic!("expected unique solution"),
        }
    }

    #[test]
    fn inconsistent_and_underdetermined() {
        let ctx = FieldCtx::new(3, 1).unwrap();
        let e = |c: u64| ctx.embed_prime(c);
        let rows = vec![vec![e(1), e(1)], vec![e(2), e(2)]];
        assert!(matches!(
            gauss(&ctx, rows.clone(), vec![e(1), e(1)]),
            LinSolve::Inconsistent
        ));
        match gauss(&ctx, rows, vec![e(1), e(2)]) {
            LinSolve::Affine { particular, kernel } => {
                assert_eq!(particular, vec![e(1), e(0)]);
                assert_eq!(kernel.len(), 1);
                // Kernel vector (−1, 1) = (2, 1) over F_3.
                assert_eq!(kernel[0], vec![e(2), e(1)]);
            }
            _ => panic!("expected affine solution set"),
        }
    }

    #[test]
    fn ratfunc_system() {
        let ctx = FieldCtx::new(2, 1).unwrap();
        let t = RatFunc::from_poly(&ctx, Poly::t(&ctx));
        let one = RatFunc::one(&ctx);
        // t·x + y = t² + 1, x + y = t + ... pick: x = t, y = 1:
        //   t·t + 1 = t²+1 ✓ ; t + 1.
        let t2p1 = t.mul(&ctx, &t).add(&ctx, &one);
        let tp1 = t.add(&ctx, &one);
        let rows = vec![vec![t.clone(), one.clone()], vec![one.clone(), one.clone()]];
        let rhs = vec![t2p1, tp1];
        match gauss(&ctx, rows, rhs) {
            LinSolve::Unique(x) => {
                assert_eq!(x[0], t);
                assert_eq!(x[1], one);
            }
            _ => panic!("expected unique solution"),
        }
    }
}
