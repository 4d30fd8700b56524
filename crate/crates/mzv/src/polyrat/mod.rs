//! Exact polynomial, rational-function, power-series, and bivariate
//! arithmetic over F_q.
//!
//! Four value types, all immutable and all operated on through a
//! [`FieldCtx`](crate::ffield::FieldCtx):
//!
//! * [`Poly`] — sparse polynomial in t. Sparseness is load-bearing: the
//!   Carlitz-style polynomials handled here have a handful of terms with
//!   exponents as large as q^d.
//! * [`RatFunc`] — reduced rational function num/den with monic
//!   denominator. The representation is canonical, so structural equality
//!   is semantic equality.
//! * [`Series`] — truncated power series in an auxiliary variable y with
//!   RatFunc coefficients.
//! * [`BiPoly`] — sparse polynomial in a second variable T with RatFunc
//!   coefficients; evaluation at T = t^{q^d} connects it back to K = F_q(t).
//!
//! Textual serialization (versioned, used by the cache and the CLI) lives
//! in [`text`].

mod bipoly;
mod poly;
mod ratfunc;
mod series;
pub mod text;

pub use bipoly::BiPoly;
pub use poly::Poly;
pub use ratfunc::RatFunc;
pub use series::Series;
