//! Exact-arithmetic workbench for power sums over F_q[t] and the shuffle
//! relations between them.
//!
//! The objects of study are the power sums S_d(k) = Σ a^{−k} over monic
//! polynomials a of degree d, their double versions S_d(s₁, s₂), and the
//! defect Δ_d(a, b) = S_d(a)S_d(b) − S_d(a+b). The workbench
//!
//! * computes all of these exactly as rational functions ([`powersums`]),
//! * discovers the coefficient sets expressing Δ_d(a, b) as a combination
//!   Σ c_j·S_d(a_j, a+b−a_j), independent of d ([`solver`]),
//! * proves such relations for every d at once through polynomial
//!   identities in an auxiliary variable ([`hg`], [`prover`]),
//! * evaluates conjectural closed-form recipes for the same sets and
//!   compares them against solver ground truth on grids ([`recipes`],
//!   [`sweep`]).
//!
//! Everything is exact: finite-field coefficients ([`ffield`]), sparse
//! polynomials and reduced rational functions ([`polyrat`]). No floats,
//! no probabilistic identity testing; "proved" means a polynomial identity
//! certified at degree-bounded resolution.
//!
//! The `mzv` binary exposes the same operations as a CLI; the examples/
//! directory shows one runnable entry point per capability.

pub mod error;
pub mod ffield;
pub mod polyrat;

pub(crate) mod dense;
pub(crate) mod linalg;

pub mod cache;
pub mod hg;
pub mod powersums;
pub mod prover;
pub mod recipes;
pub mod solver;
pub mod sweep;

pub use error::{MzvError, Result};
pub use ffield::{base_p_digits, has_carry, lucas_binom, FieldCtx, FieldElem};
pub use polyrat::{BiPoly, Poly, RatFunc, Series};
