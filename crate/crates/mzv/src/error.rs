//! Crate-wide error type.
//!
//! Every fallible operation returns [`MzvError`] so callers can match on the
//! failure mode instead of parsing strings. Mathematical failures that are
//! *findings* (a relation that does not exist, a coefficient the recipe
//! cannot define) get their own variants and are never folded into generic
//! errors: the whole point of the workbench is to surface them.

use thiserror::Error;

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, MzvError>;

#[derive(Debug, Error)]
pub enum MzvError {
    /// `p` passed to a field constructor is not prime.
    #[error("p = {p} is not prime")]
    CompositeP { p: u64 },

    /// A supplied modulus is not irreducible over F_p.
    #[error("modulus {modulus} is reducible over F_{p}")]
    ReducibleModulus { modulus: String, p: u64 },

    /// A supplied modulus has the wrong degree, or operands of mismatched
    /// field contexts were combined.
    #[error("degree mismatch: {detail}")]
    DegreeMismatch { detail: String },

    /// An exponent computation left the checked 64-bit range.
    #[error("exponent overflow: {detail}")]
    ExponentOverflow { detail: String },

    /// An index argument outside its documented domain (k ≤ 0, [0], …).
    #[error("invalid index: {detail}")]
    InvalidIndex { detail: String },

    /// The request is well-posed but beyond the configured work or size
    /// guards (enumeration bounds, q > 256 in the relation machinery, …).
    #[error("request too large: {detail}")]
    TooLarge { detail: String },

    /// Rational-function construction with a zero denominator.
    #[error("zero denominator")]
    ZeroDenominator,

    /// Series inversion with a non-invertible constant term.
    #[error("series has a non-unit constant term")]
    NonUnitConstantTerm,

    /// An internal cross-check failed. This signals a bug (or a corrupted
    /// cache entry), never a mathematical finding.
    #[error("verification failed: {detail}")]
    VerificationFailed { detail: String },

    /// The G_k linear system is inconsistent at the degree cap: no
    /// polynomial with the requested evaluation behavior exists.
    #[error("no polynomial solution for G_{k} (q = {q}): {detail}")]
    NoPolynomialSolution { q: u64, k: u64, detail: String },

    /// No F_p-linear combination expresses the requested relation.
    /// This is a reportable finding, not an internal failure.
    #[error("no shuffle relation found for (a, b) = ({a}, {b}): {detail}")]
    NoSolution { a: u64, b: u64, detail: String },

    /// The per-d linear system is underdetermined; all solutions plus a
    /// kernel witness are carried in the payload.
    #[error("shuffle relation for (a, b) = ({a}, {b}) is not unique; kernel witness: {kernel}")]
    NonUniqueSolution {
        a: u64,
        b: u64,
        /// Human-readable basis vector of the solution kernel.
        kernel: String,
        /// Every solution found, serialized pair lists, for inspection.
        solutions: Vec<String>,
    },

    /// The recipe coefficient c_{a,j} requires inverting a multiple of p.
    #[error("coefficient c_(a={a}, j={j}) is undefined: p divides ceil(j(q-1)/j_max)")]
    UndefinedCoefficient { a: u64, j: u64 },

    /// The operation is defined only for another (q, p, n) shape.
    #[error("not applicable: {detail}")]
    NotApplicable { detail: String },

    /// No closed formula covers this (q, a).
    #[error("no full formula covers q = {q}, a = {a}")]
    NotCovered { q: u64, a: u64 },

    /// Unknown large-index family tag.
    #[error("invalid family: {detail}")]
    InvalidFamily { detail: String },

    /// Malformed textual serialization (cache files, --relation input).
    #[error("parse error: {detail}")]
    Parse { detail: String },

    /// Cache I/O.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
