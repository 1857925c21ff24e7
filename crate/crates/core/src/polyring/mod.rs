//! Exact sparse multivariate polynomial arithmetic over the rationals.
//!
//! This is the kernel every other module builds on: a shared variable
//! registry with named blocks, sparse monomials, polynomials with
//! arbitrary-precision rational coefficients, monomial orders, symbolic
//! determinants, resultants and squarefree machinery.

mod det;
mod gcd;
mod monomial;
mod poly;
mod registry;
mod resultant;
mod text;
mod unipoly;

pub use det::determinant;
pub use gcd::{poly_gcd, squarefree_part_multi};
pub use monomial::{Monomial, MonomialOrder};
pub use poly::Poly;
pub use registry::{Var, VarRegistry};
pub use resultant::{resultant, sylvester_matrix};
pub use text::{parse_poly, ParseError};
pub use unipoly::{as_univariate, UniPoly};

/// Errors raised by kernel operations.
#[derive(Debug, Clone, thiserror::Error)]
pub enum PolyError {
    #[error("polynomials belong to different variable registries")]
    RegistryMismatch,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{0}` is unbound in evaluation")]
    UnboundVariable(String),
    #[error("degree of the zero polynomial is undefined")]
    ZeroPolynomial,
    #[error("`{0}` requires a univariate polynomial")]
    NotUnivariate(&'static str),
    #[error("resultant requires positive degree in the eliminated variable")]
    ResultantDegree,
    #[error("{0}")]
    Domain(String),
}
