//! Exact computation of data-discriminants of Lagrange likelihood equations.
//!
//! The crate is organized around a small exact-arithmetic kernel
//! ([`polyring`]) on top of which sit a Buchberger-based Gröbner engine
//! ([`groebner`]), the construction of likelihood systems from statistical
//! models ([`likelihood`]), the discriminant algorithms proper
//! ([`discriminant`]) and an exact real/positive root counter
//! ([`rootprobe`]).
//!
//! All arithmetic is over the rationals; no floating point enters any
//! computation path.

pub mod budget;
pub mod discriminant;
pub mod likelihood;

pub mod groebner;

pub mod polyring;


pub use budget::Budget;
pub use polyring::{Monomial, MonomialOrder, Poly, Var, VarRegistry};
