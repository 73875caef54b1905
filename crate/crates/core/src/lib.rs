//! Exact identities for products of geometric-sequence terms.
//!
//! A product `a_{b1}^{t1} * ... * a_{bn}^{tn}` of terms of a geometric
//! sequence `a_n = a1 * r^(n-1)` equals `a1^T * r^(S-T)`, where `T` is the
//! total exponent and `S` the exponent-weighted sum of indices. The crate
//! decides identities through that signature, enumerates products sharing
//! one, and checks every symbolic answer against floating-point evaluation.
//!
//! - [`exact`]: rationals and exponents `q + p*pi`
//! - [`model`]: [`StringProduct`], [`Signature`], evaluation
//! - [`engine`]: families, shifts, decompositions, weight solving
//! - [`parser`]: the text DSL and renderers
//! - [`oracle`]: random numeric checks and a brute-force enumerator
//! - [`cli`]: the `strprod` command line

pub mod cli;
pub mod engine;
pub mod exact;
pub mod model;
pub mod oracle;
pub mod parser;

pub use engine::{Decomposition, FamilyQuery, Identity, Part, Verdict};
pub use exact::{ExactExponent, Rational};
pub use model::{CompiledProduct, Factor, SequenceSpec, Signature, StringProduct};
pub use parser::{parse_identity, parse_product, render, ParseError, RenderStyle};
