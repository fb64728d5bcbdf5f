//! Lifted Reed-Solomon and lifted multiplicity codes over GF(2^l).
//!
//! The crate is organized bottom-up:
//!
//! * [`gf2e`]: field arithmetic.
//! * [`monomials`]: the bitwise order, the `mod*` degree map and good/bad
//!   monomial classification.
//! * [`polynomial`]: Hasse derivatives, line restriction, interpolation and
//!   univariate decoding.
//! * [`counting`]: the transfer-matrix recurrence for bad-monomial counts,
//!   its dominant eigenvalue, and rate/distance/redundancy calculators.
//! * [`codes`]: code construction, encoding and the all-lines membership test.
//! * [`recovery`]: PIR, batch and local self-correction procedures.
//! * [`verify`]: a quick self-check suite used by the command-line tool.

pub mod codes;
pub mod counting;
pub mod gf2e;
pub mod linalg;
pub mod monomials;
pub mod polynomial;
pub mod recovery;
pub mod verify;

pub use codes::{build_code, CodeSpec, Codeword, Encoder, GoodBasis};
pub use gf2e::{Field, FieldElement};
pub use monomials::ExponentVector;
pub use polynomial::{DerivativeVector, Line, MultiPoly, UniPoly};
