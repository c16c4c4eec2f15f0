//! Exact computations around trace-zero matrices and commutators.
//!
//! * [`field`], [`poly`]: exact scalars, sparse polynomials, truncated rings.
//! * [`matrix`]: dense matrices, commutators, conjugation and nilpotent flags.
//! * [`witness`]: verified decompositions `A = [X, B]`.
//! * [`packing`]: separated point sets in the discrete simplex and the graph `G(m, d)`.
//! * [`certificate`]: trace-zero non-commutator certificates built from separated sets.
//! * [`oracle`]: exhaustive searches over finite truncated rings.
//! * [`cli`]: the command-line driver.

pub mod certificate;
pub mod cli;
pub mod error;
pub mod field;
pub mod matrix;
pub mod mis;
pub mod oracle;
pub mod packing;
pub mod poly;
pub mod witness;

pub use error::{MatrixError, RingError};
pub use field::{FieldElem, FieldSpec};
pub use matrix::{commutator, conjugate, trace, FlagBasis, Matrix};
pub use poly::{Monomial, MonomialOrder, Polynomial, RingCtx};
