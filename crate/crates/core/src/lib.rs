//! Linear independence of lacunary series `sum P(n) / q^f(n)` over `Q(q)`
//! for Pisot and Salem bases `q`.
//!
//! The symbolic core is generic over [`scalar::Ring`] / [`scalar::Field`];
//! the aliases below fix the concrete types used by the decision procedures.

pub mod criterion;
pub mod equiv;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod numfield;
pub mod polyq;
pub mod scalar;
pub mod serieval;

pub use error::{Error, Result};
pub use polyq::Poly;

/// Exact rational number.
pub type Rat = num_rational::BigRational;
/// Polynomial with rational coefficients.
pub type RatPoly = Poly<Rat>;
/// Polynomial with coefficients in a number field.
pub type FieldPoly = Poly<numfield::FieldElem>;
/// Floating-point instantiation of the generic polynomial type.
pub type FloatPoly = Poly<f64>;
