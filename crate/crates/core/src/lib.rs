//! Exact computations with opers on the formal punctured disc: canonical
//! forms, Miura transformations, nilpotent normal forms and principal
//! q-characters.
//!
//! The core is generic over the coefficient type through [`Scalar`]; the
//! aliases below fix the common choices.

pub mod chevalley;
pub mod error;
pub mod formal;
pub mod json;
pub mod linalg;
pub mod miura;
pub mod oper;
pub mod qchar;
pub mod rootdata;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Exact rational scalars.
pub type Q = num_rational::BigRational;
/// Exact rational Laurent series.
pub type Series = formal::LaurentSeries<Q>;
/// Floating point Laurent series.
pub type SeriesF64 = formal::LaurentSeries<f64>;
