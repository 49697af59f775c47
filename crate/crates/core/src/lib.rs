//! Exact computational homological algebra for finite-dimensional elementary
//! algebras over a prime field (or the rationals): quiver-presented algebras,
//! module and bimodule calculus, chain complexes with resolutions and
//! perfectness tests, and construction plus verification of singular
//! equivalences of Morita type with level.

pub mod algebra;
pub mod bimodule;
pub mod complex;
pub mod error;
pub mod linalg;
pub mod module;
pub mod sampling;
pub mod singular;
pub mod tasks;
pub mod witness;
pub mod workspace;

pub use error::Error;
pub use linalg::{FieldSpec, Matrix, Scalar, DEFAULT_PRIME};
