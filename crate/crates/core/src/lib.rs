//! Exact q-analogs of weight multiplicity for symmetrizable Kac-Moody
//! algebras, together with explicit highest-weight modules and Brylinski
//! filtrations for the affine algebra of type `A_1^(1)`.

pub mod brylinski;
pub mod error;
pub mod gcm;
pub mod linalg;
pub mod loop_algebra;
pub mod poly;
pub mod qanalog;
pub mod rational;
pub mod roots;
pub mod semiinfinite;
pub mod verma;

pub use error::{Error, Result};
pub use gcm::{validate_gcm, Gcm, RootVector, Weight};
pub use poly::QPolynomial;
