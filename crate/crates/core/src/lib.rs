//! Pointwise exterior calculus on Hermitian and Riemannian vector spaces:
//! forms and the Hodge star, complex bigradings, Lefschetz operators,
//! form-valued maps and their antisymmetrisation, the spectral algebra of
//! skew endomorphisms, and complex coframes in three dimensions.

pub mod blade;
pub mod error;
pub mod form;
pub mod frames;
pub mod harmonic;
pub mod hermitian;
pub mod json;
pub mod lefschetz;
pub mod linalg;
pub mod sample;
pub mod scalar;
pub mod tensor_maps;
pub mod torsion;

pub use error::{Error, Result};
pub use form::{Form, Space, Vector};
pub use scalar::{Backend, Rational, Scalar, TAU};
