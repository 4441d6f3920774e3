//! Norm control for inverses in differential subalgebras.
//!
//! Computable algebra pairs, Neumann-series inversion, explicit and
//! asymptotic bounds on `‖a⁻¹‖_A`, and the numerical side of spectral
//! visibility.

pub mod algebra;
pub mod bounds;
pub mod cases;
pub mod diffnorm;
pub mod error;
pub mod inversion;
pub mod io;
pub mod matrix;
pub mod powers;
pub mod sample;
pub mod sweep;
pub mod torus;
pub mod visibility;
pub mod weight;

pub use algebra::{AlgebraElement, AlgebraPair, Exponent};
pub use error::{Error, Result};
pub use matrix::ComplexMatrix;
pub use torus::TorusPolynomial;
pub use weight::WeightFunction;
