//! Invariant balanced Hermitian geometry on six-dimensional Lie algebras, in exact arithmetic.
//!
//! The crate builds Chevalley–Eilenberg differentials, complex and Hermitian structures, the
//! Levi-Civita, Bismut and Chern connections, their curvature and holonomy algebras, the weak
//! ∂∂̄-lemma test and the Strominger anomaly equation. Every routine is generic over a
//! [`scalar::Scalar`] backend: exact rationals ([`scalar::Q`]) or rounded decimals ([`scalar::Real`]).

pub mod cli;
pub mod complex;
pub mod connection;
pub mod ddbar;
pub mod error;
pub mod exterior;
pub mod hermitian;
pub mod holonomy;
pub mod lie;
pub mod linalg;
pub mod parse;
pub mod scalar;
pub mod strominger;

pub use error::{Error, Result};
pub use exterior::Form;
pub use lie::LieAlgebra;
pub use scalar::{Real, Scalar, Q};
