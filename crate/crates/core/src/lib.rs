//! Means and operator inequalities for Hermitian positive definite matrices.
//!
//! The crate provides, over complex matrices with `f32` or `f64` entries:
//!
//! * a dense complex matrix type and a self-contained Hermitian
//!   eigensolver ([`matrix`], [`eigen`]);
//! * positive definite matrices with spectral calculus, the Loewner order,
//!   the Thompson metric, and unitarily invariant norms ([`hpd`], [`norm`]);
//! * weighted matrix means: arithmetic, harmonic, two-variable weighted
//!   means, the power mean family `P_t`, and the Karcher mean ([`means`]);
//! * positive unital linear maps in Kraus form ([`maps`]);
//! * a catalog of operator inequalities relating all of the above, each
//!   evaluated numerically with an explicit order-slack verdict ([`checks`]).
//!
//! Concrete `f64` aliases for the main types are exported at the root.

pub mod checks;
pub mod eigen;
pub mod error;
pub mod hpd;
pub mod maps;
pub mod matrix;
pub mod means;
pub mod norm;
pub mod scalar;

pub use error::{Error, Result};

/// `f64` complex matrix.
pub type ComplexMatrix64 = matrix::ComplexMatrix<f64>;
/// `f32` complex matrix.
pub type ComplexMatrix32 = matrix::ComplexMatrix<f32>;
/// `f64` Hermitian positive definite matrix.
pub type HpdMatrix64 = hpd::HpdMatrix<f64>;
/// `f32` Hermitian positive definite matrix.
pub type HpdMatrix32 = hpd::HpdMatrix<f32>;
/// `f64` weighted tuple of positive definite matrices.
pub type MatrixTuple64 = means::MatrixTuple<f64>;
/// `f64` positive unital map in Kraus form.
pub type UcpMap64 = maps::UcpMap<f64>;
/// `f64` inequality verdict.
pub type Verdict64 = checks::Verdict<f64>;
