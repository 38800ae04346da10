//! Algebra of left-invariant CR structures on compact Lie groups and the
//! frequency-space solver for the tangential CR operator on tori.
//!
//! The crate is organized in layers:
//! - [`scalar`] and [`linalg`]: exact Gaussian-rational / quadratic-surd /
//!   binary64 complex arithmetic and exact elimination,
//! - [`exterior`]: multi-indices and alternating forms,
//! - [`liealg`]: matrix Lie algebras, root decompositions, CR0/CR1
//!   constructions, Levi-form tests and the Chevalley-Eilenberg differential,
//! - [`toruscr`]: bi-invariant structures on `T^N`, symbols and the
//!   divisor-condition lattice scan,
//! - [`fourier`]: trigonometric-polynomial forms and the per-frequency solver.

pub mod error;
pub mod exterior;
pub mod fourier;
pub mod liealg;
pub mod linalg;
pub mod scalar;
pub mod toruscr;

pub use error::{CoreError, Result};
pub use scalar::{Realization, Scalar};
