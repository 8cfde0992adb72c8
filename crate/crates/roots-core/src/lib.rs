//! Multi-precision iterative root-finders with composed order boosting.
//!
//! This crate implements a family of one-point iterations for simple
//! roots of nonlinear equations, together with a two-step composition
//! that lifts a base method of order p to order p + q using a single
//! extra function evaluation: the classical 1/f'(z) factor of a Newton
//! correction is replaced by an order-q approximation of the derivative
//! of the inverse function, built from a divided difference and the
//! inverse-function jet at the current point.
//!
//! The pieces:
//!
//! - [`real`]: arbitrary-precision arithmetic contexts.
//! - [`precision`]: the adaptive digit schedule driving each iteration.
//! - [`problems`]: the benchmark equation catalog and polynomial fixtures.
//! - [`inverse`]: inverse-function derivatives from derivatives of f.
//! - [`methods`]: base steps (orders 2..4), the boost correction, closed forms.
//! - [`analysis`]: error-constant prediction, convergence-order estimation,
//!   efficiency indices.
//! - [`bench`]: adaptive-precision solver runs and the benchmark grid.
//!
//! The crate is `no_std` (with `alloc`); enable the `std` feature (on by
//! default) for std integration.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

#[cfg(feature = "std")]
extern crate std;

pub mod analysis;
pub mod bench;
pub mod error;
pub mod inverse;
pub mod methods;
pub mod precision;
pub mod problems;
pub mod real;

pub use error::{Error, Result};
pub use methods::{all_methods, method_by_name, MethodSpec};
pub use precision::PrecisionPolicy;
pub use problems::{catalog, reference_root, Problem};
pub use real::{Ctx, Real};
