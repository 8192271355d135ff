//! Best constant of the `ψ2`-Orlicz Khintchine inequality for i.i.d. uniform
//! random vectors on the sphere `S^{N-1}`,
//!
//! ```text
//! ‖Σ a_j X_j‖_{ψ2} <= b(N) (Σ a_j²)^{1/2},   b(N) = sqrt(2/N) / sqrt(1 - 2^{-2/N}),
//! ```
//!
//! together with the machinery to check it numerically: exact moment and
//! moment-generating-function identities, plug-in Orlicz norms of Monte
//! Carlo batches, sub-Gaussian tail bounds and reproducible experiment
//! reports.
//!
//! ```
//! use sphere_khintchine::analytic::{best_constant, mgf_closed_form, Dimension};
//!
//! let n = Dimension::new(3).unwrap();
//! let b = best_constant(n);
//! assert!((mgf_closed_form(n, 1.0 / (b * b)).unwrap() - 2.0).abs() < 1e-12);
//! ```

// `!(x > 0.0)` rejects NaN along with nonpositive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod error;
pub mod experiment;
pub mod orlicz;
pub mod report;
mod roots;
pub mod sampler;
pub mod tailbounds;

pub use error::{Error, Result};
