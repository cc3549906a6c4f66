//! Caputo fractional derivatives of sampled functions through the univariate
//! multinode Shepard operator, and collocation solvers for Bagley-Torvik
//! boundary and initial value problems built on top of it.
//!
//! The pipeline is
//!
//! 1. [`nodes`] builds a node set on `[0, T]` with a covering by local subsets;
//! 2. [`basis`] evaluates the multinode partition of unity and its derivatives;
//! 3. [`shepard`] blends local Lagrange interpolants into cardinal functions;
//! 4. [`quadrature`] and [`caputo`] turn cardinal derivatives into Caputo
//!    derivative weights with a Gauss-Jacobi rule;
//! 5. [`collocation`] assembles and solves the Bagley-Torvik systems;
//! 6. [`experiments`] runs the reference problems and writes reports.
//!
//! ```
//! use multinode_fde::{basis::MultinodeBasis, caputo::CaputoOperator, nodes, shepard::ShepardEvaluator};
//! use std::sync::Arc;
//!
//! let (x, cover) = nodes::mixed_ec(5, 6, 1.0).unwrap();
//! let samples: Vec<f64> = x.as_slice().iter().map(|t| t * t).collect();
//! let basis = MultinodeBasis::new(4, x, cover).unwrap();
//! let ev = Arc::new(ShepardEvaluator::new(basis));
//! let op = CaputoOperator::new(0.5, ev).unwrap();
//! // D^{1/2} x² = 2 x^{3/2} / Γ(5/2)
//! let approx = op.apply(&samples, 0.6).unwrap();
//! let exact = 2.0 * 0.6f64.powf(1.5) / multinode_fde::specfun::gamma_fn(2.5).unwrap();
//! assert!((approx - exact).abs() < 1e-12);
//! ```

pub mod basis;
pub mod caputo;
pub mod cli;
pub mod collocation;
pub mod error;
pub mod experiments;
mod linalg;
pub mod nodes;
pub mod quadrature;
pub mod shepard;
pub mod specfun;

#[cfg(test)]
mod test_support;

pub use error::{Error, Result};
