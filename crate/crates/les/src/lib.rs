//! Gaussian space-time filtering with gradient-type subgrid closures, a
//! nonlinear (strain-dependent) effective viscosity, and 1D Burgers solvers
//! that compare filtered and unfiltered models against exact solutions.

pub mod analytic;
pub mod cli;
pub mod closures;
pub mod error;
pub mod experiments;
pub mod fields;
pub mod filter;
pub mod solver;

pub use error::{LesError, Result};
