//! Exact lattice and combinatorial toolkit for line configurations on quartic
//! surfaces with a non-simple singular point.
//!
//! The crate is layered bottom-up:
//!
//! * [`linalg`]: integer and rational matrices, Smith normal form, kernels;
//! * [`lattice`]: negative-definite lattices, duals, discriminant groups;
//! * [`enumeration`]: dual vectors of prescribed norm in a discriminant class;
//! * [`graph`]: canonical labeling, Dynkin recognition, GQ(3,1) test;
//! * [`configs`]: admissible sets, exceptional roots, filters, classification;
//! * [`bounds`]: Elkies bound, Betti numbers, singularity catalog, tables;
//! * [`tseries`]: collinearity systems for the twelve-point configurations;
//! * [`regress`]: the acceptance criteria as exact checks.

pub mod bounds;
pub mod configs;
pub mod enumeration;
mod error;
pub mod graph;
pub mod lattice;
pub mod linalg;
pub mod rational;
pub mod regress;
pub mod tseries;

pub use error::{Error, Result};

/// Version of this crate.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exact rational number used throughout the public API.
pub type Rational = num_rational::Ratio<i64>;
