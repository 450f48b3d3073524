//! Numerical laboratory for the parameter spaces of polynomial dynamics.
//!
//! The crate computes hyperbolic centers and multiplier loci of the
//! unicritical family `z^d + c` and of the cubic family with marked critical
//! points, Green functions and escape rates, harmonic measure of the
//! Multibrot sets via external rays, and the discrepancy series used to
//! measure equidistribution rates.

pub mod cli;
pub mod error;
pub mod dynamics;
pub mod dynatomic;
pub mod loci;
pub mod measures;
pub mod polycore;

pub use error::{Error, Result};
pub use num_complex::Complex64;
