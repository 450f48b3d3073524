//! Number theory, dense complex polynomials and simultaneous root finding.

mod aberth;
mod arith;
mod intpoly;
mod poly;

pub use aberth::{
    aberth_roots, aberth_with, compare_roots, AberthOptions, RootEvaluator, RootSet,
    DEFAULT_MAX_ITER, DEFAULT_TOL,
};
pub use arith::{checked_pow, divisors, exact_period_degree, mobius, sigma_divisors};
pub use intpoly::{critical_orbit_int, int_resultant, IntPoly};
pub use poly::{div_exact, Evaluation, Polynomial};
