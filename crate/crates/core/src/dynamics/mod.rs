//! Dynamical families, critical orbits, Green functions and attracting
//! cycles.
//!
//! Two families are supported:
//!
//! * the unicritical family `p_c(z) = z^d + c`, critical point `0`;
//! * the cubic family `P_{c1,a}(z) = z^3/3 - c1 z^2/2 + a^3`, whose critical
//!   points are exactly `0` and `c1`.

mod cycle;
mod green;
mod orbit;
mod przytycki;
mod rays;

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use cycle::{find_cycle, refine_cycle, Cycle, BURN_IN, DETECTION_TOL};
pub use green::{green, green_at, GreenValue, GREEN_CONSTANT, ORBIT_ESCAPE};
pub use orbit::{orbit_critical, Orbit};
pub use rays::{external_ray, RayAngle, RayOptions};
pub use przytycki::{
    chordal_distance, przytycki_fit, przytycki_gap, spherical_derivative, spherical_derivative_sup,
    PrzytyckiFit,
};

/// A point of parameter space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ParamPoint {
    Unicritical { d: u32, c: Complex64 },
    CubicModuli { c1: Complex64, a: Complex64 },
}

impl fmt::Display for ParamPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamPoint::Unicritical { d, c } => write!(f, "z^{d}+({c})"),
            ParamPoint::CubicModuli { c1, a } => write!(f, "cubic(c1={c1}, a={a})"),
        }
    }
}

impl ParamPoint {
    pub fn unicritical(d: u32, c: Complex64) -> Result<Self> {
        if d < 2 {
            return Err(Error::Domain(format!("degree d={d} must be at least 2")));
        }
        Ok(ParamPoint::Unicritical { d, c })
    }

    pub fn cubic(c1: Complex64, a: Complex64) -> Self {
        ParamPoint::CubicModuli { c1, a }
    }

    /// Degree of the map.
    pub fn degree(&self) -> u32 {
        match self {
            ParamPoint::Unicritical { d, .. } => *d,
            ParamPoint::CubicModuli { .. } => 3,
        }
    }

    /// Number of complex parameters.
    pub fn num_params(&self) -> usize {
        match self {
            ParamPoint::Unicritical { .. } => 1,
            ParamPoint::CubicModuli { .. } => 2,
        }
    }

    pub fn params(&self) -> Vec<Complex64> {
        match self {
            ParamPoint::Unicritical { c, .. } => vec![*c],
            ParamPoint::CubicModuli { c1, a } => vec![*c1, *a],
        }
    }

    /// Same family, new parameter values.
    pub fn with_params(&self, params: &[Complex64]) -> Self {
        match self {
            ParamPoint::Unicritical { d, .. } => ParamPoint::Unicritical { d: *d, c: params[0] },
            ParamPoint::CubicModuli { .. } => ParamPoint::CubicModuli {
                c1: params[0],
                a: params[1],
            },
        }
    }

    pub fn num_critical(&self) -> usize {
        match self {
            ParamPoint::Unicritical { .. } => 1,
            ParamPoint::CubicModuli { .. } => 2,
        }
    }

    pub fn critical_point(&self, j: usize) -> Result<Complex64> {
        match (self, j) {
            (ParamPoint::Unicritical { .. }, 0) => Ok(Complex64::new(0.0, 0.0)),
            (ParamPoint::CubicModuli { .. }, 0) => Ok(Complex64::new(0.0, 0.0)),
            (ParamPoint::CubicModuli { c1, .. }, 1) => Ok(*c1),
            _ => Err(Error::Domain(format!(
                "critical index {j} invalid for {self}"
            ))),
        }
    }

    /// Parameter gradient of the marked critical point `c_j`.
    pub(crate) fn critical_point_gradient(&self, j: usize) -> Vec<Complex64> {
        let zero = Complex64::new(0.0, 0.0);
        match (self, j) {
            (ParamPoint::CubicModuli { .. }, 1) => vec![Complex64::new(1.0, 0.0), zero],
            _ => vec![zero; self.num_params()],
        }
    }

    /// `f(z)`
    #[inline]
    pub fn apply(&self, z: Complex64) -> Complex64 {
        match self {
            ParamPoint::Unicritical { d, c } => z.powu(*d) + c,
            ParamPoint::CubicModuli { c1, a } => {
                let z2 = z * z;
                z2 * z / 3.0 - c1 * z2 / 2.0 + a * a * a
            }
        }
    }

    /// `f'(z)`
    #[inline]
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        match self {
            ParamPoint::Unicritical { d, .. } => f64::from(*d) * z.powu(*d - 1),
            ParamPoint::CubicModuli { c1, .. } => z * (z - c1),
        }
    }

    /// `f''(z)`
    #[inline]
    pub fn second_derivative(&self, z: Complex64) -> Complex64 {
        match self {
            ParamPoint::Unicritical { d, .. } => {
                let d = *d;
                f64::from(d * (d - 1)) * if d == 2 { Complex64::new(1.0, 0.0) } else { z.powu(d - 2) }
            }
            ParamPoint::CubicModuli { c1, .. } => 2.0 * z - c1,
        }
    }

    /// `∂f/∂param (z)` for each parameter.
    #[inline]
    pub fn param_partials(&self, z: Complex64) -> [Complex64; 2] {
        match self {
            ParamPoint::Unicritical { .. } => [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            ParamPoint::CubicModuli { a, .. } => [-z * z / 2.0, 3.0 * a * a],
        }
    }

    /// `∂f'/∂param (z)` for each parameter.
    #[inline]
    pub fn derivative_param_partials(&self, z: Complex64) -> [Complex64; 2] {
        let zero = Complex64::new(0.0, 0.0);
        match self {
            ParamPoint::Unicritical { .. } => [zero, zero],
            ParamPoint::CubicModuli { .. } => [-z, zero],
        }
    }

    /// Leading coefficient of the map.
    pub fn leading_coefficient(&self) -> f64 {
        match self {
            ParamPoint::Unicritical { .. } => 1.0,
            ParamPoint::CubicModuli { .. } => 1.0 / 3.0,
        }
    }

    /// `log⁺ max{|c|, |a|}`
    pub fn log_param_size(&self) -> f64 {
        let m = match self {
            ParamPoint::Unicritical { c, .. } => c.norm(),
            ParamPoint::CubicModuli { c1, a } => c1.norm().max(a.norm()),
        };
        m.ln().max(0.0)
    }
}
