use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Radial bump `φ(x) = (1 - |x - x0|²/r²)³` on `C^m`, zero outside the ball.
///
/// The cube makes `φ`, `φ'` and `φ''` vanish on the boundary sphere, so `φ`
/// is `C²` with compact support. Norms are closed-form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub center: Vec<Complex64>,
    pub radius: f64,
}

pub fn bump(center: &[Complex64], radius: f64) -> Result<TestFunction> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::Domain(format!("bump radius r={radius} must be positive")));
    }
    if center.is_empty() {
        return Err(Error::Domain("bump center has no coordinates".into()));
    }
    if center.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::Domain("bump center must be finite".into()));
    }
    Ok(TestFunction {
        center: center.to_vec(),
        radius,
    })
}

impl TestFunction {
    /// Complex dimension of the domain.
    pub fn dimension(&self) -> usize {
        self.center.len()
    }

    fn real_dimension(&self) -> f64 {
        2.0 * self.center.len() as f64
    }

    /// `s = |x - x0|² / r²`.
    fn s(&self, x: &[Complex64]) -> Result<f64> {
        if x.len() != self.center.len() {
            return Err(Error::DimensionMismatch {
                expected: self.center.len(),
                got: x.len(),
            });
        }
        let dist2: f64 = x.iter().zip(&self.center).map(|(a, b)| (a - b).norm_sqr()).sum();
        Ok(dist2 / (self.radius * self.radius))
    }

    pub fn eval(&self, x: &[Complex64]) -> Result<f64> {
        let s = self.s(x)?;
        Ok(if s < 1.0 { (1.0 - s).powi(3) } else { 0.0 })
    }

    /// Euclidean Laplacian at `x`.
    ///
    /// With `f(s) = (1-s)³` and `N` real dimensions,
    /// `Δφ = (4 s f''(s) + 2N f'(s)) / r² = (24 s (1-s) - 6N (1-s)²) / r²`.
    pub fn laplacian(&self, x: &[Complex64]) -> Result<f64> {
        let s = self.s(x)?;
        Ok(self.radial_laplacian(s))
    }

    fn radial_laplacian(&self, s: f64) -> f64 {
        if s >= 1.0 {
            return 0.0;
        }
        let n = self.real_dimension();
        (24.0 * s * (1.0 - s) - 6.0 * n * (1.0 - s).powi(2)) / (self.radius * self.radius)
    }

    /// Radial derivatives `(dφ/dρ, d²φ/dρ²)` at distance `rho` from the center.
    pub fn radial_derivatives(&self, rho: f64) -> (f64, f64) {
        let r = self.radius;
        let s = rho * rho / (r * r);
        if s >= 1.0 {
            return (0.0, 0.0);
        }
        let first = -6.0 * (1.0 - s).powi(2) * rho / (r * r);
        let second = (-6.0 * (1.0 - s).powi(2) + 24.0 * (1.0 - s) * s) / (r * r);
        (first, second)
    }

    pub fn sup(&self) -> f64 {
        1.0
    }

    /// `sup |Δφ|`. The value `6N/r²` at the center beats the interior
    /// extremum `144/((24 + 6N) r²)` in every dimension.
    pub fn laplacian_sup(&self) -> f64 {
        let n = self.real_dimension();
        (6.0 * n).max(144.0 / (24.0 + 6.0 * n)) / (self.radius * self.radius)
    }

    /// `sup |∇φ| = 6 max_s (1-s)² √s / r`, attained at `s = 1/5`.
    pub fn gradient_sup(&self) -> f64 {
        6.0 * 0.8f64.powi(2) * 0.2f64.sqrt() / self.radius
    }

    /// `‖φ‖_{C²}` taken as `sup|φ| + sup|∇φ| + sup|Δφ|`.
    pub fn c2_norm(&self) -> f64 {
        self.sup() + self.gradient_sup() + self.laplacian_sup()
    }
}
