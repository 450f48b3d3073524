use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::orbit::orbit_critical;
use super::ParamPoint;
use crate::error::{Error, Result};

/// Chordal distance on the Riemann sphere, normalised to diameter 1.
pub fn chordal_distance(z: Complex64, w: Complex64) -> f64 {
    (z - w).norm() / ((1.0 + z.norm_sqr()).sqrt() * (1.0 + w.norm_sqr()).sqrt())
}

/// Chordal distance from `w` to the point at infinity.
fn chordal_to_infinity(w: Complex64) -> f64 {
    1.0 / (1.0 + w.norm_sqr()).sqrt()
}

/// `(n, d(f^n(c_j), c_j))` for `n = 1..=N`. Orbits beyond the escape radius
/// are measured against infinity.
pub fn przytycki_gap(p: &ParamPoint, j: usize, n_max: usize) -> Result<Vec<(usize, f64)>> {
    if n_max == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let cj = p.critical_point(j)?;
    let orbit = orbit_critical(p, j, n_max, false)?;
    Ok((1..=n_max)
        .map(|n| {
            let gap = match orbit.get(n) {
                Some(z) => chordal_distance(z, cj),
                None => chordal_to_infinity(cj),
            };
            (n, gap)
        })
        .collect())
}

/// `f^#(z) = |f'(z)| (1+|z|^2) / (1+|f(z)|^2)`
pub fn spherical_derivative(p: &ParamPoint, z: Complex64) -> f64 {
    let fz = p.apply(z);
    let v = p.derivative(z).norm() * (1.0 + z.norm_sqr()) / (1.0 + fz.norm_sqr());
    if v.is_finite() {
        v
    } else {
        0.0
    }
}

/// Supremum of `f^#` over a latitude/longitude grid of the sphere with
/// `grid` points per direction.
pub fn spherical_derivative_sup(p: &ParamPoint, grid: usize) -> f64 {
    let grid = grid.max(2);
    let mut sup: f64 = 0.0;
    for a in 0..grid {
        // Colatitude φ in [0, π); the north pole (∞) is superattracting.
        let phi = PI * a as f64 / grid as f64;
        let r = (phi / 2.0).tan();
        for b in 0..grid {
            let theta = TAU * b as f64 / grid as f64;
            sup = sup.max(spherical_derivative(p, Complex64::from_polar(r, theta)));
        }
    }
    sup
}

/// Empirical surrogate for the gap lower bound `d(f^n c, c) >= κ M^{-n}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrzytyckiFit {
    /// `min(1, min_n gap_n · M̂^n)`
    pub kappa_hat: f64,
    pub m_hat: f64,
    /// `-slope` of the least-squares line through `(n, log gap_n)`.
    pub decay_rate: f64,
}

impl PrzytyckiFit {
    pub fn lower_bound(&self, n: usize) -> f64 {
        self.kappa_hat * self.m_hat.powi(-(n as i32))
    }
}

/// Fits `κ̂` for the given `M̂` (normally [`spherical_derivative_sup`]) and
/// the per-step decay rate of the gaps.
pub fn przytycki_fit(gaps: &[(usize, f64)], m_hat: f64) -> Result<PrzytyckiFit> {
    if !(m_hat >= 1.0) {
        return Err(Error::Domain(format!("M̂ = {m_hat} must be at least 1")));
    }
    let positive: Vec<(f64, f64)> = gaps
        .iter()
        .filter(|(_, g)| *g > 0.0)
        .map(|(n, g)| (*n as f64, g.ln()))
        .collect();
    if positive.len() < 2 {
        return Err(Error::InsufficientData {
            got: positive.len(),
            need: 2,
        });
    }
    let kappa_hat = gaps
        .iter()
        .map(|(n, g)| g * m_hat.powi(*n as i32))
        .fold(1.0, f64::min);
    let k = positive.len() as f64;
    let mx = positive.iter().map(|t| t.0).sum::<f64>() / k;
    let my = positive.iter().map(|t| t.1).sum::<f64>() / k;
    let sxy: f64 = positive.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = positive.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    Ok(PrzytyckiFit {
        kappa_hat,
        m_hat,
        decay_rate: -sxy / sxx,
    })
}
