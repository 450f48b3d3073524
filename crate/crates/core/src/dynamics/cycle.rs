use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ParamPoint;
use crate::error::{Error, Result};

pub const BURN_IN: usize = 1000;
/// Relative closest-return tolerance used to detect the period.
pub const DETECTION_TOL: f64 = 1e-6;

/// Orbits leaving this disk are treated as escaping during detection.
const BOUNDED_RADIUS: f64 = 1e8;
const NEWTON_MAX: usize = 100;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cycle {
    pub points: Vec<Complex64>,
    pub period: usize,
    pub multiplier: Complex64,
}

/// Attracting cycle that attracts the critical point `c_j`, if any of period
/// at most `max_period`.
pub fn find_cycle(p: &ParamPoint, j: usize, max_period: usize) -> Result<Option<Cycle>> {
    if max_period == 0 {
        return Err(Error::Domain("max_period must be at least 1".into()));
    }
    let mut z = p.critical_point(j)?;
    for _ in 0..BURN_IN {
        z = p.apply(z);
        if !(z.norm() <= BOUNDED_RADIUS) {
            return Ok(None);
        }
    }
    let tol = DETECTION_TOL * z.norm().max(1.0);
    let mut w = z;
    let mut period = None;
    for m in 1..=max_period {
        w = p.apply(w);
        if (w - z).norm() < tol {
            period = Some(m);
            break;
        }
    }
    let Some(m) = period else {
        return Ok(None);
    };
    let (z0, multiplier) = refine_cycle(p, z, m)?;
    if !(multiplier.norm() < 1.0) {
        return Ok(None);
    }
    let mut points = Vec::with_capacity(m);
    let mut x = z0;
    for _ in 0..m {
        points.push(x);
        x = p.apply(x);
    }
    Ok(Some(Cycle {
        points,
        period: m,
        multiplier,
    }))
}

/// Newton's method on `f^m(z) - z` from `z`; returns the periodic point and
/// its multiplier `(f^m)'`. Divergence or a wandering iterate is reported as
/// [`Error::NearParabolic`].
pub fn refine_cycle(p: &ParamPoint, z: Complex64, m: usize) -> Result<(Complex64, Complex64)> {
    let start = z;
    let mut z = z;
    let near_parabolic = || Error::NearParabolic {
        param: p.to_string(),
    };
    for _ in 0..NEWTON_MAX {
        let (fz, dfz) = iterate_with_derivative(p, z, m);
        let step = (fz - z) / (dfz - 1.0);
        if !step.re.is_finite() || !step.im.is_finite() {
            return Err(near_parabolic());
        }
        z -= step;
        if (z - start).norm() > 1e3 * DETECTION_TOL * start.norm().max(1.0) {
            return Err(near_parabolic());
        }
        if step.norm() <= 4.0 * f64::EPSILON * z.norm().max(1.0) {
            let (_, mult) = iterate_with_derivative(p, z, m);
            return Ok((z, mult));
        }
    }
    Err(near_parabolic())
}

/// `(f^m(z), (f^m)'(z))`
pub(crate) fn iterate_with_derivative(p: &ParamPoint, z: Complex64, m: usize) -> (Complex64, Complex64) {
    let mut z = z;
    let mut dz = Complex64::new(1.0, 0.0);
    for _ in 0..m {
        dz *= p.derivative(z);
        z = p.apply(z);
    }
    (z, dz)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn uni(cv: Complex64) -> ParamPoint {
        ParamPoint::unicritical(2, cv).unwrap()
    }

    #[test]
    fn superattracting_cycles() {
        let cy = find_cycle(&uni(c(0.0, 0.0)), 0, 5).unwrap().unwrap();
        assert_eq!(cy.period, 1);
        assert_eq!(cy.points, vec![c(0.0, 0.0)]);
        assert_eq!(cy.multiplier, c(0.0, 0.0));

        let cy = find_cycle(&uni(c(-1.0, 0.0)), 0, 5).unwrap().unwrap();
        assert_eq!(cy.period, 2);
        let mut pts: Vec<f64> = cy.points.iter().map(|z| z.re).collect();
        pts.sort_by(f64::total_cmp);
        assert_eq!(pts, vec![-1.0, 0.0]);
        assert!(cy.multiplier.norm() < 1e-15);
    }

    #[test]
    fn basilica_component_multiplier() {
        let cy = find_cycle(&uni(c(-0.9, 0.0)), 0, 8).unwrap().unwrap();
        assert_eq!(cy.period, 2);
        assert!((cy.multiplier - c(0.4, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn escaping_and_repelling() {
        assert!(find_cycle(&uni(c(0.5, 0.0)), 0, 8).unwrap().is_none());
        // c = i is preperiodic: no attracting cycle anywhere.
        assert!(find_cycle(&uni(c(0.0, 1.0)), 0, 8).unwrap().is_none());
        assert!(find_cycle(&uni(c(0.0, 0.0)), 0, 0).is_err());
    }

    #[test]
    fn cubic_cycle() {
        // a = 0 gives P(0) = 0.
        let p = ParamPoint::cubic(c(1.0, 0.0), c(0.0, 0.0));
        let cy = find_cycle(&p, 0, 4).unwrap().unwrap();
        assert_eq!(cy.period, 1);
        assert!(cy.points[0].norm() < 1e-15);
    }
}
