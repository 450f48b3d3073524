use num_complex::Complex64;

use super::green::ORBIT_ESCAPE;
use super::ParamPoint;
use crate::error::Result;

/// Forward orbit of a marked critical point.
///
/// `points[k] = f^k(c_j)`. Iteration stops at the first iterate whose modulus
/// exceeds [`ORBIT_ESCAPE`]; that index is recorded in `escaped_at` and no
/// later iterates are stored, so entries are never NaN.
#[derive(Clone, Debug, PartialEq)]
pub struct Orbit {
    pub points: Vec<Complex64>,
    /// `jacobian[k][i] = ∂ f^k(c_j) / ∂ param_i`
    pub jacobian: Option<Vec<Vec<Complex64>>>,
    pub escaped_at: Option<usize>,
}

impl Orbit {
    pub fn escaped(&self) -> bool {
        self.escaped_at.is_some()
    }

    /// `f^k(c_j)`, or `None` past the escape point.
    pub fn get(&self, k: usize) -> Option<Complex64> {
        self.points.get(k).copied()
    }

    pub fn last(&self) -> Complex64 {
        *self.points.last().expect("orbit always holds c_j")
    }
}

pub fn orbit_critical(p: &ParamPoint, j: usize, n: usize, with_derivatives: bool) -> Result<Orbit> {
    let np = p.num_params();
    let mut z = p.critical_point(j)?;
    let mut dz = p.critical_point_gradient(j);
    let mut points = Vec::with_capacity(n + 1);
    let mut jac = with_derivatives.then(|| Vec::with_capacity(n + 1));
    points.push(z);
    if let Some(rows) = jac.as_mut() {
        rows.push(dz.clone());
    }
    let mut escaped_at = None;
    for k in 1..=n {
        if with_derivatives {
            let fp = p.derivative(z);
            let partials = p.param_partials(z);
            for i in 0..np {
                dz[i] = fp * dz[i] + partials[i];
            }
        }
        z = p.apply(z);
        let finite = z.re.is_finite() && z.im.is_finite();
        let derivs_finite = dz.iter().all(|v| v.re.is_finite() && v.im.is_finite());
        if !finite || !derivs_finite || z.norm() > ORBIT_ESCAPE {
            escaped_at = Some(k);
            break;
        }
        points.push(z);
        if let Some(rows) = jac.as_mut() {
            rows.push(dz.clone());
        }
    }
    Ok(Orbit {
        points,
        jacobian: jac,
        escaped_at,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hand_iterated_orbits() {
        let p = ParamPoint::unicritical(2, c(1.0, 0.0)).unwrap();
        let o = orbit_critical(&p, 0, 3, false).unwrap();
        assert_eq!(o.points, vec![c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(5.0, 0.0)]);
        assert!(!o.escaped());

        let p = ParamPoint::unicritical(2, c(-1.0, 0.0)).unwrap();
        let o = orbit_critical(&p, 0, 2, false).unwrap();
        assert_eq!(o.points, vec![c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)]);

        let p = ParamPoint::cubic(c(0.0, 0.0), c(1.0, 0.0));
        let o = orbit_critical(&p, 0, 2, false).unwrap();
        assert_eq!(o.points[1], c(1.0, 0.0));
        assert!((o.points[2] - c(4.0 / 3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn escape_is_marked_not_nan() {
        let p = ParamPoint::unicritical(2, c(10.0, 0.0)).unwrap();
        let o = orbit_critical(&p, 0, 50, true).unwrap();
        let k = o.escaped_at.unwrap();
        assert!(k < 12);
        assert_eq!(o.points.len(), k);
        assert!(o.points.iter().all(|z| z.re.is_finite()));
        assert!(o.get(k).is_none());
    }

    #[test]
    fn second_critical_point_of_cubic() {
        let p = ParamPoint::cubic(c(1.0, 0.0), c(0.0, 0.0));
        let o = orbit_critical(&p, 1, 1, true).unwrap();
        assert!((o.points[1] - c(1.0 / 3.0 - 0.5, 0.0)).norm() < 1e-15);
        let jac = o.jacobian.unwrap();
        assert_eq!(jac[0], vec![c(1.0, 0.0), c(0.0, 0.0)]);
    }
}
