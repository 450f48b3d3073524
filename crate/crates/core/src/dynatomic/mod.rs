//! Critical-orbit and dynatomic polynomials.
//!
//! Coefficient forms are built only where they are representable; root
//! finding at higher periods goes through the implicit evaluators in
//! [`eval`].

mod eval;
mod pnj;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::ParamPoint;
use crate::error::{Error, Result};
use crate::polycore::{
    checked_pow, critical_orbit_int, div_exact, divisors, exact_period_degree, mobius, IntPoly,
    Polynomial,
};

pub use eval::{CriticalOrbitEval, ExactPeriodEval, PreimageEval};
pub use pnj::{pnj_chart, pnj_scaled, pnj_value, CubicChart, PnjValue};

pub const DEFAULT_DEGREE_CAP: u64 = 1 << 19;
/// Relative remainder allowed in a floating Möbius division.
pub const DIVISION_TOL: f64 = 1e-8;
/// Largest period accepted by [`dynatomic_in_z`].
pub const DYNATOMIC_MAX_N: u32 = 6;
/// Largest combined degree accepted by [`resultant_oracle`].
pub const RESULTANT_MAX_DEGREE: usize = 64;

/// Exact integer arithmetic is used up to this degree.
const INTEGER_DEGREE_LIMIT: u64 = 4096;

/// `Q_n` with a flag telling whether every coefficient is an exact 64-bit
/// integer.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitPolynomial {
    pub poly: Polynomial,
    pub exact_integer: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactPeriodPoly {
    pub d: u32,
    pub n: u32,
    #[serde(skip)]
    pub poly: Polynomial,
    /// Largest relative remainder over the Möbius divisions; zero when the
    /// exact integer path was taken.
    pub division_residual: f64,
}

fn check_degree(d: u32, n: u32, cap: u64) -> Result<u64> {
    if d < 2 {
        return Err(Error::Domain(format!("degree d={d} must be at least 2")));
    }
    if n == 0 {
        return Err(Error::Domain("period must be positive".into()));
    }
    let degree = checked_pow(u64::from(d), u64::from(n - 1))?;
    if degree > cap {
        return Err(Error::DegreeCap { degree, cap });
    }
    Ok(degree)
}

fn int_to_poly(p: &IntPoly, what: &'static str) -> Result<Polynomial> {
    let coeffs = p.to_f64().ok_or(Error::Overflow(what))?;
    Ok(Polynomial::from_real(&coeffs))
}

/// `Q_n(c) = p_c^n(0)` in coefficient form, degree cap [`DEFAULT_DEGREE_CAP`].
pub fn critical_orbit_poly(d: u32, n: u32) -> Result<OrbitPolynomial> {
    critical_orbit_poly_capped(d, n, DEFAULT_DEGREE_CAP)
}

pub fn critical_orbit_poly_capped(d: u32, n: u32, cap: u64) -> Result<OrbitPolynomial> {
    let degree = check_degree(d, n, cap)?;
    if degree <= INTEGER_DEGREE_LIMIT {
        let q = critical_orbit_int(d, n);
        return Ok(OrbitPolynomial {
            exact_integer: q.to_i64().is_some(),
            poly: int_to_poly(&q, "critical_orbit_poly")?,
        });
    }
    let c = Polynomial::identity();
    let mut q = c.clone();
    for _ in 1..n {
        q = &q.pow(d) + &c;
        if q.coeffs().iter().any(|a| !a.re.is_finite()) {
            return Err(Error::Overflow("critical_orbit_poly"));
        }
    }
    Ok(OrbitPolynomial {
        poly: q,
        exact_integer: false,
    })
}

/// `Π_{k|n} Q_k^{μ(n/k)}`, the centers of exact period `n`.
///
/// Floating division first; a remainder above [`DIVISION_TOL`] triggers an
/// exact integer retry.
pub fn exact_period_poly(d: u32, n: u32) -> Result<ExactPeriodPoly> {
    check_degree(d, n, DEFAULT_DEGREE_CAP)?;
    match exact_period_float(d, n) {
        Ok((poly, division_residual)) => Ok(ExactPeriodPoly {
            d,
            n,
            poly,
            division_residual,
        }),
        Err(Error::InexactDivision { .. }) | Err(Error::Overflow(_)) => {
            let poly = exact_period_integer(d, n)?;
            Ok(ExactPeriodPoly {
                d,
                n,
                poly,
                division_residual: 0.0,
            })
        }
        Err(e) => Err(e),
    }
}

fn mobius_factors(n: u32) -> Result<(Vec<u32>, Vec<u32>)> {
    let mut num = Vec::new();
    let mut den = Vec::new();
    for k in divisors(u64::from(n)) {
        match mobius(u64::from(n) / k)? {
            1 => num.push(k as u32),
            -1 => den.push(k as u32),
            _ => {}
        }
    }
    Ok((num, den))
}

fn exact_period_float(d: u32, n: u32) -> Result<(Polynomial, f64)> {
    let (num, den) = mobius_factors(n)?;
    let mut p = Polynomial::constant(Complex64::new(1.0, 0.0));
    for k in num {
        p = &p * &critical_orbit_poly(d, k)?.poly;
    }
    let mut residual: f64 = 0.0;
    for k in den {
        let q = critical_orbit_poly(d, k)?.poly;
        let (quot, rem) = p.div_rem(&q)?;
        let rel = rem.max_abs_coeff() / p.max_abs_coeff();
        if rel > DIVISION_TOL {
            return Err(Error::InexactDivision {
                remainder: rel,
                tolerance: DIVISION_TOL,
            });
        }
        residual = residual.max(rel);
        p = quot;
    }
    Ok((p, residual))
}

fn exact_period_integer(d: u32, n: u32) -> Result<Polynomial> {
    let (num, den) = mobius_factors(n)?;
    let mut p = IntPoly::from_i64(&[1]);
    for k in num {
        p = p.mul(&critical_orbit_int(d, k));
    }
    for k in den {
        p = p.div_exact_monic(&critical_orbit_int(d, k))?;
    }
    int_to_poly(&p, "exact_period_poly")
}

/// The map `f` as a polynomial in `z`.
pub fn map_polynomial(p: &ParamPoint) -> Polynomial {
    match *p {
        ParamPoint::Unicritical { d, c } => {
            &Polynomial::monomial(Complex64::new(1.0, 0.0), d as usize) + &Polynomial::constant(c)
        }
        ParamPoint::CubicModuli { c1, a } => Polynomial::new(vec![
            a * a * a,
            Complex64::new(0.0, 0.0),
            -c1 / 2.0,
            Complex64::new(1.0 / 3.0, 0.0),
        ]),
    }
}

/// `Φ*_n(z) = Π_{k|n} (f^k(z) - z)^{μ(n/k)}` for a fixed parameter.
pub fn dynatomic_in_z(p: &ParamPoint, n: u32) -> Result<Polynomial> {
    if n == 0 {
        return Err(Error::Domain("period must be positive".into()));
    }
    if n > DYNATOMIC_MAX_N {
        return Err(Error::DegreeCap {
            degree: u64::from(p.degree()).pow(n),
            cap: u64::from(p.degree()).pow(DYNATOMIC_MAX_N),
        });
    }
    // The cubic map has leading coefficient 1/3; conjugating by z = √3·u
    // makes it monic, which keeps the divisions below well conditioned.
    // Since Σ_{k|n} μ(n/k) = [n = 1] the rescaling is exact.
    let s = match p {
        ParamPoint::CubicModuli { .. } => 3f64.sqrt(),
        ParamPoint::Unicritical { .. } => 1.0,
    };
    let f = map_polynomial(p);
    let f = Polynomial::new(
        f.coeffs()
            .iter()
            .enumerate()
            .map(|(j, c)| c * s.powi(j as i32 - 1))
            .collect(),
    );
    let z = Polynomial::identity();
    let mut iterates = Vec::with_capacity(n as usize);
    let mut fk = f.clone();
    for _ in 0..n {
        iterates.push(&fk - &z);
        fk = f.compose(&fk);
    }
    let (num, den) = mobius_factors(n)?;
    let mut out = Polynomial::constant(Complex64::new(1.0, 0.0));
    for k in num {
        out = &out * &iterates[k as usize - 1];
    }
    for k in den {
        out = div_exact(&out, &iterates[k as usize - 1], DIVISION_TOL)?;
    }
    let lift = if n == 1 { s } else { 1.0 };
    Ok(Polynomial::new(
        out.coeffs()
            .iter()
            .enumerate()
            .map(|(j, c)| c * (lift / s.powi(j as i32)))
            .collect(),
    ))
}

/// Resultant as the determinant of the Sylvester matrix, rows of `pz`
/// first and coefficients in descending order, so that
/// `Res(p, q) = lc(p)^{deg q} Π_{p(r)=0} q(r)`.
pub fn resultant_oracle(pz: &Polynomial, qz: &Polynomial) -> Result<Complex64> {
    if pz.is_zero() || qz.is_zero() {
        return Err(Error::SingularLeading);
    }
    let (m, n) = (pz.degree(), qz.degree());
    let size = m + n;
    if size > RESULTANT_MAX_DEGREE {
        return Err(Error::DegreeCap {
            degree: size as u64,
            cap: RESULTANT_MAX_DEGREE as u64,
        });
    }
    if size == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let mut s = DMatrix::<Complex64>::zeros(size, size);
    for row in 0..n {
        for (i, c) in pz.coeffs().iter().rev().enumerate() {
            s[(row, row + i)] = *c;
        }
    }
    for row in 0..m {
        for (i, c) in qz.coeffs().iter().rev().enumerate() {
            s[(n + row, row + i)] = *c;
        }
    }
    Ok(s.determinant())
}

/// Number of centers of exact period `n`: `d_n / d`.
pub fn exact_center_count(d: u32, n: u32) -> Result<u64> {
    Ok(exact_period_degree(u64::from(d), u64::from(n))? / u64::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real(p: &Polynomial) -> Vec<f64> {
        p.coeffs().iter().map(|z| z.re).collect()
    }

    #[test]
    fn small_critical_orbit_polys() {
        let q = critical_orbit_poly(2, 1).unwrap();
        assert_eq!(real(&q.poly), vec![0.0, 1.0]);
        assert!(q.exact_integer);
        assert_eq!(real(&critical_orbit_poly(2, 2).unwrap().poly), vec![0.0, 1.0, 1.0]);
        assert_eq!(
            real(&critical_orbit_poly(2, 3).unwrap().poly),
            vec![0.0, 1.0, 1.0, 2.0, 1.0]
        );
    }

    #[test]
    fn degree_cap_and_overflow() {
        assert!(matches!(
            critical_orbit_poly(2, 21),
            Err(Error::DegreeCap { degree: 1048576, cap: 524288 })
        ));
        assert!(matches!(critical_orbit_poly_capped(2, 5, 8), Err(Error::DegreeCap { .. })));
        assert!(!critical_orbit_poly(2, 9).unwrap().exact_integer);
    }

    #[test]
    fn small_exact_period_polys() {
        assert_eq!(real(&exact_period_poly(2, 1).unwrap().poly), vec![0.0, 1.0]);
        assert_eq!(real(&exact_period_poly(2, 2).unwrap().poly), vec![1.0, 1.0]);
        let e3 = exact_period_poly(2, 3).unwrap();
        assert_eq!(real(&e3.poly), vec![1.0, 1.0, 2.0, 1.0]);
        assert!(e3.division_residual <= DIVISION_TOL);
        for n in 1..=10 {
            let e = exact_period_poly(2, n).unwrap();
            assert_eq!(e.poly.degree() as u64, exact_center_count(2, n).unwrap());
        }
    }

    #[test]
    fn dynatomic_small_periods() {
        let cv = c(0.3, -0.2);
        let p = ParamPoint::unicritical(2, cv).unwrap();
        let phi1 = dynatomic_in_z(&p, 1).unwrap();
        assert_eq!(phi1.coeffs(), &[cv, c(-1.0, 0.0), c(1.0, 0.0)]);
        let phi2 = dynatomic_in_z(&p, 2).unwrap();
        let expected = [cv + 1.0, c(1.0, 0.0), c(1.0, 0.0)];
        for (a, b) in phi2.coeffs().iter().zip(expected) {
            assert!((a - b).norm() < 1e-14);
        }
        assert!(dynatomic_in_z(&p, 7).is_err());
    }

    #[test]
    fn resultant_examples() {
        let cv = c(0.7, 0.1);
        let w = c(-0.2, 0.5);
        let p = Polynomial::new(vec![cv, c(-1.0, 0.0), c(1.0, 0.0)]);
        let q = Polynomial::new(vec![-w, c(2.0, 0.0)]);
        let r = resultant_oracle(&p, &q).unwrap();
        assert!((r - (4.0 * cv - 2.0 * w + w * w)).norm() < 1e-14);

        let p = Polynomial::new(vec![c(1.0, 0.0) + cv, c(1.0, 0.0), c(1.0, 0.0)]);
        let q = Polynomial::new(vec![c(0.0, 0.0), c(2.0, 0.0)]);
        let r = resultant_oracle(&p, &q).unwrap();
        assert!((r - 4.0 * (cv + 1.0)).norm() < 1e-14);

        // Res(z - a, z - b) = a - b under this layout.
        let a = c(3.0, 0.0);
        let b = c(7.0, 0.0);
        let r = resultant_oracle(&Polynomial::new(vec![-a, c(1.0, 0.0)]), &Polynomial::new(vec![-b, c(1.0, 0.0)]))
            .unwrap();
        assert!((r - (a - b)).norm() < 1e-14);

        assert!(resultant_oracle(&Polynomial::zero(), &q).is_err());
    }
}
