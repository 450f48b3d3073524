//! Dense univariate polynomials with complex coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense polynomial, `coeffs[i]` is the coefficient of `z^i`.
///
/// Trailing zero coefficients are trimmed on construction so the last stored
/// coefficient is always the (nonzero) leading one. The zero polynomial has
/// no coefficients.
#[derive(Clone, PartialEq, Default)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

/// Value, derivative and a rounding-error scale `Σ|a_i||z|^i`.
#[derive(Clone, Copy, Debug)]
pub struct Evaluation {
    pub value: Complex64,
    pub derivative: Complex64,
    pub scale: f64,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&r| Complex64::new(r, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `coef * z^k`.
    pub fn monomial(coef: Complex64, k: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = coef;
        Self::new(coeffs)
    }

    /// `z`
    pub fn identity() -> Self {
        Self::from_real(&[0.0, 1.0])
    }

    /// `Π (z - r)`
    pub fn from_roots(roots: &[Complex64]) -> Self {
        roots.iter().fold(Self::constant(Complex64::new(1.0, 0.0)), |acc, &r| {
            &acc * &Self::new(vec![-r, Complex64::new(1.0, 0.0)])
        })
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or_default()
    }

    pub fn coeff(&self, i: usize) -> Complex64 {
        self.coeffs.get(i).copied().unwrap_or_default()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * i as f64)
                .collect(),
        )
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    /// Horner evaluation of value, derivative and the absolute-value scale.
    pub fn evaluate(&self, z: Complex64) -> Evaluation {
        let zero = Complex64::new(0.0, 0.0);
        let r = z.norm();
        let (mut p, mut dp, mut s) = (zero, zero, 0.0);
        for c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
            s = s * r + c.norm();
        }
        Evaluation {
            value: p,
            derivative: dp,
            scale: s,
        }
    }

    /// Newton correction `p(z)/p'(z)`, evaluated through the reversed
    /// polynomial when `|z| > 1` so large degrees do not overflow.
    pub fn newton_correction(&self, z: Complex64) -> Complex64 {
        let n = self.degree();
        if n == 0 {
            return Complex64::new(0.0, 0.0);
        }
        if z.norm() <= 1.0 {
            let e = self.evaluate(z);
            return e.value / e.derivative;
        }
        // p(z) = z^n q(1/z) with q the reversed polynomial, so
        // p'/p = n/z - q'(y)/(q(y) z^2) with y = 1/z.
        let y = z.inv();
        let zero = Complex64::new(0.0, 0.0);
        let (mut q, mut dq) = (zero, zero);
        for c in self.coeffs.iter() {
            dq = dq * y + q;
            q = q * y + c;
        }
        let log_deriv = (n as f64) * y - dq * y * y / q;
        log_deriv.inv()
    }

    /// `self(inner(z))` by Horner composition.
    pub fn compose(&self, inner: &Polynomial) -> Polynomial {
        self.coeffs.iter().rev().fold(Polynomial::zero(), |acc, c| {
            &(&acc * inner) + &Polynomial::constant(*c)
        })
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut result = Polynomial::constant(Complex64::new(1.0, 0.0));
        for _ in 0..k {
            result = &result * self;
        }
        result
    }

    /// Long division, returning `(quotient, remainder)`.
    pub fn div_rem(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        if divisor.is_zero() {
            return Err(Error::Domain("division by the zero polynomial".into()));
        }
        let m = divisor.degree();
        if self.is_zero() || self.degree() < m {
            return Ok((Polynomial::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let lead = divisor.leading();
        let qlen = self.degree() - m + 1;
        let mut quot = vec![Complex64::new(0.0, 0.0); qlen];
        for k in (0..qlen).rev() {
            let coef = rem[k + m] / lead;
            quot[k] = coef;
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= coef * dc;
            }
            rem[k + m] = Complex64::new(0.0, 0.0);
        }
        rem.truncate(m);
        Ok((Polynomial::new(quot), Polynomial::new(rem)))
    }

    /// Cauchy root bound: the unique positive root of
    /// `|a_n| x^n - Σ_{i<n} |a_i| x^i`. Every root has modulus at most this.
    pub fn cauchy_bound(&self) -> f64 {
        let n = self.degree();
        if n == 0 {
            return 0.0;
        }
        let lead = self.leading().norm();
        let logs: Vec<Option<f64>> = self.coeffs[..n]
            .iter()
            .map(|c| {
                let a = c.norm() / lead;
                (a > 0.0).then(|| a.ln())
            })
            .collect();
        if logs.iter().all(Option::is_none) {
            return 0.0;
        }
        // h(u) = log Σ a_i e^{i u} - n u is strictly decreasing in u = log x.
        let h = |u: f64| -> f64 {
            let terms: Vec<f64> = logs
                .iter()
                .enumerate()
                .filter_map(|(i, l)| l.map(|l| l + i as f64 * u))
                .collect();
            let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln() - n as f64 * u
        };
        let classical = 1.0 + logs.iter().flatten().map(|l| l.exp()).fold(0.0, f64::max);
        let (mut lo, mut hi) = (-745.0_f64, classical.ln() + 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if h(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi.exp()
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial{:?}", self.coeffs)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

/// Exact division `p / q` for polynomials known to divide up to rounding.
///
/// Fails with [`Error::InexactDivision`] when the remainder exceeds
/// `tol * max|coeff(p)|`.
pub fn div_exact(p: &Polynomial, q: &Polynomial, tol: f64) -> Result<Polynomial> {
    let (quot, rem) = p.div_rem(q)?;
    let remainder = rem.max_abs_coeff();
    let tolerance = tol * p.max_abs_coeff();
    if remainder > tolerance {
        return Err(Error::InexactDivision {
            remainder,
            tolerance,
        });
    }
    Ok(quot)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn trims_trailing_zeros() {
        let p = Polynomial::from_real(&[1.0, 2.0, 0.0, 0.0]);
        assert_eq!(p.degree(), 1);
        assert_eq!(p.leading(), c(2.0, 0.0));
        assert!(Polynomial::from_real(&[0.0, 0.0]).is_zero());
    }

    #[test]
    fn product_degree_adds() {
        let p = Polynomial::from_real(&[1.0, 2.0, 3.0]);
        let q = Polynomial::from_real(&[-1.0, 0.0, 0.0, 4.0]);
        assert_eq!((&p * &q).degree(), 5);
    }

    #[test]
    fn div_exact_examples() {
        let p = Polynomial::from_real(&[0.0, 1.0, 1.0]);
        let q = Polynomial::from_real(&[0.0, 1.0]);
        assert_eq!(div_exact(&p, &q, 1e-12).unwrap(), Polynomial::from_real(&[1.0, 1.0]));

        let q3 = Polynomial::from_real(&[0.0, 1.0, 1.0, 2.0, 1.0]);
        assert_eq!(
            div_exact(&q3, &q, 1e-12).unwrap(),
            Polynomial::from_real(&[1.0, 1.0, 2.0, 1.0])
        );

        let r = Polynomial::from_real(&[1.0, 0.0, 1.0]);
        match div_exact(&r, &q, 1e-12) {
            Err(Error::InexactDivision { remainder, .. }) => assert_eq!(remainder, 1.0),
            other => panic!("expected inexact division, got {other:?}"),
        }
    }

    #[test]
    fn evaluate_matches_derivative_poly() {
        let p = Polynomial::new(vec![c(1.0, -1.0), c(0.5, 2.0), c(-3.0, 0.0), c(0.0, 1.0)]);
        let z = c(0.3, -0.7);
        let e = p.evaluate(z);
        assert!((e.value - p.eval(z)).norm() < 1e-14);
        assert!((e.derivative - p.derivative().eval(z)).norm() < 1e-14);
    }

    #[test]
    fn newton_correction_large_argument() {
        let p = Polynomial::from_real(&[-2.0, 0.0, 0.0, 1.0]);
        let z = c(3.0, 4.0);
        let direct = p.eval(z) / p.derivative().eval(z);
        assert!((p.newton_correction(z) - direct).norm() < 1e-13 * direct.norm());
    }

    #[test]
    fn composition() {
        // (z^2 + 1) o (z + 1) = z^2 + 2z + 2
        let outer = Polynomial::from_real(&[1.0, 0.0, 1.0]);
        let inner = Polynomial::from_real(&[1.0, 1.0]);
        assert_eq!(outer.compose(&inner), Polynomial::from_real(&[2.0, 2.0, 1.0]));
    }

    #[test]
    fn cauchy_bound_encloses_roots() {
        let roots = [c(3.0, 0.0), c(-1.0, 2.0), c(0.5, -0.5)];
        let p = Polynomial::from_roots(&roots);
        let b = p.cauchy_bound();
        assert!(roots.iter().all(|r| r.norm() <= b + 1e-12));
        // z^2 - 1 has Cauchy polynomial x^2 - 1 with root exactly 1.
        assert!((Polynomial::from_real(&[-1.0, 0.0, 1.0]).cauchy_bound() - 1.0).abs() < 1e-12);
    }
}
