//! Exact integer polynomials, used where floating coefficients lose the
//! information: exact Möbius quotients and integer resultants.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Integer polynomial, `coeffs[i]` multiplies `x^i`, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn mul(&self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::new(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn add(&self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).cloned().unwrap_or_default();
                    let b = rhs.coeffs.get(i).cloned().unwrap_or_default();
                    a + b
                })
                .collect(),
        )
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Exact division by a monic polynomial; errors if the remainder is
    /// nonzero.
    pub fn div_exact_monic(&self, divisor: &IntPoly) -> Result<IntPoly> {
        let m = divisor.degree();
        if divisor.is_zero() || !divisor.coeffs[m].is_one() {
            return Err(Error::Domain("divisor must be monic".into()));
        }
        if self.degree() < m {
            return Err(Error::Domain("dividend degree below divisor degree".into()));
        }
        let mut rem = self.coeffs.clone();
        let qlen = self.degree() - m + 1;
        let mut quot = vec![BigInt::zero(); qlen];
        for k in (0..qlen).rev() {
            let coef = rem[k + m].clone();
            if !coef.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &coef * dc;
                }
            }
            quot[k] = coef;
        }
        let nonzero = rem[..m].iter().filter(|c| !c.is_zero()).count();
        if nonzero > 0 {
            let worst = rem[..m]
                .iter()
                .map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY))
                .fold(0.0, f64::max);
            return Err(Error::InexactDivision {
                remainder: worst,
                tolerance: 0.0,
            });
        }
        Ok(IntPoly::new(quot))
    }

    /// Coefficients as `i64` when all of them fit.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(ToPrimitive::to_i64).collect()
    }

    /// Coefficients as `f64`; `None` if any is out of range.
    pub fn to_f64(&self) -> Option<Vec<f64>> {
        self.coeffs
            .iter()
            .map(|c| c.to_f64().filter(|v| v.is_finite()))
            .collect()
    }
}

/// Resultant of two integer polynomials as the determinant of their
/// Sylvester matrix (rows of `p` first, coefficients in descending order),
/// computed with fraction-free Bareiss elimination.
pub fn int_resultant(p: &IntPoly, q: &IntPoly) -> Result<BigInt> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::SingularLeading);
    }
    let (m, n) = (p.degree(), q.degree());
    let size = m + n;
    if size == 0 {
        return Ok(BigInt::one());
    }
    let mut a = vec![vec![BigInt::zero(); size]; size];
    for row in 0..n {
        for (i, c) in p.coeffs.iter().rev().enumerate() {
            a[row][row + i] = c.clone();
        }
    }
    for row in 0..m {
        for (i, c) in q.coeffs.iter().rev().enumerate() {
            a[n + row][row + i] = c.clone();
        }
    }
    Ok(bareiss_det(a))
}

fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// `Q_n(c) = p_c^n(0)` for `p_c(z) = z^d + c`, over the integers.
pub fn critical_orbit_int(d: u32, n: u32) -> IntPoly {
    let c = IntPoly::from_i64(&[0, 1]);
    let mut q = c.clone();
    for _ in 1..n {
        let mut pw = q.clone();
        for _ in 1..d {
            pw = pw.mul(&q);
        }
        q = pw.add(&c);
    }
    q
}
