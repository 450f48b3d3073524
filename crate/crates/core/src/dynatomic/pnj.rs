//! The cubic-family products `P_{n,j} = Π_{k|n} (P^k(c_j) - c_j)^{μ(n/k)}`,
//! evaluated from the critical orbit rather than expanded.

use num_complex::Complex64;

use crate::dynamics::ParamPoint;
use crate::error::{Error, Result};
use crate::polycore::{divisors, mobius};

/// Value and parameter gradient of `P_{n,j}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PnjValue {
    pub value: Complex64,
    pub gradient: [Complex64; 2],
}

/// Parameter coordinates for the cubic family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CubicChart {
    /// `(c1, a)`, the family as written.
    C1A,
    /// `(c1, b)` with `b = a^3`; the family is polynomial in `b`.
    C1B,
}

/// `P_{n,j}(c1, a)` with its gradient in `(c1, a)`.
pub fn pnj_value(p: &ParamPoint, n: u32, j: usize) -> Result<PnjValue> {
    let ParamPoint::CubicModuli { c1, a } = *p else {
        return Err(Error::Domain("pnj_value needs a CubicModuli parameter".into()));
    };
    pnj_chart(c1, a, n, j, CubicChart::C1A)
}

/// `P_{n,j}` in either chart. In [`CubicChart::C1B`] the second coordinate
/// is `b` and the gradient is taken in `(c1, b)`.
pub fn pnj_chart(c1: Complex64, second: Complex64, n: u32, j: usize, chart: CubicChart) -> Result<PnjValue> {
    let (v, scale) = pnj_scaled(c1, second, n, j, chart)?;
    let factor = scale.exp();
    let value = v.value * factor;
    let gradient = [v.gradient[0] * factor, v.gradient[1] * factor];
    if !(value.norm().is_finite() && gradient.iter().all(|g| g.norm().is_finite())) {
        return Err(Error::Overflow("pnj_value"));
    }
    Ok(PnjValue { value, gradient })
}

/// Orbit points beyond this radius are carried as logarithms.
const LOG_SWITCH: f64 = 1e20;
/// Products are renormalized when their mantissa exceeds this.
const RENORMALIZE: f64 = 1e100;

/// Running product `m · e^L` with gradient `dm · e^L`.
struct Scaled {
    m: Complex64,
    dm: [Complex64; 2],
    log: f64,
}

impl Scaled {
    fn one() -> Self {
        Scaled {
            m: Complex64::new(1.0, 0.0),
            dm: [Complex64::new(0.0, 0.0); 2],
            log: 0.0,
        }
    }

    fn mul(&mut self, mut f: Complex64, mut df: [Complex64; 2]) {
        let size = f.norm();
        if size > 1.0 {
            f /= size;
            df = [df[0] / size, df[1] / size];
            self.log += size.ln();
        }
        for i in 0..2 {
            self.dm[i] = self.dm[i] * f + self.m * df[i];
        }
        self.m *= f;
        let size = self.m.norm();
        if size > RENORMALIZE {
            self.m /= size;
            self.dm = [self.dm[0] / size, self.dm[1] / size];
            self.log += size.ln();
        }
    }

    /// Multiplies by `e^lf` where `dlf` is the gradient of `lf`.
    fn mul_log(&mut self, lf: Complex64, dlf: [Complex64; 2]) {
        let phase = Complex64::from_polar(1.0, lf.im);
        for i in 0..2 {
            self.dm[i] = (self.dm[i] + self.m * dlf[i]) * phase;
        }
        self.m *= phase;
        self.log += lf.re;
    }
}

/// `P_{n,j}` as `value · e^scale`, with the gradient carrying the same
/// factor. Escaping orbits are followed in logarithmic form, so the result
/// stays representable far outside the connectedness locus.
pub fn pnj_scaled(c1: Complex64, second: Complex64, n: u32, j: usize, chart: CubicChart) -> Result<(PnjValue, f64)> {
    if n == 0 {
        return Err(Error::Domain("period must be positive".into()));
    }
    if j > 1 {
        return Err(Error::Domain(format!("critical index {j} invalid for the cubic family")));
    }
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let (b, db) = match chart {
        CubicChart::C1A => (second * second * second, 3.0 * second * second),
        CubicChart::C1B => (second, one),
    };
    let (cj, dcj) = if j == 0 { (zero, [zero, zero]) } else { (c1, [one, zero]) };

    enum Diff {
        Plain(Complex64, [Complex64; 2]),
        /// `log(P^k(c_j) - c_j)` and its gradient.
        Log(Complex64, [Complex64; 2]),
    }
    // Orbit differences P^k(c_j) - c_j and their gradients for k = 1..n.
    let mut z = cj;
    let mut dz = dcj;
    let mut log: Option<(Complex64, [Complex64; 2])> = None;
    let mut diffs = Vec::with_capacity(n as usize);
    for _ in 0..n {
        if let Some((lz, dlz)) = log {
            // P(z) = z^3/3 (1 + O(1/z)) once |z| is huge.
            let next = (3.0 * lz - 3f64.ln(), [3.0 * dlz[0], 3.0 * dlz[1]]);
            log = Some(next);
            diffs.push(Diff::Log(next.0, next.1));
            continue;
        }
        let fp = z * (z - c1);
        let z2 = z * z;
        dz = [fp * dz[0] - z2 / 2.0, fp * dz[1] + db];
        z = z2 * z / 3.0 - c1 * z2 / 2.0 + b;
        if !(z.re.is_finite() && z.im.is_finite()) || !dz.iter().all(|v| v.norm().is_finite()) {
            return Err(Error::Overflow("pnj_value"));
        }
        if z.norm() > LOG_SWITCH {
            let next = (z.ln(), [dz[0] / z, dz[1] / z]);
            log = Some(next);
            diffs.push(Diff::Log(next.0, next.1));
        } else {
            diffs.push(Diff::Plain(z - cj, [dz[0] - dcj[0], dz[1] - dcj[1]]));
        }
    }

    let mut num = Scaled::one();
    let mut den = Scaled::one();
    for k in divisors(u64::from(n)) {
        let mu = mobius(u64::from(n) / k)?;
        let target = match mu {
            1 => &mut num,
            -1 => &mut den,
            _ => continue,
        };
        match diffs[k as usize - 1] {
            Diff::Plain(f, df) => {
                if mu == -1 && f == zero {
                    return Err(Error::LowerPeriodDegeneracy { k: k as u32 });
                }
                target.mul(f, df);
            }
            Diff::Log(lf, dlf) => target.mul_log(lf, dlf),
        }
    }
    let value = num.m / den.m;
    let gradient = [(num.dm[0] - value * den.dm[0]) / den.m, (num.dm[1] - value * den.dm[1]) / den.m];
    Ok((PnjValue { value, gradient }, num.log - den.log))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hand_values() {
        let p = ParamPoint::cubic(c(1.0, 0.0), c(0.0, 0.0));
        assert_eq!(pnj_value(&p, 1, 0).unwrap().value, c(0.0, 0.0));

        let p = ParamPoint::cubic(c(0.0, 0.0), c(1.0, 0.0));
        assert!((pnj_value(&p, 2, 0).unwrap().value - c(4.0 / 3.0, 0.0)).norm() < 1e-15);
        assert_eq!(pnj_value(&p, 1, 0).unwrap().value, c(1.0, 0.0));
    }

    #[test]
    fn degenerate_denominator_names_divisor() {
        // a = 0 fixes c0 = 0, so the k = 1 factor of P_{2,0} vanishes.
        let p = ParamPoint::cubic(c(0.4, 0.0), c(0.0, 0.0));
        assert_eq!(pnj_value(&p, 2, 0), Err(Error::LowerPeriodDegeneracy { k: 1 }));
    }

    #[test]
    fn charts_agree() {
        let (c1, a) = (c(0.3, -0.7), c(0.5, 0.2));
        for j in 0..2 {
            let va = pnj_chart(c1, a, 4, j, CubicChart::C1A).unwrap();
            let vb = pnj_chart(c1, a * a * a, 4, j, CubicChart::C1B).unwrap();
            assert!((va.value - vb.value).norm() < 1e-13 * va.value.norm());
            let chain = vb.gradient[1] * 3.0 * a * a;
            assert!((va.gradient[1] - chain).norm() < 1e-12 * chain.norm());
        }
    }

    #[test]
    fn scaled_form_survives_escape() {
        // Far outside the connectedness locus P^6(0) is beyond f64 range.
        let (c1, b) = (c(3.0, 1.0), c(40.0, -20.0));
        assert!(pnj_chart(c1, b, 6, 0, CubicChart::C1B).is_err());
        let (v, scale) = pnj_scaled(c1, b, 6, 0, CubicChart::C1B).unwrap();
        assert!(scale > 700.0 && v.value.norm().is_finite());
        // Log-derivative agrees with a finite difference of log P_{6,0}.
        let h = 1e-6;
        let logp = |b: Complex64| {
            let (v, s) = pnj_scaled(c1, b, 6, 0, CubicChart::C1B).unwrap();
            v.value.ln() + s
        };
        let fd = (logp(b + h) - logp(b - h)) / (2.0 * h);
        let analytic = v.gradient[1] / v.value;
        assert!((fd - analytic).norm() < 1e-6 * analytic.norm());
        // Inside the range the two forms agree.
        let (c1, b) = (c(0.3, -0.2), c(0.4, 0.1));
        let (v, scale) = pnj_scaled(c1, b, 6, 1, CubicChart::C1B).unwrap();
        let plain = pnj_chart(c1, b, 6, 1, CubicChart::C1B).unwrap();
        assert!((v.value * scale.exp() - plain.value).norm() < 1e-12 * plain.value.norm());
    }

    #[test]
    fn rejects_unicritical() {
        let p = ParamPoint::unicritical(3, c(0.0, 0.0)).unwrap();
        assert!(pnj_value(&p, 2, 0).is_err());
    }
}
