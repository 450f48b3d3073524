//! Implicit evaluators of `Q_n`, the exact-period quotient and `Q_n - z`.
//!
//! Values come from the recursion `Q_{k+1} = Q_k^d + c`, never from
//! coefficients. Once `|Q_k|` is large the state switches to `(1/Q_k,
//! Q_k'/Q_k)`, which keeps Newton corrections finite far outside the
//! Multibrot set. In that state the rounding scale is reported as `|value|`,
//! so a relative residual there is never small.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dynamics::{external_ray, RayAngle, RayOptions};
use crate::polycore::{divisors, mobius, Evaluation, RootEvaluator};

/// Switch to reciprocal form beyond this modulus.
const LARGE: f64 = 1e20;

#[derive(Clone, Copy, Debug)]
enum Term {
    /// `Q_k`, `Q_k'` and the running rounding bound of `Q_k`.
    Finite { q: Complex64, dq: Complex64, err: f64 },
    /// `1/Q_k` and `Q_k'/Q_k`.
    Large { inv: Complex64, ratio: Complex64 },
}

impl Term {
    fn log_derivative(&self) -> Complex64 {
        match *self {
            Term::Finite { q, dq, .. } => dq / q,
            Term::Large { ratio, .. } => ratio,
        }
    }

    /// `Q_k / Q_k'`. Taken directly in finite form: inverting `Q_k'/Q_k`
    /// overflows near the root `c = 0` shared by every `Q_k`.
    fn newton_step(&self) -> Complex64 {
        match *self {
            Term::Finite { q, dq, .. } => q / dq,
            Term::Large { ratio, .. } => ratio.inv(),
        }
    }

    fn log_value(&self) -> Complex64 {
        match *self {
            Term::Finite { q, .. } => q.ln(),
            Term::Large { inv, .. } => -inv.ln(),
        }
    }
}

/// `Q_1(c), ..., Q_n(c)`.
fn orbit_terms(d: u32, n: u32, c: Complex64) -> Vec<Term> {
    let one = Complex64::new(1.0, 0.0);
    let df = f64::from(d);
    let mut out = Vec::with_capacity(n as usize);
    let mut t = Term::Finite {
        q: c,
        dq: one,
        err: c.norm(),
    };
    out.push(t);
    for _ in 1..n {
        t = match t {
            Term::Finite { q, dq, err } => {
                if q.norm() > LARGE {
                    step_large(d, c, q.inv(), dq / q)
                } else {
                    let qd1 = q.powu(d - 1);
                    let qd = qd1 * q;
                    let aq = q.norm();
                    Term::Finite {
                        q: qd + c,
                        dq: df * qd1 * dq + one,
                        err: df * aq.powi(d as i32 - 1) * err + aq.powi(d as i32) + c.norm(),
                    }
                }
            }
            Term::Large { inv, ratio } => step_large(d, c, inv, ratio),
        };
        out.push(t);
    }
    out
}

fn step_large(d: u32, c: Complex64, inv: Complex64, ratio: Complex64) -> Term {
    let ud = inv.powu(d);
    let denom = 1.0 + c * ud;
    Term::Large {
        inv: ud / denom,
        ratio: (f64::from(d) * ratio + ud) / denom,
    }
}

/// Center and radius of a disk holding every root of `Q_n` (and of the
/// exact-period factor). The roots lie in the Multibrot set, inside
/// `|c| <= 2^{1/(d-1)}`; for `d = 2, n >= 2` they average `-1/2`.
fn multibrot_disk(d: u32, n: u32) -> (Complex64, f64) {
    if d == 2 && n >= 2 {
        (Complex64::new(-0.5, 0.0), 1.6)
    } else {
        (Complex64::new(0.0, 0.0), 2f64.powf(1.0 / f64::from(d - 1)))
    }
}

/// Points of potential `t` on the `count` external rays of angles
/// `(4k+1)/(4 count)`. `None` if any ray fails to trace.
///
/// The angle set has no conjugation symmetry: from a conjugation-symmetric
/// start, Aberth iterates of a real polynomial stay in conjugate pairs and
/// cannot separate onto distinct real roots.
pub fn equipotential_seeds(d: u32, count: usize, t: f64) -> Option<Vec<Complex64>> {
    let opts = RayOptions::default();
    let den = 4 * count as u64;
    (0..count as u64)
        .into_par_iter()
        .map(|k| {
            let angle = RayAngle::new(4 * k + 1, den).ok()?;
            external_ray(d, angle, t, &opts).ok()
        })
        .collect()
}

/// Seeds for a degree-`count` factor of `Q_n`: points where
/// `|Q_n| ≈ e^{level}`, spread by harmonic measure.
fn orbit_seeds(d: u32, n: u32, count: usize, level: f64) -> Option<Vec<Complex64>> {
    let full = (d as usize).pow(n - 1);
    equipotential_seeds(d, count, level / full as f64)
}

/// `c ↦ Q_n(c) = p_c^n(0)` for `p_c(z) = z^d + c`.
#[derive(Clone, Copy, Debug)]
pub struct CriticalOrbitEval {
    pub d: u32,
    pub n: u32,
}

impl RootEvaluator for CriticalOrbitEval {
    fn degree(&self) -> usize {
        (self.d as usize).pow(self.n - 1)
    }

    fn evaluate(&self, c: Complex64) -> Evaluation {
        match *orbit_terms(self.d, self.n, c).last().expect("n >= 1") {
            Term::Finite { q, dq, err } => Evaluation {
                value: q,
                derivative: dq,
                scale: err,
            },
            Term::Large { inv, ratio } => {
                let value = inv.inv();
                Evaluation {
                    value,
                    derivative: ratio / inv,
                    scale: value.norm(),
                }
            }
        }
    }

    fn newton_correction(&self, c: Complex64) -> Complex64 {
        orbit_terms(self.d, self.n, c).last().expect("n >= 1").newton_step()
    }

    fn root_disk(&self) -> (Complex64, f64) {
        multibrot_disk(self.d, self.n)
    }

    fn initial_guesses(&self) -> Option<Vec<Complex64>> {
        orbit_seeds(self.d, self.n, self.degree(), 1.0)
    }
}

/// `c ↦ Π_{k|n} Q_k(c)^{μ(n/k)}`, whose roots are the centers of exact
/// period `n`.
#[derive(Clone, Debug)]
pub struct ExactPeriodEval {
    pub d: u32,
    pub n: u32,
    /// `(k, μ(n/k))` for divisors with `μ ≠ 0`, `k < n`.
    lower: Vec<(u32, i8)>,
    degree: usize,
}

impl ExactPeriodEval {
    pub fn new(d: u32, n: u32) -> crate::Result<Self> {
        let degree = crate::polycore::exact_period_degree(u64::from(d), u64::from(n))? / u64::from(d);
        let mut lower = Vec::new();
        for k in divisors(u64::from(n)) {
            if k == u64::from(n) {
                continue;
            }
            let mu = mobius(u64::from(n) / k)?;
            if mu != 0 {
                lower.push((k as u32, mu));
            }
        }
        Ok(Self {
            d,
            n,
            lower,
            degree: degree as usize,
        })
    }

    fn terms(&self, c: Complex64) -> Vec<Term> {
        orbit_terms(self.d, self.n, c)
    }
}

impl RootEvaluator for ExactPeriodEval {
    fn degree(&self) -> usize {
        self.degree
    }

    fn evaluate(&self, c: Complex64) -> Evaluation {
        let terms = self.terms(c);
        let top = terms[self.n as usize - 1];
        let mut rest_log_deriv = Complex64::new(0.0, 0.0);
        let mut rest = Complex64::new(1.0, 0.0);
        let mut rest_log = Complex64::new(0.0, 0.0);
        let mut all_finite = true;
        for &(k, mu) in &self.lower {
            let t = terms[k as usize - 1];
            let m = f64::from(mu);
            rest_log_deriv += m * t.log_derivative();
            rest_log += m * t.log_value();
            match t {
                Term::Finite { q, .. } => {
                    rest *= if mu > 0 { q } else { q.inv() };
                }
                Term::Large { .. } => all_finite = false,
            }
        }
        if !all_finite {
            rest = rest_log.exp();
        }
        match top {
            Term::Finite { q, dq, err } => Evaluation {
                value: q * rest,
                derivative: rest * (dq + q * rest_log_deriv),
                scale: err * rest.norm(),
            },
            Term::Large { inv, ratio } => {
                let value = (rest_log - inv.ln()).exp();
                Evaluation {
                    value,
                    derivative: value * (ratio + rest_log_deriv),
                    scale: value.norm(),
                }
            }
        }
    }

    fn newton_correction(&self, c: Complex64) -> Complex64 {
        let terms = self.terms(c);
        let mut rest = Complex64::new(0.0, 0.0);
        for &(k, mu) in &self.lower {
            rest += f64::from(mu) * terms[k as usize - 1].log_derivative();
        }
        match terms[self.n as usize - 1] {
            Term::Finite { q, dq, .. } => q / (dq + q * rest),
            Term::Large { ratio, .. } => (ratio + rest).inv(),
        }
    }

    fn root_disk(&self) -> (Complex64, f64) {
        multibrot_disk(self.d, self.n)
    }

    fn initial_guesses(&self) -> Option<Vec<Complex64>> {
        orbit_seeds(self.d, self.n, self.degree, 1.0)
    }
}

/// `c ↦ Q_n(c) - z`, the parametric preimages of `z`.
#[derive(Clone, Copy, Debug)]
pub struct PreimageEval {
    pub d: u32,
    pub n: u32,
    pub z: Complex64,
}

impl RootEvaluator for PreimageEval {
    fn degree(&self) -> usize {
        (self.d as usize).pow(self.n - 1)
    }

    fn evaluate(&self, c: Complex64) -> Evaluation {
        match *orbit_terms(self.d, self.n, c).last().expect("n >= 1") {
            Term::Finite { q, dq, err } => Evaluation {
                value: q - self.z,
                derivative: dq,
                scale: err + self.z.norm(),
            },
            Term::Large { inv, ratio } => {
                let value = inv.inv() - self.z;
                Evaluation {
                    value,
                    derivative: ratio / inv,
                    scale: value.norm(),
                }
            }
        }
    }

    fn newton_correction(&self, c: Complex64) -> Complex64 {
        match *orbit_terms(self.d, self.n, c).last().expect("n >= 1") {
            Term::Finite { q, dq, .. } => (q - self.z) / dq,
            Term::Large { inv, ratio } => (1.0 - self.z * inv) / ratio,
        }
    }

    /// `|Q_n(c)| > |c|` once `|c| > 2`, so every root has
    /// `|c| <= max(2, |z|)`.
    fn root_disk(&self) -> (Complex64, f64) {
        if self.n == 1 {
            return (self.z, 0.5);
        }
        (Complex64::new(0.0, 0.0), self.z.norm().max(2.0))
    }

    /// For `z` outside `M_d` the roots lie on the equipotential
    /// `log|z| / d^{n-1}`.
    fn initial_guesses(&self) -> Option<Vec<Complex64>> {
        if self.n == 1 {
            return None;
        }
        orbit_seeds(self.d, self.n, self.degree(), self.z.norm().ln().max(1.0))
    }
}
