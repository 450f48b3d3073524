//! External rays of the Multibrot set `M_d`.
//!
//! The point of potential `t` and angle `θ` is the parameter `c` with
//! `Φ_M(c) = exp(t + 2πiθ)`. Since `Q_{m+1}(c) ≈ Φ_M(c)^{d^m}` outside `M_d`,
//! it is found by Newton's method on `Q_{m+1}(c) = exp(d^m (t + 2πiθ))`
//! with `m` chosen so that `d^m t ∈ [1, d)`, continuing in `t` from
//! `log 2` downwards.

use std::f64::consts::{LN_2, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Angle `num/den` in turns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RayAngle {
    pub num: u64,
    pub den: u64,
}

impl RayAngle {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Domain("ray angle denominator is zero".into()));
        }
        Ok(Self { num: num % den, den })
    }

    /// Fractional part of `d^m θ`, computed exactly.
    fn multiplied(&self, d: u32, m: u32) -> f64 {
        let den = u128::from(self.den);
        let mut acc = u128::from(self.num) % den;
        let mut base = u128::from(d) % den;
        let mut e = m;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % den;
            }
            base = base * base % den;
            e >>= 1;
        }
        acc as f64 / den as f64
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RayOptions {
    /// Potential steps per halving of `t`.
    pub substeps: u32,
    /// How many times a failing step may be split in two.
    pub max_refinements: u32,
    pub newton_max: usize,
}

impl Default for RayOptions {
    fn default() -> Self {
        Self {
            substeps: 4,
            max_refinements: 6,
            newton_max: 24,
        }
    }
}

/// `(Q_{m+1}(c), Q_{m+1}'(c))`
fn orbit_with_derivative(d: u32, m: u32, c: Complex64) -> (Complex64, Complex64) {
    let mut q = c;
    let mut dq = Complex64::new(1.0, 0.0);
    for _ in 0..m {
        let qd1 = q.powu(d - 1);
        dq = f64::from(d) * qd1 * dq + 1.0;
        q = qd1 * q + c;
    }
    (q, dq)
}

fn level(d: u32, t: f64) -> u32 {
    let m = (-t.ln() / f64::from(d).ln()).ceil();
    if m > 0.0 {
        m as u32
    } else {
        0
    }
}

/// Newton solve for the ray point at potential `t` starting from `c0`.
fn solve_at(d: u32, angle: RayAngle, t: f64, c0: Complex64, opts: &RayOptions) -> Option<Complex64> {
    let m = level(d, t);
    let scale = f64::from(d).powi(m as i32);
    let target = Complex64::from_polar((scale * t).exp(), TAU * angle.multiplied(d, m));
    let mut c = c0;
    for _ in 0..opts.newton_max {
        let (q, dq) = orbit_with_derivative(d, m, c);
        let step = (q - target) / dq;
        if !step.re.is_finite() || !step.im.is_finite() {
            return None;
        }
        c -= step;
        if step.norm() <= 1e-15 * c.norm().max(1.0) {
            return Some(c);
        }
    }
    let (q, _) = orbit_with_derivative(d, m, c);
    ((q - target).norm() <= 1e-9 * target.norm()).then_some(c)
}

/// Point of potential `t_min` on the external ray of angle `angle`.
pub fn external_ray(d: u32, angle: RayAngle, t_min: f64, opts: &RayOptions) -> Result<Complex64> {
    if d < 2 {
        return Err(Error::Domain(format!("degree d={d} must be at least 2")));
    }
    if !(t_min > 0.0) {
        return Err(Error::Domain(format!("potential t_min={t_min} must be positive")));
    }
    let mut t = LN_2.max(t_min);
    let phase = TAU * angle.num as f64 / angle.den as f64;
    let mut c = solve_at(d, angle, t, Complex64::from_polar(t.exp(), phase), opts).ok_or(
        Error::NoConvergence {
            iterations: opts.newton_max,
            worst_residual: f64::NAN,
        },
    )?;
    let ratio = 0.5f64.powf(1.0 / f64::from(opts.substeps.max(1)));
    while t > t_min {
        let next = (t * ratio).max(t_min);
        c = descend(d, angle, t, next, c, opts, 0)?;
        t = next;
    }
    Ok(c)
}

fn descend(
    d: u32,
    angle: RayAngle,
    t: f64,
    next: f64,
    c: Complex64,
    opts: &RayOptions,
    depth: u32,
) -> Result<Complex64> {
    if let Some(found) = solve_at(d, angle, next, c, opts) {
        return Ok(found);
    }
    if depth >= opts.max_refinements {
        return Err(Error::NoConvergence {
            iterations: opts.newton_max,
            worst_residual: f64::NAN,
        });
    }
    let mid = (t * next).sqrt();
    let c_mid = descend(d, angle, t, mid, c, opts, depth + 1)?;
    descend(d, angle, mid, next, c_mid, opts, depth + 1)
}
