//! Simultaneous root finding by Aberth–Ehrlich iteration.
//!
//! The iteration only needs Newton corrections `p/p'`, so polynomials that
//! are cheap to evaluate but whose coefficients are unrepresentable (the
//! critical-orbit polynomials have doubly exponential coefficients) are
//! handled through the [`RootEvaluator`] trait instead of a coefficient list.

use std::cmp::Ordering;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use super::poly::{Evaluation, Polynomial};
use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 200;

/// Fractional angular offset of the starting circle. Irrational so the
/// starting set is never symmetric under conjugation.
const ANGLE_OFFSET: f64 = 0.381_966_011_250_105_1;

/// A polynomial the root finder can work with.
pub trait RootEvaluator: Sync {
    fn degree(&self) -> usize;

    /// Value, derivative and the rounding scale of the value.
    fn evaluate(&self, z: Complex64) -> Evaluation;

    /// `p(z)/p'(z)`; implementations override this when the plain quotient
    /// can overflow far from the roots.
    fn newton_correction(&self, z: Complex64) -> Complex64 {
        let e = self.evaluate(z);
        e.value / e.derivative
    }

    /// Center and radius of a disk containing every root.
    fn root_disk(&self) -> (Complex64, f64);

    /// Starting approximations, one per root; `None` selects a circle on
    /// the boundary of [`RootEvaluator::root_disk`].
    fn initial_guesses(&self) -> Option<Vec<Complex64>> {
        None
    }
}

impl RootEvaluator for Polynomial {
    fn degree(&self) -> usize {
        Polynomial::degree(self)
    }

    fn evaluate(&self, z: Complex64) -> Evaluation {
        Polynomial::evaluate(self, z)
    }

    fn newton_correction(&self, z: Complex64) -> Complex64 {
        Polynomial::newton_correction(self, z)
    }

    fn root_disk(&self) -> (Complex64, f64) {
        (Complex64::new(0.0, 0.0), self.cauchy_bound())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    /// `|p(root)|`
    pub residuals: Vec<f64>,
    /// Rounding scale of `p` at each root; success means
    /// `residual <= tol * scale`.
    pub scales: Vec<f64>,
    pub iterations: usize,
}

impl RootSet {
    pub fn relative_residuals(&self) -> impl Iterator<Item = f64> + '_ {
        self.residuals
            .iter()
            .zip(&self.scales)
            .map(|(r, s)| if *s > 0.0 { r / s } else { *r })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct AberthOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for AberthOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

/// All roots of a coefficient polynomial.
pub fn aberth_roots(p: &Polynomial, tol: f64, max_iter: usize) -> Result<RootSet> {
    if p.is_zero() || p.degree() == 0 {
        return Err(Error::Domain("root finding needs degree at least 1".into()));
    }
    if p.coeffs().iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::Domain("non-finite coefficient".into()));
    }
    aberth_with(p, AberthOptions { tol, max_iter })
}

fn initial_guesses(center: Complex64, radius: f64, n: usize) -> Vec<Complex64> {
    let radius = if radius > 0.0 { radius } else { 1.0 };
    (0..n)
        .map(|k| {
            let angle = TAU * (k as f64 + ANGLE_OFFSET) / n as f64;
            center + Complex64::from_polar(radius, angle)
        })
        .collect()
}

/// Aberth–Ehrlich iteration for any [`RootEvaluator`], followed by a Newton
/// polish of each root. Sweeps are Jacobi-style so the result does not
/// depend on the number of worker threads.
pub fn aberth_with<E: RootEvaluator + ?Sized>(p: &E, opts: AberthOptions) -> Result<RootSet> {
    let n = p.degree();
    if n == 0 {
        return Err(Error::Domain("root finding needs degree at least 1".into()));
    }
    let mut z = match p.initial_guesses() {
        Some(g) if g.len() == n => g,
        _ => {
            let (center, radius) = p.root_disk();
            initial_guesses(center, radius, n)
        }
    };
    let mut active = vec![true; n];
    let stop_eps = 4.0 * f64::EPSILON;
    let mut iterations = 0;

    while iterations < opts.max_iter && active.iter().any(|a| *a) {
        iterations += 1;
        let zs = &z;
        let updates: Vec<Option<(Complex64, bool)>> = (0..n)
            .into_par_iter()
            .map(|i| {
                if !active[i] {
                    return None;
                }
                let zi = zs[i];
                let newton = p.newton_correction(zi);
                if !newton.re.is_finite() || !newton.im.is_finite() {
                    // Flat spot or overflow: nudge the iterate and try again.
                    return Some((zi * Complex64::new(1.0 + 1e-7, 1e-7) + 1e-12, false));
                }
                let mut sum = Complex64::new(0.0, 0.0);
                for (j, zj) in zs.iter().enumerate() {
                    if j != i {
                        sum += (zi - zj).inv();
                    }
                }
                let step = newton / (Complex64::new(1.0, 0.0) - newton * sum);
                let next = zi - step;
                // A tiny step alone is not enough: far outside the root disk
                // the corrections of steep polynomials are tiny too.
                let e = p.evaluate(next);
                let r = e.value.norm();
                let done = r.is_finite()
                    && (r <= stop_eps * e.scale
                        || (step.norm() <= stop_eps * next.norm().max(1.0) && r <= opts.tol * e.scale));
                Some((next, done))
            })
            .collect();
        for (i, u) in updates.into_iter().enumerate() {
            if let Some((next, done)) = u {
                if next.re.is_finite() && next.im.is_finite() {
                    z[i] = next;
                }
                if done {
                    active[i] = false;
                }
            }
        }
    }

    let polished: Vec<(Complex64, Evaluation)> = z.par_iter().map(|&zi| polish(p, zi)).collect();
    let mut items: Vec<(Complex64, f64, f64)> = polished
        .into_iter()
        .map(|(r, e)| (r, e.value.norm(), e.scale))
        .collect();
    items.sort_by(|a, b| compare_roots((a.0, a.1), (b.0, b.1)));

    // NaN propagates so that a non-finite residual fails the check below.
    let worst = items
        .iter()
        .map(|(_, r, s)| if *s > 0.0 { r / s } else { *r })
        .fold(0.0, |acc: f64, x| if x.is_nan() || x > acc { x } else { acc });
    if !(worst <= opts.tol) {
        return Err(Error::NoConvergence {
            iterations,
            worst_residual: worst,
        });
    }
    Ok(RootSet {
        roots: items.iter().map(|t| t.0).collect(),
        residuals: items.iter().map(|t| t.1).collect(),
        scales: items.iter().map(|t| t.2).collect(),
        iterations,
    })
}

/// Newton steps while the residual keeps decreasing.
fn polish<E: RootEvaluator + ?Sized>(p: &E, z0: Complex64) -> (Complex64, Evaluation) {
    let mut z = z0;
    let mut e = p.evaluate(z);
    for _ in 0..8 {
        if e.value.norm() == 0.0 {
            break;
        }
        let next = z - p.newton_correction(z);
        if !next.re.is_finite() || !next.im.is_finite() {
            break;
        }
        let en = p.evaluate(next);
        if en.value.norm() < e.value.norm() {
            z = next;
            e = en;
        } else {
            break;
        }
    }
    (z, e)
}

/// Lexicographic (Re, Im) order with ties broken by residual.
pub fn compare_roots(a: (Complex64, f64), b: (Complex64, f64)) -> Ordering {
    a.0.re
        .total_cmp(&b.0.re)
        .then(a.0.im.total_cmp(&b.0.im))
        .then(a.1.total_cmp(&b.1))
}
