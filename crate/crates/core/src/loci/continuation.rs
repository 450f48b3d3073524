//! Newton continuation along a geometric schedule in `t`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// `t_{j+1} = t_j / RATIO` until 1.
pub const RATIO: f64 = 0.7;
pub const NEWTON_TOL: f64 = 1e-12;
pub const MAX_STEPS: usize = 400;
/// Starting value of the schedule.
pub const T_START: f64 = 1e-4;
const NEWTON_MAX: usize = 12;

/// `(F(x, t), ∂F/∂x)`; `None` when the evaluation breaks down.
pub(crate) type System<'a> = dyn Fn(&[Complex64], f64) -> Option<(Vec<Complex64>, DMatrix<Complex64>)> + Sync + 'a;

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Newton's method at fixed `t`. Returns the solution and `‖F‖` there.
pub(crate) fn newton(system: &System<'_>, x0: &[Complex64], t: f64) -> Option<(Vec<Complex64>, f64)> {
    let mut x = x0.to_vec();
    for _ in 0..NEWTON_MAX {
        let (f, j) = system(&x, t)?;
        let rhs = DVector::from_vec(f);
        let delta = j.lu().solve(&rhs)?;
        if delta.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return None;
        }
        for (xi, di) in x.iter_mut().zip(delta.iter()) {
            *xi -= di;
        }
        let step = delta.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if step <= NEWTON_TOL * norm(&x).max(1.0) {
            let (f, _) = system(&x, t)?;
            return Some((x, norm(&f)));
        }
    }
    None
}

/// Follows the solution from `x0` (an approximate solution at `t0`) to
/// `t = 1`. On failure returns the last `t` reached.
pub(crate) fn track(system: &System<'_>, x0: &[Complex64], t0: f64) -> Result<(Vec<Complex64>, f64), f64> {
    let (mut x, mut res) = newton(system, x0, t0).ok_or(t0)?;
    let mut t = t0;
    let mut prev: Option<(Vec<Complex64>, f64)> = None;
    let mut ratio = RATIO;
    let mut steps = 0;
    while t < 1.0 {
        steps += 1;
        if steps > MAX_STEPS {
            return Err(t);
        }
        let next = (t / ratio).min(1.0);
        // Linear predictor in log t.
        let guess: Vec<Complex64> = match &prev {
            Some((xp, tp)) => {
                let s = (next / t).ln() / (t / tp).ln();
                x.iter().zip(xp).map(|(a, b)| a + (a - b) * s).collect()
            }
            None => x.clone(),
        };
        match newton(system, &guess, next) {
            Some((xn, r)) => {
                prev = Some((std::mem::replace(&mut x, xn), t));
                res = r;
                t = next;
                ratio = (ratio * ratio).max(RATIO);
            }
            None => {
                ratio = ratio.sqrt();
                if 1.0 - ratio < 1e-9 {
                    return Err(t);
                }
            }
        }
    }
    Ok((x, res))
}
