//! Total-degree homotopy for two polynomial equations in two unknowns.
//!
//! Paths of `γ G(x) + e^u F(x) = 0` are tracked from the roots of
//! `G = (x0^{D0} - 1, x1^{D1} - 1)` at `u = -∞` to the roots of `F` at
//! `u = +∞`. This is the usual `(1 - t) γ G + t F` with `u = log(t/(1-t))`;
//! the logarithmic parameter absorbs the enormous size of the target away
//! from its roots, which would otherwise pin the paths to the start system
//! until `t` is within rounding of 1. For a generic complex `γ` no path
//! meets a singular point at finite `u`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

type C = Complex64;
/// Value and Jacobian (rows are equations) of the target system, each row
/// `i` to be multiplied by `e^{scale_i}`.
pub(crate) type Target<'a> = dyn Fn([C; 2]) -> Option<Scaled2> + Sync + 'a;
pub(crate) type Scaled2 = ([C; 2], [[C; 2]; 2], [f64; 2]);

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomotopyOptions {
    /// Generic constant of the gamma trick.
    pub gamma: Complex64,
    /// Largest step in `u`.
    pub max_step: f64,
    /// A path fails when its step in `u` drops below this.
    pub min_step: f64,
    pub max_steps: usize,
    /// Relative Newton step accepted by the corrector.
    pub corrector_tol: f64,
    /// Relative Newton step at which the final polish stops.
    pub polish_tol: f64,
    /// Endpoints closer than this (relative) are the same root.
    pub collision_radius: f64,
    /// Further values of `γ` to try while roots are still missing.
    pub max_retracks: u32,
}

impl Default for HomotopyOptions {
    fn default() -> Self {
        Self {
            gamma: Complex64::from_polar(1.0, 2.3179),
            max_step: 3.0,
            min_step: 1e-7,
            max_steps: 20_000,
            corrector_tol: 1e-9,
            polish_tol: 1e-14,
            collision_radius: 1e-8,
            max_retracks: 2,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomotopyReport {
    pub paths: usize,
    /// Paths that reached the end and polished to a root.
    pub converged: usize,
    /// Paths tracked again with smaller steps after landing on the same
    /// root as another path.
    pub retracked: usize,
    pub failed: usize,
    pub distinct_roots: usize,
}

fn solve2(j: &[[C; 2]; 2], r: [C; 2]) -> Option<[C; 2]> {
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let x = [(r[0] * j[1][1] - r[1] * j[0][1]) / det, (j[0][0] * r[1] - j[1][0] * r[0]) / det];
    x.iter().all(|v| v.re.is_finite() && v.im.is_finite()).then_some(x)
}

fn norm2(v: [C; 2]) -> f64 {
    (v[0].norm_sqr() + v[1].norm_sqr()).sqrt()
}

struct Tracker<'a> {
    target: &'a Target<'a>,
    degrees: [u32; 2],
    opts: HomotopyOptions,
}

impl Tracker<'_> {
    /// `x_i^{D_i} - 1` and its derivative as mantissas with log scales, so
    /// that paths wandering far out stay representable.
    fn start_system(&self, x: [C; 2]) -> ([C; 2], [C; 2], [f64; 2]) {
        let mut g = [C::default(); 2];
        let mut dg = [C::default(); 2];
        let mut scale = [0.0; 2];
        for i in 0..2 {
            let d = self.degrees[i];
            let log_size = f64::from(d) * x[i].norm().ln();
            if log_size < 300.0 {
                g[i] = x[i].powu(d) - 1.0;
                dg[i] = f64::from(d) * x[i].powu(d - 1);
            } else {
                g[i] = C::from_polar(1.0, f64::from(d) * x[i].arg());
                dg[i] = f64::from(d) * g[i] / x[i];
                scale[i] = log_size;
            }
        }
        (g, dg, scale)
    }

    /// `(H, H_x, H_u)` for `γ G + e^u F`, each row divided by its larger
    /// term so that nothing overflows.
    fn eval(&self, x: [C; 2], u: f64) -> Option<([C; 2], [[C; 2]; 2], [C; 2])> {
        let (f, jf, fscale) = (self.target)(x)?;
        let (g, dg, gscale) = self.start_system(x);
        let gamma = self.opts.gamma;
        let mut h = [C::default(); 2];
        let mut hx = [[C::default(); 2]; 2];
        let mut hu = [C::default(); 2];
        for i in 0..2 {
            let top = gscale[i].max(fscale[i] + u);
            let wg = (gscale[i] - top).exp();
            let wf = (fscale[i] + u - top).exp();
            h[i] = gamma * g[i] * wg + f[i] * wf;
            hu[i] = f[i] * wf;
            for k in 0..2 {
                hx[i][k] = jf[i][k] * wf;
            }
            hx[i][i] += gamma * dg[i] * wg;
        }
        let ok = h.iter().chain(&hu).chain(hx.iter().flatten()).all(|v| v.re.is_finite() && v.im.is_finite());
        ok.then_some((h, hx, hu))
    }

    fn velocity(&self, x: [C; 2], u: f64) -> Option<[C; 2]> {
        let (_, hx, hu) = self.eval(x, u)?;
        let v = solve2(&hx, hu)?;
        Some([-v[0], -v[1]])
    }

    fn predict(&self, x: [C; 2], u: f64, h: f64) -> Option<[C; 2]> {
        let add = |x: [C; 2], k: [C; 2], s: f64| [x[0] + k[0] * s, x[1] + k[1] * s];
        let k1 = self.velocity(x, u)?;
        let k2 = self.velocity(add(x, k1, h / 2.0), u + h / 2.0)?;
        let k3 = self.velocity(add(x, k2, h / 2.0), u + h / 2.0)?;
        let k4 = self.velocity(add(x, k3, h), u + h)?;
        Some([
            x[0] + (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]) * (h / 6.0),
            x[1] + (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]) * (h / 6.0),
        ])
    }

    /// Newton at fixed `u`; at most three steps, each smaller than the last.
    fn correct(&self, mut x: [C; 2], u: f64, max_iter: usize) -> Option<[C; 2]> {
        let mut last = f64::INFINITY;
        for _ in 0..max_iter {
            let (h, hx, _) = self.eval(x, u)?;
            let dx = solve2(&hx, h)?;
            x = [x[0] - dx[0], x[1] - dx[1]];
            let step = norm2(dx);
            let size = norm2(x).max(1.0);
            if step <= self.opts.corrector_tol * size {
                return Some(x);
            }
            if step > 0.5 * last || step > 0.1 * size {
                return None;
            }
            last = step;
        }
        None
    }

    /// First `u` at which the target is negligible next to the start system
    /// near `start`.
    fn initial_u(&self, start: [C; 2]) -> Option<f64> {
        let (f, _, fscale) = (self.target)(start)?;
        let (_, dg, _) = self.start_system(start);
        let log_f = (f[0].norm().ln() + fscale[0]).max(f[1].norm().ln() + fscale[1]);
        let log_g = dg[0].norm().min(dg[1].norm()).ln();
        let u = (1e-10f64).ln() + log_g - log_f;
        u.is_finite().then_some(u.min(-1.0))
    }

    fn track(&self, start: [C; 2], max_step: f64) -> Option<[C; 2]> {
        let mut u = self.initial_u(start)?;
        let mut x = self.correct(start, u, 6)?;
        let mut h = max_step / 4.0;
        let mut successes = 0;
        for _ in 0..self.opts.max_steps {
            match self.predict(x, u, h).and_then(|p| self.correct(p, u + h, 3)) {
                Some(y) => {
                    let moved = norm2([y[0] - x[0], y[1] - x[1]]);
                    x = y;
                    u += h;
                    // The tail converges like e^{-u}; stop once it has.
                    if u > 0.0 && moved <= 1e-12 * h * norm2(x).max(1.0) {
                        return Some(x);
                    }
                    successes += 1;
                    if successes >= 3 {
                        h = (h * 2.0).min(max_step);
                        successes = 0;
                    }
                }
                None => {
                    h /= 2.0;
                    successes = 0;
                    if h < self.opts.min_step {
                        return None;
                    }
                }
            }
        }
        None
    }

    /// Newton on the target itself. Returns the root and the size of the
    /// last Newton step.
    fn polish(&self, mut x: [C; 2]) -> Option<([C; 2], f64)> {
        let mut last = f64::INFINITY;
        for _ in 0..30 {
            // Row scales cancel in the Newton step.
            let (f, jf, _) = (self.target)(x)?;
            let dx = solve2(&jf, f)?;
            x = [x[0] - dx[0], x[1] - dx[1]];
            let step = norm2(dx);
            let size = norm2(x).max(1.0);
            if step <= self.opts.polish_tol * size || (step >= last && step <= 1e-10 * size) {
                return Some((x, step));
            }
            last = step;
        }
        None
    }
}

/// Every isolated root of `target`, whose equations have total degrees
/// `degrees`, with its final Newton step as residual.
///
/// The homotopy runs in `y = x / radii`; roots are expected inside the unit
/// polydisk there. A path can stall where it passes numerically close to a
/// singular point. If fewer than `expected` roots are found, all paths are
/// tracked again with another `γ`, which moves such points, and the root
/// sets are merged. Up to `opts.max_retracks` further values are tried.
pub(crate) fn solve_total_degree(
    target: &Target<'_>,
    degrees: [u32; 2],
    radii: [f64; 2],
    expected: usize,
    opts: &HomotopyOptions,
) -> Result<(Vec<([C; 2], f64)>, HomotopyReport)> {
    if degrees.contains(&0) {
        return Err(Error::Domain("homotopy needs positive degrees".into()));
    }
    if !radii.iter().all(|r| r.is_finite() && *r > 0.0) {
        return Err(Error::Domain("homotopy radii must be positive".into()));
    }
    let scaled = |y: [C; 2]| {
        let (f, j, scale) = target([y[0] * radii[0], y[1] * radii[1]])?;
        Some((
            f,
            [[j[0][0] * radii[0], j[0][1] * radii[1]], [j[1][0] * radii[0], j[1][1] * radii[1]]],
            scale,
        ))
    };
    let starts: Vec<[C; 2]> = (0..degrees[0])
        .flat_map(|i| {
            (0..degrees[1]).map(move |j| {
                [
                    Complex64::from_polar(1.0, TAU * f64::from(i) / f64::from(degrees[0])),
                    Complex64::from_polar(1.0, TAU * f64::from(j) / f64::from(degrees[1])),
                ]
            })
        })
        .collect();
    let mut report = HomotopyReport::default();
    let mut found: Vec<([C; 2], f64)> = Vec::new();
    for attempt in 0..=opts.max_retracks {
        let tracker = Tracker {
            target: &scaled,
            degrees,
            opts: HomotopyOptions {
                gamma: opts.gamma * Complex64::from_polar(1.0, 1.1 * f64::from(attempt)),
                ..*opts
            },
        };
        let run = |idx: &[usize], max_step: f64| -> Vec<Option<([C; 2], f64)>> {
            idx.par_iter()
                .map(|&i| tracker.track(starts[i], max_step).and_then(|x| tracker.polish(x)))
                .collect()
        };
        let all: Vec<usize> = (0..starts.len()).collect();
        let mut ends = run(&all, opts.max_step);
        report.paths += starts.len();
        // Two paths ending on one root means one of them jumped; track the
        // pair again with smaller steps before trying another γ.
        let mut step = opts.max_step;
        for _ in 0..3 {
            let redo = colliding(&ends, opts.collision_radius);
            if redo.is_empty() {
                break;
            }
            step /= 4.0;
            report.retracked += redo.len();
            for (i, e) in redo.iter().zip(run(&redo, step)) {
                ends[*i] = e;
            }
        }
        report.failed += ends.iter().filter(|e| e.is_none()).count();
        report.converged += ends.iter().filter(|e| e.is_some()).count();
        found.extend(ends.into_iter().flatten());
        found = distinct(found, opts.collision_radius);
        if found.len() >= expected {
            break;
        }
    }
    report.distinct_roots = found.len();
    let roots = found
        .into_iter()
        .map(|(y, r)| ([y[0] * radii[0], y[1] * radii[1]], r * radii[0].max(radii[1])))
        .collect();
    Ok((roots, report))
}

/// Indices of paths whose endpoints coincide with another path's.
fn colliding(ends: &[Option<([C; 2], f64)>], radius: f64) -> Vec<usize> {
    let mut order: Vec<(usize, [C; 2])> = ends.iter().enumerate().filter_map(|(i, e)| e.map(|e| (i, e.0))).collect();
    order.sort_by(|a, b| a.1[0].re.total_cmp(&b.1[0].re));
    let mut hit = vec![false; ends.len()];
    for (pos, &(i, xi)) in order.iter().enumerate() {
        let tol = radius * norm2(xi).max(1.0);
        for &(j, xj) in &order[pos + 1..] {
            if xj[0].re - xi[0].re > tol {
                break;
            }
            if norm2([xi[0] - xj[0], xi[1] - xj[1]]) <= tol {
                hit[i] = true;
                hit[j] = true;
            }
        }
    }
    (0..ends.len()).filter(|&i| hit[i]).collect()
}

/// Sorted roots with near-duplicates (relative `radius`) removed, keeping
/// the smaller residual.
fn distinct(mut roots: Vec<([C; 2], f64)>, radius: f64) -> Vec<([C; 2], f64)> {
    roots.sort_by(|a, b| {
        a.0[0]
            .re
            .total_cmp(&b.0[0].re)
            .then(a.0[0].im.total_cmp(&b.0[0].im))
            .then(a.0[1].re.total_cmp(&b.0[1].re))
            .then(a.0[1].im.total_cmp(&b.0[1].im))
    });
    let mut kept: Vec<([C; 2], f64)> = Vec::with_capacity(roots.len());
    for r in roots {
        let tol = radius * norm2(r.0).max(1.0);
        let mut duplicate = false;
        for q in kept.iter_mut().rev() {
            if r.0[0].re - q.0[0].re > tol {
                break;
            }
            if norm2([q.0[0] - r.0[0], q.0[1] - r.0[1]]) <= tol {
                q.1 = q.1.min(r.1);
                duplicate = true;
                break;
            }
        }
        if !duplicate {
            kept.push(r);
        }
    }
    kept
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn finds_all_roots_of_a_small_system() {
        // x^2 + y^2 - 5 = 0, x y - 2 = 0: roots (±1, ±2), (±2, ±1) with equal signs.
        let f = |x: [C; 2]| {
            Some((
                [x[0] * x[0] + x[1] * x[1] - 5.0, x[0] * x[1] - 2.0],
                [[2.0 * x[0], 2.0 * x[1]], [x[1], x[0]]],
                [0.0, 0.0],
            ))
        };
        let (roots, report) = solve_total_degree(&f, [2, 2], [3.0, 3.0], 4, &HomotopyOptions::default()).unwrap();
        assert_eq!(report.distinct_roots, 4);
                for want in [[c(-2.0, 0.0), c(-1.0, 0.0)], [c(-1.0, 0.0), c(-2.0, 0.0)], [c(1.0, 0.0), c(2.0, 0.0)], [c(2.0, 0.0), c(1.0, 0.0)]] {
            assert!(roots.iter().any(|r| norm2([r.0[0] - want[0], r.0[1] - want[1]]) < 1e-12));
        }
    }
}
