//! Intersections of center and multiplier loci in the cubic family
//! `P(z) = z^3/3 - c1 z^2/2 + a^3`.

use std::f64::consts::{SQRT_2, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::continuation::{track, System, T_START};
use super::homotopy::{solve_total_degree, HomotopyOptions, HomotopyReport, Target};
use super::jets::{cycle_jet, CubicB};
use super::multiplier::CONTINUATION_DEDUP_RADIUS;
use super::{assemble, dedup_sorted, LocusMethod, LocusResult, DEDUP_RADIUS};
use crate::dynamics::ParamPoint;
use crate::dynatomic::{pnj_chart, pnj_scaled, pnj_value, CubicChart};
use crate::error::{Error, Result};
use crate::polycore::exact_period_degree;

type C = Complex64;

/// Radius of a ball in `(c1, a)` containing the connectedness locus.
pub const CUBIC_SEED_RADIUS: f64 = 16.0 * SQRT_2;

/// Polydisk in `(c1, b)` containing the roots of every center system.
const HOMOTOPY_RADII: [f64; 2] = [4.0, 8.0];

/// Accepted forward-error estimate (last Newton step) for multistart roots.
const NEWTON_TOL: f64 = 1e-10;
const NEWTON_MAX: usize = 80;
/// `σ_min < TRANSVERSALITY_TOL · σ_max` is reported as a violation.
const TRANSVERSALITY_TOL: f64 = 1e-10;

/// Seeds for the multistart solver: a regular grid on `[-r, r]^4 ⊂ R^4`
/// restricted to the ball of radius `r`, refined by doubling the number of
/// points per axis until the expected count is found.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeedGrid {
    pub radius: f64,
    pub points_per_axis: usize,
    pub max_doublings: u32,
}

impl Default for SeedGrid {
    fn default() -> Self {
        Self {
            radius: CUBIC_SEED_RADIUS,
            points_per_axis: 8,
            max_doublings: 3,
        }
    }
}

impl SeedGrid {
    fn seeds(&self, per_axis: usize) -> Vec<[C; 2]> {
        let r = self.radius;
        let coord = |i: usize| -r + 2.0 * r * (i as f64 + 0.5) / per_axis as f64;
        let mut out = Vec::new();
        for i in 0..per_axis {
            for j in 0..per_axis {
                for k in 0..per_axis {
                    for l in 0..per_axis {
                        let x = [C::new(coord(i), coord(j)), C::new(coord(k), coord(l))];
                        if x[0].norm_sqr() + x[1].norm_sqr() <= r * r {
                            out.push(x);
                        }
                    }
                }
            }
        }
        out
    }
}

fn exact_degree(m: u32) -> Result<u64> {
    exact_period_degree(3, u64::from(m))
}

fn check_periods(n0: u32, n1: u32) -> Result<()> {
    if n0 < 2 || n1 == 0 || n0 == n1 {
        return Err(Error::Domain(format!(
            "periods must satisfy n0 >= 2, n1 >= 1 and n0 != n1, got ({n0}, {n1})"
        )));
    }
    Ok(())
}

/// `(P_{n0,0}, P_{n1,1})` and its Jacobian in the given chart.
fn center_system(x: [C; 2], n0: u32, n1: u32, chart: CubicChart) -> Option<([C; 2], [[C; 2]; 2])> {
    let f0 = pnj_chart(x[0], x[1], n0, 0, chart).ok()?;
    let f1 = pnj_chart(x[0], x[1], n1, 1, chart).ok()?;
    let v = [f0.value, f1.value];
    v.iter()
        .all(|z| z.re.is_finite() && z.im.is_finite())
        .then_some((v, [f0.gradient, f1.gradient]))
}

/// [`center_system`] in `(c1, b)` with each row as mantissa and log scale.
fn center_system_scaled(x: [C; 2], n0: u32, n1: u32) -> Option<([C; 2], [[C; 2]; 2], [f64; 2])> {
    let (f0, s0) = pnj_scaled(x[0], x[1], n0, 0, CubicChart::C1B).ok()?;
    let (f1, s1) = pnj_scaled(x[0], x[1], n1, 1, CubicChart::C1B).ok()?;
    Some(([f0.value, f1.value], [f0.gradient, f1.gradient], [s0, s1]))
}

fn solve2(j: &[[C; 2]; 2], r: [C; 2]) -> Option<[C; 2]> {
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let x = [(r[0] * j[1][1] - r[1] * j[0][1]) / det, (j[0][0] * r[1] - j[1][0] * r[0]) / det];
    x.iter().all(|v| v.re.is_finite() && v.im.is_finite()).then_some(x)
}

fn norm2(v: [C; 2]) -> f64 {
    (v[0].norm_sqr() + v[1].norm_sqr()).sqrt()
}

/// Damped Newton in `(c1, a)`. Returns the root and its last step size.
fn newton_ca(seed: [C; 2], n0: u32, n1: u32, radius: f64) -> Option<([C; 2], f64)> {
    let mut x = seed;
    for _ in 0..NEWTON_MAX {
        let (f, j) = center_system(x, n0, n1, CubicChart::C1A)?;
        let mut dx = solve2(&j, f)?;
        let size = norm2(dx);
        // Steps are capped so that seeds far out walk in rather than jump.
        let cap = 0.5 * norm2(x).max(1.0);
        if size > cap {
            dx = [dx[0] * (cap / size), dx[1] * (cap / size)];
        }
        x = [x[0] - dx[0], x[1] - dx[1]];
        if norm2(x) > 2.0 * radius {
            return None;
        }
        if size <= 1e-14 * norm2(x).max(1.0) {
            let (f, j) = center_system(x, n0, n1, CubicChart::C1A)?;
            let last = norm2(solve2(&j, f)?);
            return (last <= NEWTON_TOL).then_some((x, last));
        }
    }
    None
}

fn rotations(c1: C, a: C) -> [ParamPoint; 3] {
    let z = C::from_polar(1.0, TAU / 3.0);
    [
        ParamPoint::CubicModuli { c1, a },
        ParamPoint::CubicModuli { c1, a: a * z },
        ParamPoint::CubicModuli { c1, a: a * z * z },
    ]
}

/// `⋂ Per*_j(n_j)`: parameters where `c0 = 0` has exact period `n0` and
/// `c1` has exact period `n1`, by multistart Newton on
/// `(P_{n0,0}, P_{n1,1})` in `(c1, a)`.
///
/// Each root found is closed under `a ↦ e^{2πi/3} a`. The grid is refined
/// until `d_{n0} d_{n1}` distinct points are found or the doubling budget
/// runs out, in which case the error reports how many were found.
pub fn centers_cubic(n0: u32, n1: u32, grid: &SeedGrid) -> Result<LocusResult> {
    check_periods(n0, n1)?;
    let expected = exact_degree(n0)? * exact_degree(n1)?;
    let mut found: Vec<(ParamPoint, f64, u32, u32)> = Vec::new();
    let mut per_axis = grid.points_per_axis.max(2);
    for round in 0..=grid.max_doublings {
        let seeds = grid.seeds(per_axis);
        let roots: Vec<([C; 2], f64)> = seeds
            .par_iter()
            .filter_map(|&s| newton_ca(s, n0, n1, grid.radius))
            .collect();
        for (x, r) in roots {
            for p in rotations(x[0], x[1]) {
                found.push((p, r, 0, 1));
            }
        }
        found = dedup_sorted(found, DEDUP_RADIUS);
        if found.len() as u64 >= expected || round == grid.max_doublings {
            break;
        }
        per_axis *= 2;
    }
    if found.len() as u64 != expected {
        return Err(Error::CountMismatch {
            found: found.len(),
            expected: expected as usize,
            context: format!("cubic centers ({n0}, {n1}) after {per_axis} seeds per axis"),
        });
    }
    Ok(assemble(found, expected, LocusMethod::MultistartNewton))
}

/// Roots of `(P_{m0,0}, P_{m1,1})` in `(c1, b)`. `m0 = 1` is allowed: then
/// `P_{1,0} = b`, so `b` is set to zero exactly and `c1` polished alone.
fn centers_cb(m0: u32, m1: u32, opts: &HomotopyOptions) -> Result<(Vec<([C; 2], f64)>, HomotopyReport)> {
    let d0 = exact_degree(m0)? / 3;
    let d1 = exact_degree(m1)?;
    let expected = d0 * d1;
    let target = move |x: [C; 2]| center_system_scaled(x, m0, m1);
    let (mut roots, report) =
        solve_total_degree(&target as &Target<'_>, [d0 as u32, d1 as u32], HOMOTOPY_RADII, expected as usize, opts)?;
    if m0 == 1 {
        for (x, res) in &mut roots {
            x[1] = C::new(0.0, 0.0);
            for _ in 0..20 {
                let Ok(f) = pnj_chart(x[0], x[1], m1, 1, CubicChart::C1B) else { break };
                let step = f.value / f.gradient[0];
                if !(step.re.is_finite() && step.im.is_finite()) {
                    break;
                }
                x[0] -= step;
                *res = step.norm();
                if step.norm() <= 1e-15 * x[0].norm().max(1.0) {
                    break;
                }
            }
        }
    }
    if roots.len() as u64 != expected {
        return Err(Error::CountMismatch {
            found: roots.len(),
            expected: expected as usize,
            context: format!("homotopy for cubic centers ({m0}, {m1}) in (c1, b): {report:?}"),
        });
    }
    Ok((roots, report))
}

/// The three `a` with `a^3 = b`, or `a = 0` with multiplicity 3.
fn lift(c1: C, b: C) -> Vec<(ParamPoint, u32)> {
    if b == C::new(0.0, 0.0) {
        return vec![(ParamPoint::CubicModuli { c1, a: b }, 3)];
    }
    let a = b.powf(1.0 / 3.0);
    rotations(c1, a).into_iter().map(|p| (p, 1)).collect()
}

/// Same set as [`centers_cubic`], solved by a total-degree homotopy in
/// `(c1, b = a^3)` where `(P_{n0,0}, P_{n1,1})` has Bezout number
/// `(d_{n0}/3)·d_{n1}` and no roots at infinity, then lifted to `a`.
pub fn centers_cubic_homotopy(n0: u32, n1: u32, opts: &HomotopyOptions) -> Result<(LocusResult, HomotopyReport)> {
    check_periods(n0, n1)?;
    let expected = exact_degree(n0)? * exact_degree(n1)?;
    let (roots, report) = centers_cb(n0, n1, opts)?;
    let items: Vec<(ParamPoint, f64, u32, u32)> = roots
        .iter()
        .flat_map(|(x, r)| lift(x[0], x[1]).into_iter().map(move |(p, m)| (p, *r, 0, m)))
        .collect();
    let kept = dedup_sorted(items, CONTINUATION_DEDUP_RADIUS);
    if kept.len() as u64 != expected {
        return Err(Error::CountMismatch {
            found: kept.len(),
            expected: expected as usize,
            context: format!("cubic centers ({n0}, {n1}) by homotopy"),
        });
    }
    Ok((assemble(kept, expected, LocusMethod::Homotopy), report))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transversality {
    /// Smallest singular value of the Jacobian of `(P_{n0,0}, P_{n1,1})`
    /// in `(c1, a)`.
    pub sigma_min: f64,
    pub sigma_max: f64,
    /// Relative Frobenius deviation of a central-difference Jacobian.
    pub fd_deviation: f64,
}

/// Singular values of the Jacobian at an intersection point, with a
/// finite-difference check of the analytic gradient.
pub fn transversality_check(point: &ParamPoint, n0: u32, n1: u32) -> Result<Transversality> {
    check_periods(n0, n1)?;
    let ParamPoint::CubicModuli { c1, a } = *point else {
        return Err(Error::Domain("transversality_check needs a CubicModuli point".into()));
    };
    let jac = |c1: C, a: C| -> Result<[[C; 2]; 2]> {
        let p = ParamPoint::CubicModuli { c1, a };
        Ok([pnj_value(&p, n0, 0)?.gradient, pnj_value(&p, n1, 1)?.gradient])
    };
    let j = jac(c1, a)?;
    let frob2: f64 = j.iter().flatten().map(|v| v.norm_sqr()).sum();
    let det = (j[0][0] * j[1][1] - j[0][1] * j[1][0]).norm();
    let disc = (frob2 * frob2 - 4.0 * det * det).max(0.0).sqrt();
    let sigma_max = ((frob2 + disc) / 2.0).sqrt();
    let sigma_min = if sigma_max > 0.0 { det / sigma_max } else { 0.0 };

    let h = 1e-6 * norm2([c1, a]).max(1.0);
    let value = |c1: C, a: C| -> Result<[C; 2]> {
        let p = ParamPoint::CubicModuli { c1, a };
        Ok([pnj_value(&p, n0, 0)?.value, pnj_value(&p, n1, 1)?.value])
    };
    let mut dev2 = 0.0;
    for k in 0..2 {
        let (dc, da) = if k == 0 { (C::new(h, 0.0), C::default()) } else { (C::default(), C::new(h, 0.0)) };
        let fp = value(c1 + dc, a + da)?;
        let fm = value(c1 - dc, a - da)?;
        for i in 0..2 {
            let fd = (fp[i] - fm[i]) / (2.0 * h);
            dev2 += (fd - j[i][k]).norm_sqr();
        }
    }
    let fd_deviation = dev2.sqrt() / frob2.sqrt().max(f64::MIN_POSITIVE);
    if !(sigma_min >= TRANSVERSALITY_TOL * sigma_max) || sigma_max == 0.0 {
        return Err(Error::TransversalityViolation {
            sigma_min,
            threshold: TRANSVERSALITY_TOL * sigma_max,
        });
    }
    Ok(Transversality {
        sigma_min,
        sigma_max,
        fd_deviation,
    })
}

/// Unknowns `(c1, b, z0, z1)`: `z0` is on the cycle attracting `c0`, of
/// period `p0` and multiplier `s0 t0`, and `z1` on the cycle attracting
/// `c1`. `phase` selects which multiplier moves with `t`.
fn multiplier_system(
    p0: u32,
    p1: u32,
    targets: [C; 2],
    phase: usize,
) -> impl Fn(&[C], f64) -> Option<(Vec<C>, DMatrix<C>)> + Sync {
    move |x: &[C], t: f64| {
        let f = CubicB { c1: x[0], b: x[1] };
        let j0 = cycle_jet(&f, x[2], p0);
        let j1 = cycle_jet(&f, x[3], p1);
        let s = if phase == 0 { [targets[0] * t, C::default()] } else { [targets[0], targets[1] * t] };
        let zero = C::default();
        let values = vec![j0.value - x[2], j0.rho - s[0], j1.value - x[3], j1.rho - s[1]];
        #[rustfmt::skip]
        let jac = DMatrix::from_row_slice(4, 4, &[
            j0.dvalue_dp[0], j0.dvalue_dp[1], j0.dvalue_dz - 1.0, zero,
            j0.drho_dp[0], j0.drho_dp[1], j0.drho_dz, zero,
            j1.dvalue_dp[0], j1.dvalue_dp[1], zero, j1.dvalue_dz - 1.0,
            j1.drho_dp[0], j1.drho_dp[1], zero, j1.drho_dz,
        ]);
        values.iter().all(|v| v.re.is_finite() && v.im.is_finite()).then_some((values, jac))
    }
}

fn continue_center(x0: [C; 2], p0: u32, p1: u32, targets: [C; 2]) -> Result<(C, C, f64)> {
    let mut x = vec![x0[0], x0[1], C::default(), x0[0]];
    let mut residual = 0.0;
    for phase in 0..2 {
        if targets[phase] == C::default() {
            continue;
        }
        let system = multiplier_system(p0, p1, targets, phase);
        let (y, r) = track(&system as &System<'_>, &x, T_START).map_err(|t| Error::ContinuationFailure {
            center: ParamPoint::CubicModuli {
                c1: x0[0],
                a: x0[1].powf(1.0 / 3.0),
            }
            .to_string(),
            t_reached: t + phase as f64,
        })?;
        x = y;
        residual = r;
    }
    Ok((x[0], x[1], residual))
}

/// `⋂_j Per*(n_j, w_j)` in the cubic family: maps with a cycle of exact
/// period `n0` and multiplier `w0` and one of exact period `n1` and
/// multiplier `w1`, each attracting a critical point.
///
/// Both ways of assigning the two cycles to the critical points are
/// continued from their centers, first in the `w0` coordinate and then in
/// `w1`. Tag 0 marks points where `c0` is attracted by the period-`n0`
/// cycle and tag 1 the swapped assignment. Points with `a = 0` carry
/// multiplicity 3.
pub fn cubic_multiplier_locus(n0: u32, n1: u32, w0: Complex64, w1: Complex64) -> Result<LocusResult> {
    check_periods(n0, n1)?;
    if !(w0.norm() < 1.0 && w1.norm() < 1.0) {
        return Err(Error::Domain(format!("multipliers ({w0}, {w1}) must lie in the unit disk")));
    }
    let expected = 2 * exact_degree(n0)? * exact_degree(n1)?;
    let opts = HomotopyOptions::default();
    let mut items = Vec::new();
    for (tag, (p0, p1, targets)) in [(n0, n1, [w0, w1]), (n1, n0, [w1, w0])].into_iter().enumerate() {
        let (centers, _) = centers_cb(p0, p1, &opts)?;
        let ends: Vec<(C, C, f64)> = centers
            .par_iter()
            .map(|(x, r)| {
                if targets == [C::default(); 2] {
                    Ok((x[0], x[1], *r))
                } else {
                    continue_center(*x, p0, p1, targets)
                }
            })
            .collect::<Result<_>>()?;
        for (c1, b, r) in ends {
            for (p, m) in lift(c1, b) {
                items.push((p, r, tag as u32, m));
            }
        }
    }
    let kept = dedup_sorted(items, CONTINUATION_DEDUP_RADIUS);
    let method = if w0 == C::default() && w1 == C::default() { LocusMethod::Homotopy } else { LocusMethod::Continuation };
    let result = assemble(kept, expected, method);
    if result.count_with_multiplicity() != expected {
        return Err(Error::CountMismatch {
            found: result.count_with_multiplicity() as usize,
            expected: expected as usize,
            context: format!("cubic multiplier locus ({n0}, {n1}, {w0}, {w1})"),
        });
    }
    Ok(result)
}
