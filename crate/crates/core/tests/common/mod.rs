//! Checks shared by the property tests and the acceptance suite. Each
//! returns `Err` with a description instead of panicking so that both a
//! proptest runner and a plain loop can drive it.
#![allow(dead_code)]

use std::f64::consts::TAU;

use polydyn::dynamics::{
    find_cycle, green_at, orbit_critical, przytycki_fit, przytycki_gap, spherical_derivative_sup, ParamPoint,
};
use polydyn::dynatomic::{
    dynatomic_in_z, exact_period_poly, pnj_value, resultant_oracle, CriticalOrbitEval, ExactPeriodEval,
};
use polydyn::loci::{centers_unicritical, multiplier_locus, set_distance};
use polydyn::measures::{harmonic_sample, pair, PointMeasure, TestFunction};
use polydyn::polycore::{
    aberth_roots, aberth_with, checked_pow, critical_orbit_int, divisors, exact_period_degree, int_resultant,
    AberthOptions, Polynomial,
};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use polydyn::Complex64;

pub mod strategies;

pub type Check = Result<(), String>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

macro_rules! ensure {
    ($cond:expr, $($arg:tt)*) => {
        if !$cond {
            return Err(format!($($arg)*));
        }
    };
}
#[allow(unused_imports)]
pub(crate) use ensure;

/// Largest distance in a greedy nearest-neighbour matching of two
/// equal-size point lists; infinite when the sizes differ.
pub fn matching_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (k, dist) = b
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, y)| (k, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("sizes match");
        used[k] = true;
        worst = worst.max(dist);
    }
    worst
}

// ---- polycore ----

pub fn mobius_identity(d: u64, n: u64) -> Check {
    let mut sum = 0u64;
    for k in divisors(n) {
        sum += exact_period_degree(d, k).map_err(|e| e.to_string())?;
    }
    let want = checked_pow(d, n).map_err(|e| e.to_string())?;
    ensure!(sum == want, "d={d} n={n}: {sum} != {want}");
    Ok(())
}

pub fn discriminant_is_odd(n: u32) -> Check {
    let q = critical_orbit_int(2, n);
    let disc = int_resultant(&q, &q.derivative()).map_err(|e| e.to_string())?;
    ensure!(disc.bit(0), "n={n}: discriminant {disc} is even");
    Ok(())
}

/// Fixed-point scale for exact expansion.
const FIX_BITS: u32 = 60;

fn to_fixed(x: f64) -> BigInt {
    BigInt::from((x * 2f64.powi(FIX_BITS as i32)).round() as i128)
}

/// `X · 2^-shift`, rounded once.
fn from_fixed(x: &BigInt, shift: u64) -> f64 {
    let bits = x.bits();
    let drop = bits.saturating_sub(64);
    let mantissa = (x >> drop).to_f64().unwrap_or(0.0);
    let e = drop as i64 - shift as i64;
    let half = (e / 2) as i32;
    mantissa * 2f64.powi(half) * 2f64.powi(e as i32 - half)
}

/// Rounds each root to the fixed-point grid and expands `Π (z - r)` in
/// exact Gaussian-integer arithmetic, so the only error in the returned
/// coefficients is one final rounding.
pub fn exact_expansion(roots: &[Complex64]) -> (Polynomial, Vec<Complex64>) {
    let grid = 2f64.powi(FIX_BITS as i32);
    let snapped: Vec<Complex64> = roots
        .iter()
        .map(|r| c((r.re * grid).round() / grid, (r.im * grid).round() / grid))
        .collect();
    // Coefficients of the product so far, scaled by 2^(FIX_BITS * factors).
    let mut re = vec![BigInt::from(1)];
    let mut im = vec![BigInt::zero()];
    for (k, r) in snapped.iter().enumerate() {
        let (a, b) = (to_fixed(r.re), to_fixed(r.im));
        let one = BigInt::from(1) << FIX_BITS;
        let mut nre = vec![BigInt::zero(); k + 2];
        let mut nim = vec![BigInt::zero(); k + 2];
        for i in 0..=k {
            // (x + iy)(z·2^F - (a + ib))
            nre[i + 1] += &re[i] * &one;
            nim[i + 1] += &im[i] * &one;
            nre[i] -= &re[i] * &a - &im[i] * &b;
            nim[i] -= &re[i] * &b + &im[i] * &a;
        }
        re = nre;
        im = nim;
    }
    let shift = u64::from(FIX_BITS) * roots.len() as u64;
    let coeffs = re
        .iter()
        .zip(&im)
        .map(|(x, y)| c(from_fixed(x, shift), from_fixed(y, shift)))
        .collect();
    (Polynomial::new(coeffs), snapped)
}

/// Roots recovered from correctly rounded coefficients.
pub fn aberth_round_trip(roots: &[Complex64]) -> Check {
    let (p, roots) = exact_expansion(roots);
    let found = aberth_roots(&p, 1e-12, 500).map_err(|e| e.to_string())?;
    let gap = matching_distance(&roots, &found.roots);
    ensure!(gap < 1e-10, "{} roots recovered to {gap:e}", roots.len());
    Ok(())
}

pub fn div_exact_round_trip(q: &Polynomial, r: &Polynomial) -> Check {
    let back = polydyn::polycore::div_exact(&(q * r), q, 1e-10).map_err(|e| e.to_string())?;
    ensure!(back.degree() == r.degree(), "degree {} != {}", back.degree(), r.degree());
    let scale = r.max_abs_coeff();
    for i in 0..=r.degree() {
        let err = (back.coeff(i) - r.coeff(i)).norm();
        ensure!(err <= 1e-12 * scale, "coefficient {i}: error {err:e}");
    }
    Ok(())
}

// ---- dynamics ----

/// Propagated parameter derivatives of the critical orbit against central
/// differences with step `1e-6`.
pub fn orbit_jacobian_matches_fd(p: &ParamPoint, j: usize, n: usize) -> Check {
    let orbit = orbit_critical(p, j, n, true).map_err(|e| e.to_string())?;
    if orbit.escaped() {
        return Ok(());
    }
    let jac = orbit.jacobian.as_ref().ok_or("no jacobian")?;
    let params = p.params();
    let h = 1e-6;
    for i in 0..params.len() {
        let shifted = |s: f64| -> Result<Vec<Complex64>, String> {
            let mut q = params.clone();
            q[i] += s;
            let o = orbit_critical(&p.with_params(&q), j, n, false).map_err(|e| e.to_string())?;
            if o.escaped() {
                return Err("escaped".into());
            }
            Ok(o.points)
        };
        let (Ok(plus), Ok(minus)) = (shifted(h), shifted(-h)) else {
            return Ok(());
        };
        for k in 0..=n {
            let fd = (plus[k] - minus[k]) / (2.0 * h);
            let an = jac[k][i];
            let err = (fd - an).norm();
            ensure!(
                err <= 1e-5 * an.norm().max(1.0),
                "{p} k={k} i={i}: analytic {an} vs fd {fd}"
            );
        }
    }
    Ok(())
}

/// `g(f(z)) = d g(z)` within twice the certified bounds.
pub fn green_invariance(p: &ParamPoint, z: Complex64) -> Check {
    let g = green_at(p, z, 1e-12).map_err(|e| e.to_string())?;
    let gf = green_at(p, p.apply(z), 1e-12).map_err(|e| e.to_string())?;
    let d = f64::from(p.degree());
    let gap = (gf.value - d * g.value).abs();
    let allowed = 2.0 * (gf.error_bound + d * g.error_bound) + 1e-14 * gf.value.abs();
    ensure!(gap <= allowed, "{p} z={z}: gap {gap:e} > {allowed:e}");
    Ok(())
}

pub fn cycles_are_attracting(p: &ParamPoint, j: usize) -> Check {
    let Some(cycle) = find_cycle(p, j, 40).map_err(|e| e.to_string())? else {
        return Ok(());
    };
    ensure!(cycle.multiplier.norm() < 1.0, "{p}: multiplier {}", cycle.multiplier);
    ensure!(cycle.points.len() == cycle.period, "{p}: {} points for period {}", cycle.points.len(), cycle.period);
    for a in 0..cycle.points.len() {
        for b in 0..a {
            let gap = (cycle.points[a] - cycle.points[b]).norm();
            ensure!(gap > 1e-8, "{p}: cycle points {a} and {b} coincide");
        }
    }
    Ok(())
}

/// Gap sequences at ray endpoints near `∂M_2` stay above `κ̂ M̂^{-n}`.
pub fn przytycki_on_boundary(rays: usize, n_max: usize) -> Check {
    let sample = harmonic_sample(2, rays, 1e-6).map_err(|e| e.to_string())?;
    ensure!(sample.failed.is_empty(), "{} rays failed", sample.failed.len());
    for p in &sample.measure.points {
        let gaps = przytycki_gap(p, 0, n_max).map_err(|e| e.to_string())?;
        let m_hat = spherical_derivative_sup(p, 256);
        let fit = przytycki_fit(&gaps, m_hat).map_err(|e| format!("{p}: {e}"))?;
        ensure!(fit.kappa_hat > 0.0 && fit.kappa_hat <= 1.0, "{p}: kappa {}", fit.kappa_hat);
        for &(n, g) in &gaps {
            ensure!(g >= fit.lower_bound(n) * (1.0 - 1e-12), "{p} n={n}: gap {g:e}");
        }
    }
    Ok(())
}

// ---- dynatomic ----

/// Roots of the exact-period factors over `k | n` make up the roots of `Q_n`.
///
/// The factors are solved through their implicit evaluator. For `n <= 6`
/// the coefficient form of each factor is solved as well; beyond that the
/// monomial basis is too ill-conditioned near `c = -2` for `1e-8`.
pub fn root_set_identity(n: u32) -> Check {
    let opts = AberthOptions {
        tol: 1e-10,
        max_iter: 2000,
    };
    let mut implicit = Vec::new();
    let mut coefficient = Vec::new();
    for k in divisors(u64::from(n)) {
        let k = k as u32;
        let e = ExactPeriodEval::new(2, k).map_err(|e| e.to_string())?;
        implicit.extend(aberth_with(&e, opts).map_err(|e| format!("k={k}: {e}"))?.roots);
        if n <= 6 {
            let poly = exact_period_poly(2, k).map_err(|e| e.to_string())?.poly;
            if poly.degree() > 0 {
                coefficient.extend(aberth_roots(&poly, 1e-10, 2000).map_err(|e| format!("k={k}: {e}"))?.roots);
            }
        }
    }
    let full = aberth_with(&CriticalOrbitEval { d: 2, n }, opts).map_err(|e| e.to_string())?.roots;
    let gap = matching_distance(&implicit, &full);
    ensure!(gap < 1e-8, "n={n}: matching distance {gap:e}");
    if n <= 6 {
        let gap = matching_distance(&coefficient, &full);
        ensure!(gap < 1e-8, "n={n}: coefficient-form matching distance {gap:e}");
    }
    Ok(())
}

pub fn pnj_gradient_matches_fd(c1: Complex64, a: Complex64, n: u32, j: usize) -> Check {
    let p = ParamPoint::cubic(c1, a);
    let v = pnj_value(&p, n, j).map_err(|e| e.to_string())?;
    let h = 1e-6;
    for i in 0..2 {
        let shift = |s: f64| {
            let mut q = [c1, a];
            q[i] += s;
            pnj_value(&ParamPoint::cubic(q[0], q[1]), n, j).map(|v| v.value)
        };
        let (Ok(plus), Ok(minus)) = (shift(h), shift(-h)) else {
            return Ok(());
        };
        let fd = (plus - minus) / (2.0 * h);
        let err = (fd - v.gradient[i]).norm();
        ensure!(
            err <= 1e-5 * v.gradient[i].norm().max(1.0),
            "{p} n={n} j={j} i={i}: {} vs {fd}",
            v.gradient[i]
        );
    }
    Ok(())
}

fn iterate(p: &ParamPoint, z: Complex64, k: usize) -> Complex64 {
    (0..k).fold(z, |w, _| p.apply(w))
}

/// Roots of `Φ*_n` in `z` have exact period `n`, except points of lower
/// period `k` whose multiplier is a primitive `n/k`-th root of unity.
pub fn dynatomic_roots_have_exact_period(p: &ParamPoint, n: u32) -> Check {
    let phi = dynatomic_in_z(p, n).map_err(|e| e.to_string())?;
    let roots = aberth_roots(&phi, 1e-12, 1000).map_err(|e| e.to_string())?;
    for &z in &roots.roots {
        // Distance to a true point of period dividing n: one Newton step on
        // f^n(z) - z. Raw residuals are amplified by the cycle multiplier.
        let (back, deriv) = (0..n).fold((z, c(1.0, 0.0)), |(w, dw), _| (p.apply(w), dw * p.derivative(w)));
        let distance = ((back - z) / (deriv - 1.0)).norm();
        ensure!(distance <= 1e-8 * z.norm().max(1.0), "{p} n={n}: {z} is {distance:e} from a periodic point");
        for k in divisors(u64::from(n)).into_iter().filter(|&k| k < u64::from(n)) {
            let k = k as usize;
            if (iterate(p, z, k) - z).norm() <= 1e-6 * z.norm().max(1.0) {
                let rho: Complex64 = (0..k).map(|i| p.derivative(iterate(p, z, i))).product();
                let m = n as usize / k;
                ensure!(
                    (rho.powu(m as u32) - 1.0).norm() < 1e-6,
                    "{p} n={n}: {z} has period {k} with multiplier {rho}"
                );
            }
        }
    }
    Ok(())
}

// ---- loci ----

pub fn multiplier_zero_is_centers(d: u32, n: u32) -> Check {
    let m = multiplier_locus(d, n, c(0.0, 0.0)).map_err(|e| e.to_string())?;
    let centers = centers_unicritical(d, n, false).map_err(|e| e.to_string())?;
    let gap = matching_distance(&m.unicritical_values(), &centers.unicritical_values());
    ensure!(gap < 1e-8, "d={d} n={n}: {gap:e}");
    Ok(())
}

fn orbit_poly(c0: Complex64, n: u32) -> Polynomial {
    let f = Polynomial::new(vec![c0, c(0.0, 0.0), c(1.0, 0.0)]);
    (1..n).fold(f.clone(), |acc, _| f.compose(&acc))
}

/// `c ↦ Res_z(Φ*_n(c, z), (p_c^n)'(z) - w)`.
fn multiplier_resultant(n: u32, w: Complex64, c0: Complex64) -> Result<Complex64, String> {
    let p = ParamPoint::Unicritical { d: 2, c: c0 };
    let phi = dynatomic_in_z(&p, n).map_err(|e| e.to_string())?;
    let q = &orbit_poly(c0, n).derivative() - &Polynomial::constant(w);
    resultant_oracle(&phi, &q).map_err(|e| e.to_string())
}

/// Zero set of the multiplier resultant against the exact-period part of
/// `multiplier_locus`: each returned point is a zero, and the winding
/// number on `|c + 1/2| = 3` equals `n` times the number of points (every
/// cycle is counted once per point of the cycle).
pub fn resultant_cross_check(n: u32, w: Complex64) -> Check {
    let points = multiplier_locus(2, n, w).map_err(|e| e.to_string())?.with_tag(n).unicritical_values();
    let samples = 2048;
    let mut winding = 0.0;
    let mut scale: f64 = 0.0;
    let mut prev = multiplier_resultant(n, w, c(2.5, 0.0))?;
    for s in 1..=samples {
        let t = TAU * s as f64 / samples as f64;
        let v = multiplier_resultant(n, w, c(-0.5, 0.0) + Complex64::from_polar(3.0, t))?;
        winding += (v / prev).arg();
        scale = scale.max(v.norm());
        prev = v;
    }
    let zeros = (winding / TAU).round() as i64;
    ensure!(
        zeros == i64::from(n) * points.len() as i64,
        "n={n} w={w}: {zeros} zeros vs {} points",
        points.len()
    );
    for &c0 in &points {
        let r = multiplier_resultant(n, w, c0)?.norm();
        ensure!(r <= 1e-8 * scale, "n={n} w={w}: |Res({c0})| = {r:e}");
    }
    Ok(())
}

pub fn conjugation_symmetric(n: u32) -> Check {
    let r = centers_unicritical(2, n, false).map_err(|e| e.to_string())?;
    let conj: Vec<ParamPoint> = r
        .points
        .iter()
        .map(|p| ParamPoint::Unicritical {
            d: 2,
            c: p.params()[0].conj(),
        })
        .collect();
    let gap = set_distance(&r.points, &conj);
    ensure!(gap < 1e-9, "n={n}: {gap:e}");
    Ok(())
}

// ---- measures ----

pub fn pairing_in_range(m: &PointMeasure, phi: &TestFunction) -> Check {
    let v = pair(m, phi).map_err(|e| e.to_string())?;
    ensure!(v >= 0.0 && v <= phi.sup() * (1.0 + 1e-15), "pairing {v}");
    Ok(())
}

/// Top two coefficients of `Q_n` for `z^d + c`, exactly.
pub fn leading_coefficients(d: u32, n: u32) -> (u128, i128) {
    // Q_1 = c: degree 1, next coefficient 0.
    let mut degree: u128 = 1;
    let mut next: i128 = 0;
    for _ in 1..n {
        // (c^m + a c^{m-1} + ...)^d + c
        next *= i128::from(d);
        let new_degree = degree * u128::from(d);
        if new_degree - 1 == 1 {
            next += 1;
        }
        degree = new_degree;
    }
    (degree, next)
}
