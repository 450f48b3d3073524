use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::continuation::{track, System, T_START};
use super::jets::{cycle_jet, Uni};
use super::{assemble, centers_unicritical, dedup_sorted, LocusMethod, LocusResult};
use crate::dynamics::ParamPoint;
use crate::error::{Error, Result};
use crate::polycore::{checked_pow, divisors};

/// Continued points agree to Newton accuracy, so duplicates are much closer
/// than distinct points; distinct centers are already `2e-7` apart at
/// moderate periods.
pub(crate) const CONTINUATION_DEDUP_RADIUS: f64 = 1e-9;

/// `w^{k/n}` on the principal branch.
pub fn principal_power(w: Complex64, k: u32, n: u32) -> Complex64 {
    if w == Complex64::new(0.0, 0.0) {
        return w;
    }
    Complex64::from_polar(w.norm().powf(f64::from(k) / f64::from(n)), w.arg() * f64::from(k) / f64::from(n))
}

/// System in `(c, z)`: `p^k(z) - z = 0`, `(p^k)'(z) = t · target`.
fn cycle_system(d: u32, k: u32, target: Complex64) -> impl Fn(&[Complex64], f64) -> Option<(Vec<Complex64>, DMatrix<Complex64>)> + Sync {
    move |x: &[Complex64], t: f64| {
        let f = Uni { d, c: x[0] };
        let j = cycle_jet(&f, x[1], k);
        let values = vec![j.value - x[1], j.rho - target * t];
        let jac = DMatrix::from_row_slice(2, 2, &[j.dvalue_dp[0], j.dvalue_dz - 1.0, j.drho_dp[0], j.drho_dz]);
        values.iter().all(|v| v.re.is_finite() && v.im.is_finite()).then_some((values, jac))
    }
}

/// A `k`-periodic point near `z0` for fixed `c`.
fn periodic_point(d: u32, k: u32, c: Complex64, z0: Complex64) -> Option<Complex64> {
    let f = Uni { d, c };
    let mut z = z0;
    for _ in 0..50 {
        let j = cycle_jet(&f, z, k);
        let step = (j.value - z) / (j.dvalue_dz - 1.0);
        if !(step.re.is_finite() && step.im.is_finite()) {
            return None;
        }
        z -= step;
        if step.norm() <= 1e-14 * z.norm().max(1.0) {
            return Some(z);
        }
    }
    None
}

/// Starting points at `t = T_START` on each of the `d - 1` sheets of the
/// multiplier cover over the component of `center`.
fn sheet_seeds(d: u32, k: u32, center: Complex64, target: Complex64) -> Option<Vec<[Complex64; 2]>> {
    // ρ(c) ≈ A (c - c0)^{d-1} near the center.
    let h = 1e-5 * center.norm().max(1.0).powf(-f64::from(k));
    let z = periodic_point(d, k, center + h, Complex64::new(0.0, 0.0))?;
    let a = cycle_jet(&Uni { d, c: center + h }, z, k).rho / Complex64::new(h, 0.0).powu(d - 1);
    let base = (target * T_START / a).powf(1.0 / f64::from(d - 1));
    (0..d - 1)
        .map(|s| {
            let c = center + base * Complex64::from_polar(1.0, TAU * f64::from(s) / f64::from(d - 1));
            let z = periodic_point(d, k, c, Complex64::new(0.0, 0.0))?;
            Some([c, z])
        })
        .collect()
}

fn continue_component(d: u32, k: u32, center: Complex64, target: Complex64) -> Result<Vec<(Complex64, f64)>> {
    let fail = |t: f64| Error::ContinuationFailure {
        center: ParamPoint::Unicritical { d, c: center }.to_string(),
        t_reached: t,
    };
    let system = cycle_system(d, k, target);
    let seeds = sheet_seeds(d, k, center, target).ok_or_else(|| fail(0.0))?;
    seeds
        .into_iter()
        .map(|seed| {
            let (x, res) = track(&system as &System<'_>, &seed, T_START).map_err(fail)?;
            Ok((x[0], res))
        })
        .collect()
}

/// `Per(n, w)` for `z^d + c`: parameters with a cycle of period `k | n` and
/// multiplier `w^{k/n}`. Each point is tagged with its exact period `k`.
///
/// Every exact-period-`k` center is continued along `ρ = t · w^{k/n}`,
/// `t` from `1e-4` to 1, once per sheet of the `(d-1)`-fold multiplier cover.
pub fn multiplier_locus(d: u32, n: u32, w: Complex64) -> Result<LocusResult> {
    if !(w.norm() < 1.0) {
        return Err(Error::Domain(format!("multiplier w={w} must satisfy |w| < 1")));
    }
    if d < 2 || n == 0 {
        return Err(Error::Domain(format!("need d >= 2 and n >= 1, got d={d} n={n}")));
    }
    let full = checked_pow(u64::from(d), u64::from(n - 1))?;
    let zero = w == Complex64::new(0.0, 0.0);
    let expected = if zero { full } else { full * u64::from(d - 1) };
    let mut items = Vec::new();
    for k in divisors(u64::from(n)) {
        let k = k as u32;
        let target = principal_power(w, k, n);
        let centers = centers_unicritical(d, k, true)?;
        let found: Vec<Vec<(Complex64, f64)>> = centers
            .unicritical_values()
            .par_iter()
            .map(|&c0| {
                if zero {
                    Ok(vec![(c0, 0.0)])
                } else {
                    continue_component(d, k, c0, target)
                }
            })
            .collect::<Result<_>>()?;
        items.extend(
            found
                .into_iter()
                .flatten()
                .map(|(c, r)| (ParamPoint::Unicritical { d, c }, r, k, 1)),
        );
    }
    let kept = dedup_sorted(items, CONTINUATION_DEDUP_RADIUS);
    if kept.len() as u64 != expected {
        return Err(Error::CountMismatch {
            found: kept.len(),
            expected: expected as usize,
            context: format!("multiplier locus d={d} n={n} w={w}"),
        });
    }
    let method = if zero { LocusMethod::DirectRoots } else { LocusMethod::Continuation };
    Ok(assemble(kept, expected, method))
}
