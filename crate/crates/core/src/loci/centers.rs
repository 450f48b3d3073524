use num_complex::Complex64;
use rayon::prelude::*;

use super::{assemble, dedup_sorted, LocusMethod, LocusResult, DIRECT_DEDUP_RADIUS};
use crate::dynamics::ParamPoint;
use crate::dynatomic::{exact_center_count, CriticalOrbitEval, ExactPeriodEval, PreimageEval, DEFAULT_DEGREE_CAP};
use crate::error::{Error, Result};
use crate::polycore::{aberth_with, checked_pow, AberthOptions, RootEvaluator, RootSet};

const ROOT_OPTIONS: AberthOptions = AberthOptions {
    tol: 1e-10,
    max_iter: 500,
};

/// Simplicity threshold: `|Q_n'(root)| > SIMPLE_TOL · scale`.
const SIMPLE_TOL: f64 = 1e-12;

fn check_cap(d: u32, n: u32) -> Result<u64> {
    if d < 2 {
        return Err(Error::Domain(format!("degree d={d} must be at least 2")));
    }
    if n == 0 {
        return Err(Error::Domain("period must be positive".into()));
    }
    let degree = checked_pow(u64::from(d), u64::from(n - 1))?;
    if degree > DEFAULT_DEGREE_CAP {
        return Err(Error::DegreeCap {
            degree,
            cap: DEFAULT_DEGREE_CAP,
        });
    }
    Ok(degree)
}

/// Roots with residuals relative to the evaluator's rounding scale.
fn solve<E: RootEvaluator>(e: &E) -> Result<RootSet> {
    aberth_with(e, ROOT_OPTIONS)
}

fn finish(d: u32, roots: &RootSet, expected: u64, context: &str) -> Result<LocusResult> {
    let items: Vec<(ParamPoint, f64, u32, u32)> = roots
        .roots
        .iter()
        .zip(roots.relative_residuals())
        .map(|(&c, r)| (ParamPoint::Unicritical { d, c }, r, 0, 1))
        .collect();
    let kept = dedup_sorted(items, DIRECT_DEDUP_RADIUS);
    if kept.len() as u64 != expected {
        return Err(Error::CountMismatch {
            found: kept.len(),
            expected: expected as usize,
            context: context.to_string(),
        });
    }
    Ok(assemble(kept, expected, LocusMethod::DirectRoots))
}

/// Centers of hyperbolic components of `z^d + c`: the roots of `Q_n`
/// (every period dividing `n`) or of the exact-period factor.
///
/// Every root is checked to be simple via `|Q_n'| > 1e-12 · scale`.
pub fn centers_unicritical(d: u32, n: u32, exact_period: bool) -> Result<LocusResult> {
    let full = check_cap(d, n)?;
    let (roots, expected) = if exact_period {
        let e = ExactPeriodEval::new(d, n)?;
        (solve(&e)?, exact_center_count(d, n)?)
    } else {
        (solve(&CriticalOrbitEval { d, n })?, full)
    };
    let q = CriticalOrbitEval { d, n };
    let multiple: Vec<Complex64> = roots
        .roots
        .par_iter()
        .filter(|&&c| {
            let e = q.evaluate(c);
            !(e.derivative.norm() > SIMPLE_TOL * e.scale.max(f64::MIN_POSITIVE))
        })
        .copied()
        .collect();
    if let Some(c) = multiple.first() {
        return Err(Error::CountMismatch {
            found: (full as usize) - multiple.len(),
            expected: full as usize,
            context: format!("Q_{n} has a numerically multiple root near {c}"),
        });
    }
    finish(d, &roots, expected, &format!("centers d={d} n={n} exact={exact_period}"))
}

/// Parameters `c` with `p_c^n(0) = z`: the roots of `Q_n(c) - z`.
pub fn preimage_locus(d: u32, n: u32, z: Complex64) -> Result<LocusResult> {
    let expected = check_cap(d, n)?;
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain("target point must be finite".into()));
    }
    let roots = solve(&PreimageEval { d, n, z })?;
    finish(d, &roots, expected, &format!("preimages d={d} n={n} z={z}"))
}
