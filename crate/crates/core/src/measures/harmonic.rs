use num_complex::Complex64;
use rayon::prelude::*;

use super::PointMeasure;
use crate::dynamics::{external_ray, ParamPoint, RayAngle, RayOptions};
use crate::error::{Error, Result};

/// Retries of a failed ray, each doubling the number of potential steps.
pub const MAX_RAY_RETRIES: u32 = 3;

#[derive(Clone, Debug)]
pub struct HarmonicSample {
    /// Uniform measure on the ray endpoints that were reached.
    pub measure: PointMeasure,
    /// Angle `i/K` of each point of `measure`.
    pub angles: Vec<f64>,
    /// Indices `i` whose rays could not be traced.
    pub failed: Vec<usize>,
}

fn trace(d: u32, angle: RayAngle, t_min: f64) -> Option<Complex64> {
    let mut opts = RayOptions::default();
    for _ in 0..=MAX_RAY_RETRIES {
        if let Ok(c) = external_ray(d, angle, t_min, &opts) {
            return Some(c);
        }
        opts.substeps *= 2;
    }
    None
}

/// Harmonic measure of `M_d` approximated by the endpoints at potential
/// `t_min` of the `K` external rays of angles `i/K`, equally weighted.
pub fn harmonic_sample(d: u32, k: usize, t_min: f64) -> Result<HarmonicSample> {
    if d < 2 {
        return Err(Error::Domain(format!("degree d={d} must be at least 2")));
    }
    if k == 0 {
        return Err(Error::Domain("need at least one ray".into()));
    }
    if !(t_min > 0.0) {
        return Err(Error::Domain(format!("potential t_min={t_min} must be positive")));
    }
    let traced: Vec<Option<Complex64>> = (0..k)
        .into_par_iter()
        .map(|i| trace(d, RayAngle::new(i as u64, k as u64).ok()?, t_min))
        .collect();
    let mut points = Vec::with_capacity(k);
    let mut angles = Vec::with_capacity(k);
    let mut failed = Vec::new();
    for (i, c) in traced.into_iter().enumerate() {
        match c {
            Some(c) => {
                points.push(ParamPoint::Unicritical { d, c });
                angles.push(i as f64 / k as f64);
            }
            None => failed.push(i),
        }
    }
    if points.is_empty() {
        return Err(Error::NoConvergence {
            iterations: 0,
            worst_residual: f64::NAN,
        });
    }
    Ok(HarmonicSample {
        measure: PointMeasure::uniform(points)?,
        angles,
        failed,
    })
}
