//! Point measures in parameter space, bump test functions, harmonic
//! measure of `M_d` sampled along external rays, and rate regression for
//! discrepancy series.

mod bump;
mod harmonic;
mod rates;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::ParamPoint;
use crate::error::{Error, Result};
use crate::loci::LocusResult;

pub use bump::{bump, TestFunction};
pub use harmonic::{harmonic_sample, HarmonicSample, MAX_RAY_RETRIES};
pub use rates::{discrepancy_series, rate_fit, RateFit, RateModel, Reference};

/// Tolerance on `Σ w_i = 1` for probability measures.
const MASS_TOL: f64 = 1e-12;

/// `Σ w_i δ_{p_i}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointMeasure {
    pub points: Vec<ParamPoint>,
    pub weights: Vec<f64>,
    /// `false` for signed or unnormalized measures.
    pub normalized: bool,
}

impl PointMeasure {
    /// A probability measure: nonnegative weights summing to 1.
    pub fn new(points: Vec<ParamPoint>, weights: Vec<f64>) -> Result<Self> {
        check_shape(&points, &weights)?;
        if weights.iter().any(|w| !(*w >= 0.0)) {
            return Err(Error::Domain("probability weights must be nonnegative".into()));
        }
        let mass = kahan(weights.iter().copied());
        if (mass - 1.0).abs() > MASS_TOL * (weights.len() as f64).max(1.0) {
            return Err(Error::Domain(format!("weights sum to {mass}, not 1")));
        }
        Ok(Self {
            points,
            weights,
            normalized: true,
        })
    }

    /// Arbitrary finite weights.
    pub fn signed(points: Vec<ParamPoint>, weights: Vec<f64>) -> Result<Self> {
        check_shape(&points, &weights)?;
        Ok(Self {
            points,
            weights,
            normalized: false,
        })
    }

    pub fn uniform(points: Vec<ParamPoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Domain("uniform measure on an empty set".into()));
        }
        let w = 1.0 / points.len() as f64;
        let n = points.len();
        Self::new(points, vec![w; n])
    }

    pub fn dirac(p: ParamPoint) -> Self {
        Self {
            points: vec![p],
            weights: vec![1.0],
            normalized: true,
        }
    }

    /// Probability measure on a locus, each point weighted by multiplicity.
    pub fn from_locus(locus: &LocusResult) -> Result<Self> {
        let total: u64 = locus.multiplicities.iter().map(|&m| u64::from(m)).sum();
        if total == 0 {
            return Err(Error::Domain("locus is empty".into()));
        }
        let weights = locus
            .multiplicities
            .iter()
            .map(|&m| f64::from(m) / total as f64)
            .collect();
        Self::new(locus.points.clone(), weights)
    }

    /// `λ self + (1 - λ) other`.
    pub fn mix(&self, other: &PointMeasure, lambda: f64) -> Result<Self> {
        let mut points = self.points.clone();
        points.extend_from_slice(&other.points);
        let mut weights: Vec<f64> = self.weights.iter().map(|w| lambda * w).collect();
        weights.extend(other.weights.iter().map(|w| (1.0 - lambda) * w));
        if self.normalized && other.normalized && (0.0..=1.0).contains(&lambda) {
            Self::new(points, weights)
        } else {
            Self::signed(points, weights)
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Number of complex coordinates of the support points.
    pub fn dimension(&self) -> Option<usize> {
        self.points.first().map(ParamPoint::num_params)
    }
}

fn check_shape(points: &[ParamPoint], weights: &[f64]) -> Result<()> {
    if points.len() != weights.len() {
        return Err(Error::DimensionMismatch {
            expected: points.len(),
            got: weights.len(),
        });
    }
    if weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::Domain("weights must be finite".into()));
    }
    if let Some(first) = points.first() {
        let dim = first.num_params();
        if let Some(p) = points.iter().find(|p| p.num_params() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: p.num_params(),
            });
        }
    }
    Ok(())
}

/// Compensated sum.
pub(crate) fn kahan(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for v in values {
        let y = v - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

/// `∫ φ dm = Σ w_i φ(p_i)`.
pub fn pair(m: &PointMeasure, phi: &TestFunction) -> Result<f64> {
    if let Some(dim) = m.dimension() {
        if dim != phi.dimension() {
            return Err(Error::DimensionMismatch {
                expected: phi.dimension(),
                got: dim,
            });
        }
    }
    let values: Vec<f64> = m
        .points
        .par_iter()
        .map(|p| phi.eval(&p.params()))
        .collect::<Result<_>>()?;
    Ok(kahan(values.iter().zip(&m.weights).map(|(v, w)| v * w)))
}
