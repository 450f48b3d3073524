use serde::{Deserialize, Serialize};

use super::{pair, PointMeasure, TestFunction};
use crate::error::{Error, Result};

pub enum Reference<'a> {
    Measure(&'a PointMeasure),
    /// Compare each measure with the next one in the sequence.
    Successive,
}

/// `Δ_n = |∫φ dμ_n - ∫φ dref|`, or `|∫φ dμ_{n'} - ∫φ dμ_n|` for successive
/// entries `n < n'`, reported at `n`.
pub fn discrepancy_series(
    sequence: &[(u32, PointMeasure)],
    reference: Reference<'_>,
    phi: &TestFunction,
) -> Result<Vec<(u32, f64)>> {
    if sequence.is_empty() {
        return Err(Error::InsufficientData { got: 0, need: 1 });
    }
    let values: Vec<(u32, f64)> = sequence
        .iter()
        .map(|(n, m)| Ok((*n, pair(m, phi)?)))
        .collect::<Result<_>>()?;
    match reference {
        Reference::Measure(r) => {
            let base = pair(r, phi)?;
            Ok(values.iter().map(|&(n, v)| (n, (v - base).abs())).collect())
        }
        Reference::Successive => Ok(values.windows(2).map(|w| (w[0].0, (w[1].1 - w[0].1).abs())).collect()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RateModel {
    /// `log Δ_n = intercept + slope · n`.
    FreeSlope,
    /// `Δ_n = C n / d^n`.
    NOverDn,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub model: RateModel,
    pub slope: f64,
    pub intercept: f64,
    /// Against the variance of `log Δ_n`; 1 when that variance is zero and
    /// the fit is exact.
    pub r_squared: f64,
    pub n_range: (u32, u32),
    /// Points used after dropping non-finite or non-positive values.
    pub points: usize,
    /// `NOverDn`: the fitted `C`.
    pub c_hat: Option<f64>,
    /// `NOverDn`: `max_n |Δ_n d^n / (n C) - 1|`.
    pub spread: Option<f64>,
}

pub fn rate_fit(series: &[(u32, f64)], model: RateModel, d: u32) -> Result<RateFit> {
    let usable: Vec<(f64, f64)> = series
        .iter()
        .filter(|(_, v)| v.is_finite() && *v > 0.0)
        .map(|&(n, v)| (f64::from(n), v.ln()))
        .collect();
    if usable.len() < 3 {
        return Err(Error::InsufficientData {
            got: usable.len(),
            need: 3,
        });
    }
    if model == RateModel::NOverDn && d < 2 {
        return Err(Error::Domain(format!("degree d={d} must be at least 2")));
    }
    let n_min = series.iter().filter(|(_, v)| v.is_finite() && *v > 0.0).map(|p| p.0).min().unwrap_or(0);
    let n_max = series.iter().filter(|(_, v)| v.is_finite() && *v > 0.0).map(|p| p.0).max().unwrap_or(0);
    let count = usable.len() as f64;
    let mean_x = usable.iter().map(|p| p.0).sum::<f64>() / count;
    let mean_y = usable.iter().map(|p| p.1).sum::<f64>() / count;
    let ss_tot: f64 = usable.iter().map(|p| (p.1 - mean_y).powi(2)).sum();

    let (slope, intercept, predicted, c_hat, spread) = match model {
        RateModel::FreeSlope => {
            let sxx: f64 = usable.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
            let sxy: f64 = usable.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
            let slope = sxy / sxx;
            let intercept = mean_y - slope * mean_x;
            let predicted: Vec<f64> = usable.iter().map(|p| intercept + slope * p.0).collect();
            (slope, intercept, predicted, None, None)
        }
        RateModel::NOverDn => {
            let ln_d = f64::from(d).ln();
            // log(Δ_n d^n / n) = log C.
            let logs: Vec<f64> = usable.iter().map(|p| p.1 + p.0 * ln_d - p.0.ln()).collect();
            let log_c = logs.iter().sum::<f64>() / count;
            let c = log_c.exp();
            let spread = logs.iter().map(|l| ((l - log_c).exp() - 1.0).abs()).fold(0.0, f64::max);
            let predicted: Vec<f64> = usable.iter().map(|p| log_c + p.0.ln() - p.0 * ln_d).collect();
            (-ln_d, log_c, predicted, Some(c), Some(spread))
        }
    };
    let ss_res: f64 = usable.iter().zip(&predicted).map(|(p, q)| (p.1 - q).powi(2)).sum();
    let r_squared = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else if ss_res <= 1e-24 * count {
        1.0
    } else {
        0.0
    };
    Ok(RateFit {
        model,
        slope,
        intercept,
        r_squared,
        n_range: (n_min, n_max),
        points: usable.len(),
        c_hat,
        spread,
    })
}
