//! Parameters whose critical value lands on a given point after n steps,
//! and their successive discrepancies against a bump.

use polydyn::loci::preimage_locus;
use polydyn::measures::{bump, discrepancy_series, rate_fit, PointMeasure, RateModel, Reference};
use polydyn::Complex64;

fn main() -> polydyn::error::Result<()> {
    let phi = bump(&[Complex64::new(-0.5, 0.0)], 2.0)?;
    for z in [Complex64::new(0.0, 0.0), Complex64::new(4.0, 0.0), Complex64::new(-1.0, 1.0)] {
        let measures = (6..=12)
            .map(|n| Ok((n, PointMeasure::from_locus(&preimage_locus(2, n, z)?)?)))
            .collect::<polydyn::error::Result<Vec<_>>>()?;
        let series = discrepancy_series(&measures, Reference::Successive, &phi)?;
        let fit = rate_fit(&series, RateModel::FreeSlope, 2)?;
        println!("z={z}: slope {:.3} (log 2 = 0.693)", fit.slope);
    }
    Ok(())
}
