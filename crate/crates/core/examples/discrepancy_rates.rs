//! Rate of equidistribution of centers: successive discrepancies and the
//! two fitted rate models.

use polydyn::loci::centers_unicritical;
use polydyn::measures::{bump, discrepancy_series, rate_fit, PointMeasure, RateModel, Reference};
use polydyn::Complex64;

fn main() -> polydyn::error::Result<()> {
    let phi = bump(&[Complex64::new(-0.5, 0.0)], 2.0)?;
    let measures = (6..=12)
        .map(|n| Ok((n, PointMeasure::from_locus(&centers_unicritical(2, n, false)?)?)))
        .collect::<polydyn::error::Result<Vec<_>>>()?;
    let series = discrepancy_series(&measures, Reference::Successive, &phi)?;
    for (n, delta) in &series {
        println!("Δ_{n:<2} = {delta:.4e}");
    }
    for model in [RateModel::FreeSlope, RateModel::NOverDn] {
        let fit = rate_fit(&series, model, 2)?;
        println!("{model:?}: slope {:.3}  r2 {:.3}  C_hat {:?}  spread {:?}", fit.slope, fit.r_squared, fit.c_hat, fit.spread);
    }
    Ok(())
}
