//! Harmonic measure of the Mandelbrot set from external ray endpoints,
//! compared with the centers of period 12.

use polydyn::loci::centers_unicritical;
use polydyn::measures::{bump, harmonic_sample, pair, PointMeasure};
use polydyn::Complex64;

fn main() -> polydyn::error::Result<()> {
    let nu = harmonic_sample(2, 1024, 1e-6)?;
    let mean: Complex64 = nu.measure.points.iter().zip(&nu.measure.weights).map(|(p, w)| p.params()[0] * *w).sum();
    println!("{} rays, {} failed, barycenter {mean:.6}", nu.angles.len(), nu.failed.len());
    let mu = PointMeasure::from_locus(&centers_unicritical(2, 12, false)?)?;
    for (x, r) in [(-0.5, 2.0), (0.25, 0.5), (-1.75, 0.3)] {
        let phi = bump(&[Complex64::new(x, 0.0)], r)?;
        println!("bump({x}, {r}): ν {:.6}  μ12 {:.6}", pair(&nu.measure, &phi)?, pair(&mu, &phi)?);
    }
    Ok(())
}
