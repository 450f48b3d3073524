//! Centers of hyperbolic components of the Mandelbrot set, by period.

use polydyn::loci::centers_unicritical;

fn main() -> polydyn::error::Result<()> {
    for n in 1..=10 {
        let all = centers_unicritical(2, n, false)?;
        let exact = centers_unicritical(2, n, true)?;
        let worst = all.residuals.iter().copied().fold(0.0, f64::max);
        println!("n={n:>2}  Q_n roots {:>4}  exact period {:>4}  worst residual {worst:.1e}", all.len(), exact.len());
    }
    let three = centers_unicritical(2, 3, true)?;
    for c in three.unicritical_values() {
        println!("period-3 center {c:.12}");
    }
    Ok(())
}
