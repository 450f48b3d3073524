//! Green function, attracting cycles and the Przytycki gap along the real
//! slice of the Mandelbrot set.

use polydyn::dynamics::{find_cycle, green, przytycki_fit, przytycki_gap, spherical_derivative_sup, ParamPoint};
use polydyn::Complex64;

fn main() -> polydyn::error::Result<()> {
    for x in [-2.0, -1.75, -1.0, -0.1, 0.25, 0.3, 1.0] {
        let p = ParamPoint::unicritical(2, Complex64::new(x, 0.0))?;
        let g = green(&p, 0, 1e-12)?;
        let cycle = find_cycle(&p, 0, 64)?;
        let fit = przytycki_fit(&przytycki_gap(&p, 0, 12)?, spherical_derivative_sup(&p, 256));
        println!(
            "c={x:>5}: g = {:.3e}  cycle {:?}  κ {:?}",
            g.value,
            cycle.map(|c| (c.period, c.multiplier.norm())),
            fit.ok().map(|f| f.kappa_hat)
        );
    }
    Ok(())
}
