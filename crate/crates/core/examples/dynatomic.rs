//! Dynatomic polynomials in the parameter and in the dynamical variable.

use polydyn::dynamics::ParamPoint;
use polydyn::dynatomic::{dynatomic_in_z, exact_period_poly};
use polydyn::polycore::{aberth_roots, exact_period_degree};
use polydyn::Complex64;

fn main() -> polydyn::error::Result<()> {
    for n in 1..=6 {
        let e = exact_period_poly(2, n)?;
        println!(
            "n={n}: {} centers of exact period n, {} periodic points in z, division residual {:.1e}",
            e.poly.degree(),
            exact_period_degree(2, u64::from(n))?,
            e.division_residual
        );
    }
    let p = ParamPoint::unicritical(2, Complex64::new(-0.12, 0.75))?;
    let phi = dynatomic_in_z(&p, 3)?;
    for z in aberth_roots(&phi, 1e-12, 500)?.roots {
        println!("period-3 point {z:.10}  |f^3(z) - z| = {:.1e}", (p.apply(p.apply(p.apply(z))) - z).norm());
    }
    Ok(())
}
