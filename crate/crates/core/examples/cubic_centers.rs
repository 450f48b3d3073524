//! Cubic maps with both critical points periodic: multistart Newton and
//! total-degree homotopy, with a transversality check at every point.

use polydyn::loci::{centers_cubic, centers_cubic_homotopy, transversality_check, HomotopyOptions, SeedGrid};

fn main() -> polydyn::error::Result<()> {
    let grid = SeedGrid::default();
    for (n0, n1) in [(2, 1), (3, 1), (3, 2), (4, 1)] {
        let l = centers_cubic(n0, n1, &grid)?;
        let sigma = l
            .points
            .iter()
            .map(|p| transversality_check(p, n0, n1).map(|t| t.sigma_min))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        println!("({n0},{n1}) multistart: {:>3} points  min σ {sigma:.3e}", l.count_with_multiplicity());
    }
    let (l, report) = centers_cubic_homotopy(4, 3, &HomotopyOptions::default())?;
    println!("(4,3) homotopy: {} points, {report:?}", l.count_with_multiplicity());
    Ok(())
}
