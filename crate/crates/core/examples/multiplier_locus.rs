//! Parameters whose attracting cycle has a prescribed multiplier, tagged by
//! exact period.

use polydyn::dynamics::find_cycle;
use polydyn::loci::multiplier_locus;
use polydyn::Complex64;

fn main() -> polydyn::error::Result<()> {
    let w = Complex64::new(0.5, 0.3);
    let locus = multiplier_locus(2, 4, w)?;
    println!("Per(4, {w}): {} points", locus.len());
    for k in [1, 2, 4] {
        let part = locus.with_tag(k);
        let worst = part
            .points
            .iter()
            .filter_map(|p| find_cycle(p, 0, 4).ok().flatten())
            .map(|cy| (cy.multiplier.powu(4 / k) - w).norm())
            .fold(0.0, f64::max);
        println!("  exact period {k}: {:>2} points, max |λ^(4/k) - w| = {worst:.1e}", part.len());
    }
    for d in 3..=4 {
        let l = multiplier_locus(d, 3, w)?;
        println!("d={d}: |Per(3, w)| = {}", l.len());
    }
    Ok(())
}
