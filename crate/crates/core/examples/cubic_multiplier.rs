//! Cubic maps with two attracting cycles of prescribed multipliers.

use polydyn::dynamics::find_cycle;
use polydyn::loci::cubic_multiplier_locus;
use polydyn::Complex64;

fn main() -> polydyn::error::Result<()> {
    let (w0, w1) = (Complex64::new(0.3, 0.0), Complex64::new(-0.2, 0.0));
    let l = cubic_multiplier_locus(2, 1, w0, w1)?;
    println!("{} points", l.count_with_multiplicity());
    for (p, tag) in l.points.iter().zip(&l.tags).take(6) {
        let show = |j| -> polydyn::error::Result<String> {
            Ok(find_cycle(p, j, 2)?.map_or("none".into(), |c| format!("{:.6}", c.multiplier)))
        };
        println!("{p}  tag {tag}  multipliers {} {}", show(0)?, show(1)?);
    }
    Ok(())
}
