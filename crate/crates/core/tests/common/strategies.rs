use polydyn::polycore::Polynomial;
use polydyn::Complex64;
use proptest::prelude::*;

pub fn complex_in(r: f64) -> impl Strategy<Value = Complex64> {
    (0.0..r, 0.0..std::f64::consts::TAU).prop_map(|(m, t)| Complex64::from_polar(m, t))
}

/// Up to 64 roots jittered around the unit circle: angles within a quarter
/// spacing of `2πi/k`, moduli in `[0.8, 1.2]`.
pub fn separated_roots() -> impl Strategy<Value = Vec<Complex64>> {
    (1usize..=64).prop_flat_map(|k| {
        proptest::collection::vec((-0.25..0.25f64, 0.8..1.2f64), k).prop_map(move |v| {
            v.iter()
                .enumerate()
                .map(|(i, (dt, r))| Complex64::from_polar(*r, std::f64::consts::TAU * (i as f64 + dt) / k as f64))
                .collect()
        })
    })
}

pub fn poly(degree: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Polynomial> {
    degree.prop_flat_map(|n| {
        (proptest::collection::vec(complex_in(1.0), n), complex_in(1.0)).prop_map(|(mut cs, lead)| {
            cs.push(lead + Complex64::from_polar(0.5, lead.arg()));
            Polynomial::new(cs)
        })
    })
}
