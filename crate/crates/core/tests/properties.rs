mod common;

use common::strategies::*;
use common::*;
use polydyn::dynamics::ParamPoint;
use polydyn::measures::{bump, PointMeasure};
use proptest::prelude::*;

fn to_check(r: Check) -> Result<(), TestCaseError> {
    r.map_err(TestCaseError::fail)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn mobius_identity_holds(d in 2u64..=3, n in 1u64..=24) {
        to_check(mobius_identity(d, n))?;
    }

    #[test]
    fn aberth_recovers_separated_roots(roots in separated_roots()) {
        to_check(aberth_round_trip(&roots))?;
    }

    #[test]
    fn exact_division_round_trips(q in poly(1..=8), r in poly(0..=8)) {
        to_check(div_exact_round_trip(&q, &r))?;
    }

    #[test]
    fn unicritical_orbit_jacobian(d in 2u32..=4, cp in complex_in(1.5), n in 1usize..=6) {
        to_check(orbit_jacobian_matches_fd(&ParamPoint::Unicritical { d, c: cp }, 0, n))?;
    }

    #[test]
    fn cubic_orbit_jacobian(c1 in complex_in(1.5), a in complex_in(1.0), j in 0usize..=1, n in 1usize..=6) {
        to_check(orbit_jacobian_matches_fd(&ParamPoint::cubic(c1, a), j, n))?;
    }

    #[test]
    fn green_function_is_equivariant(d in 2u32..=3, cp in complex_in(2.0), z in complex_in(3.0)) {
        prop_assume!(z.norm() > 1e-3);
        to_check(green_invariance(&ParamPoint::Unicritical { d, c: cp }, z))?;
    }

    #[test]
    fn cubic_green_function_is_equivariant(c1 in complex_in(2.0), a in complex_in(1.2), z in complex_in(3.0)) {
        prop_assume!(z.norm() > 1e-3 && (z - c1).norm() > 1e-3);
        to_check(green_invariance(&ParamPoint::cubic(c1, a), z))?;
    }

    #[test]
    fn returned_cycles_attract(cp in complex_in(2.0)) {
        to_check(cycles_are_attracting(&ParamPoint::Unicritical { d: 2, c: cp }, 0))?;
    }

    #[test]
    fn returned_cubic_cycles_attract(c1 in complex_in(2.0), a in complex_in(1.0), j in 0usize..=1) {
        to_check(cycles_are_attracting(&ParamPoint::cubic(c1, a), j))?;
    }

    #[test]
    fn pnj_gradient(c1 in complex_in(1.5), a in complex_in(1.0), n in 1u32..=4, j in 0usize..=1) {
        to_check(pnj_gradient_matches_fd(c1, a, n, j))?;
    }

    #[test]
    fn dynatomic_roots_are_periodic(cp in complex_in(2.0), n in 1u32..=4) {
        to_check(dynatomic_roots_have_exact_period(&ParamPoint::Unicritical { d: 2, c: cp }, n))?;
    }

    // Degree 3^n in the monomial basis: n = 4 (degree 72) is out of reach
    // of double precision.
    #[test]
    fn cubic_unicritical_dynatomic_roots_are_periodic(cp in complex_in(1.5), n in 1u32..=3) {
        to_check(dynatomic_roots_have_exact_period(&ParamPoint::Unicritical { d: 3, c: cp }, n))?;
    }

    #[test]
    fn cubic_dynatomic_roots_are_periodic(c1 in complex_in(1.5), a in complex_in(1.0), n in 1u32..=3) {
        to_check(dynatomic_roots_have_exact_period(&ParamPoint::cubic(c1, a), n))?;
    }

    #[test]
    fn pairing_stays_in_range(
        pts in proptest::collection::vec(complex_in(3.0), 1..50),
        raw in proptest::collection::vec(0.0..1.0f64, 50),
        center in complex_in(1.0),
        r in 0.1..3.0f64,
    ) {
        let w: Vec<f64> = raw[..pts.len()].iter().map(|x| x + 1e-3).collect();
        let total: f64 = w.iter().sum();
        let points = pts.iter().map(|&z| ParamPoint::Unicritical { d: 2, c: z }).collect();
        let m = PointMeasure::new(points, w.iter().map(|x| x / total).collect()).unwrap();
        to_check(pairing_in_range(&m, &bump(&[center], r).unwrap()))?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 6, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn resultant_matches_multiplier_locus(n in 1u32..=3, w in complex_in(0.9)) {
        to_check(resultant_cross_check(n, w))?;
    }
}

#[test]
fn discriminants_are_odd() {
    for n in 1..=6 {
        discriminant_is_odd(n).unwrap();
    }
}

#[test]
fn exact_period_roots_partition_q_n() {
    for n in 1..=10 {
        root_set_identity(n).unwrap();
    }
}

#[test]
fn zero_multiplier_gives_centers() {
    for (d, n) in [(2, 1), (2, 4), (2, 7), (3, 3), (3, 5), (4, 3)] {
        multiplier_zero_is_centers(d, n).unwrap();
    }
}

#[test]
fn centers_are_conjugation_symmetric() {
    for n in 1..=12 {
        conjugation_symmetric(n).unwrap();
    }
}

#[test]
fn gaps_near_the_boundary() {
    przytycki_on_boundary(100, 12).unwrap();
}
