use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use phasekit::matrix::cis;
use phasekit::numrange::{
    boundary_trace, classify_sector, contains_point, quadratic_form, support_value,
};
use phasekit::phase::phases;
use phasekit::random::{self, complex_gaussian, congruence_factor, hermitian_pd, sectorial, unit_vector, unitary};
use phasekit::{c64, ComplexMatrix, Error};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> c64 {
    c64::new(re, im)
}

#[test]
fn support_value_of_identity() {
    let i = ComplexMatrix::identity(3);
    assert!((support_value(&i, 0.0).unwrap().0 - 1.0).abs() < 1e-15);
    assert!(support_value(&i, FRAC_PI_2).unwrap().0.abs() < 1e-15);
    assert!(matches!(support_value(&ComplexMatrix::zeros(2, 3), 0.0), Err(Error::NonSquare { .. })));
}

#[test]
fn support_value_matches_monte_carlo() {
    let mut rng = random::rng(41);
    for _ in 0..5 {
        let a = complex_gaussian(&mut rng, 2, 2);
        for gamma in [0.0, 1.0, -2.5] {
            let (lam, x) = support_value(&a, gamma).unwrap();
            let rot = |x: &[c64]| (cis(-gamma) * quadratic_form(&a, x)).re;
            assert!((rot(&x) - lam).abs() < 1e-12);
            let mc = (0..10_000).map(|_| rot(&unit_vector(&mut rng, 2))).fold(f64::INFINITY, f64::min);
            assert!(mc >= lam - 1e-12);
            assert!(mc - lam < 1e-3, "{mc} vs {lam}");
        }
    }
    // for larger n random sampling only bounds from above
    let a = complex_gaussian(&mut rng, 5, 5);
    let (lam, _) = support_value(&a, 0.3).unwrap();
    for _ in 0..2000 {
        let x = unit_vector(&mut rng, 5);
        assert!((cis(-0.3) * quadratic_form(&a, &x)).re >= lam - 1e-12);
    }
}

#[test]
fn diagonal_examples() {
    let info = classify_sector(&ComplexMatrix::from_phases(&[0.0, FRAC_PI_4, -FRAC_PI_4])).unwrap();
    assert!(info.sectorial);
    assert!((info.phi_max - FRAC_PI_4).abs() < 1e-10);
    assert!((info.phi_min + FRAC_PI_4).abs() < 1e-10);
    assert!(info.gamma_star.abs() < 1e-10);
    assert!((info.field_angle - FRAC_PI_2).abs() < 1e-10);

    let info = classify_sector(&ComplexMatrix::from_phases(&[PI, 3.0 * FRAC_PI_4, -3.0 * FRAC_PI_4])).unwrap();
    assert!(info.sectorial);
    assert!((info.gamma_star - PI).abs() < 1e-10);
    assert!((info.phi_max - 5.0 * FRAC_PI_4).abs() < 1e-10);
    assert!((info.phi_min - 3.0 * FRAC_PI_4).abs() < 1e-10);

    let info = classify_sector(&ComplexMatrix::from_phases(&[0.0, 2.0 * PI / 3.0, -2.0 * PI / 3.0])).unwrap();
    assert!(!info.sectorial);
    assert!(info.phi_max.is_nan());

    assert!(matches!(classify_sector(&ComplexMatrix::zeros(2, 2)), Err(Error::ZeroMatrix)));
}

#[test]
fn positive_definite_has_zero_field_angle() {
    let mut rng = random::rng(42);
    for _ in 0..10 {
        let p = hermitian_pd(&mut rng, 4);
        let info = classify_sector(&p).unwrap();
        assert!(info.sectorial);
        assert!(info.phi_max.abs() < 1e-9 && info.phi_min.abs() < 1e-9);
        assert!(info.field_angle.abs() < 1e-9);
    }
}

#[test]
fn boundary_traces() {
    let t = boundary_trace(&ComplexMatrix::from_real_diag(&[1.0, -1.0]), 64).unwrap();
    assert_eq!(t.points.len(), 64);
    for z in &t.points {
        assert!(z.im.abs() < 1e-14 && z.re.abs() <= 1.0 + 1e-14);
    }

    let nil = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
    let t = boundary_trace(&nil, 128).unwrap();
    let max = t.points.iter().map(|z| z.norm()).fold(0.0, f64::max);
    assert!((max - 0.5).abs() < 1e-6);
    for z in &t.points {
        assert!((z.norm() - 0.5).abs() < 1e-6);
    }

    let t = boundary_trace(&ComplexMatrix::identity(3), 8).unwrap();
    assert!(t.points.iter().all(|z| (z - c(1.0, 0.0)).norm() < 1e-14));

    let mut rng = random::rng(43);
    let a = complex_gaussian(&mut rng, 4, 4);
    let t = boundary_trace(&a, 32).unwrap();
    for (z, x) in t.points.iter().zip(&t.witnesses) {
        assert!((quadratic_form(&a, x) - z).norm() < 1e-14);
    }
    assert!(matches!(boundary_trace(&a, 7), Err(Error::InvalidArgument(_))));
}

#[test]
fn membership() {
    let i = ComplexMatrix::identity(2);
    assert!(contains_point(&i, c(1.0, 0.0)).unwrap());
    assert!(!contains_point(&i, c(0.0, 0.0)).unwrap());

    let mut rng = random::rng(44);
    for _ in 0..20 {
        let a = complex_gaussian(&mut rng, 4, 4);
        let z = quadratic_form(&a, &unit_vector(&mut rng, 4));
        assert!(contains_point(&a, z).unwrap());
        // far outside the disk of radius |A|_F
        assert!(!contains_point(&a, cis(1.0) * (2.0 * a.norm_fro())).unwrap());
    }
    let nil = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
    assert!(contains_point(&nil, c(0.0, 0.49)).unwrap());
    assert!(!contains_point(&nil, c(0.0, 0.51)).unwrap());
}

#[test]
fn accretive_matrices_exclude_origin() {
    let mut rng = random::rng(45);
    for _ in 0..20 {
        let s = sectorial(&mut rng, 4, -1.3, 1.3);
        let info = classify_sector(&s.matrix).unwrap();
        assert!(info.accretivity > 0.0);
        assert!(!contains_point(&s.matrix, c(0.0, 0.0)).unwrap());
    }
}

#[test]
fn subadditivity_of_numerical_range() {
    let mut rng = random::rng(46);
    for _ in 0..10 {
        let a = complex_gaussian(&mut rng, 3, 3);
        let b = complex_gaussian(&mut rng, 3, 3);
        let trace = boundary_trace(&(&a + &b), 64).unwrap();
        let tol = 1e-9 * (a.norm_fro() + b.norm_fro());
        // W(A+B) inside W(A) + W(B): no half-plane supporting the sum excludes a point
        for j in 0..180 {
            let g = TAU * j as f64 / 180.0;
            let bound = support_value(&a, g).unwrap().0 + support_value(&b, g).unwrap().0;
            for z in &trace.points {
                assert!((cis(-g) * z).re >= bound - tol);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn unitary_similarity_invariance(seed in any::<u64>(), n in 2usize..6) {
        let mut rng = random::rng(seed);
        let c = sectorial(&mut rng, n, -1.0, 1.2).matrix;
        let u = unitary(&mut rng, n);
        let a = classify_sector(&c).unwrap();
        let b = classify_sector(&c.congruence(&u)).unwrap();
        prop_assert!(a.sectorial && b.sectorial);
        prop_assert!((a.phi_max - b.phi_max).abs() < 1e-8);
        prop_assert!((a.phi_min - b.phi_min).abs() < 1e-8);
    }

    #[test]
    fn congruence_preserves_phase_bounds(seed in any::<u64>(), n in 2usize..6) {
        let mut rng = random::rng(seed);
        let c = sectorial(&mut rng, n, -1.4, 1.4).matrix;
        let pc = c.congruence(&congruence_factor(&mut rng, n));
        let info = classify_sector(&pc).unwrap();
        prop_assert!(info.sectorial);
        let ph = phases(&c, None).unwrap();
        prop_assert!((info.phi_max - ph.max()).abs() < 1e-7);
        prop_assert!((info.phi_min - ph.min()).abs() < 1e-7);
        prop_assert!(info.phi_min <= info.gamma_star && info.gamma_star <= info.phi_max);
        prop_assert!(info.field_angle >= 0.0 && info.field_angle < PI);
    }
}
