use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, PI};

use phasekit::analysis::{
    adversarial_b, adversarial_b_at, compress, compression_phase_sum, cone_membership, extremal_phase_sums,
    find_eigenphase_entrywise_counterexample, find_product_phase_counterexample, hadamard_counterexample_matrix,
    hadamard_phase_bounds, i_plus_ab_singular_values, kronecker_phases, magnitude_breaker, mixed_margin_check,
    product_phase_check, rank_margin, sample_compound_cone, schur_complement, schur_complement_matrix,
    top_singular_breaker, BindingSide, ConeSpec, INTERLACE_TOL,
};
use phasekit::linalg::{qr_thin, singular_values};
use phasekit::majorization::is_majorized;
use phasekit::matrix::cis;
use phasekit::phase::phases;
use phasekit::random::{self, complex_gaussian, hermitian_pd, isometry, sectorial, sectorial_in_window};
use phasekit::verify::{self, Suite, VerifyConfig};
use phasekit::{c64, ComplexMatrix, Error};

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn selection(n: usize, cols: &[usize]) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, cols.len(), |i, j| c64::new(if i == cols[j] { 1.0 } else { 0.0 }, 0.0))
}

#[test]
fn compression_examples() {
    let mut rng = random::rng(51);
    let c = sectorial(&mut rng, 4, -1.0, 1.0).matrix;
    let r = compress(&c, &ComplexMatrix::identity(4), INTERLACE_TOL).unwrap();
    assert!(max_diff(&r.phases.phases, &r.parent.phases) < 1e-10);

    let d = ComplexMatrix::from_phases(&[1.0, 0.5, -0.2, -0.9]);
    let r = compress(&d, &selection(4, &[0, 2]), 0.0).unwrap();
    assert!(max_diff(&r.phases.phases, &[1.0, -0.2]) < 1e-12);
    assert!(r.holds);

    let rank1 = &complex_gaussian(&mut rng, 4, 1) * &complex_gaussian(&mut rng, 1, 2);
    assert!(matches!(compress(&c, &rank1, 1e-8), Err(Error::RankDeficient)));
    let bad = ComplexMatrix::from_phases(&[0.0, 2.0 * PI / 3.0, -2.0 * PI / 3.0]);
    assert!(matches!(compress(&bad, &selection(3, &[0]), 1e-8), Err(Error::NotSectorial { .. })));
}

#[test]
fn compression_interlacing_random() {
    for trial in 0..500 {
        let mut rng = random::trial_rng(52, trial);
        let c = sectorial(&mut rng, 6, -1.4, 1.4).matrix;
        let x = complex_gaussian(&mut rng, 6, 4);
        let r = compress(&c, &x, 1e-8).unwrap();
        assert!(r.holds, "trial {trial}: slack {}", r.worst_slack);
        // an isometric compression and its QR-reduced form agree
        let q = qr_thin(&x).q;
        let rq = compress(&c, &q, 1e-8).unwrap();
        assert!(max_diff(&rq.phases.phases, &r.phases.phases) < 1e-7);
    }
}

#[test]
fn schur_complement_examples() {
    let mut rng = random::rng(53);
    let a = sectorial(&mut rng, 2, -0.5, 0.8).matrix;
    let b = sectorial(&mut rng, 3, -0.3, 0.6).matrix;
    let mut c = ComplexMatrix::zeros(5, 5);
    c.set_block(0, 0, &a);
    c.set_block(2, 2, &b);
    let s = schur_complement_matrix(&c, 2).unwrap();
    assert!((&s - &b).norm_fro() < 1e-14);
    assert!(schur_complement(&c, 2, 1e-8).unwrap().holds);

    let p = hermitian_pd(&mut rng, 5);
    let r = schur_complement(&p, 2, 1e-8).unwrap();
    assert!(r.matrix.is_hermitian(1e-12));
    assert!(r.phases.phases.iter().all(|x| x.abs() < 1e-9));

    for trial in 0..500 {
        let mut rng = random::trial_rng(54, trial);
        let c = sectorial(&mut rng, 6, -1.4, 1.4).matrix;
        let r = schur_complement(&c, 2, 1e-8).unwrap();
        assert!(r.holds, "trial {trial}: slack {}", r.worst_slack);
    }
}

#[test]
fn extremal_sums() {
    let d = ComplexMatrix::from_phases(&[0.9, 0.1, -0.4]);
    let e = extremal_phase_sums(&d, 1).unwrap();
    assert!((e.max_sum - 0.9).abs() < 1e-12 && (e.min_sum + 0.4).abs() < 1e-12);
    let x = e.x_max.column(0);
    assert!(x[0].norm() > 0.0 && x[1].norm() < 1e-12 && x[2].norm() < 1e-12);

    let mut rng = random::rng(55);
    let c = sectorial(&mut rng, 5, -1.2, 1.2).matrix;
    let all = extremal_phase_sums(&c, 5).unwrap();
    let total: f64 = phases(&c, None).unwrap().phases.iter().sum();
    assert!((all.max_sum - total).abs() < 1e-12 && (all.min_sum - total).abs() < 1e-12);

    for k in 1..=4 {
        let e = extremal_phase_sums(&c, k).unwrap();
        let theta = e.parent.theta;
        let attained_max = compression_phase_sum(&c, &e.x_max, theta).unwrap();
        let attained_min = compression_phase_sum(&c, &e.x_min, theta).unwrap();
        assert!((attained_max - e.max_sum).abs() < 1e-8);
        assert!((attained_min - e.min_sum).abs() < 1e-8);
        for _ in 0..250 {
            let x = complex_gaussian(&mut rng, 5, k);
            let s = compression_phase_sum(&c, &x, theta).unwrap();
            assert!(s <= e.max_sum + 1e-8 && s >= e.min_sum - 1e-8);
        }
    }
    assert!(matches!(extremal_phase_sums(&c, 0), Err(Error::BadOrder { .. })));
}

#[test]
fn product_majorization() {
    let i = ComplexMatrix::identity(3);
    let r = product_phase_check(&i, &i, 1e-8).unwrap();
    assert!(r.eigenangles.iter().chain(&r.phase_sum).all(|x| x.abs() < 1e-12));

    // commuting diagonal factors: the multisets coincide
    let a = ComplexMatrix::from_phases(&[0.6, 0.2, -0.3]);
    let b = ComplexMatrix::from_phases(&[0.5, -0.1, -0.4]);
    let r = product_phase_check(&a, &b, 1e-8).unwrap();
    let mut want: Vec<f64> = vec![1.1, 0.1, -0.7];
    want.sort_by(|x, y| y.total_cmp(x));
    assert!(max_diff(&r.eigenangles, &want) < 1e-12);
    assert!(r.majorization.holds);

    let mut rng = random::rng(56);
    for _ in 0..20 {
        let r = product_phase_check(&hermitian_pd(&mut rng, 4), &hermitian_pd(&mut rng, 4), 1e-8).unwrap();
        assert!(r.eigenangles.iter().chain(&r.phase_sum).all(|x| x.abs() < 1e-8));
        assert!(r.majorization.holds);
    }

    let mut checked = 0;
    for trial in 0..1000 {
        let mut rng = random::trial_rng(57, trial);
        let a = sectorial(&mut rng, 5, -1.4, 1.4).matrix;
        let b = sectorial(&mut rng, 5, -1.4, 1.4).matrix;
        match product_phase_check(&a, &b, 1e-7) {
            Ok(r) => {
                assert!(r.majorization.holds, "trial {trial}: slack {}", r.majorization.slack);
                checked += 1;
            }
            Err(Error::BranchAmbiguity { .. }) => {}
            Err(e) => panic!("trial {trial}: {e}"),
        }
    }
    assert!(checked > 990);
}

#[test]
fn cone_examples_and_sum_closure() {
    let mut rng = random::rng(58);
    let p = hermitian_pd(&mut rng, 4);
    assert!(cone_membership(&p, &ConeSpec::Sector { alpha: 0.0, beta: 0.0 }, 1e-9).unwrap().member);
    for k in 1..=3 {
        let spec = ConeSpec::Compound { k, alpha: 0.0 };
        assert!(cone_membership(&ComplexMatrix::identity(3), &spec, 1e-9).unwrap().member);
    }
    let ball = ConeSpec::Ball { gamma: 1.0 };
    assert!(cone_membership(&ComplexMatrix::identity(3), &ball, 1e-12).unwrap().member);
    assert!(!cone_membership(&ComplexMatrix::identity(3).scale_real(1.1), &ball, 1e-12).unwrap().member);
    let bad = ComplexMatrix::from_phases(&[0.0, 2.0 * PI / 3.0, -2.0 * PI / 3.0]);
    assert!(!cone_membership(&bad, &ConeSpec::Sector { alpha: -1.5, beta: 1.5 }, 1e-9).unwrap().member);

    for trial in 0..500 {
        let mut rng = random::trial_rng(59, trial);
        let alpha = random::uniform(&mut rng, -1.5, 0.5);
        let beta = alpha + random::uniform(&mut rng, 0.1, PI - 0.1);
        let a = sectorial(&mut rng, 5, alpha, beta).matrix;
        let b = sectorial(&mut rng, 5, alpha, beta).matrix;
        let spec = ConeSpec::Sector { alpha, beta };
        assert!(cone_membership(&a, &spec, 1e-9).unwrap().member);
        let s = cone_membership(&(&a + &b), &spec, 1e-7).unwrap();
        assert!(s.member, "trial {trial}: slack {}", s.slack);
    }
}

#[test]
fn rank_margin_examples() {
    let m = rank_margin(&ComplexMatrix::identity(3), 1).unwrap();
    assert!((m.phase_margin_alpha - PI).abs() < 1e-12);
    assert!((m.magnitude_margin_gamma - 1.0).abs() < 1e-12);

    let a = ComplexMatrix::from_phases(&[FRAC_PI_3, -FRAC_PI_4]);
    let m = rank_margin(&a, 1).unwrap();
    assert!((m.phase_margin_alpha - 2.0 * PI / 3.0).abs() < 1e-10);
    assert_eq!(m.binding_side, BindingSide::Upper);

    let adv = adversarial_b(&ComplexMatrix::identity(3), 1).unwrap();
    assert!((&adv.b - &ComplexMatrix::from_real_diag(&[-1.0, 1.0, 1.0])).norm_fro() < 1e-12);
    assert!(!adv.sectorial);
    let s = i_plus_ab_singular_values(&ComplexMatrix::identity(3), &adv.b);
    assert!(s[1] > 1e-6 && s[2] < 1e-12);

    // full drop
    let phi = 0.4;
    let a = ComplexMatrix::identity(3).scale(cis(phi));
    let adv = adversarial_b(&a, 3).unwrap();
    let i_ab = &ComplexMatrix::identity(3) + &(&a * &adv.b);
    assert!(i_ab.norm_fro() < 1e-12);

    let mut rng = random::rng(60);
    let a = sectorial(&mut rng, 5, -1.0, 1.2).matrix;
    let adv = adversarial_b(&a, 2).unwrap();
    assert!(adversarial_b_at(&a, 2, adv.alpha_required + 0.1).is_ok());
    assert!(matches!(adversarial_b_at(&a, 2, adv.alpha_required - 0.1), Err(Error::InfeasibleAlpha { .. })));
}

#[test]
fn rank_robustness_random() {
    for trial in 0..100 {
        let mut rng = random::trial_rng(61, trial);
        let a = sectorial_in_window(&mut rng, 5, 2.5, 2.8).matrix;
        for k in 1..=2 {
            let m = rank_margin(&a, k).unwrap();
            let adv = adversarial_b(&a, k).unwrap();
            let s = i_plus_ab_singular_values(&a, &adv.b);
            let dropped = s.iter().filter(|&&x| x < 1e-8 * (1.0 + s[0])).count();
            assert_eq!(dropped, k, "trial {trial}: {s:?}");
            // at least two decades between kept and dropped
            assert!(s[4 - k] >= 100.0 * s[5 - k].max(1e-300));
            let member = cone_membership(&adv.b, &ConeSpec::Compound { k, alpha: m.phase_margin_alpha }, 1e-6).unwrap();
            assert!(member.member, "trial {trial}");

            let br = magnitude_breaker(&a, k).unwrap();
            assert!((singular_values(&br)[0] - m.magnitude_margin_gamma).abs() < 1e-9 * m.magnitude_margin_gamma);
            let s = i_plus_ab_singular_values(&a, &br);
            assert!(s[5 - k] < 1e-8 * (1.0 + s[0]));

            for _ in 0..10 {
                let b = sample_compound_cone(&mut rng, 5, k, m.phase_margin_alpha - 0.05);
                let s = i_plus_ab_singular_values(&a, &b);
                assert!(s[5 - k] > 1e-8, "trial {trial}: {s:?}");
            }
        }
    }
}

#[test]
fn mixed_margin() {
    let i = ComplexMatrix::identity(3);
    assert!(mixed_margin_check(&i, 0.99, 3.1, 0, 1).unwrap().verdict);
    assert!(!mixed_margin_check(&i, 1.0, 3.0, 0, 1).unwrap().verdict);
    assert!(!mixed_margin_check(&i, 0.5, PI, 0, 1).unwrap().verdict);

    let mut rng = random::rng(62);
    let a = sectorial(&mut rng, 4, -1.0, 1.0).matrix;
    let r = mixed_margin_check(&a, 1.0 / singular_values(&a)[0], 0.1, 0, 1).unwrap();
    assert!(!r.verdict);
    let b = r.counterexample.unwrap();
    assert!((&b - &top_singular_breaker(&a).unwrap()).norm_fro() < 1e-14);
    let s = i_plus_ab_singular_values(&a, &b);
    assert!(s[3] < 1e-10);

    let limits = mixed_margin_check(&a, 0.0, 0.0, 0, 1).unwrap();
    let r = mixed_margin_check(&a, limits.gamma_limit - 0.05, limits.alpha_limit - 0.05, 2000, 9).unwrap();
    assert!(r.verdict);
    assert_eq!(r.violations, 0);
}

#[test]
fn kronecker_and_hadamard() {
    let a = ComplexMatrix::from_phases(&[PI / 6.0, -PI / 6.0]);
    let r = kronecker_phases(&a, &ComplexMatrix::from_diag(&[cis(PI / 8.0)])).unwrap();
    assert!(max_diff(&r.formula, &[PI / 6.0 + PI / 8.0, -PI / 6.0 + PI / 8.0]) < 1e-12);

    for trial in 0..200 {
        let mut rng = random::trial_rng(63, trial);
        let a = sectorial_in_window(&mut rng, 3, 1.5, 1.4).matrix;
        let b = sectorial_in_window(&mut rng, 3, 1.5, 1.4).matrix;
        match kronecker_phases(&a, &b) {
            Ok(r) => assert!(r.max_deviation < 1e-7, "trial {trial}"),
            Err(Error::SpreadTooWide { .. }) => continue,
            Err(e) => panic!("{e}"),
        }
        let h = hadamard_phase_bounds(&a, &b, 1e-7).unwrap();
        assert!(h.holds, "trial {trial}");
    }

    let mut rng = random::rng(64);
    let h = hadamard_phase_bounds(&hermitian_pd(&mut rng, 4), &hermitian_pd(&mut rng, 4), 1e-9).unwrap();
    assert!(h.holds && h.phases.phases.iter().all(|x| x.abs() < 1e-9));
}

#[test]
fn hadamard_example_values() {
    let a = hadamard_counterexample_matrix();
    let h = hadamard_phase_bounds(&a, &ComplexMatrix::identity(4), 1e-9).unwrap();
    assert!(max_diff(&h.phases.phases, &[1.3258, 1.249, 0.0, -0.588]) < 5e-4, "{:?}", h.phases.phases);
    assert!(max_diff(&h.phase_sum, &[1.5303, 0.7684, 0.3561, -0.7926]) < 5e-4, "{:?}", h.phase_sum);
    assert!(h.holds);
    assert!(!is_majorized(&h.phases.phases, &h.phase_sum, 1e-8).unwrap().holds);
}

#[test]
fn negative_controls() {
    let c = find_product_phase_counterexample(7, 2000, 3).unwrap().expect("no product counterexample");
    assert!(!is_majorized(&c.lhs, &c.rhs, 1e-8).unwrap().holds);
    assert!(c.rhs.iter().all(|x| x.abs() < 1e-8));

    let c = find_eigenphase_entrywise_counterexample(7, 2000, 4).unwrap().expect("no eigenphase counterexample");
    assert!(c.lhs.iter().zip(&c.rhs).any(|(l, r)| l > r));
    // the majorization itself still holds on the refuting instance
    assert!(is_majorized(&c.lhs, &c.rhs, 1e-8).unwrap().holds);
}

#[test]
fn isometric_compressions_stay_in_sector() {
    let mut rng = random::rng(65);
    let c = sectorial(&mut rng, 6, -0.7, 0.9).matrix;
    let p = phases(&c, None).unwrap();
    for k in 1..6 {
        let x = isometry(&mut rng, 6, k);
        let r = compress(&c, &x, 1e-8).unwrap();
        assert!(r.phases.max() <= p.max() + 1e-8 && r.phases.min() >= p.min() - 1e-8);
    }
}

#[test]
fn verify_suites_pass_at_moderate_trials() {
    for suite in Suite::ALL {
        let cfg = VerifyConfig {
            suite,
            trials: 40,
            seed: 11,
            n: 5,
            ..VerifyConfig::default()
        };
        let report = verify::run(&cfg).unwrap();
        for t in &report.theorems {
            assert!(t.ok(), "{}: {} violations, worst {:?}", t.name, t.violations, t.worst_slack);
        }
        for c in &report.controls {
            assert!(c.ok(cfg.trials), "{} not refuted", c.name);
        }
        assert!(report.passed);
    }
}

#[test]
fn force_pd_product_pairs() {
    let cfg = VerifyConfig {
        suite: Suite::Product,
        trials: 60,
        force_pd: true,
        ..VerifyConfig::default()
    };
    let report = verify::run(&cfg).unwrap();
    assert!(report.passed);
}
