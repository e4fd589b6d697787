use phasekit::linalg::{hermitian_eigvals, inverse, singular_values};
use phasekit::majorization::{is_log_majorized, is_majorized};
use phasekit::matrix::cis;
use phasekit::phase::{
    eigenphases, gcf_from, phase_groups, phases, phases_via_inverse_conjugate, psi_phases, real_sectorial,
    sectorial_decomposition, spd_from, SectorialDecomposition,
};
use phasekit::random::{self, congruence_factor, sectorial, unitary};
use phasekit::ComplexMatrix;
use proptest::prelude::*;

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Unitary commuting with `D`: a random unitary inside each group of
/// equal phases.
fn commuting_unitary(rng: &mut random::TestRng, d_phases: &[f64]) -> ComplexMatrix {
    let n = d_phases.len();
    let mut g = ComplexMatrix::zeros(n, n);
    for r in phase_groups(d_phases, 1e-8) {
        g.set_block(r.start, r.start, &unitary(rng, r.len()));
    }
    g
}

#[test]
fn recovered_phases_match_construction() {
    for trial in 0..200 {
        let mut rng = random::trial_rng(11, trial);
        let n = 2 + (trial as usize % 7);
        let s = sectorial(&mut rng, n, -1.2, 1.2);
        let p = phases(&s.matrix, None).unwrap();
        assert!(max_diff(&p.phases, &s.phases) < 1e-8, "trial {trial}: {:?} vs {:?}", p.phases, s.phases);
        let q = phases_via_inverse_conjugate(&s.matrix).unwrap();
        assert!(max_diff(&q.phases, &p.phases) < 1e-7, "trial {trial}");
        assert!(p.theta < p.min() && p.max() < p.theta + std::f64::consts::PI);
    }
}

#[test]
fn factorizations_reconstruct_and_are_unique() {
    for trial in 0..200 {
        let mut rng = random::trial_rng(12, trial);
        let n = 2 + (trial as usize % 7);
        let c = sectorial(&mut rng, n, -1.4, 1.4).matrix;
        let cn = c.norm_fro();
        let dec = sectorial_decomposition(&c).unwrap();
        assert!((&dec.reconstruct() - &c).norm_fro() <= 1e-9 * cn);
        for (j, z) in dec.d.diag().iter().enumerate() {
            assert!((z.norm() - 1.0).abs() < 1e-12);
            assert!((z.arg() - dec.phases.phases[j]).abs() < 1e-10);
        }
        let spd = spd_from(&dec).unwrap();
        let gcf = gcf_from(&dec).unwrap();
        assert!((&spd.reconstruct() - &c).norm_fro() <= 1e-9 * cn);
        assert!((&gcf.reconstruct() - &c).norm_fro() <= 1e-9 * cn);

        let g = commuting_unitary(&mut rng, &dec.phases.phases);
        let other = SectorialDecomposition {
            t: &g * &dec.t,
            d: dec.d.clone(),
            phases: dec.phases.clone(),
        };
        let spd2 = spd_from(&other).unwrap();
        let gcf2 = gcf_from(&other).unwrap();
        assert!((&spd.p - &spd2.p).norm_fro() <= 1e-8, "trial {trial}");
        assert!((&spd.u - &spd2.u).norm_fro() <= 1e-8, "trial {trial}");
        assert!((&gcf.r - &gcf2.r).norm_fro() <= 1e-8 * (1.0 + gcf.r.norm_fro()), "trial {trial}");
        assert!((&gcf.w - &gcf2.w).norm_fro() <= 1e-8, "trial {trial}");
    }
}

#[test]
fn real_variants_are_real_and_match_complex() {
    for trial in 0..100 {
        let mut rng = random::trial_rng(13, trial);
        let n = 2 + (trial as usize % 7);
        let s = random::real_sectorial(&mut rng, n, 1.4);
        let c = &s.matrix;
        let r = real_sectorial(c).unwrap();
        for m in [&r.t, &r.d, &r.spd.p, &r.spd.u, &r.gcf.r, &r.gcf.w] {
            assert!(m.is_real(0.0));
        }
        let rec = &(&r.t.transpose() * &r.d) * &r.t;
        assert!((&rec - c).norm_fro() <= 1e-9 * c.norm_fro(), "trial {trial}");
        assert!((&r.spd.reconstruct() - c).norm_fro() <= 1e-9 * c.norm_fro());
        assert!((&r.gcf.reconstruct() - c).norm_fro() <= 1e-9 * c.norm_fro());

        let dec = sectorial_decomposition(c).unwrap();
        let spd = spd_from(&dec).unwrap();
        let gcf = gcf_from(&dec).unwrap();
        assert!((&spd.p - &r.spd.p).norm_fro() <= 1e-8, "trial {trial}");
        assert!((&gcf.r - &r.gcf.r).norm_fro() <= 1e-8 * (1.0 + gcf.r.norm_fro()), "trial {trial}");
    }
}

#[test]
fn inverse_law_and_accretivity() {
    for trial in 0..100 {
        let mut rng = random::trial_rng(14, trial);
        let s = sectorial(&mut rng, 5, -1.5, 1.5);
        let p = phases(&s.matrix, None).unwrap().phases;
        let inv = phases(&inverse(&s.matrix).unwrap(), None).unwrap().phases;
        let want: Vec<f64> = p.iter().rev().map(|x| -x).collect();
        assert!(max_diff(&inv, &want) < 1e-7);
        let accretive = p.iter().all(|x| x.abs() < std::f64::consts::FRAC_PI_2);
        let hmin = *hermitian_eigvals(&s.matrix.hermitian_part()).unwrap().last().unwrap();
        assert_eq!(accretive, hmin > 0.0, "trial {trial}");
    }
}

#[test]
fn spd_magnitude_chain() {
    for trial in 0..100 {
        let mut rng = random::trial_rng(15, trial);
        let c = sectorial(&mut rng, 4, -1.3, 1.3).matrix;
        let lam: Vec<f64> = phasekit::linalg::general_eig(&c).unwrap().values.iter().map(|z| z.norm()).collect();
        let sig = singular_values(&c);
        let p = spd_from(&sectorial_decomposition(&c).unwrap()).unwrap().p;
        let sp2: Vec<f64> = singular_values(&p).iter().map(|s| s * s).collect();
        assert!(is_log_majorized(&lam, &sig, 1e-8).unwrap().holds);
        assert!(is_log_majorized(&sig, &sp2, 1e-8).unwrap().holds, "trial {trial}");
    }
}

#[test]
fn psi_matches_closed_form() {
    use std::f64::consts::PI;
    let (theta, alpha) = (PI / 4.0, PI / 12.0);
    let r = ComplexMatrix::from_real(2, 2, &[theta.cos(), -theta.sin(), theta.sin(), theta.cos()]);
    let da = ComplexMatrix::from_real_diag(&[alpha.cos(), alpha.sin()]);
    let c = &(&da * &r) * &da;
    let want = (theta.cos() / (1.0 - theta.sin().powi(2) * (2.0 * alpha).cos().powi(2)).sqrt()).acos();
    let psi = psi_phases(&c).unwrap();
    assert!((psi[0] - want).abs() < 1e-9 && (psi[1] + want).abs() < 1e-9, "{psi:?} vs {want}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn congruence_invariance(seed in any::<u64>(), n in 2usize..6) {
        let mut rng = random::rng(seed);
        let s = sectorial(&mut rng, n, -1.0, 1.3);
        let p = congruence_factor(&mut rng, n);
        let a = phases(&s.matrix, None).unwrap().phases;
        let b = phases(&s.matrix.congruence(&p), None).unwrap().phases;
        prop_assert!(max_diff(&a, &b) < 1e-7);
    }

    #[test]
    fn eigenphases_majorized_by_phases(seed in any::<u64>(), n in 2usize..7) {
        let mut rng = random::rng(seed);
        let c = sectorial(&mut rng, n, -1.5, 1.5).matrix.scale(cis(0.3));
        let e = eigenphases(&c).unwrap();
        let p = phases(&c, None).unwrap().phases;
        prop_assert!(is_majorized(&e, &p, 1e-8).unwrap().holds);
    }

    #[test]
    fn psi_majorized_by_phases_when_on_same_branch(seed in any::<u64>(), n in 2usize..6) {
        let mut rng = random::rng(seed);
        let c = sectorial(&mut rng, n, -1.2, 1.2).matrix;
        let pv = phases(&c, None).unwrap();
        let psi = psi_phases(&c).unwrap();
        if psi.iter().all(|x| *x > pv.theta && *x < pv.theta + std::f64::consts::PI) {
            prop_assert!(is_majorized(&psi, &pv.phases, 1e-8).unwrap().holds);
        }
    }
}
