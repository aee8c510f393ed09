use monopair::abelian::{solve_higgs, staircase_average, ChargeConfig, PointCharge, Torus3Spec};
use monopair::diracmodel::{
    chern_number, holomorphic_metric, hopf_identity_suite, scattering_scalar, Chart, DiracChart,
    HopfLiftFrame,
};
use monopair::exact::rat;
use monopair::testkit::ball_point;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn torus(grid: usize) -> Torus3Spec {
    Torus3Spec {
        period: rat(1, 1),
        l1: rat(1, 1),
        l2: rat(1, 1),
        grid: [grid; 3],
        fourier_modes: 24,
    }
}

fn dipole(shift: [BigRational; 2]) -> ChargeConfig {
    let [x, y] = shift;
    ChargeConfig {
        charges: vec![
            PointCharge {
                t: rat(3, 4),
                x: &x + rat(1, 2),
                y: &y + rat(1, 2),
                k: 2,
            },
            PointCharge {
                t: rat(1, 4),
                x: &x + rat(1, 3),
                y: &y + rat(1, 5),
                k: -2,
            },
        ],
        k0: 1,
    }
}

#[test]
fn dipole_field_is_odd_about_its_centre() {
    let field = solve_higgs(&torus(16), &dipole([rat(0, 1), rat(0, 1)])).unwrap();
    let p1 = field.config.charges[0].position();
    let p2 = field.config.charges[1].position();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20 {
        let d: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-0.3..0.3));
        if d.iter().map(|x| x * x).sum::<f64>() < 0.04 {
            continue;
        }
        let a = field.value(&std::array::from_fn(|i| p1[i] + d[i])).unwrap();
        let b = field.value(&std::array::from_fn(|i| p2[i] - d[i])).unwrap();
        assert!((a + b - 2.0 * field.constant).abs() < 1e-10, "{a} {b}");
    }
}

#[test]
fn spatial_translation_moves_the_field() {
    let base = solve_higgs(&torus(16), &dipole([rat(0, 1), rat(0, 1)])).unwrap();
    let moved = solve_higgs(&torus(16), &dipole([rat(1, 8), rat(-1, 6)])).unwrap();
    assert!((base.constant - moved.constant).abs() < 1e-14);
    for p in base.probe_points(3, 0.1) {
        let q = [p[0], p[1] + 0.125, p[2] - 1.0 / 6.0];
        let (Ok(a), Ok(b)) = (base.value(&p), moved.value(&q)) else {
            continue;
        };
        assert!((a - b).abs() < 1e-9);
    }
}

#[test]
fn corrected_flux_averages_to_the_degree() {
    let spec = torus(32);
    let cfg = dipole([rat(0, 1), rat(0, 1)]);
    let field = solve_higgs(&spec, &cfg).unwrap();
    // The staircase is constant on (0, 1/4), (1/4, 3/4), (3/4, 1); weight each midpoint by length.
    let profile = field.flux_profile(&[0.125, 0.5, 0.875]).unwrap();
    let avg =
        0.25 * profile.corrected[0] + 0.5 * profile.corrected[1] + 0.25 * profile.corrected[2];
    let exact = staircase_average(&spec, &cfg);
    assert_eq!(exact, rat(0, 1));
    assert!((avg - 0.0).abs() < 1e-6, "{avg}");
    assert!(profile.max_deviation < 1e-6);
}

#[test]
fn chern_number_is_odd_in_k() {
    for k in 1..=3 {
        let a = chern_number(k, 1.3, 64).unwrap();
        let b = chern_number(-k, 1.3, 64).unwrap();
        assert!((a + b).abs() < 1e-10);
    }
}

#[test]
fn charts_differ_by_the_winding_gauge() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for k in [-2, 1, 3] {
        let (n, s) = (
            DiracChart::new(k, Chart::ThetaNonzero),
            DiracChart::new(k, Chart::ThetaNotPi),
        );
        for _ in 0..10 {
            let p: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            let rho2 = p[1] * p[1] + p[2] * p[2];
            let (an, as_) = (n.connection(&p).unwrap(), s.connection(&p).unwrap());
            // A_x = -a y and A_y = a x, so a rho^2 = x A_y - y A_x.
            let winding = p[1] * (an[2] - as_[2]) - p[2] * (an[1] - as_[1]);
            assert!((winding - k as f64).abs() < 1e-10 * (1.0 + 1.0 / rho2));
            let z = Complex64::new(p[1], p[2]);
            let (mn, ms) = (
                holomorphic_metric(k, Chart::ThetaNonzero, p[0], z).unwrap(),
                holomorphic_metric(k, Chart::ThetaNotPi, p[0], z).unwrap(),
            );
            let ratio = mn.value / ms.value;
            assert!((ratio / z.norm_sqr().powi(k as i32) - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn scattering_inverts_under_conjugate_charge() {
    let z = Complex64::new(0.7, -1.1);
    for k in 1..=3 {
        let prod = scattering_scalar(k, z).unwrap() * scattering_scalar(-k, z).unwrap();
        assert!((prod - Complex64::new(1.0, 0.0)).norm() < 1e-9);
    }
}

#[test]
fn hopf_suite_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let points: Vec<_> = (0..40).map(|_| ball_point(&mut rng, 0.05)).collect();
    let report = hopf_identity_suite(&points, &|_z| 1.0).unwrap();
    assert!(report.max_residual() < 1e-9, "{report:?}");
    let f = |z: Complex64| 1.0 + 0.5 * z.re;
    let report = hopf_identity_suite(&points, &f).unwrap();
    assert!(report.max_residual() < 1e-9, "{report:?}");
    for (w1, w2) in points {
        assert!(HopfLiftFrame::with_alpha(w1, w2, 1.0).lambda_dxi().norm() < 1e-12);
    }
}
