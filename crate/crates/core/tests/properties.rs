use hkcontact::chart::{adapted_frame, ChartCoords, FoliatedChart};
use hkcontact::curvature::{identity_defects, r0_model, rbar_expansion, sectional, CurvatureRoute, Pairing};
use hkcontact::field::ExtensionFamily;
use hkcontact::hconn::{bracket_identity_residual, hbar_torsion, torsion_expected};
use hkcontact::numerics::{gram_defect, gram_schmidt, richardson_derivative, AmbientVector, RngStream, Sampler};
use hkcontact::report::{from_json, to_json, CheckResult, Summary, SuiteReport};
use hkcontact::sphere::{Alpha, QuaternionSide, SphereContext};
use proptest::prelude::*;

fn ctx(n: usize) -> SphereContext {
    SphereContext::new(n, QuaternionSide::Right, -1.0).unwrap()
}

fn sampler(seed: u64) -> Sampler {
    RngStream::new(seed, 0).rng()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn richardson_is_exact_on_cubics(c in prop::array::uniform4(-10.0..10.0f64), t0 in -2.0..2.0f64) {
        let d = richardson_derivative(
            |t| Ok(AmbientVector::from_vec(vec![c[0] + c[1] * t + c[2] * t * t + c[3] * t * t * t])),
            t0,
            1e-2,
        )
        .unwrap();
        let exact = c[1] + 2.0 * c[2] * t0 + 3.0 * c[3] * t0 * t0;
        prop_assert!((d[0] - exact).abs() <= 1e-9 * (1.0 + exact.abs()));
    }

    #[test]
    fn gram_schmidt_is_orthonormal(seed in any::<u64>(), k in 1usize..8) {
        let mut s = sampler(seed);
        let vs: Vec<_> = (0..k).map(|_| s.gaussian_vector(12)).collect();
        let out = gram_schmidt(&vs).unwrap();
        prop_assert!(gram_defect(&out) <= 1e-12);
    }

    #[test]
    fn structure_axioms_hold(seed in any::<u64>(), n in 1usize..4) {
        let c = ctx(n);
        let mut s = sampler(seed);
        let p = c.random_point(&mut s).into_vector();
        let (x, y) = (c.random_tangent(&p, &mut s), c.random_tangent(&p, &mut s));
        for a in Alpha::ALL {
            let mut sq = c.phi_at(&p, a, &c.phi_at(&p, a, &x));
            sq += &x;
            sq.axpy(-c.eta_at(&p, a, &x), &c.xi_at(&p, a));
            prop_assert!(sq.max_abs() < 1e-12);
            let compat = c.phi_at(&p, a, &x).dot(&c.phi_at(&p, a, &y)) - x.dot(&y)
                + c.eta_at(&p, a, &x) * c.eta_at(&p, a, &y);
            prop_assert!(compat.abs() < 1e-12);
            prop_assert!((c.omega_at(&p, a, &x, &y) + c.omega_at(&p, a, &y, &x)).abs() < 1e-14);
        }
    }

    #[test]
    fn horizontal_vectors_have_no_vertical_part(seed in any::<u64>()) {
        let c = ctx(2);
        let mut s = sampler(seed);
        let p = c.random_point(&mut s).into_vector();
        let x = c.random_horizontal(&p, &mut s);
        prop_assert!((x.norm() - 1.0).abs() < 1e-12);
        prop_assert!(x.dot(&p).abs() < 1e-12);
        for a in Alpha::ALL {
            prop_assert!(c.eta_at(&p, a, &x).abs() < 1e-12);
            prop_assert!(c.eta_at(&p, a, &c.phi_at(&p, a, &x)).abs() < 1e-12);
        }
    }

    #[test]
    fn r0_is_an_algebraic_curvature_tensor(seed in any::<u64>(), k in -5.0..5.0f64) {
        let c = ctx(1);
        let mut s = sampler(seed);
        let p = c.random_point(&mut s).into_vector();
        let [x, y, z, u] = [0; 4].map(|_| c.random_horizontal(&p, &mut s));
        let d = identity_defects(&c, &p, [&x, &y, &z, &u], |a, b, e, f| Ok(r0_model(&c, &p, k, a, b, e, f))).unwrap();
        prop_assert!(d.antisymmetry < 1e-12 && d.bianchi < 1e-12 && d.pair_symmetry < 1e-12);
    }

    #[test]
    fn sphere_sectional_is_one_on_every_plane(seed in any::<u64>(), a in -3.0..3.0f64, b in -3.0..3.0f64) {
        let c = ctx(1);
        let mut s = sampler(seed);
        let p = c.random_point(&mut s).into_vector();
        let (x, y) = (c.random_tangent(&p, &mut s), c.random_tangent(&p, &mut s));
        let k = sectional(&c, &p, &x, &y, &CurvatureRoute::Sphere, 1.0).unwrap();
        prop_assert!((k - 1.0).abs() < 1e-9);
        let x2 = &x.scale(a) + &y.scale(b);
        if let Ok(k2) = sectional(&c, &p, &x2, &y, &CurvatureRoute::Sphere, 1.0) {
            prop_assert!((k2 - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn expansion_is_antisymmetric_and_kills_reeb(seed in any::<u64>()) {
        let c = ctx(1);
        let mut s = sampler(seed);
        let p = c.random_point(&mut s).into_vector();
        let (x, y, z) = (c.random_horizontal(&p, &mut s), c.random_tangent(&p, &mut s), c.random_tangent(&p, &mut s));
        let a = rbar_expansion(&c, &p, &x, &y, &z, Pairing::Distinct);
        let b = rbar_expansion(&c, &p, &y, &x, &z, Pairing::Distinct);
        prop_assert!((&a + &b).max_abs() < 1e-12);
        for al in Alpha::ALL {
            prop_assert!(rbar_expansion(&c, &p, &x, &y, &c.xi_at(&p, al), Pairing::Distinct).max_abs() < 1e-12);
        }
    }

    #[test]
    fn chart_round_trips(z in prop::array::uniform3(-1.7..1.7f64), x in prop::collection::vec(-9.0..9.0f64, 4)) {
        let c = ctx(1);
        let chart = FoliatedChart::new(&c);
        let coords = ChartCoords { z, x };
        prop_assume!(chart.check_domain(&coords).is_ok());
        let p = chart.param(&coords).unwrap();
        prop_assert!((p.norm() - 1.0).abs() < 1e-12);
        let back = chart.inverse(&p).unwrap();
        prop_assert!((&chart.param(&back).unwrap() - &p).max_abs() < 1e-10);
        prop_assert!(adapted_frame(&c, &chart, &coords).unwrap().block_defect(&c) < 1e-9);
    }

    #[test]
    fn report_json_round_trips(
        residuals in prop::collection::vec(prop_oneof![any::<f64>().prop_filter("finite", |v| v.is_finite()), Just(f64::NAN)], 0..6),
        seed in any::<u64>(),
    ) {
        let (_, calibration) = cached_calibration();
        let checks: Vec<_> = residuals
            .iter()
            .enumerate()
            .map(|(i, r)| CheckResult::new(format!("probe.{i}"), "x = x", *r, 1e-6))
            .collect();
        let report = SuiteReport {
            config: hkcontact::config::RunConfig { seed, ..Default::default() },
            calibration,
            summary: Summary::of(&checks),
            checks,
            timing: Default::default(),
        };
        let back = from_json(&to_json(&report)).unwrap();
        prop_assert_eq!(back.checks.len(), report.checks.len());
        for (a, b) in back.checks.iter().zip(&report.checks) {
            prop_assert!(a.residual.to_bits() == b.residual.to_bits() || (a.residual.is_nan() && b.residual.is_nan()));
            prop_assert_eq!(a.pass, b.pass);
        }
        prop_assert_eq!(back.summary, report.summary);
        prop_assert_eq!(back.config, report.config);
        prop_assert_eq!(back.calibration, report.calibration);
    }
}

fn cached_calibration() -> (SphereContext, hkcontact::calibration::CalibrationRecord) {
    use std::sync::OnceLock;
    static CAL: OnceLock<(SphereContext, hkcontact::calibration::CalibrationRecord)> = OnceLock::new();
    CAL.get_or_init(|| hkcontact::calibration::calibrate(1, 42, hkcontact::numerics::DEFAULT_FD_STEP).unwrap())
        .clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn torsion_is_tensorial(seed in any::<u64>()) {
        let c = ctx(1);
        let mut s = sampler(seed);
        let p = c.random_point(&mut s).into_vector();
        let (x, y) = (c.random_tangent(&p, &mut s), c.random_tangent(&p, &mut s));
        let affine = ExtensionFamily::random_affine(8, &mut s);
        let t = hbar_torsion(&c, &p, &x, &y, &affine).unwrap();
        prop_assert!((&t - &torsion_expected(&c, &p, &x, &y)).max_abs() < 1e-8);
        prop_assert!(bracket_identity_residual(&c, &p, &x, &y, &ExtensionFamily::Canonical).unwrap() < 1e-8);
    }

    #[test]
    fn curvature_routes_agree_off_the_vertical_sector(seed in any::<u64>(), slot in 0usize..3) {
        let c = ctx(1);
        let mut s = sampler(seed);
        let p = c.random_point(&mut s).into_vector();
        let [x, y, z] = hkcontact::calibration::mixed_triple(&c, &p, slot, &mut s);
        let direct = CurvatureRoute::hbar_direct(1e-4).apply(&c, &p, &x, &y, &z).unwrap();
        let expanded = rbar_expansion(&c, &p, &x, &y, &z, Pairing::Distinct);
        prop_assert!((&direct - &expanded).max_abs() < 1e-6);
    }
}
