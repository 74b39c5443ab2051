use std::f64::consts::PI;

use kerr_cooling::bogoliubov::{build_frame, wrap_angle};
use kerr_cooling::constants::thermal_occupation;
use kerr_cooling::design::{drive_powers, DriveConfig, LinearizedParams};
use kerr_cooling::point::{Coupling, Detuning, NoSqueezeDetuning, OperatingPoint, Squeezing};
use kerr_cooling::SystemParams;
use num_complex::Complex64;
use proptest::prelude::*;

const WC: f64 = 2.0 * PI * 50e3;

fn params(kb: f64) -> SystemParams {
    SystemParams {
        omega_a: 2.0 * PI * 30e9,
        omega_b: 2.0 * PI * 30e9,
        omega_c: WC,
        kappa_a: kb * WC,
        kappa_b: kb * WC,
        kappa_c: 1e-9 * WC,
        g: 0.0,
        k_kerr: 0.0,
        temperature: 0.5,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn occupation_falls_with_frequency_and_rises_with_temperature(
        w in 1e3f64..1e12,
        t in 1e-3f64..10.0,
        f in 1.01f64..10.0,
    ) {
        let n = thermal_occupation(w, t).unwrap();
        prop_assert!(n >= 0.0);
        prop_assert!(thermal_occupation(w * f, t).unwrap() <= n);
        prop_assert!(thermal_occupation(w, t * f).unwrap() >= n);
    }

    #[test]
    fn wrapped_angle_lies_in_half_open_interval(x in -100.0f64..100.0) {
        let y = wrap_angle(x);
        prop_assert!(y > -PI && y <= PI);
        let turns = (x - y) / (2.0 * PI);
        prop_assert!((turns - turns.round()).abs() < 1e-9);
    }

    #[test]
    fn squeezed_frame_is_a_unit_bogoliubov_map(
        d in 0.05f64..3.0,
        frac in 0.0f64..0.99,
        theta in -PI..PI,
    ) {
        let lin = LinearizedParams {
            big_g: 0.1 * WC,
            lambda: frac * d * WC,
            theta,
            delta_b_prime: d * WC,
        };
        let f = build_frame(&lin, 0.06).unwrap();
        prop_assert!((f.r.cosh().powi(2) - f.r.sinh().powi(2) - 1.0).abs() < 1e-10);
        prop_assert!(f.n_beta >= 0.06 - 1e-12);
        prop_assert!(f.bath_is_physical());
    }

    #[test]
    fn exact_occupancy_is_frame_independent(
        kb in 1.0f64..10.0,
        db in 0.05f64..1.5,
        gc in 0.01f64..0.3,
    ) {
        let point = OperatingPoint {
            params: params(kb),
            coupling: Coupling::Cal(gc * WC),
            detuning: Detuning::Bogoliubov(db * WC),
            squeezing: Squeezing::Optimal,
            no_squeeze_detuning: NoSqueezeDetuning::Matched,
        };
        let report = point.evaluate().unwrap();
        if report.stable() {
            let res = point.frame_equivalence_residual(&report).unwrap();
            prop_assert!(res < 1e-8, "residual {res}");
            prop_assert!(report.n_c_exact() >= 0.0);
        }
    }

    #[test]
    fn drive_power_scales_quadratically(
        re in -1e12f64..1e12,
        im in -1e12f64..1e12,
        s in 0.1f64..10.0,
    ) {
        let p = params(2.0);
        let e = Complex64::new(re, im);
        let base = DriveConfig {
            eps_a: e,
            eps_plus: e,
            eps_minus: e * 0.5,
            delta_a: 0.0,
            delta_b: 0.0,
            delta_d: 0.0,
        };
        let scaled = DriveConfig {
            eps_a: e * s,
            eps_plus: e * s,
            eps_minus: e * 0.5 * s,
            ..base
        };
        let p0 = drive_powers(&p, &base).unwrap();
        let p1 = drive_powers(&p, &scaled).unwrap();
        let tol = 1e-12 * s * s;
        prop_assert!((p1.p_a - s * s * p0.p_a).abs() <= tol * p0.p_a.max(1e-300));
        prop_assert!((p1.p_plus - s * s * p0.p_plus).abs() <= tol * p0.p_plus.max(1e-300));
        prop_assert!((p0.p_plus - 4.0 * p0.p_minus).abs() <= 1e-12 * p0.p_plus.max(1e-300));
    }
}
