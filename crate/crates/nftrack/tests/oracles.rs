//! Library results against independent reference computations.

mod common;

use common::{bisect, fresnel_quadrature, gauss_legendre, linspace};
use nftrack::analysis::{
    corr_i, corr_l, mismatch_arg, solve_a_kappa, solve_zeta_kappa, worst_direction, zeta_arg, BeamModel,
};
use nftrack::beamformer::{digital_steer, receive_analog_combiner, relative_gain};
use nftrack::channel::{focusing_vector, DistanceMode};
use nftrack::geometry::{exact_distance, fresnel_distance, DmaConfig, PlanePoint, PolarPosition};
use nftrack::special::fresnel;
use num_complex::Complex64;
use std::f64::consts::PI;

#[test]
fn fresnel_matches_quadrature() {
    let rule = gauss_legendre(20);
    let mut worst: f64 = 0.0;
    for x in linspace(0.0, 50.0, 401)
        .into_iter()
        .chain([1.4999, 1.5, 1.5001, 0.01, 49.99])
    {
        let (c, s) = fresnel(x);
        let (qc, qs) = fresnel_quadrature(x, &rule);
        worst = worst.max((c - qc).abs()).max((s - qs).abs());
    }
    assert!(worst <= 1e-10, "max deviation {worst:e}");
}

#[test]
fn fresnel_frozen_values() {
    // Reference values from a 20-point composite Gauss-Legendre rule.
    let cases = [
        (0.5, 0.492_344_225_871_446_4, 0.064_732_432_859_999_29),
        (2.0, 0.488_253_406_075_340_8, 0.343_415_678_363_698_2),
        (10.0, 0.499_898_694_205_515_7, 0.468_169_978_584_882_6),
    ];
    for (x, c, s) in cases {
        let (fc, fs) = fresnel(x);
        assert!((fc - c).abs() < 1e-12 && (fs - s).abs() < 1e-12, "x = {x}: {fc} {fs}");
    }
}

#[test]
fn solver_round_trips() {
    let cfg = DmaConfig::reference();
    for kappa in (1..=9).map(|k| 10.0 * k as f64) {
        let a = solve_a_kappa(kappa, &cfg).unwrap();
        assert!((corr_i(a, &cfg).powi(2) - 0.01 * kappa).abs() < 1e-8);
        let z = solve_zeta_kappa(kappa, cfg.n_strips).unwrap();
        assert!((corr_l(z, cfg.n_strips).powi(2) - 0.01 * kappa).abs() < 1e-8);
    }
}

#[test]
fn frozen_roots() {
    let cfg = DmaConfig::reference();
    assert!((solve_a_kappa(50.0, &cfg).unwrap() - 0.76641).abs() < 1e-5);
    assert!((solve_a_kappa(99.0, &cfg).unwrap() - 0.270453).abs() < 1e-6);
    assert!((solve_zeta_kappa(50.0, 10).unwrap() - 1.39760).abs() < 1e-5);
    assert!((solve_zeta_kappa(99.0, 10).unwrap() - 0.174426).abs() < 1e-6);
    let centered = DmaConfig::reference_centered();
    assert!((solve_a_kappa(50.0, &centered).unwrap() - 2.6365).abs() < 1e-3);
}

#[test]
fn depth_limits_hit_the_threshold() {
    let cfg = DmaConfig::reference();
    let model = BeamModel::new(50.0, &cfg).unwrap();
    for r in [3.0, 10.0, 40.0, 200.0, 330.0] {
        for dr in [-model.depth_minus(r), model.depth_plus(r)] {
            let x = mismatch_arg(dr, r, &cfg).unwrap();
            assert!((corr_i(x, &cfg).powi(2) - 0.5).abs() < 1e-9, "r = {r}, dr = {dr}");
        }
    }
}

#[test]
fn angle_sides_match_bisection() {
    let cfg = DmaConfig::reference();
    for kappa in [50.0, 80.0, 99.0] {
        let model = BeamModel::new(kappa, &cfg).unwrap();
        let zeta = solve_zeta_kappa(kappa, cfg.n_strips).unwrap();
        for phi in linspace(0.05, PI - 0.05, 23) {
            let (down, up) = model.angle_sides(phi);
            if up.is_finite() {
                let f = |d: f64| zeta_arg(d, phi, &cfg) - zeta;
                assert!((bisect(f, 0.0, PI - phi) - up).abs() < 1e-9, "up at {phi}");
            } else {
                assert!(zeta_arg(PI - phi, phi, &cfg) < zeta);
            }
            if down.is_finite() {
                let f = |d: f64| -zeta_arg(-d, phi, &cfg) - zeta;
                assert!((bisect(f, 0.0, phi) - down).abs() < 1e-9, "down at {phi}");
            } else {
                assert!(-zeta_arg(-phi, phi, &cfg) < zeta);
            }
        }
    }
}

#[test]
fn worst_direction_matches_brute_force() {
    let cfg = DmaConfig::reference();
    for (r, phi, c) in [
        (20.0, 1.0, 1.0),
        (10.0, 2.5, 0.3),
        (40.0, PI / 2.0, 3.0),
        (8.0, 0.4, 0.5),
    ] {
        let p = PolarPosition::new(r, phi).unwrap();
        let w = worst_direction(c, p, &cfg).unwrap();
        let start = p.to_plane();
        let mut brute = f64::INFINITY;
        for k in 0..200_000 {
            let t = 2.0 * PI * k as f64 / 200_000.0;
            let q = PlanePoint::new(start.x + c * t.cos(), start.y + c * t.sin())
                .to_polar()
                .unwrap();
            if q.r > r {
                continue;
            }
            let x = mismatch_arg(q.r - r, r, &cfg).unwrap();
            brute = brute.min(corr_i(x, &cfg) * corr_l(zeta_arg(q.phi - phi, phi, &cfg), cfg.n_strips));
        }
        assert!(
            w.correlation <= brute + 1e-9,
            "({r}, {phi}, {c}): {} vs {brute}",
            w.correlation
        );
        assert!(
            w.correlation >= brute - 1e-4,
            "({r}, {phi}, {c}): {} vs {brute}",
            w.correlation
        );
        assert!(w.position.distance(p) - c < 1e-6);
    }
}

#[test]
fn fresnel_distance_tracks_exact_beyond_validity_radius() {
    let cfg = DmaConfig::reference();
    let p = PolarPosition::new(28.0, PI / 4.0).unwrap();
    let gap = (exact_distance(&cfg, 9, 199, p).unwrap() - fresnel_distance(&cfg, 9, 199, p).unwrap()).abs();
    assert!(gap < 0.05 * cfg.wavelength, "gap {gap}");
}

#[test]
fn inner_product_matches_relative_gain() {
    let cfg = DmaConfig::reference();
    let (p, q) = (
        PolarPosition::new(25.0, 1.1).unwrap(),
        PolarPosition::new(26.0, 1.12).unwrap(),
    );
    let a = focusing_vector(&cfg, p, DistanceMode::Exact).entries;
    let b = focusing_vector(&cfg, q, DistanceMode::Exact).entries;
    let ip: Complex64 = a.iter().zip(&b).map(|(x, y)| x.conj() * y).sum();
    let n = cfg.n_total() as f64;
    assert!((ip.norm_sqr() / (n * n) - relative_gain(&cfg, p, q)).abs() < 1e-12);
}

#[test]
fn sweep_response_is_half_the_fresnel_steering_vector() {
    // Lossless strips: no propagation factor, so the product reduces to the analog-digital pair.
    let cfg = DmaConfig {
        permittivity: 1.0,
        ..DmaConfig::reference()
    };
    let (r, phi) = (30.0, 1.3);
    let q = receive_analog_combiner(&cfg, r).unwrap();
    let v = digital_steer(&cfg, r, phi);
    let a = focusing_vector(&cfg, PolarPosition::new(r, phi).unwrap(), DistanceMode::Fresnel).entries;
    // v^H Q^H applied to a: the focused half must add up to 0.5 N_e per strip.
    let y = q.combine(&a).unwrap();
    let out: Complex64 = v.iter().zip(&y).map(|(s, t)| s.conj() * t).sum();
    let focused = 0.5 * cfg.n_total() as f64;
    assert!((out.norm() - focused).abs() / focused < 0.05, "|out| = {}", out.norm());
}
