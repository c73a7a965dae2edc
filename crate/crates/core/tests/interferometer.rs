use abfringe::interferometer::{
    build_geometry, fringe_time_series, phase_report, polygon_area, radius_of_curvature,
    scaling_exponents, spacing_exponent, FringeModel, LegName, Regime, WBConfig,
};
use abfringe::trajectory::{leg_length, momentum_from_wavelength, LegOptions};
use abfringe::{Error, UniformField, Vec3, Waveform, CGS};
use approx::assert_relative_eq;
use proptest::prelude::*;

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect()
}

/// Samples each arc densely and returns the upper-then-reversed-lower loop.
fn bowed_loop(cfg: &WBConfig) -> Vec<Vec3> {
    let p = build_geometry(cfg).unwrap();
    let sample = |name: LegName, reverse: bool| -> Vec<Vec3> {
        let arc = p.leg(name).arc;
        let n = 2000;
        let mut pts: Vec<Vec3> = (0..n).map(|i| arc.point_at(arc.length * i as f64 / n as f64)).collect();
        if reverse {
            pts = (1..=n).map(|i| arc.point_at(arc.length * i as f64 / n as f64)).rev().collect();
        }
        pts
    };
    let mut pts = sample(LegName::M1, false);
    pts.extend(sample(LegName::M2, false));
    pts.extend(sample(LegName::L2, true));
    pts.extend(sample(LegName::L1, true));
    pts
}

#[test]
fn diamond_area_matches_polygon() {
    for (d, theta) in [(5.0, 0.02), (1.0, 0.3), (12.0, 0.6)] {
        let cfg = WBConfig::new(d, theta, 4.86e-10, 0.0).unwrap();
        assert_relative_eq!(polygon_area(&cfg.diamond_vertices()), cfg.enclosed_area(), max_relative = 1e-14);
    }
}

#[test]
fn bowing_changes_area_at_second_order() {
    let base = WBConfig::mss(0.0).enclosed_area();
    let da = |b: f64| polygon_area(&bowed_loop(&WBConfig::mss(b))) - base;
    let (a1, a2) = (da(0.5), da(1.0));
    assert!(a1.abs() < 1e-3 * base);
    let ratio = a2 / a1;
    assert!(ratio > 1.5 && ratio < 4.5, "{ratio}");
}

#[test]
fn deltas_shrink_monotonically_toward_zero_field() {
    let mut b = 2.0;
    let mut prev = build_geometry(&WBConfig::mss(b)).unwrap().deltas;
    for _ in 0..12 {
        b /= 2.0;
        let d = build_geometry(&WBConfig::mss(b)).unwrap().deltas;
        for leg in LegName::ALL {
            assert!(d.get(leg).abs() < prev.get(leg).abs(), "{leg:?} at {b}");
        }
        let l1 = build_geometry(&WBConfig::mss(b)).unwrap();
        // arc minus chord is second order
        assert_relative_eq!(d.l1 / prev.l1, 0.25, max_relative = 1e-3);
        assert!(l1.l1p >= l1.l1);
        prev = d;
    }
}

#[test]
fn second_order_pieces_cancel_in_path_difference() {
    let p = build_geometry(&WBConfig::mss(0.7)).unwrap();
    assert_eq!(p.deltas.l1, p.deltas.m2);
    let full = phase_report(&WBConfig::mss(0.7), true).unwrap();
    let first = phase_report(&WBConfig::mss(0.7), false).unwrap();
    assert_relative_eq!(full.dynamical_phase, first.dynamical_phase, max_relative = 1e-9);
}

#[test]
fn exponents_follow_first_and_second_order() {
    let e = scaling_exponents(&WBConfig::mss(0.0), &log_grid(0.01, 0.5, 12)).unwrap();
    assert!((e.l2.exponent - 1.0).abs() <= 0.02);
    assert!((e.m1.exponent - 1.0).abs() <= 0.02);
    assert!((e.l1.exponent - 2.0).abs() <= 0.02);
    assert!((e.m2.exponent - 2.0).abs() <= 0.02);
    let d = spacing_exponent(&WBConfig::mss(0.05), &log_grid(1.0, 10.0, 8), LegName::L2).unwrap();
    assert!((d.exponent - 2.0).abs() <= 0.02, "{}", d.exponent);
    let d1 = spacing_exponent(&WBConfig::mss(0.05), &log_grid(1.0, 10.0, 8), LegName::L1).unwrap();
    assert!((d1.exponent - 3.0).abs() <= 0.02, "{}", d1.exponent);
}

#[test]
fn exponent_fit_needs_nonzero_deltas() {
    let r = scaling_exponents(&WBConfig::mss(0.0), &[0.0, 0.0, 0.0, 0.0]);
    assert!(matches!(r, Err(Error::TooFewPoints { usable: 0, .. })));
}

#[test]
fn arcs_agree_with_integrated_trajectories() {
    let p = momentum_from_wavelength(4.86e-10).unwrap();
    for b0 in [-2.0, 0.0, 0.3, 3.0] {
        let paths = build_geometry(&WBConfig::mss(b0)).unwrap();
        let field = UniformField::constant(b0);
        for leg in &paths.legs {
            let l = leg_length(&leg.boundary, p, &field, &LegOptions::default()).unwrap();
            assert_relative_eq!(l, leg.arc.length, max_relative = 1e-9);
        }
    }
}

#[test]
fn regime_matches_bending_angle() {
    let one = phase_report(&WBConfig::mss(1.0), true).unwrap();
    let r = radius_of_curvature(4.86e-10, 1.0).unwrap();
    assert_relative_eq!(one.d_over_r, 5.0 / r, max_relative = 1e-14);
    assert_eq!(one.regime, Regime::Marginal);
    assert_eq!(phase_report(&WBConfig::mss(-5.0), true).unwrap().regime, Regime::Invalid);
}

#[test]
fn cancellation_is_partial_and_degrades_with_field() {
    let mut last = 0.0;
    for b in [0.5, 1.0, 2.0, 3.0, 4.0, 5.0] {
        let r = phase_report(&WBConfig::mss(b), true).unwrap();
        let ratio = r.cancellation_ratio.unwrap();
        assert!(ratio > last && ratio < 1e-2, "{b}: {ratio}");
        last = ratio;
    }
}

#[test]
fn ab_phase_is_flux_through_diamond() {
    let cfg = WBConfig::mss(0.25);
    let r = phase_report(&cfg, false).unwrap();
    let oracle = CGS.e / (CGS.hbar * CGS.c) * 0.25 * 2.0 * 25.0 * 0.02f64.tan();
    assert_relative_eq!(r.ab_phase, oracle, max_relative = 1e-14);
    assert_relative_eq!(r.net_phase, r.ab_phase + r.dynamical_phase);
}

#[test]
fn sweep_models() {
    let cfg = WBConfig::mss(0.0);
    let w = Waveform::sinusoid(0.2, 0.1, 60.0, 0.0).unwrap();
    let full = fringe_time_series(&cfg, &w, 40, FringeModel::FullCancellation).unwrap();
    assert_eq!(full.peak_to_peak, 0.0);
    assert_eq!(full.points.len(), 40);
    let expected = CGS.phase_per_flux() * 0.2 * cfg.enclosed_area();
    assert!(full.points.iter().all(|p| p.phase == Some(expected)));
    let naive = fringe_time_series(&cfg, &w, 40, FringeModel::NaiveAb).unwrap();
    let wb = fringe_time_series(&cfg, &w, 40, FringeModel::WernerBrill).unwrap();
    assert!(wb.peak_to_peak > 0.0 && wb.peak_to_peak < naive.peak_to_peak);
    for (i, p) in naive.points.iter().enumerate() {
        assert_relative_eq!(p.t, i as f64 / 40.0 / 60.0, max_relative = 1e-15);
    }
}

#[test]
fn sweep_records_unsolvable_samples_as_gaps() {
    // 5 kG bends a 255 keV/c electron on a 0.17 cm orbit
    let w = Waveform::sinusoid(0.0, 5e3, 60.0, 0.0).unwrap();
    let s = fringe_time_series(&WBConfig::mss(0.0), &w, 16, FringeModel::WernerBrill).unwrap();
    assert_eq!(s.points[0].phase, Some(0.0));
    assert!(s.points[4].phase.is_none());
}

#[test]
fn sweep_is_independent_of_thread_count() {
    let cfg = WBConfig::mss(0.0);
    let w = Waveform::sinusoid(0.0, 2.0, 60.0, 0.3).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| fringe_time_series(&cfg, &w, 33, FringeModel::WernerBrill).unwrap())
    };
    assert_eq!(run(1), run(4));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mirror_symmetry_swaps_legs(b in 0.1f64..20.0) {
        let up = build_geometry(&WBConfig::mss(b)).unwrap().deltas;
        let down = build_geometry(&WBConfig::mss(-b)).unwrap().deltas;
        prop_assert!((up.l2 - down.m1).abs() <= 1e-10 * up.l2.abs());
        prop_assert!((up.m1 - down.l2).abs() <= 1e-10 * up.m1.abs());
        prop_assert!((up.l1 - down.m2).abs() <= 1e-10 * up.l1.abs());
    }

    #[test]
    fn net_phase_is_odd_in_field(b in 0.01f64..10.0) {
        let up = phase_report(&WBConfig::mss(b), true).unwrap();
        let down = phase_report(&WBConfig::mss(-b), true).unwrap();
        prop_assert!((up.net_phase + down.net_phase).abs() <= 1e-7 * up.net_phase.abs());
        prop_assert_eq!(up.regime, down.regime);
    }

    #[test]
    fn arcs_end_on_their_planes(
        b in -30.0f64..30.0,
        d in 0.5f64..20.0,
        theta in 0.005f64..0.3,
    ) {
        let cfg = WBConfig::new(d, theta, 4.86e-10, b).unwrap();
        if let Ok(p) = build_geometry(&cfg) {
            prop_assert!((p.leg(LegName::L2).arc.end().x - 2.0 * d).abs() <= 1e-12 * d);
            prop_assert!(p.leg(LegName::M1).arc.start.x.abs() <= 1e-12 * d);
            prop_assert!((p.l1p - p.m2p).abs() <= 1e-12 * d);
        }
    }
}
