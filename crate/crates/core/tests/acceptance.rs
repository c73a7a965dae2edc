//! Acceptance checks for the numerical model. Runs without the libtest
//! harness so that every criterion prints exactly one PASS/FAIL line.

use abfringe::diff::{fd_curl, fd_time_derivative};
use abfringe::interferometer::{
    build_geometry, fringe_time_series, phase_report, radius_of_curvature, scaling_exponents,
    spacing_exponent, FringeModel, LegName, WBConfig,
};
use abfringe::phase::{
    faraday_check, infinitesimal_phase, total_phase, Direction, LoopSpec, PhaseOptions,
};
use abfringe::trajectory::{
    gyroradius, leg_length, momentum_from_kinetic_energy, momentum_from_wavelength, LegOptions,
};
use abfringe::{Solenoid, UniformField, Vec3, Waveform, CGS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

const LAMBDA: f64 = 4.86e-10;
const D: f64 = 5.0;
const THETA: f64 = 0.02;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: String) -> Outcome {
    Outcome { ok, detail }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn radius_times_field() -> Outcome {
    let mut worst = 0.0f64;
    let mut ok = true;
    for b0 in [0.1, 1.0, 2.5, 5.0] {
        let rb = radius_of_curvature(LAMBDA, b0).unwrap() * b0;
        // Lorentz-force radius pc/(eB) from the de Broglie momentum
        let oracle = gyroradius(momentum_from_wavelength(LAMBDA).unwrap(), b0).unwrap() * b0;
        ok &= (rb - 850.0).abs() <= 9.0 && rel(rb, oracle) < 1e-12;
        worst = worst.max((rb - 850.0).abs());
    }
    let rb = radius_of_curvature(LAMBDA, 1.0).unwrap();
    outcome(ok, format!("R·B0 = {rb:.2} G·cm, max |R·B0 - 850| = {worst:.2}"))
}

fn regime_numbers() -> Outcome {
    let one = phase_report(&WBConfig::mss(1.0), true).unwrap().d_over_r;
    let five = phase_report(&WBConfig::mss(5.0), true).unwrap().d_over_r;
    let ok = rel(one, 6e-3) <= 0.05 && rel(five, 3e-2) <= 0.05;
    outcome(ok, format!("D/R = {one:.4e} at 1 G, {five:.4e} at 5 G"))
}

fn wavelength_energy_consistency() -> Outcome {
    let from_lambda = CGS.planck_h * CGS.c / LAMBDA;
    let t = 60.0 * CGS.kev();
    let mc2 = CGS.m_e * CGS.c * CGS.c;
    let relativistic = (t * t + 2.0 * t * mc2).sqrt();
    let lib_lambda = momentum_from_wavelength(LAMBDA).unwrap() * CGS.c;
    let lib_kinetic = momentum_from_kinetic_energy(t).unwrap() * CGS.c;
    let diff = rel(from_lambda, relativistic);
    let ok = diff <= 5e-3 && rel(lib_lambda, from_lambda) < 1e-12 && rel(lib_kinetic, relativistic) < 1e-12;
    outcome(
        ok,
        format!(
            "pc(λ) = {:.2} keV, pc(60 keV) = {:.2} keV, difference {:.3}%",
            from_lambda / CGS.kev(),
            relativistic / CGS.kev(),
            100.0 * diff
        ),
    )
}

fn exact_cancellation() -> Outcome {
    let rs = 1.0;
    let s = Solenoid::new(rs, Waveform::ramp(3.0, 250.0).unwrap()).unwrap();
    let opts = PhaseOptions::default();
    let mut worst = 0.0f64;
    for factor in [1.5, 2.0, 10.0] {
        for dir in [Direction::CounterClockwise, Direction::Clockwise] {
            let lp = LoopSpec::new(factor * rs, 0.0, 4e-3, dir).unwrap();
            let b = total_phase(&lp, &s, &opts).unwrap();
            worst = worst.max(b.time_dependent_residual.abs() / b.magnetic_time_dependent().abs());
        }
    }
    outcome(worst <= 1e-10, format!("max |residual| / |time-dependent magnetic| = {worst:.2e}"))
}

fn infinitesimal_sum() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let s = Solenoid::new(1.0, Waveform::sinusoid(0.5, 2.0, 60.0, 0.3).unwrap()).unwrap();
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let rho = rng.gen_range(1.0..50.0);
        let dphi = rng.gen_range(1e-6..1e-2);
        let dt = rng.gen_range(1e-9..1e-5);
        let t = rng.gen_range(0.0..1.0 / 60.0);
        let p = infinitesimal_phase(rho, dphi, dt, &s, t).unwrap();
        let scale = p.electric_piece.abs().max(p.magnetic_piece.abs());
        if scale > 0.0 {
            worst = worst.max(p.sum.abs() / scale);
        }
    }
    outcome(worst <= 1e-14, format!("max |sum| / |piece| = {worst:.2e} over 100 draws"))
}

fn faraday_identity() -> Outcome {
    let s = Solenoid::new(1.0, Waveform::sinusoid(0.0, 1.0, 60.0, 0.0).unwrap()).unwrap();
    let opts = PhaseOptions::default();
    let mut worst = 0.0f64;
    for rho in [0.25, 0.7, 0.999, 1.0, 1.3, 4.0, 25.0] {
        for t in [0.0, 1.1e-3, 6.0e-3, 1.2e-2] {
            let f = faraday_check(rho, &s, t, &opts).unwrap();
            worst = worst.max(f.residual.abs() / f.lhs.abs());
        }
    }
    outcome(worst <= 1e-8, format!("max |∮E·dx + (1/c)dΦ/dt| / |∮E·dx| = {worst:.2e}"))
}

fn scaling_laws() -> Outcome {
    let grid: Vec<f64> = (0..12).map(|i| 0.01 * 50f64.powf(i as f64 / 11.0)).collect();
    let e = scaling_exponents(&WBConfig::mss(0.0), &grid).unwrap();
    let d_grid: Vec<f64> = (1..=10).map(f64::from).collect();
    let dl2 = spacing_exponent(&WBConfig::mss(0.05), &d_grid, LegName::L2).unwrap().exponent;
    let ok = (e.l2.exponent - 1.0).abs() <= 0.02
        && (e.m1.exponent - 1.0).abs() <= 0.02
        && (e.l1.exponent - 2.0).abs() <= 0.02
        && (e.m2.exponent - 2.0).abs() <= 0.02
        && (dl2 - 2.0).abs() <= 0.02;
    outcome(
        ok,
        format!(
            "B exponents l1 {:.4} l2 {:.4} m1 {:.4} m2 {:.4}; D exponent l2 {dl2:.4}",
            e.l1.exponent, e.l2.exponent, e.m1.exponent, e.m2.exponent
        ),
    )
}

fn oracle_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    let p = momentum_from_wavelength(LAMBDA).unwrap();
    for b0 in [0.1, 1.0, 5.0] {
        let paths = build_geometry(&WBConfig::mss(b0)).unwrap();
        let field = UniformField::constant(b0);
        for leg in &paths.legs {
            let integrated = leg_length(&leg.boundary, p, &field, &LegOptions::default()).unwrap();
            worst = worst.max(rel(leg.arc.length, integrated));
        }
    }
    outcome(worst <= 1e-6, format!("max relative leg-length difference {worst:.2e}"))
}

fn fringe_sweep() -> Outcome {
    let cfg = WBConfig::mss(0.0);
    let k = CGS.phase_per_flux();
    let area = 2.0 * D * D * THETA.tan();
    let n = 64;
    let sweep = |amp: f64, model| {
        let w = Waveform::sinusoid(0.0, amp, 60.0, 0.0).unwrap();
        fringe_time_series(&cfg, &w, n, model).unwrap().peak_to_peak
    };
    let full = sweep(0.1, FringeModel::FullCancellation);
    let naive = sweep(0.1, FringeModel::NaiveAb);
    let wb = sweep(0.1, FringeModel::WernerBrill);
    let expected = 2.0 * k * 0.1 * area;
    let mut ok = full <= 1e-10 && rel(naive, expected) <= 1e-6 && wb > 0.0 && wb < naive;
    let ratios: Vec<f64> = [1.0, 2.0, 3.0, 4.0, 5.0]
        .iter()
        .map(|&a| sweep(a, FringeModel::WernerBrill) / sweep(a, FringeModel::NaiveAb))
        .collect();
    ok &= ratios.windows(2).all(|w| w[1] > w[0]);
    outcome(
        ok,
        format!(
            "pp full {full:.1e}, naive {naive:.6e} (expected {expected:.6e}), werner-brill {wb:.4e}; residual ratio 1-5 G {:?}",
            ratios.iter().map(|r| format!("{r:.2e}")).collect::<Vec<_>>()
        ),
    )
}

fn field_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let rs = 1.0;
    let s = Solenoid::new(rs, Waveform::sinusoid(0.4, 1.5, 60.0, 0.2).unwrap()).unwrap();
    let h = 1e-5;
    let ht = 1e-7;
    let mut worst = 0.0f64;
    let mut count = 0;
    while count < 100 {
        let rho: f64 = rng.gen_range(0.05..5.0);
        if (rho - rs).abs() < 0.05 {
            continue;
        }
        let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let x = Vec3::new(rho * phi.cos(), rho * phi.sin(), rng.gen_range(-1.0..1.0));
        let t = rng.gen_range(0.0..1.0 / 60.0);
        count += 1;

        let curl = fd_curl(|p, t| s.vector_potential(p, t), x, t, h);
        let b = s.magnetic_field(x, t);
        // outside, B vanishes; measure against the local |A|/ρ scale
        let scale = b.norm().max(s.vector_potential(x, t).norm() / rho);
        worst = worst.max((curl - b).norm() / scale);

        let e_fd = fd_time_derivative(|p, t| s.vector_potential(p, t), x, t, ht) * (-1.0 / CGS.c);
        let e = s.electric_field(x, t);
        if e.norm() > 0.0 {
            worst = worst.max((e_fd - e).norm() / e.norm());
        }
    }
    outcome(worst <= 1e-6, format!("max relative deviation {worst:.2e} over 100 points"))
}

fn main() {
    type Check = fn() -> Outcome;
    let criteria: [(&str, Check, Duration); 10] = [
        ("1 radius of curvature", radius_times_field, Duration::from_millis(1)),
        ("2 regime numbers", regime_numbers, Duration::from_millis(1)),
        ("3 wavelength vs 60 keV", wavelength_energy_consistency, Duration::from_secs(1)),
        ("4 exact cancellation", exact_cancellation, Duration::from_secs(1)),
        ("5 infinitesimal balance", infinitesimal_sum, Duration::from_millis(100)),
        ("6 faraday identity", faraday_identity, Duration::from_secs(1)),
        ("7 scaling laws", scaling_laws, Duration::from_secs(10)),
        ("8 trajectory oracle", oracle_equivalence, Duration::from_secs(30)),
        ("9 fringe sweep", fringe_sweep, Duration::from_secs(10)),
        ("10 field identities", field_identities, Duration::from_secs(1)),
    ];
    let mut failures = 0;
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        let pass = result.ok && in_time;
        if !pass {
            failures += 1;
        }
        println!(
            "{} criterion {name}: {} [{:.3} ms, budget {} ms]{}",
            if pass { "PASS" } else { "FAIL" },
            result.detail,
            elapsed.as_secs_f64() * 1e3,
            budget.as_millis(),
            if in_time { "" } else { " over time budget" }
        );
    }
    println!("{} of 10 criteria passed", 10 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
