//! One function per experiment, each producing a [`ResultTable`].

use crate::config::RunConfig;
use crate::error::{CliError, Context};
use crate::table::{Cell, ResultTable};
use abfringe::interferometer::{
    build_geometry, fringe_time_series, phase_report_from, radius_of_curvature, scaling_exponents,
    spacing_exponent, LegName,
};
use abfringe::phase::{faraday_check, total_phase, Direction, LoopSpec};
use abfringe::trajectory::{
    cyclotron_period, gyroradius, integrate, momentum_from_kinetic_energy, momentum_from_wavelength,
    ElectronState,
};
use abfringe::{UniformField, Vec3, CGS};
use rayon::prelude::*;

/// Upper bound on integrator steps for one `trajectory` run.
pub const MAX_TRAJECTORY_STEPS: f64 = 2e7;

fn direction_label(d: Direction) -> &'static str {
    match d {
        Direction::CounterClockwise => "ccw",
        Direction::Clockwise => "cw",
    }
}

pub fn cancel(cfg: &RunConfig) -> Result<ResultTable, CliError> {
    let solenoid = cfg.solenoid()?;
    let block = cfg.loop_.as_ref().expect("validated");
    let opts = cfg.numerics.phase_options();
    let jobs: Vec<(f64, Direction)> = block
        .radii_cm
        .iter()
        .flat_map(|&r| block.directions.iter().map(move |&d| (r, d)))
        .collect();
    let results = jobs
        .par_iter()
        .map(|&(r, d)| {
            let lp = LoopSpec::new(r, block.t0_s, block.duration_s, d).during("loop setup")?;
            total_phase(&lp, &solenoid, &opts).during("total_phase")
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut t = ResultTable::new(&[
        ("rho", "cm"),
        ("direction", "-"),
        ("electric", "rad"),
        ("magnetic", "rad"),
        ("total", "rad"),
        ("static_part", "rad"),
        ("magnetic_time_dependent", "rad"),
        ("time_dependent_residual", "rad"),
        ("residual_ratio", "1"),
    ]);
    let mut worst: Option<f64> = None;
    for (&(r, d), b) in jobs.iter().zip(&results) {
        let td = b.magnetic_time_dependent();
        let ratio = (td != 0.0).then(|| b.time_dependent_residual.abs() / td.abs());
        if let Some(x) = ratio {
            worst = Some(worst.map_or(x, |w: f64| w.max(x)));
        }
        t.push(vec![
            r.into(),
            direction_label(d).into(),
            b.electric.into(),
            b.magnetic.into(),
            b.total.into(),
            b.static_part.into(),
            td.into(),
            b.time_dependent_residual.into(),
            ratio.into(),
        ]);
    }
    t.note("solenoid_radius", "cm", solenoid.radius());
    t.note("t_close", "s", block.t0_s + block.duration_s);
    t.note("max_residual_ratio", "1", worst);
    Ok(t)
}

pub fn faraday(cfg: &RunConfig) -> Result<ResultTable, CliError> {
    let solenoid = cfg.solenoid()?;
    let block = cfg.faraday.as_ref().expect("validated");
    let opts = cfg.numerics.phase_options();
    let jobs: Vec<(f64, f64)> = block
        .radii_cm
        .iter()
        .flat_map(|&r| block.times_s.iter().map(move |&t| (r, t)))
        .collect();
    let results = jobs
        .par_iter()
        .map(|&(r, time)| faraday_check(r, &solenoid, time, &opts).during("faraday_check"))
        .collect::<Result<Vec<_>, _>>()?;
    let mut t = ResultTable::new(&[
        ("rho", "cm"),
        ("t", "s"),
        ("inside", "-"),
        ("circulation", "statV"),
        ("flux_rate_term", "statV"),
        ("residual", "statV"),
        ("relative_residual", "1"),
    ]);
    let mut worst = 0.0f64;
    for (&(r, time), f) in jobs.iter().zip(&results) {
        worst = worst.max(f.relative_residual());
        t.push(vec![
            r.into(),
            time.into(),
            (r < solenoid.radius()).into(),
            f.lhs.into(),
            f.rhs.into(),
            f.residual.into(),
            f.relative_residual().into(),
        ]);
    }
    t.note("solenoid_radius", "cm", solenoid.radius());
    t.note("max_relative_residual", "1", worst);
    Ok(t)
}

pub fn wb(cfg: &RunConfig) -> Result<ResultTable, CliError> {
    let block = cfg.wb.as_ref().expect("validated");
    let base = cfg.interferometer(0.0)?;
    let fields = block.b0_gauss.values();
    let reports = fields
        .par_iter()
        .map(|&b| {
            let c = base.with_b0(b);
            let paths = build_geometry(&c).during("build_geometry")?;
            let report = phase_report_from(&c, &paths, block.include_second_order);
            Ok((paths, report))
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let mut t = ResultTable::new(&[
        ("B0", "G"),
        ("R", "cm"),
        ("D_over_R", "1"),
        ("regime", "-"),
        ("l1p", "cm"),
        ("l2p", "cm"),
        ("m1p", "cm"),
        ("m2p", "cm"),
        ("delta_l1", "cm"),
        ("delta_l2", "cm"),
        ("delta_m1", "cm"),
        ("delta_m2", "cm"),
        ("ab_phase", "rad"),
        ("dynamical_phase", "rad"),
        ("net_phase", "rad"),
        ("cancellation_ratio", "1"),
    ]);
    for (&b, (p, r)) in fields.iter().zip(&reports) {
        let regime = serde_json::to_value(r.regime).expect("enum serialises");
        t.push(vec![
            b.into(),
            radius_of_curvature(base.lambda, b).ok().into(),
            r.d_over_r.into(),
            regime.as_str().unwrap_or_default().into(),
            p.l1p.into(),
            p.l2p.into(),
            p.m1p.into(),
            p.m2p.into(),
            p.deltas.l1.into(),
            p.deltas.l2.into(),
            p.deltas.m1.into(),
            p.deltas.m2.into(),
            r.ab_phase.into(),
            r.dynamical_phase.into(),
            r.net_phase.into(),
            r.cancellation_ratio.into(),
        ]);
    }
    t.note("straight_leg", "cm", base.straight_leg());
    t.note("enclosed_area", "cm^2", base.enclosed_area());
    t.note("include_second_order", "-", block.include_second_order);
    if let Some(e) = &block.exponents {
        let fit = scaling_exponents(&base, &e.b_grid_gauss).during("scaling_exponents")?;
        for leg in LegName::ALL {
            let f = fit.get(leg);
            t.note(&format!("exponent_{}_vs_B0", leg.as_str()), "1", f.exponent);
            t.note(&format!("prefactor_{}_vs_B0", leg.as_str()), "cm/G^p", f.prefactor);
        }
        let d = spacing_exponent(&base.with_b0(e.d_fit_b0_gauss), &e.d_grid_cm, LegName::L2)
            .during("spacing_exponent")?;
        t.note("exponent_l2_vs_D", "1", d.exponent);
    }
    Ok(t)
}

pub fn sweep(cfg: &RunConfig) -> Result<ResultTable, CliError> {
    let block = cfg.sweep.as_ref().expect("validated");
    let base = cfg.interferometer(0.0)?;
    let waveform = cfg.waveform()?;
    let series = block
        .models
        .iter()
        .map(|&m| fringe_time_series(&base, &waveform, block.samples, m).during("fringe_time_series"))
        .collect::<Result<Vec<_>, _>>()?;

    let mut columns = vec![("t".to_string(), "s"), ("B0".to_string(), "G")];
    columns.extend(block.models.iter().map(|m| (format!("phase_{}", m.as_str()), "rad")));
    let cols: Vec<(&str, &str)> = columns.iter().map(|(n, u)| (n.as_str(), *u)).collect();
    let mut t = ResultTable::new(&cols);
    for i in 0..block.samples {
        let p0 = series[0].points[i];
        let mut row: Vec<Cell> = vec![p0.t.into(), p0.b0.into()];
        row.extend(series.iter().map(|s| Cell::from(s.points[i].phase)));
        t.push(row);
    }
    t.note("enclosed_area", "cm^2", base.enclosed_area());
    for s in &series {
        t.note(&format!("peak_to_peak_{}", s.model.as_str()), "rad", s.peak_to_peak);
        let gaps = s.points.iter().filter(|p| p.phase.is_none()).count();
        t.note(&format!("gaps_{}", s.model.as_str()), "count", gaps);
    }
    Ok(t)
}

pub fn trajectory(cfg: &RunConfig) -> Result<ResultTable, CliError> {
    let block = cfg.trajectory.as_ref().expect("validated");
    let p = match (block.lambda_cm, block.kinetic_energy_kev) {
        (Some(l), _) => momentum_from_wavelength(l),
        (None, Some(k)) => momentum_from_kinetic_energy(k * CGS.kev()),
        (None, None) => unreachable!("validated"),
    }
    .map_err(|e| CliError::Config(e.to_string()))?;
    let b = block.b0_gauss;
    let period = cyclotron_period(p, b).ok();
    let duration = match (block.revolutions, block.duration_s) {
        (Some(n), _) => n * period.expect("validated: revolutions need a field"),
        (_, Some(d)) => d,
        _ => unreachable!("validated"),
    };
    let dt = block
        .dt_s
        .unwrap_or_else(|| period.map_or(duration * 1e-4, |tc| tc * 1e-4))
        .min(duration);
    if duration / dt > MAX_TRAJECTORY_STEPS {
        return Err(CliError::Config(format!(
            "{:.0} steps requested; the limit is {MAX_TRAJECTORY_STEPS:e}",
            duration / dt
        )));
    }
    let field = UniformField::constant(b);
    let start = ElectronState::new(Vec3::ZERO, Vec3::new(p, 0.0, 0.0), 0.0);
    let traj = integrate(start, &field, dt, duration).during("integrate")?;

    let mut t = ResultTable::new(&[
        ("t", "s"),
        ("x", "cm"),
        ("y", "cm"),
        ("z", "cm"),
        ("px", "g*cm/s"),
        ("py", "g*cm/s"),
        ("pz", "g*cm/s"),
        ("energy", "erg"),
        ("path_length", "cm"),
    ]);
    let last = traj.samples.len() - 1;
    let mut drift = 0.0f64;
    for (i, s) in traj.samples.iter().enumerate() {
        drift = drift.max((s.state.momentum.norm() / p - 1.0).abs());
        if i % block.sample_every != 0 && i != last {
            continue;
        }
        let (x, m) = (s.state.position, s.state.momentum);
        t.push(vec![
            s.state.time.into(),
            x.x.into(),
            x.y.into(),
            x.z.into(),
            m.x.into(),
            m.y.into(),
            m.z.into(),
            s.state.energy().into(),
            s.path_length.into(),
        ]);
    }
    t.note("momentum", "g*cm/s", p);
    t.note("pc", "keV", p * CGS.c / CGS.kev());
    t.note("kinetic_energy", "keV", start.kinetic_energy() / CGS.kev());
    t.note("speed_over_c", "1", start.velocity().norm() / CGS.c);
    t.note("gyroradius", "cm", gyroradius(p, b).ok());
    t.note("cyclotron_period", "s", period);
    t.note("dt", "s", dt);
    t.note("steps", "count", last);
    t.note("max_momentum_drift", "1", drift);
    Ok(t)
}
