//! Electric and magnetic contributions to the Aharonov-Bohm phase of a loop
//! around a solenoid with time-varying flux.
//!
//! The phase is normalised as `α = (e/ħc)[∫∫ E·dx ∧ c dt + ∫ B·dS]`, which is
//! dimensionless in Gaussian units and agrees with `R = 2πħc/(eλB)`.
//!
//! For a [`LoopSpec`] the electric term is the spacetime integral over the
//! cylinder swept by the spatial loop during the traversal window
//! `[t0, t0 + T]`: `(e/ħc) ∫ c ∮ E(x, t)·dx dt`, evaluated by composite
//! Simpson in `t` of spatial line integrals. By Faraday's law this equals
//! `-(e/ħc)[Φ(t0 + T) - Φ(t0)]`. The magnetic term is the flux through the
//! loop at the closing time `t0 + T`. Their sum is therefore `(e/ħc)Φ(t0)`:
//! the flux change during the traversal cancels, and the residual relative to
//! the static flux is exactly the time-dependent flux already present at
//! `t0` (zero when the traversal starts where the time-varying part of the
//! waveform vanishes).

use crate::constants::CGS;
use crate::error::{Error, Result};
use crate::fields::Solenoid;
use crate::geometry::Vec3;
use crate::quadrature::{
    line_integral, simpson, surface_flux, CircleContour, Disk, DiskGrid, DEFAULT_SUBDIVISIONS,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    CounterClockwise,
    Clockwise,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::CounterClockwise => 1.0,
            Direction::Clockwise => -1.0,
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Direction::CounterClockwise => Direction::Clockwise,
            Direction::Clockwise => Direction::CounterClockwise,
        }
    }

    pub fn from_sign(sign: f64) -> Result<Self> {
        match sign {
            1.0 => Ok(Direction::CounterClockwise),
            -1.0 => Ok(Direction::Clockwise),
            _ => Err(Error::invalid("direction must be +1 or -1")),
        }
    }
}

/// A coaxial circular loop traversed once at uniform angular speed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LoopSpec {
    radius: f64,
    t0: f64,
    duration: f64,
    direction: Direction,
}

impl LoopSpec {
    pub fn new(radius: f64, t0: f64, duration: f64, direction: Direction) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::invalid("loop radius must be positive"));
        }
        if !(duration >= 0.0 && duration.is_finite()) || !t0.is_finite() {
            return Err(Error::invalid("loop timing must be finite with duration >= 0"));
        }
        Ok(LoopSpec {
            radius,
            t0,
            duration,
            direction,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// Time at which the loop closes.
    pub fn t_close(&self) -> f64 {
        self.t0 + self.duration
    }

    pub fn reversed(&self) -> Self {
        LoopSpec {
            direction: self.direction.reversed(),
            ..*self
        }
    }

    /// The timed traversal as a contour.
    pub fn timed_contour(&self) -> CircleContour {
        CircleContour {
            duration: self.duration,
            ..self.contour_at(self.t0)
        }
    }

    /// The spatial loop frozen at time `t`.
    pub fn contour_at(&self, t: f64) -> CircleContour {
        CircleContour::at_time(self.radius, t, self.direction.sign())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseOptions {
    /// Simpson panels per contour segment.
    pub n_sub: usize,
    /// Simpson panels over the traversal window.
    pub n_time: usize,
    /// Radial and angular panels for surface fluxes.
    pub disk: DiskGrid,
    /// Relative agreement required between line and surface flux.
    pub consistency_tolerance: f64,
}

impl Default for PhaseOptions {
    fn default() -> Self {
        PhaseOptions {
            n_sub: DEFAULT_SUBDIVISIONS,
            n_time: 64,
            disk: DiskGrid::default(),
            consistency_tolerance: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseBreakdown {
    pub electric: f64,
    pub magnetic: f64,
    pub total: f64,
    pub static_part: f64,
    pub time_dependent_residual: f64,
}

impl PhaseBreakdown {
    /// Time-dependent share of the magnetic term.
    pub fn magnetic_time_dependent(&self) -> f64 {
        self.magnetic - self.static_part
    }
}

fn phase_per_flux() -> f64 {
    CGS.phase_per_flux()
}

/// `(e/ħc) ∫_{t0}^{t0+T} c ∮ E·dx dt` over the loop's traversal window.
pub fn electric_phase(lp: &LoopSpec, s: &Solenoid, opts: &PhaseOptions) -> Result<f64> {
    if lp.duration == 0.0 {
        return Ok(0.0);
    }
    let mut failure = None;
    let circulation = |t: f64| -> f64 {
        match line_integral(|e| s.electric_field(e.position, e.time), &lp.contour_at(t), opts.n_sub) {
            Ok(r) => r.value,
            Err(err) => {
                failure.get_or_insert(err);
                0.0
            }
        }
    };
    let integral = simpson(circulation, lp.t0, lp.t_close(), opts.n_time);
    if let Some(err) = failure {
        return Err(err);
    }
    Ok(phase_per_flux() * CGS.c * integral)
}

/// `(e/ħc)` times the flux through the loop at `t_eval`, evaluated both as
/// `∮ A·dx` and as `∫ B·dS`. Returns the line value after checking the two
/// agree.
pub fn magnetic_flux_phase(
    lp: &LoopSpec,
    s: &Solenoid,
    t_eval: f64,
    opts: &PhaseOptions,
) -> Result<f64> {
    let line = line_integral(
        |e| s.vector_potential(e.position, e.time),
        &lp.contour_at(t_eval),
        opts.n_sub,
    )?
    .value;
    let disk = Disk {
        center: Vec3::ZERO,
        normal: Vec3::Z * lp.direction.sign(),
        radius: lp.radius,
    };
    let grid = opts.disk.clone().with_breaks(&[s.radius()]);
    let surface = surface_flux(|x, t| s.magnetic_field(x, t), &disk, t_eval, &grid)?;
    let scale = line.abs().max(surface.abs());
    if (line - surface).abs() > opts.consistency_tolerance * scale {
        return Err(Error::Inconsistent {
            operation: "magnetic_flux_phase",
            detail: format!("line integral {line:e} vs surface flux {surface:e}"),
        });
    }
    Ok(phase_per_flux() * line)
}

/// Electric part over the traversal, magnetic part when the loop closes, and
/// the split against the static flux.
pub fn total_phase(lp: &LoopSpec, s: &Solenoid, opts: &PhaseOptions) -> Result<PhaseBreakdown> {
    let electric = electric_phase(lp, s, opts)?;
    let magnetic = magnetic_flux_phase(lp, s, lp.t_close(), opts)?;
    let total = electric + magnetic;
    let static_part = phase_per_flux() * lp.direction.sign() * s.static_flux_within(lp.radius);
    Ok(PhaseBreakdown {
        electric,
        magnetic,
        total,
        static_part,
        time_dependent_residual: total - static_part,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FaradayCheck {
    /// `∮ E·dx` counter-clockwise, statvolt.
    pub lhs: f64,
    /// `-(1/c) ∫ ∂B/∂t · dS`, statvolt.
    pub rhs: f64,
    pub residual: f64,
}

impl FaradayCheck {
    pub fn relative_residual(&self) -> f64 {
        let scale = self.lhs.abs().max(self.rhs.abs());
        if scale == 0.0 {
            0.0
        } else {
            self.residual.abs() / scale
        }
    }
}

/// Both sides of `∮E·dx = -(1/c) d/dt ∫B·dS` on a coaxial circle.
pub fn faraday_check(rho: f64, s: &Solenoid, t: f64, opts: &PhaseOptions) -> Result<FaradayCheck> {
    if !(rho > 0.0) {
        return Err(Error::invalid("circle radius must be positive"));
    }
    let lhs = line_integral(
        |e| s.electric_field(e.position, e.time),
        &CircleContour::at_time(rho, t, 1.0),
        opts.n_sub,
    )?
    .value;
    let grid = opts.disk.clone().with_breaks(&[s.radius()]);
    let rate_flux = surface_flux(|x, t| s.magnetic_field_rate(x, t), &Disk::coaxial(rho), t, &grid)?;
    let rhs = -rate_flux / CGS.c;
    Ok(FaradayCheck {
        lhs,
        rhs,
        residual: lhs - rhs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InfinitesimalPhase {
    pub electric_piece: f64,
    pub magnetic_piece: f64,
    pub sum: f64,
}

/// Phase pieces for a short arc `ρΔφ` outside the solenoid covered in `Δt`:
/// `(e/ħc) E·Δx (cΔt)` against `(e/ħc)(ΔφR²/2)(ḂΔt)`.
pub fn infinitesimal_phase(
    rho: f64,
    dphi: f64,
    dt: f64,
    s: &Solenoid,
    t: f64,
) -> Result<InfinitesimalPhase> {
    if !(rho >= s.radius()) {
        return Err(Error::invalid("infinitesimal arc must lie outside the solenoid"));
    }
    let k = phase_per_flux();
    let x = Vec3::new(rho, 0.0, 0.0);
    let step = Vec3::Y * (rho * dphi);
    let electric_piece = k * s.electric_field(x, t).dot(step) * (CGS.c * dt);
    let r2 = s.radius() * s.radius();
    let magnetic_piece = k * (dphi * r2 / 2.0) * (s.waveform().rate(t) * dt);
    Ok(InfinitesimalPhase {
        electric_piece,
        magnetic_piece,
        sum: electric_piece + magnetic_piece,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Waveform;
    use std::f64::consts::PI;

    fn k() -> f64 {
        CGS.phase_per_flux()
    }

    fn ramp_solenoid(b_static: f64, rate: f64) -> Solenoid {
        Solenoid::new(1.0, Waveform::ramp(b_static, rate).unwrap()).unwrap()
    }

    #[test]
    fn static_waveform_has_no_electric_phase() {
        let s = Solenoid::new(1.0, Waveform::constant(5.0)).unwrap();
        let lp = LoopSpec::new(2.0, 0.0, 1e-6, Direction::CounterClockwise).unwrap();
        let b = total_phase(&lp, &s, &PhaseOptions::default()).unwrap();
        assert_eq!(b.electric, 0.0);
        assert!((b.total - b.static_part).abs() <= 1e-12 * b.static_part);
        assert!((b.static_part - k() * PI * 5.0).abs() <= 1e-12 * b.static_part);
    }

    #[test]
    fn ramp_electric_phase_matches_flux_change() {
        let s = ramp_solenoid(0.0, 3.0e3);
        let lp = LoopSpec::new(2.0, 1e-4, 2e-3, Direction::CounterClockwise).unwrap();
        let got = electric_phase(&lp, &s, &PhaseOptions::default()).unwrap();
        let expected = -k() * (s.flux(lp.t_close()) - s.flux(lp.t0()));
        assert!((got - expected).abs() <= 1e-12 * expected.abs());
    }

    #[test]
    fn flux_phase_values() {
        let s = Solenoid::new(1.0, Waveform::constant(1.0)).unwrap();
        let opts = PhaseOptions::default();
        let outside = LoopSpec::new(2.0, 0.0, 0.0, Direction::CounterClockwise).unwrap();
        let v = magnetic_flux_phase(&outside, &s, 0.0, &opts).unwrap();
        assert!((v / 4.77e7 - 1.0).abs() < 1e-3, "{v}");
        let inside = LoopSpec::new(0.4, 0.0, 0.0, Direction::CounterClockwise).unwrap();
        let v = magnetic_flux_phase(&inside, &s, 0.0, &opts).unwrap();
        assert!((v - k() * PI * 0.16).abs() <= 1e-12 * v);
        let off = Solenoid::new(1.0, Waveform::constant(0.0)).unwrap();
        assert_eq!(magnetic_flux_phase(&outside, &off, 0.0, &opts).unwrap(), 0.0);
    }

    #[test]
    fn flux_phase_flags_inconsistent_quadrature() {
        // a negative tolerance makes any disagreement, however small, fatal
        let s = Solenoid::new(1.0, Waveform::constant(1.0)).unwrap();
        let opts = PhaseOptions {
            consistency_tolerance: -1.0,
            ..PhaseOptions::default()
        };
        let lp = LoopSpec::new(3.0, 0.0, 0.0, Direction::CounterClockwise).unwrap();
        assert!(matches!(
            magnetic_flux_phase(&lp, &s, 0.0, &opts),
            Err(Error::Inconsistent { .. })
        ));
    }

    #[test]
    fn residual_is_time_dependent_flux_at_start() {
        let s = Solenoid::new(1.0, Waveform::sinusoid(2.0, 0.5, 60.0, 0.0).unwrap()).unwrap();
        let t0 = 1.0 / 480.0;
        let lp = LoopSpec::new(2.0, t0, 1e-4, Direction::CounterClockwise).unwrap();
        let b = total_phase(&lp, &s, &PhaseOptions::default()).unwrap();
        let expected = k() * PI * s.waveform().time_dependent_part(t0);
        assert!((b.time_dependent_residual - expected).abs() < 1e-9 * expected.abs());
    }

    #[test]
    fn faraday_inside_circle() {
        let s = Solenoid::new(1.0, Waveform::sinusoid(0.0, 1.0, 60.0, 0.2).unwrap()).unwrap();
        let t = 1.3e-3;
        let f = faraday_check(0.5, &s, t, &PhaseOptions::default()).unwrap();
        let analytic = -PI * 0.25 * s.waveform().rate(t) / CGS.c;
        assert!((f.lhs - analytic).abs() < 1e-12 * analytic.abs());
        assert!(f.relative_residual() < 1e-8);
    }

    #[test]
    fn faraday_static_is_zero() {
        let s = Solenoid::new(1.0, Waveform::constant(1.0)).unwrap();
        let f = faraday_check(2.0, &s, 0.0, &PhaseOptions::default()).unwrap();
        assert_eq!((f.lhs, f.rhs), (0.0, 0.0));
    }

    #[test]
    fn infinitesimal_pieces_cancel_and_scale() {
        let s = Solenoid::new(1.0, Waveform::sinusoid(0.0, 1.0, 60.0, 0.0).unwrap()).unwrap();
        let a = infinitesimal_phase(2.0, 1e-3, 1e-6, &s, 0.0).unwrap();
        assert!(a.sum.abs() <= 1e-14 * a.electric_piece.abs());
        let b = infinitesimal_phase(2.0, 2e-3, 1e-6, &s, 0.0).unwrap();
        assert!((b.electric_piece - 2.0 * a.electric_piece).abs() < 1e-14 * b.electric_piece.abs());
        assert!((b.magnetic_piece - 2.0 * a.magnetic_piece).abs() < 1e-14 * b.magnetic_piece.abs());
        // Ḃ = 0 at a quarter period
        let c = infinitesimal_phase(2.0, 1e-3, 1e-6, &s, 0.25 / 60.0).unwrap();
        assert!(c.electric_piece.abs() < 1e-12 * a.electric_piece.abs());
        assert!(infinitesimal_phase(0.5, 1e-3, 1e-6, &s, 0.0).is_err());
    }

    #[test]
    fn direction_from_sign() {
        assert_eq!(Direction::from_sign(-1.0).unwrap(), Direction::Clockwise);
        assert!(Direction::from_sign(0.5).is_err());
    }
}
