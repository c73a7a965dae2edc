//! Relativistic electron motion under the Lorentz force, integrated with
//! classic fourth-order Runge-Kutta.
//!
//! The state is `(x, p, s)` with `dx/dt = pc²/E`, `dp/dt = q(E + v/c × B)`,
//! `ds/dt = |v|` and `q = -e`. Accumulating the arc length `s` as a state
//! component keeps it at the same order as the position.
//!
//! This module knows nothing about arcs or radii of curvature; it is used as
//! an independent check of [`crate::interferometer`].

use crate::constants::CGS;
use crate::error::{Error, Result};
use crate::fields::EmField;
use crate::geometry::Vec3;
use crate::interferometer::LegBoundary;
use serde::Serialize;
use std::f64::consts::TAU;

/// Electron charge in statcoulomb, sign included.
pub const CHARGE: f64 = -CGS.e;

/// Fraction of the cyclotron period used as the default step.
pub const STEPS_PER_GYRATION: f64 = 1e4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ElectronState {
    pub position: Vec3,
    pub momentum: Vec3,
    pub time: f64,
}

impl ElectronState {
    pub fn new(position: Vec3, momentum: Vec3, time: f64) -> Self {
        ElectronState {
            position,
            momentum,
            time,
        }
    }

    /// Total energy `√((pc)² + (m_e c²)²)` in erg.
    pub fn energy(&self) -> f64 {
        energy(self.momentum)
    }

    pub fn kinetic_energy(&self) -> f64 {
        self.energy() - CGS.electron_rest_energy()
    }

    pub fn velocity(&self) -> Vec3 {
        velocity(self.momentum)
    }

    pub fn is_finite(&self) -> bool {
        self.position.is_finite() && self.momentum.is_finite() && self.time.is_finite()
    }
}

pub fn energy(p: Vec3) -> f64 {
    let pc = p.norm() * CGS.c;
    pc.hypot(CGS.electron_rest_energy())
}

pub fn velocity(p: Vec3) -> Vec3 {
    p * (CGS.c * CGS.c / energy(p))
}

/// de Broglie momentum `2πħ/λ`.
pub fn momentum_from_wavelength(lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::invalid("wavelength must be positive"));
    }
    Ok(TAU * CGS.hbar / lambda)
}

/// Momentum of an electron with kinetic energy `t_kin` (erg).
pub fn momentum_from_kinetic_energy(t_kin: f64) -> Result<f64> {
    if !(t_kin >= 0.0 && t_kin.is_finite()) {
        return Err(Error::invalid("kinetic energy must be non-negative"));
    }
    let pc = (t_kin * (t_kin + 2.0 * CGS.electron_rest_energy())).sqrt();
    Ok(pc / CGS.c)
}

/// `pc/(e|B|)` in cm.
pub fn gyroradius(p: f64, b: f64) -> Result<f64> {
    if b == 0.0 {
        return Err(Error::InfiniteRadius);
    }
    Ok(p.abs() * CGS.c / (CGS.e * b.abs()))
}

/// Relativistic cyclotron period `2πE/(e|B|c)`.
pub fn cyclotron_period(p: f64, b: f64) -> Result<f64> {
    if b == 0.0 {
        return Err(Error::InfiniteRadius);
    }
    Ok(TAU * energy(Vec3::new(p, 0.0, 0.0)) / (CGS.e * b.abs() * CGS.c))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectorySample {
    pub state: ElectronState,
    /// Arc length travelled since the start, cm.
    pub path_length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
}

impl Trajectory {
    pub fn last(&self) -> &TrajectorySample {
        self.samples.last().expect("trajectory is never empty")
    }

    pub fn path_length(&self) -> f64 {
        self.last().path_length
    }

    pub fn positions(&self) -> impl Iterator<Item = Vec3> + '_ {
        self.samples.iter().map(|s| s.state.position)
    }
}

/// Integration stopped on a non-finite state.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegrationFailure {
    pub last_good: ElectronState,
    pub reason: String,
}

impl From<IntegrationFailure> for Error {
    fn from(f: IntegrationFailure) -> Self {
        Error::Integration {
            time: f.last_good.time,
            reason: f.reason,
        }
    }
}

#[derive(Clone, Copy)]
struct Deriv {
    dx: Vec3,
    dp: Vec3,
    ds: f64,
}

fn derivative<F: EmField + ?Sized>(field: &F, x: Vec3, p: Vec3, t: f64) -> Deriv {
    let v = velocity(p);
    let e = field.electric_field(x, t);
    let b = field.magnetic_field(x, t);
    Deriv {
        dx: v,
        dp: (e + v.cross(b) / CGS.c) * CHARGE,
        ds: v.norm(),
    }
}

/// One RK4 step of size `h`; returns the new state and the arc length gained.
pub fn rk4_step<F: EmField + ?Sized>(field: &F, state: &ElectronState, h: f64) -> (ElectronState, f64) {
    let (x, p, t) = (state.position, state.momentum, state.time);
    let k1 = derivative(field, x, p, t);
    let k2 = derivative(field, x + k1.dx * (0.5 * h), p + k1.dp * (0.5 * h), t + 0.5 * h);
    let k3 = derivative(field, x + k2.dx * (0.5 * h), p + k2.dp * (0.5 * h), t + 0.5 * h);
    let k4 = derivative(field, x + k3.dx * h, p + k3.dp * h, t + h);
    let w = h / 6.0;
    let next = ElectronState {
        position: x + (k1.dx + k2.dx * 2.0 + k3.dx * 2.0 + k4.dx) * w,
        momentum: p + (k1.dp + k2.dp * 2.0 + k3.dp * 2.0 + k4.dp) * w,
        time: t + h,
    };
    (next, (k1.ds + 2.0 * k2.ds + 2.0 * k3.ds + k4.ds) * w)
}

fn checked_step<F: EmField + ?Sized>(
    field: &F,
    state: &ElectronState,
    h: f64,
) -> std::result::Result<(ElectronState, f64), IntegrationFailure> {
    let (next, ds) = rk4_step(field, state, h);
    if next.is_finite() && ds.is_finite() {
        Ok((next, ds))
    } else {
        Err(IntegrationFailure {
            last_good: *state,
            reason: "state became non-finite".into(),
        })
    }
}

/// Integrates for `duration` seconds with step `dt`, recording every step.
/// The last step is shortened so the trajectory ends exactly at
/// `state0.time + duration`.
pub fn integrate<F: EmField + ?Sized>(
    state0: ElectronState,
    field: &F,
    dt: f64,
    duration: f64,
) -> Result<Trajectory> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::invalid("dt must be positive"));
    }
    if !(duration >= dt && duration.is_finite()) {
        return Err(Error::invalid("duration must be at least one step"));
    }
    if !state0.is_finite() {
        return Err(Error::NonFinite("initial electron state"));
    }
    let steps = (duration / dt).ceil() as usize;
    let mut samples = Vec::with_capacity(steps + 1);
    samples.push(TrajectorySample {
        state: state0,
        path_length: 0.0,
    });
    let mut state = state0;
    let mut s = 0.0;
    for i in 1..=steps {
        let target = state0.time + duration * (i as f64 * dt / duration).min(1.0);
        let h = target - state.time;
        let (next, ds) = checked_step(field, &state, h)?;
        state = ElectronState {
            time: target,
            ..next
        };
        s += ds;
        samples.push(TrajectorySample {
            state,
            path_length: s,
        });
    }
    Ok(Trajectory { samples })
}

/// Result of running an electron to a plane `x = const`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlaneCrossing {
    pub state: ElectronState,
    pub path_length: f64,
}

/// Integrates until the electron first reaches the plane `x = plane_x`, then
/// refines the final partial step by bisection. Fails if the plane is not
/// reached within `max_time`.
pub fn integrate_to_plane<F: EmField + ?Sized>(
    state0: ElectronState,
    field: &F,
    dt: f64,
    plane_x: f64,
    max_time: f64,
) -> Result<PlaneCrossing> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::invalid("dt must be positive"));
    }
    let side = (plane_x - state0.position.x).signum();
    let beyond = |st: &ElectronState| (st.position.x - plane_x) * side >= 0.0;
    if beyond(&state0) {
        return Ok(PlaneCrossing {
            state: state0,
            path_length: 0.0,
        });
    }
    let mut state = state0;
    let mut s = 0.0;
    loop {
        if state.time - state0.time > max_time {
            return Err(Error::Integration {
                time: state.time,
                reason: format!("plane x = {plane_x} not reached"),
            });
        }
        let (next, ds) = checked_step(field, &state, dt)?;
        if beyond(&next) {
            let (mut lo, mut hi) = (0.0, dt);
            let mut best = (next, ds);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let trial = checked_step(field, &state, mid)?;
                if beyond(&trial.0) {
                    hi = mid;
                    best = trial;
                } else {
                    lo = mid;
                }
            }
            return Ok(PlaneCrossing {
                state: best.0,
                path_length: s + best.1,
            });
        }
        state = next;
        s += ds;
    }
}

/// Field seen by a time-reversed electron: same `E`, opposite `B`, clock
/// running backwards from `t_ref`.
pub struct TimeReversed<'a, F: EmField + ?Sized> {
    pub inner: &'a F,
    pub t_ref: f64,
}

impl<F: EmField + ?Sized> EmField for TimeReversed<'_, F> {
    fn electric_field(&self, x: Vec3, t: f64) -> Vec3 {
        self.inner.electric_field(x, self.t_ref - t)
    }

    fn magnetic_field(&self, x: Vec3, t: f64) -> Vec3 {
        -self.inner.magnetic_field(x, self.t_ref - t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LegOptions {
    /// Step size; by default the smaller of 10⁻⁴ of the cyclotron period and
    /// 1/400 of the straight-line transit time.
    pub dt: Option<f64>,
    /// Shooting stops once the endpoint miss is below this many cm.
    pub miss_tolerance: f64,
    pub max_iterations: usize,
}

impl Default for LegOptions {
    fn default() -> Self {
        LegOptions {
            dt: None,
            miss_tolerance: 1e-13,
            max_iterations: 200,
        }
    }
}

/// Transit budget: a leg that takes longer than this multiple of the
/// straight-line time is treated as not reaching its plane.
const TRANSIT_SLACK: f64 = 20.0;

fn planar(heading: f64, p: f64) -> Vec3 {
    Vec3::new(heading.cos(), heading.sin(), 0.0) * p
}

/// Integrated path length of one interferometer leg with momentum `p`.
///
/// Forward legs are integrated from their start to the target plane;
/// backward legs are run time-reversed from their end. Chord legs are found
/// by shooting over the launch angle until the electron passes through the
/// end point.
pub fn leg_length<F: EmField + ?Sized>(
    boundary: &LegBoundary,
    p: f64,
    field: &F,
    opts: &LegOptions,
) -> Result<f64> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::invalid("momentum must be positive"));
    }
    let speed = velocity(Vec3::new(p, 0.0, 0.0)).x;
    let step = |distance: f64, origin: Vec3| -> Result<f64> {
        if let Some(dt) = opts.dt {
            return Ok(dt);
        }
        let transit = distance.abs().max(f64::MIN_POSITIVE) / speed;
        let b = field.magnetic_field(origin, 0.0).norm();
        let mut dt = transit / 400.0;
        if b > 0.0 {
            dt = dt.min(cyclotron_period(p, b)? / STEPS_PER_GYRATION);
        }
        Ok(dt)
    };
    match *boundary {
        LegBoundary::Forward {
            start,
            heading,
            plane_x,
        } => {
            let gap = plane_x - start.x;
            let dt = step(gap, start)?;
            let run = integrate_to_plane(
                ElectronState::new(start, planar(heading, p), 0.0),
                field,
                dt,
                plane_x,
                TRANSIT_SLACK * gap.abs() / speed,
            )?;
            Ok(run.path_length)
        }
        LegBoundary::Backward {
            end,
            heading,
            plane_x,
        } => {
            let gap = end.x - plane_x;
            let dt = step(gap, end)?;
            let reversed = TimeReversed {
                inner: field,
                t_ref: 0.0,
            };
            let run = integrate_to_plane(
                ElectronState::new(end, -planar(heading, p), 0.0),
                &reversed,
                dt,
                plane_x,
                TRANSIT_SLACK * gap.abs() / speed,
            )?;
            Ok(run.path_length)
        }
        LegBoundary::Chord { start, end } => shoot_chord(start, end, p, field, opts, &step, speed),
    }
}

fn shoot_chord<F: EmField + ?Sized>(
    start: Vec3,
    end: Vec3,
    p: f64,
    field: &F,
    opts: &LegOptions,
    step: &dyn Fn(f64, Vec3) -> Result<f64>,
    speed: f64,
) -> Result<f64> {
    let gap = end.x - start.x;
    if gap == 0.0 {
        return Err(Error::Shooting("chord leg must advance along x".into()));
    }
    let dt = step((end - start).norm(), start)?;
    let max_time = TRANSIT_SLACK * (end - start).norm() / speed;
    let run = |angle: f64| -> Result<PlaneCrossing> {
        integrate_to_plane(
            ElectronState::new(start, planar(angle, p), 0.0),
            field,
            dt,
            end.x,
            max_time,
        )
    };
    let miss = |angle: f64| -> Result<(f64, f64)> {
        let c = run(angle)?;
        Ok((c.state.position.y - end.y, c.path_length))
    };
    let aim = (end.y - start.y).atan2(gap);
    let (f0, len0) = miss(aim)?;
    if f0.abs() <= opts.miss_tolerance {
        return Ok(len0);
    }
    // the miss decreases as the launch angle grows (for +x travel), so walk
    // against its sign until it flips
    let dir = -f0.signum() * gap.signum();
    let (mut a, mut fa) = (aim, f0);
    let mut delta = 1e-6;
    let (mut b, mut fb) = loop {
        let trial = aim + dir * delta;
        let (ft, _) = miss(trial)?;
        if ft.signum() != f0.signum() {
            break (trial, ft);
        }
        a = trial;
        fa = ft;
        delta *= 4.0;
        if delta > 0.5 {
            return Err(Error::Shooting("could not bracket the launch angle".into()));
        }
    };
    // Illinois false position
    let mut side = 0i8;
    let mut best = (f64::INFINITY, 0.0);
    for _ in 0..opts.max_iterations {
        let c = (a * fb - b * fa) / (fb - fa);
        let c = if c > a.min(b) && c < a.max(b) {
            c
        } else {
            0.5 * (a + b)
        };
        let (fc, len) = miss(c)?;
        if fc.abs() < best.0 {
            best = (fc.abs(), len);
        }
        if fc.abs() <= opts.miss_tolerance || (b - a).abs() <= 4.0 * f64::EPSILON * c.abs().max(1e-3) {
            return Ok(best.1);
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    Err(Error::Shooting(format!(
        "launch angle did not converge (best miss {:e} cm)",
        best.0
    )))
}
