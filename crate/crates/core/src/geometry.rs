//! Vectors, spacetime events and piecewise-linear timed paths.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const X: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const Y: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    /// Distance from the z axis.
    pub fn rho(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Unit vector, or `None` for the zero vector.
    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self / n)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn lerp(self, other: Vec3, u: f64) -> Vec3 {
        self + (other - self) * u
    }

    /// Component of `self` along `axis` (which need not be normalised).
    pub fn component(self, axis: usize) -> f64 {
        match axis {
            0 => self.x,
            1 => self.y,
            2 => self.z,
            _ => panic!("axis index {axis} out of range"),
        }
    }

    pub fn with_component(mut self, axis: usize, value: f64) -> Vec3 {
        match axis {
            0 => self.x = value,
            1 => self.y = value,
            2 => self.z = value,
            _ => panic!("axis index {axis} out of range"),
        }
        self
    }

    /// Any unit vector orthogonal to `self`.
    pub fn any_orthonormal(self) -> Vec3 {
        let helper = if self.x.abs() < 0.9 { Vec3::X } else { Vec3::Y };
        self.cross(helper).normalized().unwrap_or(Vec3::Z)
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl SubAssign for Vec3 {
    fn sub_assign(&mut self, o: Vec3) {
        *self = *self - o;
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// A point in spacetime: position in cm, time in s.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Event {
    pub position: Vec3,
    pub time: f64,
}

impl Event {
    pub const fn new(position: Vec3, time: f64) -> Self {
        Event { position, time }
    }

    pub fn lerp(self, other: Event, u: f64) -> Event {
        Event {
            position: self.position.lerp(other.position, u),
            time: self.time + (other.time - self.time) * u,
        }
    }
}

const CLOSURE_TOLERANCE: f64 = 1e-12;

/// Ordered events joined by straight segments; position and time are both
/// interpolated linearly along each segment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimedPath {
    events: Vec<Event>,
    closed: bool,
}

impl TimedPath {
    pub fn new(events: Vec<Event>, closed: bool) -> Result<Self> {
        if events.len() < 2 {
            return Err(Error::invalid("a timed path needs at least two events"));
        }
        if events
            .iter()
            .any(|e| !e.position.is_finite() || !e.time.is_finite())
        {
            return Err(Error::NonFinite("TimedPath::new"));
        }
        if events.windows(2).any(|w| w[1].time < w[0].time) {
            return Err(Error::invalid("event times must be non-decreasing"));
        }
        if closed {
            let gap = (events[0].position - events[events.len() - 1].position).norm();
            if gap > CLOSURE_TOLERANCE {
                return Err(Error::invalid(format!(
                    "closed path endpoints differ by {gap:e} cm"
                )));
            }
        }
        Ok(TimedPath { events, closed })
    }

    /// A straight segment traversed between two events.
    pub fn segment(from: Event, to: Event) -> Result<Self> {
        TimedPath::new(vec![from, to], false)
    }

    /// Regular polygon of `sides` vertices inscribed in a circle of radius
    /// `rho` about the z axis, traversed counter-clockwise at uniform speed.
    pub fn polygon(rho: f64, sides: usize, t0: f64, duration: f64) -> Result<Self> {
        if sides < 3 {
            return Err(Error::invalid("a polygon needs at least three sides"));
        }
        let events = (0..=sides)
            .map(|i| {
                let frac = i as f64 / sides as f64;
                let phi = std::f64::consts::TAU * frac;
                let position = if i == sides {
                    Vec3::new(rho, 0.0, 0.0)
                } else {
                    Vec3::new(rho * phi.cos(), rho * phi.sin(), 0.0)
                };
                Event::new(position, t0 + duration * frac)
            })
            .collect();
        TimedPath::new(events, true)
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn spatial_length(&self) -> f64 {
        self.events
            .windows(2)
            .map(|w| (w[1].position - w[0].position).norm())
            .sum()
    }

    /// Inserts an event wherever a segment crosses the cylinder `ρ = radius`,
    /// so no segment straddles it.
    pub fn split_at_radius(&self, radius: f64) -> TimedPath {
        let mut events = vec![self.events[0]];
        for w in self.events.windows(2) {
            let (a, b) = (w[0], w[1]);
            let d = b.position - a.position;
            // |p_xy + u d_xy|² = radius²
            let qa = d.x * d.x + d.y * d.y;
            let qb = 2.0 * (a.position.x * d.x + a.position.y * d.y);
            let qc = a.position.x.powi(2) + a.position.y.powi(2) - radius * radius;
            let mut crossings: Vec<f64> = Vec::new();
            if qa > 0.0 {
                let disc = qb * qb - 4.0 * qa * qc;
                if disc > 0.0 {
                    let sq = disc.sqrt();
                    // numerically stable pair of roots
                    let q = -0.5 * (qb + qb.signum() * sq);
                    let mut roots = [q / qa, if q != 0.0 { qc / q } else { f64::NAN }];
                    roots.sort_by(f64::total_cmp);
                    crossings.extend(roots.iter().copied().filter(|u| *u > 1e-14 && *u < 1.0 - 1e-14));
                }
            }
            events.extend(crossings.into_iter().map(|u| a.lerp(b, u)));
            events.push(b);
        }
        TimedPath {
            events,
            closed: self.closed,
        }
    }
}
