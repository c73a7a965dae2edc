//! Composite Simpson quadrature for line integrals along timed contours and
//! for flux through planar disks.

use crate::error::{Error, Result};
use crate::geometry::{Event, TimedPath, Vec3};
use std::f64::consts::TAU;

/// Default Simpson panels per contour segment.
pub const DEFAULT_SUBDIVISIONS: usize = 64;

/// A contour made of parametrised segments. Each segment maps `u ∈ [0, 1]`
/// to an event and the derivative of position with respect to `u`.
pub trait Contour {
    fn segment_count(&self) -> usize;
    fn sample(&self, segment: usize, u: f64) -> (Event, Vec3);
}

impl Contour for TimedPath {
    fn segment_count(&self) -> usize {
        self.events().len() - 1
    }

    fn sample(&self, segment: usize, u: f64) -> (Event, Vec3) {
        let (a, b) = (self.events()[segment], self.events()[segment + 1]);
        (a.lerp(b, u), b.position - a.position)
    }
}

/// Circle of radius `rho` coaxial with the z axis, starting at angle 0 and
/// swept once in `direction` at uniform angular speed between `t0` and
/// `t0 + duration`. A zero duration gives a purely spatial loop at `t0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleContour {
    pub rho: f64,
    pub z: f64,
    pub t0: f64,
    pub duration: f64,
    /// +1 counter-clockwise seen from +z, -1 clockwise.
    pub direction: f64,
    pub segments: usize,
}

impl CircleContour {
    pub fn at_time(rho: f64, t: f64, direction: f64) -> Self {
        CircleContour {
            rho,
            z: 0.0,
            t0: t,
            duration: 0.0,
            direction,
            segments: 8,
        }
    }
}

impl Contour for CircleContour {
    fn segment_count(&self) -> usize {
        self.segments
    }

    fn sample(&self, segment: usize, u: f64) -> (Event, Vec3) {
        let frac = (segment as f64 + u) / self.segments as f64;
        let dphi = self.direction * TAU / self.segments as f64;
        let phi = self.direction * TAU * frac;
        let (s, c) = phi.sin_cos();
        let position = Vec3::new(self.rho * c, self.rho * s, self.z);
        let tangent = Vec3::new(-self.rho * s * dphi, self.rho * c * dphi, 0.0);
        (Event::new(position, self.t0 + self.duration * frac), tangent)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineIntegral {
    pub value: f64,
    /// Set when every point of the contour coincides (zero spatial length).
    pub degenerate: bool,
}

/// `∫ F(x(s), t(s)) · dx` along the contour, composite Simpson with
/// `n_sub` panels per segment.
pub fn line_integral<F, C>(field: F, contour: &C, n_sub: usize) -> Result<LineIntegral>
where
    F: Fn(&Event) -> Vec3,
    C: Contour + ?Sized,
{
    if n_sub == 0 {
        return Err(Error::invalid("n_sub must be at least 1"));
    }
    let segments = contour.segment_count();
    if segments == 0 {
        return Err(Error::invalid("contour has no segments"));
    }
    let mut total = 0.0;
    let mut degenerate = true;
    for seg in 0..segments {
        let integrand = |u: f64| -> Result<(f64, bool)> {
            let (event, tangent) = contour.sample(seg, u);
            if tangent.norm_squared() == 0.0 {
                return Ok((0.0, true));
            }
            let f = field(&event);
            if !f.is_finite() {
                return Err(Error::NonFinite("line_integral field sample"));
            }
            Ok((f.dot(tangent), false))
        };
        let h = 1.0 / n_sub as f64;
        let mut acc = 0.0;
        let (f0, d0) = integrand(0.0)?;
        degenerate &= d0;
        let mut left = f0;
        for k in 0..n_sub {
            let u0 = k as f64 * h;
            let (mid, dm) = integrand(u0 + 0.5 * h)?;
            let (right, dr) = integrand(if k + 1 == n_sub { 1.0 } else { u0 + h })?;
            degenerate &= dm && dr;
            acc += left + 4.0 * mid + right;
            left = right;
        }
        total += acc * h / 6.0;
    }
    if degenerate {
        total = 0.0;
    }
    Ok(LineIntegral {
        value: total,
        degenerate,
    })
}

/// Composite Simpson rule for a scalar function on `[a, b]` with `panels`
/// panels (`2·panels + 1` evaluations).
pub fn simpson<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, panels: usize) -> f64 {
    let panels = panels.max(1);
    if a == b {
        return 0.0;
    }
    let h = (b - a) / panels as f64;
    let mut acc = 0.0;
    let mut left = f(a);
    for k in 0..panels {
        let x0 = a + k as f64 * h;
        let mid = f(x0 + 0.5 * h);
        let right = f(if k + 1 == panels { b } else { x0 + h });
        acc += left + 4.0 * mid + right;
        left = right;
    }
    acc * h / 6.0
}

/// Planar disk used as an integration surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disk {
    pub center: Vec3,
    pub normal: Vec3,
    pub radius: f64,
}

impl Disk {
    pub fn coaxial(radius: f64) -> Self {
        Disk {
            center: Vec3::ZERO,
            normal: Vec3::Z,
            radius,
        }
    }
}

/// Polar grid for [`surface_flux`]: Simpson in radius with `n_r` panels per
/// radial interval, periodic trapezoid with `n_phi` nodes in angle.
/// `radial_breaks` are radii (measured from the disk centre) where the
/// integrand may have a kink or jump; each gets its own interval.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskGrid {
    pub n_r: usize,
    pub n_phi: usize,
    pub radial_breaks: Vec<f64>,
}

impl Default for DiskGrid {
    fn default() -> Self {
        DiskGrid {
            n_r: 64,
            n_phi: 64,
            radial_breaks: Vec::new(),
        }
    }
}

impl DiskGrid {
    pub fn with_breaks(mut self, breaks: &[f64]) -> Self {
        self.radial_breaks = breaks.to_vec();
        self
    }
}

/// `∫ F(x, t) · dS` over a planar disk at fixed time `t`. The normal is
/// normalised internally; a zero radius gives 0.
pub fn surface_flux<F>(field: F, disk: &Disk, t: f64, grid: &DiskGrid) -> Result<f64>
where
    F: Fn(Vec3, f64) -> Vec3,
{
    if disk.radius < 0.0 || !disk.radius.is_finite() {
        return Err(Error::invalid("disk radius must be non-negative"));
    }
    if disk.radius == 0.0 {
        return Ok(0.0);
    }
    let normal = disk
        .normal
        .normalized()
        .ok_or_else(|| Error::invalid("disk normal is zero"))?;
    if grid.n_r == 0 || grid.n_phi == 0 {
        return Err(Error::invalid("disk grid needs at least one node per axis"));
    }
    let e1 = normal.any_orthonormal();
    let e2 = normal.cross(e1);

    let mut edges: Vec<f64> = std::iter::once(0.0)
        .chain(
            grid.radial_breaks
                .iter()
                .copied()
                .filter(|r| *r > 0.0 && *r < disk.radius),
        )
        .chain(std::iter::once(disk.radius))
        .collect();
    edges.sort_by(f64::total_cmp);
    edges.dedup();

    let dphi = TAU / grid.n_phi as f64;
    let mut bad = false;
    let mut ring = |r: f64| -> f64 {
        if r == 0.0 {
            return 0.0;
        }
        let sum: f64 = (0..grid.n_phi)
            .map(|j| {
                let (s, c) = (j as f64 * dphi).sin_cos();
                let x = disk.center + (e1 * c + e2 * s) * r;
                let f = field(x, t);
                if !f.is_finite() {
                    bad = true;
                }
                f.dot(normal)
            })
            .sum();
        sum * dphi * r
    };
    let mut total = 0.0;
    for w in edges.windows(2) {
        // nodes sit strictly inside each interval so a jump at a break is
        // attributed to the correct side
        let (a, b) = (w[0], w[1]);
        let squeeze = (b - a) * 1e-13;
        let lo = if a > 0.0 { a + squeeze } else { a };
        total += simpson(&mut ring, lo, b - squeeze, grid.n_r);
    }
    if bad {
        return Err(Error::NonFinite("surface_flux field sample"));
    }
    Ok(total)
}
