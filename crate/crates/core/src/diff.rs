//! Central finite differences of vector fields, O(h²) accurate.

use crate::geometry::Vec3;

/// Default spatial step: this fraction of the caller's characteristic length.
pub const DEFAULT_RELATIVE_STEP: f64 = 1e-4;

pub fn default_step(characteristic: f64) -> f64 {
    DEFAULT_RELATIVE_STEP * characteristic
}

/// Partial derivative of `field` along `axis` (0 = x, 1 = y, 2 = z).
pub fn fd_partial<F>(field: &F, point: Vec3, t: f64, axis: usize, h: f64) -> Vec3
where
    F: Fn(Vec3, f64) -> Vec3,
{
    let c = point.component(axis);
    let plus = field(point.with_component(axis, c + h), t);
    let minus = field(point.with_component(axis, c - h), t);
    (plus - minus) / (2.0 * h)
}

/// `∇ × F` at `point`. The stencil spans `±h` on each axis; callers must keep
/// it on one side of any discontinuity (the solenoid wall in particular).
pub fn fd_curl<F>(field: F, point: Vec3, t: f64, h: f64) -> Vec3
where
    F: Fn(Vec3, f64) -> Vec3,
{
    assert!(h > 0.0, "finite-difference step must be positive");
    let dx = fd_partial(&field, point, t, 0, h);
    let dy = fd_partial(&field, point, t, 1, h);
    let dz = fd_partial(&field, point, t, 2, h);
    Vec3::new(dy.z - dz.y, dz.x - dx.z, dx.y - dy.x)
}

/// `∂F/∂t` at `point`.
pub fn fd_time_derivative<F>(field: F, point: Vec3, t: f64, h: f64) -> Vec3
where
    F: Fn(Vec3, f64) -> Vec3,
{
    assert!(h > 0.0, "finite-difference step must be positive");
    (field(point, t + h) - field(point, t - h)) / (2.0 * h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        // curl of ∇(x²y + sin z·y) vanishes
        #[test]
        fn curl_of_gradient_is_zero(x in -2.0..2.0f64, y in -2.0..2.0f64, z in -2.0..2.0f64) {
            let grad = |p: Vec3, _t: f64| Vec3::new(2.0 * p.x * p.y, p.x * p.x + p.z.sin(), p.y * p.z.cos());
            let c = fd_curl(grad, Vec3::new(x, y, z), 0.0, 1e-4);
            prop_assert!(c.norm() < 1e-7, "{:?}", c);
        }
    }

    #[test]
    fn curl_of_rotation_field() {
        // F = ω × r has curl 2ω
        let w = Vec3::new(0.3, -1.2, 0.7);
        let c = fd_curl(|p, _| w.cross(p), Vec3::new(1.0, 2.0, -0.5), 0.0, 1e-3);
        assert!((c - w * 2.0).norm() < 1e-10);
    }

    #[test]
    fn static_field_has_zero_time_derivative() {
        let d = fd_time_derivative(|p, _| p * 3.0, Vec3::new(1.0, 1.0, 1.0), 5.0, 1e-3);
        assert_eq!(d, Vec3::ZERO);
    }

    #[test]
    fn time_derivative_is_second_order() {
        let f = |_: Vec3, t: f64| Vec3::new(t.sin(), 0.0, 0.0);
        let err = |h| (fd_time_derivative(f, Vec3::ZERO, 0.4, h).x - 0.4f64.cos()).abs();
        let ratio = err(1e-2) / err(5e-3);
        assert!((ratio - 4.0).abs() < 0.05, "{ratio}");
    }
}
