//! Closed-form fields of an infinite solenoid with time-varying flux and of a
//! spatially uniform (optionally modulated) magnetic field.
//!
//! Convention: `B = ∇ × A` and `E = -(1/c) ∂A/∂t`, applied uniformly. The
//! electric field therefore carries the `1/c` factor in Gaussian units:
//!
//! ```text
//! A_in  = ρ B(t) / 2 φ̂          A_out = B(t) R² / (2ρ) φ̂
//! B_in  = B(t) ẑ                B_out = 0
//! E_in  = -ρ Ḃ(t) / (2c) φ̂      E_out = -Ḃ(t) R² / (2ρc) φ̂
//! ```
//!
//! "Inside" is `ρ < R`; the wall `ρ = R` belongs to the outside region.

use crate::constants::CGS;
use crate::error::{Error, Result};
use crate::geometry::Vec3;
use serde::Serialize;
use std::f64::consts::{PI, TAU};

/// Time dependence of a field magnitude, in gauss.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Waveform {
    /// `B(t) = b_static + b_amp · sin(2π·freq·t + phase0)`.
    Sinusoid {
        b_static: f64,
        b_amp: f64,
        freq: f64,
        phase0: f64,
    },
    /// `B(t) = b_static + rate · t`, constant `Ḃ`.
    Ramp { b_static: f64, rate: f64 },
}

impl Waveform {
    pub fn sinusoid(b_static: f64, b_amp: f64, freq: f64, phase0: f64) -> Result<Self> {
        if ![b_static, b_amp, freq, phase0].iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("Waveform::sinusoid"));
        }
        if freq < 0.0 {
            return Err(Error::invalid("waveform frequency must be non-negative"));
        }
        if freq == 0.0 && b_amp != 0.0 {
            return Err(Error::invalid(
                "a zero-frequency waveform cannot have a time-varying amplitude",
            ));
        }
        Ok(Waveform::Sinusoid {
            b_static,
            b_amp,
            freq,
            phase0,
        })
    }

    pub fn ramp(b_static: f64, rate: f64) -> Result<Self> {
        if !b_static.is_finite() || !rate.is_finite() {
            return Err(Error::NonFinite("Waveform::ramp"));
        }
        Ok(Waveform::Ramp { b_static, rate })
    }

    pub fn constant(b: f64) -> Self {
        Waveform::Sinusoid {
            b_static: b,
            b_amp: 0.0,
            freq: 0.0,
            phase0: 0.0,
        }
    }

    /// `B(t)` in gauss.
    pub fn value(&self, t: f64) -> f64 {
        match *self {
            Waveform::Sinusoid {
                b_static,
                b_amp,
                freq,
                phase0,
            } => b_static + b_amp * (TAU * freq * t + phase0).sin(),
            Waveform::Ramp { b_static, rate } => b_static + rate * t,
        }
    }

    /// Analytic `Ḃ(t)` in gauss/s.
    pub fn rate(&self, t: f64) -> f64 {
        match *self {
            Waveform::Sinusoid {
                b_amp,
                freq,
                phase0,
                ..
            } => b_amp * TAU * freq * (TAU * freq * t + phase0).cos(),
            Waveform::Ramp { rate, .. } => rate,
        }
    }

    pub fn static_part(&self) -> f64 {
        match *self {
            Waveform::Sinusoid { b_static, .. } | Waveform::Ramp { b_static, .. } => b_static,
        }
    }

    /// `B(t) - b_static`.
    pub fn time_dependent_part(&self, t: f64) -> f64 {
        self.value(t) - self.static_part()
    }

    pub fn is_static(&self) -> bool {
        match *self {
            Waveform::Sinusoid { b_amp, .. } => b_amp == 0.0,
            Waveform::Ramp { rate, .. } => rate == 0.0,
        }
    }

    /// Period in seconds, for sinusoids with a positive frequency.
    pub fn period(&self) -> Option<f64> {
        match *self {
            Waveform::Sinusoid { freq, .. } if freq > 0.0 => Some(1.0 / freq),
            _ => None,
        }
    }

    pub fn amplitude(&self) -> f64 {
        match *self {
            Waveform::Sinusoid { b_amp, .. } => b_amp.abs(),
            Waveform::Ramp { .. } => f64::INFINITY,
        }
    }
}

/// Anything that supplies `E` (statvolt/cm) and `B` (gauss) over spacetime.
pub trait EmField: Sync {
    fn electric_field(&self, x: Vec3, t: f64) -> Vec3;
    fn magnetic_field(&self, x: Vec3, t: f64) -> Vec3;
}

/// Infinite solenoid of radius `R` on the z axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Solenoid {
    radius: f64,
    waveform: Waveform,
}

impl Solenoid {
    pub fn new(radius: f64, waveform: Waveform) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::invalid("solenoid radius must be positive"));
        }
        Ok(Solenoid { radius, waveform })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn waveform(&self) -> &Waveform {
        &self.waveform
    }

    pub fn is_inside(&self, x: Vec3) -> bool {
        x.rho() < self.radius
    }

    /// `(-y, x, 0)` scaled by `A_φ / ρ`, which avoids dividing by zero on axis.
    fn azimuthal(&self, x: Vec3, amplitude: f64) -> Vec3 {
        let rho2 = x.x * x.x + x.y * x.y;
        let r2 = self.radius * self.radius;
        let scale = if rho2 < r2 {
            0.5 * amplitude
        } else {
            0.5 * amplitude * r2 / rho2
        };
        Vec3::new(-x.y * scale, x.x * scale, 0.0)
    }

    /// Symmetric-gauge vector potential, G·cm.
    pub fn vector_potential(&self, x: Vec3, t: f64) -> Vec3 {
        self.azimuthal(x, self.waveform.value(t))
    }

    pub fn magnetic_field(&self, x: Vec3, t: f64) -> Vec3 {
        if self.is_inside(x) {
            Vec3::Z * self.waveform.value(t)
        } else {
            Vec3::ZERO
        }
    }

    /// Analytic `∂B/∂t`.
    pub fn magnetic_field_rate(&self, x: Vec3, t: f64) -> Vec3 {
        if self.is_inside(x) {
            Vec3::Z * self.waveform.rate(t)
        } else {
            Vec3::ZERO
        }
    }

    /// `E = -(1/c) ∂A/∂t`, statvolt/cm.
    pub fn electric_field(&self, x: Vec3, t: f64) -> Vec3 {
        self.azimuthal(x, -self.waveform.rate(t) / CGS.c)
    }

    /// Total flux `πR²B(t)`, G·cm².
    pub fn flux(&self, t: f64) -> f64 {
        PI * self.radius * self.radius * self.waveform.value(t)
    }

    /// Flux through a coaxial circle of radius `rho`.
    pub fn flux_within(&self, rho: f64, t: f64) -> f64 {
        let r = rho.min(self.radius);
        PI * r * r * self.waveform.value(t)
    }

    /// Static flux `π·min(ρ, R)²·b_static` through a coaxial circle.
    pub fn static_flux_within(&self, rho: f64) -> f64 {
        let r = rho.min(self.radius);
        PI * r * r * self.waveform.static_part()
    }

    /// `d/dt` of [`Solenoid::flux_within`].
    pub fn flux_rate_within(&self, rho: f64, t: f64) -> f64 {
        let r = rho.min(self.radius);
        PI * r * r * self.waveform.rate(t)
    }
}

impl EmField for Solenoid {
    fn electric_field(&self, x: Vec3, t: f64) -> Vec3 {
        Solenoid::electric_field(self, x, t)
    }

    fn magnetic_field(&self, x: Vec3, t: f64) -> Vec3 {
        Solenoid::magnetic_field(self, x, t)
    }
}

/// Spatially uniform field `B(t) ẑ`. When modulated, the accompanying
/// electric field is taken in the symmetric gauge about the z axis,
/// `E = (Ḃ/2c)(y, -x, 0)`; it vanishes for a static field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UniformField {
    waveform: Waveform,
}

impl UniformField {
    pub fn constant(b0: f64) -> Self {
        UniformField {
            waveform: Waveform::constant(b0),
        }
    }

    pub fn modulated(waveform: Waveform) -> Self {
        UniformField { waveform }
    }

    pub fn value(&self, t: f64) -> f64 {
        self.waveform.value(t)
    }

    pub fn waveform(&self) -> &Waveform {
        &self.waveform
    }
}

impl EmField for UniformField {
    fn electric_field(&self, x: Vec3, t: f64) -> Vec3 {
        let k = self.waveform.rate(t) / (2.0 * CGS.c);
        Vec3::new(k * x.y, -k * x.x, 0.0)
    }

    fn magnetic_field(&self, _x: Vec3, t: f64) -> Vec3 {
        Vec3::Z * self.waveform.value(t)
    }
}
