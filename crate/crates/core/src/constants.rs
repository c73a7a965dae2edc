//! Physical constants in Gaussian CGS units (CODATA 2018).
//!
//! This is the only place numeric constants are defined; everything else
//! reads them through [`CGS`].

use serde::Serialize;
use std::f64::consts::PI;

/// Constants used by every phase and kinematics computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalConstants {
    /// Reduced Planck constant, erg·s.
    pub hbar: f64,
    /// Speed of light, cm/s.
    pub c: f64,
    /// Elementary charge magnitude, statcoulomb.
    pub e: f64,
    /// Electron rest mass, g.
    pub m_e: f64,
    /// Planck constant, erg·s.
    pub planck_h: f64,
    /// One electronvolt, erg.
    pub electron_volt: f64,
}

const PLANCK_H: f64 = 6.626_070_15e-27;
const SPEED_OF_LIGHT: f64 = 2.997_924_58e10;
// e[esu] = e[C] * c[m/s] * 10
const ELEMENTARY_CHARGE: f64 = 4.803_204_712_570_263e-10;

pub const CGS: PhysicalConstants = PhysicalConstants {
    hbar: PLANCK_H / (2.0 * PI),
    c: SPEED_OF_LIGHT,
    e: ELEMENTARY_CHARGE,
    m_e: 9.109_383_701_5e-28,
    planck_h: PLANCK_H,
    electron_volt: 1.602_176_634e-12,
};

impl PhysicalConstants {
    /// `e/(ħc)`: phase per unit flux, rad/(G·cm²).
    pub fn phase_per_flux(&self) -> f64 {
        self.e / (self.hbar * self.c)
    }

    /// Electron rest energy `m_e c²`, erg.
    pub fn electron_rest_energy(&self) -> f64 {
        self.m_e * self.c * self.c
    }

    pub fn kev(&self) -> f64 {
        1e3 * self.electron_volt
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        CGS
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planck_pair_is_consistent() {
        let rel = (CGS.planck_h - 2.0 * PI * CGS.hbar).abs() / CGS.planck_h;
        assert!(rel < 1e-12);
    }

    #[test]
    fn rounded_values_match_documented_ones() {
        for (value, rounded) in [
            (CGS.hbar, 1.0546e-27),
            (CGS.c, 2.998e10),
            (CGS.e, 4.803e-10),
            (CGS.m_e, 9.109e-28),
        ] {
            assert!((value / rounded - 1.0).abs() < 1e-4, "{value} vs {rounded}");
        }
    }

    #[test]
    fn phase_per_flux_value() {
        // 1.519e7 rad per G·cm²
        assert!((CGS.phase_per_flux() / 1.519e7 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn electron_rest_energy_is_511_kev() {
        let kev = CGS.electron_rest_energy() / CGS.kev();
        assert!((kev - 510.999).abs() < 0.01);
    }
}
