//! Geometry of the three-crystal diamond interferometer in a uniform field.
//!
//! Crystals `C1`, `C2`, `C3` are the planes `x = 0`, `x = D`, `x = 2D`. The
//! field-free diamond has vertices `(0, 0)`, `(D, D tanθ)`, `(2D, 0)` and
//! `(D, -D tanθ)`; the upper path is `l1 + l2`, the lower path `m1 + m2`, and
//! every leg has length `D / cosθ`. Crystals act as ideal mirrors: the upper
//! beam turns by `-2θ` at `C2`, the lower beam by `+2θ`.
//!
//! In a field `B0 ẑ` each leg becomes a circular arc of radius
//! `R = 2πħc/(eλ|B0|)`. The electron (charge `-e`) moving along `+x` is pushed
//! toward `+y` for `B0 > 0`, so the signed curvature is `+1/R`.
//!
//! The arcs are anchored as follows:
//!
//! * `l1` joins the field-free endpoints `C1 → (D, D tanθ)`;
//! * `l2` leaves that point along `l1`'s arrival tangent turned by `-2θ` and
//!   runs to the plane `x = 2D`;
//! * `m2` joins the field-free endpoints `(D, -D tanθ) → C3`;
//! * `m1` arrives at `(D, -D tanθ)` along `m2`'s departure tangent turned
//!   back by `2θ`, traced backwards to the plane `x = 0`.
//!
//! The construction is symmetric under inversion through the diamond centre
//! combined with `B0 → -B0` (`Δl2(B0) = Δm1(-B0)`, `Δl1(B0) = Δm2(-B0)`).
//! `Δl1` and `Δm2` are pure arc-minus-chord terms, of order `D³/R²`; `Δl2`
//! and `Δm1` change at first order, as `D² tanθ / R`.

use crate::constants::CGS;
use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::regression::{fit_power_law, PowerLawFit};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

/// Crystal spacing, diffraction angle and wavelength used by the historical
/// experiment: `D = 5 cm`, `θ = 0.02 rad`, `λ = 4.86e-10 cm`.
pub const MSS_SPACING_CM: f64 = 5.0;
pub const MSS_THETA_RAD: f64 = 2e-2;
pub const MSS_WAVELENGTH_CM: f64 = 4.86e-10;

/// Interferometer parameters. `b0` is signed (`+ẑ` out of the page).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WBConfig {
    pub d: f64,
    pub theta: f64,
    pub lambda: f64,
    pub b0: f64,
}

impl WBConfig {
    pub fn new(d: f64, theta: f64, lambda: f64, b0: f64) -> Result<Self> {
        let cfg = WBConfig {
            d,
            theta,
            lambda,
            b0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn mss(b0: f64) -> Self {
        WBConfig {
            d: MSS_SPACING_CM,
            theta: MSS_THETA_RAD,
            lambda: MSS_WAVELENGTH_CM,
            b0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.d > 0.0 && self.d.is_finite()) {
            return Err(Error::invalid("crystal spacing D must be positive"));
        }
        if !(self.theta > 0.0 && self.theta < FRAC_PI_4) {
            return Err(Error::invalid("diffraction angle must lie in (0, π/4)"));
        }
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::invalid("wavelength must be positive"));
        }
        if !self.b0.is_finite() {
            return Err(Error::NonFinite("WBConfig::b0"));
        }
        Ok(())
    }

    pub fn with_b0(&self, b0: f64) -> Self {
        WBConfig { b0, ..*self }
    }

    pub fn with_d(&self, d: f64) -> Self {
        WBConfig { d, ..*self }
    }

    /// Field-free leg length `D / cosθ`.
    pub fn straight_leg(&self) -> f64 {
        self.d / self.theta.cos()
    }

    /// Field-free diamond area `2D² tanθ`.
    pub fn enclosed_area(&self) -> f64 {
        2.0 * self.d * self.d * self.theta.tan()
    }

    /// Vertices `C1, upper C2 point, C3, lower C2 point` (counter-clockwise
    /// starting from the lower path, i.e. C1 → lower → C3 → upper).
    pub fn diamond_vertices(&self) -> [Vec3; 4] {
        let h = self.d * self.theta.tan();
        [
            Vec3::ZERO,
            Vec3::new(self.d, -h, 0.0),
            Vec3::new(2.0 * self.d, 0.0, 0.0),
            Vec3::new(self.d, h, 0.0),
        ]
    }
}

/// Shoelace area of a planar polygon in the xy plane (positive when
/// counter-clockwise).
pub fn polygon_area(vertices: &[Vec3]) -> f64 {
    let n = vertices.len();
    0.5 * (0..n)
        .map(|i| {
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            a.x * b.y - b.x * a.y
        })
        .sum::<f64>()
}

/// Gyroradius `2πħc/(eλ|B0|)` in cm.
pub fn radius_of_curvature(lambda: f64, b0: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::invalid("wavelength must be positive"));
    }
    if b0 == 0.0 {
        return Err(Error::InfiniteRadius);
    }
    Ok(TAU * CGS.hbar * CGS.c / (CGS.e * lambda * b0.abs()))
}

/// Signed curvature of an electron path in `B0 ẑ`; zero for `B0 = 0`.
pub fn signed_curvature(lambda: f64, b0: f64) -> f64 {
    CGS.e * lambda * b0 / (TAU * CGS.hbar * CGS.c)
}

/// Circular arc in the xy plane. `curvature > 0` turns counter-clockwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Arc {
    pub start: Vec3,
    pub heading: f64,
    pub curvature: f64,
    pub length: f64,
}

impl Arc {
    pub fn sweep(&self) -> f64 {
        self.curvature * self.length
    }

    pub fn end_heading(&self) -> f64 {
        self.heading + self.sweep()
    }

    pub fn point_at(&self, s: f64) -> Vec3 {
        let half = 0.5 * self.curvature * s;
        // chord length 2 sin(κs/2)/κ along the mean heading
        let chord = if self.curvature == 0.0 {
            s
        } else {
            2.0 * half.sin() / self.curvature
        };
        let mean = self.heading + half;
        self.start + Vec3::new(chord * mean.cos(), chord * mean.sin(), 0.0)
    }

    pub fn end(&self) -> Vec3 {
        self.point_at(self.length)
    }

    /// The same arc traversed from its end back to its start.
    pub fn reversed(&self) -> Arc {
        Arc {
            start: self.end(),
            heading: wrap_angle(self.end_heading() + PI),
            curvature: -self.curvature,
            length: self.length,
        }
    }
}

/// Maps an angle into `(-π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    let w = a.rem_euclid(TAU);
    if w > PI {
        w - TAU
    } else {
        w
    }
}

/// Minor arc of signed curvature `curvature` from `from` to `to`.
pub fn arc_through(from: Vec3, to: Vec3, curvature: f64, leg: &'static str) -> Result<Arc> {
    let d = to - from;
    let chord = d.x.hypot(d.y);
    let direction = d.y.atan2(d.x);
    let half = 0.5 * chord * curvature;
    if half.abs() > 1.0 {
        return Err(Error::GeometryUnsolvable {
            leg,
            reason: format!("chord {chord:e} cm exceeds the orbit diameter"),
        });
    }
    let sweep = 2.0 * half.asin();
    let length = if curvature == 0.0 {
        chord
    } else {
        sweep / curvature
    };
    Ok(Arc {
        start: from,
        heading: direction - 0.5 * sweep,
        curvature,
        length,
    })
}

/// Arc leaving `start` along `heading` until it first reaches the plane
/// `x = plane_x`. The sweep angle is found by bisection on the monotone
/// stretch before the arc turns back.
pub fn shoot_to_plane(
    start: Vec3,
    heading: f64,
    curvature: f64,
    plane_x: f64,
    leg: &'static str,
) -> Result<Arc> {
    let gap = plane_x - start.x;
    let unsolvable = |reason: String| Error::GeometryUnsolvable { leg, reason };
    if gap == 0.0 {
        return Ok(Arc {
            start,
            heading,
            curvature,
            length: 0.0,
        });
    }
    if curvature == 0.0 {
        let along = heading.cos();
        if along * gap <= 0.0 {
            return Err(unsolvable("beam heads away from the target plane".into()));
        }
        return Ok(Arc {
            start,
            heading,
            curvature,
            length: gap / along,
        });
    }
    // x-advance after sweeping φ: 2 cos(h + φ/2) sin(φ/2) / κ
    let advance = |phi: f64| 2.0 * (heading + 0.5 * phi).cos() * (0.5 * phi).sin() / curvature;
    // next zero of cos(h + φ) in the direction of rotation
    let z = (heading - FRAC_PI_2) / PI;
    let turn = if curvature > 0.0 {
        FRAC_PI_2 + (z.floor() + 1.0) * PI
    } else {
        FRAC_PI_2 + (z.ceil() - 1.0) * PI
    };
    let phi_max = turn - heading;
    if (advance(phi_max) - gap) * gap.signum() < 0.0 || advance(phi_max) * gap <= 0.0 {
        return Err(unsolvable(format!(
            "arc of radius {:e} cm turns back before reaching x = {plane_x}",
            1.0 / curvature.abs()
        )));
    }
    let (mut lo, mut hi) = (0.0f64, phi_max);
    let f = |phi: f64| (advance(phi) - gap) * gap.signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let phi = if f(lo).abs() <= f(hi).abs() { lo } else { hi };
    Ok(Arc {
        start,
        heading,
        curvature,
        length: phi / curvature,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LegName {
    L1,
    L2,
    M1,
    M2,
}

impl LegName {
    pub const ALL: [LegName; 4] = [LegName::L1, LegName::L2, LegName::M1, LegName::M2];

    pub fn as_str(self) -> &'static str {
        match self {
            LegName::L1 => "l1",
            LegName::L2 => "l2",
            LegName::M1 => "m1",
            LegName::M2 => "m2",
        }
    }
}

/// How a leg is pinned down; shared with the trajectory oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LegBoundary {
    /// Fixed start and end points.
    Chord { start: Vec3, end: Vec3 },
    /// Fixed start point and heading, free end on the plane `x = plane_x`.
    Forward {
        start: Vec3,
        heading: f64,
        plane_x: f64,
    },
    /// Fixed end point and arrival heading, free start on `x = plane_x`.
    Backward {
        end: Vec3,
        heading: f64,
        plane_x: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Leg {
    pub name: LegName,
    pub boundary: LegBoundary,
    /// Forward-oriented arc.
    pub arc: Arc,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LegDeltas {
    pub l1: f64,
    pub l2: f64,
    pub m1: f64,
    pub m2: f64,
}

impl LegDeltas {
    pub fn get(&self, leg: LegName) -> f64 {
        match leg {
            LegName::L1 => self.l1,
            LegName::L2 => self.l2,
            LegName::M1 => self.m1,
            LegName::M2 => self.m2,
        }
    }
}

/// Field-free and in-field leg lengths (cm) of the diamond.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathSet {
    pub l1: f64,
    pub l2: f64,
    pub m1: f64,
    pub m2: f64,
    pub l1p: f64,
    pub l2p: f64,
    pub m1p: f64,
    pub m2p: f64,
    pub enclosed_area: f64,
    pub deltas: LegDeltas,
    pub legs: [Leg; 4],
    /// y where the upper path meets `C3` (0 without field).
    pub upper_exit_y: f64,
    /// y where the lower path leaves `C1` (0 without field).
    pub lower_entry_y: f64,
}

impl PathSet {
    pub fn leg(&self, name: LegName) -> &Leg {
        &self.legs[LegName::ALL.iter().position(|n| *n == name).unwrap()]
    }
}

pub fn build_geometry(cfg: &WBConfig) -> Result<PathSet> {
    cfg.validate()?;
    let kappa = signed_curvature(cfg.lambda, cfg.b0);
    let [c1, lower_mid, c3, upper_mid] = cfg.diamond_vertices();
    let two_theta = 2.0 * cfg.theta;

    let l1 = arc_through(c1, upper_mid, kappa, "l1")?;
    let l2_heading = l1.end_heading() - two_theta;
    let l2 = shoot_to_plane(upper_mid, l2_heading, kappa, c3.x, "l2")?;

    let m2 = arc_through(lower_mid, c3, kappa, "m2")?;
    let m1_arrival = m2.heading - two_theta;
    let m1_back = shoot_to_plane(lower_mid, m1_arrival + PI, -kappa, c1.x, "m1")?;
    let m1 = m1_back.reversed();

    let straight = cfg.straight_leg();
    let legs = [
        Leg {
            name: LegName::L1,
            boundary: LegBoundary::Chord {
                start: c1,
                end: upper_mid,
            },
            arc: l1,
        },
        Leg {
            name: LegName::L2,
            boundary: LegBoundary::Forward {
                start: upper_mid,
                heading: l2_heading,
                plane_x: c3.x,
            },
            arc: l2,
        },
        Leg {
            name: LegName::M1,
            boundary: LegBoundary::Backward {
                end: lower_mid,
                heading: m1_arrival,
                plane_x: c1.x,
            },
            arc: m1,
        },
        Leg {
            name: LegName::M2,
            boundary: LegBoundary::Chord {
                start: lower_mid,
                end: c3,
            },
            arc: m2,
        },
    ];
    Ok(PathSet {
        l1: straight,
        l2: straight,
        m1: straight,
        m2: straight,
        l1p: l1.length,
        l2p: l2.length,
        m1p: m1.length,
        m2p: m2.length,
        enclosed_area: cfg.enclosed_area(),
        deltas: LegDeltas {
            l1: l1.length - straight,
            l2: l2.length - straight,
            m1: m1.length - straight,
            m2: m2.length - straight,
        },
        legs,
        upper_exit_y: l2.end().y,
        lower_entry_y: m1.start.y,
    })
}

/// Deltas below this are treated as underflow and dropped from fits.
pub const DELTA_FLOOR_CM: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingExponents {
    pub l1: PowerLawFit,
    pub l2: PowerLawFit,
    pub m1: PowerLawFit,
    pub m2: PowerLawFit,
}

impl ScalingExponents {
    pub fn get(&self, leg: LegName) -> &PowerLawFit {
        match leg {
            LegName::L1 => &self.l1,
            LegName::L2 => &self.l2,
            LegName::M1 => &self.m1,
            LegName::M2 => &self.m2,
        }
    }
}

/// Log-log exponents of `|Δ|` against `|B0|` for each leg.
pub fn scaling_exponents(cfg: &WBConfig, b_grid: &[f64]) -> Result<ScalingExponents> {
    let sets = b_grid
        .iter()
        .map(|&b| build_geometry(&cfg.with_b0(b)).map(|p| (b.abs(), p.deltas)))
        .collect::<Result<Vec<_>>>()?;
    let fit = |leg: LegName| {
        let pts: Vec<(f64, f64)> = sets
            .iter()
            .map(|(b, d)| (*b, d.get(leg)))
            .filter(|(_, d)| d.abs() > DELTA_FLOOR_CM)
            .collect();
        fit_power_law(&pts, 3)
    };
    Ok(ScalingExponents {
        l1: fit(LegName::L1)?,
        l2: fit(LegName::L2)?,
        m1: fit(LegName::M1)?,
        m2: fit(LegName::M2)?,
    })
}

/// Log-log exponent of `|Δ|` for one leg against the crystal spacing.
pub fn spacing_exponent(cfg: &WBConfig, d_grid: &[f64], leg: LegName) -> Result<PowerLawFit> {
    let pts = d_grid
        .iter()
        .map(|&d| build_geometry(&cfg.with_d(d)).map(|p| (d, p.deltas.get(leg))))
        .collect::<Result<Vec<_>>>()?;
    let pts: Vec<_> = pts.into_iter().filter(|(_, v)| v.abs() > DELTA_FLOOR_CM).collect();
    fit_power_law(&pts, 3)
}

/// Where `D/R` sits relative to the diffraction angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `D/R < θ/10`: the first-order truncation is justified.
    Valid,
    /// `θ/10 ≤ D/R < θ`.
    Marginal,
    /// `D/R ≥ θ`.
    Invalid,
}

/// Factor by which `D/R` must undercut `θ` to count as "much less than".
pub const REGIME_MARGIN: f64 = 10.0;

pub fn classify_regime(d_over_r: f64, theta: f64) -> Regime {
    if d_over_r < theta / REGIME_MARGIN {
        Regime::Valid
    } else if d_over_r < theta {
        Regime::Marginal
    } else {
        Regime::Invalid
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseReport {
    /// `(e/ħc) B0 · 2D² tanθ`.
    pub ab_phase: f64,
    /// `(2π/λ)` times the upper-minus-lower path length change.
    pub dynamical_phase: f64,
    pub net_phase: f64,
    /// Bending angle `D/R` (0 without field).
    pub d_over_r: f64,
    pub regime: Regime,
    /// `D/R < θ/10`.
    pub regime_ok: bool,
    /// `|net| / |ab|`, absent when the AB phase is zero.
    pub cancellation_ratio: Option<f64>,
}

pub fn phase_report(cfg: &WBConfig, include_second_order: bool) -> Result<PhaseReport> {
    let paths = build_geometry(cfg)?;
    Ok(phase_report_from(cfg, &paths, include_second_order))
}

pub fn phase_report_from(cfg: &WBConfig, paths: &PathSet, include_second_order: bool) -> PhaseReport {
    let d = &paths.deltas;
    let path_difference = if include_second_order {
        (d.l2 + d.l1) - (d.m2 + d.m1)
    } else {
        d.l2 - d.m1
    };
    let ab_phase = CGS.phase_per_flux() * cfg.b0 * paths.enclosed_area;
    let dynamical_phase = TAU / cfg.lambda * path_difference;
    let net_phase = ab_phase + dynamical_phase;
    let d_over_r = cfg.d * signed_curvature(cfg.lambda, cfg.b0).abs();
    let regime = classify_regime(d_over_r, cfg.theta);
    PhaseReport {
        ab_phase,
        dynamical_phase,
        net_phase,
        d_over_r,
        regime,
        regime_ok: regime == Regime::Valid,
        cancellation_ratio: (ab_phase != 0.0).then(|| net_phase.abs() / ab_phase.abs()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FringeModel {
    /// AB flux phase alone.
    NaiveAb,
    /// AB phase plus the path-length phase of the bent arcs (all four legs).
    WernerBrill,
    /// Time-dependent flux removed entirely; only the static flux remains.
    FullCancellation,
}

impl FringeModel {
    pub const ALL: [FringeModel; 3] = [
        FringeModel::NaiveAb,
        FringeModel::WernerBrill,
        FringeModel::FullCancellation,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FringeModel::NaiveAb => "naive_ab",
            FringeModel::WernerBrill => "werner_brill",
            FringeModel::FullCancellation => "full_cancellation",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FringePoint {
    pub t: f64,
    pub b0: f64,
    /// `None` where the geometry could not be solved.
    pub phase: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FringeSeries {
    pub model: FringeModel,
    pub points: Vec<FringePoint>,
    pub peak_to_peak: f64,
}

/// Fringe phase over one period of `waveform`, sampled at `t_i = i·P/samples`.
pub fn fringe_time_series(
    cfg: &WBConfig,
    waveform: &crate::fields::Waveform,
    samples: usize,
    model: FringeModel,
) -> Result<FringeSeries> {
    cfg.validate()?;
    let period = waveform
        .period()
        .ok_or_else(|| Error::invalid("fringe sweep needs a periodic waveform with freq > 0"))?;
    if samples == 0 {
        return Err(Error::invalid("fringe sweep needs at least one sample"));
    }
    let k = CGS.phase_per_flux();
    let area = cfg.enclosed_area();
    let points: Vec<FringePoint> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let t = period * i as f64 / samples as f64;
            let b0 = waveform.value(t);
            let phase = match model {
                FringeModel::NaiveAb => Some(k * b0 * area),
                FringeModel::WernerBrill => phase_report(&cfg.with_b0(b0), true)
                    .ok()
                    .map(|r| r.net_phase),
                FringeModel::FullCancellation => Some(k * waveform.static_part() * area),
            };
            FringePoint { t, b0, phase }
        })
        .collect();
    let (lo, hi) = points
        .iter()
        .filter_map(|p| p.phase)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    Ok(FringeSeries {
        model,
        points,
        peak_to_peak: if hi >= lo { hi - lo } else { 0.0 },
    })
}
