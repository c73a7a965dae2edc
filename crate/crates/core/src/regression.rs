//! Ordinary least squares on `ln|y|` against `ln x`.

use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLawFit {
    /// Slope of `ln|y|` against `ln x`.
    pub exponent: f64,
    /// `exp(intercept)`: `|y| ≈ prefactor · x^exponent`.
    pub prefactor: f64,
    pub r_squared: f64,
    pub points: usize,
}

/// Fits `|y| = a·x^p`. Points with non-positive `x` or zero `y` are skipped.
pub fn fit_power_law(points: &[(f64, f64)], min_points: usize) -> Result<PowerLawFit> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y != 0.0 && x.is_finite() && y.is_finite())
        .map(|(x, y)| (x.ln(), y.abs().ln()))
        .collect();
    let required = min_points.max(2);
    if logs.len() < required {
        return Err(Error::TooFewPoints {
            usable: logs.len(),
            required,
        });
    }
    let n = logs.len() as f64;
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in &logs {
        sxx += (x - mean_x).powi(2);
        sxy += (x - mean_x) * (y - mean_y);
        syy += (y - mean_y).powi(2);
    }
    if sxx == 0.0 {
        return Err(Error::invalid("all abscissae are identical"));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(PowerLawFit {
        exponent: slope,
        prefactor: intercept.exp(),
        r_squared,
        points: logs.len(),
    })
}
