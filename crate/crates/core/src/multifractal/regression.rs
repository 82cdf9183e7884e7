use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordinary least-squares line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn fit_line(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    assert_eq!(x.len(), y.len());
    if x.len() < 2 {
        return Err(Error::DegenerateRegression(format!(
            "need at least 2 points, got {}",
            x.len()
        )));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if sxx <= 0.0 || !sxx.is_finite() {
        return Err(Error::DegenerateRegression("all abscissae identical".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - (intercept + slope * a)).powi(2))
        .sum();
    let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    if !slope.is_finite() {
        return Err(Error::DegenerateRegression("non-finite slope".into()));
    }
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}
