//! Generalized dimensions and the direct (Chhabra–Jensen) singularity
//! spectrum from a set of box-grid measures.
//!
//! Boxes cut by the raster border carry coverage `c < 1`. Each is treated as
//! a fraction `c` of a full box with density `P / c`, which makes a filled
//! rectangle scale exactly as ε² whatever the box size.

use serde::{Deserialize, Serialize};

use super::boxes::{box_probabilities, BoxGridMeasure, ExclusionPolicy};
use super::regression::{fit_line, LinearFit};
use crate::error::{Error, Result};
use crate::raster::BitRaster;

pub const MIN_BOX_SIZES: usize = 4;

/// Moments of one grid at one order `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Moments {
    /// `ln Σ c·(P/c)^q`, or `Σ P ln(P/c)` when `q == 1`.
    dimension_term: f64,
    /// `Σ μ ln(P/c)`.
    alpha_term: f64,
    /// `Σ μ ln(μ/c)`.
    f_term: f64,
}

fn moments(measure: &BoxGridMeasure, q: f64) -> Moments {
    let log_cov: Vec<f64> = measure.coverage().map(f64::ln).collect();
    let log_density: Vec<f64> = measure
        .probabilities
        .iter()
        .zip(&log_cov)
        .map(|(p, lc)| p.ln() - lc)
        .collect();
    // log of each weight c·(P/c)^q, then log-sum-exp.
    let log_w: Vec<f64> = log_cov
        .iter()
        .zip(&log_density)
        .map(|(lc, ld)| lc + q * ld)
        .collect();
    let max = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let log_z = max + log_w.iter().map(|v| (v - max).exp()).sum::<f64>().ln();

    let mut alpha_term = 0.0;
    let mut f_term = 0.0;
    for ((lw, ld), lc) in log_w.iter().zip(&log_density).zip(&log_cov) {
        let log_mu = lw - log_z;
        let mu = log_mu.exp();
        alpha_term += mu * ld;
        f_term += mu * (log_mu - lc);
    }
    let dimension_term = if q == 1.0 {
        measure
            .probabilities
            .iter()
            .zip(&log_density)
            .map(|(p, ld)| p * ld)
            .sum()
    } else {
        log_z
    };
    Moments {
        dimension_term,
        alpha_term,
        f_term,
    }
}

/// Box measures after exclusions, one per box size that keeps at least one
/// box.
#[derive(Debug, Clone)]
pub struct GridSeries {
    measures: Vec<BoxGridMeasure>,
}

impl GridSeries {
    pub fn measure(
        raster: &BitRaster,
        box_sizes: &[usize],
        exclusions: &ExclusionPolicy,
        origin_offset: (usize, usize),
    ) -> Result<Self> {
        if box_sizes.len() < MIN_BOX_SIZES {
            return Err(Error::InsufficientData(format!(
                "need at least {MIN_BOX_SIZES} box sizes, got {}",
                box_sizes.len()
            )));
        }
        let mut measures = Vec::with_capacity(box_sizes.len());
        for &eps in box_sizes {
            let m = box_probabilities(raster, eps, origin_offset)?.excluding(exclusions);
            if !m.is_empty() {
                measures.push(m);
            }
        }
        Ok(Self { measures })
    }

    pub fn measures(&self) -> &[BoxGridMeasure] {
        &self.measures
    }

    fn fit(&self, q: f64, term: impl Fn(&Moments) -> f64) -> Result<LinearFit> {
        let x: Vec<f64> = self.measures.iter().map(|m| (m.epsilon as f64).ln()).collect();
        let y: Vec<f64> = self.measures.iter().map(|m| term(&moments(m, q))).collect();
        fit_line(&x, &y)
    }

    /// `D_q` with the regression's r².
    pub fn dimension(&self, q: f64) -> Result<Estimate> {
        let fit = self.fit(q, |m| m.dimension_term)?;
        let value = if q == 1.0 {
            fit.slope
        } else {
            fit.slope / (q - 1.0)
        };
        Ok(Estimate {
            value,
            r_squared: fit.r_squared,
        })
    }

    pub fn alpha(&self, q: f64) -> Result<Estimate> {
        let fit = self.fit(q, |m| m.alpha_term)?;
        Ok(Estimate {
            value: fit.slope,
            r_squared: fit.r_squared,
        })
    }

    pub fn f_alpha(&self, q: f64) -> Result<Estimate> {
        let fit = self.fit(q, |m| m.f_term)?;
        Ok(Estimate {
            value: fit.slope,
            r_squared: fit.r_squared,
        })
    }

    pub fn spectrum(&self, q_values: &[f64]) -> Result<Spectrum> {
        if !q_values.contains(&ALPHA_MAX_Q) || !q_values.contains(&ALPHA_MIN_Q) {
            return Err(Error::Validation(format!(
                "q values must include {ALPHA_MAX_Q} and {ALPHA_MIN_Q}"
            )));
        }
        let points = q_values
            .iter()
            .map(|&q| {
                Ok(SpectrumPoint {
                    q,
                    alpha: self.alpha(q)?,
                    f: self.f_alpha(q)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let at = |q: f64| points.iter().find(|p| p.q == q).unwrap().alpha.value;
        Ok(Spectrum {
            singularity_length: at(ALPHA_MAX_Q) - at(ALPHA_MIN_Q),
            points,
        })
    }
}

/// Order whose α approximates α_max.
pub const ALPHA_MAX_Q: f64 = -10.0;
/// Order whose α approximates α_min.
pub const ALPHA_MIN_Q: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub r_squared: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPoint {
    pub q: f64,
    pub alpha: Estimate,
    pub f: Estimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub points: Vec<SpectrumPoint>,
    /// `α(-10) - α(10)`.
    pub singularity_length: f64,
}

pub fn generalized_dimension(
    raster: &BitRaster,
    q: f64,
    box_sizes: &[usize],
    exclusions: &ExclusionPolicy,
) -> Result<Estimate> {
    GridSeries::measure(raster, box_sizes, exclusions, (0, 0))?.dimension(q)
}

pub fn singularity_spectrum(
    raster: &BitRaster,
    q_values: &[f64],
    box_sizes: &[usize],
    exclusions: &ExclusionPolicy,
) -> Result<Spectrum> {
    GridSeries::measure(raster, box_sizes, exclusions, (0, 0))?.spectrum(q_values)
}

/// `count` box sizes spaced linearly from `min` to `min(height, width) / 4`,
/// rounded and deduplicated.
pub fn linear_box_sizes(height: usize, width: usize, min: usize, count: usize) -> Vec<usize> {
    let max = height.min(width) / 4;
    if max < min || count == 0 {
        return Vec::new();
    }
    if count == 1 {
        return vec![min];
    }
    let step = (max - min) as f64 / (count - 1) as f64;
    let mut out: Vec<usize> = (0..count)
        .map(|i| (min as f64 + i as f64 * step).round() as usize)
        .collect();
    out.dedup();
    out
}
