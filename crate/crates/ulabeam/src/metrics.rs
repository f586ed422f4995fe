//! Narrowband and broadband performance metrics for fixed beamformers.
//!
//! Two narrowband figures of merit are computed as quotients, exactly as
//! defined:
//!
//! * **White-noise gain** `W[h](f) = |hᴴd|² / (hᴴh)` — array gain against
//!   spatially white sensor noise; bounded by the sensor count `M`, attained
//!   by delay-and-sum.
//! * **Directivity factor** `D[h](f) = |hᴴd|² / (hᴴ Γ_iso h)` — array gain
//!   against the spherically isotropic field; maximized by the
//!   superdirective design.
//!
//! Broadband aggregation uses the bandwidth-normalized harmonic mean
//! `[(1/(f₁−f₀)) ∫ 1/value df]⁻¹`, integrated by the trapezoid rule on the
//! evaluation grid, reported in decibels. The normalization by bandwidth
//! makes a constant curve aggregate to its constant — in particular a
//! delay-and-sum white-noise-gain curve scores `10·log10(M)` over any band —
//! where the raw integral would carry units of inverse hertz.

use crate::array::{ArrayGeometry, FrequencyGrid};
use crate::beamformer::{build, BeamformerError, BeamformerSpec, BuildOptions};
use crate::linalg::{hermitian_inner, inner, norm_sq, HermitianMat, LinalgError, C64};
use crate::noise::gamma_isotropic;
use rayon::prelude::*;
use thiserror::Error;

/// Errors from metric evaluation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    /// The weight vector has zero norm.
    #[error("weights have zero norm")]
    ZeroWeights,
    /// A quadratic form that should be positive came out non-positive.
    #[error("noise quadratic form not positive ({0:.3e}); degenerate weights for this field")]
    DegenerateForm(f64),
    /// A curve value unusable for harmonic aggregation.
    #[error("curve value at bin {index} must be positive and finite, got {value}")]
    NonPositiveValue { index: usize, value: f64 },
    /// Curve/grid length disagreement.
    #[error("curve length {got} does not match grid bin count {expected}")]
    LengthMismatch { expected: usize, got: usize },
    /// Underlying design failure.
    #[error(transparent)]
    Build(#[from] BeamformerError),
    /// Operand shape problem.
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A narrowband metric sampled on a frequency grid (linear scale).
#[derive(Debug, Clone, PartialEq)]
pub struct MetricCurve {
    grid: FrequencyGrid,
    values: Vec<f64>,
    label: String,
}

impl MetricCurve {
    /// Validated constructor: the value sequence must match the grid.
    pub fn new(grid: FrequencyGrid, values: Vec<f64>, label: String) -> Result<Self, MetricsError> {
        if values.len() != grid.bins() {
            return Err(MetricsError::LengthMismatch {
                expected: grid.bins(),
                got: values.len(),
            });
        }
        Ok(MetricCurve { grid, values, label })
    }

    /// The evaluation grid.
    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    /// Linear-scale metric values, one per grid bin.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Human-readable curve label.
    pub fn label(&self) -> &str {
        &self.label
    }
}

/// Broadband summary of one design: both aggregates in decibels.
#[derive(Debug, Clone, PartialEq)]
pub struct BroadbandScore {
    /// Broadband white-noise gain in dB.
    pub wng_db: f64,
    /// Broadband directivity factor in dB.
    pub df_db: f64,
    /// The design the score belongs to.
    pub spec: BeamformerSpec,
}

/// Decibel conversion `10·log10(x)`.
pub fn db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Narrowband white-noise gain `|hᴴd|² / (hᴴh)`.
pub fn wng_narrowband(h: &[C64], d: &[C64]) -> Result<f64, MetricsError> {
    if h.len() != d.len() {
        return Err(MetricsError::LengthMismatch {
            expected: d.len(),
            got: h.len(),
        });
    }
    let den = norm_sq(h);
    if den == 0.0 {
        return Err(MetricsError::ZeroWeights);
    }
    Ok(inner(h, d).norm_sqr() / den)
}

/// Narrowband directivity factor `|hᴴd|² / (hᴴΓh)` against the supplied
/// noise coherence (the isotropic field at the same geometry and frequency).
pub fn df_narrowband(h: &[C64], d: &[C64], gamma: &HermitianMat) -> Result<f64, MetricsError> {
    if h.len() != d.len() {
        return Err(MetricsError::LengthMismatch {
            expected: d.len(),
            got: h.len(),
        });
    }
    let den = hermitian_inner(h, gamma, h)?.re;
    if !(den > 0.0) {
        return Err(MetricsError::DegenerateForm(den));
    }
    Ok(inner(h, d).norm_sqr() / den)
}

/// Broadband aggregate of a metric curve, in decibels: `10·log10` of the
/// bandwidth-normalized harmonic mean, with the frequency integral taken by
/// the trapezoid rule on the curve's uniform grid. On a grid of `n` bins the
/// uniform spacing cancels, leaving `(n−1) / Σ wᵢ/vᵢ` with end weights `½`.
pub fn broadband(curve: &MetricCurve) -> Result<f64, MetricsError> {
    let v = curve.values();
    let n = v.len();
    let mut sum = 0.0;
    for (i, &x) in v.iter().enumerate() {
        if !(x.is_finite() && x > 0.0) {
            return Err(MetricsError::NonPositiveValue { index: i, value: x });
        }
        let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        sum += w / x;
    }
    Ok(db((n - 1) as f64 / sum))
}

/// Designs `spec` at every grid frequency and returns the two narrowband
/// curves plus the broadband summary. Frequency bins are evaluated in
/// parallel and merged back in grid order, so results are identical for any
/// worker count.
pub fn evaluate(
    spec: BeamformerSpec,
    geometry: &ArrayGeometry,
    grid: &FrequencyGrid,
    options: &BuildOptions,
) -> Result<(MetricCurve, MetricCurve, BroadbandScore), MetricsError> {
    let freqs = grid.frequencies();
    let per_bin: Result<Vec<(f64, f64)>, MetricsError> = freqs
        .par_iter()
        .map(|&f| {
            let w = build(spec, geometry, f, options)?;
            let d = geometry.steering(f);
            let gamma = gamma_isotropic(geometry, f);
            let wng = wng_narrowband(&w.weights, &d)?;
            let df = df_narrowband(&w.weights, &d, &gamma)?;
            Ok((wng, df))
        })
        .collect();
    let per_bin = per_bin?;
    let wng_curve = MetricCurve::new(
        *grid,
        per_bin.iter().map(|p| p.0).collect(),
        format!("wng {spec}"),
    )?;
    let df_curve = MetricCurve::new(
        *grid,
        per_bin.iter().map(|p| p.1).collect(),
        format!("df {spec}"),
    )?;
    let score = BroadbandScore {
        wng_db: broadband(&wng_curve)?,
        df_db: broadband(&df_curve)?,
        spec,
    };
    Ok((wng_curve, df_curve, score))
}
