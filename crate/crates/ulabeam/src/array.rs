//! Uniform linear array geometry, evaluation frequency grids, and steering
//! vectors for a source at endfire.
//!
//! The array model is a line of `sensors` omnidirectional elements with
//! constant pitch `spacing_m`, and the look direction is endfire (along the
//! array axis), where a uniform linear array achieves its strongest
//! directivity. Inter-element phase at frequency `f` is then
//! `ϑ = exp(−j·2π·f·δ/c)` and the steering vector is the geometric sequence
//! `[1, ϑ, ϑ², …]`.

use crate::linalg::C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Speed of sound used throughout, in metres per second.
pub const SPEED_OF_SOUND: f64 = 343.0;

/// Errors from geometry and grid construction.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ArrayError {
    /// Sensor count outside `1..`.
    #[error("sensor count must be at least 1, got {0}")]
    InvalidSensorCount(usize),
    /// Spacing not a positive finite number.
    #[error("sensor spacing must be positive and finite, got {0}")]
    InvalidSpacing(f64),
    /// Frequency band invalid (endpoints not finite, non-positive, or
    /// reversed).
    #[error("frequency band must satisfy 0 < lo < hi, got [{lo}, {hi}]")]
    InvalidBand { lo: f64, hi: f64 },
    /// Too few grid points to span a band.
    #[error("frequency grid needs at least 2 bins, got {0}")]
    InvalidBinCount(usize),
    /// A sub-array factorization that does not fit the aperture.
    #[error("cannot split {sensors} sensors with factor {factor}: {why}")]
    InvalidSplit {
        sensors: usize,
        factor: usize,
        why: &'static str,
    },
}

/// A uniform linear array: `sensors` elements at constant pitch `spacing_m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArrayGeometry {
    sensors: usize,
    spacing_m: f64,
}

impl ArrayGeometry {
    /// Validated constructor.
    pub fn new(sensors: usize, spacing_m: f64) -> Result<Self, ArrayError> {
        if sensors < 1 {
            return Err(ArrayError::InvalidSensorCount(sensors));
        }
        if !(spacing_m.is_finite() && spacing_m > 0.0) {
            return Err(ArrayError::InvalidSpacing(spacing_m));
        }
        Ok(ArrayGeometry { sensors, spacing_m })
    }

    /// Number of sensors `M`.
    pub fn sensors(&self) -> usize {
        self.sensors
    }

    /// Inter-element spacing in metres.
    pub fn spacing_m(&self) -> f64 {
        self.spacing_m
    }

    /// Inter-element phase ratio `ϑ = exp(−j·2π·f·δ/c)` for an endfire
    /// source at frequency `f` (hertz).
    pub fn phase_ratio(&self, frequency_hz: f64) -> C64 {
        C64::from_polar(1.0, -self.phase_step(frequency_hz))
    }

    fn phase_step(&self, frequency_hz: f64) -> f64 {
        2.0 * std::f64::consts::PI * frequency_hz * self.spacing_m / SPEED_OF_SOUND
    }

    /// Endfire steering vector `d(f) = [1, ϑ, ϑ², …, ϑ^{M−1}]`.
    ///
    /// Each element is synthesized directly as `exp(−j·m·2πfδ/c)` rather than
    /// by repeated multiplication, so there is no cumulative phase drift along
    /// the aperture; the first element is exactly `1`.
    pub fn steering(&self, frequency_hz: f64) -> Vec<C64> {
        let w = self.phase_step(frequency_hz);
        (0..self.sensors)
            .map(|m| {
                if m == 0 {
                    C64::new(1.0, 0.0)
                } else {
                    C64::from_polar(1.0, -(m as f64) * w)
                }
            })
            .collect()
    }

    /// Splits the array for a Kronecker-product design: `factor` must divide
    /// the sensor count, giving a coarse sub-array of `factor` sensors at
    /// pitch `(M/factor)·δ` and a dense sub-array of `M/factor` sensors at
    /// pitch `δ`. The Kronecker product of the two steering vectors
    /// reproduces the full-aperture steering vector.
    pub fn split_kronecker(&self, factor: usize) -> Result<(ArrayGeometry, ArrayGeometry), ArrayError> {
        if factor == 0 || self.sensors % factor != 0 {
            return Err(ArrayError::InvalidSplit {
                sensors: self.sensors,
                factor,
                why: "factor must be a positive divisor of the sensor count",
            });
        }
        let m2 = self.sensors / factor;
        Ok((
            ArrayGeometry {
                sensors: factor,
                spacing_m: m2 as f64 * self.spacing_m,
            },
            ArrayGeometry {
                sensors: m2,
                spacing_m: self.spacing_m,
            },
        ))
    }

    /// Splits the array for a convolutional design: sub-apertures of
    /// `factor` and `M − factor + 1` sensors, both at the native pitch, whose
    /// weight sequences convolve back to length `M`.
    pub fn split_convolutional(
        &self,
        factor: usize,
    ) -> Result<(ArrayGeometry, ArrayGeometry), ArrayError> {
        if factor == 0 || factor > self.sensors {
            return Err(ArrayError::InvalidSplit {
                sensors: self.sensors,
                factor,
                why: "factor must lie in 1..=sensors",
            });
        }
        Ok((
            ArrayGeometry {
                sensors: factor,
                spacing_m: self.spacing_m,
            },
            ArrayGeometry {
                sensors: self.sensors - factor + 1,
                spacing_m: self.spacing_m,
            },
        ))
    }
}

/// A uniformly spaced evaluation grid over a frequency band `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    lo_hz: f64,
    hi_hz: f64,
    bins: usize,
}

impl FrequencyGrid {
    /// Validated constructor: requires `0 < lo < hi` (finite) and at least
    /// two bins.
    pub fn new(lo_hz: f64, hi_hz: f64, bins: usize) -> Result<Self, ArrayError> {
        if !(lo_hz.is_finite() && hi_hz.is_finite() && lo_hz > 0.0 && hi_hz > lo_hz) {
            return Err(ArrayError::InvalidBand { lo: lo_hz, hi: hi_hz });
        }
        if bins < 2 {
            return Err(ArrayError::InvalidBinCount(bins));
        }
        Ok(FrequencyGrid { lo_hz, hi_hz, bins })
    }

    /// Lower band edge in hertz.
    pub fn lo_hz(&self) -> f64 {
        self.lo_hz
    }

    /// Upper band edge in hertz.
    pub fn hi_hz(&self) -> f64 {
        self.hi_hz
    }

    /// Number of grid points.
    pub fn bins(&self) -> usize {
        self.bins
    }

    /// The grid frequencies, ascending. Computed as the convex combination
    /// `lo·(1−t) + hi·t` with `t = i/(bins−1)`, so both endpoints are exact.
    pub fn frequencies(&self) -> Vec<f64> {
        let n = self.bins;
        (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                self.lo_hz * (1.0 - t) + self.hi_hz * t
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{convolve, inner, kron};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn geometry_validation() {
        assert!(matches!(
            ArrayGeometry::new(0, 0.02),
            Err(ArrayError::InvalidSensorCount(0))
        ));
        assert!(matches!(
            ArrayGeometry::new(4, 0.0),
            Err(ArrayError::InvalidSpacing(_))
        ));
        assert!(matches!(
            ArrayGeometry::new(4, f64::NAN),
            Err(ArrayError::InvalidSpacing(_))
        ));
        assert!(ArrayGeometry::new(1, 0.02).is_ok());
    }

    #[test]
    fn grid_validation() {
        assert!(matches!(
            FrequencyGrid::new(0.0, 8000.0, 16),
            Err(ArrayError::InvalidBand { .. })
        ));
        assert!(matches!(
            FrequencyGrid::new(8000.0, 200.0, 16),
            Err(ArrayError::InvalidBand { .. })
        ));
        assert!(matches!(
            FrequencyGrid::new(200.0, 8000.0, 1),
            Err(ArrayError::InvalidBinCount(1))
        ));
    }

    #[test]
    fn grid_endpoints_exact() {
        let g = FrequencyGrid::new(200.0, 8000.0, 512).unwrap();
        let f = g.frequencies();
        assert_eq!(f.len(), 512);
        assert_eq!(f[0], 200.0);
        assert_eq!(f[511], 8000.0);
        for i in 1..512 {
            assert!(f[i] > f[i - 1]);
        }
    }

    #[test]
    fn steering_first_element_is_one() {
        let a = ArrayGeometry::new(30, 0.02).unwrap();
        let d = a.steering(1234.5);
        assert_eq!(d[0], C64::new(1.0, 0.0));
        assert_eq!(d.len(), 30);
    }

    #[test]
    fn steering_unit_modulus() {
        let a = ArrayGeometry::new(30, 0.02).unwrap();
        for f in [200.0, 977.0, 4000.0, 8000.0] {
            for dm in a.steering(f) {
                assert!((dm.norm() - 1.0).abs() <= 1e-15);
            }
        }
    }

    #[test]
    fn steering_is_geometric_in_phase_ratio() {
        let a = ArrayGeometry::new(12, 0.02).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(48);
        for _ in 0..10 {
            let f = rng.gen_range(200.0..8000.0);
            let t = a.phase_ratio(f);
            let d = a.steering(f);
            let mut pw = C64::new(1.0, 0.0);
            for m in 0..12 {
                assert!((d[m] - pw).norm() <= 1e-12, "f={f} m={m}");
                pw *= t;
            }
        }
    }

    #[test]
    fn phase_ratio_at_half_wavelength_spacing() {
        // f = c/(2δ) puts adjacent sensors exactly half a wavelength apart:
        // the phase ratio is −1.
        let a = ArrayGeometry::new(2, 0.02).unwrap();
        let t = a.phase_ratio(SPEED_OF_SOUND / 0.04);
        assert!((t.re + 1.0).abs() < 1e-12);
        assert!(t.im.abs() < 1e-12);
    }

    #[test]
    fn zero_frequency_steering_is_all_ones() {
        let a = ArrayGeometry::new(5, 0.02).unwrap();
        for dm in a.steering(0.0) {
            assert_eq!(dm, C64::new(1.0, 0.0));
        }
    }

    #[test]
    fn kronecker_split_shapes() {
        let a = ArrayGeometry::new(30, 0.02).unwrap();
        let (coarse, dense) = a.split_kronecker(5).unwrap();
        assert_eq!(coarse.sensors(), 5);
        assert!((coarse.spacing_m() - 0.12).abs() < 1e-15);
        assert_eq!(dense.sensors(), 6);
        assert!((dense.spacing_m() - 0.02).abs() < 1e-15);
        assert!(a.split_kronecker(7).is_err());
        assert!(a.split_kronecker(0).is_err());
    }

    #[test]
    fn kronecker_split_reproduces_steering() {
        let a = ArrayGeometry::new(30, 0.02).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(49);
        for factor in [1usize, 2, 3, 5, 6, 10, 15, 30] {
            let (coarse, dense) = a.split_kronecker(factor).unwrap();
            for _ in 0..5 {
                let f = rng.gen_range(200.0..8000.0);
                let d = a.steering(f);
                let dk = kron(&coarse.steering(f), &dense.steering(f));
                for m in 0..30 {
                    assert!((d[m] - dk[m]).norm() <= 1e-12, "factor={factor} f={f}");
                }
            }
        }
    }

    #[test]
    fn convolutional_split_shapes() {
        let a = ArrayGeometry::new(30, 0.02).unwrap();
        let (s1, s2) = a.split_convolutional(4).unwrap();
        assert_eq!(s1.sensors(), 4);
        assert_eq!(s2.sensors(), 27);
        assert_eq!(s1.spacing_m(), 0.02);
        assert_eq!(s2.spacing_m(), 0.02);
        assert!(a.split_convolutional(31).is_err());
        assert!(a.split_convolutional(0).is_err());
    }

    #[test]
    fn convolved_weights_factor_the_array_response() {
        // For sub-weights h1, h2 on same-pitch sub-apertures, the full-array
        // response of h1∗h2 is the product of the sub-array responses.
        let a = ArrayGeometry::new(9, 0.02).unwrap();
        let (s1, s2) = a.split_convolutional(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        for _ in 0..10 {
            let f = rng.gen_range(200.0..8000.0);
            let h1: Vec<C64> = (0..s1.sensors())
                .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let h2: Vec<C64> = (0..s2.sensors())
                .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let h = convolve(&h1, &h2);
            let lhs = inner(&h, &a.steering(f));
            let rhs = inner(&h1, &s1.steering(f)) * inner(&h2, &s2.steering(f));
            assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
        }
    }
}
