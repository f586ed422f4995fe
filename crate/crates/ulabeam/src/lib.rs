//! Fixed beamformer design and evaluation for uniform linear microphone
//! arrays.
//!
//! A beamformer for an `M`-sensor array is a set of complex weights per
//! frequency. Two figures of merit pull those weights in opposite
//! directions: **white-noise gain** (robustness against sensor self-noise
//! and mismatch) and the **directivity factor** (suppression of diffuse
//! ambient noise). The delay-and-sum design maximizes the former, the
//! superdirective design the latter, and everything interesting lives on
//! the trade-off curve between them.
//!
//! This crate provides:
//!
//! - array geometry, steering vectors, and frequency grids ([`array`]);
//! - spherically isotropic and spherical-segment noise coherence models
//!   ([`noise`]);
//! - six distortionless designs — delay-and-sum, superdirective, and four
//!   parametric families that interpolate between them: regularized,
//!   tunable-cone, Kronecker-product, and convolutional Kronecker-product
//!   ([`beamformer`]);
//! - narrowband and broadband WNG/DF metrics ([`metrics`]);
//! - an experiment driver that sweeps each family, matches a target
//!   broadband WNG, and writes deterministic CSV curves ([`experiment`]).
//!
//! # Quick start
//!
//! ```
//! use ulabeam::{ArrayGeometry, BeamformerSpec, BuildOptions, FrequencyGrid};
//! use ulabeam::metrics::evaluate;
//!
//! // An 8-sensor array with 2 cm spacing, evaluated over 16 bins.
//! let geometry = ArrayGeometry::new(8, 0.02)?;
//! let grid = FrequencyGrid::new(500.0, 4000.0, 16)?;
//!
//! let (wng_curve, df_curve, score) = evaluate(
//!     BeamformerSpec::Superdirective,
//!     &geometry,
//!     &grid,
//!     &BuildOptions::default(),
//! )?;
//!
//! assert_eq!(wng_curve.values().len(), 16);
//! assert_eq!(df_curve.values().len(), 16);
//! println!(
//!     "broadband WNG {:.2} dB, broadband DF {:.2} dB",
//!     score.wng_db, score.df_db
//! );
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```
//!
//! # Determinism
//!
//! Frequency bins are evaluated in parallel, but every result is assembled
//! in bin order and all reductions are fixed-order, so metric values and
//! emitted CSV files are byte-identical across runs and across worker-thread
//! counts.

pub mod array;
pub mod beamformer;
pub mod experiment;
pub mod linalg;
pub mod metrics;
pub mod noise;
mod quad;
mod sigfig;

pub use array::{ArrayError, ArrayGeometry, FrequencyGrid, SPEED_OF_SOUND};
pub use beamformer::{build, mvdr, BeamformerError, BeamformerSpec, BeamformerWeights, BuildOptions};
pub use experiment::{
    ExperimentConfig, ExperimentError, Family, MatchResult, Overrides, RunReport, RunScope,
    SweepRow,
};
pub use linalg::{C64, HermitianMat, LinalgError};
pub use metrics::{BroadbandScore, MetricCurve, MetricsError};
pub use noise::{field_rsd, field_tunable, gamma_isotropic, NoiseError};

// Compile and run the guide's code snippets as doc-tests so the book can
// never drift from the library.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            mod $name {}
        };
    }
    chapter!(intro, "../../../book/src/intro.md");
    chapter!(arrays, "../../../book/src/arrays.md");
    chapter!(noise_fields, "../../../book/src/noise-fields.md");
    chapter!(beamformers, "../../../book/src/beamformers.md");
    chapter!(metrics, "../../../book/src/metrics.md");
    chapter!(experiments, "../../../book/src/experiments.md");
}
