//! Fixed beamformer designs on a uniform linear array.
//!
//! Every design here is a minimum-variance distortionless-response (MVDR)
//! solution `h = Φ⁻¹d / (dᴴΦ⁻¹d)` for some assumed noise coherence `Φ`; the
//! families differ only in the choice of `Φ` or in how sub-array designs are
//! combined:
//!
//! * **Delay-and-sum** (`Φ = I`): maximizes white-noise gain.
//! * **Superdirective** (`Φ = Γ_iso`): maximizes the directivity factor.
//! * **Regularized superdirective**: `Φ = (1−α)Γ_iso + αI`, sweeping between
//!   the two as `α` goes `0 → 1`.
//! * **Tunable-field**: `Φ = Γ_[ψ,π] + ε(ψ)I`, sweeping the same endpoints
//!   as `ψ` goes `0 → π` by shrinking the assumed noise cone instead of
//!   blending matrices.
//! * **Kronecker**: the aperture is factored as `M = M₁·M₂`; a coarse
//!   sub-array (`M₁` sensors, pitch `M₂δ`) gets a delay-and-sum design and a
//!   dense sub-array (`M₂` sensors, pitch `δ`) a superdirective one, and the
//!   full weights are their Kronecker product.
//! * **Convolutional**: the aperture is factored as `M = M₁ + M₂ − 1` at
//!   native pitch, and the sub-designs (delay-and-sum on `M₁`,
//!   superdirective on `M₂`) are combined by convolving the weight
//!   sequences.
//!
//! Ill-conditioned designs are handled by a fixed diagonal-loading ladder:
//! the solve is attempted unloaded, then with `10⁻¹²·trace/M` escalating by
//! decades up to `10⁻⁶·trace/M`, and the first loading whose solution meets
//! the solver's residual contract wins. The loading actually used is
//! recorded on the returned weights.

use crate::array::{ArrayError, ArrayGeometry};
use crate::linalg::{
    convolve, inner, kron, solve_hermitian, HermitianMat, LinalgError, C64,
};
use crate::noise::{field_rsd, field_tunable, gamma_isotropic, NoiseError};
use thiserror::Error;

/// Decade exponents of the diagonal-loading ladder, applied to `trace/M`;
/// the ladder is `0` followed by `10^e · trace/M` for `e` in this range.
pub const LOADING_EXP_RANGE: std::ops::RangeInclusive<i32> = -12..=-6;

/// Errors from beamformer construction.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum BeamformerError {
    /// Geometry or sub-array split problem.
    #[error(transparent)]
    Array(#[from] ArrayError),
    /// Noise-field parameter problem.
    #[error(transparent)]
    Noise(#[from] NoiseError),
    /// The design system stayed singular through the whole loading ladder.
    #[error("design singular even at maximum diagonal loading: {0}")]
    SingularAtMaxLoading(LinalgError),
    /// Operand shapes disagree.
    #[error(transparent)]
    Linalg(LinalgError),
}

/// A fixed beamformer design choice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BeamformerSpec {
    /// Uniform weighting `h = d/M` (MVDR against white noise).
    DelayAndSum,
    /// MVDR against the spherically isotropic field.
    Superdirective,
    /// MVDR against `(1−α)Γ_iso + αI`, `α ∈ [0, 1]`.
    Regularized { alpha: f64 },
    /// MVDR against `Γ_[ψ,π] + ε(ψ)I`, `ψ ∈ [0, π]`.
    Tunable { psi: f64 },
    /// Kronecker factorization with a coarse sub-array of `coarse_sensors`
    /// elements; requires `coarse_sensors` to divide the sensor count.
    Kronecker { coarse_sensors: usize },
    /// Convolutional factorization with a first sub-aperture of
    /// `sub_sensors` elements; requires `1 ≤ sub_sensors ≤ M`.
    ConvolutionalKronecker { sub_sensors: usize },
}

impl BeamformerSpec {
    /// Short family tag used in file names and report tables.
    pub fn family(&self) -> &'static str {
        match self {
            BeamformerSpec::DelayAndSum => "ds",
            BeamformerSpec::Superdirective => "sd",
            BeamformerSpec::Regularized { .. } => "rsd",
            BeamformerSpec::Tunable { .. } => "tun",
            BeamformerSpec::Kronecker { .. } => "kp",
            BeamformerSpec::ConvolutionalKronecker { .. } => "ckp",
        }
    }

    /// The family parameter, if the family has one.
    pub fn parameter(&self) -> Option<f64> {
        match *self {
            BeamformerSpec::DelayAndSum | BeamformerSpec::Superdirective => None,
            BeamformerSpec::Regularized { alpha } => Some(alpha),
            BeamformerSpec::Tunable { psi } => Some(psi),
            BeamformerSpec::Kronecker { coarse_sensors } => Some(coarse_sensors as f64),
            BeamformerSpec::ConvolutionalKronecker { sub_sensors } => Some(sub_sensors as f64),
        }
    }
}

impl std::fmt::Display for BeamformerSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            BeamformerSpec::DelayAndSum => write!(f, "ds"),
            BeamformerSpec::Superdirective => write!(f, "sd"),
            BeamformerSpec::Regularized { alpha } => write!(f, "rsd(alpha={alpha})"),
            BeamformerSpec::Tunable { psi } => write!(f, "tun(psi={psi})"),
            BeamformerSpec::Kronecker { coarse_sensors } => write!(f, "kp(m1={coarse_sensors})"),
            BeamformerSpec::ConvolutionalKronecker { sub_sensors } => {
                write!(f, "ckp(m1={sub_sensors})")
            }
        }
    }
}

/// Options that vary a design without changing its family.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BuildOptions {
    /// Swap the sub-array roles in the Kronecker design: give the coarse
    /// sub-array the superdirective design and the dense one delay-and-sum.
    pub kp_swap: bool,
}

/// Beamformer weights for one frequency bin.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamformerWeights {
    /// The design these weights realize.
    pub spec: BeamformerSpec,
    /// Frequency the weights were designed for, in hertz.
    pub frequency_hz: f64,
    /// Complex sensor weights, one per array element.
    pub weights: Vec<C64>,
    /// Diagonal loading accepted by the ladder (largest across sub-solves
    /// for the factored designs); `0` when the unloaded solve succeeded.
    pub loading_used: f64,
}

/// MVDR design against an arbitrary noise coherence: solves `Φz = d` through
/// the loading ladder and normalizes to the distortionless solution
/// `h = z/(dᴴz)`. Returns the weights and the loading that was accepted.
pub fn mvdr(phi: &HermitianMat, steering: &[C64]) -> Result<(Vec<C64>, f64), BeamformerError> {
    let n = phi.dim();
    if steering.len() != n {
        return Err(BeamformerError::Linalg(LinalgError::DimensionMismatch {
            expected: n,
            got: steering.len(),
        }));
    }
    let scale = phi.trace_real() / n as f64;
    let ladder = std::iter::once(0.0).chain(LOADING_EXP_RANGE.map(|e| scale * 10f64.powi(e)));
    let mut last = LinalgError::Empty;
    for loading in ladder {
        match solve_hermitian(phi, steering, loading) {
            Ok(z) => {
                let s = inner(steering, &z);
                if s.norm() == 0.0 || !s.norm().is_finite() {
                    last = LinalgError::SingularMatrix(
                        crate::linalg::SingularReason::ResidualAboveBound {
                            residual: f64::INFINITY,
                            bound: 0.0,
                        },
                    );
                    continue;
                }
                let h = z.iter().map(|x| x / s).collect();
                return Ok((h, loading));
            }
            Err(e @ LinalgError::SingularMatrix(_)) => last = e,
            Err(e) => return Err(BeamformerError::Linalg(e)),
        }
    }
    Err(BeamformerError::SingularAtMaxLoading(last))
}

/// Builds the weights of `spec` on `geometry` at one frequency.
pub fn build(
    spec: BeamformerSpec,
    geometry: &ArrayGeometry,
    frequency_hz: f64,
    options: &BuildOptions,
) -> Result<BeamformerWeights, BeamformerError> {
    let m = geometry.sensors();
    let d = geometry.steering(frequency_hz);
    let (weights, loading_used) = match spec {
        BeamformerSpec::DelayAndSum => mvdr(&HermitianMat::identity(m), &d)?,
        BeamformerSpec::Superdirective => mvdr(&gamma_isotropic(geometry, frequency_hz), &d)?,
        BeamformerSpec::Regularized { alpha } => {
            mvdr(&field_rsd(geometry, frequency_hz, alpha)?, &d)?
        }
        BeamformerSpec::Tunable { psi } => {
            mvdr(&field_tunable(geometry, frequency_hz, psi)?, &d)?
        }
        BeamformerSpec::Kronecker { coarse_sensors } => {
            let (coarse, dense) = geometry.split_kronecker(coarse_sensors)?;
            let d1 = coarse.steering(frequency_hz);
            let d2 = dense.steering(frequency_hz);
            let (h1, l1, h2, l2) = if options.kp_swap {
                let (h1, l1) = mvdr(&gamma_isotropic(&coarse, frequency_hz), &d1)?;
                let (h2, l2) = mvdr(&HermitianMat::identity(dense.sensors()), &d2)?;
                (h1, l1, h2, l2)
            } else {
                let (h1, l1) = mvdr(&HermitianMat::identity(coarse.sensors()), &d1)?;
                let (h2, l2) = mvdr(&gamma_isotropic(&dense, frequency_hz), &d2)?;
                (h1, l1, h2, l2)
            };
            (kron(&h1, &h2), l1.max(l2))
        }
        BeamformerSpec::ConvolutionalKronecker { sub_sensors } => {
            let (first, second) = geometry.split_convolutional(sub_sensors)?;
            let d1 = first.steering(frequency_hz);
            let d2 = second.steering(frequency_hz);
            let (h1, l1) = mvdr(&HermitianMat::identity(first.sensors()), &d1)?;
            let (h2, l2) = mvdr(&gamma_isotropic(&second, frequency_hz), &d2)?;
            let mut h = convolve(&h1, &h2);
            // The product of the two distortionless sub-responses is 1 only
            // up to rounding, so interior factorizations renormalize with a
            // final division by hᴴd. At the boundary factors the convolution
            // is an exact identity (one operand is the scalar 1) and the
            // division would only inject rounding noise where the design
            // coincides with a plain delay-and-sum or superdirective
            // beamformer, so those skip it.
            if 1 < sub_sensors && sub_sensors < m {
                let s = inner(&h, &d).conj();
                for x in &mut h {
                    *x /= s;
                }
            }
            (h, l1.max(l2))
        }
    };
    Ok(BeamformerWeights {
        spec,
        frequency_hz,
        weights,
        loading_used,
    })
}
