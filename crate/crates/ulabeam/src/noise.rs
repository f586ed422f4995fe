//! Noise-field spatial correlation models for uniform linear arrays.
//!
//! All fields are expressed as Hermitian pseudo-coherence matrices with unit
//! diagonal at full coverage:
//!
//! * [`gamma_isotropic`] — spherically isotropic (diffuse) noise, the classic
//!   `sinc` Toeplitz matrix, in closed form.
//! * [`gamma_segment`] — noise confined to the polar cap `θ ∈ [ψ, π]`,
//!   integrated numerically with Gauss–Legendre quadrature. Its per-direction
//!   density matches the isotropic field, so its diagonal is
//!   `(1 + cos ψ)/2 ≤ 1` rather than renormalized to one.
//! * [`field_rsd`] — convex blend `(1−α)·Γ_iso + α·I`, the classic
//!   regularization path from superdirective (`α = 0`) to delay-and-sum
//!   behaviour (`α = 1`).
//! * [`field_tunable`] — `Γ_[ψ,π] + ε·I` with `ε = (1 − cos ψ)/2`, which
//!   restores a unit diagonal and sweeps the same two endpoints as `α` does:
//!   the isotropic matrix at `ψ = 0` and the identity at `ψ = π`.
//!
//! Both parametric constructors return the exact endpoint matrices (bitwise)
//! at the ends of their parameter ranges, so downstream designs built from
//! them coincide exactly where the families meet.

use crate::array::{ArrayGeometry, SPEED_OF_SOUND};
use crate::linalg::{HermitianMat, C64};
use crate::quad::gauss_legendre_on;
use thiserror::Error;

/// Quadrature size used by [`field_tunable`] for the segment integral; at
/// this size the rule reproduces the closed-form isotropic matrix to ~1e-14.
pub const SEGMENT_NODES: usize = 200;

/// Errors from noise-field construction.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum NoiseError {
    /// Blend parameter outside `[0, 1]`.
    #[error("blend parameter must lie in [0, 1], got {0}")]
    InvalidAlpha(f64),
    /// Cone half-angle outside its domain.
    #[error("cone angle must lie in [{lo}, {hi}], got {got}")]
    InvalidPsi { got: f64, lo: f64, hi: f64 },
    /// Quadrature with no nodes.
    #[error("quadrature needs at least one node")]
    NoNodes,
}

/// Unnormalized cardinal sine `sin(x)/x`, exactly `1` at `x = 0`.
fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

/// Spherically isotropic noise coherence: `Γ(m,n) = sinc(2πf·δ·(m−n)/c)`.
///
/// Real, symmetric Toeplitz, with an exactly-unit diagonal.
pub fn gamma_isotropic(geometry: &ArrayGeometry, frequency_hz: f64) -> HermitianMat {
    let m = geometry.sensors();
    let a = 2.0 * std::f64::consts::PI * frequency_hz * geometry.spacing_m() / SPEED_OF_SOUND;
    // Toeplitz: one generator value per lag.
    let gen: Vec<f64> = (0..m).map(|k| sinc(a * k as f64)).collect();
    HermitianMat::from_upper(m, |i, j| C64::new(gen[j - i], 0.0))
}

/// Coherence of noise arriving from the polar segment `θ ∈ [ψ, π]`:
///
/// `Γ(m,n) = ½ ∫_ψ^π sin θ · exp(−j·2πfδ(m−n)·cos θ / c) dθ`,
///
/// evaluated with an `nodes`-point Gauss–Legendre rule. Requires
/// `0 ≤ ψ < π`; at `ψ = 0` this reduces to the isotropic field. The matrix
/// is Hermitian Toeplitz, so only one generator value per lag is accumulated.
pub fn gamma_segment(
    geometry: &ArrayGeometry,
    frequency_hz: f64,
    psi: f64,
    nodes: usize,
) -> Result<HermitianMat, NoiseError> {
    if !(psi.is_finite() && (0.0..std::f64::consts::PI).contains(&psi)) {
        return Err(NoiseError::InvalidPsi {
            got: psi,
            lo: 0.0,
            hi: std::f64::consts::PI,
        });
    }
    if nodes == 0 {
        return Err(NoiseError::NoNodes);
    }
    let m = geometry.sensors();
    let a = 2.0 * std::f64::consts::PI * frequency_hz * geometry.spacing_m() / SPEED_OF_SOUND;
    let (theta, weight) = gauss_legendre_on(psi, std::f64::consts::PI, nodes);
    // Generator per lag k ≥ 0 for the upper triangle (column ≥ row), where
    // the exponent sign flips to +j·a·k·cosθ. The lag-k phasor is the k-th
    // power of the lag-1 phasor, built up by multiplication: one sin/cos
    // per node instead of one per node-lag pair, with rotation drift
    // bounded by k ulps — far below the quadrature's own truncation error.
    let mut gen = vec![C64::new(0.0, 0.0); m];
    for (t, w) in theta.iter().zip(&weight) {
        let scale = 0.5 * w * t.sin();
        let step = C64::from_polar(1.0, a * t.cos());
        let mut phasor = C64::new(1.0, 0.0);
        gen[0] += scale;
        for g in gen.iter_mut().skip(1) {
            phasor *= step;
            *g += scale * phasor;
        }
    }
    Ok(HermitianMat::from_upper(m, |i, j| gen[j - i]))
}

/// Regularized blend `(1−α)·Γ_iso + α·I` for `α ∈ [0, 1]`.
///
/// The diagonal is set to exactly `1` (both constituents have unit
/// diagonal), and the endpoints return the isotropic matrix and the identity
/// bitwise.
pub fn field_rsd(
    geometry: &ArrayGeometry,
    frequency_hz: f64,
    alpha: f64,
) -> Result<HermitianMat, NoiseError> {
    if !(alpha.is_finite() && (0.0..=1.0).contains(&alpha)) {
        return Err(NoiseError::InvalidAlpha(alpha));
    }
    if alpha == 0.0 {
        return Ok(gamma_isotropic(geometry, frequency_hz));
    }
    let m = geometry.sensors();
    if alpha == 1.0 {
        return Ok(HermitianMat::identity(m));
    }
    let iso = gamma_isotropic(geometry, frequency_hz);
    Ok(HermitianMat::from_upper(m, |i, j| {
        if i == j {
            C64::new(1.0, 0.0)
        } else {
            (1.0 - alpha) * iso.entry(i, j)
        }
    }))
}

/// Diagonal boost used by [`field_tunable`]: `ε = (1 − cos ψ)/2`, exactly
/// the coverage lost by shrinking the noise segment from `[0, π]` to
/// `[ψ, π]`, so the combined matrix keeps a unit diagonal.
pub fn tunable_epsilon(psi: f64) -> f64 {
    0.5 * (1.0 - psi.cos())
}

/// Tunable field `Γ_[ψ,π] + ε(ψ)·I` for `ψ ∈ [0, π]`.
///
/// Routing at the ends is exact: `ψ = 0` returns the closed-form isotropic
/// matrix (no quadrature), `ψ = π` returns the identity.
pub fn field_tunable(
    geometry: &ArrayGeometry,
    frequency_hz: f64,
    psi: f64,
) -> Result<HermitianMat, NoiseError> {
    if !(psi.is_finite() && (0.0..=std::f64::consts::PI).contains(&psi)) {
        return Err(NoiseError::InvalidPsi {
            got: psi,
            lo: 0.0,
            hi: std::f64::consts::PI,
        });
    }
    if psi == 0.0 {
        return Ok(gamma_isotropic(geometry, frequency_hz));
    }
    if psi == std::f64::consts::PI {
        return Ok(HermitianMat::identity(geometry.sensors()));
    }
    let seg = gamma_segment(geometry, frequency_hz, psi, SEGMENT_NODES)?;
    let eps = tunable_epsilon(psi);
    let m = geometry.sensors();
    Ok(HermitianMat::from_upper(m, |i, j| {
        if i == j {
            seg.entry(i, i) + eps
        } else {
            seg.entry(i, j)
        }
    }))
}
