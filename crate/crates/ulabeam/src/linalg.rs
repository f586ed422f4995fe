//! Minimal complex linear algebra: Hermitian matrices, inner products,
//! Kronecker products, sequence convolution, and a pivoted Hermitian solve.
//!
//! Everything here is sized for beamforming work on arrays of a few dozen
//! sensors: dense storage, straightforward O(n³) factorization, and strict
//! determinism (no data-dependent parallelism, ties in pivot selection always
//! break to the lowest row index). Correctness and reproducibility dominate
//! raw speed at this scale.

use num_complex::Complex64;
use thiserror::Error;

/// Double-precision complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Relative residual bound the solver must meet: a returned solution `z`
/// satisfies `‖(B + loading·I)z − rhs‖∞ ≤ RESIDUAL_BOUND · ‖rhs‖∞`.
pub const RESIDUAL_BOUND: f64 = 1e-8;

/// Pivot floor as a fraction of `trace/n`; a pivot at or below
/// `PIVOT_FLOOR · trace/n` classifies the matrix as numerically singular.
pub const PIVOT_FLOOR: f64 = 1e-14;

/// Absolute tolerance for the Hermitian-symmetry validation of a matrix.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Errors from the linear-algebra layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    /// Operand dimensions do not agree.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    /// The (possibly loaded) matrix cannot be solved to contract.
    #[error("matrix numerically singular: {0}")]
    SingularMatrix(SingularReason),
    /// A matrix handed to `HermitianMat::try_new` fails the symmetry check.
    #[error("matrix not Hermitian: entries ({i},{j})/({j},{i}) differ by {diff:.3e}")]
    NotHermitian { i: usize, j: usize, diff: f64 },
    /// An empty vector or zero-dimensional matrix was supplied.
    #[error("empty operand")]
    Empty,
}

/// Why a solve was classified as singular.
#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum SingularReason {
    #[error("pivot {pivot:.3e} at or below threshold {threshold:.3e}")]
    PivotBelowThreshold { pivot: f64, threshold: f64 },
    #[error("solution residual {residual:.3e} exceeds bound {bound:.3e}")]
    ResidualAboveBound { residual: f64, bound: f64 },
}

/// Dense Hermitian matrix in row-major storage.
///
/// The type invariant (entry(i,j) = conj(entry(j,i)), real diagonal) is
/// guaranteed by the [`HermitianMat::from_upper`] constructor and checked to
/// [`HERMITIAN_TOL`] by [`HermitianMat::try_new`].
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMat {
    n: usize,
    data: Vec<C64>,
}

impl HermitianMat {
    /// Builds an `n×n` Hermitian matrix from a generator for the upper
    /// triangle (called with `i ≤ j`); the lower triangle is mirrored by
    /// conjugation and the diagonal's imaginary part is forced to zero, so
    /// the Hermitian invariant holds exactly by construction.
    pub fn from_upper(n: usize, mut upper: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in i..n {
                let v = upper(i, j);
                if i == j {
                    data[i * n + i] = C64::new(v.re, 0.0);
                } else {
                    data[i * n + j] = v;
                    data[j * n + i] = v.conj();
                }
            }
        }
        HermitianMat { n, data }
    }

    /// Validates a full row-major matrix against the Hermitian invariant.
    pub fn try_new(n: usize, data: Vec<C64>) -> Result<Self, LinalgError> {
        if n == 0 || data.len() != n * n {
            return Err(LinalgError::DimensionMismatch {
                expected: n * n,
                got: data.len(),
            });
        }
        for i in 0..n {
            for j in i..n {
                let diff = (data[i * n + j] - data[j * n + i].conj()).norm();
                if diff > HERMITIAN_TOL {
                    return Err(LinalgError::NotHermitian { i, j, diff });
                }
            }
        }
        Ok(HermitianMat { n, data })
    }

    /// The `n×n` identity matrix.
    pub fn identity(n: usize) -> Self {
        HermitianMat::from_upper(n, |i, j| {
            if i == j {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    /// Matrix dimension.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry at row `i`, column `j`.
    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.n + j]
    }

    /// Real part of the trace (the diagonal is real by invariant).
    pub fn trace_real(&self) -> f64 {
        (0..self.n).map(|i| self.data[i * self.n + i].re).sum()
    }

    /// Matrix–vector product `B·x`.
    pub fn mul_vec(&self, x: &[C64]) -> Result<Vec<C64>, LinalgError> {
        if x.len() != self.n {
            return Err(LinalgError::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok((0..self.n)
            .map(|i| {
                let mut acc = C64::new(0.0, 0.0);
                for j in 0..self.n {
                    acc += self.data[i * self.n + j] * x[j];
                }
                acc
            })
            .collect())
    }
}

/// Plain inner product `aᴴb` (conjugates the first argument).
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = C64::new(0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        acc += x.conj() * y;
    }
    acc
}

/// Squared Euclidean norm `‖a‖² = aᴴa` as a real scalar.
pub fn norm_sq(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

/// Sesquilinear form `aᴴ B c`.
///
/// When `a` and `c` are the same vector the sum is rearranged into its
/// diagonal part plus twice the real part of the strict upper triangle, which
/// is algebraically identical for a Hermitian `B` but returns an *exactly*
/// real scalar — important when the form is a near-cancelling denominator,
/// where naive summation leaves rounding-level imaginary residue.
pub fn hermitian_inner(a: &[C64], b: &HermitianMat, c: &[C64]) -> Result<C64, LinalgError> {
    let n = b.dim();
    if a.len() != n {
        return Err(LinalgError::DimensionMismatch {
            expected: n,
            got: a.len(),
        });
    }
    if c.len() != n {
        return Err(LinalgError::DimensionMismatch {
            expected: n,
            got: c.len(),
        });
    }
    let same = std::ptr::eq(a.as_ptr(), c.as_ptr()) || a == c;
    if same {
        let mut diag = 0.0;
        let mut cross = 0.0;
        for i in 0..n {
            diag += a[i].norm_sqr() * b.entry(i, i).re;
            for j in (i + 1)..n {
                cross += (a[i].conj() * b.entry(i, j) * a[j]).re;
            }
        }
        return Ok(C64::new(diag + 2.0 * cross, 0.0));
    }
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        let mut row = C64::new(0.0, 0.0);
        for j in 0..n {
            row += b.entry(i, j) * c[j];
        }
        acc += a[i].conj() * row;
    }
    Ok(acc)
}

/// Solves `(B + loading·I) z = rhs` by LU factorization with partial
/// pivoting.
///
/// The returned solution honours `‖(B + loading·I)z − rhs‖∞ ≤`
/// [`RESIDUAL_BOUND`]`·‖rhs‖∞`; if either a pivot falls at or below
/// [`PIVOT_FLOOR`]`·trace/n` or the computed solution misses that residual
/// bound, the system is reported as [`LinalgError::SingularMatrix`] so the
/// caller can raise the loading. Deterministic for identical inputs: pivot
/// ties always resolve to the lowest row index and all loops are sequential.
pub fn solve_hermitian(b: &HermitianMat, rhs: &[C64], loading: f64) -> Result<Vec<C64>, LinalgError> {
    let n = b.dim();
    if rhs.len() != n {
        return Err(LinalgError::DimensionMismatch {
            expected: n,
            got: rhs.len(),
        });
    }
    // Loaded system kept in two copies: `a` is destroyed by the
    // factorization, `a0` evaluates the residual afterwards.
    let mut a: Vec<C64> = b.data.clone();
    if loading != 0.0 {
        for i in 0..n {
            a[i * n + i] += loading;
        }
    }
    let a0 = a.clone();
    let trace: f64 = (0..n).map(|i| a[i * n + i].re).sum();
    let threshold = PIVOT_FLOOR * trace / n as f64;

    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let mut p = k;
        let mut best = a[k * n + k].norm();
        for i in (k + 1)..n {
            let m = a[i * n + k].norm();
            if m > best {
                best = m;
                p = i;
            }
        }
        if best <= threshold {
            return Err(LinalgError::SingularMatrix(
                SingularReason::PivotBelowThreshold {
                    pivot: best,
                    threshold,
                },
            ));
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            perm.swap(k, p);
        }
        let pivot = a[k * n + k];
        for i in (k + 1)..n {
            let l = a[i * n + k] / pivot;
            a[i * n + k] = l;
            for j in (k + 1)..n {
                let t = l * a[k * n + j];
                a[i * n + j] -= t;
            }
        }
    }

    // Permuted forward substitution (L has unit diagonal), then backward.
    let mut z: Vec<C64> = perm.iter().map(|&i| rhs[i]).collect();
    for i in 1..n {
        for k in 0..i {
            let t = a[i * n + k] * z[k];
            z[i] -= t;
        }
    }
    for i in (0..n).rev() {
        for k in (i + 1)..n {
            let t = a[i * n + k] * z[k];
            z[i] -= t;
        }
        z[i] /= a[i * n + i];
    }

    // Residual contract against the original loaded system.
    let rhs_norm = rhs.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut resid: f64 = 0.0;
    for i in 0..n {
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..n {
            acc += a0[i * n + j] * z[j];
        }
        resid = resid.max((acc - rhs[i]).norm());
    }
    let bound = RESIDUAL_BOUND * rhs_norm;
    if resid > bound {
        return Err(LinalgError::SingularMatrix(
            SingularReason::ResidualAboveBound { residual: resid, bound },
        ));
    }
    Ok(z)
}

/// Kronecker product of two vectors: `result[i·len(b)+k] = a[i]·b[k]`.
///
/// ```
/// use ulabeam::linalg::{kron, C64};
/// let a = vec![C64::new(1.0, 0.0), C64::new(0.0, 1.0)];
/// let b = vec![C64::new(2.0, 0.0)];
/// assert_eq!(kron(&a, &b), vec![C64::new(2.0, 0.0), C64::new(0.0, 2.0)]);
/// ```
pub fn kron(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &x in a {
        for &y in b {
            out.push(x * y);
        }
    }
    out
}

/// Linear (full) convolution: `result[n] = Σ_k a[k]·b[n−k]`, length
/// `len(a)+len(b)−1`. Interpreting the inputs as polynomial coefficient
/// sequences, this is exactly polynomial multiplication.
pub fn convolve(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (k, &x) in a.iter().enumerate() {
        for (m, &y) in b.iter().enumerate() {
            out[k + m] += x * y;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
        (0..n)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect()
    }

    /// Random Hermitian positive-definite matrix `RᴴR + I`, comfortably
    /// well-conditioned.
    fn random_hpd(rng: &mut ChaCha8Rng, n: usize) -> HermitianMat {
        let r: Vec<C64> = (0..n * n)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        HermitianMat::from_upper(n, |i, j| {
            let mut acc = c(0.0, 0.0);
            for k in 0..n {
                acc += r[k * n + i].conj() * r[k * n + j];
            }
            if i == j {
                acc + 1.0
            } else {
                acc
            }
        })
    }

    #[test]
    fn inner_identity_all_ones() {
        let a = vec![c(1.0, 0.0), c(1.0, 0.0)];
        let b = HermitianMat::identity(2);
        let v = hermitian_inner(&a, &b, &a).unwrap();
        assert_eq!(v, c(2.0, 0.0));
    }

    #[test]
    fn inner_identity_unit_modulus() {
        let a = vec![c(1.0, 0.0), c(0.0, 1.0)];
        let b = HermitianMat::identity(2);
        let v = hermitian_inner(&a, &b, &a).unwrap();
        assert_eq!(v, c(2.0, 0.0));
    }

    #[test]
    fn inner_matches_triple_loop_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..20 {
            let a = random_vec(&mut rng, 4);
            let cc = random_vec(&mut rng, 4);
            let b = random_hpd(&mut rng, 4);
            let got = hermitian_inner(&a, &b, &cc).unwrap();
            let mut want = c(0.0, 0.0);
            for i in 0..4 {
                for j in 0..4 {
                    want += a[i].conj() * b.entry(i, j) * cc[j];
                }
            }
            assert!((got - want).norm() <= 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn quadratic_form_exactly_real() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            let a = random_vec(&mut rng, 6);
            let b = random_hpd(&mut rng, 6);
            let v = hermitian_inner(&a, &b, &a).unwrap();
            assert_eq!(v.im, 0.0, "paired summation must be exactly real");
        }
    }

    #[test]
    fn inner_rejects_dimension_mismatch() {
        let a = vec![c(1.0, 0.0); 3];
        let b = HermitianMat::identity(2);
        assert!(matches!(
            hermitian_inner(&a, &b, &a),
            Err(LinalgError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn solve_identity_is_exact() {
        let b = HermitianMat::identity(3);
        let rhs = vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)];
        let z = solve_hermitian(&b, &rhs, 0.0).unwrap();
        assert_eq!(z, rhs);
        // ... for arbitrary right-hand sides, bit for bit.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let r = random_vec(&mut rng, 5);
            let z = solve_hermitian(&HermitianMat::identity(5), &r, 0.0).unwrap();
            assert_eq!(z, r);
        }
    }

    #[test]
    fn solve_scalar_matrix() {
        let b = HermitianMat::from_upper(2, |i, j| {
            if i == j {
                c(2.0, 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let z = solve_hermitian(&b, &[c(4.0, 0.0), c(0.0, 0.0)], 0.0).unwrap();
        assert!((z[0] - c(2.0, 0.0)).norm() < 1e-15);
        assert!((z[1] - c(0.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn solve_multiply_back_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..20 {
            let b = random_hpd(&mut rng, 5);
            let rhs = random_vec(&mut rng, 5);
            let z = solve_hermitian(&b, &rhs, 0.0).unwrap();
            let back = b.mul_vec(&z).unwrap();
            for i in 0..5 {
                assert!(
                    (back[i] - rhs[i]).norm() <= 1e-9,
                    "row {i}: {} vs {}",
                    back[i],
                    rhs[i]
                );
            }
        }
    }

    #[test]
    fn solve_applies_loading() {
        // (I + 1·I) z = rhs  =>  z = rhs/2.
        let b = HermitianMat::identity(2);
        let z = solve_hermitian(&b, &[c(2.0, 0.0), c(4.0, 0.0)], 1.0).unwrap();
        assert!((z[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((z[1] - c(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn solve_reports_singular() {
        // Rank-1 matrix: second pivot collapses.
        let b = HermitianMat::from_upper(2, |_, _| c(1.0, 0.0));
        let err = solve_hermitian(&b, &[c(1.0, 0.0), c(0.0, 0.0)], 0.0).unwrap_err();
        assert!(matches!(err, LinalgError::SingularMatrix(_)), "{err:?}");
    }

    #[test]
    fn kron_scalar_one_is_identity() {
        let b = vec![c(1.0, 2.0), c(3.0, -1.0), c(0.5, 0.0)];
        assert_eq!(kron(&[c(1.0, 0.0)], &b), b);
    }

    #[test]
    fn kron_vandermonde_structure() {
        let t = c(0.3, -0.7);
        let a = vec![c(1.0, 0.0), t];
        let got = kron(&a, &a);
        let want = [c(1.0, 0.0), t, t, t * t];
        for (g, w) in got.iter().zip(want.iter()) {
            assert!((g - w).norm() < 1e-15);
        }
    }

    #[test]
    fn kron_matches_double_loop_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        let a = random_vec(&mut rng, 3);
        let b = random_vec(&mut rng, 4);
        let got = kron(&a, &b);
        assert_eq!(got.len(), 12);
        for i in 0..3 {
            for k in 0..4 {
                assert_eq!(got[i * 4 + k], a[i] * b[k]);
            }
        }
    }

    #[test]
    fn kron_polynomial_evaluation_property() {
        // Evaluating kron(a,b) as a polynomial at t equals the product of a
        // at t^{len(b)} and b at t.
        let mut rng = ChaCha8Rng::seed_from_u64(45);
        for _ in 0..20 {
            let a = random_vec(&mut rng, 3);
            let b = random_vec(&mut rng, 4);
            let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let t = C64::from_polar(1.0, theta);
            let eval = |p: &[C64], x: C64| {
                let mut acc = c(0.0, 0.0);
                let mut pw = c(1.0, 0.0);
                for &coef in p {
                    acc += coef * pw;
                    pw *= x;
                }
                acc
            };
            let lhs = eval(&kron(&a, &b), t);
            let rhs = eval(&a, t.powu(4)) * eval(&b, t);
            assert!((lhs - rhs).norm() <= 1e-12, "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn convolve_unit_impulse() {
        let b = vec![c(1.0, 1.0), c(-2.0, 0.5), c(0.0, 3.0)];
        assert_eq!(convolve(&[c(1.0, 0.0)], &b), b);
    }

    #[test]
    fn convolve_binomial() {
        let a = vec![c(1.0, 0.0), c(1.0, 0.0)];
        let got = convolve(&a, &a);
        assert_eq!(got, vec![c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn convolve_matches_polynomial_product_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(46);
        let a = random_vec(&mut rng, 3);
        let b = random_vec(&mut rng, 5);
        let got = convolve(&a, &b);
        assert_eq!(got.len(), 7);
        for n in 0..7 {
            let mut want = c(0.0, 0.0);
            for k in 0..3usize {
                if n >= k && n - k < 5 {
                    want += a[k] * b[n - k];
                }
            }
            assert!((got[n] - want).norm() <= 1e-13);
        }
    }

    /// Exact Gaussian-integer polynomial expansion, independent of the f64
    /// convolution path: small integer coefficients stay exact in both
    /// representations, so the comparison is an equality.
    #[test]
    fn convolve_matches_exact_integer_expansion() {
        #[derive(Clone, Copy, PartialEq, Debug)]
        struct GInt {
            re: i64,
            im: i64,
        }
        let mul = |x: GInt, y: GInt| GInt {
            re: x.re * y.re - x.im * y.im,
            im: x.re * y.im + x.im * y.re,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..30 {
            let la = rng.gen_range(1..=6usize);
            let lb = rng.gen_range(1..=6usize);
            let ga: Vec<GInt> = (0..la)
                .map(|_| GInt {
                    re: rng.gen_range(-9..=9),
                    im: rng.gen_range(-9..=9),
                })
                .collect();
            let gb: Vec<GInt> = (0..lb)
                .map(|_| GInt {
                    re: rng.gen_range(-9..=9),
                    im: rng.gen_range(-9..=9),
                })
                .collect();
            let mut want = vec![GInt { re: 0, im: 0 }; la + lb - 1];
            for (i, &x) in ga.iter().enumerate() {
                for (j, &y) in gb.iter().enumerate() {
                    let p = mul(x, y);
                    want[i + j].re += p.re;
                    want[i + j].im += p.im;
                }
            }
            let fa: Vec<C64> = ga.iter().map(|g| c(g.re as f64, g.im as f64)).collect();
            let fb: Vec<C64> = gb.iter().map(|g| c(g.re as f64, g.im as f64)).collect();
            let got = convolve(&fa, &fb);
            for (g, w) in got.iter().zip(want.iter()) {
                assert_eq!(*g, c(w.re as f64, w.im as f64));
            }
        }
    }

    #[test]
    fn try_new_rejects_non_hermitian() {
        let data = vec![c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)];
        assert!(matches!(
            HermitianMat::try_new(2, data),
            Err(LinalgError::NotHermitian { .. })
        ));
    }
}
