//! Gauss–Legendre quadrature rules, generated by Newton iteration on the
//! Legendre recurrence. Node/weight generation is deterministic and accurate
//! to machine precision for the rule sizes used here (hundreds of nodes).

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// ordered by ascending node.
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Standard asymptotic initial guess for the i-th root (descending),
        // then Newton refinement; converges in a handful of iterations.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_and_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_and_derivative(n, x);
        // The initial guesses run from +1 toward −1; store ascending.
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Same rule affinely mapped onto `[lo, hi]`.
pub(crate) fn gauss_legendre_on(lo: f64, hi: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let (xs, ws) = &*gauss_legendre_cached(n);
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    (
        xs.iter().map(|x| mid + half * x).collect(),
        ws.iter().map(|w| w * half).collect(),
    )
}

/// Memoized base rules on `[-1, 1]`. Node generation costs far more than a
/// mapped lookup, and the segment-noise path requests the same rule size
/// for every frequency bin, so the few distinct sizes a process uses are
/// computed once and shared.
pub(crate) fn gauss_legendre_cached(n: usize) -> Arc<(Vec<f64>, Vec<f64>)> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<(Vec<f64>, Vec<f64>)>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().expect("quadrature cache poisoned");
    map.entry(n)
        .or_insert_with(|| Arc::new(gauss_legendre(n)))
        .clone()
}

/// Legendre polynomial `P_n(x)` and its derivative via the three-term
/// recurrence.
fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 2..=n {
        let kf = k as f64;
        let p_next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = p_next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_rule_is_exact() {
        let (x, w) = gauss_legendre(2);
        let r = 1.0 / 3.0_f64.sqrt();
        assert!((x[0] + r).abs() < 1e-15);
        assert!((x[1] - r).abs() < 1e-15);
        assert!((w[0] - 1.0).abs() < 1e-15);
        assert!((w[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn three_point_rule_is_exact() {
        let (x, w) = gauss_legendre(3);
        let r = (3.0_f64 / 5.0).sqrt();
        assert!((x[0] + r).abs() < 1e-15);
        assert!(x[1].abs() < 1e-15);
        assert!((x[2] - r).abs() < 1e-15);
        assert!((w[0] - 5.0 / 9.0).abs() < 1e-15);
        assert!((w[1] - 8.0 / 9.0).abs() < 1e-15);
        assert!((w[2] - 5.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn integrates_polynomials_to_design_order() {
        // An n-point rule is exact through degree 2n−1; moments of x^k on
        // [−1,1] are 0 (odd k) or 2/(k+1) (even k).
        for n in 1..=12usize {
            let (x, w) = gauss_legendre(n);
            for k in 0..2 * n {
                let got: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(k as i32)).sum();
                let want = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
                assert!(
                    (got - want).abs() < 1e-13,
                    "n={n} k={k}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn weights_sum_to_interval_length() {
        for n in [1, 5, 50, 200, 2000] {
            let (_, w) = gauss_legendre(n);
            let s: f64 = w.iter().sum();
            assert!((s - 2.0).abs() < 1e-12, "n={n}: {s}");
        }
    }

    #[test]
    fn nodes_symmetric_and_sorted() {
        let (x, w) = gauss_legendre(200);
        for i in 1..200 {
            assert!(x[i] > x[i - 1]);
        }
        for i in 0..200 {
            assert!((x[i] + x[199 - i]).abs() < 1e-14);
            assert!((w[i] - w[199 - i]).abs() < 1e-14);
        }
    }

    #[test]
    fn mapped_rule_integrates_cosine() {
        // ∫ cos t dt over [0, π/2] = 1.
        let (x, w) = gauss_legendre_on(0.0, std::f64::consts::FRAC_PI_2, 20);
        let got: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.cos()).sum();
        assert!((got - 1.0).abs() < 1e-14);
    }
}
