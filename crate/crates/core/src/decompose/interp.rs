use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Zero;

/// Chebyshev points of the first kind on `[-1, 1]`.
pub fn chebyshev_nodes(n: usize) -> Vec<f64> {
    (0..n).map(|k| ((2 * k + 1) as f64 * PI / (2 * n) as f64).cos()).collect()
}

/// Divided-difference coefficients of the Newton form through `(t_k, v_k)`.
pub fn divided_differences(t: &[Complex64], v: &[Complex64]) -> Vec<Complex64> {
    let mut d = v.to_vec();
    for j in 1..d.len() {
        for k in (j..d.len()).rev() {
            d[k] = (d[k] - d[k - 1]) / (t[k] - t[k - j]);
        }
    }
    d
}

/// Monomial coefficients in `z` of the Newton-form interpolant on nodes `t`,
/// where the node variable is `t = α z + β`.
pub fn newton_to_monomial(t: &[Complex64], d: &[Complex64], alpha: Complex64, beta: Complex64) -> Vec<Complex64> {
    let n = d.len();
    let mut acc = vec![d[n - 1]];
    for k in (0..n - 1).rev() {
        // acc ← acc · (α z + β − t_k) + d_k
        let shift = beta - t[k];
        let mut next = vec![Complex64::zero(); acc.len() + 1];
        for (i, &c) in acc.iter().enumerate() {
            next[i] += c * shift;
            next[i + 1] += c * alpha;
        }
        next[0] += d[k];
        acc = next;
    }
    acc
}
