use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use super::MonomialNormTable;
use crate::error::{Error, Result};
use crate::polyalg::{BiPoly, NumBiPoly};

/// Relative threshold on `|R_kk|` below which a column is treated as
/// linearly dependent and dropped.
pub const RANK_TOL: f64 = 1e-12;

/// `d_N = dist(1, p·P_N)` for `N = 0..=n_max`, `P_N` the polynomials of
/// total degree at most `N`.
#[derive(Debug, Clone, Serialize)]
pub struct ProjectionProfile {
    pub distances: Vec<(u32, f64)>,
    /// Set when some column `p·z^m` fell below [`RANK_TOL`] and was dropped.
    pub rank_deficient: bool,
}

impl ProjectionProfile {
    pub fn last(&self) -> f64 {
        self.distances.last().map_or(f64::NAN, |&(_, d)| d)
    }
}

fn monomials_up_to(n: u32) -> impl Iterator<Item = (u32, u32)> {
    (0..=n).flat_map(|d| (0..=d).map(move |b| (d - b, b)))
}

fn tri_index(a: u32, b: u32) -> usize {
    let n = (a + b) as usize;
    n * (n + 1) / 2 + b as usize
}

/// Nested least squares `min_q ‖1 − p·q‖` over `q ∈ P_N`, all `N ≤ n_max`,
/// from a single QR factorization.
///
/// Coordinates are orthonormal: monomial `z^(a,b)` maps to a unit vector
/// scaled by `ν_ab^{1/2}`. Columns are the images of `p·z^m` ordered by
/// total degree of `m`, so the first `(N+1)(N+2)/2` columns span `p·P_N` and
/// `d_N` is the norm of the tail of `Qᴴb` past them.
pub fn projection_profile(p: &BiPoly, n_max: u32, table: &MonomialNormTable) -> Result<ProjectionProfile> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let num = p.to_numeric();
    let deg = p.total_degree();
    let rows_deg = deg + n_max;
    let n_rows = tri_index(0, rows_deg) + 1;
    let n_cols = tri_index(0, n_max) + 1;
    let sqrt_nu: Vec<f64> = monomials_up_to(rows_deg)
        .map(|(a, b)| table.try_get(a, b).map(f64::sqrt))
        .collect::<Result<_>>()?;

    let mut m = DMatrix::<Complex64>::zeros(n_rows, n_cols);
    for (j, (ma, mb)) in monomials_up_to(n_max).enumerate() {
        let mut col_norm = 0.0;
        for (a, b, c) in num.terms() {
            let i = tri_index(a + ma, b + mb);
            let v = c * sqrt_nu[i];
            col_norm += v.norm_sqr();
            m[(i, j)] = v;
        }
        let s = 1.0 / col_norm.sqrt();
        m.column_mut(j).scale_mut(s);
    }

    let mut b = DVector::<Complex64>::zeros(n_rows);
    b[0] = Complex64::new(sqrt_nu[0], 0.0);

    let qr = m.qr();
    let r = qr.r();
    let q = qr.q();
    let r_max = (0..n_cols).map(|k| r[(k, k)].norm()).fold(0.0, f64::max);
    let independent: Vec<bool> = (0..n_cols).map(|k| r[(k, k)].norm() >= RANK_TOL * r_max).collect();
    let rank_deficient = independent.iter().any(|&ok| !ok);

    let coords = q.adjoint() * &b;
    let mut residual = b.clone();
    for k in 0..n_cols {
        if independent[k] {
            residual.axpy(-coords[k], &q.column(k), Complex64::new(1.0, 0.0));
        }
    }
    // tail[k] = squared distance from b to the span of the first k columns.
    let mut tail = vec![0.0; n_cols + 1];
    tail[n_cols] = residual.norm_squared();
    for k in (0..n_cols).rev() {
        tail[k] = tail[k + 1] + if independent[k] { coords[k].norm_sqr() } else { 0.0 };
    }
    let distances = (0..=n_max)
        .map(|n| (n, tail[tri_index(0, n) + 1].sqrt()))
        .collect();
    Ok(ProjectionProfile {
        distances,
        rank_deficient,
    })
}

pub fn projection_distance(p: &BiPoly, n: u32, table: &MonomialNormTable) -> Result<f64> {
    Ok(projection_profile(p, n, table)?.last())
}

/// `‖f‖` in `L²_a(Ω)` from the monomial table.
pub fn norm_numeric(f: &NumBiPoly, table: &MonomialNormTable) -> Result<f64> {
    let mut acc = 0.0;
    for (a, b, c) in f.terms() {
        acc += c.norm_sqr() * table.try_get(a, b)?;
    }
    Ok(acc.sqrt())
}
