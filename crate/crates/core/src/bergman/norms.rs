use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use super::DomainSpec;
use crate::error::{Error, Result};
use crate::polyalg::{BiPoly, NumBiPoly};

/// `ln ‖z1^a z2^b‖²` in `L²_a(Ω_{p,q})`.
///
/// In polar coordinates with `u = |z1|^p`, `v = |z2|^q` the integral becomes
/// a Dirichlet integral over the simplex `u + v < 1`:
/// `(2π)²/(pq) · Γ(α)Γ(β)/Γ(α+β+1)` with `α = (2a+2)/p`, `β = (2b+2)/q`.
pub fn ln_monomial_norm(domain: &DomainSpec, a: u32, b: u32) -> f64 {
    let alpha = (2.0 * a as f64 + 2.0) / domain.p;
    let beta = (2.0 * b as f64 + 2.0) / domain.q;
    2.0 * (2.0 * PI).ln() - domain.p.ln() - domain.q.ln() + ln_gamma(alpha) + ln_gamma(beta)
        - ln_gamma(alpha + beta + 1.0)
}

/// `ν_ab = ‖z1^a z2^b‖²`. Underflows to zero only for astronomically large
/// exponents; use [`ln_monomial_norm`] there.
pub fn monomial_norm(domain: &DomainSpec, a: u32, b: u32) -> f64 {
    ln_monomial_norm(domain, a, b).exp()
}

/// Squared monomial norms for all `a + b ≤ max_degree`.
#[derive(Debug, Clone, Serialize)]
pub struct MonomialNormTable {
    pub domain: DomainSpec,
    pub max_degree: u32,
    /// Row-major by total degree: entry for `(a, b)` at `index(a, b)`.
    norms: Vec<f64>,
}

fn tri_index(a: u32, b: u32) -> usize {
    let n = (a + b) as usize;
    n * (n + 1) / 2 + b as usize
}

impl MonomialNormTable {
    pub fn new(domain: DomainSpec, max_degree: u32) -> Self {
        let mut norms = Vec::with_capacity(tri_index(0, max_degree) + 1);
        for n in 0..=max_degree {
            for b in 0..=n {
                norms.push(monomial_norm(&domain, n - b, b));
            }
        }
        Self {
            domain,
            max_degree,
            norms,
        }
    }

    pub fn get(&self, a: u32, b: u32) -> Option<f64> {
        (a + b <= self.max_degree).then(|| self.norms[tri_index(a, b)])
    }

    pub fn try_get(&self, a: u32, b: u32) -> Result<f64> {
        self.get(a, b).ok_or(Error::MissingNorm { a, b })
    }

    /// `(a, b, ν_ab)` in order of total degree, then `b`.
    pub fn entries(&self) -> impl Iterator<Item = (u32, u32, f64)> + '_ {
        (0..=self.max_degree)
            .flat_map(|n| (0..=n).map(move |b| (n - b, b)))
            .map(|(a, b)| (a, b, self.norms[tri_index(a, b)]))
    }
}

/// `⟨f, g⟩ = Σ f_ab · conj(g_ab) · ν_ab`; monomials are orthogonal on a
/// complete Reinhardt domain.
pub fn inner_numeric(f: &NumBiPoly, g: &NumBiPoly, table: &MonomialNormTable) -> Result<Complex64> {
    let mut acc = Complex64::zero();
    for (a, b, fc) in f.terms() {
        let gc = g
            .rows()
            .get(b as usize)
            .and_then(|row| row.get(a as usize))
            .copied()
            .unwrap_or_default();
        if gc.is_zero() {
            continue;
        }
        acc += fc * gc.conj() * table.try_get(a, b)?;
    }
    // Exponents present in only one argument still need table coverage.
    for (a, b, _) in g.terms() {
        table.try_get(a, b)?;
    }
    Ok(acc)
}

pub fn inner(f: &BiPoly, g: &BiPoly, table: &MonomialNormTable) -> Result<Complex64> {
    inner_numeric(&f.to_numeric(), &g.to_numeric(), table)
}

/// Truncated kernel diagonal `K(w, w) = Σ |w1|^{2a} |w2|^{2b} / ν_ab`.
#[derive(Debug, Clone, Serialize)]
pub struct KernelDiag {
    pub value: f64,
    /// Number of full total-degree shells summed.
    pub shells: usize,
    /// Contribution of the last shell.
    pub last_shell: f64,
    /// Geometric estimate of the neglected tail.
    pub truncation_bound: f64,
}

pub const MAX_KERNEL_SHELLS: usize = 5000;

/// Sums degree shells until the last one contributes less than
/// `tol × partial sum`.
pub fn kernel_diag(domain: &DomainSpec, w: (Complex64, Complex64), tol: f64) -> Result<KernelDiag> {
    let phi = domain.phi(w.0, w.1);
    if !phi.is_finite() || phi >= 1.0 {
        return Err(Error::OutsideDomain(w.0.to_string(), w.1.to_string()));
    }
    let l1 = 2.0 * w.0.norm().ln();
    let l2 = 2.0 * w.1.norm().ln();
    let term = |a: u32, b: u32| -> f64 {
        let la = if a == 0 { 0.0 } else { a as f64 * l1 };
        let lb = if b == 0 { 0.0 } else { b as f64 * l2 };
        (la + lb - ln_monomial_norm(domain, a, b)).exp()
    };
    let mut sum = 0.0;
    let mut prev = f64::NAN;
    for n in 0..MAX_KERNEL_SHELLS as u32 {
        let shell: f64 = (0..=n).map(|b| term(n - b, b)).sum();
        sum += shell;
        if n > 0 && shell < tol * sum {
            let ratio = shell / prev;
            let truncation_bound = if ratio.is_finite() && ratio < 1.0 {
                shell * ratio / (1.0 - ratio)
            } else {
                shell
            };
            return Ok(KernelDiag {
                value: sum,
                shells: n as usize + 1,
                last_shell: shell,
                truncation_bound,
            });
        }
        prev = shell;
    }
    Err(Error::KernelTruncation {
        shells: MAX_KERNEL_SHELLS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::GaussRational;

    const PI2: f64 = PI * PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn ball_norms_match_factorial_formula() {
        let ball = DomainSpec::ball();
        assert!((monomial_norm(&ball, 0, 0) - PI2 / 2.0).abs() < 1e-13);
        assert!((monomial_norm(&ball, 1, 0) - PI2 / 6.0).abs() < 1e-13);
        // π² a! b! / (a+b+2)!
        assert!((monomial_norm(&ball, 2, 1) - PI2 * 2.0 / 120.0).abs() < 1e-13);
        let simplex = DomainSpec::new(1.0, 1.0).unwrap();
        assert!((monomial_norm(&simplex, 0, 0) - PI2 / 6.0).abs() < 1e-13);
    }

    #[test]
    fn norms_decrease_and_swap_symmetrically() {
        let d = DomainSpec::new(0.5, 3.0).unwrap();
        let t = MonomialNormTable::new(d, 8);
        for (a, b, v) in t.entries() {
            assert!(v > 0.0);
            if a + b < 8 {
                assert!(t.get(a + 1, b).unwrap() < v);
                assert!(t.get(a, b + 1).unwrap() < v);
            }
            let swapped = monomial_norm(&d.swapped(), b, a);
            assert!((swapped / v - 1.0).abs() < 1e-12);
        }
        assert!(t.get(5, 4).is_none());
    }

    #[test]
    fn inner_products_on_ball() {
        let t = MonomialNormTable::new(DomainSpec::ball(), 2);
        let one = BiPoly::one();
        let z1 = BiPoly::z1();
        assert_eq!(inner(&one, &z1, &t).unwrap(), Complex64::zero());
        assert!((inner(&z1, &z1, &t).unwrap() - c(PI2 / 6.0)).norm() < 1e-13);
        let a = one.add(&z1);
        let b = one.sub(&z1);
        assert!((inner(&a, &b, &t).unwrap() - c(PI2 / 3.0)).norm() < 1e-13);
        let z1i = z1.scale(&GaussRational::i());
        assert!((inner(&z1i, &z1, &t).unwrap() - Complex64::new(0.0, PI2 / 6.0)).norm() < 1e-13);
    }

    #[test]
    fn inner_reports_missing_exponent() {
        let t = MonomialNormTable::new(DomainSpec::ball(), 1);
        let f = BiPoly::z1().pow(2);
        assert!(matches!(inner(&f, &f, &t), Err(Error::MissingNorm { a: 2, b: 0 })));
    }

    #[test]
    fn kernel_at_origin_and_monotone() {
        let ball = DomainSpec::ball();
        let k0 = kernel_diag(&ball, (c(0.0), c(0.0)), 1e-14).unwrap();
        assert!((k0.value - 2.0 / PI2).abs() < 1e-15);
        let k5 = kernel_diag(&ball, (c(0.5), c(0.0)), 1e-14).unwrap();
        let k6 = kernel_diag(&ball, (c(0.6), c(0.0)), 1e-14).unwrap();
        assert!(k5.value > k0.value && k6.value > k5.value);
        // Closed form on the ball: K(w,w) = 2 / (π² (1-|w|²)³).
        assert!((k5.value / (2.0 / (PI2 * 0.75f64.powi(3))) - 1.0).abs() < 1e-12);
        assert!(kernel_diag(&ball, (c(1.0), c(0.5)), 1e-12).is_err());
    }
}
