use std::f64::consts::TAU;

use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::polyalg::numeric::{abs_horner, horner, horner_with_derivative};

#[derive(Debug, Clone, Error)]
pub enum RootError {
    #[error("polynomial has degree zero")]
    ZeroDegree,
    #[error("leading coefficient {leading:e} is negligible against the coefficient scale {scale:e}")]
    Degenerate { leading: f64, scale: f64 },
    #[error("no convergence after {sweeps} sweeps (worst relative residual {worst:e})")]
    NonConvergence {
        sweeps: usize,
        worst: f64,
        best: Vec<Complex64>,
    },
    #[error("non-finite coefficient or iterate")]
    NonFinite,
}

/// Simultaneous-iteration settings.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RootFinder {
    /// Accept a root when `|p(z)| ≤ tol_res · max(1 + ‖c‖∞, Σ|c_k||z|^k)`.
    pub tol_res: f64,
    pub max_sweeps: usize,
    /// Roots closer than this are reported as one cluster.
    pub cluster_radius: f64,
    /// Relative size below which a leading coefficient is treated as zero.
    pub degeneracy: f64,
}

impl Default for RootFinder {
    fn default() -> Self {
        Self {
            tol_res: 1e-10,
            max_sweeps: 200,
            cluster_radius: 1e-7,
            degeneracy: 1e-14,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cluster {
    pub center: Complex64,
    pub multiplicity: usize,
}

/// All roots of a univariate polynomial, counted with multiplicity.
#[derive(Debug, Clone, Serialize)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    /// `|p(root)|` for each root.
    pub residuals: Vec<f64>,
    pub degree: usize,
    pub clusters: Vec<Cluster>,
    pub sweeps: usize,
}

impl RootSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

/// Drops leading coefficients that are negligible relative to the largest
/// one. The dropped degrees correspond to roots near infinity.
pub fn trim_negligible(coeffs: &[Complex64], rel: f64) -> &[Complex64] {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut n = coeffs.len();
    while n > 0 && coeffs[n - 1].norm() <= rel * scale {
        n -= 1;
    }
    &coeffs[..n]
}

fn initial_guesses(coeffs: &[Complex64]) -> Vec<Complex64> {
    let d = coeffs.len() - 1;
    let lead = coeffs[d].norm();
    let radius = if coeffs[0].norm() > 0.0 {
        (coeffs[0].norm() / lead).powf(1.0 / d as f64)
    } else {
        // Fujiwara-style bound
        (0..d)
            .map(|k| (coeffs[k].norm() / lead).powf(1.0 / (d - k) as f64))
            .fold(0.0, f64::max)
            .max(1e-3)
    };
    (0..d)
        .map(|k| Complex64::from_polar(radius, TAU * k as f64 / d as f64 + 0.7))
        .collect()
}

impl RootFinder {
    fn residual_scale(coeffs: &[Complex64], z: Complex64) -> f64 {
        let inf = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        (1.0 + inf).max(abs_horner(coeffs, z))
    }

    fn check(&self, coeffs: &[Complex64]) -> Result<(), RootError> {
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(RootError::NonFinite);
        }
        if coeffs.len() < 2 {
            return Err(RootError::ZeroDegree);
        }
        let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let leading = coeffs[coeffs.len() - 1].norm();
        if leading <= self.degeneracy * scale {
            return Err(RootError::Degenerate { leading, scale });
        }
        Ok(())
    }

    /// All roots, sorted lexicographically by `(Re, Im)`.
    pub fn all_roots(&self, coeffs: &[Complex64]) -> Result<RootSet, RootError> {
        let mut set = self.roots_from(coeffs, &[])?;
        let mut idx: Vec<usize> = (0..set.roots.len()).collect();
        idx.sort_by(|&i, &j| {
            let (a, b) = (set.roots[i], set.roots[j]);
            a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
        });
        set.roots = idx.iter().map(|&i| set.roots[i]).collect();
        set.residuals = idx.iter().map(|&i| set.residuals[i]).collect();
        set.clusters = self.clusters(&set.roots);
        Ok(set)
    }

    /// Roots starting from `guesses` (used when the caller already has good
    /// approximations, e.g. the previous fiber along a path). Output order
    /// follows the guesses. With the wrong number of guesses the default
    /// start is used instead.
    pub fn roots_from(
        &self,
        coeffs: &[Complex64],
        guesses: &[Complex64],
    ) -> Result<RootSet, RootError> {
        self.check(coeffs)?;
        let degree = coeffs.len() - 1;
        // Exact zero roots are split off first.
        let zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
        let reduced = &coeffs[zeros..];
        let d = reduced.len() - 1;

        let mut z: Vec<Complex64> = if guesses.len() == degree {
            // Guesses closest to the origin stand in for the split-off zeros.
            let mut g = guesses.to_vec();
            g.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
            g[zeros..].to_vec()
        } else {
            Vec::new()
        };
        if z.len() != d || has_duplicates(&z) {
            z = if d > 0 { initial_guesses(reduced) } else { Vec::new() };
        }

        let sweeps = match d {
            0 => 0,
            1 => {
                z[0] = -reduced[0] / reduced[1];
                0
            }
            _ => self.iterate(reduced, &mut z)?,
        };

        let mut roots = vec![Complex64::zero(); zeros];
        roots.extend(z);
        if roots.iter().any(|r| !r.re.is_finite() || !r.im.is_finite()) {
            return Err(RootError::NonFinite);
        }
        if guesses.len() == degree {
            roots = reorder_to(&roots, guesses);
        }
        let residuals: Vec<f64> = roots.iter().map(|&r| horner(coeffs, r).norm()).collect();
        let worst = roots
            .iter()
            .zip(&residuals)
            .map(|(&r, &res)| res / Self::residual_scale(coeffs, r))
            .fold(0.0, f64::max);
        if worst > self.tol_res {
            return Err(RootError::NonConvergence {
                sweeps,
                worst,
                best: roots,
            });
        }
        let clusters = self.clusters(&roots);
        Ok(RootSet {
            roots,
            residuals,
            degree,
            clusters,
            sweeps,
        })
    }

    /// Gauss–Seidel Aberth–Ehrlich sweeps; returns the sweep count.
    fn iterate(&self, coeffs: &[Complex64], z: &mut [Complex64]) -> Result<usize, RootError> {
        let d = z.len();
        let eps = f64::EPSILON;
        for sweep in 1..=self.max_sweeps {
            let mut done = true;
            for i in 0..d {
                let (p, dp) = horner_with_derivative(coeffs, z[i]);
                if p.norm() <= 4.0 * eps * abs_horner(coeffs, z[i]) {
                    continue;
                }
                let s: Complex64 = (0..d)
                    .filter(|&j| j != i && z[j] != z[i])
                    .map(|j| (z[i] - z[j]).inv())
                    .sum();
                let ratio = if dp.is_zero() {
                    // Stationary point: nudge off it.
                    Complex64::new(1e-8 * (1.0 + z[i].norm()), 0.0)
                } else {
                    p / dp
                };
                let denom = Complex64::new(1.0, 0.0) - ratio * s;
                let w = if denom.norm() > 0.0 { ratio / denom } else { ratio };
                z[i] -= w;
                if !z[i].re.is_finite() || !z[i].im.is_finite() {
                    return Err(RootError::NonFinite);
                }
                if w.norm() > 4.0 * eps * z[i].norm().max(f64::MIN_POSITIVE) {
                    done = false;
                }
            }
            if done {
                return Ok(sweep);
            }
        }
        Ok(self.max_sweeps)
    }

    /// Groups roots lying within `cluster_radius` of each other
    /// (transitively). Clusters are listed in first-member order.
    pub fn clusters(&self, roots: &[Complex64]) -> Vec<Cluster> {
        let n = roots.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while p[r] != r {
                r = p[r];
            }
            p[i] = r;
            r
        }
        for i in 0..n {
            for j in i + 1..n {
                if (roots[i] - roots[j]).norm() < self.cluster_radius {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut out: Vec<(usize, Complex64, usize)> = Vec::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            match out.iter_mut().find(|c| c.0 == r) {
                Some(c) => {
                    c.1 += roots[i];
                    c.2 += 1;
                }
                None => out.push((r, roots[i], 1)),
            }
        }
        out.into_iter()
            .map(|(_, sum, m)| Cluster {
                center: sum / m as f64,
                multiplicity: m,
            })
            .collect()
    }
}

fn has_duplicates(z: &[Complex64]) -> bool {
    (0..z.len()).any(|i| (i + 1..z.len()).any(|j| z[i] == z[j]))
}

/// Greedy nearest assignment of `roots` onto the order of `guesses`.
fn reorder_to(roots: &[Complex64], guesses: &[Complex64]) -> Vec<Complex64> {
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (i, g) in guesses.iter().enumerate() {
        for (j, r) in roots.iter().enumerate() {
            pairs.push(((g - r).norm(), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut out = vec![None; guesses.len()];
    let mut used = vec![false; roots.len()];
    for (_, i, j) in pairs {
        if out[i].is_none() && !used[j] {
            out[i] = Some(roots[j]);
            used[j] = true;
        }
    }
    out.into_iter().map(|o| o.expect("square assignment")).collect()
}

/// Convenience wrapper with default settings.
pub fn all_roots(coeffs: &[Complex64]) -> Result<RootSet, RootError> {
    RootFinder::default().all_roots(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn imaginary_unit_pair() {
        let rs = all_roots(&[c(1.0), c(0.0), c(1.0)]).unwrap();
        assert_eq!(rs.degree, 2);
        assert!((rs.roots[0] - Complex64::new(0.0, -1.0)).norm() < 1e-12);
        assert!((rs.roots[1] - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn fiber_of_parabola() {
        // z2^2 - z1 at z1 = 4
        let rs = all_roots(&[c(-4.0), c(0.0), c(1.0)]).unwrap();
        assert!((rs.roots[0] - c(-2.0)).norm() < 1e-12);
        assert!((rs.roots[1] - c(2.0)).norm() < 1e-12);
    }

    #[test]
    fn cubic_with_known_factorization() {
        // (z-1)(z-2)(z-3) = z^3 - 6z^2 + 11z - 6
        let rs = all_roots(&[c(-6.0), c(11.0), c(-6.0), c(1.0)]).unwrap();
        for (r, e) in rs.roots.iter().zip([1.0, 2.0, 3.0]) {
            assert!((r - c(e)).norm() < 1e-10);
        }
        assert_eq!(rs.clusters.len(), 3);
    }

    #[test]
    fn double_root_is_clustered() {
        // (z-1)^2 (z+1)
        let rs = all_roots(&[c(1.0), c(-1.0), c(-1.0), c(1.0)]).unwrap();
        let mults: Vec<usize> = rs.clusters.iter().map(|c| c.multiplicity).collect();
        assert_eq!(mults.iter().sum::<usize>(), 3);
        assert!(mults.contains(&2), "{:?}", rs.clusters);
    }

    #[test]
    fn zero_roots_split_off() {
        let rs = all_roots(&[c(0.0), c(0.0), c(-1.0), c(1.0)]).unwrap();
        assert_eq!(rs.roots.iter().filter(|r| r.norm() == 0.0).count(), 2);
    }

    #[test]
    fn degenerate_and_constant_inputs() {
        assert!(matches!(all_roots(&[c(1.0)]), Err(RootError::ZeroDegree)));
        assert!(matches!(
            all_roots(&[c(1.0), c(1.0), c(1e-20)]),
            Err(RootError::Degenerate { .. })
        ));
    }

    #[test]
    fn warm_start_keeps_guess_order() {
        let f = [c(-4.0), c(0.0), c(1.0)];
        let rs = RootFinder::default()
            .roots_from(&f, &[c(2.1), c(-1.9)])
            .unwrap();
        assert!((rs.roots[0] - c(2.0)).norm() < 1e-12);
        assert!((rs.roots[1] - c(-2.0)).norm() < 1e-12);
    }
}
