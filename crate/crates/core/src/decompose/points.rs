use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::DecomposeConfig;
use crate::error::{Error, Result};
use crate::polyalg::{resultant_z2, BiPoly, GaussRational, NumBiPoly, UniPoly};
use crate::rootfind::trim_negligible;

#[derive(Debug, Clone, Serialize)]
pub struct IsolatedPoint {
    pub z1: Complex64,
    pub z2: Complex64,
    /// `|g_i(z)|` for each generator.
    pub residuals: Vec<f64>,
}

impl IsolatedPoint {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Points closer than this in both coordinates are merged.
pub const DEDUP_RADIUS: f64 = 1e-7;
const NEWTON_ITERS: usize = 40;
const RANDOM_COMBINATIONS: usize = 8;

/// A nonzero eliminant in `z1` for the system, from a generator pair or,
/// when every pair shares a factor, from random combinations.
fn eliminant(gens: &[BiPoly], rng: &mut ChaCha8Rng) -> Result<UniPoly> {
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            if gens[i].deg_z2() == 0 && gens[j].deg_z2() == 0 {
                continue;
            }
            let r = resultant_z2(&gens[i], &gens[j])?;
            if !r.is_zero() {
                return Ok(r);
            }
        }
    }
    for _ in 0..RANDOM_COMBINATIONS {
        let mut combo = || {
            gens.iter().fold(BiPoly::zero(), |acc, g| {
                let c = GaussRational::from_parts((rng.random_range(1..=9), 1), (rng.random_range(-9..=9), 1));
                acc.add(&g.scale(&c))
            })
        };
        let (h1, h2) = (combo(), combo());
        if h1.deg_z2() == 0 && h2.deg_z2() == 0 {
            continue;
        }
        let r = resultant_z2(&h1, &h2)?;
        if !r.is_zero() {
            return Ok(r);
        }
    }
    Err(Error::PositiveDimensional)
}

/// Gauss–Newton on the full (possibly overdetermined) system.
fn refine(nums: &[NumBiPoly], derivs: &[(NumBiPoly, NumBiPoly)], mut z: (Complex64, Complex64)) -> (Complex64, Complex64) {
    for _ in 0..NEWTON_ITERS {
        // Normal equations JᴴJ δ = −Jᴴ F.
        let mut a = [[Complex64::default(); 2]; 2];
        let mut rhs = [Complex64::default(); 2];
        for (f, (d1, d2)) in nums.iter().zip(derivs) {
            let v = f.eval(z.0, z.1);
            let j = [d1.eval(z.0, z.1), d2.eval(z.0, z.1)];
            for r in 0..2 {
                for c in 0..2 {
                    a[r][c] += j[r].conj() * j[c];
                }
                rhs[r] -= j[r].conj() * v;
            }
        }
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        let scale = a[0][0].norm() * a[1][1].norm();
        if det.norm() <= 1e-24 * scale.max(f64::MIN_POSITIVE) || !det.is_finite() {
            break;
        }
        let d1 = (rhs[0] * a[1][1] - a[0][1] * rhs[1]) / det;
        let d2 = (a[0][0] * rhs[1] - a[1][0] * rhs[0]) / det;
        if !(d1.is_finite() && d2.is_finite()) {
            break;
        }
        z = (z.0 + d1, z.1 + d2);
        if d1.norm() <= 1e-15 * (1.0 + z.0.norm()) && d2.norm() <= 1e-15 * (1.0 + z.1.norm()) {
            break;
        }
    }
    z
}

/// Common zeros of generators with trivial gcd.
///
/// Candidate `z1` values are the roots of an eliminant; candidate `z2`
/// values the roots of each generator's slice there. Candidates are refined
/// by Gauss–Newton and kept when every residual is below `tol_point`.
pub fn zero_dim_solve(generators: &[BiPoly], cfg: &DecomposeConfig) -> Result<Vec<IsolatedPoint>> {
    let gens: Vec<BiPoly> = generators.iter().filter(|g| !g.is_zero()).cloned().collect();
    if gens.len() < 2 {
        return Err(Error::TooFewGenerators);
    }
    if gens.iter().any(BiPoly::is_constant) {
        return Ok(Vec::new());
    }
    if gens.iter().all(|g| g.deg_z2() == 0) {
        // Univariate in z1 with trivial common factor: no common zero.
        let u = gens
            .iter()
            .filter_map(BiPoly::as_z1_poly)
            .reduce(|a, b| a.gcd(&b))
            .unwrap_or_else(UniPoly::one);
        return if u.is_constant() { Ok(Vec::new()) } else { Err(Error::PositiveDimensional) };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed_0f_9017);
    let elim = eliminant(&gens, &mut rng)?.squarefree_part();
    if elim.is_constant() {
        return Ok(Vec::new());
    }
    let finder = &cfg.track.roots;
    let z1s = finder.all_roots(&elim.to_complex())?.roots;

    let nums: Vec<NumBiPoly> = gens.iter().map(BiPoly::to_numeric).collect();
    let derivs: Vec<(NumBiPoly, NumBiPoly)> = nums.iter().map(|f| (f.derivative_z1(), f.derivative_z2())).collect();
    let mut found: Vec<IsolatedPoint> = Vec::new();
    for &z1 in &z1s {
        for f in &nums {
            let slice = f.slice_z1(z1);
            let trimmed = trim_negligible(&slice, 1e-12);
            if trimmed.len() < 2 {
                continue;
            }
            let Ok(roots) = finder.all_roots(trimmed) else {
                continue;
            };
            for &z2 in &roots.roots {
                let z = refine(&nums, &derivs, (z1, z2));
                let residuals: Vec<f64> = nums.iter().map(|g| g.eval(z.0, z.1).norm()).collect();
                if residuals.iter().any(|&r| !(r < cfg.tol_point)) {
                    continue;
                }
                let dup = found
                    .iter()
                    .any(|p| (p.z1 - z.0).norm() < DEDUP_RADIUS && (p.z2 - z.1).norm() < DEDUP_RADIUS);
                if !dup {
                    found.push(IsolatedPoint {
                        z1: z.0,
                        z2: z.1,
                        residuals,
                    });
                }
            }
        }
    }
    found.sort_by(|a, b| {
        a.z1.re
            .total_cmp(&b.z1.re)
            .then(a.z1.im.total_cmp(&b.z1.im))
            .then(a.z2.re.total_cmp(&b.z2.re))
            .then(a.z2.im.total_cmp(&b.z2.im))
    });
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gens(list: &[&[(u32, u32, i64)]]) -> Vec<BiPoly> {
        list.iter().map(|t| BiPoly::from_int_terms(t)).collect()
    }

    fn solve(list: &[&[(u32, u32, i64)]]) -> Vec<(Complex64, Complex64)> {
        zero_dim_solve(&gens(list), &DecomposeConfig::default())
            .unwrap()
            .into_iter()
            .map(|p| (p.z1, p.z2))
            .collect()
    }

    fn close(a: (Complex64, Complex64), b: (f64, f64)) -> bool {
        (a.0 - b.0).norm() < 1e-9 && (a.1 - b.1).norm() < 1e-9
    }

    #[test]
    fn simple_systems() {
        let p = solve(&[&[(1, 0, 1)], &[(0, 1, 1)]]);
        assert!(p.len() == 1 && close(p[0], (0.0, 0.0)));
        let p = solve(&[&[(1, 0, 1), (0, 0, -2)], &[(0, 1, 1)]]);
        assert!(p.len() == 1 && close(p[0], (2.0, 0.0)));
        // z2^2 - z1, z2 + 2
        let p = solve(&[&[(0, 2, 1), (1, 0, -1)], &[(0, 1, 1), (0, 0, 2)]]);
        assert!(p.len() == 1 && close(p[0], (4.0, -2.0)));
    }

    #[test]
    fn inconsistent_and_multiple() {
        assert!(solve(&[&[(0, 1, 1)], &[(0, 1, 1), (0, 0, -3)]]).is_empty());
        let p = solve(&[&[(2, 0, 1)], &[(0, 1, 1)]]);
        assert!(p.len() == 1 && close(p[0], (0.0, 0.0)));
    }

    #[test]
    fn pairwise_common_factors_need_combinations() {
        // z1 z2, z1 (z2 - 1), z2 (z2 - 1): pairs share factors.
        let p = solve(&[&[(1, 1, 1)], &[(1, 1, 1), (1, 0, -1)], &[(0, 2, 1), (0, 1, -1)]]);
        assert_eq!(p.len(), 2);
        assert!(p.iter().any(|&z| close(z, (0.0, 0.0))) && p.iter().any(|&z| close(z, (0.0, 1.0))));
    }

    #[test]
    fn rejects_single_generator() {
        assert!(matches!(
            zero_dim_solve(&gens(&[&[(1, 0, 1)]]), &DecomposeConfig::default()),
            Err(Error::TooFewGenerators)
        ));
    }
}
