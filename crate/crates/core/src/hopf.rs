//! Rotations of the ball moving a fiber circle of the Hopf fibration off
//! the zero set of `f`, and the one-variable dilation ratio on the ball.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bergman::{check_r_grid, ratio_search, Dilation, DilationFamily, DilationNorm, DomainSpec, RatioWitness};
use crate::error::{Error, Result};
use crate::optim::Compass;
use crate::polyalg::numeric::horner;
use crate::polyalg::{BiPoly, NumBiPoly};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct HopfConfig {
    pub seed: u64,
    /// Base points on `S²` tried before refinement.
    pub candidates: usize,
    /// Samples of `α` on each fiber circle.
    pub alpha_grid: usize,
    /// Smallest acceptable `min_α |f(a e^{iα}, b e^{iα})|`.
    pub tol_circle: f64,
}

impl Default for HopfConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            candidates: 512,
            alpha_grid: 4096,
            tol_circle: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HopfRotation {
    pub a: Complex64,
    pub b: Complex64,
    /// `ρ = [[b̄, a], [−ā, b]]`; `ρ(0, w) = (a w, b w)`.
    pub matrix: [[Complex64; 2]; 2],
    pub min_circle_modulus: f64,
    pub argmin_alpha: f64,
    /// `max |(ρᴴρ − I)_ij|`.
    pub unitarity_defect: f64,
    pub determinant: Complex64,
    /// Image of the fiber under the Hopf map.
    pub base_point: [f64; 3],
    pub candidates_tested: usize,
    pub alpha_grid: usize,
}

impl HopfRotation {
    pub fn from_pair(a: Complex64, b: Complex64) -> Self {
        let matrix = [[b.conj(), a], [-a.conj(), b]];
        let mut defect: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let mut s = Complex64::default();
                for k in 0..2 {
                    s += matrix[k][i].conj() * matrix[k][j];
                }
                let target = if i == j { 1.0 } else { 0.0 };
                defect = defect.max((s - target).norm());
            }
        }
        let ab = a * b.conj();
        Self {
            a,
            b,
            matrix,
            min_circle_modulus: f64::NAN,
            argmin_alpha: f64::NAN,
            unitarity_defect: defect,
            determinant: matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0],
            base_point: [2.0 * ab.re, 2.0 * ab.im, a.norm_sqr() - b.norm_sqr()],
            candidates_tested: 0,
            alpha_grid: 0,
        }
    }

    /// `f ∘ ρ`.
    pub fn apply(&self, f: &NumBiPoly) -> NumBiPoly {
        f.compose_linear(self.matrix)
    }
}

/// Lift of `x ∈ S²` to a point of its fiber in `S³`.
fn lift(x3: f64, phi: f64) -> (Complex64, Complex64) {
    let x3 = x3.clamp(-1.0, 1.0);
    let a = ((1.0 + x3) / 2.0).sqrt();
    let b = Complex64::from_polar(((1.0 - x3) / 2.0).sqrt(), -phi);
    (Complex64::new(a, 0.0), b)
}

/// Coefficients `C_n` with `f(a e^{iα}, b e^{iα}) = Σ C_n e^{inα}`.
fn circle_coeffs(f: &NumBiPoly, a: Complex64, b: Complex64) -> Vec<Complex64> {
    let n = f.deg_z1() + f.deg_z2();
    let mut c = vec![Complex64::default(); n + 1];
    for (i, j, coef) in f.terms() {
        c[(i + j) as usize] += coef * a.powu(i) * b.powu(j);
    }
    c
}

const GOLDEN_ITERS: usize = 60;

/// `(min_α |g(α)|, argmin)` on a uniform grid, refined by golden-section
/// search between the neighbours of the best grid point.
fn circle_min(coeffs: &[Complex64], grid: usize) -> (f64, f64) {
    let g = |alpha: f64| horner(coeffs, Complex64::from_polar(1.0, alpha)).norm();
    let h = TAU / grid as f64;
    let (k, _) = (0..grid)
        .map(|k| (k, g(k as f64 * h)))
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .expect("nonempty grid");
    let (mut lo, mut hi) = ((k as f64 - 1.0) * h, (k as f64 + 1.0) * h);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (g(x1), g(x2));
    for _ in 0..GOLDEN_ITERS {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = g(x2);
        }
    }
    let grid_best = g(k as f64 * h);
    let (x, v) = if f1 < f2 { (x1, f1) } else { (x2, f2) };
    if v < grid_best {
        (v, x.rem_euclid(TAU))
    } else {
        (grid_best, k as f64 * h)
    }
}

/// Smallest modulus of `f` on the fiber circle through `(a, b)`.
pub fn min_circle_modulus(f: &NumBiPoly, a: Complex64, b: Complex64, grid: usize) -> (f64, f64) {
    circle_min(&circle_coeffs(f, a, b), grid)
}

/// Fiber circle `{(a e^{iα}, b e^{iα})}` on which `f` stays away from zero.
///
/// Quasi-random base points on `S²` (a rotated Fibonacci lattice) are
/// lifted to `S³`; the one maximizing the circle minimum is refined by
/// compass search on the sphere.
pub fn find_rotation(f: &BiPoly, cfg: &HopfConfig) -> Result<HopfRotation> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if cfg.candidates == 0 || cfg.alpha_grid < 3 {
        return Err(Error::InvalidConfig("need at least one candidate and three circle samples".into()));
    }
    let num = f.to_numeric();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let offset: f64 = rng.random();
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    let n = cfg.candidates;
    let scored: Vec<(f64, f64, f64)> = (0..n)
        .into_par_iter()
        .map(|k| {
            let x3 = 1.0 - 2.0 * (k as f64 + 0.5) / n as f64;
            let phi = TAU * ((k as f64 * golden + offset) % 1.0);
            let (a, b) = lift(x3, phi);
            (min_circle_modulus(&num, a, b, cfg.alpha_grid).0, x3, phi)
        })
        .collect();
    let &(best, x3, phi) = scored
        .iter()
        .max_by(|p, q| p.0.total_cmp(&q.0))
        .expect("at least one candidate");

    let compass = Compass {
        initial_step: 2.0 / n as f64,
        min_step: 1e-12,
        max_evals: 4000,
    };
    let refined = compass.minimize(
        |x| {
            let (a, b) = lift(x[0], x[1]);
            -min_circle_modulus(&num, a, b, cfg.alpha_grid).0
        },
        &[x3, phi],
        &[-1.0, -1e3],
        &[1.0, 1e3],
        &[1.0, TAU],
    );
    let (x3, phi) = if -refined.value > best { (refined.x[0], refined.x[1]) } else { (x3, phi) };
    let (a, b) = lift(x3, phi);
    let (min_mod, alpha) = min_circle_modulus(&num, a, b, cfg.alpha_grid);
    if !(min_mod > cfg.tol_circle) {
        return Err(Error::NoAdmissibleRotation {
            best_min_modulus: min_mod,
            a: a.to_string(),
            b: b.to_string(),
        });
    }
    Ok(HopfRotation {
        min_circle_modulus: min_mod,
        argmin_alpha: alpha,
        candidates_tested: n,
        alpha_grid: cfg.alpha_grid,
        ..HopfRotation::from_pair(a, b)
    })
}

/// Sampled `sup |f(z1, z2) / f(r z1, z2)|` over the closed ball.
#[derive(Debug, Clone, Serialize)]
pub struct BallRatioReport {
    pub polynomial: NumBiPoly,
    pub r_grid: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub sup: f64,
    pub argmax: Option<RatioWitness>,
    /// Every denominator stayed above threshold.
    pub finite: bool,
    pub violations: usize,
    pub flagged: Vec<RatioWitness>,
}

pub fn ball_ratio_sup_numeric(f: &NumBiPoly, r_grid: &[f64], samples: usize, seed: u64) -> Result<BallRatioReport> {
    check_r_grid(r_grid)?;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let s = ratio_search(f, &DomainSpec::ball(), Dilation::FirstVariable, r_grid, samples, seed);
    Ok(BallRatioReport {
        polynomial: f.clone(),
        r_grid: r_grid.to_vec(),
        samples,
        seed,
        sup: s.sup,
        argmax: s.argmax,
        finite: s.violations == 0,
        violations: s.violations,
        flagged: s.violation_points,
    })
}

pub fn ball_ratio_sup(f: &BiPoly, r_grid: &[f64], samples: usize, seed: u64) -> Result<BallRatioReport> {
    ball_ratio_sup_numeric(&f.to_numeric(), r_grid, samples, seed)
}

/// `‖1 − f(z)/f(r z1, z2)‖` on the ball for each `r`, ascending in `r`.
pub fn h_r_profile(f: &NumBiPoly, r_grid: &[f64], samples: usize, seed: u64) -> Result<Vec<DilationNorm>> {
    check_r_grid(r_grid)?;
    let mut rs = r_grid.to_vec();
    rs.sort_by(f64::total_cmp);
    rs.into_iter()
        .map(|r| {
            Ok(DilationFamily::from_numeric(f.clone(), r, Dilation::FirstVariable)?.distance_from_one(
                &DomainSpec::ball(),
                samples,
                seed,
            ))
        })
        .collect()
}
