use std::cmp::Ordering;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::sampling::{closure_points, uniform_points, Point};
use super::{monomial_norm, DomainSpec};
use crate::error::{Error, Result};
use crate::optim::Compass;
use crate::polyalg::{BiPoly, NumBiPoly};

/// Denominators below `DENOM_TOL · max(1, ‖p‖∞)` are treated as zeros.
pub const DENOM_TOL: f64 = 1e-14;
/// Absolute slack on the `2^{d(p)}` comparison.
pub const BOUND_SLACK: f64 = 1e-9;
/// Candidates handed to local refinement.
const REFINE_TOP: usize = 8;
const MAX_VIOLATION_POINTS: usize = 16;

/// Which coordinates the dilation scales.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Dilation {
    /// `(z1, z2) ↦ (r z1, r z2)`.
    Full,
    /// `(z1, z2) ↦ (r z1, z2)`.
    FirstVariable,
}

impl Dilation {
    pub fn apply(self, z: Point, r: f64) -> Point {
        match self {
            Dilation::Full => (z.0 * r, z.1 * r),
            Dilation::FirstVariable => (z.0 * r, z.1),
        }
    }
}

/// `f_r(z) = p(z) / p(rz)`.
#[derive(Debug, Clone)]
pub struct DilationFamily {
    pub r: f64,
    pub dilation: Dilation,
    num: NumBiPoly,
    denom_floor: f64,
}

impl DilationFamily {
    pub fn new(p: &BiPoly, r: f64, dilation: Dilation) -> Result<Self> {
        Self::from_numeric(p.to_numeric(), r, dilation)
    }

    pub fn from_numeric(num: NumBiPoly, r: f64, dilation: Dilation) -> Result<Self> {
        if !(r > 0.5 && r < 1.0) {
            return Err(Error::InvalidConfig(format!("dilation parameter r = {r} must lie in (1/2, 1)")));
        }
        Ok(Self {
            r,
            dilation,
            denom_floor: DENOM_TOL * num.max_abs_coeff().max(1.0),
            num,
        })
    }

    /// `None` where the denominator vanishes numerically.
    pub fn eval(&self, z: Point) -> Option<Complex64> {
        ratio_at(&self.num, self.dilation, z, self.r, self.denom_floor)
    }

    /// `‖1 − f_r‖` in `L²_a(Ω)` by quasi-random volume sampling normalized
    /// with the exact volume `ν₀₀`.
    pub fn distance_from_one(&self, domain: &DomainSpec, samples: usize, seed: u64) -> DilationNorm {
        let pts = uniform_points(domain, samples, seed);
        let vals: Vec<Option<f64>> = pts.par_iter().map(|&z| self.eval(z).map(|f| (1.0 - f).norm())).collect();
        let mut sum = 0.0;
        let mut max_pointwise: f64 = 0.0;
        let mut poles = 0;
        for v in vals {
            match v {
                Some(x) => {
                    sum += x * x;
                    max_pointwise = max_pointwise.max(x);
                }
                None => poles += 1,
            }
        }
        let value = if poles > 0 {
            f64::INFINITY
        } else {
            (monomial_norm(domain, 0, 0) * sum / pts.len() as f64).sqrt()
        };
        DilationNorm {
            r: self.r,
            value,
            max_pointwise,
            poles,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DilationNorm {
    pub r: f64,
    pub value: f64,
    /// Largest sampled `|1 − f_r|`.
    pub max_pointwise: f64,
    /// Samples where `p(rz)` vanished numerically.
    pub poles: usize,
}

fn ratio_at(f: &NumBiPoly, dilation: Dilation, z: Point, r: f64, floor: f64) -> Option<Complex64> {
    let (w1, w2) = dilation.apply(z, r);
    let den = f.eval(w1, w2);
    (den.norm() >= floor).then(|| f.eval(z.0, z.1) / den)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RatioWitness {
    pub z1: Complex64,
    pub z2: Complex64,
    pub r: f64,
    pub ratio: f64,
}

/// Sampled sup of `|f(z) / f(D_r z)|` over `Ω̄ × r_grid`.
#[derive(Debug, Clone, Serialize)]
pub struct RatioSearch {
    pub sup: f64,
    pub argmax: Option<RatioWitness>,
    pub violations: usize,
    pub violation_points: Vec<RatioWitness>,
    pub refinement_evals: usize,
}

/// Coarse closure sampling followed by compass refinement of the best
/// candidates in shell coordinates `(φ, t, θ1, θ2)`.
pub fn ratio_search(
    f: &NumBiPoly,
    domain: &DomainSpec,
    dilation: Dilation,
    r_grid: &[f64],
    samples: usize,
    seed: u64,
) -> RatioSearch {
    let floor = DENOM_TOL * f.max_abs_coeff().max(1.0);
    let pts = closure_points(domain, samples, seed);
    let evaluated: Vec<(usize, usize, Option<f64>)> = pts
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, &z)| {
            r_grid
                .iter()
                .enumerate()
                .map(move |(j, &r)| (i, j, ratio_at(f, dilation, z, r, floor).map(|c| c.norm())))
        })
        .collect();

    let mut violation_points = Vec::new();
    let mut violations = 0;
    let mut finite: Vec<(f64, usize, usize)> = Vec::with_capacity(evaluated.len());
    for (i, j, v) in evaluated {
        match v {
            Some(x) => finite.push((x, i, j)),
            None => {
                violations += 1;
                if violation_points.len() < MAX_VIOLATION_POINTS {
                    violation_points.push(RatioWitness {
                        z1: pts[i].0,
                        z2: pts[i].1,
                        r: r_grid[j],
                        ratio: f64::INFINITY,
                    });
                }
            }
        }
    }
    finite.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(Ordering::Equal).then((a.1, a.2).cmp(&(b.1, b.2))));

    let compass = Compass::default();
    let refined: Vec<(RatioWitness, usize)> = finite
        .iter()
        .take(REFINE_TOP)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&&(x, i, j)| {
            let r = r_grid[j];
            let x0 = domain.shell_coordinates(pts[i].0, pts[i].1);
            let objective = |s: &[f64]| {
                let z = domain.point_from_shell(s[0], s[1], s[2], s[3]);
                match ratio_at(f, dilation, z, r, floor) {
                    Some(c) => -c.norm(),
                    None => f64::INFINITY,
                }
            };
            let res = compass.minimize(
                objective,
                &x0,
                &[0.0, 0.0, -1e3, -1e3],
                &[1.0, 1.0, 1e3, 1e3],
                &[1.0, 1.0, 1.0, 1.0],
            );
            let best = if -res.value > x {
                let (z1, z2) = domain.point_from_shell(res.x[0], res.x[1], res.x[2], res.x[3]);
                RatioWitness {
                    z1,
                    z2,
                    r,
                    ratio: -res.value,
                }
            } else {
                RatioWitness {
                    z1: pts[i].0,
                    z2: pts[i].1,
                    r,
                    ratio: x,
                }
            };
            (best, res.evals)
        })
        .collect();

    let refinement_evals = refined.iter().map(|(_, e)| e).sum();
    let argmax = refined
        .into_iter()
        .map(|(w, _)| w)
        .fold(None, |acc: Option<RatioWitness>, w| match acc {
            Some(a) if a.ratio >= w.ratio => Some(a),
            _ => Some(w),
        });
    let sup = if violations > 0 {
        f64::INFINITY
    } else {
        argmax.map_or(f64::NAN, |w| w.ratio)
    };
    RatioSearch {
        sup,
        argmax,
        violations,
        violation_points,
        refinement_evals,
    }
}

/// Outcome of checking `|p(z)/p(rz)| ≤ 2^{d(p)}`.
#[derive(Debug, Clone, Serialize)]
pub struct RatioBoundReport {
    pub polynomial: BiPoly,
    pub domain: DomainSpec,
    pub r_grid: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub d: u32,
    pub bound: f64,
    pub sup: f64,
    pub argmax: Option<RatioWitness>,
    pub pass: bool,
    pub violations: usize,
    pub violation_points: Vec<RatioWitness>,
    pub refinement_evals: usize,
}

pub fn check_r_grid(r_grid: &[f64]) -> Result<()> {
    if r_grid.is_empty() {
        return Err(Error::InvalidConfig("r grid is empty".into()));
    }
    if let Some(r) = r_grid.iter().find(|&&r| !(r > 0.5 && r < 1.0)) {
        return Err(Error::InvalidConfig(format!("r = {r} outside (1/2, 1)")));
    }
    Ok(())
}

pub fn ratio_sup(p: &BiPoly, domain: &DomainSpec, r_grid: &[f64], samples: usize, seed: u64) -> Result<RatioBoundReport> {
    check_r_grid(r_grid)?;
    let d = p.total_d()?;
    let search = ratio_search(&p.to_numeric(), domain, Dilation::Full, r_grid, samples, seed);
    let bound = 2f64.powi(d as i32);
    Ok(RatioBoundReport {
        polynomial: p.clone(),
        domain: *domain,
        r_grid: r_grid.to_vec(),
        samples,
        seed,
        d,
        bound,
        pass: search.violations == 0 && search.sup <= bound + BOUND_SLACK,
        sup: search.sup,
        argmax: search.argmax,
        violations: search.violations,
        violation_points: search.violation_points,
        refinement_evals: search.refinement_evals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::GaussRational;

    fn z1_minus(c: i64) -> BiPoly {
        BiPoly::z1().sub(&BiPoly::constant(GaussRational::from_int(c)))
    }

    #[test]
    fn one_variable_witness() {
        let rep = ratio_sup(&z1_minus(1), &DomainSpec::ball(), &[0.5005, 0.7, 0.9], 4000, 1).unwrap();
        // 2 / (1 + r) at z1 = -1.
        assert!((rep.sup - 2.0 / 1.5005).abs() < 1e-6, "{}", rep.sup);
        assert!(rep.pass && rep.d == 1);
    }

    #[test]
    fn constant_ratio_is_one() {
        let rep = ratio_sup(&BiPoly::one(), &DomainSpec::ball(), &[0.6], 100, 0).unwrap();
        assert_eq!(rep.sup, 1.0);
    }

    #[test]
    fn interior_zero_is_flagged() {
        let p = BiPoly::z1().sub(&BiPoly::constant(GaussRational::from_ratio(1, 2)));
        let rep = ratio_sup(&p, &DomainSpec::ball(), &[0.6], 2000, 0).unwrap();
        assert!(!rep.pass && rep.sup > 1e3);
        let rep = ratio_sup(&z1_minus(2), &DomainSpec::ball(), &[0.9], 2000, 0).unwrap();
        assert!(rep.pass && rep.sup <= 2.0);
    }

    #[test]
    fn dilation_norm_bounded_by_pointwise_estimate() {
        let fam = DilationFamily::new(&z1_minus(2), 0.9, Dilation::Full).unwrap();
        let n = fam.distance_from_one(&DomainSpec::ball(), 20_000, 5);
        assert!(n.max_pointwise <= 0.1 / 1.1 + 1e-12);
        let near = DilationFamily::new(&z1_minus(2), 0.99, Dilation::Full).unwrap();
        let m = near.distance_from_one(&DomainSpec::ball(), 20_000, 5);
        assert!(m.value < n.value && m.value <= 0.0223);
        assert!(DilationFamily::new(&BiPoly::one(), 0.5, Dilation::Full).is_err());
    }
}
