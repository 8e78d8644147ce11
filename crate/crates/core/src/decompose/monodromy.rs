use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::interp::{chebyshev_nodes, divided_differences, newton_to_monomial};
use super::{ComponentKind, CurveComponent, DecomposeConfig};
use crate::error::{Error, Result};
use crate::polyalg::numeric::horner;
use crate::polyalg::{branch_polynomial, content_z1, squarefree, BiPoly, NumBiPoly};
use crate::rootfind::{min_separation, track, Path, RootFinder};

/// Monodromy data for one square-free factor with positive `z2`-degree.
#[derive(Debug, Clone, Serialize)]
pub struct FactorMonodromy {
    pub factor: BiPoly,
    pub multiplicity: u32,
    /// Roots of the `z1`-content: vertical lines.
    pub vertical_lines: Vec<Complex64>,
    /// Roots of the square-free part of `Res_z2(F, ∂F/∂z2)` for the
    /// primitive part `F`.
    pub branch_points: Vec<Complex64>,
    pub base_point: Option<Complex64>,
    pub base_fiber: Vec<Complex64>,
    pub loop_radii: Vec<f64>,
    /// Sheet permutation induced by the loop around each branch point.
    pub permutations: Vec<Vec<usize>>,
    pub orbits: Vec<Vec<usize>>,
    pub base_point_tries: usize,
    /// Largest relative mismatch of `Π P_S = lc^{m-1} F` at check points.
    pub reconstruction_error: f64,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, i: usize) -> usize {
        let p = self.0[i];
        if p == i {
            return i;
        }
        let r = self.find(p);
        self.0[i] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn orbits_of(n: usize, perms: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut uf = UnionFind((0..n).collect());
    for perm in perms {
        for (i, &j) in perm.iter().enumerate() {
            uf.union(i, j);
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = uf.find(i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

fn numeric_roots(coeffs: &[Complex64], finder: &RootFinder) -> Result<Vec<Complex64>> {
    if coeffs.len() <= 1 {
        return Ok(Vec::new());
    }
    Ok(finder.all_roots(coeffs)?.roots)
}

/// A base point with every monodromy loop and the interpolation segment
/// clear of the branch points.
struct Layout {
    base: Complex64,
    fiber: Vec<Complex64>,
    loops: Vec<(Path, f64)>,
    direction: Complex64,
    tries: usize,
}

fn choose_layout(
    f: &NumBiPoly,
    branch: &[Complex64],
    cfg: &DecomposeConfig,
    rng: &mut ChaCha8Rng,
) -> Result<Layout> {
    let n = branch.len();
    let center = if n == 0 {
        Complex64::default()
    } else {
        branch.iter().sum::<Complex64>() / n as f64
    };
    let spread = 1.0 + branch.iter().map(|b| (b - center).norm()).fold(0.0, f64::max);
    let sep = min_separation(branch);
    let clear = cfg.clearance_fraction * if sep.is_finite() { sep } else { 1.0 };
    let mut reason = String::from("no attempt made");
    for tries in 1..=cfg.max_base_tries {
        let base = center + Complex64::from_polar(spread * rng.random::<f64>().sqrt(), TAU * rng.random::<f64>());
        let mut loops = Vec::with_capacity(n);
        let mut ok = true;
        for (k, &b) in branch.iter().enumerate() {
            let nearest = branch
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, o)| (o - b).norm())
                .fold(f64::INFINITY, f64::min);
            let radius = (0.3 * nearest).min(0.5 * (base - b).norm());
            let path = Path::loop_around(base, b, radius);
            if path.clearance(branch) < clear {
                ok = false;
                reason = format!("loop around branch point {k} passes within {clear:e} of the branch set");
                break;
            }
            loops.push((path, radius));
        }
        if !ok {
            continue;
        }
        let slice = f.slice_z1(base);
        let fiber = match cfg.track.roots.all_roots(&slice) {
            Ok(r) => r.roots,
            Err(e) => {
                reason = e.to_string();
                continue;
            }
        };
        if fiber.len() > 1 && min_separation(&fiber) < 1e3 * cfg.track.roots.cluster_radius {
            reason = "base fiber has nearly coincident sheets".into();
            continue;
        }
        let direction = (0..16).find_map(|_| {
            let dir = Complex64::from_polar(cfg.interp_radius, TAU * rng.random::<f64>());
            let seg = Path::line(base - dir, base + dir);
            (seg.clearance(branch) >= clear).then_some(dir)
        });
        let Some(direction) = direction else {
            reason = "interpolation segment meets the branch set".into();
            continue;
        };
        return Ok(Layout {
            base,
            fiber,
            loops,
            direction,
            tries,
        });
    }
    Err(Error::BasePoint {
        tries: cfg.max_base_tries,
        reason,
    })
}

/// Fibers of `f` over `targets`, each reached from `base` along a straight
/// line so that sheet labels agree with the base fiber.
fn fibers_from_base(
    f: &NumBiPoly,
    base: Complex64,
    fiber: &[Complex64],
    targets: &[Complex64],
    cfg: &DecomposeConfig,
) -> Result<Vec<Vec<Complex64>>> {
    targets
        .par_iter()
        .map(|&z| {
            let tracked = track(f, &Path::line(base, z), fiber, &cfg.track)?;
            Ok(tracked.end_fiber().to_vec())
        })
        .collect()
}

/// Coefficients (in `z2`, ascending) of `Π_{j∈S} (z2 − y_j)`.
fn elementary(ys: impl Iterator<Item = Complex64>) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for y in ys {
        let mut next = vec![Complex64::default(); c.len() + 1];
        for (k, &ck) in c.iter().enumerate() {
            next[k + 1] += ck;
            next[k] -= ck * y;
        }
        c = next;
    }
    c
}

/// Relative size below which interpolated coefficients are set to zero.
const COEFF_CUTOFF: f64 = 1e-10;

fn cleaned(p: NumBiPoly) -> NumBiPoly {
    let m = p.max_abs_coeff();
    NumBiPoly::from_terms(p.terms().filter(|(_, _, c)| c.norm() > COEFF_CUTOFF * m))
}

/// `P_S(z1, z2) = lc_F(z1) · Π_{j∈S} (z2 − y_j(z1))` for every orbit, by
/// Newton interpolation in `z1` at Chebyshev nodes on a segment through the
/// base point.
fn orbit_polynomials(
    f: &NumBiPoly,
    layout: &Layout,
    orbits: &[Vec<usize>],
    cfg: &DecomposeConfig,
) -> Result<Vec<NumBiPoly>> {
    let lc = f.rows().last().cloned().unwrap_or_default();
    let d = f.deg_z1();
    let t: Vec<Complex64> = chebyshev_nodes(d + 1).into_iter().map(|x| Complex64::new(x, 0.0)).collect();
    let nodes: Vec<Complex64> = t.iter().map(|&tk| layout.base + layout.direction * tk).collect();
    let fibers = fibers_from_base(f, layout.base, &layout.fiber, &nodes, cfg)?;
    let alpha = 1.0 / layout.direction;
    let beta = -layout.base * alpha;
    Ok(orbits
        .iter()
        .map(|orbit| {
            let values: Vec<Vec<Complex64>> = nodes
                .iter()
                .zip(&fibers)
                .map(|(&z, fib)| {
                    let l = horner(&lc, z);
                    elementary(orbit.iter().map(|&j| fib[j])).into_iter().map(|c| c * l).collect()
                })
                .collect();
            let rows: Vec<Vec<Complex64>> = (0..=orbit.len())
                .map(|k| {
                    let v: Vec<Complex64> = values.iter().map(|vals| vals[k]).collect();
                    newton_to_monomial(&t, &divided_differences(&t, &v), alpha, beta)
                })
                .collect();
            cleaned(NumBiPoly::from_z2_rows(rows))
        })
        .collect())
}

fn reconstruction_error(f: &NumBiPoly, parts: &[NumBiPoly], center: Complex64, radius: f64, rng: &mut ChaCha8Rng, checks: usize) -> f64 {
    let lc = f.rows().last().cloned().unwrap_or_default();
    let m = parts.len() as i32;
    (0..checks)
        .map(|_| {
            let z1 = center + Complex64::from_polar(radius * rng.random::<f64>().sqrt(), TAU * rng.random::<f64>());
            let z2 = Complex64::from_polar(1.0 + rng.random::<f64>(), TAU * rng.random::<f64>());
            let lhs: Complex64 = parts.iter().map(|p| p.eval(z1, z2)).product();
            let rhs = horner(&lc, z1).powi(m - 1) * f.eval(z1, z2);
            let scale: f64 = parts.iter().map(|p| p.abs_eval(z1, z2)).product();
            (lhs - rhs).norm() / scale.max(f64::MIN_POSITIVE)
        })
        .fold(0.0, f64::max)
}

fn vertical_line(factor: &BiPoly, multiplicity: u32, c: Complex64, f_num: &NumBiPoly) -> CurveComponent {
    let poly = NumBiPoly::from_terms([(1, 0, Complex64::new(1.0, 0.0)), (0, 0, -c)]);
    let witness = (c, Complex64::default());
    CurveComponent {
        factor: factor.clone(),
        multiplicity,
        kind: ComponentKind::VerticalLine { z1: c },
        degree_z2: 0,
        witness_residuals: vec![f_num.eval(witness.0, witness.1).norm()],
        witness_points: vec![witness],
        polynomial: poly,
        factor_numeric: f_num.clone(),
    }
}

/// Irreducible components of `V(g)` for a nonconstant `g`.
///
/// Each square-free factor splits into its `z1`-content, whose roots are
/// vertical lines, and a primitive part whose sheets are grouped into
/// monodromy orbits over a seeded base point.
pub fn decompose_curve(g: &BiPoly, cfg: &DecomposeConfig) -> Result<(Vec<CurveComponent>, Vec<FactorMonodromy>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut components = Vec::new();
    let mut reports = Vec::new();
    for (factor, multiplicity) in squarefree(g)? {
        let f_num = factor.to_numeric();
        let (content, prim) = content_z1(&factor);
        let vertical_lines = numeric_roots(&content.to_complex(), &cfg.track.roots)?;
        for &c in &vertical_lines {
            components.push(vertical_line(&factor, multiplicity, c, &f_num));
        }
        let mut report = FactorMonodromy {
            factor: factor.clone(),
            multiplicity,
            vertical_lines,
            branch_points: Vec::new(),
            base_point: None,
            base_fiber: Vec::new(),
            loop_radii: Vec::new(),
            permutations: Vec::new(),
            orbits: Vec::new(),
            base_point_tries: 0,
            reconstruction_error: 0.0,
        };
        if prim.deg_z2() == 0 {
            reports.push(report);
            continue;
        }
        let p_num = prim.to_numeric();
        let n = prim.deg_z2() as usize;
        let branch = if n > 1 {
            numeric_roots(&branch_polynomial(&prim)?.squarefree_part().to_complex(), &cfg.track.roots)?
        } else {
            // lc roots still matter for interpolation clearance.
            numeric_roots(&prim.leading_z2().squarefree_part().to_complex(), &cfg.track.roots)?
        };

        let mut last_err = None;
        let mut solved = None;
        for _ in 0..cfg.max_base_tries {
            let layout = choose_layout(&p_num, &branch, cfg, &mut rng)?;
            let perms: Result<Vec<Vec<usize>>> = if n > 1 {
                layout
                    .loops
                    .par_iter()
                    .map(|(path, _)| {
                        let tr = track(&p_num, path, &layout.fiber, &cfg.track)?;
                        Ok(tr.endpoint_permutation()?)
                    })
                    .collect()
            } else {
                Ok(Vec::new())
            };
            match perms {
                Ok(perms) => {
                    solved = Some((layout, perms));
                    break;
                }
                Err(e) => last_err = Some(e),
            }
        }
        let Some((layout, perms)) = solved else {
            return Err(last_err.unwrap_or(Error::BasePoint {
                tries: cfg.max_base_tries,
                reason: "tracking failed".into(),
            }));
        };
        let orbits = orbits_of(n, &perms);
        let polys = if orbits.len() == 1 {
            vec![p_num.clone()]
        } else {
            orbit_polynomials(&p_num, &layout, &orbits, cfg)?
        };
        report.reconstruction_error = reconstruction_error(
            &p_num,
            &polys,
            layout.base,
            cfg.interp_radius,
            &mut rng,
            cfg.check_points,
        );
        for (orbit, poly) in orbits.iter().zip(polys) {
            let witness_points: Vec<(Complex64, Complex64)> = orbit.iter().map(|&j| (layout.base, layout.fiber[j])).collect();
            components.push(CurveComponent {
                factor: factor.clone(),
                multiplicity,
                kind: ComponentKind::Sheets {
                    base_point: layout.base,
                    orbit: orbit.clone(),
                },
                degree_z2: orbit.len(),
                witness_residuals: witness_points.iter().map(|w| f_num.eval(w.0, w.1).norm()).collect(),
                witness_points,
                polynomial: poly,
                factor_numeric: f_num.clone(),
            });
        }
        report.branch_points = branch;
        report.base_point = Some(layout.base);
        report.base_fiber = layout.fiber;
        report.loop_radii = layout.loops.iter().map(|(_, r)| *r).collect();
        report.permutations = perms;
        report.orbits = orbits;
        report.base_point_tries = layout.tries;
        reports.push(report);
    }
    Ok((components, reports))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbits_from_permutations() {
        assert_eq!(orbits_of(3, &[vec![1, 0, 2]]), vec![vec![0, 1], vec![2]]);
        assert_eq!(orbits_of(3, &[vec![1, 2, 0]]), vec![vec![0, 1, 2]]);
        assert_eq!(orbits_of(2, &[]), vec![vec![0], vec![1]]);
    }

    #[test]
    fn elementary_symmetric_coefficients() {
        let c = elementary([Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)].into_iter());
        assert_eq!(c, vec![Complex64::new(2.0, 0.0), Complex64::new(-3.0, 0.0), Complex64::new(1.0, 0.0)]);
    }
}
