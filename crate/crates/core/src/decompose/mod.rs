//! Numerical irreducible decomposition of `V(I) ⊂ C²`: a curve part from
//! the gcd of the generators, split into monodromy orbits, and a point part
//! from elimination.

mod interp;
mod monodromy;
mod points;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyalg::{gcd2, BiPoly, NumBiPoly};
use crate::rootfind::{trim_negligible, TrackConfig};

pub use interp::{chebyshev_nodes, divided_differences, newton_to_monomial};
pub use monodromy::{decompose_curve, FactorMonodromy};
pub use points::{zero_dim_solve, IsolatedPoint, DEDUP_RADIUS};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DecomposeConfig {
    pub seed: u64,
    /// Residual bound for accepted points and witnesses.
    pub tol_point: f64,
    pub track: TrackConfig,
    /// Paths keep this fraction of the minimal branch-point distance away
    /// from every branch point.
    pub clearance_fraction: f64,
    /// Half-length of the interpolation segment through the base point.
    pub interp_radius: f64,
    pub max_base_tries: usize,
    /// Random points used to check `Π P_S = lc^{m-1} F`.
    pub check_points: usize,
}

impl Default for DecomposeConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            tol_point: 1e-8,
            track: TrackConfig::default(),
            clearance_fraction: 0.05,
            interp_radius: 2.0,
            max_base_tries: 64,
            check_points: 20,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ComponentKind {
    /// `z1 = const`, a root of the factor's `z1`-content.
    VerticalLine { z1: Complex64 },
    /// A monodromy orbit of sheets over `base_point`.
    Sheets { base_point: Complex64, orbit: Vec<usize> },
}

/// One irreducible curve of `V(I)`.
#[derive(Debug, Clone, Serialize)]
pub struct CurveComponent {
    /// Square-free factor of the gcd containing the curve.
    pub factor: BiPoly,
    pub multiplicity: u32,
    #[serde(flatten)]
    pub kind: ComponentKind,
    pub degree_z2: usize,
    /// Floating-point defining polynomial. For an orbit `S` of a factor
    /// with leading `z2`-coefficient `lc` this is `lc · Π_{j∈S}(z2 − y_j)`.
    pub polynomial: NumBiPoly,
    pub witness_points: Vec<(Complex64, Complex64)>,
    pub witness_residuals: Vec<f64>,
    #[serde(skip)]
    factor_numeric: NumBiPoly,
}

const POLISH_ITERS: usize = 8;

impl CurveComponent {
    /// Points of the component with first coordinate `z1`: roots of the
    /// defining polynomial's slice, polished by Newton's method on the exact
    /// factor. Vertical lines return `z2 = 0` when `z1` is on the line.
    pub fn points_over(&self, z1: Complex64, finder: &crate::rootfind::RootFinder) -> Vec<Complex64> {
        match &self.kind {
            ComponentKind::VerticalLine { z1: c } => {
                if (z1 - c).norm() < 1e-12 * (1.0 + c.norm()) {
                    vec![Complex64::default()]
                } else {
                    Vec::new()
                }
            }
            ComponentKind::Sheets { .. } => {
                let slice = self.polynomial.slice_z1(z1);
                let trimmed = trim_negligible(&slice, 1e-12);
                if trimmed.len() < 2 {
                    return Vec::new();
                }
                let Ok(roots) = finder.all_roots(trimmed) else {
                    return Vec::new();
                };
                let f = self.factor_numeric.slice_z1(z1);
                let df: Vec<Complex64> = f.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect();
                roots
                    .roots
                    .into_iter()
                    .map(|mut y| {
                        for _ in 0..POLISH_ITERS {
                            let d = crate::polyalg::numeric::horner(&df, y);
                            if d.norm() == 0.0 {
                                break;
                            }
                            let step = crate::polyalg::numeric::horner(&f, y) / d;
                            if !step.is_finite() {
                                break;
                            }
                            y -= step;
                            if step.norm() <= 1e-16 * (1.0 + y.norm()) {
                                break;
                            }
                        }
                        y
                    })
                    .collect()
            }
        }
    }

    /// `|F(z)|` for the parent factor.
    pub fn residual(&self, z1: Complex64, z2: Complex64) -> f64 {
        self.factor_numeric.eval(z1, z2).norm()
    }

    pub fn is_vertical_line(&self) -> bool {
        matches!(self.kind, ComponentKind::VerticalLine { .. })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VarietyDecomposition {
    pub generators: Vec<BiPoly>,
    /// Greatest common divisor of the generators.
    pub gcd: BiPoly,
    /// `g_i / gcd`, the input of the point part.
    pub residual_generators: Vec<BiPoly>,
    pub factors: Vec<FactorMonodromy>,
    pub curves: Vec<CurveComponent>,
    pub points: Vec<IsolatedPoint>,
    /// Solutions of the residual system lying on the curve part.
    pub points_on_curves: usize,
    pub config: DecomposeConfig,
}

impl VarietyDecomposition {
    pub fn is_empty(&self) -> bool {
        self.curves.is_empty() && self.points.is_empty()
    }
}

pub fn decompose_ideal(generators: &[BiPoly], cfg: &DecomposeConfig) -> Result<VarietyDecomposition> {
    let nonzero: Vec<BiPoly> = generators.iter().filter(|g| !g.is_zero()).cloned().collect();
    if nonzero.is_empty() {
        return Err(Error::AllGeneratorsZero);
    }
    let gcd = nonzero.iter().skip(1).fold(nonzero[0].monic(), |acc, g| gcd2(&acc, g));
    let (curves, factors) = if gcd.is_constant() {
        (Vec::new(), Vec::new())
    } else {
        decompose_curve(&gcd, cfg)?
    };
    let residual_generators: Vec<BiPoly> = nonzero
        .iter()
        .map(|g| g.div_exact(&gcd).expect("gcd divides every generator"))
        .collect();

    let mut points = Vec::new();
    let mut points_on_curves = 0;
    if residual_generators.len() >= 2 && !residual_generators.iter().any(BiPoly::is_constant) {
        let gcd_num: NumBiPoly = gcd.to_numeric();
        for pt in zero_dim_solve(&residual_generators, cfg)? {
            if !gcd.is_constant() && gcd_num.eval(pt.z1, pt.z2).norm() < cfg.tol_point {
                points_on_curves += 1;
                continue;
            }
            let residuals = nonzero.iter().map(|g| g.eval_complex(pt.z1, pt.z2).norm()).collect();
            points.push(IsolatedPoint { residuals, ..pt });
        }
    }
    Ok(VarietyDecomposition {
        generators: nonzero,
        gcd,
        residual_generators,
        factors,
        curves,
        points,
        points_on_curves,
        config: *cfg,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::GaussRational;

    fn p(terms: &[(u32, u32, i64)]) -> BiPoly {
        BiPoly::from_int_terms(terms)
    }

    fn orbit_sizes(g: &BiPoly, cfg: &DecomposeConfig) -> Vec<usize> {
        let (comps, _) = decompose_curve(g, cfg).unwrap();
        let mut s: Vec<usize> = comps.iter().map(|c| c.degree_z2).collect();
        s.sort();
        s
    }

    #[test]
    fn spec_curves() {
        let cfg = DecomposeConfig::default();
        assert_eq!(orbit_sizes(&p(&[(0, 2, 1), (1, 0, -1)]), &cfg), vec![2]);
        assert_eq!(orbit_sizes(&p(&[(0, 2, 1), (2, 0, -1)]), &cfg), vec![1, 1]);
        let prod = p(&[(0, 2, 1), (1, 0, -1)]).mul(&p(&[(0, 1, 1), (0, 0, 2)]));
        assert_eq!(orbit_sizes(&prod, &cfg), vec![1, 2]);
        assert_eq!(orbit_sizes(&p(&[(0, 3, 1), (2, 0, -1)]), &cfg), vec![3]);
    }

    #[test]
    fn three_lines_reconstruct() {
        let lines = p(&[(0, 1, 1), (1, 0, -1)])
            .mul(&p(&[(0, 1, 1), (1, 0, 1)]))
            .mul(&p(&[(0, 1, 1), (1, 0, -2)]));
        let (comps, reports) = decompose_curve(&lines, &DecomposeConfig::default()).unwrap();
        assert_eq!(comps.len(), 3);
        assert!(reports[0].reconstruction_error < 1e-8, "{}", reports[0].reconstruction_error);
        for c in &comps {
            assert!(c.witness_residuals.iter().all(|&r| r < 1e-8));
            assert_eq!(c.polynomial.deg_z1(), 1);
        }
    }

    #[test]
    fn vertical_lines_and_points() {
        let half = GaussRational::from_ratio(1, 2);
        let g = p(&[(1, 0, 1), (0, 0, -2)]).mul(&BiPoly::z1().sub(&BiPoly::constant(half)));
        let d = decompose_ideal(&[g], &DecomposeConfig::default()).unwrap();
        assert_eq!(d.curves.len(), 2);
        assert!(d.curves.iter().all(CurveComponent::is_vertical_line));
        assert!(d.points.is_empty());

        let d = decompose_ideal(&[p(&[(1, 1, 1)]), p(&[(1, 1, 1), (1, 0, -3)])], &DecomposeConfig::default()).unwrap();
        assert_eq!(d.curves.len(), 1);
        assert!(d.points.is_empty());
        assert_eq!(d.gcd, BiPoly::z1());
    }

    #[test]
    fn point_part_excludes_curve_points() {
        // z1 (z1 - 2), z1 z2: curve z1 = 0 and the point (2, 0).
        let d = decompose_ideal(&[p(&[(2, 0, 1), (1, 0, -2)]), p(&[(1, 1, 1)])], &DecomposeConfig::default()).unwrap();
        assert_eq!(d.curves.len(), 1);
        assert_eq!(d.points.len(), 1);
        assert!((d.points[0].z1 - 2.0).norm() < 1e-12 && d.points[0].z2.norm() < 1e-12);
    }

    #[test]
    fn all_zero_is_an_error() {
        assert!(matches!(
            decompose_ideal(&[BiPoly::zero()], &DecomposeConfig::default()),
            Err(Error::AllGeneratorsZero)
        ));
    }
}
