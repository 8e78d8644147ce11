//! The closed / dense / neither classifier: every component of `V(I)` is
//! tested against `Ω_{p,q}` and the results are aggregated.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::bergman::{density_certificate, DensityCertificate, DensityOptions, DomainSpec, DEFAULT_R_GRID};
use crate::decompose::{decompose_ideal, CurveComponent, DecomposeConfig, IsolatedPoint, VarietyDecomposition};
use crate::error::{Error, Result};
use crate::optim::Compass;
use crate::polyalg::BiPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Intersection {
    Intersects,
    Misses,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Overall {
    Closed,
    Dense,
    Neither,
    Inconclusive,
}

/// Overall verdict from per-component results. An empty variety means the
/// ideal is the whole ring, which is dense.
pub fn aggregate(results: &[Intersection]) -> Overall {
    if results.contains(&Intersection::Inconclusive) {
        return Overall::Inconclusive;
    }
    let hits = results.iter().filter(|&&r| r == Intersection::Intersects).count();
    match (hits, results.len() - hits) {
        (_, 0) if hits > 0 => Overall::Closed,
        (0, _) => Overall::Dense,
        _ => Overall::Neither,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DensitySettings {
    pub n_max: u32,
    pub r_grid: Vec<f64>,
    pub samples: usize,
}

impl Default for DensitySettings {
    fn default() -> Self {
        Self {
            n_max: 20,
            r_grid: DEFAULT_R_GRID.to_vec(),
            samples: 100_000,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyConfig {
    /// Half-width of the band around `φ = 1` reported as inconclusive.
    pub delta: f64,
    /// Grid pitch over the `z1` disk.
    pub grid_pitch: f64,
    /// Grid minima refined by local search.
    pub refine_top: usize,
    pub decompose: DecomposeConfig,
    /// Certificate attached to dense principal verdicts; `None` skips it.
    pub density: Option<DensitySettings>,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        Self {
            delta: 1e-6,
            grid_pitch: 0.01,
            refine_top: 8,
            decompose: DecomposeConfig::default(),
            density: Some(DensitySettings::default()),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
#[serde(tag = "type", content = "index", rename_all = "snake_case")]
pub enum ComponentRef {
    Curve(usize),
    Point(usize),
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchTrace {
    pub method: &'static str,
    pub grid_points: usize,
    pub grid_pitch: Option<f64>,
    pub grid_radius: Option<f64>,
    pub refined_candidates: usize,
    pub refinement_evals: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct IntersectionResult {
    pub component: ComponentRef,
    pub min_phi: f64,
    pub argmin: Option<(Complex64, Complex64)>,
    /// `|F(argmin)|` for the component's defining factor or generators.
    pub argmin_residual: Option<f64>,
    pub verdict: Intersection,
    pub trace: SearchTrace,
}

fn band(phi: f64, delta: f64) -> Intersection {
    if phi <= 1.0 - delta {
        Intersection::Intersects
    } else if phi >= 1.0 + delta {
        Intersection::Misses
    } else {
        Intersection::Inconclusive
    }
}

pub fn intersect_point(index: usize, pt: &IsolatedPoint, domain: &DomainSpec, delta: f64) -> IntersectionResult {
    let phi = domain.phi(pt.z1, pt.z2);
    IntersectionResult {
        component: ComponentRef::Point(index),
        min_phi: phi,
        argmin: Some((pt.z1, pt.z2)),
        argmin_residual: Some(pt.max_residual()),
        verdict: band(phi, delta),
        trace: SearchTrace {
            method: "point",
            grid_points: 0,
            grid_pitch: None,
            grid_radius: None,
            refined_candidates: 0,
            refinement_evals: 0,
        },
    }
}

/// Smallest `φ` over the component's points above `z1`.
fn best_over(c: &CurveComponent, domain: &DomainSpec, z1: Complex64, cfg: &ClassifyConfig) -> Option<(f64, Complex64)> {
    c.points_over(z1, &cfg.decompose.track.roots)
        .into_iter()
        .map(|y| (domain.phi(z1, y), y))
        .filter(|(phi, _)| phi.is_finite())
        .min_by(|a, b| a.0.total_cmp(&b.0))
}

/// Global minimization of `φ` over a curve component: a square grid over
/// the disk in `z1` outside which `φ ≥ 1 + δ` holds automatically, then
/// compass refinement of the best grid points.
pub fn intersect_curve(index: usize, c: &CurveComponent, domain: &DomainSpec, cfg: &ClassifyConfig) -> IntersectionResult {
    if let crate::decompose::ComponentKind::VerticalLine { z1 } = c.kind {
        let phi = z1.norm().powf(domain.p);
        return IntersectionResult {
            component: ComponentRef::Curve(index),
            min_phi: phi,
            argmin: Some((z1, Complex64::default())),
            argmin_residual: Some(c.residual(z1, Complex64::default())),
            verdict: band(phi, cfg.delta),
            trace: SearchTrace {
                method: "vertical_line",
                grid_points: 0,
                grid_pitch: None,
                grid_radius: None,
                refined_candidates: 0,
                refinement_evals: 0,
            },
        };
    }
    let radius = (1.0 + cfg.delta).powf(1.0 / domain.p);
    let h = cfg.grid_pitch;
    let m = (radius / h).ceil() as i64;
    let grid: Vec<Complex64> = (-m..=m)
        .flat_map(|i| (-m..=m).map(move |j| Complex64::new(i as f64 * h, j as f64 * h)))
        .filter(|z| z.norm() <= radius)
        .collect();
    let mut scored: Vec<(f64, Complex64)> = grid
        .par_iter()
        .filter_map(|&z| best_over(c, domain, z, cfg).map(|(phi, _)| (phi, z)))
        .collect();
    for w in &c.witness_points {
        if w.0.norm() <= radius {
            scored.push((domain.phi(w.0, w.1), w.0));
        }
    }
    scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.re.total_cmp(&b.1.re)).then(a.1.im.total_cmp(&b.1.im)));

    // Well-separated starting points so distinct basins are explored.
    let mut starts: Vec<Complex64> = Vec::new();
    for &(_, z) in &scored {
        if starts.len() == cfg.refine_top {
            break;
        }
        if starts.iter().all(|s| (s - z).norm() > 5.0 * h) {
            starts.push(z);
        }
    }
    let compass = Compass {
        initial_step: h,
        min_step: 1e-12,
        max_evals: 4000,
    };
    let refined: Vec<(f64, Complex64, usize)> = starts
        .par_iter()
        .map(|&z0| {
            let obj = |x: &[f64]| best_over(c, domain, Complex64::new(x[0], x[1]), cfg).map_or(f64::INFINITY, |b| b.0);
            let big = 2.0 * radius;
            let r = compass.minimize(obj, &[z0.re, z0.im], &[-big, -big], &[big, big], &[1.0, 1.0]);
            (r.value, Complex64::new(r.x[0], r.x[1]), r.evals)
        })
        .collect();
    let evals = refined.iter().map(|r| r.2).sum();
    let best = refined
        .iter()
        .map(|&(v, z, _)| (v, z))
        .chain(scored.first().map(|&(v, z)| (v, z)))
        .min_by(|a, b| a.0.total_cmp(&b.0));

    let trace = SearchTrace {
        method: "grid_and_compass",
        grid_points: grid.len(),
        grid_pitch: Some(h),
        grid_radius: Some(radius),
        refined_candidates: starts.len(),
        refinement_evals: evals,
    };
    match best.and_then(|(_, z1)| best_over(c, domain, z1, cfg).map(|(phi, y)| (phi, z1, y))) {
        Some((phi, z1, z2)) => {
            let residual = c.residual(z1, z2);
            let mut verdict = band(phi, cfg.delta);
            // An intersection claim needs a point verified on the curve.
            if verdict == Intersection::Intersects && !(residual < cfg.decompose.tol_point) {
                verdict = Intersection::Inconclusive;
            }
            IntersectionResult {
                component: ComponentRef::Curve(index),
                min_phi: phi,
                argmin: Some((z1, z2)),
                argmin_residual: Some(residual),
                verdict,
                trace,
            }
        }
        None => IntersectionResult {
            component: ComponentRef::Curve(index),
            min_phi: f64::INFINITY,
            argmin: None,
            argmin_residual: None,
            // No sheet over the whole disk: φ ≥ 1 + δ on the component.
            verdict: Intersection::Misses,
            trace,
        },
    }
}

/// A point `w ∈ Ω ∩ V(I)`; `I ⊂ M_w`.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub z1: Complex64,
    pub z2: Complex64,
    pub phi: f64,
    /// `|g_i(w)|` for every generator.
    pub residuals: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClosureVerdict {
    pub domain: DomainSpec,
    pub overall: Overall,
    pub justification: String,
    pub components: Vec<IntersectionResult>,
    pub witness: Option<Witness>,
    pub density_certificate: Option<DensityCertificate>,
    pub decomposition: Option<VarietyDecomposition>,
    pub diagnostics: Vec<String>,
}

fn justification(overall: Overall, empty: bool) -> &'static str {
    match overall {
        Overall::Closed => "every irreducible component of V(I) meets the domain: I is closed",
        Overall::Dense if empty => "V(I) is empty: I is the unit ideal, hence dense",
        Overall::Dense => "no irreducible component of V(I) meets the domain: I is dense",
        Overall::Neither => "some components of V(I) meet the domain and some do not: I is neither closed nor dense",
        Overall::Inconclusive => "a component lies within the tolerance band of the boundary or could not be resolved",
    }
}

pub fn classify(generators: &[BiPoly], domain: &DomainSpec, cfg: &ClassifyConfig) -> Result<ClosureVerdict> {
    if generators.iter().all(BiPoly::is_zero) {
        return Err(Error::AllGeneratorsZero);
    }
    if !(cfg.delta > 0.0 && cfg.grid_pitch > 0.0) {
        return Err(Error::InvalidConfig("delta and grid pitch must be positive".into()));
    }
    let decomposition = match decompose_ideal(generators, &cfg.decompose) {
        Ok(d) => d,
        Err(e) => {
            return Ok(ClosureVerdict {
                domain: *domain,
                overall: Overall::Inconclusive,
                justification: "decomposition failed".into(),
                components: Vec::new(),
                witness: None,
                density_certificate: None,
                decomposition: None,
                diagnostics: vec![e.to_string()],
            })
        }
    };
    let mut components: Vec<IntersectionResult> = decomposition
        .curves
        .par_iter()
        .enumerate()
        .map(|(i, c)| intersect_curve(i, c, domain, cfg))
        .collect();
    components.extend(
        decomposition
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| intersect_point(i, p, domain, cfg.delta)),
    );
    let verdicts: Vec<Intersection> = components.iter().map(|c| c.verdict).collect();
    let overall = aggregate(&verdicts);
    let mut diagnostics = Vec::new();

    let witness = if overall == Overall::Closed {
        components
            .iter()
            .filter_map(|c| c.argmin.map(|w| (c.min_phi, w)))
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .map(|(phi, (z1, z2))| Witness {
                z1,
                z2,
                phi,
                residuals: decomposition.generators.iter().map(|g| g.eval_complex(z1, z2).norm()).collect(),
            })
    } else {
        None
    };
    if let Some(w) = &witness {
        if w.residuals.iter().any(|&r| !(r < cfg.decompose.tol_point)) {
            diagnostics.push("witness residual exceeds the point tolerance".into());
        }
    }

    let density_certificate = match (&cfg.density, overall, decomposition.generators.as_slice()) {
        (Some(settings), Overall::Dense, [p]) => {
            let opts = DensityOptions {
                n_max: settings.n_max,
                r_grid: &settings.r_grid,
                samples: settings.samples,
                seed: cfg.decompose.seed,
                zero: None,
            };
            match density_certificate(p, domain, &opts) {
                Ok(c) => Some(c),
                Err(e) => {
                    diagnostics.push(format!("density certificate: {e}"));
                    None
                }
            }
        }
        _ => None,
    };

    Ok(ClosureVerdict {
        domain: *domain,
        overall,
        justification: justification(overall, decomposition.is_empty()).into(),
        components,
        witness,
        density_certificate,
        decomposition: Some(decomposition),
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::GaussRational;
    use proptest::prelude::*;

    fn quick() -> ClassifyConfig {
        ClassifyConfig {
            density: None,
            ..Default::default()
        }
    }

    fn z1_minus(num: i64, den: i64) -> BiPoly {
        BiPoly::z1().sub(&BiPoly::constant(GaussRational::from_ratio(num, den)))
    }

    #[test]
    fn points_against_the_ball() {
        let ball = DomainSpec::ball();
        let pt = |a: f64| IsolatedPoint {
            z1: Complex64::new(a, 0.0),
            z2: Complex64::default(),
            residuals: vec![0.0],
        };
        assert_eq!(intersect_point(0, &pt(0.0), &ball, 1e-6).verdict, Intersection::Intersects);
        assert_eq!(intersect_point(0, &pt(2.0), &ball, 1e-6).verdict, Intersection::Misses);
        assert_eq!(intersect_point(0, &pt(1.0), &ball, 1e-6).verdict, Intersection::Inconclusive);
    }

    #[test]
    fn principal_verdicts() {
        let ball = DomainSpec::ball();
        let v = classify(&[z1_minus(1, 2)], &ball, &quick()).unwrap();
        assert_eq!(v.overall, Overall::Closed);
        let w = v.witness.unwrap();
        assert!((w.z1 - 0.5).norm() < 1e-12 && w.z2.norm() < 1e-12);
        assert_eq!(classify(&[z1_minus(2, 1)], &ball, &quick()).unwrap().overall, Overall::Dense);
        let both = z1_minus(2, 1).mul(&z1_minus(1, 2));
        assert_eq!(classify(&[both], &ball, &quick()).unwrap().overall, Overall::Neither);
    }

    #[test]
    fn parabola_meets_ball_at_origin() {
        let f = BiPoly::from_int_terms(&[(0, 2, 1), (1, 0, -1)]);
        let v = classify(&[f], &DomainSpec::ball(), &quick()).unwrap();
        assert_eq!(v.overall, Overall::Closed);
        assert!(v.components[0].min_phi < 1e-12);
    }

    #[test]
    fn curve_outside_the_ball() {
        // z2 = 2 + z1 never meets the ball: min φ = 2 at z1 = -1, z2 = 1.
        let f = BiPoly::from_int_terms(&[(0, 1, 1), (1, 0, -1), (0, 0, -2)]);
        let v = classify(&[f], &DomainSpec::ball(), &quick()).unwrap();
        assert_eq!(v.overall, Overall::Dense);
        assert!((v.components[0].min_phi - 2.0).abs() < 1e-8);
    }

    #[test]
    fn dense_principal_carries_certificate() {
        let cfg = ClassifyConfig {
            density: Some(DensitySettings {
                n_max: 8,
                r_grid: DEFAULT_R_GRID.to_vec(),
                samples: 5_000,
            }),
            ..Default::default()
        };
        let v = classify(&[z1_minus(2, 1)], &DomainSpec::ball(), &cfg).unwrap();
        assert!(v.density_certificate.is_some());
    }

    #[test]
    fn unit_ideal_is_dense() {
        let v = classify(&[BiPoly::z1(), BiPoly::z1().sub(&BiPoly::one())], &DomainSpec::ball(), &quick()).unwrap();
        assert_eq!(v.overall, Overall::Dense);
        assert!(v.components.is_empty());
    }

    fn oracle(results: &[Intersection]) -> Overall {
        let any_inc = results.iter().any(|&r| r == Intersection::Inconclusive);
        let all_in = results.iter().all(|&r| r == Intersection::Intersects);
        let all_out = results.iter().all(|&r| r == Intersection::Misses);
        if any_inc {
            Overall::Inconclusive
        } else if all_out {
            Overall::Dense
        } else if all_in {
            Overall::Closed
        } else {
            Overall::Neither
        }
    }

    proptest! {
        #[test]
        fn aggregation_matches_table(v in proptest::collection::vec(0u8..3, 0..8)) {
            let results: Vec<Intersection> = v.iter().map(|&k| match k {
                0 => Intersection::Intersects,
                1 => Intersection::Misses,
                _ => Intersection::Inconclusive,
            }).collect();
            prop_assert_eq!(aggregate(&results), oracle(&results));
            let mut rev = results.clone();
            rev.reverse();
            prop_assert_eq!(aggregate(&rev), aggregate(&results));
        }
    }
}
