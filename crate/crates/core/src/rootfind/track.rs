//! Continuation of the fiber `{z2 : f(z1, z2) = 0}` along a path in the
//! `z1`-plane.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use super::{RootError, RootFinder};
use crate::polyalg::NumBiPoly;

#[derive(Debug, Clone, Error)]
pub enum TrackError {
    #[error("step size fell below {min_step:e} near z1 = {at}")]
    StepUnderflow { at: Complex64, min_step: f64 },
    #[error("fiber has {got} roots but {expected} were supplied")]
    FiberMismatch { expected: usize, got: usize },
    #[error("fiber degree drops near z1 = {at} (path too close to a vertical asymptote)")]
    DegreeDrop { at: Complex64 },
    #[error("loop endpoint does not return onto the start fiber")]
    OpenLoop,
    #[error(transparent)]
    Root(#[from] RootError),
}

/// A piece of a path in the `z1`-plane, parametrized by `t ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Segment {
    Line {
        from: Complex64,
        to: Complex64,
    },
    /// `center + radius·e^{i(start + t·sweep)}`.
    Arc {
        center: Complex64,
        radius: f64,
        start: f64,
        sweep: f64,
    },
}

impl Segment {
    pub fn point(&self, t: f64) -> Complex64 {
        match *self {
            Segment::Line { from, to } => from + (to - from) * t,
            Segment::Arc {
                center,
                radius,
                start,
                sweep,
            } => center + Complex64::from_polar(radius, start + t * sweep),
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            Segment::Line { from, to } => (to - from).norm(),
            Segment::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    pub fn reversed(&self) -> Segment {
        match *self {
            Segment::Line { from, to } => Segment::Line { from: to, to: from },
            Segment::Arc {
                center,
                radius,
                start,
                sweep,
            } => Segment::Arc {
                center,
                radius,
                start: start + sweep,
                sweep: -sweep,
            },
        }
    }

    /// Euclidean distance from `p` to the segment.
    pub fn distance_to(&self, p: Complex64) -> f64 {
        match *self {
            Segment::Line { from, to } => {
                let d = to - from;
                let len2 = d.norm_sqr();
                if len2 == 0.0 {
                    return (p - from).norm();
                }
                let t = ((p - from) * d.conj()).re / len2;
                (p - self.point(t.clamp(0.0, 1.0))).norm()
            }
            Segment::Arc {
                center,
                radius,
                start,
                sweep,
            } => {
                let v = p - center;
                let on_arc = if sweep.abs() >= TAU {
                    true
                } else {
                    let (lo, span) = if sweep >= 0.0 {
                        (start, sweep)
                    } else {
                        (start + sweep, -sweep)
                    };
                    (v.arg() - lo).rem_euclid(TAU) <= span
                };
                if on_arc {
                    (v.norm() - radius).abs()
                } else {
                    (p - self.point(0.0)).norm().min((p - self.point(1.0)).norm())
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Path {
    pub segments: Vec<Segment>,
}

impl Path {
    pub fn line(from: Complex64, to: Complex64) -> Self {
        Self {
            segments: vec![Segment::Line { from, to }],
        }
    }

    /// Closed circle of `radius` around `center`, counterclockwise, starting
    /// and ending at `center + radius·e^{i·start}`.
    pub fn circle(center: Complex64, radius: f64, start: f64) -> Self {
        Self {
            segments: vec![Segment::Arc {
                center,
                radius,
                start,
                sweep: TAU,
            }],
        }
    }

    /// Loop based at `base`: straight to the circle of `radius` about
    /// `center`, once around counterclockwise, and straight back.
    pub fn loop_around(base: Complex64, center: Complex64, radius: f64) -> Self {
        let dir = (base - center).arg();
        let touch = center + Complex64::from_polar(radius, dir);
        Self {
            segments: vec![
                Segment::Line { from: base, to: touch },
                Segment::Arc {
                    center,
                    radius,
                    start: dir,
                    sweep: TAU,
                },
                Segment::Line { from: touch, to: base },
            ],
        }
    }

    pub fn then(mut self, other: &Path) -> Self {
        self.segments.extend_from_slice(&other.segments);
        self
    }

    pub fn reversed(&self) -> Self {
        Self {
            segments: self.segments.iter().rev().map(Segment::reversed).collect(),
        }
    }

    pub fn start(&self) -> Complex64 {
        self.segments.first().map(|s| s.point(0.0)).unwrap_or_default()
    }

    pub fn end(&self) -> Complex64 {
        self.segments.last().map(|s| s.point(1.0)).unwrap_or_default()
    }

    pub fn length(&self) -> f64 {
        self.segments.iter().map(Segment::length).sum()
    }

    /// Smallest distance from the path to any of `points`.
    pub fn clearance(&self, points: &[Complex64]) -> f64 {
        points
            .iter()
            .flat_map(|&p| self.segments.iter().map(move |s| s.distance_to(p)))
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TrackConfig {
    /// Largest spatial step along the path.
    pub max_step: f64,
    /// Refinement floor; below it tracking fails.
    pub min_step: f64,
    pub roots: RootFinder,
}

impl Default for TrackConfig {
    fn default() -> Self {
        Self {
            max_step: 0.05,
            min_step: 1e-9,
            roots: RootFinder::default(),
        }
    }
}

/// The fiber transported along a path: `fibers[k][i]` continues sheet `i`
/// of the starting fiber at `samples[k]`.
#[derive(Debug, Clone, Serialize)]
pub struct TrackedPath {
    pub samples: Vec<Complex64>,
    pub fibers: Vec<Vec<Complex64>>,
    /// Number of rejected (halved) steps.
    pub refinements: usize,
}

impl TrackedPath {
    pub fn start_fiber(&self) -> &[Complex64] {
        &self.fibers[0]
    }

    pub fn end_fiber(&self) -> &[Complex64] {
        self.fibers.last().expect("at least the start sample")
    }

    /// For a closed path: `perm[i] = j` when sheet `i` ends on start sheet `j`.
    pub fn endpoint_permutation(&self) -> Result<Vec<usize>, TrackError> {
        let start = self.start_fiber();
        let end = self.end_fiber();
        let perm = nearest_matching(start, end).ok_or(TrackError::OpenLoop)?;
        let sep = min_separation(start);
        let worst = perm
            .iter()
            .enumerate()
            .map(|(i, &j)| (end[i] - start[j]).norm())
            .fold(0.0, f64::max);
        if worst >= 0.5 * sep {
            return Err(TrackError::OpenLoop);
        }
        Ok(perm)
    }
}

/// Smallest pairwise distance (infinite for fewer than two points).
pub fn min_separation(z: &[Complex64]) -> f64 {
    let mut m = f64::INFINITY;
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            m = m.min((z[i] - z[j]).norm());
        }
    }
    m
}

/// `out[i]` = index in `targets` nearest to `from[i]`, if that map is a
/// bijection.
fn nearest_matching(targets: &[Complex64], from: &[Complex64]) -> Option<Vec<usize>> {
    if targets.len() != from.len() {
        return None;
    }
    let mut used = vec![false; targets.len()];
    let mut out = Vec::with_capacity(from.len());
    for z in from {
        let j = (0..targets.len())
            .min_by(|&a, &b| (targets[a] - z).norm().total_cmp(&(targets[b] - z).norm()))?;
        if used[j] {
            return None;
        }
        used[j] = true;
        out.push(j);
    }
    Some(out)
}

/// Transports `fiber0` (the roots of `f(path.start(), ·)`) along `path`.
///
/// Each step solves the new fiber from the previous one and pairs sheets by
/// nearest distance. A step is accepted only if the pairing is a bijection
/// and every sheet moved less than half the minimal root separation;
/// otherwise it is halved, down to `cfg.min_step`.
pub fn track(
    f: &NumBiPoly,
    path: &Path,
    fiber0: &[Complex64],
    cfg: &TrackConfig,
) -> Result<TrackedPath, TrackError> {
    let degree = f.deg_z2();
    if fiber0.len() != degree {
        return Err(TrackError::FiberMismatch {
            expected: fiber0.len(),
            got: degree,
        });
    }
    let mut fiber = fiber0.to_vec();
    let mut out = TrackedPath {
        samples: vec![path.start()],
        fibers: vec![fiber.clone()],
        refinements: 0,
    };
    for seg in &path.segments {
        let len = seg.length();
        if len == 0.0 {
            continue;
        }
        let mut t = 0.0;
        let mut h = cfg.max_step.min(len);
        while t < 1.0 {
            let dt = (h / len).min(1.0 - t);
            let t_next = if 1.0 - (t + dt) < 1e-12 { 1.0 } else { t + dt };
            let z = seg.point(t_next);
            match step(f, z, &fiber, cfg, degree) {
                Ok(next) => {
                    fiber = next;
                    t = t_next;
                    out.samples.push(z);
                    out.fibers.push(fiber.clone());
                    h = (h * 1.5).min(cfg.max_step);
                }
                Err(StepFailure::Fatal(e)) => return Err(e),
                Err(StepFailure::Refine) => {
                    out.refinements += 1;
                    h *= 0.5;
                    if h < cfg.min_step {
                        return Err(TrackError::StepUnderflow {
                            at: z,
                            min_step: cfg.min_step,
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

enum StepFailure {
    Refine,
    Fatal(TrackError),
}

fn step(
    f: &NumBiPoly,
    z1: Complex64,
    prev: &[Complex64],
    cfg: &TrackConfig,
    degree: usize,
) -> Result<Vec<Complex64>, StepFailure> {
    if degree == 0 {
        return Ok(Vec::new());
    }
    let slice = f.slice_z1(z1);
    let scale = slice.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if slice[degree].norm() <= 1e-12 * scale {
        return Err(StepFailure::Fatal(TrackError::DegreeDrop { at: z1 }));
    }
    let roots = match cfg.roots.roots_from(&slice, prev) {
        Ok(r) => r.roots,
        Err(RootError::NonConvergence { .. }) => return Err(StepFailure::Refine),
        Err(e) => return Err(StepFailure::Fatal(e.into())),
    };
    let Some(assign) = nearest_matching(&roots, prev) else {
        return Err(StepFailure::Refine);
    };
    let sep = min_separation(prev).min(min_separation(&roots));
    let next: Vec<Complex64> = assign.iter().map(|&j| roots[j]).collect();
    let moved = prev
        .iter()
        .zip(&next)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    if moved >= 0.5 * sep {
        return Err(StepFailure::Refine);
    }
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootfind::all_roots;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn loop_perm(f: &NumBiPoly, path: &Path, cfg: &TrackConfig) -> Vec<usize> {
        let fiber0 = all_roots(&f.slice_z1(path.start())).unwrap().roots;
        track(f, path, &fiber0, cfg).unwrap().endpoint_permutation().unwrap()
    }

    fn parabola() -> NumBiPoly {
        // z2^2 - z1
        NumBiPoly::from_terms([(0, 2, c(1.0, 0.0)), (1, 0, c(-1.0, 0.0))])
    }

    #[test]
    fn square_root_sheets_swap() {
        let path = Path::circle(c(0.0, 0.0), 0.3, 0.0);
        assert_eq!(loop_perm(&parabola(), &path, &TrackConfig::default()), vec![1, 0]);
    }

    #[test]
    fn single_valued_roots_return_home() {
        // z2^2 - z1^2
        let f = NumBiPoly::from_terms([(0, 2, c(1.0, 0.0)), (2, 0, c(-1.0, 0.0))]);
        let path = Path::circle(c(0.0, 0.0), 0.3, 0.0);
        assert_eq!(loop_perm(&f, &path, &TrackConfig::default()), vec![0, 1]);
    }

    #[test]
    fn constant_fibers() {
        // (z2 - 1)(z2 - 2)
        let f = NumBiPoly::from_terms([(0, 2, c(1.0, 0.0)), (0, 1, c(-3.0, 0.0)), (0, 0, c(2.0, 0.0))]);
        let path = Path::loop_around(c(0.5, 0.5), c(-1.0, 0.0), 0.4);
        assert_eq!(loop_perm(&f, &path, &TrackConfig::default()), vec![0, 1]);
    }

    #[test]
    fn loop_then_reverse_is_identity() {
        let path = Path::loop_around(c(0.6, 0.2), c(0.0, 0.0), 0.25);
        let there_and_back = path.clone().then(&path.reversed());
        assert_eq!(loop_perm(&parabola(), &there_and_back, &TrackConfig::default()), vec![0, 1]);
    }

    #[test]
    fn refinement_does_not_change_permutation() {
        let f = NumBiPoly::from_terms([(0, 3, c(1.0, 0.0)), (2, 0, c(-1.0, 0.0))]);
        let path = Path::loop_around(c(0.7, -0.1), c(0.0, 0.0), 0.3);
        let coarse = TrackConfig::default();
        let fine = TrackConfig {
            max_step: coarse.max_step / 2.0,
            ..coarse
        };
        let p1 = loop_perm(&f, &path, &coarse);
        assert_eq!(p1, loop_perm(&f, &path, &fine));
        // a 3-cycle
        assert!(p1.iter().enumerate().all(|(i, &j)| i != j));
    }

    #[test]
    fn segment_distances() {
        let s = Segment::Line { from: c(0.0, 0.0), to: c(2.0, 0.0) };
        assert!((s.distance_to(c(1.0, 1.0)) - 1.0).abs() < 1e-15);
        assert!((s.distance_to(c(3.0, 0.0)) - 1.0).abs() < 1e-15);
        let a = Path::circle(c(0.0, 0.0), 1.0, 0.0);
        assert!((a.clearance(&[c(0.0, 0.0)]) - 1.0).abs() < 1e-15);
    }
}
