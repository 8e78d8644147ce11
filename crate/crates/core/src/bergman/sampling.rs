use std::f64::consts::TAU;

use num_complex::Complex64;

use super::DomainSpec;
use crate::qmc::Halton;

pub type Point = (Complex64, Complex64);

/// Share of closure samples placed on the boundary `φ = 1`.
pub const BOUNDARY_SHARE: f64 = 0.25;

/// Quasi-random points of the closure `Ω̄`, covering it evenly in the
/// shell coordinates `(φ, t, θ1, θ2)`; a quarter lie on the boundary.
pub fn closure_points(domain: &DomainSpec, n: usize, seed: u64) -> Vec<Point> {
    let n_boundary = (n as f64 * BOUNDARY_SHARE).round() as usize;
    let interior = Halton::<4>::new(seed)
        .take(n - n_boundary)
        .map(|[s, t, a, b]| domain.point_from_shell(s, t, TAU * a, TAU * b));
    let boundary = Halton::<3>::new(seed ^ 0x9e37_79b9_7f4a_7c15)
        .take(n_boundary)
        .map(|[t, a, b]| domain.point_from_shell(1.0, t, TAU * a, TAU * b));
    interior.chain(boundary).collect()
}

/// `n` quasi-random points uniformly distributed in `Ω` with respect to
/// volume, by rejection from the cube `[-1, 1]^4 ⊃ Ω`.
pub fn uniform_points(domain: &DomainSpec, n: usize, seed: u64) -> Vec<Point> {
    let mut out = Vec::with_capacity(n);
    for x in Halton::<4>::new(seed) {
        if out.len() == n {
            break;
        }
        let z1 = Complex64::new(2.0 * x[0] - 1.0, 2.0 * x[1] - 1.0);
        let z2 = Complex64::new(2.0 * x[2] - 1.0, 2.0 * x[3] - 1.0);
        if domain.phi(z1, z2) < 1.0 {
            out.push((z1, z2));
        }
    }
    out
}
