use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The complete Reinhardt domain `Ω_{p,q} = {|z1|^p + |z2|^q < 1}`.
/// `Ω_{2,2}` is the unit ball of `C²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub p: f64,
    pub q: f64,
}

impl DomainSpec {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        for (name, v) in [("p", p), ("q", q)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidDomain(format!("{name} = {v} must be finite and positive")));
            }
        }
        Ok(Self { p, q })
    }

    pub fn ball() -> Self {
        Self { p: 2.0, q: 2.0 }
    }

    pub fn is_ball(&self) -> bool {
        self.p == 2.0 && self.q == 2.0
    }

    /// Defining function `φ(z) = |z1|^p + |z2|^q`; the domain is `φ < 1`.
    pub fn phi(&self, z1: Complex64, z2: Complex64) -> f64 {
        z1.norm().powf(self.p) + z2.norm().powf(self.q)
    }

    /// Exchanges the roles of the two coordinates.
    pub fn swapped(&self) -> Self {
        Self { p: self.q, q: self.p }
    }

    /// Point with moduli `|z1| = (s·t)^{1/p}`, `|z2| = (s·(1-t))^{1/q}` and
    /// the given arguments; it has `φ = s`. `s ∈ [0, 1]` sweeps the closure.
    pub fn point_from_shell(&self, s: f64, t: f64, theta1: f64, theta2: f64) -> (Complex64, Complex64) {
        let m1 = (s * t).max(0.0).powf(1.0 / self.p);
        let m2 = (s * (1.0 - t)).max(0.0).powf(1.0 / self.q);
        (Complex64::from_polar(m1, theta1), Complex64::from_polar(m2, theta2))
    }

    /// Inverse of [`DomainSpec::point_from_shell`].
    pub fn shell_coordinates(&self, z1: Complex64, z2: Complex64) -> [f64; 4] {
        let u = z1.norm().powf(self.p);
        let v = z2.norm().powf(self.q);
        let s = u + v;
        let t = if s > 0.0 { u / s } else { 0.5 };
        [s, t, z1.arg(), z2.arg()]
    }
}

impl std::fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Ω_{{{},{}}}", self.p, self.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonpositive_exponents() {
        assert!(DomainSpec::new(0.0, 1.0).is_err());
        assert!(DomainSpec::new(2.0, f64::INFINITY).is_err());
        assert!(DomainSpec::new(0.5, 3.0).is_ok());
    }

    #[test]
    fn shell_round_trip() {
        let d = DomainSpec::new(1.5, 3.0).unwrap();
        let (z1, z2) = d.point_from_shell(0.7, 0.25, 1.0, -2.0);
        assert!((d.phi(z1, z2) - 0.7).abs() < 1e-14);
        let s = d.shell_coordinates(z1, z2);
        assert!((s[0] - 0.7).abs() < 1e-14 && (s[1] - 0.25).abs() < 1e-14);
    }
}
