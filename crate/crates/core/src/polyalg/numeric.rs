//! Floating-point polynomial forms used by the numeric stages.

use num_complex::Complex64;
use num_traits::Zero;
use serde::ser::{Serialize, SerializeStruct, Serializer};

/// Horner evaluation of `Σ c[k] x^k`.
pub fn horner(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::zero(), |acc, &c| acc * x + c)
}

/// Value and first derivative in one pass.
pub fn horner_with_derivative(coeffs: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for &c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// `Σ |c[k]| |x|^k`, the natural scale for backward-error residuals.
pub fn abs_horner(coeffs: &[Complex64], x: Complex64) -> f64 {
    let r = x.norm();
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
}

/// Dense bivariate polynomial with complex coefficients,
/// `rows[b][a]` multiplying `z1^a z2^b`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct NumBiPoly {
    rows: Vec<Vec<Complex64>>,
}

impl NumBiPoly {
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, Complex64)>,
    {
        let mut rows: Vec<Vec<Complex64>> = Vec::new();
        for (a, b, c) in terms {
            let (a, b) = (a as usize, b as usize);
            if rows.len() <= b {
                rows.resize(b + 1, Vec::new());
            }
            if rows[b].len() <= a {
                rows[b].resize(a + 1, Complex64::zero());
            }
            rows[b][a] += c;
        }
        Self { rows }.trimmed()
    }

    /// `rows[b]` is the coefficient polynomial (in `z1`) of `z2^b`.
    pub fn from_z2_rows(rows: Vec<Vec<Complex64>>) -> Self {
        Self { rows }.trimmed()
    }

    fn trimmed(mut self) -> Self {
        for row in &mut self.rows {
            while row.last().is_some_and(|c| c.is_zero()) {
                row.pop();
            }
        }
        while self.rows.last().is_some_and(|r| r.is_empty()) {
            self.rows.pop();
        }
        self
    }

    pub fn rows(&self) -> &[Vec<Complex64>] {
        &self.rows
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, Complex64)> + '_ {
        self.rows.iter().enumerate().flat_map(|(b, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(a, &c)| (a as u32, b as u32, c))
        })
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn deg_z2(&self) -> usize {
        self.rows.len().saturating_sub(1)
    }

    pub fn deg_z1(&self) -> usize {
        self.rows.iter().map(|r| r.len().saturating_sub(1)).max().unwrap_or(0)
    }

    pub fn eval(&self, z1: Complex64, z2: Complex64) -> Complex64 {
        self.rows
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, row| acc * z2 + horner(row, z1))
    }

    /// `Σ |c_ab| |z1|^a |z2|^b`.
    pub fn abs_eval(&self, z1: Complex64, z2: Complex64) -> f64 {
        let r2 = z2.norm();
        self.rows
            .iter()
            .rev()
            .fold(0.0, |acc, row| acc * r2 + abs_horner(row, z1))
    }

    /// Univariate polynomial in `z2` obtained by fixing `z1`.
    pub fn slice_z1(&self, z1: Complex64) -> Vec<Complex64> {
        self.rows.iter().map(|row| horner(row, z1)).collect()
    }

    /// Univariate polynomial in `z1` obtained by fixing `z2`.
    pub fn slice_z2(&self, z2: Complex64) -> Vec<Complex64> {
        let n = self.deg_z1() + 1;
        let mut out = vec![Complex64::zero(); n];
        let mut pw = Complex64::new(1.0, 0.0);
        for row in &self.rows {
            for (a, &c) in row.iter().enumerate() {
                out[a] += c * pw;
            }
            pw *= z2;
        }
        out
    }

    pub fn derivative_z1(&self) -> Self {
        Self::from_terms(
            self.terms()
                .filter(|t| t.0 > 0)
                .map(|(a, b, c)| (a - 1, b, c * a as f64)),
        )
    }

    pub fn derivative_z2(&self) -> Self {
        Self::from_terms(
            self.terms()
                .filter(|t| t.1 > 0)
                .map(|(a, b, c)| (a, b - 1, c * b as f64)),
        )
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_terms(self.terms().map(|(a, b, c)| (a, b, c * s)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = Vec::new();
        for (a1, b1, c1) in self.terms() {
            for (a2, b2, c2) in other.terms() {
                terms.push((a1 + a2, b1 + b2, c1 * c2));
            }
        }
        Self::from_terms(terms)
    }

    /// `f(m00 w1 + m01 w2, m10 w1 + m11 w2)` expanded in `w1, w2`.
    pub fn compose_linear(&self, m: [[Complex64; 2]; 2]) -> Self {
        let l1 = Self::from_terms([(1, 0, m[0][0]), (0, 1, m[0][1])]);
        let l2 = Self::from_terms([(1, 0, m[1][0]), (0, 1, m[1][1])]);
        let pows = |l: &Self, n: usize| {
            let mut v = vec![Self::from_terms([(0, 0, Complex64::new(1.0, 0.0))])];
            for k in 1..=n {
                let next = v[k - 1].mul(l);
                v.push(next);
            }
            v
        };
        let p1 = pows(&l1, self.deg_z1());
        let p2 = pows(&l2, self.deg_z2());
        let mut terms = Vec::new();
        for (a, b, c) in self.terms() {
            let prod = p1[a as usize].mul(&p2[b as usize]);
            terms.extend(prod.terms().map(|(x, y, d)| (x, y, c * d)));
        }
        Self::from_terms(terms)
    }

    /// Largest coefficient modulus.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms().map(|t| t.2.norm()).fold(0.0, f64::max)
    }
}

#[derive(serde::Serialize)]
struct NumTerm {
    a: u32,
    b: u32,
    c: Complex64,
}

/// Serialized as `{"terms": [{"a", "b", "c": [re, im]}, ...]}`.
impl Serialize for NumBiPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<NumTerm> = self.terms().map(|(a, b, c)| NumTerm { a, b, c }).collect();
        let mut st = s.serialize_struct("NumBiPoly", 1)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}
