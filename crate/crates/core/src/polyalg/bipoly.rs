use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::{GaussRational, NumBiPoly, UniPoly};
use crate::error::{Error, Result};

/// Exponent pair `(a, b)` of the monomial `z1^a z2^b`.
pub type Exponent = (u32, u32);

/// Sparse bivariate polynomial in `z1, z2` over `Q(i)`. No zero
/// coefficients are ever stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BiPoly {
    terms: BTreeMap<Exponent, GaussRational>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussRational::one())
    }

    pub fn constant(c: GaussRational) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn monomial(a: u32, b: u32, c: GaussRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((a, b), c);
        }
        Self { terms }
    }

    pub fn z1() -> Self {
        Self::monomial(1, 0, GaussRational::one())
    }

    pub fn z2() -> Self {
        Self::monomial(0, 1, GaussRational::one())
    }

    /// Builds from `(a, b, coefficient)` triples; repeated exponents add up.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, GaussRational)>,
    {
        let mut out = Self::zero();
        for (a, b, c) in terms {
            out.add_term((a, b), &c);
        }
        out
    }

    /// Convenience constructor with integer coefficients.
    pub fn from_int_terms(terms: &[(u32, u32, i64)]) -> Self {
        Self::from_terms(terms.iter().map(|&(a, b, c)| (a, b, GaussRational::from_int(c))))
    }

    /// Embeds a polynomial in `z1`.
    pub fn from_z1(u: &UniPoly) -> Self {
        Self::from_terms(
            u.coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| (k as u32, 0, c.clone())),
        )
    }

    /// Reassembles `Σ_b coeffs[b](z1) · z2^b`.
    pub fn from_z2_coeffs(coeffs: &[UniPoly]) -> Self {
        let mut out = Self::zero();
        for (b, u) in coeffs.iter().enumerate() {
            for (a, c) in u.coeffs().iter().enumerate() {
                out.add_term((a as u32, b as u32), c);
            }
        }
        out
    }

    fn add_term(&mut self, e: Exponent, c: &GaussRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(GaussRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &GaussRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, a: u32, b: u32) -> GaussRational {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(GaussRational::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&e| e == (0, 0))
    }

    pub fn deg_z1(&self) -> u32 {
        self.terms.keys().map(|e| e.0).max().unwrap_or(0)
    }

    pub fn deg_z2(&self) -> u32 {
        self.terms.keys().map(|e| e.1).max().unwrap_or(0)
    }

    /// Largest `a + b` over the support.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.0 + e.1).max().unwrap_or(0)
    }

    /// `d(p) = deg_z1 p + deg_z2 p`, the exponent of the dilation bound
    /// `|p(z)/p(rz)| ≤ 2^{d(p)}`.
    pub fn total_d(&self) -> Result<u32> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(self.deg_z1() + self.deg_z2())
    }

    /// Coefficient of the leading term in lex order with `z2 > z1`.
    pub fn lex_leading(&self) -> Option<&GaussRational> {
        self.terms
            .iter()
            .max_by_key(|(e, _)| (e.1, e.0))
            .map(|(_, c)| c)
    }

    fn lex_leading_term(&self) -> Option<(Exponent, &GaussRational)> {
        self.terms
            .iter()
            .max_by_key(|(e, _)| (e.1, e.0))
            .map(|(e, c)| (*e, c))
    }

    /// Scaled so that the lex-leading coefficient is one.
    pub fn monic(&self) -> Self {
        match self.lex_leading() {
            Some(l) if !l.is_one() => self.scale(&l.inv().expect("nonzero")),
            _ => self.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, &-c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term((e1.0 + e2.0, e1.1 + e2.1), &(c1 * c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, a)| (*e, a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn derivative_z1(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(e, _)| e.0 > 0)
                .map(|(e, c)| (e.0 - 1, e.1, c * &GaussRational::from_int(e.0 as i64))),
        )
    }

    pub fn derivative_z2(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(e, _)| e.1 > 0)
                .map(|(e, c)| (e.0, e.1 - 1, c * &GaussRational::from_int(e.1 as i64))),
        )
    }

    /// Exchanges the roles of `z1` and `z2`.
    pub fn swap_vars(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| ((e.1, e.0), c.clone())).collect(),
        }
    }

    pub fn eval(&self, z1: &GaussRational, z2: &GaussRational) -> GaussRational {
        self.as_z2_coeffs()
            .iter()
            .rev()
            .fold(GaussRational::zero(), |acc, u| &(&acc * z2) + &u.eval(z1))
    }

    /// Floating-point evaluation, Horner in `z1` inside Horner in `z2`.
    pub fn eval_complex(&self, z1: Complex64, z2: Complex64) -> Complex64 {
        self.to_numeric().eval(z1, z2)
    }

    /// View as a polynomial in `z2` with coefficients in `Q(i)[z1]`:
    /// entry `b` is the coefficient of `z2^b`.
    pub fn as_z2_coeffs(&self) -> Vec<UniPoly> {
        if self.is_zero() {
            return Vec::new();
        }
        let n = self.deg_z2() as usize + 1;
        let mut rows: Vec<Vec<GaussRational>> = vec![Vec::new(); n];
        for ((a, b), c) in &self.terms {
            let row = &mut rows[*b as usize];
            if row.len() <= *a as usize {
                row.resize(*a as usize + 1, GaussRational::zero());
            }
            row[*a as usize] = c.clone();
        }
        rows.into_iter().map(UniPoly::new).collect()
    }

    /// `Some(u)` when the polynomial does not involve `z2`.
    pub fn as_z1_poly(&self) -> Option<UniPoly> {
        if self.deg_z2() > 0 {
            return None;
        }
        Some(self.as_z2_coeffs().into_iter().next().unwrap_or_default())
    }

    /// Leading coefficient in `z2`, a polynomial in `z1`.
    pub fn leading_z2(&self) -> UniPoly {
        self.as_z2_coeffs().pop().unwrap_or_default()
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    /// Division by lex-leading terms terminates with a zero remainder
    /// exactly when `d` divides.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let ((da, db), dc) = d.lex_leading_term()?;
        let dc_inv = dc.inv().expect("nonzero leading coefficient");
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(((ra, rb), rc)) = rem.lex_leading_term() {
            if ra < da || rb < db {
                return None;
            }
            let t = Self::monomial(ra - da, rb - db, rc * &dc_inv);
            rem = rem.sub(&t.mul(d));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    pub fn to_numeric(&self) -> NumBiPoly {
        NumBiPoly::from_terms(
            self.terms
                .iter()
                .map(|(&(a, b), c)| (a, b, c.to_complex())),
        )
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((a, b), c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono = match (a, b) {
                (0, 0) => String::new(),
                _ => {
                    let v = |name: &str, k: u32| match k {
                        0 => String::new(),
                        1 => name.to_string(),
                        _ => format!("{name}^{k}"),
                    };
                    [v("z1", *a), v("z2", *b)]
                        .into_iter()
                        .filter(|s| !s.is_empty())
                        .collect::<Vec<_>>()
                        .join("*")
                }
            };
            match (mono.is_empty(), c.is_one()) {
                (true, _) => write!(f, "{c}")?,
                (false, true) => write!(f, "{mono}")?,
                (false, false) => write!(f, "{c}*{mono}")?,
            }
        }
        Ok(())
    }
}
