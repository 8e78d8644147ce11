//! Exact gcd, square-free decomposition and resultants in `Q(i)[z1][z2]`.

use num_traits::{One, Zero};

use super::{BiPoly, GaussRational, UniPoly};
use crate::error::{Error, Result};

/// Monic gcd of the coefficient polynomials (the content in `Q(i)[z1]`).
fn content(coeffs: &[UniPoly]) -> UniPoly {
    coeffs
        .iter()
        .filter(|c| !c.is_zero())
        .fold(UniPoly::zero(), |acc, c| {
            if acc.is_constant() && !acc.is_zero() {
                acc
            } else {
                acc.gcd(c)
            }
        })
}

fn primitive_part(coeffs: &[UniPoly]) -> Vec<UniPoly> {
    let c = content(coeffs);
    if c.is_zero() {
        return Vec::new();
    }
    coeffs
        .iter()
        .map(|u| u.div_exact(&c).expect("content divides every coefficient"))
        .collect()
}

fn trim(mut v: Vec<UniPoly>) -> Vec<UniPoly> {
    while v.last().is_some_and(UniPoly::is_zero) {
        v.pop();
    }
    v
}

/// Pseudo-remainder of `a` by `b` as polynomials in `z2`.
fn pseudo_rem(a: &[UniPoly], b: &[UniPoly]) -> Vec<UniPoly> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = trim(a.to_vec());
    while r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = c.mul(lb);
        }
        for (j, bc) in b.iter().enumerate() {
            r[shift + j] = r[shift + j].sub(&lr.mul(bc));
        }
        r = trim(r);
    }
    r
}

/// Content of `f` in `Q(i)[z1]` (monic) and its primitive part.
pub fn content_z1(f: &BiPoly) -> (UniPoly, BiPoly) {
    let coeffs = f.as_z2_coeffs();
    let c = content(&coeffs);
    (c, BiPoly::from_z2_coeffs(&primitive_part(&coeffs)))
}

/// Exact greatest common divisor, normalized to lex-leading coefficient one
/// (`z2` before `z1`). `gcd2(0, 0)` is zero.
///
/// Inputs are treated as polynomials in `z2` over `Q(i)(z1)`; the gcd of the
/// contents in `Q(i)[z1]` is combined with the last nonzero entry of a
/// primitive pseudo-remainder sequence.
pub fn gcd2(f: &BiPoly, g: &BiPoly) -> BiPoly {
    if f.is_zero() {
        return g.monic();
    }
    if g.is_zero() {
        return f.monic();
    }
    let fa = f.as_z2_coeffs();
    let ga = g.as_z2_coeffs();
    let cont = content(&fa).gcd(&content(&ga));
    let mut a = primitive_part(&fa);
    let mut b = primitive_part(&ga);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    let prim_gcd = loop {
        if b.len() == 1 {
            break vec![UniPoly::one()];
        }
        let r = pseudo_rem(&a, &b);
        if r.is_empty() {
            break b;
        }
        a = b;
        b = primitive_part(&r);
    };
    BiPoly::from_z1(&cont)
        .mul(&BiPoly::from_z2_coeffs(&prim_gcd))
        .monic()
}

/// Yun's algorithm with respect to `∂/∂z2` for a polynomial that is
/// primitive in `z2`.
fn yun_z2(a: &BiPoly) -> Vec<(BiPoly, u32)> {
    let mut out = Vec::new();
    if a.deg_z2() == 0 {
        return out;
    }
    let b = a.derivative_z2();
    let c = gcd2(a, &b);
    let mut w = a.div_exact(&c).expect("gcd divides");
    let mut y = b.div_exact(&c).expect("gcd divides");
    let mut z = y.sub(&w.derivative_z2());
    let mut i = 1;
    while !w.is_constant() {
        let g = gcd2(&w, &z);
        if !g.is_constant() {
            out.push((g.clone(), i));
        }
        w = w.div_exact(&g).expect("gcd divides");
        y = z.div_exact(&g).expect("gcd divides");
        z = y.sub(&w.derivative_z2());
        i += 1;
    }
    out
}

/// Square-free decomposition: pairwise coprime, square-free, monic factors
/// `f_i` with distinct multiplicities `m_i` such that `Π f_i^{m_i}` equals
/// `f` up to a constant.
///
/// The `z1`-content is handled by the univariate algorithm and the primitive
/// part by Yun's iteration in `z2`; factors of equal multiplicity are merged.
pub fn squarefree(f: &BiPoly) -> Result<Vec<(BiPoly, u32)>> {
    if f.is_zero() || f.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    let (cont, prim) = content_z1(f);
    let mut by_mult: std::collections::BTreeMap<u32, BiPoly> = Default::default();
    for (u, m) in cont.squarefree_decomposition() {
        let e = by_mult.entry(m).or_insert_with(BiPoly::one);
        *e = e.mul(&BiPoly::from_z1(&u));
    }
    for (g, m) in yun_z2(&prim) {
        let e = by_mult.entry(m).or_insert_with(BiPoly::one);
        *e = e.mul(&g);
    }
    Ok(by_mult.into_iter().map(|(m, g)| (g.monic(), m)).collect())
}

/// Product of the distinct factors of `f` (monic).
pub fn squarefree_part(f: &BiPoly) -> Result<BiPoly> {
    Ok(squarefree(f)?
        .into_iter()
        .fold(BiPoly::one(), |acc, (g, _)| acc.mul(&g))
        .monic())
}

fn determinant(mut m: Vec<Vec<GaussRational>>) -> GaussRational {
    let n = m.len();
    let mut det = GaussRational::one();
    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !m[r][col].is_zero())
            .min_by_key(|&r| m[r][col].height());
        let Some(p) = pivot else {
            return GaussRational::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let inv = m[col][col].inv().expect("nonzero pivot");
        det = &det * &m[col][col];
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] * &inv;
            for k in col..n {
                let t = &factor * &m[col][k];
                m[r][k] -= &t;
            }
        }
    }
    det
}

/// Sylvester matrix of `f, g` (coefficients listed from the highest power),
/// using the formal degrees `f.len() - 1` and `g.len() - 1`.
fn sylvester(f: &[GaussRational], g: &[GaussRational]) -> Vec<Vec<GaussRational>> {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    let mut s = vec![vec![GaussRational::zero(); size]; size];
    for i in 0..n {
        for j in 0..=m {
            s[i][i + j] = f[m - j].clone();
        }
    }
    for i in 0..m {
        for j in 0..=n {
            s[n + i][i + j] = g[n - j].clone();
        }
    }
    s
}

/// Exact Newton interpolation through `(xs[k], ys[k])`.
fn interpolate(xs: &[GaussRational], ys: &[GaussRational]) -> UniPoly {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for level in 1..n {
        for k in (level..n).rev() {
            let num = &dd[k] - &dd[k - 1];
            let den = &xs[k] - &xs[k - level];
            dd[k] = &num / &den;
        }
    }
    let mut poly = UniPoly::constant(dd[n - 1].clone());
    for k in (0..n - 1).rev() {
        poly = poly
            .mul(&UniPoly::linear_root(xs[k].clone()))
            .add(&UniPoly::constant(dd[k].clone()));
    }
    poly
}

/// Sylvester resultant with respect to `z2`, a polynomial in `z1`.
///
/// Computed by evaluating the Sylvester determinant (formal degrees
/// `deg_z2 f`, `deg_z2 g`) at integer points and interpolating exactly.
/// `Res(z2 - z1, z2 + z1) = 2 z1` fixes the sign convention.
pub fn resultant_z2(f: &BiPoly, g: &BiPoly) -> Result<UniPoly> {
    let m = f.deg_z2() as usize;
    let n = g.deg_z2() as usize;
    if m == 0 && n == 0 {
        return Err(Error::Z2Free);
    }
    if f.is_zero() || g.is_zero() {
        return Ok(UniPoly::zero());
    }
    let fa = f.as_z2_coeffs();
    let ga = g.as_z2_coeffs();
    let bound = n * f.deg_z1() as usize + m * g.deg_z1() as usize;
    let xs: Vec<GaussRational> = (0..=bound as i64).map(GaussRational::from_int).collect();
    let ys: Vec<GaussRational> = xs
        .iter()
        .map(|x| {
            let fv: Vec<_> = fa.iter().map(|u| u.eval(x)).collect();
            let gv: Vec<_> = ga.iter().map(|u| u.eval(x)).collect();
            determinant(sylvester(&fv, &gv))
        })
        .collect();
    Ok(interpolate(&xs, &ys))
}

/// `Res_{z2}(f, ∂f/∂z2)`: vanishes at the branch points of the projection
/// `(z1, z2) ↦ z1` restricted to `V(f)` and at zeros of the leading
/// coefficient.
pub fn branch_polynomial(f: &BiPoly) -> Result<UniPoly> {
    if f.deg_z2() == 0 {
        return Err(Error::Z2Free);
    }
    resultant_z2(f, &f.derivative_z2())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z1() -> BiPoly {
        BiPoly::z1()
    }
    fn z2() -> BiPoly {
        BiPoly::z2()
    }
    fn c(n: i64) -> BiPoly {
        BiPoly::constant(GaussRational::from_int(n))
    }
    fn u(cs: &[i64]) -> UniPoly {
        UniPoly::new(cs.iter().map(|&x| GaussRational::from_int(x)).collect())
    }

    #[test]
    fn gcd_common_factor() {
        let f = z2().pow(2).sub(&z1().pow(2));
        let g = z2().sub(&z1());
        assert_eq!(gcd2(&f, &g), z2().sub(&z1()));
    }

    #[test]
    fn gcd_coprime() {
        assert_eq!(gcd2(&z1(), &z2()), BiPoly::one());
    }

    #[test]
    fn gcd_divides_both_arguments() {
        let l = z2().sub(&z1());
        let f = l.pow(2).mul(&z2().add(&c(2)));
        let g = l.mul(&z1().sub(&c(3)));
        let d = gcd2(&f, &g);
        assert_eq!(d, l);
        assert!(f.div_exact(&d).is_some());
        assert!(g.div_exact(&d).is_some());
    }

    #[test]
    fn gcd_keeps_content() {
        let f = z1().mul(&z2().add(&c(1)));
        let g = z1().pow(2).mul(&z2().sub(&c(1)));
        assert_eq!(gcd2(&f, &g), z1());
    }

    #[test]
    fn squarefree_examples() {
        let l = z2().sub(&z1());
        assert_eq!(squarefree(&l.pow(2)).unwrap(), vec![(l.clone(), 2)]);
        let parabola = z2().pow(2).sub(&z1());
        assert_eq!(squarefree(&parabola).unwrap(), vec![(parabola.clone(), 1)]);
        let f = z1().pow(2).mul(&z2().add(&c(2)));
        assert_eq!(squarefree(&f).unwrap(), vec![(z2().add(&c(2)), 1), (z1(), 2)]);
        assert!(matches!(squarefree(&c(4)), Err(Error::ConstantPolynomial)));
    }

    #[test]
    fn resultant_examples() {
        let r = resultant_z2(&z2().pow(2).sub(&z1()), &z2().add(&c(2))).unwrap();
        assert_eq!(r, u(&[4, -1]));
        let r = resultant_z2(&z2().sub(&z1()), &z2().add(&z1())).unwrap();
        assert_eq!(r, u(&[0, 2]));
        let f = z2().pow(2).add(&z1().mul(&z2())).add(&c(3));
        assert!(resultant_z2(&f, &f).unwrap().is_zero());
        assert!(matches!(resultant_z2(&z1(), &c(2)), Err(Error::Z2Free)));
    }

    #[test]
    fn resultant_with_z2_free_argument() {
        // Res_{z2}(z1, z2) = z1
        assert_eq!(resultant_z2(&z1(), &z2()).unwrap(), u(&[0, 1]));
    }

    #[test]
    fn branch_polynomial_of_cusp() {
        // Res(z2^3 - z1^2, 3 z2^2) = 27 z1^4 (up to sign)
        let f = z2().pow(3).sub(&z1().pow(2));
        let b = branch_polynomial(&f).unwrap();
        assert_eq!(b.degree(), Some(4));
        assert_eq!(b.squarefree_part(), u(&[0, 1]));
    }
}
