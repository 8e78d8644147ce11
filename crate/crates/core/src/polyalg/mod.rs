//! Exact bivariate and univariate polynomial arithmetic over the Gaussian
//! rationals `Q(i)`, and conversion to floating-point form.

mod algebra;
mod bipoly;
pub mod gauss;
pub mod numeric;
pub mod text;
mod unipoly;

pub use algebra::{branch_polynomial, content_z1, gcd2, resultant_z2, squarefree, squarefree_part};
pub use bipoly::{BiPoly, Exponent};
pub use gauss::GaussRational;
pub use numeric::NumBiPoly;
pub use text::{parse_ideal, parse_poly};
pub use unipoly::UniPoly;
