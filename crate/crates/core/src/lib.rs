//! Closure, density and irreducible decomposition of polynomial ideals in
//! Bergman spaces of the Reinhardt domains `Ω_{p,q} = {|z1|^p + |z2|^q < 1}`.
//!
//! The `book/` directory walks through each module; its snippets run as
//! doctests.

pub mod bergman;
pub mod classify;
pub mod config;
pub mod decompose;
pub mod error;
pub mod hopf;
pub mod optim;
pub mod polyalg;
pub mod qmc;
pub mod report;
pub mod rootfind;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    mod polynomials {}
    #[doc = include_str!("../../../book/src/norms.md")]
    mod norms {}
    #[doc = include_str!("../../../book/src/density.md")]
    mod density {}
    #[doc = include_str!("../../../book/src/decompose.md")]
    mod decompose {}
    #[doc = include_str!("../../../book/src/classify.md")]
    mod classify {}
    #[doc = include_str!("../../../book/src/hopf.md")]
    mod hopf {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
