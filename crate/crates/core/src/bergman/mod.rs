//! Bergman-space geometry of `Ω_{p,q}`: monomial norms, inner products,
//! the kernel diagonal, projection distances and dilation families.

mod density;
mod domain;
mod norms;
mod projection;
mod ratio;
pub mod sampling;

pub use density::{density_certificate, DensityCertificate, DensityOptions, DensityStatus, KernelBound};
pub use domain::DomainSpec;
pub use norms::{inner, inner_numeric, kernel_diag, ln_monomial_norm, monomial_norm, KernelDiag, MonomialNormTable};
pub use projection::{norm_numeric, projection_distance, projection_profile, ProjectionProfile};
pub use ratio::{
    check_r_grid, ratio_search, ratio_sup, Dilation, DilationFamily, DilationNorm, RatioBoundReport, RatioSearch,
    RatioWitness,
};

/// Default dilation parameters, spread over `(1/2, 1)`.
pub const DEFAULT_R_GRID: [f64; 7] = [0.51, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99];
