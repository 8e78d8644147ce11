use num_complex::Complex64;
use serde::Serialize;

use super::ratio::{check_r_grid, Dilation, DilationFamily, DilationNorm};
use super::{kernel_diag, monomial_norm, projection_profile, DomainSpec, MonomialNormTable, ProjectionProfile};
use crate::error::{Error, Result};
use crate::polyalg::BiPoly;

/// `d_N` or `‖1 − f_r‖` at or below this fraction of `‖1‖` counts as
/// evidence of density.
pub const DENSE_FRACTION: f64 = 1e-2;
pub const KERNEL_TOL: f64 = 1e-15;
/// Slack when comparing `d_N` with the kernel lower bound.
pub const LOWER_BOUND_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DensityStatus {
    Dense,
    NotDense,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelBound {
    pub zero: (Complex64, Complex64),
    /// `K(w, w)^{-1/2}`.
    pub value: f64,
    pub kernel_shells: usize,
    /// Every `d_N ≥ value − slack`.
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityCertificate {
    pub polynomial: BiPoly,
    pub domain: DomainSpec,
    /// `‖1‖ = ν₀₀^{1/2}`.
    pub norm_of_one: f64,
    pub profile: ProjectionProfile,
    pub dilation_profile: Vec<DilationNorm>,
    pub kernel_lower_bound: Option<KernelBound>,
    pub samples: usize,
    pub seed: u64,
    pub status: DensityStatus,
}

pub struct DensityOptions<'a> {
    pub n_max: u32,
    pub r_grid: &'a [f64],
    pub samples: usize,
    pub seed: u64,
    /// A known zero of `p` inside `Ω`.
    pub zero: Option<(Complex64, Complex64)>,
}

pub fn density_certificate(p: &BiPoly, domain: &DomainSpec, opts: &DensityOptions<'_>) -> Result<DensityCertificate> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    check_r_grid(opts.r_grid)?;
    let table = MonomialNormTable::new(*domain, p.total_degree() + opts.n_max);
    let profile = projection_profile(p, opts.n_max, &table)?;
    let mut r_sorted = opts.r_grid.to_vec();
    r_sorted.sort_by(f64::total_cmp);
    let dilation_profile = r_sorted
        .iter()
        .map(|&r| Ok(DilationFamily::new(p, r, Dilation::Full)?.distance_from_one(domain, opts.samples, opts.seed)))
        .collect::<Result<Vec<_>>>()?;
    let norm_of_one = monomial_norm(domain, 0, 0).sqrt();

    let kernel_lower_bound = opts
        .zero
        .map(|w| -> Result<KernelBound> {
            let k = kernel_diag(domain, w, KERNEL_TOL)?;
            let value = k.value.powf(-0.5);
            let holds = profile.distances.iter().all(|&(_, d)| d >= value - LOWER_BOUND_SLACK);
            Ok(KernelBound {
                zero: w,
                value,
                kernel_shells: k.shells,
                holds,
            })
        })
        .transpose()?;

    let threshold = DENSE_FRACTION * norm_of_one;
    let dilation_converges = dilation_profile.windows(2).all(|w| w[1].value <= w[0].value)
        && dilation_profile.last().is_some_and(|n| n.value <= threshold);
    let status = match &kernel_lower_bound {
        Some(k) if k.holds => DensityStatus::NotDense,
        Some(_) => DensityStatus::Inconclusive,
        None if profile.last() <= threshold || dilation_converges => DensityStatus::Dense,
        None => DensityStatus::Inconclusive,
    };
    Ok(DensityCertificate {
        polynomial: p.clone(),
        domain: *domain,
        norm_of_one,
        profile,
        dilation_profile,
        kernel_lower_bound,
        samples: opts.samples,
        seed: opts.seed,
        status,
    })
}
