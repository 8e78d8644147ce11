//! Run configuration shared by every command and embedded in every report.

use serde::{Deserialize, Serialize};

use crate::bergman::{DomainSpec, DEFAULT_R_GRID};
use crate::classify::{ClassifyConfig, DensitySettings};
use crate::decompose::DecomposeConfig;
use crate::error::{Error, Result};
use crate::hopf::HopfConfig;
use crate::rootfind::{RootFinder, TrackConfig};

pub const SEED_ENV: &str = "NULLSATZ_SEED";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub seed: u64,
    pub tol_res: f64,
    pub tol_point: f64,
    pub tol_circle: f64,
    pub delta: f64,
    /// Quasi-random samples for ratio sups and dilation norms.
    pub samples: usize,
    pub r_grid: Vec<f64>,
    pub n_max: u32,
    pub alpha_grid: usize,
    pub hopf_candidates: usize,
    pub grid_pitch: f64,
    pub domain: DomainSpec,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            tol_res: 1e-10,
            tol_point: 1e-8,
            tol_circle: 1e-6,
            delta: 1e-6,
            samples: 100_000,
            r_grid: DEFAULT_R_GRID.to_vec(),
            n_max: 20,
            alpha_grid: 4096,
            hopf_candidates: 512,
            grid_pitch: 0.01,
            domain: DomainSpec::ball(),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("tol_res", self.tol_res),
            ("tol_point", self.tol_point),
            ("tol_circle", self.tol_circle),
            ("delta", self.delta),
            ("grid_pitch", self.grid_pitch),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidConfig(format!("{name} = {v} must be positive")));
            }
        }
        if self.delta >= 1.0 {
            return Err(Error::InvalidConfig("delta must be below 1".into()));
        }
        if self.samples == 0 || self.hopf_candidates == 0 || self.alpha_grid < 3 {
            return Err(Error::InvalidConfig(
                "samples and hopf_candidates must be positive, alpha_grid at least 3".into(),
            ));
        }
        crate::bergman::check_r_grid(&self.r_grid)?;
        DomainSpec::new(self.domain.p, self.domain.q)?;
        Ok(())
    }

    /// Replaces the seed with `NULLSATZ_SEED` when that variable is set.
    pub fn apply_env(&mut self) -> Result<()> {
        match std::env::var(SEED_ENV) {
            Ok(s) => {
                self.seed = s
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidConfig(format!("{SEED_ENV}={s:?} is not an unsigned integer")))?;
                Ok(())
            }
            Err(std::env::VarError::NotPresent) => Ok(()),
            Err(e) => Err(Error::InvalidConfig(format!("{SEED_ENV}: {e}"))),
        }
    }

    pub fn track_config(&self) -> TrackConfig {
        TrackConfig {
            roots: RootFinder {
                tol_res: self.tol_res,
                ..RootFinder::default()
            },
            ..TrackConfig::default()
        }
    }

    pub fn decompose_config(&self) -> DecomposeConfig {
        DecomposeConfig {
            seed: self.seed,
            tol_point: self.tol_point,
            track: self.track_config(),
            ..DecomposeConfig::default()
        }
    }

    pub fn classify_config(&self, with_certificate: bool) -> ClassifyConfig {
        ClassifyConfig {
            delta: self.delta,
            grid_pitch: self.grid_pitch,
            decompose: self.decompose_config(),
            density: with_certificate.then(|| DensitySettings {
                n_max: self.n_max,
                r_grid: self.r_grid.clone(),
                samples: self.samples,
            }),
            ..ClassifyConfig::default()
        }
    }

    pub fn hopf_config(&self) -> HopfConfig {
        HopfConfig {
            seed: self.seed,
            candidates: self.hopf_candidates,
            alpha_grid: self.alpha_grid,
            tol_circle: self.tol_circle,
        }
    }
}
