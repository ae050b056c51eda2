//! Flat `key = value` configuration files whose keys mirror
//! [`RecoveryConfig`]. Every key doubles as a command line flag, and flags
//! override the file.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::regularizers::ScaleSpec;
use crate::solver::{default_scales, RecoveryConfig, DEFAULT_LAMBDA};

pub const DEFAULT_SVT_ITERS: usize = 500;

/// Optional overrides of the size-dependent defaults. Unset keys keep the
/// value from [`RecoveryConfig::for_dims`].
#[derive(Debug, Clone, Default, PartialEq, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    /// Comma separated `p:q:lambda` triples, e.g. `2:1:0.015,8:4:0.015`.
    #[arg(long)]
    pub scales: Option<String>,
    /// Weight given to each default scale (ignored when `scales` is set).
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub rank_r: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub inner_tol: Option<f64>,
    #[arg(long)]
    pub inner_max_iters: Option<usize>,
    #[arg(long)]
    pub outer_eps: Option<f64>,
    #[arg(long)]
    pub outer_max_iters: Option<usize>,
    #[arg(long)]
    pub nuclear_weight: Option<f64>,
    #[arg(long)]
    pub ltv_lambda: Option<f64>,
    #[arg(long)]
    pub step_size: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Iterations of the singular value thresholding baseline.
    #[arg(long)]
    pub svt_iters: Option<usize>,
}

impl Settings {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io { path: path.to_path_buf(), source: e })?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {}", path.display(), e.message())))
    }

    /// `self` with every key set in `flags` replaced.
    pub fn overridden_by(self, flags: &Settings) -> Settings {
        Settings {
            scales: flags.scales.clone().or(self.scales),
            lambda: flags.lambda.or(self.lambda),
            gamma: flags.gamma.or(self.gamma),
            rank_r: flags.rank_r.or(self.rank_r),
            alpha: flags.alpha.or(self.alpha),
            delta: flags.delta.or(self.delta),
            inner_tol: flags.inner_tol.or(self.inner_tol),
            inner_max_iters: flags.inner_max_iters.or(self.inner_max_iters),
            outer_eps: flags.outer_eps.or(self.outer_eps),
            outer_max_iters: flags.outer_max_iters.or(self.outer_max_iters),
            nuclear_weight: flags.nuclear_weight.or(self.nuclear_weight),
            ltv_lambda: flags.ltv_lambda.or(self.ltv_lambda),
            step_size: flags.step_size.or(self.step_size),
            seed: flags.seed.or(self.seed),
            svt_iters: flags.svt_iters.or(self.svt_iters),
        }
    }

    /// The recovery configuration for an image of size `dims`.
    pub fn recovery_config(&self, dims: (usize, usize)) -> Result<RecoveryConfig> {
        let mut cfg = RecoveryConfig::for_dims(dims);
        cfg.scales = match &self.scales {
            Some(text) => parse_scales(text)?,
            None => default_scales(dims, self.lambda.unwrap_or(DEFAULT_LAMBDA)),
        };
        macro_rules! take {
            ($($field:ident),*) => {
                $(if let Some(v) = self.$field { cfg.$field = v; })*
            };
        }
        take!(
            gamma,
            rank_r,
            alpha,
            delta,
            inner_tol,
            inner_max_iters,
            outer_eps,
            outer_max_iters,
            nuclear_weight,
            ltv_lambda,
            seed
        );
        if self.step_size.is_some() {
            cfg.step_size = self.step_size;
        }
        cfg.validate(dims)?;
        Ok(cfg)
    }

    pub fn svt_iters(&self) -> usize {
        self.svt_iters.unwrap_or(DEFAULT_SVT_ITERS)
    }
}

/// Parses `p:q:lambda` triples separated by commas.
pub fn parse_scales(text: &str) -> Result<Vec<ScaleSpec>> {
    let bad = |item: &str| Error::Config(format!("scale {item:?} is not of the form p:q:lambda"));
    let mut scales = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = item.split(':').map(str::trim).collect();
        let [p, q, lambda] = parts[..] else {
            return Err(bad(item));
        };
        let p = p.parse().map_err(|_| bad(item))?;
        let q = q.parse().map_err(|_| bad(item))?;
        let lambda = lambda.parse().map_err(|_| bad(item))?;
        scales.push(ScaleSpec::new(p, q, lambda).map_err(|e| Error::Config(format!("scale {item:?}: {e}")))?);
    }
    Ok(scales)
}
