use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regularizers::ScaleSpec;

pub const DEFAULT_LAMBDA: f64 = 1.5e-2;
pub const DEFAULT_GAMMA: f64 = 0.5;
pub const DEFAULT_ALPHA: f64 = 1e-3;
pub const DEFAULT_DELTA: f64 = 0.1;
pub const DEFAULT_INNER_TOL: f64 = 1e-4;
pub const DEFAULT_INNER_MAX_ITERS: usize = 200;
pub const DEFAULT_OUTER_EPS: f64 = 1e-8;
pub const DEFAULT_OUTER_MAX_ITERS: usize = 50;

/// Parameters of the DCT-norm recovery objective and its iteration schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveryConfig {
    pub scales: Vec<ScaleSpec>,
    /// Weight of the data fidelity term.
    pub gamma: f64,
    /// Number of leading singular values left unpenalized.
    pub rank_r: usize,
    /// Weight of the cross-channel frequency coupling (color only).
    pub alpha: f64,
    /// Relaxation of the outer observation update, in `(0, 1]`; 0 disables it.
    pub delta: f64,
    pub inner_tol: f64,
    pub inner_max_iters: usize,
    pub outer_eps: f64,
    pub outer_max_iters: usize,
    /// Weight of the truncated nuclear norm.
    pub nuclear_weight: f64,
    /// Smoothness weight used by the linear-TV baseline.
    pub ltv_lambda: f64,
    /// Overrides the Lipschitz-derived gradient step when set.
    pub step_size: Option<f64>,
    pub seed: u64,
}

/// `ceil(3n/8)`: the global cutoff and truncation rank used at size `n`.
pub fn three_eighths(n: usize) -> usize {
    (3 * n).div_ceil(8).max(1)
}

/// The default scale set for an `N x M` image: a 2x2 local scale, an 8x8
/// block scale and one whole-image scale, de-duplicated for tiny images.
pub fn default_scales(dims: (usize, usize), lambda: f64) -> Vec<ScaleSpec> {
    let n = dims.0.min(dims.1);
    let mut scales: Vec<ScaleSpec> = Vec::new();
    for (p, q) in [(2, 1), (8, 4), (n, three_eighths(n))] {
        if p > n || scales.iter().any(|s| s.p == p) {
            continue;
        }
        scales.push(ScaleSpec { p, q: q.min(p), lambda });
    }
    scales
}

impl RecoveryConfig {
    /// Defaults scaled to an image of the given size.
    pub fn for_dims(dims: (usize, usize)) -> Self {
        let n = dims.0.min(dims.1);
        Self {
            scales: default_scales(dims, DEFAULT_LAMBDA),
            gamma: DEFAULT_GAMMA,
            rank_r: three_eighths(n).min(n),
            alpha: DEFAULT_ALPHA,
            delta: DEFAULT_DELTA,
            inner_tol: DEFAULT_INNER_TOL,
            inner_max_iters: DEFAULT_INNER_MAX_ITERS,
            outer_eps: DEFAULT_OUTER_EPS,
            outer_max_iters: DEFAULT_OUTER_MAX_ITERS,
            nuclear_weight: 1.0,
            ltv_lambda: DEFAULT_LAMBDA,
            step_size: None,
            seed: 0,
        }
    }

    pub fn validate(&self, dims: (usize, usize)) -> Result<()> {
        for s in &self.scales {
            s.check_dims(dims)?;
        }
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive and finite, got {v}")))
            }
        };
        let nonnegative = |name: &str, v: f64| {
            if v >= 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be nonnegative and finite, got {v}")))
            }
        };
        positive("gamma", self.gamma)?;
        positive("inner_tol", self.inner_tol)?;
        positive("outer_eps", self.outer_eps)?;
        nonnegative("alpha", self.alpha)?;
        nonnegative("nuclear_weight", self.nuclear_weight)?;
        nonnegative("ltv_lambda", self.ltv_lambda)?;
        if !(0.0..=1.0).contains(&self.delta) {
            return Err(Error::Config(format!("delta must lie in [0, 1], got {}", self.delta)));
        }
        if let Some(step) = self.step_size {
            positive("step_size", step)?;
        }
        let max_rank = dims.0.min(dims.1);
        if self.rank_r > max_rank {
            return Err(Error::InvalidRank { rank: self.rank_r, max: max_rank });
        }
        if self.inner_max_iters == 0 || self.outer_max_iters == 0 {
            return Err(Error::Config("iteration caps must be at least 1".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_at_512_match_reported_settings() {
        let cfg = RecoveryConfig::for_dims((512, 512));
        let pq: Vec<_> = cfg.scales.iter().map(|s| (s.p, s.q)).collect();
        assert_eq!(pq, vec![(2, 1), (8, 4), (512, 192)]);
        assert_eq!(cfg.rank_r, 192);
        assert_eq!(cfg.gamma, 0.5);
        assert_eq!(cfg.alpha, 1e-3);
        assert_eq!(cfg.delta, 0.1);
        assert_eq!(cfg.outer_eps, 1e-8);
        assert!(cfg.scales.iter().all(|s| s.lambda == 1.5e-2));
        cfg.validate((512, 512)).unwrap();
    }

    #[test]
    fn small_images_get_deduplicated_scales() {
        let pq: Vec<_> = default_scales((8, 8), 1.0).iter().map(|s| (s.p, s.q)).collect();
        assert_eq!(pq, vec![(2, 1), (8, 4)]);
        let pq: Vec<_> = default_scales((5, 9), 1.0).iter().map(|s| (s.p, s.q)).collect();
        assert_eq!(pq, vec![(2, 1), (5, 2)]);
        assert_eq!(three_eighths(64), 24);
    }

    #[test]
    fn validation_rejects_bad_values() {
        let dims = (16, 16);
        let mut cfg = RecoveryConfig::for_dims(dims);
        cfg.gamma = 0.0;
        assert!(cfg.validate(dims).is_err());
        let mut cfg = RecoveryConfig::for_dims(dims);
        cfg.delta = 1.5;
        assert!(cfg.validate(dims).is_err());
        let mut cfg = RecoveryConfig::for_dims(dims);
        cfg.rank_r = 17;
        assert!(matches!(cfg.validate(dims), Err(Error::InvalidRank { .. })));
        let cfg = RecoveryConfig::for_dims((64, 64));
        assert!(matches!(cfg.validate(dims), Err(Error::ScaleTooLarge { .. })));
    }
}
